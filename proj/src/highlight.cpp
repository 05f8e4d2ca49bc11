#include "hypecast/highlight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypecast {

RankActTable::RankActTable(std::vector<std::pair<std::string, int>> entries)
    : entries_(std::move(entries)) {
    // ranks must be exactly 1..N, in any order, with unique action ids
    std::vector<bool> seen(entries_.size(), false);
    for (const auto& [action, rank] : entries_) {
        if (rank < 1 || static_cast<std::size_t>(rank) > entries_.size())
            throw ConfigError("RankAct ranks must be contiguous from 1");
        if (seen[static_cast<std::size_t>(rank) - 1])
            throw ConfigError("duplicate RankAct rank " + std::to_string(rank));
        seen[static_cast<std::size_t>(rank) - 1] = true;
        for (const auto& [other, other_rank] : entries_) {
            if (&other != &action && other == action)
                throw ConfigError("duplicate RankAct action " + action);
        }
    }
}

const RankActTable& RankActTable::fighting_ice_defaults() {
    static const RankActTable table({{"STAND_D_DF_FC", 1},
                                     {"STAND_F_D_DFB", 2},
                                     {"STAND_D_DB_BB", 3},
                                     {"STAND_D_DF_FB", 4}});
    return table;
}

std::optional<int> RankActTable::rank_of(std::string_view action_id) const {
    for (const auto& [action, rank] : entries_)
        if (action == action_id) return rank;
    return std::nullopt;
}

void validate(const CueWeights& w) {
    for (double v : {w.w_score, w.w_action, w.w_distance})
        if (v < 0.0 || v > 1.0) throw ConfigError("cue weights must be in [0,1]");
    if (std::fabs(w.w_score + w.w_action + w.w_distance - 1.0) > 1e-9)
        throw ConfigError("cue weights must sum to 1");
}

double rhp(int hp1, int hp2, int initial_hp) {
    if (initial_hp <= 0) throw ConfigError("initial_hp must be positive");
    return (initial_hp - 0.5 * (hp1 + hp2)) / initial_hp;
}

double score_cue(double round_time_s, double duration_s, double rhp_value) {
    if (duration_s <= 0.0) throw ConfigError("round duration must be positive");
    return (round_time_s / duration_s) * rhp_value;
}

double action_cue(std::string_view action_id, bool is_attack, const RankActTable& table) {
    if (!is_attack) return 0.0;
    if (auto rank = table.rank_of(action_id)) return 0.5 + std::ldexp(1.0, -*rank);
    return 0.5;
}

double distance_cue(double x1, double x2, RoundTracker& tracker) {
    double dx = std::fabs(x1 - x2);
    tracker.max_abs_dx = std::max(tracker.max_abs_dx, dx);
    if (tracker.max_abs_dx == 0.0) return 1.0;
    return 1.0 - dx / tracker.max_abs_dx;
}

double highlight(double score, double action, double distance, const CueWeights& w) {
    validate(w);
    for (double cue : {score, action, distance})
        if (!(cue >= 0.0 && cue <= 1.0))
            throw std::domain_error("highlight cue outside [0,1]");
    return w.w_score * score + w.w_action * action + w.w_distance * distance;
}

HighlightCues evaluate_frame(const FrameSnapshot& s, const RoundConfig& cfg,
                             const RankActTable& table, const CueWeights& w,
                             RoundTracker& tracker) {
    HighlightCues cues;
    cues.score = score_cue(s.round_time_s, cfg.round_duration_s,
                           rhp(s.p1.hp, s.p2.hp, cfg.initial_hp));
    cues.action = std::max(action_cue(s.p1.action_id, s.p1.is_attack, table),
                           action_cue(s.p2.action_id, s.p2.is_attack, table));
    cues.distance = distance_cue(s.p1.x_pos, s.p2.x_pos, tracker);
    cues.highlight = highlight(cues.score, cues.action, cues.distance, w);
    return cues;
}

}  // namespace hypecast
