#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypecast/game_model.hpp"

namespace hypecast {

/// Actions ranked by damage; ranked attacks get a boosted action cue.
/// Ranks must be unique and contiguous from 1.
class RankActTable {
public:
    explicit RankActTable(std::vector<std::pair<std::string, int>> entries);

    /// The four FightingICE ranked actions (special skill, strong upper,
    /// sliding kick, strong projectile).
    static const RankActTable& fighting_ice_defaults();

    std::optional<int> rank_of(std::string_view action_id) const;
    const std::vector<std::pair<std::string, int>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, int>> entries_;
};

/// Fusion weights for the three cues; must be in [0,1] and sum to 1.
struct CueWeights {
    double w_score = 1.0 / 3.0;
    double w_action = 1.0 / 3.0;
    double w_distance = 1.0 / 3.0;

    static CueWeights equal() { return {}; }
};

void validate(const CueWeights& w);

/// Running maximum of |x1 - x2| within the current round.
struct RoundTracker {
    double max_abs_dx = 0.0;

    void reset() { max_abs_dx = 0.0; }
};

struct HighlightCues {
    double score = 0.0;
    double action = 0.0;
    double distance = 0.0;
    double highlight = 0.0;
};

/// Normalized sum of both players' lost HP: (initial - 0.5*(hp1 + hp2)) / initial.
/// 0 when both are at full health, 1 when both are eliminated.
double rhp(int hp1, int hp2, int initial_hp);

/// (round_time / duration) * rhp_value; grows toward the end of a close round.
double score_cue(double round_time_s, double duration_s, double rhp_value);

/// 1/2 + 2^-rank for ranked attacks, 1/2 for other attacks, 0 otherwise.
double action_cue(std::string_view action_id, bool is_attack, const RankActTable& table);

/// 1 - |x1 - x2| / max so far this round; the tracker is updated first, so the
/// widest separation seen yields 0. Coincident players with no prior
/// separation count as maximal closeness (1).
double distance_cue(double x1, double x2, RoundTracker& tracker);

/// Weighted fusion of the three cues. Throws std::domain_error when a cue is
/// outside [0,1] (an upstream normalization bug), ConfigError for bad weights.
double highlight(double score, double action, double distance, const CueWeights& w);

/// Full per-frame evaluation. The action cue takes the stronger of the two
/// players' per-action values on this frame.
HighlightCues evaluate_frame(const FrameSnapshot& s, const RoundConfig& cfg,
                             const RankActTable& table, const CueWeights& w,
                             RoundTracker& tracker);

}  // namespace hypecast
