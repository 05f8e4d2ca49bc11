#pragma once

#include <iosfwd>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hypecast/game_model.hpp"
#include "hypecast/highlight.hpp"

namespace hypecast {

enum class EventKind {
    AttackStarted,
    RankedAttackStarted,
    HitLanded,
    BigHpDrop,
    RoundNearEnd,
    CloseQuarters,
    Neutral,
};

const char* to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

enum class PlayerId { None, P1, P2 };

struct GameEvent {
    EventKind kind = EventKind::Neutral;
    PlayerId attacker = PlayerId::None;
    std::string skill_name;
};

struct EventThresholds {
    int big_hp_drop = 30;               // HP points lost in one frame
    double round_near_end_frac = 0.8;   // fraction of round duration
    double close_quarters_distance = 0.9;
};

/// Display name for an action id ("STAND_D_DF_FC" -> "Special Skill").
/// Unknown ids fall back to the id with underscores spaced out.
std::string skill_display_name(std::string_view action_id);

/// Events observed between two consecutive frames of the same round.
/// Neutral is returned iff nothing else fired. Throws SequencingError when
/// the frames are not consecutive.
std::vector<GameEvent> detect_events(const FrameSnapshot& prev, const FrameSnapshot& curr,
                                     const HighlightCues& cues, const RankActTable& table,
                                     const EventThresholds& thresholds, const RoundConfig& cfg);

/// Parameterized commentary sentence. Placeholders: {P1} {P2} {ATTACKER}
/// {DEFENDER} {SKILL}. The band is the highlight interval the sentence suits;
/// [lo, hi) except that hi >= 1 closes the top end.
struct Template {
    int id = 0;
    std::string pattern;
    std::set<EventKind> tags;
    double band_lo = 0.0;
    double band_hi = 1.0;

    bool band_contains(double h) const {
        return h >= band_lo && (h < band_hi || (band_hi >= 1.0 && h <= band_hi));
    }
};

class TemplateLibrary {
public:
    explicit TemplateLibrary(std::vector<Template> templates);

    /// The bundled library (30+ sentences covering every event kind and band).
    static TemplateLibrary builtin();

    /// One JSON object per line: {"id":int,"pattern":str,"tags":[str],"band":[lo,hi]}
    static TemplateLibrary load_jsonl(std::istream& in);

    const std::vector<Template>& templates() const { return templates_; }

private:
    std::vector<Template> templates_;
};

/// Candidates are templates whose tags intersect the event kinds and whose
/// band contains h; if none, the band constraint is dropped, then Neutral
/// templates stand in. Picks uniformly with the caller's rng and never repeats
/// previous_id when at least two candidates remain.
const Template& select_template(const std::vector<GameEvent>& events, double h,
                                const TemplateLibrary& lib, std::mt19937_64& rng,
                                std::optional<int> previous_id);

struct RenderContext {
    std::string p1_name;
    std::string p2_name;
    PlayerId attacker = PlayerId::None;
    std::string skill_name;
};

/// Substitutes every placeholder; the result never contains braces.
/// Throws RenderError naming the placeholder that could not be resolved.
std::string render(const Template& t, const RenderContext& ctx);

}  // namespace hypecast
