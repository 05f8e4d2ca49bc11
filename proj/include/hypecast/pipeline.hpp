#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hypecast/commentary.hpp"
#include "hypecast/game_model.hpp"
#include "hypecast/highlight.hpp"
#include "hypecast/phonetics.hpp"

namespace hypecast {

// One scheduled line of commentary, frozen at emission time.
struct CommentaryDirective {
    std::uint64_t frame_index = 0;
    int round_index = 0;
    double round_time_s = 0.0;
    std::string text;
    PhoneticParams phonetics;
    double highlight = 0.0;
    Design design = Design::D1;
};

bool operator==(const CommentaryDirective& a, const CommentaryDirective& b);

// Rough speaking-time model: ~2.5 words per second plus fixed lead-in,
// never less than a second.
double estimate_duration(const std::string& text);

std::string serialize_directive(const CommentaryDirective& d);
CommentaryDirective parse_directive(const std::string& line);
void write_script(std::ostream& out, const std::vector<CommentaryDirective>& directives);

struct PipelineConfig {
    RoundConfig round;
    CueWeights weights;
    Design design = Design::D2;
    PhoneticRange pitch_range = default_pitch_range();
    VolumeConfig volume;
    EventThresholds thresholds;
    RankActTable rank_table = RankActTable::fighting_ice_defaults();
    std::string p1_name = "Zen";
    std::string p2_name = "Garnet";
    double neutral_cadence_s = 6.0;
    std::uint64_t seed = 0;
};

void validate(const PipelineConfig& cfg);

// Drives the observe -> detect -> compose -> vocalize loop over a frame
// stream. Emission is gated on the utterance state: while a line is
// "speaking" nothing new is produced, so directives never overlap.
class Scheduler {
public:
    Scheduler(PipelineConfig cfg, const TemplateLibrary& library);

    void start_round(const RoundStart& rs);
    std::optional<CommentaryDirective> tick(const FrameSnapshot& frame);
    std::optional<CommentaryDirective> tick(const LogItem& item);

    // Playback-completion signal from the audio side; safe to call from
    // another thread.
    void notify_playback_finished();

    bool speaking() const { return speaking_until_.has_value(); }
    const PipelineConfig& config() const { return cfg_; }

private:
    std::optional<CommentaryDirective> emit(const FrameSnapshot& frame,
                                            const std::vector<GameEvent>& events,
                                            const HighlightCues& cues);

    PipelineConfig cfg_;
    const TemplateLibrary& library_;
    std::mt19937_64 rng_;
    RoundTracker tracker_;
    std::optional<FrameSnapshot> prev_frame_;
    std::optional<double> speaking_until_;
    double idle_since_ = 0.0;
    std::optional<int> prev_template_id_;
    std::atomic<bool> playback_finished_{false};
    bool warned_band_ = false;
};

std::vector<CommentaryDirective> run_pipeline(const std::vector<LogItem>& items,
                                              const PipelineConfig& cfg,
                                              const TemplateLibrary& library);
std::vector<CommentaryDirective> run_pipeline(std::istream& log, const PipelineConfig& cfg,
                                              const TemplateLibrary& library);

}  // namespace hypecast
