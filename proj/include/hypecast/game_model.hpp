#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hypecast/errors.hpp"

namespace hypecast {

/// Round rules of the telemetry source (FightingICE defaults: 200 HP,
/// 60 s rounds, 60 fps). stage_width is only used for position validation.
struct RoundConfig {
    int initial_hp = 200;
    double round_duration_s = 60.0;
    double fps = 60.0;
    double stage_width = 960.0;
};

/// Throws ConfigError unless every field is positive.
void validate(const RoundConfig& cfg);

struct PlayerState {
    int hp = 0;
    double x_pos = 0.0;
    std::string action_id;
    bool is_attack = false;
};

/// One frame of telemetry for both players.
struct FrameSnapshot {
    std::uint64_t frame_index = 0;
    int round_index = 0;
    double round_time_s = 0.0;
    PlayerState p1;
    PlayerState p2;
};

/// Marker emitted before the first frame of every round segment, so per-round
/// state downstream (utterance gate, distance tracker) resets deterministically.
struct RoundStart {
    int round_index = 0;
    std::uint64_t first_frame_index = 0;
};

using LogItem = std::variant<RoundStart, FrameSnapshot>;

/// Every violated range invariant of the frame, not just the first.
/// Empty result means the frame is valid under cfg.
std::vector<std::string> validate_frame(const FrameSnapshot& s, const RoundConfig& cfg);

/// Canonical single-line JSON form of a frame (no trailing newline).
/// parse_frame_line(serialize_frame(s)) reproduces s byte-exactly on re-serialization.
std::string serialize_frame(const FrameSnapshot& s);

/// Parses one canonical log line. Throws ParseError (line number 0) on
/// malformed input; performs no range validation.
FrameSnapshot parse_frame_line(const std::string& line);

/// Streaming reader over a line-delimited JSON frame log.
///
/// Yields a RoundStart marker at stream start and whenever the round index
/// increments or the round clock moves backwards. Frames must keep a strictly
/// increasing frame_index across the whole stream. Blank lines are skipped.
/// Throws ParseError / SequencingError / ValidationError carrying the
/// offending 1-based line number; arbitrary input bytes never crash the reader.
class FrameLogReader {
public:
    FrameLogReader(std::istream& in, RoundConfig cfg);

    /// Next marker or frame; nullopt at end of input.
    std::optional<LogItem> next();

    std::size_t line() const { return line_; }

private:
    std::istream* in_;
    RoundConfig cfg_;
    std::size_t line_ = 0;
    bool at_start_ = true;
    std::uint64_t prev_frame_ = 0;
    int prev_round_ = 0;
    double prev_time_ = 0.0;
    std::optional<FrameSnapshot> pending_;
};

/// Reads a whole log into memory. Convenience for offline runs and tests.
std::vector<LogItem> read_frame_log(std::istream& in, const RoundConfig& cfg);

}  // namespace hypecast
