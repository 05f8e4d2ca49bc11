#include "hypecast/game_model.hpp"

#include <istream>
#include <sstream>

#include <json.hpp>

namespace hypecast {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != 0) out += sep;
        out += parts[i];
    }
    return out;
}

const json& require_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(0, std::string("missing field \"") + key + "\"");
    return *it;
}

PlayerState parse_player(const json& j, const char* who) {
    if (!j.is_object()) throw ParseError(0, std::string(who) + " is not an object");
    PlayerState p;
    const json& hp = require_field(j, "hp");
    if (!hp.is_number_integer()) throw ParseError(0, std::string(who) + ".hp is not an integer");
    p.hp = hp.get<int>();
    const json& x = require_field(j, "x");
    if (!x.is_number()) throw ParseError(0, std::string(who) + ".x is not a number");
    p.x_pos = x.get<double>();
    const json& action = require_field(j, "action");
    if (!action.is_string()) throw ParseError(0, std::string(who) + ".action is not a string");
    p.action_id = action.get<std::string>();
    const json& attack = require_field(j, "attack");
    if (!attack.is_boolean()) throw ParseError(0, std::string(who) + ".attack is not a boolean");
    p.is_attack = attack.get<bool>();
    return p;
}

ordered_json player_json(const PlayerState& p) {
    return {{"hp", p.hp}, {"x", p.x_pos}, {"action", p.action_id}, {"attack", p.is_attack}};
}

}  // namespace

void validate(const RoundConfig& cfg) {
    if (cfg.initial_hp <= 0) throw ConfigError("initial_hp must be positive");
    if (cfg.round_duration_s <= 0.0) throw ConfigError("round_duration_s must be positive");
    if (cfg.fps <= 0.0) throw ConfigError("fps must be positive");
    if (cfg.stage_width <= 0.0) throw ConfigError("stage_width must be positive");
}

std::vector<std::string> validate_frame(const FrameSnapshot& s, const RoundConfig& cfg) {
    std::vector<std::string> violations;
    auto check_player = [&](const PlayerState& p, const char* who) {
        if (p.hp < 0) violations.push_back(std::string(who) + " hp is negative");
        if (p.hp > cfg.initial_hp) violations.push_back(std::string(who) + " hp exceeds initial_hp");
        if (p.x_pos < 0.0) violations.push_back(std::string(who) + " x_pos is negative");
        if (p.x_pos > cfg.stage_width)
            violations.push_back(std::string(who) + " x_pos exceeds stage_width");
    };
    check_player(s.p1, "p1");
    check_player(s.p2, "p2");
    if (s.round_time_s < 0.0) violations.push_back("round_time_s is negative");
    if (s.round_time_s > cfg.round_duration_s)
        violations.push_back("round_time_s exceeds round_duration_s");
    if (s.round_index < 0) violations.push_back("round_index is negative");
    return violations;
}

std::string serialize_frame(const FrameSnapshot& s) {
    ordered_json j{{"frame", s.frame_index},
                   {"round", s.round_index},
                   {"t", s.round_time_s},
                   {"p1", player_json(s.p1)},
                   {"p2", player_json(s.p2)}};
    return j.dump();
}

FrameSnapshot parse_frame_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(0, "record is not a JSON object");

    FrameSnapshot s;
    const json& frame = require_field(j, "frame");
    if (!frame.is_number_integer() || (frame.is_number_integer() && frame.get<std::int64_t>() < 0))
        throw ParseError(0, "frame must be a non-negative integer");
    s.frame_index = frame.get<std::uint64_t>();
    const json& round = require_field(j, "round");
    if (!round.is_number_integer()) throw ParseError(0, "round must be an integer");
    s.round_index = round.get<int>();
    const json& t = require_field(j, "t");
    if (!t.is_number()) throw ParseError(0, "t must be a number");
    s.round_time_s = t.get<double>();
    s.p1 = parse_player(require_field(j, "p1"), "p1");
    s.p2 = parse_player(require_field(j, "p2"), "p2");
    return s;
}

FrameLogReader::FrameLogReader(std::istream& in, RoundConfig cfg) : in_(&in), cfg_(cfg) {
    validate(cfg_);
}

std::optional<LogItem> FrameLogReader::next() {
    if (pending_) {
        FrameSnapshot f = std::move(*pending_);
        pending_.reset();
        return LogItem{std::move(f)};
    }
    std::string text;
    while (std::getline(*in_, text)) {
        ++line_;
        if (text.empty()) continue;

        FrameSnapshot f;
        try {
            f = parse_frame_line(text);
        } catch (const ParseError& e) {
            throw ParseError(line_, e.what());
        }
        auto violations = validate_frame(f, cfg_);
        if (!violations.empty()) throw ValidationError(line_, join(violations, "; "));

        bool boundary = at_start_;
        if (!at_start_) {
            if (f.frame_index <= prev_frame_)
                throw SequencingError(line_, "frame_index " + std::to_string(f.frame_index) +
                                                 " does not increase past " +
                                                 std::to_string(prev_frame_));
            if (f.round_index < prev_round_)
                throw SequencingError(line_, "round_index decreased");
            boundary = f.round_index > prev_round_ || f.round_time_s < prev_time_;
        }
        at_start_ = false;
        prev_frame_ = f.frame_index;
        prev_round_ = f.round_index;
        prev_time_ = f.round_time_s;

        if (boundary) {
            RoundStart marker{f.round_index, f.frame_index};
            pending_ = std::move(f);
            return LogItem{marker};
        }
        return LogItem{std::move(f)};
    }
    return std::nullopt;
}

std::vector<LogItem> read_frame_log(std::istream& in, const RoundConfig& cfg) {
    FrameLogReader reader(in, cfg);
    std::vector<LogItem> items;
    while (auto item = reader.next()) items.push_back(std::move(*item));
    return items;
}

}  // namespace hypecast
