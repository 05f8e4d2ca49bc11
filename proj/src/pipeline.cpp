#include "hypecast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace hypecast {

bool operator==(const CommentaryDirective& a, const CommentaryDirective& b) {
    return a.frame_index == b.frame_index && a.round_index == b.round_index &&
           a.round_time_s == b.round_time_s && a.text == b.text &&
           a.phonetics.pitch == b.phonetics.pitch &&
           a.phonetics.volume_gain_db == b.phonetics.volume_gain_db &&
           a.highlight == b.highlight && a.design == b.design;
}

double estimate_duration(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    int words = 0;
    while (in >> token) ++words;
    return std::max(1.0, words / 2.5 + 0.3);
}

std::string serialize_directive(const CommentaryDirective& d) {
    nlohmann::ordered_json j;
    j["frame"] = d.frame_index;
    j["round"] = d.round_index;
    j["t"] = d.round_time_s;
    j["text"] = d.text;
    j["phonetics"]["pitch"] = d.phonetics.pitch;
    j["phonetics"]["volume_gain_db"] = d.phonetics.volume_gain_db;
    j["highlight"] = d.highlight;
    j["design"] = static_cast<int>(d.design);
    return j.dump();
}

CommentaryDirective parse_directive(const std::string& line) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
    auto require = [&](const json& obj, const char* key, json::value_t type) -> const json& {
        auto it = obj.find(key);
        if (it == obj.end()) throw ParseError(0, std::string("missing field \"") + key + "\"");
        bool ok = it->type() == type ||
                  (type == json::value_t::number_float && it->is_number()) ||
                  (type == json::value_t::number_integer && it->is_number_integer()) ||
                  (type == json::value_t::number_unsigned && it->is_number_unsigned());
        if (!ok) throw ParseError(0, std::string("field \"") + key + "\" has the wrong type");
        return *it;
    };
    CommentaryDirective d;
    d.frame_index = require(j, "frame", json::value_t::number_unsigned).get<std::uint64_t>();
    d.round_index = require(j, "round", json::value_t::number_integer).get<int>();
    d.round_time_s = require(j, "t", json::value_t::number_float).get<double>();
    d.text = require(j, "text", json::value_t::string).get<std::string>();
    const auto& ph = require(j, "phonetics", json::value_t::object);
    d.phonetics.pitch = require(ph, "pitch", json::value_t::number_float).get<double>();
    d.phonetics.volume_gain_db =
        require(ph, "volume_gain_db", json::value_t::number_float).get<double>();
    d.highlight = require(j, "highlight", json::value_t::number_float).get<double>();
    d.design = design_from_int(require(j, "design", json::value_t::number_integer).get<int>());
    return d;
}

void write_script(std::ostream& out, const std::vector<CommentaryDirective>& directives) {
    for (const auto& d : directives) out << serialize_directive(d) << '\n';
}

void validate(const PipelineConfig& cfg) {
    validate(cfg.round);
    validate(cfg.weights);
    validate(cfg.pitch_range);
    validate(cfg.volume);
    if (cfg.thresholds.big_hp_drop < 1)
        throw ConfigError("big_hp_drop threshold must be at least 1");
    if (!(cfg.thresholds.round_near_end_frac > 0.0 && cfg.thresholds.round_near_end_frac <= 1.0))
        throw ConfigError("round_near_end_frac must be in (0, 1]");
    if (!(cfg.thresholds.close_quarters_distance >= 0.0 &&
          cfg.thresholds.close_quarters_distance <= 1.0))
        throw ConfigError("close_quarters_distance must be in [0, 1]");
    if (!(cfg.neutral_cadence_s > 0.0)) throw ConfigError("neutral_cadence_s must be positive");
    if (cfg.p1_name.empty() || cfg.p2_name.empty())
        throw ConfigError("player names must not be empty");
}

Scheduler::Scheduler(PipelineConfig cfg, const TemplateLibrary& library)
    : cfg_(std::move(cfg)), library_(library), rng_(cfg_.seed) {
    validate(cfg_);
    if (library_.templates().empty()) throw ConfigError("template library is empty");
}

void Scheduler::start_round(const RoundStart&) {
    tracker_.reset();
    prev_frame_.reset();
    speaking_until_.reset();
    idle_since_ = 0.0;
    playback_finished_.store(false, std::memory_order_relaxed);
}

void Scheduler::notify_playback_finished() {
    playback_finished_.store(true, std::memory_order_release);
}

std::optional<CommentaryDirective> Scheduler::tick(const FrameSnapshot& frame) {
    if (prev_frame_ && frame.round_index != prev_frame_->round_index)
        throw SequencingError(0, "frame for a new round arrived without a round start");

    // Step 1: settle the utterance state. Scheduled expiry first (it has a
    // known timestamp), then any asynchronous completion signal.
    if (speaking_until_ && frame.round_time_s >= *speaking_until_) {
        idle_since_ = *speaking_until_;
        speaking_until_.reset();
    }
    if (playback_finished_.exchange(false, std::memory_order_acquire) && speaking_until_) {
        idle_since_ = frame.round_time_s;
        speaking_until_.reset();
    }

    // Step 2: observe. Cues are evaluated on every frame so the distance
    // normalizer tracks the whole round, not just emitted moments.
    HighlightCues cues = evaluate_frame(frame, cfg_.round, cfg_.rank_table, cfg_.weights, tracker_);

    std::vector<GameEvent> events;
    if (prev_frame_ && frame.frame_index == prev_frame_->frame_index + 1) {
        events = detect_events(*prev_frame_, frame, cues, cfg_.rank_table, cfg_.thresholds,
                               cfg_.round);
    } else {
        events.push_back({EventKind::Neutral, PlayerId::None, {}});
    }
    prev_frame_ = frame;

    // Step 3: gate. Nothing is composed while a previous line is speaking;
    // neutral chatter additionally waits out the cadence.
    if (speaking_until_) return std::nullopt;
    bool noteworthy = std::any_of(events.begin(), events.end(), [](const GameEvent& e) {
        return e.kind != EventKind::Neutral;
    });
    if (!noteworthy && frame.round_time_s - idle_since_ < cfg_.neutral_cadence_s)
        return std::nullopt;

    return emit(frame, events, cues);
}

std::optional<CommentaryDirective> Scheduler::tick(const LogItem& item) {
    if (const auto* rs = std::get_if<RoundStart>(&item)) {
        start_round(*rs);
        return std::nullopt;
    }
    return tick(std::get<FrameSnapshot>(item));
}

std::optional<CommentaryDirective> Scheduler::emit(const FrameSnapshot& frame,
                                                   const std::vector<GameEvent>& events,
                                                   const HighlightCues& cues) {
    double h = cues.highlight;
    if ((h < 0.0 || h > 1.0) && !warned_band_) {
        std::cerr << "warning: highlight " << h << " outside [0, 1]; phonetics will clamp\n";
        warned_band_ = true;
    }

    const Template& tmpl = select_template(events, h, library_, rng_, prev_template_id_);

    RenderContext ctx;
    ctx.p1_name = cfg_.p1_name;
    ctx.p2_name = cfg_.p2_name;
    constexpr EventKind priority[] = {EventKind::RankedAttackStarted, EventKind::BigHpDrop,
                                      EventKind::HitLanded, EventKind::AttackStarted};
    for (EventKind wanted : priority) {
        auto it = std::find_if(events.begin(), events.end(), [&](const GameEvent& e) {
            return e.kind == wanted && e.attacker != PlayerId::None;
        });
        if (it != events.end()) {
            ctx.attacker = it->attacker;
            ctx.skill_name = it->skill_name;
            break;
        }
    }

    CommentaryDirective d;
    d.frame_index = frame.frame_index;
    d.round_index = frame.round_index;
    d.round_time_s = frame.round_time_s;
    d.text = render(tmpl, ctx);
    d.phonetics = adjust(h, cfg_.design, cfg_.pitch_range, cfg_.volume.map);
    d.highlight = h;
    d.design = cfg_.design;

    speaking_until_ = frame.round_time_s + estimate_duration(d.text);
    prev_template_id_ = tmpl.id;
    return d;
}

std::vector<CommentaryDirective> run_pipeline(const std::vector<LogItem>& items,
                                              const PipelineConfig& cfg,
                                              const TemplateLibrary& library) {
    Scheduler scheduler(cfg, library);
    std::vector<CommentaryDirective> out;
    for (const auto& item : items)
        if (auto d = scheduler.tick(item)) out.push_back(std::move(*d));
    return out;
}

std::vector<CommentaryDirective> run_pipeline(std::istream& log, const PipelineConfig& cfg,
                                              const TemplateLibrary& library) {
    Scheduler scheduler(cfg, library);
    FrameLogReader reader(log, cfg.round);
    std::vector<CommentaryDirective> out;
    while (auto item = reader.next())
        if (auto d = scheduler.tick(*item)) out.push_back(std::move(*d));
    return out;
}

}  // namespace hypecast
