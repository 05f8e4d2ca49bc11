#include "hypecast/commentary.hpp"

#include <array>
#include <istream>
#include <map>
#include <utility>

#include <json.hpp>

namespace hypecast {

namespace {

constexpr double kBandLow = 1.0 / 3.0;
constexpr double kBandHigh = 2.0 / 3.0;

const std::array<std::pair<EventKind, const char*>, 7> kEventNames = {{
    {EventKind::AttackStarted, "AttackStarted"},
    {EventKind::RankedAttackStarted, "RankedAttackStarted"},
    {EventKind::HitLanded, "HitLanded"},
    {EventKind::BigHpDrop, "BigHpDrop"},
    {EventKind::RoundNearEnd, "RoundNearEnd"},
    {EventKind::CloseQuarters, "CloseQuarters"},
    {EventKind::Neutral, "Neutral"},
}};

}  // namespace

const char* to_string(EventKind k) {
    for (const auto& [kind, name] : kEventNames)
        if (kind == k) return name;
    return "Unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
    for (const auto& [kind, name] : kEventNames)
        if (s == name) return kind;
    return std::nullopt;
}

std::string skill_display_name(std::string_view action_id) {
    // Seeded from the ranked-action skill names; a few common moves get
    // friendlier labels too.
    static const std::map<std::string_view, const char*> kNames = {
        {"STAND_D_DF_FC", "Special Skill"},
        {"STAND_F_D_DFB", "Strong Upper"},
        {"STAND_D_DB_BB", "Sliding Kick"},
        {"STAND_D_DF_FB", "Shoot Strong Projectile Forward"},
        {"STAND_A", "Quick Jab"},
        {"STAND_B", "Heavy Kick"},
        {"CROUCH_A", "Low Jab"},
        {"CROUCH_B", "Low Kick"},
        {"AIR_A", "Aerial Punch"},
        {"AIR_B", "Aerial Kick"},
        {"THROW_A", "Grab"},
        {"THROW_B", "Heavy Throw"},
    };
    if (auto it = kNames.find(action_id); it != kNames.end()) return it->second;
    std::string out(action_id);
    for (char& c : out)
        if (c == '_') c = ' ';
    return out;
}

std::vector<GameEvent> detect_events(const FrameSnapshot& prev, const FrameSnapshot& curr,
                                     const HighlightCues& cues, const RankActTable& table,
                                     const EventThresholds& thresholds, const RoundConfig& cfg) {
    if (curr.round_index != prev.round_index)
        throw SequencingError(0, "detect_events: frames belong to different rounds");
    if (curr.frame_index != prev.frame_index + 1)
        throw SequencingError(0, "detect_events: frames are not consecutive");

    std::vector<GameEvent> events;

    auto attack_started = [&](const PlayerState& was, const PlayerState& now, PlayerId who) {
        bool newly = now.is_attack && (!was.is_attack || was.action_id != now.action_id);
        if (!newly) return;
        std::string skill = skill_display_name(now.action_id);
        events.push_back({EventKind::AttackStarted, who, skill});
        if (table.rank_of(now.action_id))
            events.push_back({EventKind::RankedAttackStarted, who, std::move(skill)});
    };
    attack_started(prev.p1, curr.p1, PlayerId::P1);
    attack_started(prev.p2, curr.p2, PlayerId::P2);

    auto hit_taken = [&](int hp_was, int hp_now, PlayerId attacker, const PlayerState& attacker_now) {
        if (hp_now >= hp_was) return;
        std::string skill = skill_display_name(attacker_now.action_id);
        events.push_back({EventKind::HitLanded, attacker, skill});
        if (hp_was - hp_now >= thresholds.big_hp_drop)
            events.push_back({EventKind::BigHpDrop, attacker, std::move(skill)});
    };
    hit_taken(prev.p2.hp, curr.p2.hp, PlayerId::P1, curr.p1);
    hit_taken(prev.p1.hp, curr.p1.hp, PlayerId::P2, curr.p2);

    if (curr.round_time_s / cfg.round_duration_s >= thresholds.round_near_end_frac)
        events.push_back({EventKind::RoundNearEnd, PlayerId::None, {}});
    if (cues.distance >= thresholds.close_quarters_distance)
        events.push_back({EventKind::CloseQuarters, PlayerId::None, {}});

    if (events.empty()) events.push_back({EventKind::Neutral, PlayerId::None, {}});
    return events;
}

TemplateLibrary::TemplateLibrary(std::vector<Template> templates)
    : templates_(std::move(templates)) {
    std::set<int> ids;
    for (const auto& t : templates_) {
        if (!ids.insert(t.id).second)
            throw ConfigError("duplicate template id " + std::to_string(t.id));
        if (t.tags.empty()) throw ConfigError("template " + std::to_string(t.id) + " has no tags");
        if (!(t.band_lo >= 0.0 && t.band_lo < t.band_hi && t.band_hi <= 1.0))
            throw ConfigError("template " + std::to_string(t.id) +
                              " band must be a non-empty subinterval of [0,1]");
        // reject unknown placeholder names up front
        const std::string& p = t.pattern;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] != '{') continue;
            auto close = p.find('}', i + 1);
            if (close == std::string::npos)
                throw ConfigError("template " + std::to_string(t.id) + " has an unterminated placeholder");
            std::string name = p.substr(i + 1, close - i - 1);
            if (name != "P1" && name != "P2" && name != "ATTACKER" && name != "DEFENDER" &&
                name != "SKILL")
                throw ConfigError("template " + std::to_string(t.id) + " uses unknown placeholder {" +
                                  name + "}");
            i = close;
        }
    }
}

TemplateLibrary TemplateLibrary::load_jsonl(std::istream& in) {
    using nlohmann::json;
    std::vector<Template> templates;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ConfigError("templates line " + std::to_string(line_no) + ": invalid JSON: " +
                              e.what());
        }
        Template t;
        try {
            t.id = j.at("id").get<int>();
            t.pattern = j.at("pattern").get<std::string>();
            for (const auto& tag : j.at("tags")) {
                auto kind = event_kind_from_string(tag.get<std::string>());
                if (!kind)
                    throw ConfigError("templates line " + std::to_string(line_no) +
                                      ": unknown tag \"" + tag.get<std::string>() + "\"");
                t.tags.insert(*kind);
            }
            const auto& band = j.at("band");
            t.band_lo = band.at(0).get<double>();
            t.band_hi = band.at(1).get<double>();
        } catch (const json::exception& e) {
            throw ConfigError("templates line " + std::to_string(line_no) + ": " + e.what());
        }
        templates.push_back(std::move(t));
    }
    return TemplateLibrary(std::move(templates));
}

TemplateLibrary TemplateLibrary::builtin() {
    using K = EventKind;
    std::vector<Template> t;
    auto add = [&](int id, const char* pattern, std::set<K> tags, double lo, double hi) {
        t.push_back({id, pattern, std::move(tags), lo, hi});
    };

    // Neutral fillers across all bands.
    add(1, "They try to predict each other!", {K::Neutral}, 0.0, kBandLow);
    add(2, "Both fighters are sizing each other up.", {K::Neutral}, 0.0, kBandLow);
    add(3, "{P1} and {P2} circle carefully, waiting for an opening.", {K::Neutral}, 0.0, kBandLow);
    add(4, "Patience from both sides, nobody wants to make the first mistake.", {K::Neutral}, 0.0,
        kBandLow);
    add(5, "The tension keeps building in this round.", {K::Neutral}, kBandLow, kBandHigh);
    add(6, "{P1} and {P2} keep trading ground out there.", {K::Neutral}, kBandLow, kBandHigh);
    add(7, "Still anyone's game at this point.", {K::Neutral}, kBandLow, kBandHigh);
    add(8, "What a nail-biter this is turning into!", {K::Neutral}, kBandHigh, 1.0);
    add(9, "The crowd can feel it, something big is coming!", {K::Neutral}, kBandHigh, 1.0);

    // Attack startups.
    add(10, "{ATTACKER} goes in with {SKILL}!", {K::AttackStarted}, 0.0, kBandHigh);
    add(11, "{ATTACKER} tries {SKILL}, looking for an opening.", {K::AttackStarted}, 0.0, kBandLow);
    add(12, "A quick {SKILL} from {ATTACKER}!", {K::AttackStarted}, 0.0, 1.0);
    add(13, "{ATTACKER} throws out {SKILL}, {DEFENDER} has to respect it!", {K::AttackStarted},
        kBandLow, 1.0);

    // Ranked attacks deserve bigger calls.
    add(14, "{ATTACKER} is so powerful releasing {SKILL} that {DEFENDER} should be very careful!",
        {K::RankedAttackStarted}, kBandLow, 1.0);
    add(15, "Huge commitment! {ATTACKER} unleashes {SKILL}!", {K::RankedAttackStarted}, kBandHigh,
        1.0);
    add(16, "{ATTACKER} brings out {SKILL}, this could change everything!",
        {K::RankedAttackStarted}, kBandLow, kBandHigh);
    add(17, "There it is, the {SKILL} from {ATTACKER}!", {K::RankedAttackStarted}, 0.0, 1.0);

    // Hits.
    add(18, "Clean hit by {ATTACKER}!", {K::HitLanded}, 0.0, kBandLow);
    add(19, "{ATTACKER} connects, {DEFENDER} felt that one!", {K::HitLanded}, kBandLow, kBandHigh);
    add(20, "{ATTACKER} lands {SKILL} right on target!", {K::HitLanded}, kBandLow, 1.0);
    add(21, "That one hurt, {DEFENDER} is rocked!", {K::HitLanded}, kBandHigh, 1.0);

    // Big damage.
    add(22, "Massive damage! {DEFENDER} just lost a huge chunk of health!", {K::BigHpDrop},
        kBandHigh, 1.0);
    add(23, "{ATTACKER} tears into {DEFENDER}, the life bar is melting!", {K::BigHpDrop}, kBandHigh,
        1.0);
    add(24, "Devastating blow from {ATTACKER}!", {K::BigHpDrop}, kBandLow, kBandHigh);
    add(25, "{DEFENDER} takes heavy punishment from that {SKILL}!", {K::BigHpDrop}, 0.0, 1.0);

    // Clock pressure.
    add(26, "Time is running out, every second counts now!", {K::RoundNearEnd}, 0.0, 1.0);
    add(27, "The clock is against them, somebody has to commit!", {K::RoundNearEnd}, 0.0,
        kBandHigh);
    add(28, "Final stretch of the round, who wants it more?", {K::RoundNearEnd}, kBandLow,
        kBandHigh);
    add(29, "Down to the wire, this finish will be close!", {K::RoundNearEnd}, kBandHigh, 1.0);

    // Proximity.
    add(30, "They are toe to toe now!", {K::CloseQuarters}, 0.0, 1.0);
    add(31, "Point blank range, someone is getting hit!", {K::CloseQuarters}, kBandLow, 1.0);
    add(32, "{P1} and {P2} are right in each other's faces!", {K::CloseQuarters}, kBandHigh, 1.0);
    add(33, "No room to breathe in there!", {K::CloseQuarters}, 0.0, kBandLow);

    // Combined-pressure calls.
    add(34, "{ATTACKER} smells blood and moves in with {SKILL}!",
        {K::AttackStarted, K::HitLanded}, kBandHigh, 1.0);
    add(35, "An exchange in the corner, and it is getting wild!",
        {K::CloseQuarters, K::RoundNearEnd}, kBandHigh, 1.0);
    add(36, "Every exchange matters this late in the round!",
        {K::HitLanded, K::RoundNearEnd}, kBandLow, 1.0);

    return TemplateLibrary(std::move(t));
}

const Template& select_template(const std::vector<GameEvent>& events, double h,
                                const TemplateLibrary& lib, std::mt19937_64& rng,
                                std::optional<int> previous_id) {
    const auto& all = lib.templates();
    if (all.empty()) throw ConfigError("template library is empty");

    std::set<EventKind> kinds;
    for (const auto& e : events) kinds.insert(e.kind);

    auto tags_match = [&](const Template& t) {
        for (EventKind k : t.tags)
            if (kinds.count(k)) return true;
        return false;
    };

    std::vector<const Template*> candidates;
    for (const auto& t : all)
        if (tags_match(t) && t.band_contains(h)) candidates.push_back(&t);
    if (candidates.empty())
        for (const auto& t : all)
            if (tags_match(t)) candidates.push_back(&t);
    if (candidates.empty())
        for (const auto& t : all)
            if (t.tags.count(EventKind::Neutral)) candidates.push_back(&t);
    if (candidates.empty())
        throw ConfigError("no template matches the events and none is tagged Neutral");

    if (previous_id && candidates.size() >= 2)
        std::erase_if(candidates, [&](const Template* t) { return t->id == *previous_id; });

    // modulo keeps the pick reproducible across standard libraries
    return *candidates[static_cast<std::size_t>(rng() % candidates.size())];
}

namespace {

std::string resolve_placeholder(const std::string& name, const RenderContext& ctx) {
    if (name == "P1") return ctx.p1_name;
    if (name == "P2") return ctx.p2_name;
    if (name == "ATTACKER") {
        if (ctx.attacker == PlayerId::P1) return ctx.p1_name;
        if (ctx.attacker == PlayerId::P2) return ctx.p2_name;
        throw RenderError("ATTACKER", "no attacker in context for {ATTACKER}");
    }
    if (name == "DEFENDER") {
        if (ctx.attacker == PlayerId::P1) return ctx.p2_name;
        if (ctx.attacker == PlayerId::P2) return ctx.p1_name;
        throw RenderError("DEFENDER", "no attacker in context for {DEFENDER}");
    }
    if (name == "SKILL") {
        if (ctx.skill_name.empty()) throw RenderError("SKILL", "no skill in context for {SKILL}");
        return ctx.skill_name;
    }
    throw RenderError(name, "unknown placeholder {" + name + "}");
}

}  // namespace

std::string render(const Template& t, const RenderContext& ctx) {
    const std::string& p = t.pattern;
    std::string out;
    out.reserve(p.size() + 16);
    for (std::size_t i = 0; i < p.size();) {
        char c = p[i];
        if (c == '}') throw RenderError("}", "unmatched '}' in template pattern");
        if (c != '{') {
            out += c;
            ++i;
            continue;
        }
        auto close = p.find('}', i + 1);
        if (close == std::string::npos) throw RenderError("{", "unterminated placeholder");
        out += resolve_placeholder(p.substr(i + 1, close - i - 1), ctx);
        i = close + 1;
    }
    return out;
}

}  // namespace hypecast
