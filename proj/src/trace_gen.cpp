#include "hypecast/trace_gen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <random>

namespace hypecast {

namespace {

// Attack pool covers the four ranked skills plus a spread of normals.
constexpr std::array<const char*, 8> kAttacks = {
    "STAND_D_DF_FC", "STAND_F_D_DFB", "STAND_D_DB_BB", "STAND_D_DF_FB",
    "STAND_A",       "STAND_B",       "CROUCH_B",      "AIR_B",
};
constexpr std::array<const char*, 6> kIdles = {
    "STAND", "CROUCH", "FORWARD_WALK", "DASH", "BACK_STEP", "STAND_GUARD",
};

// RNG helpers kept to raw engine draws so output bytes do not depend on a
// standard library's distribution internals.
struct Dice {
    std::mt19937_64 rng;

    explicit Dice(std::uint64_t seed) : rng(seed) {}

    std::uint64_t pick(std::uint64_t n) { return rng() % n; }
    double unit() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

struct Fighter {
    PlayerState state;
    int action_frames_left = 0;
    int hit_frame = -1;  // frame (within the action) at which damage lands
    int damage = 0;
    double drift = 1.0;  // +1 advance, -1 retreat

    void choose_action(Dice& dice) {
        if (dice.chance(0.35)) {
            state.action_id = kAttacks[dice.pick(kAttacks.size())];
            state.is_attack = true;
            action_frames_left = 12 + static_cast<int>(dice.pick(18));
            hit_frame = action_frames_left / 2;
            damage = 5 + static_cast<int>(dice.pick(36));  // 5..40
        } else {
            state.action_id = kIdles[dice.pick(kIdles.size())];
            state.is_attack = false;
            action_frames_left = 8 + static_cast<int>(dice.pick(28));
            hit_frame = -1;
            drift = dice.chance(0.7) ? 1.0 : -1.0;
        }
    }
};

}  // namespace

std::vector<FrameSnapshot> generate_trace(double duration_s, std::uint64_t seed,
                                          const RoundConfig& cfg) {
    validate(cfg);
    if (duration_s < 0.0) throw ConfigError("trace duration must be non-negative");

    const auto total_frames =
        static_cast<std::uint64_t>(std::llround(duration_s * cfg.fps));
    const auto round_frames =
        static_cast<std::uint64_t>(std::llround(cfg.round_duration_s * cfg.fps));

    Dice dice(seed);
    std::vector<FrameSnapshot> frames;
    frames.reserve(total_frames);

    Fighter p1, p2;
    int round_index = -1;
    std::uint64_t round_frame = round_frames;  // forces a reset on the first frame
    bool knockout = false;

    for (std::uint64_t frame_index = 0; frame_index < total_frames; ++frame_index) {
        if (round_frame >= round_frames || knockout) {
            ++round_index;
            round_frame = 0;
            knockout = false;
            p1 = Fighter{};
            p2 = Fighter{};
            p1.state.hp = cfg.initial_hp;
            p2.state.hp = cfg.initial_hp;
            p1.state.x_pos = dice.uniform(0.05, 0.35) * cfg.stage_width;
            p2.state.x_pos = dice.uniform(0.65, 0.95) * cfg.stage_width;
            p1.choose_action(dice);
            p2.choose_action(dice);
        }

        auto step = [&](Fighter& self, Fighter& foe, double toward) {
            if (self.action_frames_left <= 0) self.choose_action(dice);
            --self.action_frames_left;

            if (!self.state.is_attack) {
                double speed = dice.uniform(1.0, 4.0) * self.drift * toward;
                self.state.x_pos = std::clamp(self.state.x_pos + speed, 0.0,
                                              static_cast<double>(cfg.stage_width));
            }
            bool in_reach = std::fabs(self.state.x_pos - foe.state.x_pos) < 180.0;
            if (self.state.is_attack && self.action_frames_left == self.hit_frame && in_reach &&
                dice.chance(0.45)) {
                foe.state.hp = std::max(0, foe.state.hp - self.damage);
                if (foe.state.hp == 0) knockout = true;
            }
        };
        double toward1 = p2.state.x_pos >= p1.state.x_pos ? 1.0 : -1.0;
        step(p1, p2, toward1);
        step(p2, p1, -toward1);

        FrameSnapshot f;
        f.frame_index = frame_index;
        f.round_index = round_index;
        f.round_time_s = static_cast<double>(round_frame) / cfg.fps;
        f.p1 = p1.state;
        f.p2 = p2.state;
        frames.push_back(std::move(f));
        ++round_frame;
    }
    return frames;
}

void write_trace(std::ostream& out, const std::vector<FrameSnapshot>& frames) {
    for (const auto& f : frames) out << serialize_frame(f) << '\n';
}

}  // namespace hypecast
