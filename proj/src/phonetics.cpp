#include "hypecast/phonetics.hpp"

#include <algorithm>
#include <string>

namespace hypecast {

namespace {

double clamp01(double h) { return std::clamp(h, 0.0, 1.0); }

}  // namespace

void validate(const PhoneticRange& r) {
    if (!(r.min < r.max)) throw ConfigError("phonetic range min must be below max");
    if (r.default_value < r.min || r.default_value > r.max)
        throw ConfigError("phonetic range default must lie within [min, max]");
}

PhoneticRange default_pitch_range() { return {-6.0, 14.0, 0.0}; }

PhoneticRange default_volume_map_range() { return {-4.0, 4.0, 0.0}; }

void validate(const VolumeConfig& v) {
    validate(v.map);
    if (!(v.clamp_min < v.clamp_max)) throw ConfigError("volume clamp min must be below max");
}

Design design_from_int(int n) {
    if (n < 1 || n > 5) throw ConfigError("design must be in 1..5, got " + std::to_string(n));
    return static_cast<Design>(n);
}

double map_to_range(double h, const PhoneticRange& r) {
    return r.min + (r.max - r.min) * clamp01(h);
}

PhoneticParams adjust(double h, Design d, const PhoneticRange& pitch_range,
                      const PhoneticRange& volume_map) {
    PhoneticParams out{pitch_range.default_value, volume_map.default_value};
    switch (d) {
        case Design::D1:
            break;
        case Design::D2:
            out.volume_gain_db = map_to_range(h, volume_map);
            break;
        case Design::D3:
            out.volume_gain_db = map_to_range(1.0 - clamp01(h), volume_map);
            break;
        case Design::D4:
            out.pitch = map_to_range(h, pitch_range);
            break;
        case Design::D5:
            out.pitch = map_to_range(1.0 - clamp01(h), pitch_range);
            break;
    }
    return out;
}

}  // namespace hypecast
