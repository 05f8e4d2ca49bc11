#pragma once

#include "hypecast/errors.hpp"

namespace hypecast {

/// Inclusive parameter range plus the value used when a design leaves the
/// channel untouched.
struct PhoneticRange {
    double min = 0.0;
    double max = 0.0;
    double default_value = 0.0;
};

void validate(const PhoneticRange& r);

/// Pitch span in semitones: [-6, 14], default 0.
PhoneticRange default_pitch_range();

/// Effective volume mapping span in dB: [-4, 4], default 0. Narrower than the
/// hard clamp below; see README configuration notes.
PhoneticRange default_volume_map_range();

/// Volume has two ranges: the span highlight values map onto, and the hard
/// clamp applied to anything sent over the wire.
struct VolumeConfig {
    PhoneticRange map = default_volume_map_range();
    double clamp_min = -6.0;
    double clamp_max = 6.0;
};

void validate(const VolumeConfig& v);

/// The five adjustment policies. D1 is the unmodified baseline; D2/D3 move
/// volume with h / 1-h; D4/D5 move pitch with h / 1-h.
enum class Design : int { D1 = 1, D2 = 2, D3 = 3, D4 = 4, D5 = 5 };

/// 1..5, anything else is a ConfigError.
Design design_from_int(int n);

/// Pitch in semitones and volume gain in dB resolved for one utterance.
struct PhoneticParams {
    double pitch = 0.0;
    double volume_gain_db = 0.0;
};

/// Affine map of h onto [r.min, r.max]; h is clamped into [0,1] first.
double map_to_range(double h, const PhoneticRange& r);

/// Resolves both channels for a highlight value under the given design.
/// Untouched channels get the range's default value.
PhoneticParams adjust(double h, Design d, const PhoneticRange& pitch_range,
                      const PhoneticRange& volume_map);

}  // namespace hypecast
