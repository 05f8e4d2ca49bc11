#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hypecast/game_model.hpp"

namespace hypecast {

// Deterministic synthetic sparring session standing in for live telemetry.
// Rounds restart (HP/clock reset) on knockout or when the round clock runs
// out, until duration_s of total play has been produced.
std::vector<FrameSnapshot> generate_trace(double duration_s, std::uint64_t seed,
                                          const RoundConfig& cfg = {});

void write_trace(std::ostream& out, const std::vector<FrameSnapshot>& frames);

}  // namespace hypecast
