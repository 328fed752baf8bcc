#pragma once

#include <cstdint>

#include "ostra/guilt.hpp"
#include "ostra/market.hpp"
#include "ostra/rng.hpp"

namespace ostra {

/// B*S*lambda_bs + C(B,2)*lambda_bb + C(S,2)*lambda_ss.
double total_meeting_rate(const MarketParams& params);

/// Superposition sampler: exponential inter-arrivals at the total rate, each
/// event's link drawn with probability proportional to its class rate and
/// uniformly within the class. Deterministic given the seed.
LinkSequence sample_event_stream(const MarketParams& params, double horizon,
                                 std::uint64_t seed);

/// Same, drawing from a caller-owned stream.
LinkSequence sample_event_stream(const MarketParams& params, double horizon,
                                 Xoshiro256pp& rng);

}  // namespace ostra
