#include "ostra/events.hpp"

#include <stdexcept>

namespace ostra {

namespace {

double pair_count(int n) { return 0.5 * n * (n - 1); }

// Unordered pair index -> (i, j), i < j, over n players.
std::pair<int, int> unrank_pair(std::uint64_t rank, int n) {
  // Row i holds (n - 1 - i) pairs.
  int i = 0;
  std::uint64_t row = static_cast<std::uint64_t>(n - 1);
  while (rank >= row) {
    rank -= row;
    --row;
    ++i;
  }
  return {i, i + 1 + static_cast<int>(rank)};
}

}  // namespace

double total_meeting_rate(const MarketParams& p) {
  return static_cast<double>(p.buyer_count) * p.seller_count * p.lambda_bs +
         pair_count(p.buyer_count) * p.lambda_bb +
         pair_count(p.seller_count) * p.lambda_ss;
}

LinkSequence sample_event_stream(const MarketParams& params, double horizon,
                                 Xoshiro256pp& rng) {
  if (!(horizon >= 0.0))
    throw std::invalid_argument("sample_event_stream: horizon must be >= 0");

  const int B = params.buyer_count;
  const int S = params.seller_count;
  const double rate_trade = static_cast<double>(B) * S * params.lambda_bs;
  const double rate_buyers = pair_count(B) * params.lambda_bb;
  const double rate_sellers = pair_count(S) * params.lambda_ss;
  const double rate_total = rate_trade + rate_buyers + rate_sellers;

  std::vector<LinkEvent> events;
  if (rate_total <= 0.0) return LinkSequence{};
  events.reserve(static_cast<std::size_t>(rate_total * horizon * 1.1) + 16);

  double t = 0.0;
  for (;;) {
    t += rng.exponential(rate_total);
    if (t > horizon) break;
    const double pick = rng.uniform01() * rate_total;
    if (pick < rate_trade) {
      const std::uint64_t cell = rng.below(static_cast<std::uint64_t>(B) * S);
      const int buyer = static_cast<int>(cell % B);
      const int seller = static_cast<int>(cell / B);
      events.push_back({t, Link(buyer_id(buyer), seller_id(seller, params))});
    } else if (pick < rate_trade + rate_buyers) {
      const auto [i, j] = unrank_pair(rng.below(static_cast<std::uint64_t>(pair_count(B))), B);
      events.push_back({t, Link(buyer_id(i), buyer_id(j))});
    } else {
      const auto [i, j] = unrank_pair(rng.below(static_cast<std::uint64_t>(pair_count(S))), S);
      events.push_back({t, Link(seller_id(i, params), seller_id(j, params))});
    }
  }
  return LinkSequence(std::move(events));
}

LinkSequence sample_event_stream(const MarketParams& params, double horizon,
                                 std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  return sample_event_stream(params, horizon, rng);
}

}  // namespace ostra
