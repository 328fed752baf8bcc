#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "ostra/equilibrium.hpp"
#include "ostra/events.hpp"
#include "ostra/guilt.hpp"
#include "ostra/market.hpp"

namespace ostra {

/// A player's private record of whom they deem guilty. Only ever grows, and
/// never intersects the protocol's immune side.
struct PersonalState {
  PlayerId owner = -1;
  std::set<PlayerId> guilty;
};

struct SimMessage {
  PlayerId sender = -1;
  std::vector<PlayerId> content;  // sorted; sender's guilty set minus herself
};

/// Sorted snapshots around one stage.
struct StageStates {
  std::vector<PlayerId> before;
  std::vector<PlayerId> after;
};

struct InteractionRecord {
  double time = 0.0;
  Link link{0, 1};
  bool trading = false;
  PlayerId first_speaker = -1;
  SimMessage msg_a, msg_b;  // from link.a and link.b
  double price = 0.0;       // trading links only
  double quality = 0.0;
  StageStates comm_a, comm_b;    // around the communication stage
  StageStates trade_a, trade_b;  // around the trading stage (trading links)
};

struct Trace {
  MarketParams params;
  Protocol protocol = Protocol::buyer_first;
  TradeTerms terms;
  std::string scenario;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  std::vector<InteractionRecord> records;
  std::vector<double> payoffs;  // discounted, indexed by PlayerId
  std::optional<double> deviation_time;
  std::optional<double> absorption_time;  // all opposite-side players informed
  double deviator_exploitation = 0.0;     // sum of e^{-r(t - t_dev)} per full-price shirk
  std::vector<std::string> flags;

  /// JSON lines, one object per interaction:
  /// {"t","link":[i,j],"kind":"comm"|"trade","first_speaker","m_i","m_j","p","q"}
  /// with p and q present on trading links only; players named "B1".."S1"...
  void write_jsonl(std::ostream& out) const;
};

struct Scenario {
  std::string id = "on-path";
  std::optional<PlayerId> deviator;
  double not_before = 0.0;     // deviate at first trading opportunity >= this time
  bool one_shot_delay = false; // once guilty, mimic the path once to delay detection
};

Scenario onpath_scenario();

/// Scenario in which `deviator` shirks at their first trading opportunity at
/// or after `not_before` and thereafter plays the guilty continuation (shirk
/// on everyone, keep reporting truthfully about others). Throws
/// std::invalid_argument if the deviator is on the protocol's immune side.
Scenario inject_deviation(const MarketParams& params, Protocol protocol,
                          PlayerId deviator, double not_before = 0.0,
                          bool one_shot_delay = false);

/// Known ids: "on-path", "deviate-at-first-meeting" (alias
/// "seller-deviates-at-first-meeting"), "one-shot-delay". Unknown ids are
/// input errors. Deviation scenarios require a deviator.
Scenario scenario_from_id(const std::string& id, std::optional<PlayerId> deviator,
                          const MarketParams& params, Protocol protocol);

/// Executes every sampled meeting: polite cheap talk first (coin for speaker
/// order, both report truthfully, states merge), then the trading stage on
/// trading links with the protocol's action and guilt-update rules. A buyer
/// collects q - p per trade, a seller p - c(q), both discounted by e^{-rt}.
/// Deterministic given the seed.
Trace run_replication(const MarketParams& params, const CostSpec& cost,
                      Protocol protocol, const TradeTerms& terms,
                      const Scenario& scenario, std::uint64_t seed, double horizon);

struct ReplicationSummary {
  int replication = 0;
  std::vector<double> payoffs;
  std::optional<double> deviation_time;
  std::optional<double> absorption_time;
  double deviator_exploitation = 0.0;
};

/// Independent replications on substreams derived from (master_seed, index);
/// results are gathered by index, so they do not depend on thread scheduling.
std::vector<ReplicationSummary> run_replications(const MarketParams& params,
                                                 const CostSpec& cost,
                                                 Protocol protocol,
                                                 const TradeTerms& terms,
                                                 const Scenario& scenario,
                                                 int replications,
                                                 std::uint64_t master_seed,
                                                 double horizon);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int replications = 0;
};

/// Monte Carlo estimate of V(k_b0, k_s0): seeds a guilt state with the given
/// counts, samples event streams, and averages discounted_exploitation. The
/// horizon is chosen so the truncated tail is below 1e-8 absolute.
McEstimate mc_estimate_value(const MarketParams& params, int informed_buyers,
                             int informed_sellers, int replications,
                             std::uint64_t seed);

}  // namespace ostra
