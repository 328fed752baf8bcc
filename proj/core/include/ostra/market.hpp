#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ostra {

/// Move order of the trading stage. Simultaneous play puts both sides under
/// moral hazard; the sequential protocols leave only the second mover exposed,
/// so the first-moving side can never be labeled guilty.
enum class Protocol { simultaneous, buyer_first, seller_first };

enum class Side { none, buyers, sellers };

/// The market side that is exempt from guilt labels under `protocol`.
/// Empty (Side::none) exactly for the simultaneous protocol.
Side immune_side(Protocol protocol);

std::string_view protocol_name(Protocol protocol);
std::optional<Protocol> protocol_from_name(std::string_view name);

/// Production cost family c(q) = a * q^gamma with a > 0, gamma > 1.
/// gamma > 1 makes c strictly convex with c(0) = c'(0) = 0 and c(q)/q
/// strictly increasing, which every solver below relies on.
struct CostSpec {
  double a = 0.5;
  double gamma = 2.0;

  double operator()(double q) const { return a * std::pow(q, gamma); }
  double marginal(double q) const { return a * gamma * std::pow(q, gamma - 1.0); }

  /// c(q)/q, extended by continuity to 0 at q = 0.
  double avg_ratio(double q) const {
    return q == 0.0 ? 0.0 : a * std::pow(q, gamma - 1.0);
  }
};

/// Market primitives: player counts, per-pair Poisson meeting rates, the
/// common discount rate, and the (non-binding) quality cap.
struct MarketParams {
  int buyer_count = 2;
  int seller_count = 1;
  double lambda_bs = 1.0;  ///< buyer-seller meetings, per pair
  double lambda_bb = 1.0;  ///< buyer-buyer meetings, per pair
  double lambda_ss = 1.0;  ///< seller-seller meetings, per pair
  double discount_rate = 1.0;
  double q_max = 1e6;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Pure constraint check; violations are returned as data, never thrown.
ValidationReport validate_params(const MarketParams& params, const CostSpec& cost);

/// The unique q >= 0 with c(q)/q == target, via the power-family closed form
/// q = (target/a)^(1/(gamma-1)). Throws std::domain_error for target < 0.
double avg_cost_ratio_inverse(const CostSpec& cost, double target);

/// Same inverse through generic bisection on q -> c(q)/q. Kept as an
/// independent route for cross-checking the closed form.
double avg_cost_ratio_inverse_bisect(const CostSpec& cost, double target);

/// Strict JSON loading of {"B","S","lambda_bs","lambda_bb","lambda_ss","r",
/// "q_max","cost":{"a","gamma"}}. Unknown or missing keys are rejected with
/// std::invalid_argument. `text` must be a full JSON document.
std::pair<MarketParams, CostSpec> params_from_json_text(const std::string& text);
std::string params_to_json_text(const MarketParams& params, const CostSpec& cost);

}  // namespace ostra
