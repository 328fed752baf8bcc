#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ostra/market.hpp"
#include "ostra/value_table.hpp"

namespace ostra {

// Weak inequalities are judged up to kWeakIneqTol on slacks; a strict
// conclusion additionally requires the margin to clear kStrictIneqTol, so
// modeling conclusions are never floating-point noise.
inline constexpr double kWeakIneqTol = 1e-12;
inline constexpr double kStrictIneqTol = 1e-9;

struct TradeTerms {
  double price = 0.0;
  double quality = 0.0;
};

/// One evaluated incentive constraint: lhs is the deviation side, rhs the
/// compliance side, slack = rhs - lhs; satisfied iff slack >= -kWeakIneqTol.
struct ICEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool satisfied = false;
};

ICEntry make_ic_entry(std::string name, double deviation_side, double compliance_side);

struct ICReport {
  std::vector<ICEntry> entries;
  bool all_satisfied() const;
  const ICEntry* find(std::string_view name) const;
  /// CSV with header `name,lhs,rhs,slack,satisfied`, 15 significant digits.
  void write_csv(std::ostream& out) const;
};

/// Most trade a single pair can sustain on its own (grim trigger within the
/// pair). Simultaneous: c(q)/q = (lambda/(r+lambda))^2, plus the binding
/// price p = q*lambda/(r+lambda). Either sequential protocol: c(q)/q =
/// lambda/(r+lambda) (one-sided moral hazard; no price is reported since
/// only the second mover's constraint binds).
struct BilateralBenchmark {
  double quality = 0.0;
  double target_ratio = 0.0;
  std::optional<double> price;  // simultaneous only
};
BilateralBenchmark bilateral_quality(const MarketParams& params, const CostSpec& cost,
                                     Protocol protocol);

/// (B*lambda_bs - (B-1)*r*v) / (r + B*lambda_bs), the buyer-first cost-ratio
/// target as a function of the viscosity v. Exposed separately so boundary
/// values of v can be probed directly.
double naive_target_ratio(const MarketParams& params, double v_bs);

struct NaiveBenchmark {
  double quality = 0.0;
  double target_ratio = 0.0;
  std::optional<double> v_bs;
  std::vector<std::string> flags;
};

/// Highest trade supportable when every innocent player is forced to report
/// truthfully, buyer-first protocol. Falls back to the one-sided bilateral
/// value when B = 1 (flagged "degenerate: bilateral fallback").
NaiveBenchmark naive_benchmark_buyer_first(const MarketParams& params,
                                           const CostSpec& cost,
                                           const ValueTable& table);

/// Role-swapped construction (B<->S, lambda_bb<->lambda_ss, guilty party a
/// buyer). Always flagged as extrapolated: the seller-first analogue is not
/// given in closed form anywhere, only asserted to exist.
NaiveBenchmark naive_benchmark_seller_first(const MarketParams& params,
                                            const CostSpec& cost);

/// On-path incentive constraints at the given terms.
/// Simultaneous -> {BuyerBilateral, SellerBilateral}:
///   q <= (q-p)(1 + lambda/r),   p <= (p-c(q))(1 + lambda/r).
/// BuyerFirst -> {BuyerBF, SellerBF}:
///   0 <= (q-p)(1 + S*lambda/r),
///   p(1 + (B-1)*v_bs) <= (p-c(q))(1 + B*lambda/r).
/// SellerFirst is not expressible in this report's vocabulary; analyze it
/// through the role swap instead (throws std::invalid_argument).
ICReport check_onpath_ic(Protocol protocol, const TradeTerms& terms,
                         const MarketParams& params, const CostSpec& cost,
                         const ValueTable& table);

/// Guilty-seller sufficiency grid: one OffPathBF(k_b,k_s) entry per
/// k_b in {1..B-1}, k_s in {1..S}, each asserting
///   V(k_b,k_s) - V(k_b+1,k_s) <= c(q)/q.
/// binding_gap = c(q)/q - (V(0,1) - V(1,1)); zero exactly at the benchmark
/// quality, where the on-path constraint binds.
struct OffPathReport {
  ICReport report;
  double binding_gap = 0.0;
};
OffPathReport check_offpath_ic(double quality, const ValueTable& table,
                               const CostSpec& cost);

/// Concealment-deviation audit under the simultaneous protocol, at candidate
/// terms (p, q). Against the bilateral cap (p_, q_):
///   seller_gain = p - p_,  buyer_gain = q - q_,
///   summed_gain = (p + q) - (q_ - c(q_))(1 + lambda/r)  [= their sum],
/// reported as the Prop1Sum entry. deviation_profitable is true when either
/// side's gain clears the strictness threshold: whenever q > q_, at least
/// one side strictly profits from concealing what it knows and shirking, so
/// no such terms survive in equilibrium.
struct Prop1Audit {
  double seller_gain = 0.0;
  double buyer_gain = 0.0;
  double summed_gain = 0.0;
  bool deviation_profitable = false;
  ICReport report;
};
Prop1Audit prop1_deviation_audit(const TradeTerms& terms, const MarketParams& params,
                                 const CostSpec& cost);

/// All headline numbers for one market: bilateral benchmarks, the buyer-first
/// naive benchmark, its target ratio and viscosity, plus advisory flags
/// (degenerate fallbacks, q_max or surplus-monotonicity findings).
struct SolveReport {
  double q_bilateral_sim = 0.0;
  double p_bilateral_sim = 0.0;
  double q_bilateral_sf = 0.0;
  double q_star_bf = 0.0;
  double target_ratio = 0.0;
  std::optional<double> v_bs;
  std::vector<std::string> flags;

  /// Keys exactly {"q_bilateral_sim","p_bilateral_sim","q_bilateral_sf",
  /// "q_star_bf","target_ratio","v_bs","flags"}; v_bs is null when B = 1.
  std::string to_json_text() const;
};
SolveReport solve_benchmarks(const MarketParams& params, const CostSpec& cost);

}  // namespace ostra
