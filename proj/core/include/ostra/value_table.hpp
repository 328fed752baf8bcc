#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "ostra/market.hpp"

namespace ostra {

/// Discounted per-unit-price exploitation values V(k_b, k_s) for a guilty
/// seller: k_b buyers and k_s sellers (herself included) deem her guilty.
///
/// Each entry satisfies, with
///   out(k_b,k_s) = lambda_bb*k_b*(B-k_b) + lambda_ss*(k_s-1)*(S-k_s)
///                + lambda_bs*k_b*(S-k_s) + lambda_bs*k_s*(B-k_b),
/// the backward recursion
///   V(k_b,k_s) * (r + out) = lambda_bb*k_b*(B-k_b)       * V(k_b+1,k_s)
///                          + lambda_ss*(k_s-1)*(S-k_s)   * V(k_b,k_s+1)
///                          + lambda_bs*k_b*(S-k_s)       * V(k_b,k_s+1)
///                          + lambda_bs*k_s*(B-k_b)       * V(k_b+1,k_s)
///                          + lambda_bs*(B-k_b),
/// with boundary V(B, k_s) = 0. The seller collects one unit of price per
/// meeting with a still-uninformed buyer, hence the lone lambda_bs*(B-k_b).
///
/// Public domain is {1..B} x {1..S} plus the on-path extension (0,1); the
/// k_b = 0 row for k_s > 1 is computed internally for the diagnostics below
/// but not part of the public surface.
class ValueTable {
 public:
  double at(int informed_buyers, int informed_sellers) const;

  /// V(0,1): value of a seller still on the equilibrium path who plans to
  /// shirk on the next buyer she meets. Equals
  /// lambda_bs*B*(V(1,1)+1) / (r + lambda_bs*B).
  double onpath_value() const;

  const MarketParams& params() const { return params_; }

  /// Largest |(r+out)*V - rhs| over the full grid, evaluated in long double.
  double max_recursion_residual() const;

  /// Largest violation of V being non-increasing in each index (0 if none).
  double max_monotonicity_violation() const;

  /// Largest excess of V(k_b,k_s) - V(k_b+1,k_s) over V(0,1) - V(1,1)
  /// across the grid (0 if the on-path gap dominates everywhere, as it must).
  double max_marginal_gap_excess() const;

  /// CSV with header `k_b,k_s,V`, row-major (k_b outer ascending, k_s inner
  /// ascending) over the public domain, 15 significant digits.
  void write_csv(std::ostream& out) const;

 private:
  friend ValueTable compute_value_table(const MarketParams& params);
  ValueTable(MarketParams params, std::vector<double> values)
      : params_(params), values_(std::move(values)) {}

  double get(int k_b, int k_s) const;  // unchecked, full internal grid

  MarketParams params_;
  std::vector<double> values_;  // (B+1) rows x S columns, row-major
};

/// Solves the recursion by backward induction over (k_b desc, k_s desc).
/// Exact per entry: each value is a single closed-form division.
ValueTable compute_value_table(const MarketParams& params);

/// v_BS = V(1,1)/(B-1): the discounted probability that a given buyer has
/// not yet heard of the seller's guilt by their next meeting. Not applicable
/// when B = 1 (no other buyers), hence optional.
std::optional<double> viscosity(const ValueTable& table);

/// V(0,1); see ValueTable::onpath_value.
double extend_onpath_value(const ValueTable& table);

}  // namespace ostra
