#include "ostra/value_table.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace ostra {

namespace {

// Transition rates out of state (k_b, k_s). Each flow moves exactly one
// uninformed player into the informed set:
//   informed buyer  -> uninformed buyer   lambda_bb * k_b * (B - k_b)
//   informed seller (not s) -> uninformed seller
//                                          lambda_ss * (k_s - 1) * (S - k_s)
//   informed buyer  -> uninformed seller  lambda_bs * k_b * (S - k_s)
//   informed seller (incl. s) -> uninformed buyer
//                                          lambda_bs * k_s * (B - k_b)
struct Flows {
  double buyer_to_buyer;
  double seller_to_seller;
  double buyer_to_seller;
  double seller_to_buyer;
  double total() const {
    return buyer_to_buyer + seller_to_seller + buyer_to_seller + seller_to_buyer;
  }
};

Flows flows_at(const MarketParams& p, int k_b, int k_s) {
  const double B = p.buyer_count;
  const double S = p.seller_count;
  return {p.lambda_bb * k_b * (B - k_b), p.lambda_ss * (k_s - 1) * (S - k_s),
          p.lambda_bs * k_b * (S - k_s), p.lambda_bs * k_s * (B - k_b)};
}

}  // namespace

ValueTable compute_value_table(const MarketParams& params) {
  const auto validation = validate_params(params, CostSpec{});
  // Only the market-side constraints matter here; the cost defaults are valid.
  if (!validation.ok())
    throw std::invalid_argument("compute_value_table: invalid params: " +
                                validation.violations.front());

  const int B = params.buyer_count;
  const int S = params.seller_count;
  std::vector<double> values(static_cast<std::size_t>(B + 1) * S, 0.0);
  auto idx = [S](int k_b, int k_s) {
    return static_cast<std::size_t>(k_b) * S + (k_s - 1);
  };

  // Backward induction: V(k_b, k_s) depends only on (k_b+1, k_s) and
  // (k_b, k_s+1); the k_b = B row is the zero boundary.
  for (int k_b = B - 1; k_b >= 0; --k_b) {
    for (int k_s = S; k_s >= 1; --k_s) {
      const Flows f = flows_at(params, k_b, k_s);
      const double next_buyer = values[idx(k_b + 1, k_s)];
      const double next_seller = k_s < S ? values[idx(k_b, k_s + 1)] : 0.0;
      const double collect = params.lambda_bs * (B - k_b);
      const double numerator = f.buyer_to_buyer * next_buyer +
                               f.seller_to_seller * next_seller +
                               f.buyer_to_seller * next_seller +
                               f.seller_to_buyer * next_buyer + collect;
      values[idx(k_b, k_s)] = numerator / (params.discount_rate + f.total());
    }
  }
  return ValueTable(params, std::move(values));
}

double ValueTable::get(int k_b, int k_s) const {
  return values_[static_cast<std::size_t>(k_b) * params_.seller_count + (k_s - 1)];
}

double ValueTable::at(int informed_buyers, int informed_sellers) const {
  const bool onpath = informed_buyers == 0 && informed_sellers == 1;
  const bool in_grid = informed_buyers >= 1 && informed_buyers <= params_.buyer_count &&
                       informed_sellers >= 1 && informed_sellers <= params_.seller_count;
  if (!onpath && !in_grid)
    throw std::out_of_range("ValueTable::at: (k_b, k_s) outside the table domain");
  return get(informed_buyers, informed_sellers);
}

double ValueTable::onpath_value() const { return get(0, 1); }

double ValueTable::max_recursion_residual() const {
  const int B = params_.buyer_count;
  const int S = params_.seller_count;
  long double worst = 0.0L;
  for (int k_b = 0; k_b <= B; ++k_b) {
    for (int k_s = 1; k_s <= S; ++k_s) {
      if (k_b == B) {
        worst = std::max(worst, static_cast<long double>(std::abs(get(k_b, k_s))));
        continue;
      }
      const Flows f = flows_at(params_, k_b, k_s);
      const long double next_buyer = get(k_b + 1, k_s);
      const long double next_seller = k_s < S ? get(k_b, k_s + 1) : 0.0;
      const long double rhs =
          static_cast<long double>(f.buyer_to_buyer) * next_buyer +
          static_cast<long double>(f.seller_to_seller) * next_seller +
          static_cast<long double>(f.buyer_to_seller) * next_seller +
          static_cast<long double>(f.seller_to_buyer) * next_buyer +
          static_cast<long double>(params_.lambda_bs) * (B - k_b);
      const long double lhs =
          (static_cast<long double>(params_.discount_rate) + f.total()) * get(k_b, k_s);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return static_cast<double>(worst);
}

double ValueTable::max_monotonicity_violation() const {
  const int B = params_.buyer_count;
  const int S = params_.seller_count;
  double worst = 0.0;
  for (int k_b = 0; k_b <= B; ++k_b)
    for (int k_s = 1; k_s <= S; ++k_s) {
      if (k_b < B) worst = std::max(worst, get(k_b + 1, k_s) - get(k_b, k_s));
      if (k_s < S) worst = std::max(worst, get(k_b, k_s + 1) - get(k_b, k_s));
    }
  return worst;
}

double ValueTable::max_marginal_gap_excess() const {
  const int B = params_.buyer_count;
  const int S = params_.seller_count;
  const double onpath_gap = get(0, 1) - get(1, 1);
  double worst = 0.0;
  for (int k_b = 0; k_b < B; ++k_b)
    for (int k_s = 1; k_s <= S; ++k_s)
      worst = std::max(worst, (get(k_b, k_s) - get(k_b + 1, k_s)) - onpath_gap);
  return worst;
}

void ValueTable::write_csv(std::ostream& out) const {
  out << "k_b,k_s,V\n";
  char buffer[64];
  auto emit = [&](int k_b, int k_s) {
    std::snprintf(buffer, sizeof(buffer), "%d,%d,%.15g\n", k_b, k_s, get(k_b, k_s));
    out << buffer;
  };
  emit(0, 1);
  for (int k_b = 1; k_b <= params_.buyer_count; ++k_b)
    for (int k_s = 1; k_s <= params_.seller_count; ++k_s) emit(k_b, k_s);
}

std::optional<double> viscosity(const ValueTable& table) {
  const int B = table.params().buyer_count;
  if (B <= 1) return std::nullopt;
  return table.at(1, 1) / (B - 1);
}

double extend_onpath_value(const ValueTable& table) { return table.onpath_value(); }

}  // namespace ostra
