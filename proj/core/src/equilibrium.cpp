#include "ostra/equilibrium.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace ostra {

ICEntry make_ic_entry(std::string name, double deviation_side, double compliance_side) {
  ICEntry entry;
  entry.name = std::move(name);
  entry.lhs = deviation_side;
  entry.rhs = compliance_side;
  entry.slack = compliance_side - deviation_side;
  entry.satisfied = entry.slack >= -kWeakIneqTol;
  return entry;
}

bool ICReport::all_satisfied() const {
  for (const ICEntry& entry : entries)
    if (!entry.satisfied) return false;
  return true;
}

const ICEntry* ICReport::find(std::string_view name) const {
  for (const ICEntry& entry : entries)
    if (entry.name == name) return &entry;
  return nullptr;
}

void ICReport::write_csv(std::ostream& out) const {
  out << "name,lhs,rhs,slack,satisfied\n";
  char buffer[160];
  for (const ICEntry& entry : entries) {
    std::snprintf(buffer, sizeof(buffer), ",%.15g,%.15g,%.15g,%s\n", entry.lhs,
                  entry.rhs, entry.slack, entry.satisfied ? "true" : "false");
    out << entry.name << buffer;
  }
}

BilateralBenchmark bilateral_quality(const MarketParams& params, const CostSpec& cost,
                                     Protocol protocol) {
  const double keep = params.lambda_bs / (params.discount_rate + params.lambda_bs);
  BilateralBenchmark result;
  if (protocol == Protocol::simultaneous) {
    result.target_ratio = keep * keep;
    result.quality = avg_cost_ratio_inverse(cost, result.target_ratio);
    result.price = result.quality * keep;  // binding buyer-side price
  } else {
    result.target_ratio = keep;
    result.quality = avg_cost_ratio_inverse(cost, result.target_ratio);
  }
  return result;
}

double naive_target_ratio(const MarketParams& params, double v_bs) {
  const double b = params.buyer_count;
  const double lambda = params.lambda_bs;
  const double r = params.discount_rate;
  return (b * lambda - (b - 1.0) * r * v_bs) / (r + b * lambda);
}

NaiveBenchmark naive_benchmark_buyer_first(const MarketParams& params,
                                           const CostSpec& cost,
                                           const ValueTable& table) {
  NaiveBenchmark result;
  result.v_bs = viscosity(table);
  if (!result.v_bs) {
    // With a single buyer the formula's multilateral term vanishes; the
    // target collapses to the one-sided bilateral keep-rate.
    result.target_ratio = naive_target_ratio(params, 0.0);
    result.flags.push_back("degenerate: bilateral fallback");
  } else {
    result.target_ratio = naive_target_ratio(params, *result.v_bs);
  }
  result.quality = avg_cost_ratio_inverse(cost, result.target_ratio);
  return result;
}

NaiveBenchmark naive_benchmark_seller_first(const MarketParams& params,
                                            const CostSpec& cost) {
  MarketParams swapped = params;
  std::swap(swapped.buyer_count, swapped.seller_count);
  std::swap(swapped.lambda_bb, swapped.lambda_ss);
  NaiveBenchmark result =
      naive_benchmark_buyer_first(swapped, cost, compute_value_table(swapped));
  result.flags.push_back("extrapolated: role-swapped buyer-first construction");
  return result;
}

ICReport check_onpath_ic(Protocol protocol, const TradeTerms& terms,
                         const MarketParams& params, const CostSpec& cost,
                         const ValueTable& table) {
  const double p = terms.price;
  const double q = terms.quality;
  const double lambda_over_r = params.lambda_bs / params.discount_rate;
  ICReport report;
  switch (protocol) {
    case Protocol::simultaneous:
      // Deviator pockets the stage payoff and loses the relationship.
      report.entries.push_back(
          make_ic_entry("BuyerBilateral", q, (q - p) * (1.0 + lambda_over_r)));
      report.entries.push_back(
          make_ic_entry("SellerBilateral", p, (p - cost(q)) * (1.0 + lambda_over_r)));
      break;
    case Protocol::buyer_first: {
      const double v = viscosity(table).value_or(0.0);
      report.entries.push_back(make_ic_entry(
          "BuyerBF", 0.0, (q - p) * (1.0 + params.seller_count * lambda_over_r)));
      // A guilty seller can still milk each not-yet-informed buyer once.
      report.entries.push_back(make_ic_entry(
          "SellerBF", p * (1.0 + (params.buyer_count - 1) * v),
          (p - cost(q)) * (1.0 + params.buyer_count * lambda_over_r)));
      break;
    }
    case Protocol::seller_first:
      throw std::invalid_argument(
          "check_onpath_ic: seller-first constraints are analyzed through the "
          "role swap; swap buyer/seller parameters and use buyer_first");
  }
  return report;
}

OffPathReport check_offpath_ic(double quality, const ValueTable& table,
                               const CostSpec& cost) {
  if (!(quality > 0.0))
    throw std::invalid_argument("check_offpath_ic: quality must be > 0");
  const MarketParams& params = table.params();
  const double ratio = cost.avg_ratio(quality);
  OffPathReport result;
  char name[48];
  for (int k_b = 1; k_b <= params.buyer_count - 1; ++k_b) {
    for (int k_s = 1; k_s <= params.seller_count; ++k_s) {
      std::snprintf(name, sizeof(name), "OffPathBF(%d,%d)", k_b, k_s);
      const double gap = table.at(k_b, k_s) - table.at(k_b + 1, k_s);
      result.report.entries.push_back(make_ic_entry(name, gap, ratio));
    }
  }
  result.binding_gap = ratio - (table.onpath_value() - table.at(1, 1));
  return result;
}

Prop1Audit prop1_deviation_audit(const TradeTerms& terms, const MarketParams& params,
                                 const CostSpec& cost) {
  const BilateralBenchmark cap = bilateral_quality(params, cost, Protocol::simultaneous);
  const double p_cap = *cap.price;
  const double q_cap = cap.quality;
  const double lambda_over_r = params.lambda_bs / params.discount_rate;
  const double compliance = (q_cap - cost(q_cap)) * (1.0 + lambda_over_r);

  Prop1Audit audit;
  audit.seller_gain = terms.price - p_cap;
  audit.buyer_gain = terms.quality - q_cap;
  audit.summed_gain = (terms.price + terms.quality) - compliance;
  audit.deviation_profitable = std::max(audit.seller_gain, audit.buyer_gain) > kStrictIneqTol;
  audit.report.entries.push_back(
      make_ic_entry("Prop1Sum", compliance, terms.price + terms.quality));
  return audit;
}

SolveReport solve_benchmarks(const MarketParams& params, const CostSpec& cost) {
  SolveReport report;
  const BilateralBenchmark sim = bilateral_quality(params, cost, Protocol::simultaneous);
  const BilateralBenchmark one_sided =
      bilateral_quality(params, cost, Protocol::seller_first);
  report.q_bilateral_sim = sim.quality;
  report.p_bilateral_sim = *sim.price;
  report.q_bilateral_sf = one_sided.quality;

  const ValueTable table = compute_value_table(params);
  const NaiveBenchmark naive = naive_benchmark_buyer_first(params, cost, table);
  report.q_star_bf = naive.quality;
  report.target_ratio = naive.target_ratio;
  report.v_bs = naive.v_bs;
  report.flags = naive.flags;

  char buffer[96];
  for (double q : {sim.quality, one_sided.quality, naive.quality}) {
    if (q >= params.q_max) {
      std::snprintf(buffer, sizeof(buffer), "quality bound q_max binds at q=%.15g", q);
      report.flags.push_back(buffer);
      break;
    }
  }
  // q - c(q) must still be increasing where trade happens; report, don't fail.
  if (cost.marginal(naive.quality) >= 1.0) {
    std::snprintf(buffer, sizeof(buffer),
                  "surplus q-c(q) not increasing at q_star_bf=%.15g", naive.quality);
    report.flags.push_back(buffer);
  }
  return report;
}

std::string SolveReport::to_json_text() const {
  nlohmann::json doc;
  doc["q_bilateral_sim"] = q_bilateral_sim;
  doc["p_bilateral_sim"] = p_bilateral_sim;
  doc["q_bilateral_sf"] = q_bilateral_sf;
  doc["q_star_bf"] = q_star_bf;
  doc["target_ratio"] = target_ratio;
  if (v_bs)
    doc["v_bs"] = *v_bs;
  else
    doc["v_bs"] = nullptr;
  doc["flags"] = flags;
  return doc.dump(2);
}

}  // namespace ostra
