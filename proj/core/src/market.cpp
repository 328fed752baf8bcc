#include "ostra/market.hpp"

#include <stdexcept>

#include "json_util.hpp"
#include "ostra/rootfind.hpp"

namespace ostra {

Side immune_side(Protocol protocol) {
  switch (protocol) {
    case Protocol::simultaneous: return Side::none;
    case Protocol::buyer_first: return Side::buyers;
    case Protocol::seller_first: return Side::sellers;
  }
  return Side::none;
}

std::string_view protocol_name(Protocol protocol) {
  switch (protocol) {
    case Protocol::simultaneous: return "simultaneous";
    case Protocol::buyer_first: return "buyer_first";
    case Protocol::seller_first: return "seller_first";
  }
  return "simultaneous";
}

std::optional<Protocol> protocol_from_name(std::string_view name) {
  if (name == "simultaneous") return Protocol::simultaneous;
  if (name == "buyer_first") return Protocol::buyer_first;
  if (name == "seller_first") return Protocol::seller_first;
  return std::nullopt;
}

ValidationReport validate_params(const MarketParams& params, const CostSpec& cost) {
  ValidationReport report;
  auto require = [&report](bool ok, const std::string& message) {
    if (!ok) report.violations.push_back(message);
  };
  require(params.buyer_count >= 1, "B must be >= 1");
  require(params.seller_count >= 1, "S must be >= 1");
  require(params.lambda_bs > 0.0, "lambda_bs must be > 0");
  require(params.lambda_bb > 0.0, "lambda_bb must be > 0");
  require(params.lambda_ss > 0.0, "lambda_ss must be > 0");
  require(params.discount_rate > 0.0, "r must be > 0");
  require(params.q_max > 0.0, "q_max must be > 0");
  require(cost.a > 0.0, "cost coefficient a must be > 0");
  require(cost.gamma > 1.0, "cost must be strictly convex (gamma > 1)");
  return report;
}

double avg_cost_ratio_inverse(const CostSpec& cost, double target) {
  if (target < 0.0)
    throw std::domain_error("avg_cost_ratio_inverse: target must be >= 0");
  if (target == 0.0) return 0.0;
  return std::pow(target / cost.a, 1.0 / (cost.gamma - 1.0));
}

double avg_cost_ratio_inverse_bisect(const CostSpec& cost, double target) {
  if (target < 0.0)
    throw std::domain_error("avg_cost_ratio_inverse: target must be >= 0");
  if (target == 0.0) return 0.0;
  double hi = 1.0;
  while (cost.avg_ratio(hi) < target) hi *= 2.0;
  return bisect_increasing([&cost](double q) { return cost.avg_ratio(q); }, target,
                           0.0, hi, 1e-14);
}

std::pair<MarketParams, CostSpec> detail::params_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("params: expected a JSON object");
  detail::reject_unknown_keys(
      doc, {"B", "S", "lambda_bs", "lambda_bb", "lambda_ss", "r", "q_max", "cost"},
      "params");
  MarketParams params;
  params.buyer_count = detail::require_int(doc, "B", "params");
  params.seller_count = detail::require_int(doc, "S", "params");
  params.lambda_bs = detail::require_number(doc, "lambda_bs", "params");
  params.lambda_bb = detail::require_number(doc, "lambda_bb", "params");
  params.lambda_ss = detail::require_number(doc, "lambda_ss", "params");
  params.discount_rate = detail::require_number(doc, "r", "params");
  params.q_max = detail::require_number(doc, "q_max", "params");

  if (!doc.contains("cost") || !doc.at("cost").is_object())
    throw std::invalid_argument("params: missing \"cost\" object");
  const nlohmann::json& cost_doc = doc.at("cost");
  detail::reject_unknown_keys(cost_doc, {"a", "gamma"}, "params.cost");
  CostSpec cost;
  cost.a = detail::require_number(cost_doc, "a", "params.cost");
  cost.gamma = detail::require_number(cost_doc, "gamma", "params.cost");
  return {params, cost};
}

std::pair<MarketParams, CostSpec> params_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("params: invalid JSON: ") + err.what());
  }
  return detail::params_from_json(doc);
}

std::string params_to_json_text(const MarketParams& params, const CostSpec& cost) {
  nlohmann::json doc;
  doc["B"] = params.buyer_count;
  doc["S"] = params.seller_count;
  doc["lambda_bs"] = params.lambda_bs;
  doc["lambda_bb"] = params.lambda_bb;
  doc["lambda_ss"] = params.lambda_ss;
  doc["r"] = params.discount_rate;
  doc["q_max"] = params.q_max;
  doc["cost"] = {{"a", cost.a}, {"gamma", cost.gamma}};
  return doc.dump(2);
}

}  // namespace ostra
