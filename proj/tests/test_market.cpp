#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ostra/market.hpp"
#include "ostra/rng.hpp"

using namespace ostra;

TEST_CASE("validate_params accepts the reference market") {
  MarketParams params;
  params.buyer_count = 2;
  params.seller_count = 1;
  CHECK(validate_params(params, CostSpec{}).ok());
}

TEST_CASE("validate_params reports boundary violations as data") {
  MarketParams params;
  CostSpec cost;

  params.discount_rate = 0.0;
  auto report = validate_params(params, cost);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front() == "r must be > 0");

  params.discount_rate = 1.0;
  cost.gamma = 1.0;  // linear cost breaks c(q)/q increasing
  report = validate_params(params, cost);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front() == "cost must be strictly convex (gamma > 1)");
}

TEST_CASE("validate_params is pure") {
  MarketParams params;
  params.lambda_bb = -1.0;
  params.q_max = 0.0;
  const auto first = validate_params(params, CostSpec{});
  const auto second = validate_params(params, CostSpec{});
  CHECK(first.violations == second.violations);
}

TEST_CASE("cost family shape") {
  const CostSpec cost;
  CHECK(cost(0.0) == 0.0);
  CHECK(cost.marginal(0.0) == 0.0);
  CHECK(cost(1.0) == doctest::Approx(0.5));
  CHECK(cost.avg_ratio(0.0) == 0.0);

  Xoshiro256pp rng(7);
  for (int i = 0; i < 200; ++i) {
    const double q1 = std::exp(rng.uniform01() * 10.0 - 6.0);
    const double q2 = q1 * (1.0 + rng.uniform_open01());
    CHECK(cost.avg_ratio(q1) < cost.avg_ratio(q2));
  }
}

TEST_CASE("avg_cost_ratio_inverse closed form") {
  const CostSpec cost;
  CHECK(avg_cost_ratio_inverse(cost, 0.0) == 0.0);
  CHECK(avg_cost_ratio_inverse(cost, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(avg_cost_ratio_inverse(cost, 5.0 / 9.0) ==
        doctest::Approx(10.0 / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS(avg_cost_ratio_inverse(cost, -1e-9), std::domain_error);
}

TEST_CASE("inverse is a two-sided inverse on a log grid") {
  const CostSpec cost;
  for (int i = 0; i <= 90; ++i) {
    const double target = std::pow(10.0, -6.0 + 0.1 * i);
    const double q = avg_cost_ratio_inverse(cost, target);
    CHECK(std::abs(cost.avg_ratio(q) - target) <= 1e-10 * target);
  }
}

TEST_CASE("bisection route agrees with the closed form") {
  for (const CostSpec cost : {CostSpec{0.5, 2.0}, CostSpec{2.0, 1.5}, CostSpec{0.1, 3.0}}) {
    for (int i = 0; i <= 45; ++i) {
      const double target = std::pow(10.0, -6.0 + 0.2 * i);
      const double closed = avg_cost_ratio_inverse(cost, target);
      const double bisected = avg_cost_ratio_inverse_bisect(cost, target);
      CHECK(std::abs(closed - bisected) <= 1e-10 * closed);
    }
  }
}

TEST_CASE("protocol immunity") {
  CHECK(immune_side(Protocol::simultaneous) == Side::none);
  CHECK(immune_side(Protocol::buyer_first) == Side::buyers);
  CHECK(immune_side(Protocol::seller_first) == Side::sellers);
  for (Protocol p : {Protocol::simultaneous, Protocol::buyer_first, Protocol::seller_first})
    CHECK((immune_side(p) == Side::none) == (p == Protocol::simultaneous));
  CHECK(protocol_from_name("buyer_first") == Protocol::buyer_first);
  CHECK_FALSE(protocol_from_name("barter").has_value());
}

TEST_CASE("params JSON round trip and strictness") {
  const std::string text = R"({
    "B": 3, "S": 2, "lambda_bs": 1.5, "lambda_bb": 0.5, "lambda_ss": 0.25,
    "r": 2.0, "q_max": 1e6, "cost": {"a": 0.5, "gamma": 2.0}
  })";
  const auto [params, cost] = params_from_json_text(text);
  CHECK(params.buyer_count == 3);
  CHECK(params.seller_count == 2);
  CHECK(params.lambda_ss == 0.25);
  CHECK(params.discount_rate == 2.0);
  CHECK(cost.gamma == 2.0);

  const auto [back, back_cost] = params_from_json_text(params_to_json_text(params, cost));
  CHECK(back.lambda_bs == params.lambda_bs);
  CHECK(back_cost.a == cost.a);

  CHECK_THROWS_AS(params_from_json_text(R"({"B": 1})"), std::invalid_argument);
  CHECK_THROWS_AS(
      params_from_json_text(
          R"({"B":2,"S":1,"lambda_bs":1,"lambda_bb":1,"lambda_ss":1,"r":1,
              "q_max":1e6,"cost":{"a":0.5,"gamma":2},"extra":0})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      params_from_json_text(
          R"({"B":2,"S":1,"lambda_bs":1,"lambda_bb":1,"lambda_ss":1,"r":1,
              "q_max":1e6,"cost":{"a":0.5,"gamma":2,"b":1}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(params_from_json_text("not json"), std::invalid_argument);
}
