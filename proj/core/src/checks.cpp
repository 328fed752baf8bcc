#include "ostra/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "ostra/events.hpp"
#include "ostra/guilt.hpp"
#include "ostra/simulator.hpp"
#include "ostra/value_table.hpp"

namespace ostra {

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

double log_uniform(Xoshiro256pp& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform01() * (std::log(hi) - std::log(lo)));
}

using CheckFn = std::function<std::pair<bool, std::string>()>;

void run_check(std::vector<CheckResult>& results, const std::string& name,
               const CheckFn& fn) {
  CheckResult result;
  result.name = name;
  try {
    auto [passed, detail] = fn();
    result.passed = passed;
    result.detail = detail;
  } catch (const std::exception& err) {
    result.passed = false;
    result.detail = std::string("exception: ") + err.what();
  }
  results.push_back(std::move(result));
}

// ---- core-model invariants ------------------------------------------------

std::pair<bool, std::string> check_avg_ratio_monotone(const CostSpec& cost,
                                                      std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  for (int i = 0; i < 500; ++i) {
    const double q1 = log_uniform(rng, 1e-8, 1e3);
    const double q2 = q1 * (1.0 + rng.uniform_open01());
    if (!(cost.avg_ratio(q1) < cost.avg_ratio(q2)))
      return {false, "c(q)/q not strictly increasing at q=" + format_double(q1)};
  }
  return {true, "500 random pairs"};
}

std::pair<bool, std::string> check_inverse_round_trip(const CostSpec& cost) {
  double worst = 0.0;
  for (int i = 0; i <= 90; ++i) {
    const double target = std::pow(10.0, -6.0 + i * 0.1);  // 1e-6 .. 1e3
    const double q = avg_cost_ratio_inverse(cost, target);
    worst = std::max(worst, std::abs(cost.avg_ratio(q) - target) / target);
  }
  return {worst <= 1e-10, "max relative error " + format_double(worst)};
}

std::pair<bool, std::string> check_inverse_bisection(const CostSpec& cost) {
  double worst = 0.0;
  for (int i = 0; i <= 90; ++i) {
    const double target = std::pow(10.0, -6.0 + i * 0.1);
    const double closed = avg_cost_ratio_inverse(cost, target);
    const double bisected = avg_cost_ratio_inverse_bisect(cost, target);
    worst = std::max(worst, std::abs(closed - bisected) / std::max(1e-300, closed));
  }
  return {worst <= 1e-10, "max relative disagreement " + format_double(worst)};
}

std::pair<bool, std::string> check_validate_pure(const MarketParams& params,
                                                 const CostSpec& cost) {
  MarketParams broken = params;
  broken.discount_rate = 0.0;
  for (const MarketParams* p : {&params, &std::as_const(broken)}) {
    const auto first = validate_params(*p, cost);
    const auto second = validate_params(*p, cost);
    if (first.violations != second.violations) return {false, "reports differ"};
  }
  return {true, ""};
}

// ---- diffusion invariants ---------------------------------------------------

std::pair<bool, std::string> check_recursion_residual(const MarketParams& params,
                                                      int draws, std::uint64_t seed) {
  double worst = compute_value_table(params).max_recursion_residual();
  Xoshiro256pp rng(seed);
  for (int i = 0; i < draws; ++i)
    worst = std::max(worst,
                     compute_value_table(random_market_draw(rng)).max_recursion_residual());
  return {worst <= 1e-12, "max residual " + format_double(worst)};
}

std::pair<bool, std::string> check_identity(int draws, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const MarketParams draw = random_market_draw(rng);
    const ValueTable table = compute_value_table(draw);
    const double lhs = naive_target_ratio(draw, *viscosity(table));
    const double rhs = table.onpath_value() - table.at(1, 1);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
  }
  return {worst <= 1e-12, "max relative gap " + format_double(worst)};
}

std::pair<bool, std::string> check_value_monotonicity(const MarketParams& params,
                                                      int draws, std::uint64_t seed) {
  double worst = compute_value_table(params).max_monotonicity_violation();
  Xoshiro256pp rng(seed);
  for (int i = 0; i < draws; ++i)
    worst = std::max(
        worst, compute_value_table(random_market_draw(rng)).max_monotonicity_violation());
  return {worst <= 1e-12, "max violation " + format_double(worst)};
}

std::pair<bool, std::string> check_marginal_gap(const MarketParams& params, int draws,
                                                std::uint64_t seed) {
  double worst = compute_value_table(params).max_marginal_gap_excess();
  Xoshiro256pp rng(seed);
  for (int i = 0; i < draws; ++i)
    worst = std::max(
        worst, compute_value_table(random_market_draw(rng)).max_marginal_gap_excess());
  return {worst <= 1e-12, "max excess over on-path gap " + format_double(worst)};
}

std::pair<bool, std::string> check_coupling(int instances, std::uint64_t seed) {
  MarketParams params;
  params.buyer_count = 4;
  params.seller_count = 3;
  Xoshiro256pp rng(seed);
  for (int i = 0; i < instances; ++i) {
    GuiltState base;
    base.seller = seller_id(0, params);
    base.informed_sellers.insert(base.seller);
    for (;;) {
      base.informed_buyers.clear();
      for (int b = 0; b < params.buyer_count; ++b)
        if (rng.coin()) base.informed_buyers.insert(buyer_id(b));
      if (static_cast<int>(base.informed_buyers.size()) < params.buyer_count) break;
    }
    for (int s = 1; s < params.seller_count; ++s)
      if (rng.coin()) base.informed_sellers.insert(seller_id(s, params));
    PlayerId extra;
    do {
      extra = buyer_id(static_cast<int>(rng.below(params.buyer_count)));
    } while (base.informed_buyers.count(extra));
    const LinkSequence xi = sample_event_stream(params, 3.0, rng.next());
    const CouplingResult result = coupling_check(base, extra, xi, params);
    if (!result.holds) {
      std::ostringstream detail;
      detail << "violated at instance " << i << ", step " << result.witness->first
             << ", player " << player_name(result.witness->second, params);
      return {false, detail.str()};
    }
  }
  return {true, std::to_string(instances) + " instances"};
}

std::pair<bool, std::string> check_mc_agreement(const MarketParams& params,
                                                int replications, std::uint64_t seed) {
  const ValueTable table = compute_value_table(params);
  // Full grid when small, corner states otherwise.
  std::vector<std::pair<int, int>> states;
  if (params.buyer_count * params.seller_count <= 6) {
    for (int k_b = 1; k_b <= params.buyer_count; ++k_b)
      for (int k_s = 1; k_s <= params.seller_count; ++k_s) states.push_back({k_b, k_s});
  } else {
    states = {{1, 1},
              {1, params.seller_count},
              {params.buyer_count, 1},
              {params.buyer_count, params.seller_count},
              {(1 + params.buyer_count) / 2, (1 + params.seller_count) / 2}};
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
  }
  std::ostringstream detail;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto [k_b, k_s] = states[i];
    const McEstimate estimate =
        mc_estimate_value(params, k_b, k_s, replications, derive_stream_seed(seed, i));
    const double gap = std::abs(estimate.mean - table.at(k_b, k_s));
    if (gap > std::max(3.0 * estimate.std_error, 1e-12)) {
      detail << "V(" << k_b << "," << k_s << "): mc " << estimate.mean << " vs analytic "
             << table.at(k_b, k_s) << " (se " << estimate.std_error << ")";
      return {false, detail.str()};
    }
  }
  detail << states.size() << " states within 3 standard errors";
  return {true, detail.str()};
}

// ---- equilibrium invariants -------------------------------------------------

std::pair<bool, std::string> check_ordering(int draws, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  for (int i = 0; i < draws; ++i) {
    const MarketParams draw = random_market_draw(rng);
    const CostSpec cost;
    const SolveReport report = solve_benchmarks(draw, cost);
    const double q_sf = report.q_bilateral_sf;
    if (!(report.q_star_bf >= q_sf - kWeakIneqTol) ||
        !(q_sf >= report.q_bilateral_sim - kWeakIneqTol))
      return {false, "ordering failed at draw " + std::to_string(i)};
  }
  return {true, std::to_string(draws) + " draws"};
}

std::pair<bool, std::string> check_binding_construction(int draws, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  const CostSpec cost;
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const MarketParams draw = random_market_draw(rng);
    const ValueTable table = compute_value_table(draw);
    const NaiveBenchmark naive = naive_benchmark_buyer_first(draw, cost, table);
    const TradeTerms terms{naive.quality, naive.quality};
    const ICReport report = check_onpath_ic(Protocol::buyer_first, terms, draw, cost, table);
    worst = std::max(worst, std::abs(report.find("SellerBF")->slack));
  }
  return {worst <= 1e-10, "max |SellerBF slack| " + format_double(worst)};
}

std::pair<bool, std::string> check_offpath_grid(int draws, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  const CostSpec cost;
  double worst_gap = 0.0;
  for (int i = 0; i < draws; ++i) {
    const MarketParams draw = random_market_draw(rng);
    const ValueTable table = compute_value_table(draw);
    const NaiveBenchmark naive = naive_benchmark_buyer_first(draw, cost, table);
    const OffPathReport offpath = check_offpath_ic(naive.quality, table, cost);
    if (!offpath.report.all_satisfied())
      return {false, "grid entry violated at draw " + std::to_string(i)};
    worst_gap = std::max(worst_gap, std::abs(offpath.binding_gap));
  }
  return {worst_gap <= 1e-10,
          "grids hold; max |binding gap| " + format_double(worst_gap)};
}

std::pair<bool, std::string> check_comparative_statics(const MarketParams& params) {
  const CostSpec cost;
  auto target_of = [&cost](const MarketParams& p) {
    return naive_benchmark_buyer_first(p, cost, compute_value_table(p)).target_ratio;
  };
  double previous = -1.0;
  for (int b = 2; b <= 6; ++b) {
    MarketParams p = params;
    p.buyer_count = b;
    const double target = target_of(p);
    if (target < previous - kWeakIneqTol)
      return {false, "target ratio decreased in B at B=" + std::to_string(b)};
    previous = target;
  }
  for (auto member : {&MarketParams::lambda_bs, &MarketParams::lambda_bb,
                      &MarketParams::lambda_ss}) {
    double last = -1.0;
    for (double factor : {0.5, 1.0, 2.0, 4.0}) {
      MarketParams p = params;
      p.*member *= factor;
      const double target = target_of(p);
      if (target < last - kWeakIneqTol)
        return {false, "target ratio decreased in a meeting rate"};
      last = target;
    }
  }
  return {true, "non-decreasing in B and in each meeting rate"};
}

std::pair<bool, std::string> check_prop1_grid(int draws, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  const CostSpec cost;
  for (int i = 0; i < draws; ++i) {
    const MarketParams draw = random_market_draw(rng);
    const BilateralBenchmark cap = bilateral_quality(draw, cost, Protocol::simultaneous);
    const double keep = draw.lambda_bs / (draw.discount_rate + draw.lambda_bs);
    for (int qi = 1; qi <= 50; ++qi) {
      const double q = cap.quality * (1.0 + qi / 50.0);
      for (int pi = 0; pi < 10; ++pi) {
        const double p = cost(q) + (q - cost(q)) * pi / 9.0;
        const Prop1Audit audit = prop1_deviation_audit({p, q}, draw, cost);
        if (!audit.deviation_profitable)
          return {false, "no profitable concealment deviation at q=" + format_double(q) +
                             ", p=" + format_double(p)};
        // The summed display applies above the binding price line.
        if (p >= q * keep - 1e-15 && !(audit.summed_gain > 0.0))
          return {false, "summed gain not positive at q=" + format_double(q)};
      }
    }
    for (int qi = 0; qi <= 50; ++qi) {
      const double q = cap.quality * qi / 50.0;
      const double p = q * keep;  // binding buyer-side price
      const Prop1Audit audit = prop1_deviation_audit({p, q}, draw, cost);
      if (std::max(audit.seller_gain, audit.buyer_gain) > 1e-12 ||
          audit.summed_gain > 1e-12)
        return {false, "positive gain below the bilateral cap at q=" + format_double(q)};
    }
  }
  return {true, std::to_string(draws) + " draws, 50x10 grid each"};
}

std::pair<bool, std::string> check_onpath_at_terms(const MarketParams& params,
                                                   const CostSpec& cost,
                                                   Protocol protocol,
                                                   const VerifyOptions& options,
                                                   ICReport* out_report) {
  MarketParams market = params;
  Protocol effective = protocol;
  if (protocol == Protocol::seller_first) {
    std::swap(market.buyer_count, market.seller_count);
    std::swap(market.lambda_bb, market.lambda_ss);
    effective = Protocol::buyer_first;
  }
  const ValueTable table = compute_value_table(market);

  TradeTerms terms;
  if (options.forced_terms) {
    terms = *options.forced_terms;
  } else if (effective == Protocol::buyer_first) {
    const double q = naive_benchmark_buyer_first(market, cost, table).quality;
    terms = {q, q};
  } else {
    const BilateralBenchmark cap = bilateral_quality(market, cost, effective);
    terms = {*cap.price, cap.quality};
  }

  if (effective == Protocol::simultaneous) {
    const BilateralBenchmark cap = bilateral_quality(market, cost, effective);
    if (terms.quality > cap.quality + kWeakIneqTol) {
      // Above the bilateral cap no terms are sustainable; the audit must
      // confirm a profitable concealment deviation instead.
      const Prop1Audit audit = prop1_deviation_audit(terms, market, cost);
      if (out_report) *out_report = audit.report;
      return {audit.deviation_profitable,
              audit.deviation_profitable ? "impossibility confirmed above bilateral cap"
                                         : "expected profitable deviation not found"};
    }
  }
  const ICReport report = check_onpath_ic(effective, terms, market, cost, table);
  if (out_report) *out_report = report;
  if (!report.all_satisfied()) {
    std::ostringstream detail;
    for (const ICEntry& entry : report.entries)
      if (!entry.satisfied)
        detail << entry.name << " slack " << format_double(entry.slack) << "; ";
    return {false, detail.str()};
  }
  return {true, "all on-path constraints hold"};
}

// ---- simulator invariants ---------------------------------------------------

Scenario default_deviation(const MarketParams& params, Protocol protocol) {
  const PlayerId deviator = immune_side(protocol) == Side::buyers
                                ? seller_id(0, params)
                                : buyer_id(0);
  return inject_deviation(params, protocol, deviator);
}

std::pair<bool, std::string> check_determinism(const MarketParams& params,
                                               const CostSpec& cost, Protocol protocol,
                                               std::uint64_t seed) {
  const Scenario scenario = default_deviation(params, protocol);
  const TradeTerms terms{0.5, 0.5};
  const double horizon = 10.0;
  const Trace first = run_replication(params, cost, protocol, terms, scenario, seed, horizon);
  const Trace second = run_replication(params, cost, protocol, terms, scenario, seed, horizon);
  std::ostringstream a, b;
  first.write_jsonl(a);
  second.write_jsonl(b);
  if (a.str() != b.str()) return {false, "serialized traces differ"};
  if (first.payoffs != second.payoffs) return {false, "payoffs differ"};
  return {true, std::to_string(first.records.size()) + " interactions, bit-identical"};
}

bool is_subset(const std::vector<PlayerId>& small, const std::vector<PlayerId>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<PlayerId> without(std::vector<PlayerId> ids,
                              std::initializer_list<PlayerId> drop) {
  std::erase_if(ids, [&drop](PlayerId id) {
    return std::find(drop.begin(), drop.end(), id) != drop.end();
  });
  return ids;
}

std::pair<bool, std::string> check_trace_invariants(const MarketParams& params,
                                                    const CostSpec& cost,
                                                    Protocol protocol,
                                                    std::uint64_t seed,
                                                    bool union_property) {
  const Side immune = immune_side(protocol);
  for (int rep = 0; rep < 10; ++rep) {
    for (bool deviate : {false, true}) {
      const Scenario scenario =
          deviate ? default_deviation(params, protocol) : onpath_scenario();
      const Trace trace = run_replication(params, cost, protocol, {0.5, 0.5}, scenario,
                                          derive_stream_seed(seed, rep), 20.0);
      std::vector<std::vector<PlayerId>> last(player_count(params));
      for (const InteractionRecord& rec : trace.records) {
        for (const auto& [id, comm, trade] :
             {std::tuple{rec.link.a, &rec.comm_a, &rec.trade_a},
              std::tuple{rec.link.b, &rec.comm_b, &rec.trade_b}}) {
          // States change only at one's own meetings and only grow.
          if (comm->before != last[id]) return {false, "state changed between meetings"};
          if (!is_subset(comm->before, comm->after) ||
              !is_subset(comm->after, trade->after))
            return {false, "guilty set shrank"};
          for (PlayerId p : trade->after) {
            const bool buyer = is_buyer(p, params);
            if ((immune == Side::buyers && buyer) || (immune == Side::sellers && !buyer))
              return {false, "immune player labeled guilty"};
          }
          last[id] = trade->after;
        }
        if (union_property) {
          // After talking, both partners agree about all third parties, and
          // each has absorbed everything the other knew about non-immune
          // others.
          const auto a_view = without(rec.comm_a.after, {rec.link.a, rec.link.b});
          const auto b_view = without(rec.comm_b.after, {rec.link.a, rec.link.b});
          if (a_view != b_view) return {false, "post-communication states disagree"};
          auto absorbable = [&](const std::vector<PlayerId>& before, PlayerId self) {
            std::vector<PlayerId> ids = without(before, {self});
            std::erase_if(ids, [&](PlayerId p) {
              const bool buyer = is_buyer(p, params);
              return (immune == Side::buyers && buyer) ||
                     (immune == Side::sellers && !buyer);
            });
            return ids;
          };
          if (!is_subset(absorbable(rec.comm_b.before, rec.link.b), rec.comm_a.after) ||
              !is_subset(absorbable(rec.comm_a.before, rec.link.a), rec.comm_b.after))
            return {false, "partner knowledge not absorbed"};
        }
        if (!deviate && (!rec.comm_a.after.empty() || !rec.comm_b.after.empty()))
          return {false, "guilt appeared on the equilibrium path"};
      }
    }
  }
  return {true, "10 seeds, on-path and deviation scenarios"};
}

std::pair<bool, std::string> check_absorption(const MarketParams& params,
                                              const CostSpec& cost, Protocol protocol,
                                              int replications, std::uint64_t seed) {
  const double min_rate =
      std::min({params.lambda_bs, params.lambda_bb, params.lambda_ss});
  const double horizon = 50.0 / min_rate;
  const Scenario scenario = default_deviation(params, protocol);
  const TradeTerms terms{0.5, 0.5};
  const auto summaries = run_replications(params, cost, protocol, terms, scenario,
                                          replications, seed, horizon);
  int absorbed = 0;
  for (const ReplicationSummary& summary : summaries)
    if (summary.absorption_time) ++absorbed;
  const double fraction = double(absorbed) / replications;
  return {fraction > 0.99, "absorbed fraction " + format_double(fraction)};
}

std::pair<bool, std::string> check_payoff_accounting(const MarketParams& params,
                                                     const CostSpec& cost,
                                                     Protocol protocol,
                                                     int replications,
                                                     std::uint64_t seed) {
  const double horizon = 5.0 / params.discount_rate;
  // Any strictly profitable terms work; the closed form only needs p, q.
  const TradeTerms terms{0.5, 0.5};
  const auto summaries = run_replications(params, cost, protocol, terms,
                                          onpath_scenario(), replications, seed, horizon);
  const PlayerId seller = seller_id(0, params);
  double mean = 0.0;
  for (const auto& summary : summaries) mean += summary.payoffs[seller];
  mean /= replications;
  double ss = 0.0;
  for (const auto& summary : summaries)
    ss += (summary.payoffs[seller] - mean) * (summary.payoffs[seller] - mean);
  const double se = std::sqrt(ss / (double(replications) * (replications - 1)));
  const double r = params.discount_rate;
  const double expected = (terms.price - cost(terms.quality)) * params.buyer_count *
                          params.lambda_bs * (1.0 - std::exp(-r * horizon)) / r;
  const bool ok = std::abs(mean - expected) <= 3.0 * se;
  return {ok, "mean " + format_double(mean) + " vs closed form " +
                  format_double(expected) + " (se " + format_double(se) + ")"};
}

}  // namespace

MarketParams random_market_draw(Xoshiro256pp& rng) {
  MarketParams params;
  params.buyer_count = 2 + static_cast<int>(rng.below(5));
  params.seller_count = 2 + static_cast<int>(rng.below(5));
  params.lambda_bs = log_uniform(rng, 0.1, 10.0);
  params.lambda_bb = log_uniform(rng, 0.1, 10.0);
  params.lambda_ss = log_uniform(rng, 0.1, 10.0);
  params.discount_rate = log_uniform(rng, 0.1, 10.0);
  return params;
}

std::vector<CheckResult> run_verification(const MarketParams& params,
                                          const CostSpec& cost, Protocol protocol,
                                          const VerifyOptions& options) {
  std::vector<CheckResult> results;
  const std::uint64_t seed = options.seed;
  const int draws = options.draws;

  run_check(results, "core.avg_ratio_monotone",
            [&] { return check_avg_ratio_monotone(cost, derive_stream_seed(seed, 0)); });
  run_check(results, "core.inverse_round_trip",
            [&] { return check_inverse_round_trip(cost); });
  run_check(results, "core.inverse_bisection_agreement",
            [&] { return check_inverse_bisection(cost); });
  run_check(results, "core.validate_pure", [&] { return check_validate_pure(params, cost); });

  run_check(results, "diffusion.recursion_residual", [&] {
    return check_recursion_residual(params, draws, derive_stream_seed(seed, 1));
  });
  run_check(results, "diffusion.identity_binding_vs_formula",
            [&] { return check_identity(draws, derive_stream_seed(seed, 2)); });
  run_check(results, "diffusion.value_monotonicity", [&] {
    return check_value_monotonicity(params, draws, derive_stream_seed(seed, 2));
  });
  run_check(results, "diffusion.marginal_gap_bound", [&] {
    return check_marginal_gap(params, draws, derive_stream_seed(seed, 2));
  });
  run_check(results, "diffusion.coupling_inclusion", [&] {
    return check_coupling(options.coupling_instances, derive_stream_seed(seed, 3));
  });
  run_check(results, "diffusion.mc_agreement", [&] {
    return check_mc_agreement(params, options.mc_replications, derive_stream_seed(seed, 4));
  });

  run_check(results, "equilibrium.benchmark_ordering",
            [&] { return check_ordering(draws, derive_stream_seed(seed, 5)); });
  run_check(results, "equilibrium.binding_construction",
            [&] { return check_binding_construction(draws, derive_stream_seed(seed, 5)); });
  run_check(results, "equilibrium.offpath_grid",
            [&] { return check_offpath_grid(draws, derive_stream_seed(seed, 5)); });
  run_check(results, "equilibrium.comparative_statics",
            [&] { return check_comparative_statics(params); });
  run_check(results, "equilibrium.prop1_grid",
            [&] { return check_prop1_grid(draws, derive_stream_seed(seed, 6)); });
  run_check(results, "equilibrium.onpath_ic_at_terms", [&] {
    return check_onpath_at_terms(params, cost, protocol, options, nullptr);
  });

  run_check(results, "simulator.determinism", [&] {
    return check_determinism(params, cost, protocol, derive_stream_seed(seed, 7));
  });
  run_check(results, "simulator.guilt_monotone_and_immunity", [&] {
    return check_trace_invariants(params, cost, protocol, derive_stream_seed(seed, 8),
                                  false);
  });
  run_check(results, "simulator.union_property", [&] {
    return check_trace_invariants(params, cost, protocol, derive_stream_seed(seed, 8),
                                  true);
  });
  run_check(results, "simulator.absorption", [&] {
    return check_absorption(params, cost, protocol, options.sim_replications,
                            derive_stream_seed(seed, 9));
  });
  run_check(results, "simulator.payoff_accounting", [&] {
    return check_payoff_accounting(params, cost, protocol, options.sim_replications,
                                   derive_stream_seed(seed, 10));
  });
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& result : results)
    if (!result.passed) return false;
  return true;
}

void write_check_csv(const std::vector<CheckResult>& results, std::ostream& out) {
  out << "name,passed,detail\n";
  for (const CheckResult& result : results) {
    std::string detail = result.detail;
    for (char& c : detail)
      if (c == ',' || c == '\n') c = ';';
    out << result.name << ',' << (result.passed ? "true" : "false") << ',' << detail
        << '\n';
  }
}

}  // namespace ostra
