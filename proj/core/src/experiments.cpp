#include "ostra/experiments.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"
#include "ostra/simulator.hpp"

namespace ostra {

namespace {

using nlohmann::json;

constexpr const char* kSweepKeys[] = {"B",         "S", "lambda_bs", "lambda_bb",
                                      "lambda_ss", "r", "a",         "gamma"};

std::optional<TradeTerms> parse_terms(const json& parent, const char* where) {
  if (!parent.contains("terms")) return std::nullopt;
  const json& doc = parent.at("terms");
  detail::reject_unknown_keys(doc, {"p", "q"}, where);
  TradeTerms terms;
  terms.quality = detail::require_number(doc, "q", where);
  terms.price = doc.contains("p") ? detail::require_number(doc, "p", where) : terms.quality;
  return terms;
}

void apply_sweep_point(MarketParams& params, CostSpec& cost, const std::string& key,
                       double value) {
  if (key == "B")
    params.buyer_count = static_cast<int>(value);
  else if (key == "S")
    params.seller_count = static_cast<int>(value);
  else if (key == "lambda_bs")
    params.lambda_bs = value;
  else if (key == "lambda_bb")
    params.lambda_bb = value;
  else if (key == "lambda_ss")
    params.lambda_ss = value;
  else if (key == "r")
    params.discount_rate = value;
  else if (key == "a")
    cost.a = value;
  else
    cost.gamma = value;
}

std::ofstream open_output(const std::filesystem::path& out_dir,
                          const std::string& filename) {
  std::filesystem::create_directories(out_dir);
  std::ofstream stream(out_dir / filename, std::ios::binary);
  if (!stream)
    throw std::runtime_error("cannot open output file: " + (out_dir / filename).string());
  return stream;
}

void require_valid(const MarketParams& params, const CostSpec& cost) {
  const ValidationReport report = validate_params(params, cost);
  if (report.ok()) return;
  std::ostringstream message;
  message << "invalid parameters:";
  for (const std::string& violation : report.violations) message << ' ' << violation << ';';
  throw std::invalid_argument(message.str());
}

std::string csv_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.15g", value);
  return buffer;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string joined;
  for (const std::string& flag : flags) {
    if (!joined.empty()) joined += "; ";
    joined += flag;
  }
  return joined;
}

}  // namespace

std::size_t SweepGrid::point_count() const {
  if (axes.empty()) return 0;
  std::size_t count = 1;
  for (const auto& [key, values] : axes) count *= values.size();
  return count;
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  detail::reject_unknown_keys(doc, {"params", "protocol", "verify", "sweep", "simulate"},
                              "config");
  if (!doc.contains("params"))
    throw std::invalid_argument("config: missing \"params\" object");

  ExperimentConfig config;
  std::tie(config.params, config.cost) = detail::params_from_json(doc.at("params"));

  if (doc.contains("protocol")) {
    const auto name = doc.at("protocol").get<std::string>();
    const auto protocol = protocol_from_name(name);
    if (!protocol)
      throw std::invalid_argument("config: unknown protocol \"" + name + "\"");
    config.protocol = *protocol;
  }

  if (doc.contains("verify")) {
    const json& block = doc.at("verify");
    detail::reject_unknown_keys(block,
                                {"draws", "coupling_instances", "mc_replications",
                                 "sim_replications", "seed", "terms"},
                                "config.verify");
    if (block.contains("draws"))
      config.verify.draws = detail::require_int(block, "draws", "config.verify");
    if (block.contains("coupling_instances"))
      config.verify.coupling_instances =
          detail::require_int(block, "coupling_instances", "config.verify");
    if (block.contains("mc_replications"))
      config.verify.mc_replications =
          detail::require_int(block, "mc_replications", "config.verify");
    if (block.contains("sim_replications"))
      config.verify.sim_replications =
          detail::require_int(block, "sim_replications", "config.verify");
    if (block.contains("seed"))
      config.verify.seed = block.at("seed").get<std::uint64_t>();
    config.verify.forced_terms = parse_terms(block, "config.verify.terms");
  }

  if (doc.contains("sweep")) {
    const json& block = doc.at("sweep");
    detail::reject_unknown_keys(block, {"grid"}, "config.sweep");
    if (!block.contains("grid") || !block.at("grid").is_object())
      throw std::invalid_argument("config.sweep: missing \"grid\" object");
    const json& grid = block.at("grid");
    detail::reject_unknown_keys(
        grid, {"B", "S", "lambda_bs", "lambda_bb", "lambda_ss", "r", "a", "gamma"},
        "config.sweep.grid");
    SweepGrid sweep;
    for (const char* key : kSweepKeys) {
      if (!grid.contains(key)) continue;
      const json& axis = grid.at(key);
      if (!axis.is_array())
        throw std::invalid_argument(std::string("config.sweep.grid: \"") + key +
                                    "\" must be an array");
      std::vector<double> values;
      for (const json& value : axis) {
        if (!value.is_number())
          throw std::invalid_argument(std::string("config.sweep.grid: \"") + key +
                                      "\" must hold numbers");
        values.push_back(value.get<double>());
      }
      sweep.axes.emplace_back(key, std::move(values));
    }
    config.sweep = std::move(sweep);
  }

  if (doc.contains("simulate")) {
    const json& block = doc.at("simulate");
    detail::reject_unknown_keys(
        block, {"scenario", "deviator", "replications", "horizon", "seed", "traces", "terms"},
        "config.simulate");
    if (block.contains("scenario"))
      config.simulate.scenario = block.at("scenario").get<std::string>();
    if (block.contains("deviator"))
      config.simulate.deviator = block.at("deviator").get<std::string>();
    if (block.contains("replications"))
      config.simulate.replications =
          detail::require_int(block, "replications", "config.simulate");
    if (block.contains("horizon"))
      config.simulate.horizon = detail::require_number(block, "horizon", "config.simulate");
    if (block.contains("seed"))
      config.simulate.seed = block.at("seed").get<std::uint64_t>();
    if (block.contains("traces"))
      config.simulate.write_traces = block.at("traces").get<bool>();
    config.simulate.terms = parse_terms(block, "config.simulate.terms");
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) throw std::invalid_argument("cannot read config file: " + path.string());
  std::stringstream buffer;
  buffer << stream.rdbuf();
  return config_from_json_text(buffer.str());
}

int cmd_solve(const ExperimentConfig& config, const std::filesystem::path& out_dir,
              std::ostream& log) {
  require_valid(config.params, config.cost);
  const SolveReport report = solve_benchmarks(config.params, config.cost);
  const ValueTable table = compute_value_table(config.params);

  {
    auto out = open_output(out_dir, "solve.json");
    out << report.to_json_text() << '\n';
  }
  {
    auto out = open_output(out_dir, "value_table.csv");
    table.write_csv(out);
  }
  {
    const TradeTerms terms{report.q_star_bf, report.q_star_bf};
    const ICReport onpath = check_onpath_ic(Protocol::buyer_first, terms, config.params,
                                            config.cost, table);
    auto out = open_output(out_dir, "onpath_ic.csv");
    onpath.write_csv(out);
  }
  {
    const OffPathReport offpath = check_offpath_ic(report.q_star_bf, table, config.cost);
    auto out = open_output(out_dir, "offpath_ic.csv");
    offpath.report.write_csv(out);
  }

  log << "q_bilateral_sim = " << csv_number(report.q_bilateral_sim) << '\n'
      << "p_bilateral_sim = " << csv_number(report.p_bilateral_sim) << '\n'
      << "q_bilateral_sf  = " << csv_number(report.q_bilateral_sf) << '\n'
      << "q_star_bf       = " << csv_number(report.q_star_bf) << '\n'
      << "target_ratio    = " << csv_number(report.target_ratio) << '\n';
  if (report.v_bs) log << "v_bs            = " << csv_number(*report.v_bs) << '\n';
  const NaiveBenchmark seller_first =
      naive_benchmark_seller_first(config.params, config.cost);
  log << "q_star_sf       = " << csv_number(seller_first.quality) << "  ["
      << join_flags(seller_first.flags) << "]\n";
  if (!report.flags.empty()) log << "flags: " << join_flags(report.flags) << '\n';
  return 0;
}

int cmd_verify(const ExperimentConfig& config, const std::filesystem::path& out_dir,
               std::ostream& log) {
  require_valid(config.params, config.cost);
  const auto results =
      run_verification(config.params, config.cost, config.protocol, config.verify);
  {
    auto out = open_output(out_dir, "verify_checks.csv");
    write_check_csv(results, out);
  }

  // The audited IC reports, re-emitted as CSVs for inspection.
  const ValueTable table = compute_value_table(config.params);
  const NaiveBenchmark naive =
      naive_benchmark_buyer_first(config.params, config.cost, table);
  {
    TradeTerms terms{naive.quality, naive.quality};
    Protocol protocol = config.protocol;
    if (config.verify.forced_terms) terms = *config.verify.forced_terms;
    if (protocol == Protocol::seller_first) protocol = Protocol::buyer_first;
    ICReport onpath;
    if (protocol == Protocol::simultaneous) {
      const BilateralBenchmark cap =
          bilateral_quality(config.params, config.cost, Protocol::simultaneous);
      if (!config.verify.forced_terms) terms = {*cap.price, cap.quality};
      if (terms.quality > cap.quality + kWeakIneqTol)
        onpath = prop1_deviation_audit(terms, config.params, config.cost).report;
      else
        onpath = check_onpath_ic(protocol, terms, config.params, config.cost, table);
    } else {
      onpath = check_onpath_ic(protocol, terms, config.params, config.cost, table);
    }
    auto out = open_output(out_dir, "onpath_ic.csv");
    onpath.write_csv(out);
  }
  {
    const OffPathReport offpath = check_offpath_ic(naive.quality, table, config.cost);
    auto out = open_output(out_dir, "offpath_ic.csv");
    offpath.report.write_csv(out);
  }
  {
    const BilateralBenchmark cap =
        bilateral_quality(config.params, config.cost, Protocol::simultaneous);
    const TradeTerms audited = config.verify.forced_terms
                                   ? *config.verify.forced_terms
                                   : TradeTerms{*cap.price, cap.quality};
    const Prop1Audit audit = prop1_deviation_audit(audited, config.params, config.cost);
    auto out = open_output(out_dir, "prop1_ic.csv");
    audit.report.write_csv(out);
  }

  int failures = 0;
  for (const CheckResult& result : results) {
    log << (result.passed ? "[PASS] " : "[FAIL] ") << result.name;
    if (!result.detail.empty()) log << ": " << result.detail;
    log << '\n';
    if (!result.passed) ++failures;
  }
  log << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
      << '\n';
  return failures == 0 ? 0 : 1;
}

int cmd_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir,
              std::ostream& log) {
  if (!config.sweep || config.sweep->point_count() == 0)
    throw std::invalid_argument("sweep: the grid is empty");
  const SweepGrid& grid = *config.sweep;

  auto out = open_output(out_dir, "sweep.csv");
  out << "B,S,lambda_bs,lambda_bb,lambda_ss,r,a,gamma,"
         "q_bilateral_sim,p_bilateral_sim,q_bilateral_sf,q_star_bf,target_ratio,"
         "v_bs,ordering_ok,flags\n";

  std::vector<std::size_t> index(grid.axes.size(), 0);
  std::size_t rows = 0;
  for (;;) {
    MarketParams params = config.params;
    CostSpec cost = config.cost;
    for (std::size_t axis = 0; axis < grid.axes.size(); ++axis)
      apply_sweep_point(params, cost, grid.axes[axis].first,
                        grid.axes[axis].second[index[axis]]);
    require_valid(params, cost);

    const SolveReport report = solve_benchmarks(params, cost);
    const bool ordering_ok =
        report.q_star_bf >= report.q_bilateral_sf - kWeakIneqTol &&
        report.q_bilateral_sf >= report.q_bilateral_sim - kWeakIneqTol;
    out << params.buyer_count << ',' << params.seller_count << ','
        << csv_number(params.lambda_bs) << ',' << csv_number(params.lambda_bb) << ','
        << csv_number(params.lambda_ss) << ',' << csv_number(params.discount_rate) << ','
        << csv_number(cost.a) << ',' << csv_number(cost.gamma) << ','
        << csv_number(report.q_bilateral_sim) << ',' << csv_number(report.p_bilateral_sim)
        << ',' << csv_number(report.q_bilateral_sf) << ',' << csv_number(report.q_star_bf)
        << ',' << csv_number(report.target_ratio) << ','
        << (report.v_bs ? csv_number(*report.v_bs) : std::string()) << ','
        << (ordering_ok ? "true" : "false") << ',' << join_flags(report.flags) << '\n';
    ++rows;

    // Row-major advance over the axes as listed.
    std::size_t axis = grid.axes.size();
    while (axis > 0) {
      --axis;
      if (++index[axis] < grid.axes[axis].second.size()) break;
      index[axis] = 0;
      if (axis == 0) {
        log << rows << " grid points written\n";
        return 0;
      }
    }
  }
}

int cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                 std::ostream& log) {
  require_valid(config.params, config.cost);
  const SimulateOptions& options = config.simulate;
  if (options.replications < 1)
    throw std::invalid_argument("simulate: replications must be >= 1");

  std::optional<PlayerId> deviator;
  if (options.deviator)
    deviator = player_from_name(*options.deviator, config.params);
  const Scenario scenario =
      scenario_from_id(options.scenario, deviator, config.params, config.protocol);

  TradeTerms terms;
  if (options.terms) {
    terms = *options.terms;
  } else if (config.protocol == Protocol::simultaneous) {
    const BilateralBenchmark cap =
        bilateral_quality(config.params, config.cost, Protocol::simultaneous);
    terms = {*cap.price, cap.quality};
  } else if (config.protocol == Protocol::buyer_first) {
    const double q = solve_benchmarks(config.params, config.cost).q_star_bf;
    terms = {q, q};
  } else {
    const double q = naive_benchmark_seller_first(config.params, config.cost).quality;
    terms = {q, q};
  }

  const bool write_traces = options.write_traces.value_or(options.replications <= 10);
  const auto summaries =
      run_replications(config.params, config.cost, config.protocol, terms, scenario,
                       options.replications, options.seed, options.horizon);

  {
    auto out = open_output(out_dir, "replications.csv");
    out << "replication,deviation_time,absorption_time,deviator_exploitation";
    for (PlayerId id = 0; id < player_count(config.params); ++id)
      out << ",payoff_" << player_name(id, config.params);
    out << '\n';
    for (const ReplicationSummary& summary : summaries) {
      out << summary.replication << ','
          << (summary.deviation_time ? csv_number(*summary.deviation_time) : std::string())
          << ','
          << (summary.absorption_time ? csv_number(*summary.absorption_time)
                                      : std::string())
          << ',' << csv_number(summary.deviator_exploitation);
      for (double payoff : summary.payoffs) out << ',' << csv_number(payoff);
      out << '\n';
    }
  }

  if (write_traces) {
    for (int rep = 0; rep < options.replications; ++rep) {
      const Trace trace =
          run_replication(config.params, config.cost, config.protocol, terms, scenario,
                          derive_stream_seed(options.seed, rep), options.horizon);
      auto out = open_output(out_dir, "trace_rep" + std::to_string(rep) + ".jsonl");
      trace.write_jsonl(out);
    }
  }

  double mean_exploit = 0.0;
  int absorbed = 0;
  for (const ReplicationSummary& summary : summaries) {
    mean_exploit += summary.deviator_exploitation;
    if (summary.absorption_time) ++absorbed;
  }
  mean_exploit /= options.replications;
  log << options.replications << " replication(s), scenario \"" << scenario.id << "\"\n";
  if (scenario.deviator) {
    log << "mean per-unit-price exploitation = " << csv_number(mean_exploit) << '\n'
        << "absorbed fraction = "
        << csv_number(double(absorbed) / options.replications) << '\n';
  }
  return 0;
}

}  // namespace ostra
