#include "ostra/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <thread>

namespace ostra {

namespace {

bool side_immune(PlayerId id, Side immune, const MarketParams& params) {
  if (immune == Side::none) return false;
  return (immune == Side::buyers) == is_buyer(id, params);
}

std::vector<PlayerId> snapshot(const PersonalState& state) {
  return {state.guilty.begin(), state.guilty.end()};
}

SimMessage truthful_message(const PersonalState& state) {
  SimMessage message;
  message.sender = state.owner;
  for (PlayerId p : state.guilty)
    if (p != state.owner) message.content.push_back(p);
  return message;
}

// End-of-communication update: w <- (w u m_own u m_partner) \ I. Takes only
// the participant's own state and the two exchanged messages, so a player's
// update can never read anyone else's private state.
void apply_communication(PersonalState& state, const SimMessage& own,
                         const SimMessage& partner, Side immune,
                         const MarketParams& params) {
  for (const SimMessage* message : {&own, &partner})
    for (PlayerId p : message->content)
      if (!side_immune(p, immune, params)) state.guilty.insert(p);
}

// The deviator's private scratchpad.
struct DeviatorMemory {
  bool has_deviated = false;
  bool delay_used = false;
};

struct TradeOutcome {
  double paid = 0.0;
  double delivered = 0.0;
  bool deviated_now = false;  // an action differed from the prescribed one
};

// Prescribed stage actions given one's own state. A zero action toward a
// partner deemed guilty, after own guilt, or (for second movers) after a
// non-conforming first move is prescribed play, not a deviation.
double prescribed_payment(const PersonalState& buyer, PlayerId seller,
                          const TradeTerms& terms, Protocol protocol,
                          double delivered_first) {
  switch (protocol) {
    case Protocol::simultaneous:
      return (buyer.guilty.count(seller) || buyer.guilty.count(buyer.owner))
                 ? 0.0
                 : terms.price;
    case Protocol::buyer_first:
      // Pays regardless of his own past; buyers carry no guilt here.
      return buyer.guilty.count(seller) ? 0.0 : terms.price;
    case Protocol::seller_first:
      return (!buyer.guilty.count(buyer.owner) && delivered_first == terms.quality)
                 ? terms.price
                 : 0.0;
  }
  return 0.0;
}

double prescribed_quality(const PersonalState& seller, PlayerId buyer,
                          const TradeTerms& terms, Protocol protocol,
                          double paid_first) {
  switch (protocol) {
    case Protocol::simultaneous:
      return (seller.guilty.count(buyer) || seller.guilty.count(seller.owner))
                 ? 0.0
                 : terms.quality;
    case Protocol::buyer_first:
      return (!seller.guilty.count(seller.owner) && paid_first == terms.price)
                 ? terms.quality
                 : 0.0;
    case Protocol::seller_first:
      return seller.guilty.count(buyer) ? 0.0 : terms.quality;
  }
  return 0.0;
}

// Shirk at the first trading opportunity, then follow the guilty
// continuation; with one_shot_delay, mimic the path action once more toward
// a partner who has shown no sign of knowing, to delay detection.
double deviator_action(double prescribed, double path_action, const Scenario& scenario,
                       DeviatorMemory& memory, double now, bool partner_unsuspecting,
                       bool* deviated_now) {
  if (!memory.has_deviated) {
    if (now < scenario.not_before) return prescribed;
    *deviated_now = prescribed != 0.0;
    return 0.0;
  }
  if (scenario.one_shot_delay && !memory.delay_used && prescribed == 0.0 &&
      partner_unsuspecting) {
    memory.delay_used = true;
    return path_action;
  }
  return prescribed;
}

TradeOutcome run_trade_actions(const PersonalState& buyer, const PersonalState& seller,
                               const TradeTerms& terms, Protocol protocol,
                               const Scenario& scenario, DeviatorMemory& memory,
                               double now, const SimMessage& msg_to_deviator) {
  TradeOutcome outcome;
  const bool buyer_deviates = scenario.deviator && *scenario.deviator == buyer.owner;
  const bool seller_deviates = scenario.deviator && *scenario.deviator == seller.owner;
  const bool partner_silent =
      (buyer_deviates || seller_deviates) &&
      std::find(msg_to_deviator.content.begin(), msg_to_deviator.content.end(),
                *scenario.deviator) == msg_to_deviator.content.end();

  switch (protocol) {
    case Protocol::simultaneous:
      outcome.paid = prescribed_payment(buyer, seller.owner, terms, protocol, 0.0);
      outcome.delivered = prescribed_quality(seller, buyer.owner, terms, protocol, 0.0);
      if (buyer_deviates)
        outcome.paid = deviator_action(outcome.paid, terms.price, scenario, memory, now,
                                       partner_silent, &outcome.deviated_now);
      if (seller_deviates)
        outcome.delivered = deviator_action(outcome.delivered, terms.quality, scenario,
                                            memory, now, partner_silent,
                                            &outcome.deviated_now);
      break;
    case Protocol::buyer_first: {
      outcome.paid = prescribed_payment(buyer, seller.owner, terms, protocol, 0.0);
      double quality =
          prescribed_quality(seller, buyer.owner, terms, protocol, outcome.paid);
      if (seller_deviates)
        // A paying buyer is the clearest sign the partner suspects nothing.
        quality = deviator_action(quality, terms.quality, scenario, memory, now,
                                  outcome.paid == terms.price, &outcome.deviated_now);
      outcome.delivered = quality;
      break;
    }
    case Protocol::seller_first: {
      outcome.delivered = prescribed_quality(seller, buyer.owner, terms, protocol, 0.0);
      double payment =
          prescribed_payment(buyer, seller.owner, terms, protocol, outcome.delivered);
      if (buyer_deviates)
        payment = deviator_action(payment, terms.price, scenario, memory, now,
                                  outcome.delivered == terms.quality,
                                  &outcome.deviated_now);
      outcome.paid = payment;
      break;
    }
  }
  if (outcome.deviated_now) memory.has_deviated = true;
  return outcome;
}

// End-of-trading-stage reclassification from one observer's viewpoint. An
// action is brandable only when it is prescribed under no state the actor
// could hold given the observer's own state: the path action is always
// explicable, a zero action is explicable when the observer deems the actor
// or the actor's partner guilty (or a sequential first move already went off
// the path), anything else brands the actor.
void apply_trade_update(PersonalState& observer, PlayerId buyer, PlayerId seller,
                        const TradeOutcome& outcome, const TradeTerms& terms,
                        Protocol protocol) {
  switch (protocol) {
    case Protocol::simultaneous: {
      auto explicable = [&observer](double action, double path_action, PlayerId actor,
                                    PlayerId partner) {
        if (action == path_action) return true;
        if (action == 0.0)
          return observer.guilty.count(actor) != 0 || observer.guilty.count(partner) != 0;
        return false;
      };
      if (!explicable(outcome.paid, terms.price, buyer, seller))
        observer.guilty.insert(buyer);
      if (!explicable(outcome.delivered, terms.quality, seller, buyer))
        observer.guilty.insert(seller);
      break;
    }
    case Protocol::buyer_first: {
      const bool conforming = outcome.paid == terms.price
                                  ? outcome.delivered == terms.quality
                                  : outcome.delivered == 0.0;
      if (!conforming) observer.guilty.insert(seller);
      break;
    }
    case Protocol::seller_first: {
      const bool conforming = outcome.delivered == terms.quality
                                  ? outcome.paid == terms.price
                                  : outcome.paid == 0.0;
      if (!conforming) observer.guilty.insert(buyer);
      break;
    }
  }
}

struct EngineOutput {
  std::vector<double> payoffs;
  std::optional<double> deviation_time;
  std::optional<double> absorption_time;
  double deviator_exploitation = 0.0;
  std::vector<InteractionRecord> records;
};

EngineOutput run_engine(const MarketParams& params, const CostSpec& cost,
                        Protocol protocol, const TradeTerms& terms,
                        const Scenario& scenario, std::uint64_t seed, double horizon,
                        bool record) {
  const Side immune = immune_side(protocol);
  const int n = player_count(params);
  std::vector<PersonalState> states(n);
  for (int i = 0; i < n; ++i) states[i].owner = i;

  const LinkSequence events =
      sample_event_stream(params, horizon, derive_stream_seed(seed, 0));
  Xoshiro256pp coins(derive_stream_seed(seed, 1));

  EngineOutput out;
  out.payoffs.assign(n, 0.0);
  if (record) out.records.reserve(events.size());
  DeviatorMemory memory;

  const int opposite_count =
      scenario.deviator
          ? (is_buyer(*scenario.deviator, params) ? params.seller_count
                                                  : params.buyer_count)
          : 0;
  int informed_opponents = 0;

  for (const LinkEvent& event : events.events()) {
    PersonalState& first = states[event.link.a];
    PersonalState& second = states[event.link.b];
    InteractionRecord rec;
    rec.time = event.time;
    rec.link = event.link;
    rec.trading = is_buyer(event.link.a, params) != is_buyer(event.link.b, params);
    rec.first_speaker = coins.coin() ? event.link.a : event.link.b;

    if (record) {
      rec.comm_a.before = snapshot(first);
      rec.comm_b.before = snapshot(second);
    }

    // Polite cheap talk: the coin fixes speaking order, but messages are
    // truthful regardless of order, so order matters only for the record.
    rec.msg_a = truthful_message(first);
    rec.msg_b = truthful_message(second);
    apply_communication(first, rec.msg_a, rec.msg_b, immune, params);
    apply_communication(second, rec.msg_b, rec.msg_a, immune, params);

    if (record) {
      rec.comm_a.after = snapshot(first);
      rec.comm_b.after = snapshot(second);
      rec.trade_a.before = rec.trade_a.after = rec.comm_a.after;
      rec.trade_b.before = rec.trade_b.after = rec.comm_b.after;
    }

    if (rec.trading) {
      const bool a_is_buyer = is_buyer(event.link.a, params);
      PersonalState& buyer = a_is_buyer ? first : second;
      PersonalState& seller = a_is_buyer ? second : first;
      const SimMessage& msg_from_buyer = a_is_buyer ? rec.msg_a : rec.msg_b;
      const SimMessage& msg_from_seller = a_is_buyer ? rec.msg_b : rec.msg_a;
      const SimMessage& msg_to_deviator =
          scenario.deviator && *scenario.deviator == buyer.owner ? msg_from_seller
                                                                 : msg_from_buyer;

      const TradeOutcome outcome =
          run_trade_actions(buyer, seller, terms, protocol, scenario, memory,
                            event.time, msg_to_deviator);
      if (outcome.deviated_now && !out.deviation_time) out.deviation_time = event.time;

      const double discount = std::exp(-params.discount_rate * event.time);
      out.payoffs[buyer.owner] += discount * (outcome.delivered - outcome.paid);
      out.payoffs[seller.owner] += discount * (outcome.paid - cost(outcome.delivered));

      apply_trade_update(buyer, buyer.owner, seller.owner, outcome, terms, protocol);
      apply_trade_update(seller, buyer.owner, seller.owner, outcome, terms, protocol);

      if (record) {
        rec.price = outcome.paid;
        rec.quality = outcome.delivered;
        rec.trade_a.after = snapshot(first);
        rec.trade_b.after = snapshot(second);
      }

      if (out.deviation_time && event.time > *out.deviation_time) {
        const bool seller_milks = scenario.deviator &&
                                  *scenario.deviator == seller.owner &&
                                  outcome.paid == terms.price && outcome.delivered == 0.0;
        const bool buyer_milks = scenario.deviator &&
                                 *scenario.deviator == buyer.owner &&
                                 outcome.delivered == terms.quality &&
                                 outcome.paid == 0.0;
        if (seller_milks || buyer_milks)
          out.deviator_exploitation +=
              std::exp(-params.discount_rate * (event.time - *out.deviation_time));
      }
    }

    if (scenario.deviator && !out.absorption_time) {
      informed_opponents = 0;
      for (const PersonalState& state : states)
        if (is_buyer(state.owner, params) != is_buyer(*scenario.deviator, params) &&
            state.guilty.count(*scenario.deviator))
          ++informed_opponents;
      if (informed_opponents == opposite_count) out.absorption_time = event.time;
    }

    if (record) out.records.push_back(std::move(rec));
  }
  return out;
}

template <class Fn>
void parallel_for_index(int n, Fn&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, 8));
  if (workers <= 1 || n < 2 * workers) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&body, w, workers, n] {
      for (int i = w; i < n; i += workers) body(i);
    });
  for (std::thread& t : pool) t.join();
}

}  // namespace

Scenario onpath_scenario() { return Scenario{}; }

Scenario inject_deviation(const MarketParams& params, Protocol protocol,
                          PlayerId deviator, double not_before, bool one_shot_delay) {
  if (deviator < 0 || deviator >= player_count(params))
    throw std::invalid_argument("inject_deviation: deviator outside the population");
  if (side_immune(deviator, immune_side(protocol), params))
    throw std::invalid_argument(
        "inject_deviation: the deviator is on the protocol's immune side; no guilt "
        "label exists for them");
  Scenario scenario;
  scenario.id = one_shot_delay ? "one-shot-delay" : "deviate-at-first-meeting";
  scenario.deviator = deviator;
  scenario.not_before = not_before;
  scenario.one_shot_delay = one_shot_delay;
  return scenario;
}

Scenario scenario_from_id(const std::string& id, std::optional<PlayerId> deviator,
                          const MarketParams& params, Protocol protocol) {
  if (id == "on-path") return onpath_scenario();
  const bool plain =
      id == "deviate-at-first-meeting" || id == "seller-deviates-at-first-meeting";
  const bool delayed = id == "one-shot-delay";
  if (!plain && !delayed) throw std::invalid_argument("unknown scenario id: " + id);
  if (!deviator)
    throw std::invalid_argument("scenario \"" + id + "\" requires a deviator");
  Scenario scenario = inject_deviation(params, protocol, *deviator, 0.0, delayed);
  scenario.id = id;
  return scenario;
}

Trace run_replication(const MarketParams& params, const CostSpec& cost,
                      Protocol protocol, const TradeTerms& terms,
                      const Scenario& scenario, std::uint64_t seed, double horizon) {
  Trace trace;
  trace.params = params;
  trace.protocol = protocol;
  trace.terms = terms;
  trace.scenario = scenario.id;
  trace.seed = seed;
  trace.horizon = horizon;

  if (protocol != Protocol::seller_first) {
    const ValueTable table = compute_value_table(params);
    if (!check_onpath_ic(protocol, terms, params, cost, table).all_satisfied())
      trace.flags.push_back("off-equilibrium terms");
  }

  EngineOutput out =
      run_engine(params, cost, protocol, terms, scenario, seed, horizon, true);
  trace.records = std::move(out.records);
  trace.payoffs = std::move(out.payoffs);
  trace.deviation_time = out.deviation_time;
  trace.absorption_time = out.absorption_time;
  trace.deviator_exploitation = out.deviator_exploitation;
  return trace;
}

std::vector<ReplicationSummary> run_replications(const MarketParams& params,
                                                 const CostSpec& cost,
                                                 Protocol protocol,
                                                 const TradeTerms& terms,
                                                 const Scenario& scenario,
                                                 int replications,
                                                 std::uint64_t master_seed,
                                                 double horizon) {
  if (replications < 1)
    throw std::invalid_argument("run_replications: replications must be >= 1");
  std::vector<ReplicationSummary> summaries(replications);
  parallel_for_index(replications, [&](int i) {
    EngineOutput out = run_engine(params, cost, protocol, terms, scenario,
                                  derive_stream_seed(master_seed, i), horizon, false);
    ReplicationSummary& summary = summaries[i];
    summary.replication = i;
    summary.payoffs = std::move(out.payoffs);
    summary.deviation_time = out.deviation_time;
    summary.absorption_time = out.absorption_time;
    summary.deviator_exploitation = out.deviator_exploitation;
  });
  return summaries;
}

McEstimate mc_estimate_value(const MarketParams& params, int informed_buyers,
                             int informed_sellers, int replications,
                             std::uint64_t seed) {
  if (informed_buyers < 1 || informed_buyers > params.buyer_count)
    throw std::invalid_argument("mc_estimate_value: informed buyer count out of range");
  if (informed_sellers < 1 || informed_sellers > params.seller_count)
    throw std::invalid_argument("mc_estimate_value: informed seller count out of range");
  if (replications < 1)
    throw std::invalid_argument("mc_estimate_value: replications must be >= 1");

  // Uniform rates make identities exchangeable, so which players start
  // informed is immaterial; take the lowest-indexed ones.
  GuiltState initial;
  initial.seller = seller_id(0, params);
  for (int b = 0; b < informed_buyers; ++b) initial.informed_buyers.insert(buyer_id(b));
  for (int s = 0; s < informed_sellers; ++s)
    initial.informed_sellers.insert(seller_id(s, params));

  // Truncation: at most B-1 exploitable meetings remain after the horizon,
  // each worth at most e^{-rT}, so pick T with (B-1) e^{-rT} <= 1e-8.
  const double tail = std::log(std::max(1.0, double(params.buyer_count - 1)) * 1e8);
  const double horizon = tail / params.discount_rate;

  std::vector<double> draws(replications);
  parallel_for_index(replications, [&](int i) {
    const LinkSequence xi =
        sample_event_stream(params, horizon, derive_stream_seed(seed, i));
    draws[i] = discounted_exploitation(initial, xi, params);
  });

  McEstimate estimate;
  estimate.replications = replications;
  double sum = 0.0;
  for (double d : draws) sum += d;
  estimate.mean = sum / replications;
  if (replications > 1) {
    double ss = 0.0;
    for (double d : draws) ss += (d - estimate.mean) * (d - estimate.mean);
    estimate.std_error = std::sqrt(ss / (double(replications) * (replications - 1)));
  }
  return estimate;
}

void Trace::write_jsonl(std::ostream& out) const {
  for (const InteractionRecord& rec : records) {
    nlohmann::json line;
    line["t"] = rec.time;
    line["link"] = {player_name(rec.link.a, params), player_name(rec.link.b, params)};
    line["kind"] = rec.trading ? "trade" : "comm";
    line["first_speaker"] = player_name(rec.first_speaker, params);
    auto names = [this](const std::vector<PlayerId>& ids) {
      std::vector<std::string> result;
      result.reserve(ids.size());
      for (PlayerId id : ids) result.push_back(player_name(id, params));
      return result;
    };
    line["m_i"] = names(rec.msg_a.content);
    line["m_j"] = names(rec.msg_b.content);
    if (rec.trading) {
      line["p"] = rec.price;
      line["q"] = rec.quality;
    }
    out << line.dump() << '\n';
  }
}

}  // namespace ostra
