#include "ostra/guilt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ostra {

std::string player_name(PlayerId id, const MarketParams& params) {
  if (id < 0 || id >= player_count(params))
    throw std::out_of_range("player_name: id outside the population");
  if (is_buyer(id, params)) return "B" + std::to_string(id + 1);
  return "S" + std::to_string(id - params.buyer_count + 1);
}

PlayerId player_from_name(std::string_view name, const MarketParams& params) {
  if (name.size() < 2 || (name[0] != 'B' && name[0] != 'S'))
    throw std::invalid_argument("player_from_name: expected \"B<k>\" or \"S<k>\"");
  int index = 0;
  const auto result = std::from_chars(name.data() + 1, name.data() + name.size(), index);
  if (result.ec != std::errc{} || result.ptr != name.data() + name.size() || index < 1)
    throw std::invalid_argument("player_from_name: malformed player name");
  if (name[0] == 'B') {
    if (index > params.buyer_count)
      throw std::invalid_argument("player_from_name: buyer index out of range");
    return buyer_id(index - 1);
  }
  if (index > params.seller_count)
    throw std::invalid_argument("player_from_name: seller index out of range");
  return seller_id(index - 1, params);
}

LinkSequence::LinkSequence(std::vector<LinkEvent> events) : events_(std::move(events)) {
  double last = -1.0;
  for (const LinkEvent& event : events_) {
    if (!(event.time >= 0.0) || event.time <= last)
      throw std::invalid_argument("LinkSequence: times must be strictly increasing");
    if (event.link.a == event.link.b)
      throw std::invalid_argument("LinkSequence: a link joins two distinct players");
    last = event.time;
  }
}

std::optional<PlayerId> apply_link(GuiltState& state, const Link& link,
                                   const MarketParams& params) {
  const bool a_buyer = is_buyer(link.a, params);
  const bool b_buyer = is_buyer(link.b, params);
  auto informs_buyers = [&state](PlayerId p) { return state.informed(p); };
  auto informs_sellers = [&state](PlayerId p) {
    return state.informed(p) && p != state.seller;
  };

  for (const auto& [target, partner, target_buyer] :
       {std::tuple{link.a, link.b, a_buyer}, std::tuple{link.b, link.a, b_buyer}}) {
    if (state.informed(target)) continue;
    if (target_buyer && informs_buyers(partner)) {
      state.informed_buyers.insert(target);
      return target;
    }
    if (!target_buyer && informs_sellers(partner)) {
      state.informed_sellers.insert(target);
      return target;
    }
  }
  return std::nullopt;
}

namespace {

void require_valid_initial(const GuiltState& initial) {
  if (initial.informed_sellers.count(initial.seller) == 0)
    throw std::invalid_argument("guilt state: the seller must deem herself guilty");
}

}  // namespace

std::vector<GuiltState> evolve_guilt_state(const GuiltState& initial,
                                           const LinkSequence& xi,
                                           const MarketParams& params) {
  require_valid_initial(initial);
  std::vector<GuiltState> trajectory;
  trajectory.reserve(xi.size() + 1);
  trajectory.push_back(initial);
  GuiltState current = initial;
  for (const LinkEvent& event : xi.events()) {
    apply_link(current, event.link, params);
    trajectory.push_back(current);
  }
  return trajectory;
}

CouplingResult coupling_check(const GuiltState& base, PlayerId extra_buyer,
                              const LinkSequence& xi, const MarketParams& params) {
  require_valid_initial(base);
  if (!is_buyer(extra_buyer, params))
    throw std::invalid_argument("coupling_check: the extra player must be a buyer");
  if (base.informed_buyers.count(extra_buyer) != 0)
    throw std::invalid_argument("coupling_check: extra buyer already informed");

  GuiltState seeded = base;
  seeded.informed_buyers.insert(extra_buyer);
  GuiltState fresh{{}, {base.seller}, base.seller};
  GuiltState fresh_seeded{{extra_buyer}, {base.seller}, base.seller};

  GuiltState states[4] = {base, seeded, fresh, fresh_seeded};
  int z = 0;
  auto violation = [&]() -> std::optional<std::pair<int, PlayerId>> {
    // (seeded \ base) must be contained in (fresh_seeded \ fresh), buyers only.
    for (PlayerId b : states[1].informed_buyers) {
      if (states[0].informed_buyers.count(b) != 0) continue;
      const bool in_right = states[3].informed_buyers.count(b) != 0 &&
                            states[2].informed_buyers.count(b) == 0;
      if (!in_right) return std::make_pair(z, b);
    }
    return std::nullopt;
  };

  if (auto w = violation()) return {false, w};
  for (const LinkEvent& event : xi.events()) {
    ++z;
    for (GuiltState& state : states) apply_link(state, event.link, params);
    if (auto w = violation()) return {false, w};
  }
  return {true, std::nullopt};
}

double discounted_exploitation(const GuiltState& initial, const LinkSequence& xi,
                               const MarketParams& params) {
  require_valid_initial(initial);
  GuiltState current = initial;
  double total = 0.0;
  for (const LinkEvent& event : xi.events()) {
    if (event.link.contains(current.seller)) {
      const PlayerId partner = event.link.other(current.seller);
      if (is_buyer(partner, params) && current.informed_buyers.count(partner) == 0)
        total += std::exp(-params.discount_rate * event.time);
    }
    apply_link(current, event.link, params);
  }
  return total;
}

}  // namespace ostra
