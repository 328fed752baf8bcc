#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ostra/market.hpp"

namespace ostra {

/// Players are dense ids: buyers 0..B-1, then sellers B..B+S-1.
using PlayerId = int;

inline bool is_buyer(PlayerId id, const MarketParams& params) {
  return id < params.buyer_count;
}
inline PlayerId buyer_id(int buyer_index) { return buyer_index; }
inline PlayerId seller_id(int seller_index, const MarketParams& params) {
  return params.buyer_count + seller_index;
}
inline int player_count(const MarketParams& params) {
  return params.buyer_count + params.seller_count;
}

/// "B1".."B{B}" and "S1".."S{S}".
std::string player_name(PlayerId id, const MarketParams& params);
PlayerId player_from_name(std::string_view name, const MarketParams& params);

/// Unordered pair; stored with a < b.
struct Link {
  PlayerId a;
  PlayerId b;
  Link(PlayerId x, PlayerId y) : a(x < y ? x : y), b(x < y ? y : x) {}
  bool contains(PlayerId p) const { return a == p || b == p; }
  PlayerId other(PlayerId p) const { return a == p ? b : a; }
  bool operator==(const Link&) const = default;
};

struct LinkEvent {
  double time;
  Link link;
};

/// Ordered link recognitions with strictly increasing times. Construction
/// validates; a non-increasing timestamp is an input error.
class LinkSequence {
 public:
  LinkSequence() = default;
  explicit LinkSequence(std::vector<LinkEvent> events);

  const std::vector<LinkEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

 private:
  std::vector<LinkEvent> events_;
};

/// The s-state: who deems seller `seller` guilty. `informed_sellers` always
/// contains the seller herself once she has deviated.
struct GuiltState {
  std::set<PlayerId> informed_buyers;   // K_b
  std::set<PlayerId> informed_sellers;  // K_s
  PlayerId seller = -1;                 // s

  bool informed(PlayerId p) const {
    return informed_buyers.count(p) != 0 || informed_sellers.count(p) != 0;
  }
  bool operator==(const GuiltState&) const = default;
};

/// One step of the s-state update for a single recognized link:
///  - an uninformed buyer joins K_b when his partner is any informed player
///    (the guilty seller herself informs by cheating);
///  - an uninformed seller joins K_s when her partner is an informed player
///    other than s (s never tells anyone about herself);
///  - otherwise nothing changes.
/// Returns the player added, if any.
std::optional<PlayerId> apply_link(GuiltState& state, const Link& link,
                                   const MarketParams& params);

/// Full trajectory: element z is the state after the z-th recognition,
/// element 0 is `initial`. Requires initial.seller in initial.informed_sellers.
std::vector<GuiltState> evolve_guilt_state(const GuiltState& initial,
                                           const LinkSequence& xi,
                                           const MarketParams& params);

struct CouplingResult {
  bool holds = true;
  // First violating (step index, buyer) if the inclusion ever fails.
  std::optional<std::pair<int, PlayerId>> witness;
};

/// Checks, at every step z along xi, that
///   K_b^z(base + {j}) \ K_b^z(base)  is contained in
///   K_b^z(({j},{s}))  \ K_b^z((none,{s})),
/// i.e. seeding one extra informed buyer spreads weakly less incremental
/// news the more others already know. Requires extra_buyer not in base.K_b.
CouplingResult coupling_check(const GuiltState& base, PlayerId extra_buyer,
                              const LinkSequence& xi, const MarketParams& params);

/// Sum of e^{-r t_z} over recognitions where the guilty seller meets a buyer
/// not yet informed at z-1: the per-unit-price discounted count of meetings
/// she can still exploit along xi.
double discounted_exploitation(const GuiltState& initial, const LinkSequence& xi,
                               const MarketParams& params);

}  // namespace ostra
