#pragma once

// Internal strict-JSON helpers shared by the parsing translation units.

#include <initializer_list>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <utility>

#include "ostra/market.hpp"

namespace ostra::detail {

inline void reject_unknown_keys(const nlohmann::json& object,
                                std::initializer_list<const char*> allowed,
                                const char* where) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) { known = true; break; }
    if (!known)
      throw std::invalid_argument(std::string(where) + ": unknown key \"" + item.key() +
                                  "\"");
  }
}

inline double require_number(const nlohmann::json& object, const char* key,
                             const char* where) {
  if (!object.contains(key))
    throw std::invalid_argument(std::string(where) + ": missing key \"" + key + "\"");
  if (!object.at(key).is_number())
    throw std::invalid_argument(std::string(where) + ": key \"" + key +
                                "\" must be a number");
  return object.at(key).get<double>();
}

inline int require_int(const nlohmann::json& object, const char* key, const char* where) {
  if (!object.contains(key) || !object.at(key).is_number_integer())
    throw std::invalid_argument(std::string(where) + ": key \"" + key +
                                "\" must be an integer");
  return object.at(key).get<int>();
}

std::pair<MarketParams, CostSpec> params_from_json(const nlohmann::json& doc);

}  // namespace ostra::detail
