#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "roboswap/core/error.hpp"

namespace roboswap {

using Json = nlohmann::json;

// Config parsing is strict: every object must list its accepted keys and
// anything else is rejected, so typos never silently fall back to defaults.
inline void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument(where + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw InvalidArgument(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
T json_get(const Json& obj, const std::string& key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

}  // namespace roboswap
