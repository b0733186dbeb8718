#pragma once

// Private JSON helpers shared by the serialisation code.

#include <json.hpp>
#include <string>

#include "smdp/error.hpp"

namespace smdp::detail {

using json = nlohmann::json;

inline const json& require(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(ctx + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const char* key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number()) throw InputError(ctx + ": field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

inline std::size_t index(const json& j, const char* key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw InputError(ctx + ": field '" + std::string(key) + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

inline std::string text(const json& j, const char* key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_string()) throw InputError(ctx + ": field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

inline json parse(const std::string& s, const std::string& ctx) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw InputError(ctx + ": " + e.what());
  }
}

}  // namespace smdp::detail

namespace smdp {
class SmdpModel;
class RateFunction;
namespace detail {
SmdpModel model_from_json(const json& doc);
json model_to_json(const SmdpModel& model);
/// Model is required only for the reference_pair kind.
RateFunction rate_function_from_json(const json& j, const SmdpModel* model = nullptr);
json rate_function_to_json(const RateFunction& f);
}  // namespace detail
}  // namespace smdp
