#pragma once

#include <filesystem>
#include <string>

#include "smdp/model.hpp"

namespace smdp {

/// JSON model document:
///   {"num_states": n, "num_actions": m,
///    "entries": [{"s": 0, "a": 0, "branches": [
///        {"p": 1.0, "next": 0,
///         "holding": {"kind": "deterministic", "params": {"t": 1}},
///         "reward":  {"kind": "gaussian", "params": {"mean": 0, "stddev": 1}}}]}]}
/// Holding kinds: deterministic{t}, exponential{rate}, discrete{atoms:[[p,t]...]}.
/// Reward kinds: deterministic{r}, gaussian{mean,stddev}, discrete{atoms:[[p,r]...]}.
SmdpModel parse_model_json(const std::string& text);
SmdpModel load_model_file(const std::filesystem::path& path);

/// Doubles are written in shortest round-trip form.
std::string serialize_model_json(const SmdpModel& model, int indent = 2);

}  // namespace smdp
