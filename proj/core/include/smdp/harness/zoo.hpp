#pragma once

#include <string>
#include <vector>

#include "smdp/model.hpp"

namespace smdp::harness {

struct ModelZooEntry {
  std::string name;
  std::string description;
  SmdpModel model;
  bool weakly_communicating;
  /// Optimal reward rate; NaN for models that are not weakly communicating.
  double rstar;
  double t_min;
};

/// Built-in models. Certified properties are recomputed on every call and a
/// ModelError is thrown when they disagree with the recorded values.
std::vector<ModelZooEntry> model_zoo();

/// Throws InputError for an unknown name.
ModelZooEntry zoo_entry(const std::string& name);
bool is_zoo_name(const std::string& name);

}  // namespace smdp::harness
