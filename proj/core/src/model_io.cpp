#include "smdp/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json_support.hpp"

namespace smdp {
namespace {

using detail::json;

std::vector<Atom> parse_atoms(const json& params, const std::string& ctx) {
  const json& arr = detail::require(params, "atoms", ctx);
  if (!arr.is_array()) throw InputError(ctx + ": atoms must be an array of [p, value]");
  std::vector<Atom> atoms;
  for (const json& a : arr) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      throw InputError(ctx + ": each atom must be [p, value]");
    atoms.push_back({a[0].get<double>(), a[1].get<double>()});
  }
  return atoms;
}

json atoms_json(const std::vector<Atom>& atoms) {
  json arr = json::array();
  for (const Atom& a : atoms) arr.push_back(json::array({a.prob, a.value}));
  return arr;
}

HoldingTimeDist parse_holding(const json& j, const std::string& ctx) {
  const std::string kind = detail::text(j, "kind", ctx);
  const json& params = detail::require(j, "params", ctx);
  if (kind == "deterministic") return holding::Deterministic{detail::number(params, "t", ctx)};
  if (kind == "exponential") return holding::Exponential{detail::number(params, "rate", ctx)};
  if (kind == "discrete") return holding::Discrete{parse_atoms(params, ctx)};
  throw InputError(ctx + ": unknown holding kind '" + kind + "'");
}

RewardDist parse_reward(const json& j, const std::string& ctx) {
  const std::string kind = detail::text(j, "kind", ctx);
  const json& params = detail::require(j, "params", ctx);
  if (kind == "deterministic") return reward::Deterministic{detail::number(params, "r", ctx)};
  if (kind == "gaussian")
    return reward::Gaussian{detail::number(params, "mean", ctx), detail::number(params, "stddev", ctx)};
  if (kind == "discrete") return reward::Discrete{parse_atoms(params, ctx)};
  throw InputError(ctx + ": unknown reward kind '" + kind + "'");
}

json holding_json(const HoldingTimeDist& d) {
  if (auto* x = std::get_if<holding::Deterministic>(&d))
    return {{"kind", "deterministic"}, {"params", {{"t", x->t}}}};
  if (auto* x = std::get_if<holding::Exponential>(&d))
    return {{"kind", "exponential"}, {"params", {{"rate", x->rate}}}};
  return {{"kind", "discrete"},
          {"params", {{"atoms", atoms_json(std::get<holding::Discrete>(d).atoms)}}}};
}

json reward_json(const RewardDist& d) {
  if (auto* x = std::get_if<reward::Deterministic>(&d))
    return {{"kind", "deterministic"}, {"params", {{"r", x->r}}}};
  if (auto* x = std::get_if<reward::Gaussian>(&d))
    return {{"kind", "gaussian"}, {"params", {{"mean", x->mean}, {"stddev", x->stddev}}}};
  return {{"kind", "discrete"},
          {"params", {{"atoms", atoms_json(std::get<reward::Discrete>(d).atoms)}}}};
}

}  // namespace

namespace detail {

SmdpModel model_from_json(const json& doc) {
  const std::string ctx = "model";
  const std::size_t ns = detail::index(doc, "num_states", ctx);
  const std::size_t na = detail::index(doc, "num_actions", ctx);
  const json& entries = detail::require(doc, "entries", ctx);
  if (!entries.is_array()) throw InputError("model: entries must be an array");
  std::vector<TransitionLaw> laws(ns * na);
  std::vector<bool> seen(ns * na, false);
  for (const json& e : entries) {
    const std::size_t s = detail::index(e, "s", ctx);
    const std::size_t a = detail::index(e, "a", ctx);
    const std::string where = "model entry (s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
    if (s >= ns || a >= na) throw InputError(where + ": index out of range");
    if (seen[s * na + a]) throw InputError(where + ": duplicate entry");
    seen[s * na + a] = true;
    const json& branches = detail::require(e, "branches", where);
    if (!branches.is_array()) throw InputError(where + ": branches must be an array");
    for (const json& b : branches) {
      laws[s * na + a].branches.push_back(
          Branch{detail::number(b, "p", where), detail::index(b, "next", where),
                 parse_holding(detail::require(b, "holding", where), where + " holding"),
                 parse_reward(detail::require(b, "reward", where), where + " reward")});
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw InputError("model: missing entry for (s=" + std::to_string(i / na) +
                       ", a=" + std::to_string(i % na) + ")");
  return SmdpModel(ns, na, std::move(laws));
}

json model_to_json(const SmdpModel& model) {
  json entries = json::array();
  for (StateId s = 0; s < model.num_states(); ++s) {
    for (ActionId a = 0; a < model.num_actions(); ++a) {
      json branches = json::array();
      for (const Branch& b : model.law(s, a).branches)
        branches.push_back({{"p", b.prob},
                            {"next", b.next},
                            {"holding", holding_json(b.holding)},
                            {"reward", reward_json(b.reward)}});
      entries.push_back({{"s", s}, {"a", a}, {"branches", std::move(branches)}});
    }
  }
  return {{"num_states", model.num_states()},
          {"num_actions", model.num_actions()},
          {"entries", std::move(entries)}};
}

}  // namespace detail

SmdpModel parse_model_json(const std::string& text) {
  return detail::model_from_json(detail::parse(text, "model"));
}

SmdpModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_json(buf.str());
}

std::string serialize_model_json(const SmdpModel& model, int indent) {
  return detail::model_to_json(model).dump(indent);
}

}  // namespace smdp
