#include "smdp/communication.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <sstream>

#include "smdp/error.hpp"
#include "smdp/graph.hpp"

namespace smdp {
namespace {

std::string join(const std::vector<StateId>& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << '}';
  return os.str();
}

// Support of each pair's next-state law.
std::vector<std::vector<StateId>> supports(const SmdpModel& model) {
  std::vector<std::vector<StateId>> out(model.num_pairs());
  for (std::size_t i = 0; i < model.num_pairs(); ++i)
    for (StateId s = 0; s < model.num_states(); ++s)
      if (model.expectations().p[i][s] > 0.0) out[i].push_back(s);
  return out;
}

}  // namespace

CommunicationClass classify_communication(const SmdpModel& model) {
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  const auto supp = supports(model);

  graph::Adjacency any(ns);
  for (StateId s = 0; s < ns; ++s) {
    for (ActionId a = 0; a < na; ++a)
      for (StateId t : supp[s * na + a]) any[s].push_back(t);
    std::sort(any[s].begin(), any[s].end());
    any[s].erase(std::unique(any[s].begin(), any[s].end()), any[s].end());
  }
  const auto comps = graph::strongly_connected(any);
  const auto closed = graph::closed_components(any, comps);

  if (closed.size() != 1) {
    NotWeaklyCommunicating nw;
    for (std::size_t k : closed) nw.closed_classes.push_back(comps.members[k]);
    std::ostringstream os;
    os << closed.size() << " closed communicating classes:";
    for (const auto& c : nw.closed_classes) os << ' ' << join(c);
    nw.witness = os.str();
    return nw;
  }

  const std::vector<StateId>& cls = comps.members[closed.front()];
  std::vector<bool> in_class(ns, false);
  for (StateId s : cls) in_class[s] = true;

  // Greatest subset W of the complement in which every state keeps an action
  // whose whole support stays in W. A nonempty W is closed under some policy
  // and therefore hosts a recurrent class outside the closed class.
  std::vector<bool> in_w(ns);
  for (StateId s = 0; s < ns; ++s) in_w[s] = !in_class[s];
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId s = 0; s < ns; ++s) {
      if (!in_w[s]) continue;
      bool keeps = false;
      for (ActionId a = 0; a < na && !keeps; ++a) {
        const auto& sp = supp[s * na + a];
        keeps = std::all_of(sp.begin(), sp.end(), [&](StateId t) { return in_w[t]; });
      }
      if (!keeps) {
        in_w[s] = false;
        changed = true;
      }
    }
  }
  std::vector<StateId> trap;
  for (StateId s = 0; s < ns; ++s)
    if (in_w[s]) trap.push_back(s);
  if (!trap.empty()) {
    NotWeaklyCommunicating nw;
    nw.closed_classes.push_back(cls);
    nw.trapping_states = trap;
    nw.witness = "states " + join(trap) + " outside closed class " + join(cls) +
                 " are recurrent under some policy";
    return nw;
  }

  WeaklyCommunicating wc;
  wc.closed_class = cls;
  for (StateId s = 0; s < ns; ++s)
    if (!in_class[s]) wc.transient.push_back(s);
  return wc;
}

InducedChain induced_chain(const SmdpModel& model, const DeterministicPolicy& policy) {
  const std::size_t ns = model.num_states();
  if (policy.actions.size() != ns) throw DomainError("policy must assign an action to every state");
  InducedChain out;
  out.transition.assign(ns, std::vector<double>(ns, 0.0));
  graph::Adjacency adj(ns);
  for (StateId s = 0; s < ns; ++s) {
    const std::size_t i = model.pair_index(s, policy.actions[s]);
    out.transition[s] = model.expectations().p[i];
    for (StateId t = 0; t < ns; ++t)
      if (out.transition[s][t] > 0.0) adj[s].push_back(t);
  }
  const auto comps = graph::strongly_connected(adj);
  for (std::size_t k : graph::closed_components(adj, comps)) {
    const auto& cls = comps.members[k];
    const auto m = static_cast<Eigen::Index>(cls.size());
    // mu (P_C - I) = 0 with the last equation replaced by sum(mu) = 1.
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c)
        a(r, c) = out.transition[cls[c]][cls[r]] - (r == c ? 1.0 : 0.0);
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
      std::ostringstream os;
      os << "stationary distribution solve is singular for class " << join(cls)
         << " (rcond estimate " << lu.rcond() << ")";
      throw NumericalError(os.str());
    }
    const Eigen::VectorXd mu = lu.solve(b);
    std::vector<double> full(ns, 0.0);
    for (Eigen::Index r = 0; r < m; ++r) full[cls[r]] = mu(r);
    out.recurrent_classes.push_back(cls);
    out.stationary.push_back(std::move(full));
  }
  // Deterministic output order: by smallest member.
  std::vector<std::size_t> order(out.recurrent_classes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return out.recurrent_classes[x].front() < out.recurrent_classes[y].front();
  });
  InducedChain sorted{out.transition, {}, {}};
  for (std::size_t i : order) {
    sorted.recurrent_classes.push_back(out.recurrent_classes[i]);
    sorted.stationary.push_back(out.stationary[i]);
  }
  return sorted;
}

}  // namespace smdp
