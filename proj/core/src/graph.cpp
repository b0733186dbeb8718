#include "smdp/graph.hpp"

#include <algorithm>
#include <limits>

namespace smdp::graph {

Components strongly_connected(const Adjacency& adj) {
  // Iterative Tarjan to stay safe on long chains.
  const std::size_t n = adj.size();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  Components out;
  out.comp.assign(n, kUnset);
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& fr = call.back();
      const std::size_t v = fr.v;
      if (fr.edge < adj[v].size()) {
        const std::size_t w = adj[v][fr.edge++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> members;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.comp[w] = out.members.size();
          members.push_back(w);
        } while (w != v);
        std::sort(members.begin(), members.end());
        out.members.push_back(std::move(members));
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return out;
}

std::vector<std::size_t> closed_components(const Adjacency& adj, const Components& c) {
  std::vector<bool> leaves(c.members.size(), false);
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (std::size_t w : adj[v])
      if (c.comp[w] != c.comp[v]) leaves[c.comp[v]] = true;
  std::vector<std::size_t> closed;
  for (std::size_t k = 0; k < leaves.size(); ++k)
    if (!leaves[k]) closed.push_back(k);
  return closed;
}

bool is_irreducible(const Adjacency& adj) {
  return !adj.empty() && strongly_connected(adj).members.size() == 1;
}

}  // namespace smdp::graph
