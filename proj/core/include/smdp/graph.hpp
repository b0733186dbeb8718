#pragma once

#include <cstddef>
#include <vector>

namespace smdp::graph {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Strongly connected components (Tarjan). comp[v] gives the component id;
/// components are numbered in reverse topological order.
struct Components {
  std::vector<std::size_t> comp;
  std::vector<std::vector<std::size_t>> members;
};

Components strongly_connected(const Adjacency& adj);

/// Components with no edge leaving them.
std::vector<std::size_t> closed_components(const Adjacency& adj, const Components& c);

bool is_irreducible(const Adjacency& adj);

}  // namespace smdp::graph
