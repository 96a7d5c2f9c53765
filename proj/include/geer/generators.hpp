#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "geer/graph.hpp"

// Small named graphs and random graph models used by tests, samples and the
// benchmark harness.
namespace geer::gen {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

inline Graph complete(std::size_t n) {
  EdgeList e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph::from_index_edges(n, e);
}

inline Graph cycle(std::size_t n) {
  EdgeList e;
  for (NodeId u = 0; u < n; ++u) e.emplace_back(u, static_cast<NodeId>((u + 1) % n));
  return Graph::from_index_edges(n, e);
}

inline Graph path(std::size_t n) {
  EdgeList e;
  for (NodeId u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return Graph::from_index_edges(n, e);
}

inline Graph petersen() {
  EdgeList e;
  for (NodeId i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);         // outer cycle
    e.emplace_back(i, i + 5);               // spokes
    e.emplace_back(i + 5, (i + 2) % 5 + 5); // inner pentagram
  }
  return Graph::from_index_edges(10, e);
}

/// The eleven-node running example: t joined to v1..v7, and two length-2
/// paths v2-v8-s and v1-v9-s. Labels: t=0, v_i=i, s=10.
struct ToyGraph {
  Graph graph;
  NodeId s;
  NodeId t;
};

inline ToyGraph toy() {
  EdgeList e;
  for (NodeId v = 1; v <= 7; ++v) e.emplace_back(0, v);
  e.emplace_back(2, 8);
  e.emplace_back(8, 10);
  e.emplace_back(1, 9);
  e.emplace_back(9, 10);
  ToyGraph tg{Graph::from_index_edges(11, e), 10, 0};
  return tg;
}

/// Star with `leaves` leaves (center 0) whose first two leaves are joined,
/// closing a triangle so the graph is not bipartite.
inline Graph star_with_triangle(std::size_t leaves) {
  EdgeList e;
  for (NodeId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  e.emplace_back(1, 2);
  return Graph::from_index_edges(leaves + 1, e);
}

/// Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
inline Graph two_triangles() {
  EdgeList e{{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}};
  return Graph::from_index_edges(6, e);
}

/// Connected, non-bipartite random graph: a random recursive tree plus
/// `extra_edges` uniformly random chords, plus one triangle-closing chord if
/// the result would otherwise be bipartite. Requires n >= 3.
template <class Rng>
Graph random_connected(std::size_t n, std::size_t extra_edges, Rng& rng) {
  std::set<std::pair<NodeId, NodeId>> edges;
  auto add = [&](NodeId a, NodeId b) {
    if (a == b) return false;
    return edges.emplace(std::min(a, b), std::max(a, b)).second;
  };
  for (NodeId v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeId> parent(0, v - 1);
    add(v, parent(rng));
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  for (std::size_t k = 0; k < extra_edges && edges.size() < max_edges;)
    if (add(node(rng), node(rng))) ++k;

  EdgeList list(edges.begin(), edges.end());
  Graph g = Graph::from_index_edges(n, list);
  if (validate(g).bipartite) {
    // Close a triangle around the first node that has two neighbors.
    for (NodeId v = 0; v < n; ++v) {
      auto nb = g.neighbors(v);
      if (nb.size() >= 2) {
        list.emplace_back(nb[0], nb[1]);
        break;
      }
    }
    g = Graph::from_index_edges(n, list);
  }
  return g;
}

/// Random graph with n nodes and average degree close to `avg_degree`:
/// a random recursive tree for connectivity plus uniform random chords, so the
/// degree distribution is near-Poisson. Suitable for large n (no edge set).
template <class Rng>
Graph random_sparse(std::size_t n, double avg_degree, Rng& rng) {
  EdgeList e;
  const auto target = static_cast<std::size_t>(avg_degree * static_cast<double>(n) / 2.0);
  e.reserve(target + 1);
  for (NodeId v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeId> parent(0, v - 1);
    e.emplace_back(v, parent(rng));
  }
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  while (e.size() < target) {
    NodeId a = node(rng), b = node(rng);
    if (a != b) e.emplace_back(a, b);
  }
  // Parallel chords collapse at construction; a triangle keeps it non-bipartite.
  e.emplace_back(0, 1);
  e.emplace_back(1, 2);
  e.emplace_back(0, 2);
  return Graph::from_index_edges(n, e);
}

/// Random graph with two equal communities: each half is a random recursive
/// tree plus uniform chords, and a `cross_fraction` share of the edges join
/// the halves. The sparse cut keeps λ close to 1 − 2·cross_fraction.
template <class Rng>
Graph planted_bisection(std::size_t n, double avg_degree, double cross_fraction, Rng& rng) {
  const NodeId half = static_cast<NodeId>(n / 2);
  EdgeList e;
  const auto target = static_cast<std::size_t>(avg_degree * static_cast<double>(n) / 2.0);
  e.reserve(target + 4);
  for (NodeId v = 1; v < n; ++v) {
    if (v == half) continue;
    const NodeId lo = v < half ? 0 : half;
    std::uniform_int_distribution<NodeId> parent(lo, v - 1);
    e.emplace_back(v, parent(rng));
  }
  std::uniform_int_distribution<NodeId> left(0, half - 1), right(half, static_cast<NodeId>(n - 1));
  std::bernoulli_distribution cross(cross_fraction), side(0.5);
  e.emplace_back(0, half);
  while (e.size() < target) {
    if (cross(rng)) {
      e.emplace_back(left(rng), right(rng));
    } else {
      auto& pick = side(rng) ? left : right;
      NodeId a = pick(rng), b = pick(rng);
      if (a != b) e.emplace_back(a, b);
    }
  }
  e.emplace_back(0, 1);
  e.emplace_back(1, 2);
  e.emplace_back(0, 2);
  return Graph::from_index_edges(n, e);
}

} // namespace geer::gen
