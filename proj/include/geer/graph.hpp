#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geer/error.hpp"

namespace geer {

/// Dense node index in [0, n).
using NodeId = std::uint32_t;
/// External node label as it appears in an edge list.
using Label = std::uint64_t;

/// Length-n vector of reals indexed by NodeId.
class DenseVec {
public:
  DenseVec() = default;
  explicit DenseVec(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  explicit DenseVec(std::vector<double> values) : values_(std::move(values)) {}

  static DenseVec unit(std::size_t n, NodeId v) {
    DenseVec e(n);
    e[v] = 1.0;
    return e;
  }

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  void fill(double x) { std::fill(values_.begin(), values_.end(), x); }

  bool operator==(const DenseVec&) const = default;

private:
  std::vector<double> values_;
};

/// Immutable simple undirected graph in CSR form. Every undirected edge is
/// stored in both directions and neighbor lists are sorted.
class Graph {
public:
  Graph() = default;

  /// Builds a graph from labelled edges. Self-loops are dropped, parallel and
  /// reversed duplicates collapse into one edge, and labels are mapped to dense
  /// indices in order of first appearance (a self-loop label still gets a node).
  static Graph from_edges(std::span<const std::pair<Label, Label>> edges) {
    Graph g;
    auto intern = [&g](Label l) -> NodeId {
      auto [it, inserted] = g.index_.try_emplace(l, static_cast<NodeId>(g.labels_.size()));
      if (inserted) {
        if (g.labels_.size() >= std::numeric_limits<NodeId>::max())
          throw OverflowError("too many nodes for a 32-bit node index");
        g.labels_.push_back(l);
      }
      return it->second;
    };

    std::vector<std::pair<NodeId, NodeId>> arcs;
    arcs.reserve(edges.size() * 2);
    for (const auto& [a, b] : edges) {
      NodeId u = intern(a);
      NodeId v = intern(b);
      if (u == v) continue;
      arcs.emplace_back(u, v);
      arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    const std::size_t n = g.labels_.size();
    g.offsets_.assign(n + 1, 0);
    for (const auto& arc : arcs) ++g.offsets_[arc.first + 1];
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.neighbors_.reserve(arcs.size());
    for (const auto& arc : arcs) g.neighbors_.push_back(arc.second);
    return g;
  }

  /// Builds a graph whose labels are the indices themselves.
  static Graph from_index_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::pair<Label, Label>> labelled;
    labelled.reserve(edges.size() + n);
    // Self-loops register every index in order so that label == index.
    for (std::size_t v = 0; v < n; ++v) labelled.emplace_back(v, v);
    for (const auto& [u, v] : edges) labelled.emplace_back(u, v);
    return from_edges(labelled);
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  Label label(NodeId v) const noexcept { return labels_[v]; }
  std::span<const Label> labels() const noexcept { return labels_; }

  std::optional<NodeId> index_of(Label l) const {
    auto it = index_.find(l);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(NodeId v) const noexcept { return v < node_count(); }

  /// Calls f(u, v) once per undirected edge with u < v.
  template <class F>
  void for_each_edge(F&& f) const {
    for (NodeId u = 0; u < node_count(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) f(u, v);
  }

private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<Label> labels_;
  std::unordered_map<Label, NodeId> index_;
};

// ---------------------------------------------------------------------------
// Edge-list I/O

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\v\f";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Splits a line into whitespace-separated tokens.
inline std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<Label> parse_label(std::string_view tok) {
  Label v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

} // namespace detail

/// Reads a whitespace-separated edge list. Blank lines and lines starting with
/// '#' are skipped.
inline Graph load_edge_list(std::istream& in) {
  std::vector<std::pair<Label, Label>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto toks = detail::tokens(body);
    if (toks.size() != 2) throw ParseError("expected two node labels, got '" + std::string(body) + "'", lineno);
    auto a = detail::parse_label(toks[0]);
    auto b = detail::parse_label(toks[1]);
    if (!a || !b) throw ParseError("node labels must be non-negative integers", lineno);
    edges.emplace_back(*a, *b);
  }
  if (in.bad()) throw Error("read error while loading edge list");
  if (edges.empty()) throw ParseError("edge list is empty");
  return Graph::from_edges(edges);
}

inline Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_edge_list(in);
}

/// Writes one "u v" line per undirected edge, using the original labels.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  g.for_each_edge([&](NodeId u, NodeId v) { out << g.label(u) << ' ' << g.label(v) << '\n'; });
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  bool connected = false;
  bool bipartite = false;
  std::vector<NodeId> isolated_nodes;
};

/// Connectivity by BFS from node 0, bipartiteness by BFS 2-coloring of every
/// component.
inline ValidationReport validate(const Graph& g) {
  ValidationReport report;
  const std::size_t n = g.node_count();
  if (n == 0) return report;

  std::vector<int> color(n, -1);
  std::queue<NodeId> frontier;
  bool bipartite = true;
  std::size_t components = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (color[root] != -1) continue;
    ++components;
    color[root] = 0;
    frontier.push(root);
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop();
      for (NodeId v : g.neighbors(u)) {
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          frontier.push(v);
        } else if (color[v] == color[u]) {
          bipartite = false;
        }
      }
    }
  }
  report.connected = components == 1;
  report.bipartite = bipartite;
  for (NodeId v = 0; v < n; ++v)
    if (g.degree(v) == 0) report.isolated_nodes.push_back(v);
  return report;
}

// ---------------------------------------------------------------------------
// Random walks

/// Walks `length` steps from `origin`, calling visit(node) for each node
/// reached (the origin itself is not visited).
template <class Rng, class Visit>
void walk(const Graph& g, NodeId origin, std::size_t length, Rng& rng, Visit&& visit) {
  NodeId cur = origin;
  for (std::size_t i = 0; i < length; ++i) {
    auto nb = g.neighbors(cur);
    if (nb.empty()) throw PreconditionError("random walk reached an isolated node");
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    cur = nb[pick(rng)];
    visit(cur);
  }
}

/// Nodes visited by a walk, excluding its origin.
struct Walk {
  std::vector<NodeId> visited;
};

template <class Rng>
Walk sample_walk(const Graph& g, NodeId origin, std::size_t length, Rng& rng) {
  if (!g.contains(origin)) throw PreconditionError("walk origin out of range");
  if (length > 0 && g.degree(origin) == 0) throw PreconditionError("cannot walk from an isolated node");
  Walk w;
  w.visited.reserve(length);
  walk(g, origin, length, rng, [&](NodeId v) { w.visited.push_back(v); });
  return w;
}

// ---------------------------------------------------------------------------
// Linear-algebra primitives

/// y(u) = Σ_{v∈N(u)} x(v)/d(v). Only nonzero entries of x are pushed, in
/// increasing node order, so the result is independent of vector density.
inline void transition_apply_into(const Graph& g, std::span<const double> x, std::span<double> y) {
  const std::size_t n = g.node_count();
  if (x.size() != n || y.size() != n) throw PreconditionError("vector length does not match node count");
  std::fill(y.begin(), y.end(), 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const double xv = x[v];
    if (xv == 0.0) continue;
    const double share = xv / static_cast<double>(g.degree(v));
    for (NodeId u : g.neighbors(v)) y[u] += share;
  }
}

inline DenseVec transition_apply(const Graph& g, const DenseVec& x) {
  DenseVec y(g.node_count());
  transition_apply_into(g, x.span(), y.span());
  return y;
}

/// π(v) = d(v)/2m.
inline DenseVec stationary(const Graph& g) {
  if (g.edge_count() == 0) throw PreconditionError("stationary distribution needs at least one edge");
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  DenseVec pi(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) pi[v] = static_cast<double>(g.degree(v)) / two_m;
  return pi;
}

/// Σ d(v) over the support of x.
inline std::size_t frontier_volume(const Graph& g, std::span<const double> x) {
  if (x.size() != g.node_count()) throw PreconditionError("vector length does not match node count");
  std::size_t vol = 0;
  for (NodeId v = 0; v < x.size(); ++v)
    if (x[v] != 0.0) vol += g.degree(v);
  return vol;
}

inline std::size_t frontier_volume(const Graph& g, const DenseVec& x) { return frontier_volume(g, x.span()); }

/// Number of distinct walks of each length 1..max_len from `origin`
/// (entry i-1 holds the count for length i).
inline std::vector<std::uint64_t> count_walks(const Graph& g, NodeId origin, std::size_t max_len) {
  if (max_len < 1) throw PreconditionError("max_len must be at least 1");
  if (!g.contains(origin)) throw PreconditionError("origin out of range");
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> cur(n, 0), next(n, 0);
  cur[origin] = 1;
  std::vector<std::uint64_t> counts;
  counts.reserve(max_len);
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::fill(next.begin(), next.end(), 0);
    std::uint64_t total = 0;
    for (NodeId u = 0; u < n; ++u) {
      std::uint64_t acc = 0;
      for (NodeId v : g.neighbors(u))
        if (__builtin_add_overflow(acc, cur[v], &acc)) throw OverflowError("walk count overflows 64 bits");
      next[u] = acc;
      if (__builtin_add_overflow(total, acc, &total)) throw OverflowError("walk count overflows 64 bits");
    }
    counts.push_back(total);
    std::swap(cur, next);
  }
  return counts;
}

} // namespace geer
