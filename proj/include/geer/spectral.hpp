#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "geer/error.hpp"
#include "geer/graph.hpp"

namespace geer {

/// Multiplicative inflation applied to the raw λ estimate.
inline constexpr double kLambdaMargin = 1.001;
/// Largest λ the estimators accept.
inline constexpr double kLambdaCap = 1.0 - 1e-6;
inline constexpr int kMetaFormatVersion = 1;

/// Result of the λ preprocessing step, persisted as a JSON sidecar.
struct SpectralMeta {
  double lambda = 0.0;     ///< min(lambda_raw * margin, cap), used for walk lengths
  double lambda_raw = 0.0; ///< power-iteration estimate of max(|λ2|, |λn|)
  std::uint64_t iterations_used = 0;
  double tolerance = 0.0;
  bool connected = false;
  bool bipartite = false;
  std::uint64_t n = 0;
  std::uint64_t m = 0;

  bool operator==(const SpectralMeta&) const = default;

  /// Whether this meta was computed for a graph of the same size.
  bool matches(const Graph& g) const { return n == g.node_count() && m == g.edge_count(); }
};

inline double apply_lambda_margin(double lambda_raw) { return std::min(lambda_raw * kLambdaMargin, kLambdaCap); }

/// Throws unless the graph is connected and non-bipartite.
inline void require_ergodic(const Graph& g) {
  auto report = validate(g);
  if (!report.connected) throw SpectralDegeneracyError("graph is disconnected");
  if (report.bipartite) throw SpectralDegeneracyError("graph is bipartite");
}

namespace detail {

inline std::vector<double> inv_sqrt_degrees(const Graph& g) {
  std::vector<double> r(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) r[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  return r;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

} // namespace detail

/// y = D^{-1/2} A D^{-1/2} x, the symmetric operator similar to P.
inline void normalized_adjacency_apply(const Graph& g, std::span<const double> inv_sqrt_deg,
                                       std::span<const double> x, std::span<double> y) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    double acc = 0.0;
    for (NodeId v : g.neighbors(u)) acc += x[v] * inv_sqrt_deg[v];
    y[u] = acc * inv_sqrt_deg[u];
  }
}

/// Principal unit eigenvector of the normalized adjacency: sqrt(d(v)/2m).
inline std::vector<double> principal_eigenvector(const Graph& g) {
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  std::vector<double> u(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) u[v] = std::sqrt(static_cast<double>(g.degree(v)) / two_m);
  return u;
}

/// Removes the component along the unit vector `u1`.
inline void deflate(std::span<const double> u1, std::span<double> x) {
  const double c = detail::dot(u1, x);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * u1[i];
}

/// Estimates λ = max(|λ2|, |λn|) of the transition matrix by power iteration
/// on the square of the deflated normalized adjacency. Stops once the residual
/// ||N²x − μx|| falls below tol·μ.
inline SpectralMeta estimate_lambda(const Graph& g, double tol = 1e-7, std::uint64_t max_iter = 100000) {
  require_ergodic(g);
  const std::size_t n = g.node_count();
  const auto isd = detail::inv_sqrt_degrees(g);
  const auto u1 = principal_eigenvector(g);

  std::vector<double> x(n), y(n), z(n);
  std::mt19937_64 rng(0x5eed1ab5ULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (auto& xi : x) xi = unif(rng);
  deflate(u1, x);
  double norm = std::sqrt(detail::dot(x, x));
  if (norm == 0.0) x.assign(n, 0.0);
  else
    for (auto& xi : x) xi /= norm;

  SpectralMeta meta;
  meta.tolerance = tol;
  meta.connected = true;
  meta.bipartite = false;
  meta.n = n;
  meta.m = g.edge_count();

  double mu = 0.0;
  for (std::uint64_t it = 1; it <= max_iter; ++it) {
    normalized_adjacency_apply(g, isd, x, y);
    deflate(u1, y);
    normalized_adjacency_apply(g, isd, y, z);
    deflate(u1, z);
    mu = detail::dot(y, y); // x·N²x with ||x|| = 1
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = z[i] - mu * x[i];
      res2 += r * r;
    }
    const double znorm = std::sqrt(detail::dot(z, z));
    if (std::sqrt(res2) <= tol * mu || znorm == 0.0) {
      meta.iterations_used = it;
      meta.lambda_raw = std::sqrt(std::max(mu, 0.0));
      meta.lambda = apply_lambda_margin(meta.lambda_raw);
      return meta;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / znorm;
  }
  throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iter) + " iterations",
                         std::sqrt(std::max(mu, 0.0)));
}

// ---------------------------------------------------------------------------
// Dense oracle

/// Full spectrum of P with π-orthonormal eigenvectors, eigenvalues in
/// decreasing algebraic order and f_1 = 1.
struct EigenSystem {
  std::vector<double> eigenvalues;
  std::vector<DenseVec> eigenvectors;

  /// max(|λ2|, |λn|).
  double lambda() const {
    if (eigenvalues.size() < 2) return 0.0;
    return std::max(std::abs(eigenvalues[1]), std::abs(eigenvalues.back()));
  }
};

inline EigenSystem dense_eigensystem(const Graph& g, std::size_t max_nodes = 500) {
  const std::size_t n = g.node_count();
  if (n > max_nodes)
    throw PreconditionError("dense eigensystem limited to " + std::to_string(max_nodes) + " nodes, graph has " +
                            std::to_string(n));
  if (!validate(g).connected) throw PreconditionError("dense eigensystem requires a connected graph");

  const auto isd = detail::inv_sqrt_degrees(g);
  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.neighbors(u)) sym(u, v) = isd[u] * isd[v];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver failed");

  const double scale = std::sqrt(2.0 * static_cast<double>(g.edge_count()));
  EigenSystem es;
  es.eigenvalues.reserve(n);
  es.eigenvectors.reserve(n);
  // Eigen sorts ascending; walk backwards for decreasing order.
  for (Eigen::Index k = static_cast<Eigen::Index>(n) - 1; k >= 0; --k) {
    es.eigenvalues.push_back(solver.eigenvalues()(k));
    DenseVec f(n);
    for (NodeId v = 0; v < n; ++v) f[v] = scale * isd[v] * solver.eigenvectors()(v, k);
    es.eigenvectors.push_back(std::move(f));
  }
  es.eigenvalues.front() = 1.0;
  es.eigenvectors.front().fill(1.0);
  return es;
}

// ---------------------------------------------------------------------------
// Sidecar I/O

inline nlohmann::json to_json(const SpectralMeta& meta) {
  return nlohmann::json{{"format_version", kMetaFormatVersion},
                        {"lambda", meta.lambda},
                        {"lambda_raw", meta.lambda_raw},
                        {"tolerance", meta.tolerance},
                        {"iterations_used", meta.iterations_used},
                        {"connected", meta.connected},
                        {"bipartite", meta.bipartite},
                        {"n", meta.n},
                        {"m", meta.m}};
}

inline void write_meta(const SpectralMeta& meta, std::ostream& out) { out << to_json(meta).dump(2) << '\n'; }

inline SpectralMeta read_meta(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("meta is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("meta document must be a JSON object");

  auto field = [&doc](const char* key) -> const nlohmann::json& {
    auto it = doc.find(key);
    if (it == doc.end()) throw ParseError(std::string("meta is missing '") + key + "'");
    return *it;
  };
  try {
    if (field("format_version").get<int>() != kMetaFormatVersion) throw ParseError("unsupported meta format_version");
    SpectralMeta meta;
    meta.lambda = field("lambda").get<double>();
    meta.lambda_raw = field("lambda_raw").get<double>();
    meta.tolerance = field("tolerance").get<double>();
    meta.iterations_used = field("iterations_used").get<std::uint64_t>();
    meta.connected = field("connected").get<bool>();
    meta.bipartite = field("bipartite").get<bool>();
    meta.n = field("n").get<std::uint64_t>();
    meta.m = field("m").get<std::uint64_t>();
    return meta;
  } catch (const nlohmann::json::type_error& e) {
    throw ParseError(std::string("meta field has the wrong type: ") + e.what());
  }
}

} // namespace geer
