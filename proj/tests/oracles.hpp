#pragma once

// Dense reference computations used to check the library. Everything here is
// built from the raw edge set with plain matrix algebra, independent of the
// sparse kernels and eigensolvers under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geer/generators.hpp"
#include "geer/graph.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd adjacency(const geer::Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  MatrixXd a = MatrixXd::Zero(n, n);
  g.for_each_edge([&](geer::NodeId u, geer::NodeId v) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  });
  return a;
}

inline VectorXd degrees(const MatrixXd& a) { return a.rowwise().sum(); }

/// W_i(u, v) = p_i(u, v), the i-step walk probability, as (D⁻¹A)^i.
inline MatrixXd walk_matrix(const geer::Graph& g, int i) {
  MatrixXd a = adjacency(g);
  VectorXd d = degrees(a);
  MatrixXd step = d.cwiseInverse().asDiagonal() * a;
  MatrixXd w = MatrixXd::Identity(a.rows(), a.cols());
  for (int k = 0; k < i; ++k) w = w * step;
  return w;
}

/// r(s,t) from (L + 11ᵀ/n)⁻¹, valid on connected graphs.
inline double resistance(const geer::Graph& g, geer::NodeId s, geer::NodeId t) {
  MatrixXd a = adjacency(g);
  const auto n = a.rows();
  MatrixXd lap = MatrixXd(degrees(a).asDiagonal()) - a;
  MatrixXd shifted = lap + MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  VectorXd b = VectorXd::Zero(n);
  b(s) += 1.0;
  b(t) -= 1.0;
  VectorXd x = shifted.fullPivLu().solve(b);
  return b.dot(x);
}

/// Σ_{i=lo}^{hi} p_i(s,s)/d(s) + p_i(t,t)/d(t) − p_i(s,t)/d(t) − p_i(t,s)/d(s).
inline double series(const geer::Graph& g, geer::NodeId s, geer::NodeId t, int lo, int hi) {
  MatrixXd a = adjacency(g);
  VectorXd d = degrees(a);
  MatrixXd step = d.cwiseInverse().asDiagonal() * a;
  MatrixXd w = MatrixXd::Identity(a.rows(), a.cols());
  double sum = 0.0;
  for (int i = 0; i <= hi; ++i) {
    if (i >= lo) sum += w(s, s) / d(s) + w(t, t) / d(t) - w(s, t) / d(t) - w(t, s) / d(s);
    w = w * step;
  }
  return sum;
}

/// Truncated resistance r_ℓ.
inline double truncated(const geer::Graph& g, geer::NodeId s, geer::NodeId t, int ell) {
  return series(g, s, t, 0, ell);
}

/// q(s,t) for one-hot vectors: the i = 1..ℓ_f part of the series.
inline double q_one_hot(const geer::Graph& g, geer::NodeId s, geer::NodeId t, int ell_f) {
  return series(g, s, t, 1, ell_f);
}

/// q(s,t) = Σ_{i=1}^{ℓ_f} Σ_v (p_i(s,v) − p_i(t,v))(x(v)/d(s) − y(v)/d(t)).
inline double q_general(const geer::Graph& g, geer::NodeId s, geer::NodeId t, const std::vector<double>& x,
                        const std::vector<double>& y, int ell_f) {
  MatrixXd a = adjacency(g);
  VectorXd d = degrees(a);
  MatrixXd step = d.cwiseInverse().asDiagonal() * a;
  MatrixXd w = MatrixXd::Identity(a.rows(), a.cols());
  double sum = 0.0;
  for (int i = 1; i <= ell_f; ++i) {
    w = w * step;
    for (Eigen::Index v = 0; v < a.rows(); ++v)
      sum += (w(s, v) - w(t, v)) * (x[v] / d(s) - y[v] / d(t));
  }
  return sum;
}

/// max(|λ2|, |λn|) of D⁻¹A, from a general (non-symmetric) eigensolver.
inline double lambda(const geer::Graph& g) {
  MatrixXd a = adjacency(g);
  VectorXd d = degrees(a);
  MatrixXd p = d.cwiseInverse().asDiagonal() * a;
  Eigen::EigenSolver<MatrixXd> es(p, false);
  std::vector<double> ev;
  for (Eigen::Index k = 0; k < p.rows(); ++k) ev.push_back(es.eigenvalues()(k).real());
  std::sort(ev.begin(), ev.end());
  // drop the single eigenvalue 1
  ev.pop_back();
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

/// Pearson χ² statistic of observed counts against a uniform law.
inline double chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    chi2 += diff * diff / expected;
  }
  return chi2;
}

/// Upper 0.001 critical value of χ² with 4 degrees of freedom.
inline constexpr double kChi2Df4Crit001 = 18.4668;

/// The fixed random corpus shared by several property tests: connected,
/// non-bipartite graphs with 5 to 30 nodes.
inline std::vector<geer::Graph> corpus(std::size_t count = 50, std::uint64_t seed = 20240601) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(5, 30);
  std::vector<geer::Graph> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = size(rng);
    std::uniform_int_distribution<std::size_t> extra(1, 2 * n);
    out.push_back(geer::gen::random_connected(n, extra(rng), rng));
  }
  return out;
}

} // namespace oracle
