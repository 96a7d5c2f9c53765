#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geer/bounds.hpp"
#include "geer/deadline.hpp"
#include "geer/error.hpp"
#include "geer/graph.hpp"
#include "geer/rng.hpp"
#include "geer/spectral.hpp"

namespace geer {

enum class Method { exact, smm, amc, geer, mc, mc2, tp };

inline constexpr Method kAllMethods[] = {Method::exact, Method::smm, Method::amc, Method::geer,
                                         Method::mc,    Method::mc2, Method::tp};

inline std::string_view to_string(Method m) {
  switch (m) {
  case Method::exact: return "exact";
  case Method::smm: return "smm";
  case Method::amc: return "amc";
  case Method::geer: return "geer";
  case Method::mc: return "mc";
  case Method::mc2: return "mc2";
  case Method::tp: return "tp";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

/// An approximate resistance plus the work it took.
struct Estimate {
  double value = 0.0;
  Method method = Method::exact;
  std::uint64_t walks_used = 0;
  std::uint64_t smm_iterations = 0;
  std::uint64_t batches_used = 0;
  std::chrono::nanoseconds elapsed{0};
  std::uint64_t seed = 0;
};

/// Running sums for one AMC batch. Merging is associative.
struct WalkAccumulator {
  double sum_z = 0.0;
  double sum_z2 = 0.0;
  std::uint64_t count = 0;

  void add(double z) noexcept {
    sum_z += z;
    sum_z2 += z * z;
    ++count;
  }

  void merge(const WalkAccumulator& other) noexcept {
    sum_z += other.sum_z;
    sum_z2 += other.sum_z2;
    count += other.count;
  }

  double mean() const noexcept { return count == 0 ? 0.0 : sum_z / static_cast<double>(count); }

  /// Biased empirical variance, clamped at zero against rounding.
  double variance() const noexcept {
    if (count == 0) return 0.0;
    const double z = mean();
    return std::max(0.0, sum_z2 / static_cast<double>(count) - z * z);
  }
};

/// Magnitude assumption γ for the commute-time baselines: an upper bound on
/// r(s,t) for MC, a lower bound for MC2.
struct McConfig {
  explicit McConfig(double gamma_, std::uint64_t max_steps_ = 1'000'000) : gamma(gamma_), max_steps(max_steps_) {
    if (!(gamma > 0.0)) throw PreconditionError("gamma must be positive");
  }
  double gamma;
  /// Per-walk step cap; hitting it aborts the query.
  std::uint64_t max_steps;
};

namespace detail {

inline void require_node(const Graph& g, NodeId v) {
  if (!g.contains(v)) throw PreconditionError("node index " + std::to_string(v) + " out of range");
}

inline void require_walkable(const Graph& g, NodeId s, NodeId t) {
  require_node(g, s);
  require_node(g, t);
  if (g.degree(s) == 0 || g.degree(t) == 0) throw PreconditionError("query endpoint is isolated");
}

/// Checks a meta sidecar before λ is used for a walk length.
inline double usable_lambda(const Graph& g, const SpectralMeta& meta) {
  if (!meta.matches(g)) throw PreconditionError("spectral meta does not match the graph (stale sidecar?)");
  if (!meta.connected) throw SpectralDegeneracyError("graph is disconnected");
  if (meta.bipartite) throw SpectralDegeneracyError("graph is bipartite");
  if (meta.lambda >= kLambdaCap) throw SpectralDegeneracyError("spectral gap too small");
  return meta.lambda;
}

inline double d(const Graph& g, NodeId v) { return static_cast<double>(g.degree(v)); }

class Stopwatch {
public:
  std::chrono::nanoseconds elapsed() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start_);
  }

private:
  Clock::time_point start_ = Clock::now();
};

} // namespace detail

// ---------------------------------------------------------------------------
// EXACT

/// Resistances from the Moore–Penrose pseudo-inverse of L = D − A, obtained
/// from one symmetric eigendecomposition and reused across queries.
class ExactResistance {
public:
  explicit ExactResistance(const Graph& g, std::size_t max_nodes = 2000) {
    const std::size_t n = g.node_count();
    if (n > max_nodes)
      throw PreconditionError("exact resistance limited to " + std::to_string(max_nodes) + " nodes, graph has " +
                              std::to_string(n));
    if (!validate(g).connected) throw PreconditionError("exact resistance requires a connected graph");
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(N, N);
    for (NodeId u = 0; u < n; ++u) {
      lap(u, u) = static_cast<double>(g.degree(u));
      for (NodeId v : g.neighbors(u)) lap(u, v) = -1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) throw Error("Laplacian eigensolver failed");
    const double cutoff = 1e-9 * solver.eigenvalues().cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < N; ++k) {
      const double mu = solver.eigenvalues()(k);
      if (mu > cutoff) {
        inv_eigenvalues_.push_back(1.0 / mu);
        vectors_.push_back(solver.eigenvectors().col(k));
      }
    }
    n_ = n;
  }

  double operator()(NodeId s, NodeId t) const {
    if (s >= n_ || t >= n_) throw PreconditionError("node index out of range");
    if (s == t) return 0.0;
    double r = 0.0;
    for (std::size_t k = 0; k < vectors_.size(); ++k) {
      const double diff = vectors_[k](s) - vectors_[k](t);
      r += diff * diff * inv_eigenvalues_[k];
    }
    return r;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> inv_eigenvalues_;
  std::vector<Eigen::VectorXd> vectors_;
};

inline double exact_er(const Graph& g, NodeId s, NodeId t, std::size_t max_nodes = 2000) {
  detail::require_node(g, s);
  detail::require_node(g, t);
  return ExactResistance(g, max_nodes)(s, t);
}

// ---------------------------------------------------------------------------
// SMM

/// One propagated distribution p_i(origin,·), stored densely with its support
/// kept alongside so a step costs the support's volume rather than n.
class Frontier {
public:
  Frontier(const Graph& g, NodeId origin) : x_(DenseVec::unit(g.node_count(), origin)), support_{origin} {
    volume_ = g.degree(origin);
  }

  /// x ← P·x. Pushes go in increasing node order, matching transition_apply
  /// bit for bit. `scratch` must be all zeros and `mark` all false.
  void step(const Graph& g, DenseVec& scratch, std::vector<char>& mark) {
    next_.clear();
    for (NodeId v : support_) {
      const double share = x_[v] / static_cast<double>(g.degree(v));
      for (NodeId u : g.neighbors(v)) {
        if (!mark[u]) {
          mark[u] = 1;
          next_.push_back(u);
        }
        scratch[u] += share;
      }
      x_[v] = 0.0;
    }
    std::swap(x_, scratch);
    std::swap(support_, next_);
    std::sort(support_.begin(), support_.end());
    volume_ = 0;
    for (NodeId u : support_) {
      mark[u] = 0;
      volume_ += g.degree(u);
    }
  }

  const DenseVec& values() const noexcept { return x_; }
  std::span<const NodeId> support() const noexcept { return support_; }
  std::size_t volume() const noexcept { return volume_; }

private:
  DenseVec x_;
  std::vector<NodeId> support_, next_;
  std::size_t volume_ = 0;
};

/// Reversed view v ↦ p_i(v, origin) = x(v)·d(origin)/d(v) of a forward
/// distribution, read in place. Its two largest entries come from the support.
class ReversedWeights {
public:
  ReversedWeights(const Graph& g, const Frontier& f, NodeId origin)
      : g_(&g), x_(&f.values()), scale_(static_cast<double>(g.degree(origin))) {
    for (NodeId v : f.support()) {
      const double w = (*this)(v);
      if (w > max1_) {
        max2_ = max1_;
        max1_ = w;
      } else if (w > max2_) {
        max2_ = w;
      }
    }
  }

  double operator()(NodeId v) const noexcept {
    const double xv = (*x_)[v];
    return xv == 0.0 ? 0.0 : xv * scale_ / static_cast<double>(g_->degree(v));
  }
  double max1() const noexcept { return max1_; }
  double max2() const noexcept { return max2_; }

private:
  const Graph* g_;
  const DenseVec* x_;
  double scale_;
  double max1_ = 0.0;
  double max2_ = 0.0;
};

/// Power-iteration state shared by SMM and GEER. The forward distributions
/// x_s = p_i(s,·) and x_t = p_i(t,·) are propagated; the vectors handed to the
/// sampler are their reversed forms s*(v) = p_i(v,s) = x_s(v)·d(s)/d(v).
class SmmState {
public:
  SmmState(const Graph& g, NodeId s, NodeId t)
      : g_(&g), s_(s), t_(t), fs_(g, s), ft_(g, t), scratch_(g.node_count()), mark_(g.node_count(), 0) {
    r_b_ = term();
  }

  void step() {
    fs_.step(*g_, scratch_, mark_);
    ft_.step(*g_, scratch_, mark_);
    r_b_ += term();
    ++iterations_;
  }

  double r_b() const noexcept { return r_b_; }
  std::size_t iterations() const noexcept { return iterations_; }
  const DenseVec& forward_s() const noexcept { return fs_.values(); }
  const DenseVec& forward_t() const noexcept { return ft_.values(); }

  /// Σ d(v) over the supports of both vectors.
  std::size_t frontier_volume() const noexcept { return fs_.volume() + ft_.volume(); }

  ReversedWeights s_star() const { return ReversedWeights(*g_, fs_, s_); }
  ReversedWeights t_star() const { return ReversedWeights(*g_, ft_, t_); }

  /// Writes s*(v) = p_i(v,s) into `out`.
  void reverse_s(DenseVec& out) const { reverse(s_star(), out); }
  /// Writes t*(v) = p_i(v,t) into `out`.
  void reverse_t(DenseVec& out) const { reverse(t_star(), out); }

private:
  // p_i(s,s)/d(s) + p_i(t,t)/d(t) − p_i(s,t)/d(t) − p_i(t,s)/d(s)
  double term() const {
    const double ds = detail::d(*g_, s_), dt = detail::d(*g_, t_);
    const DenseVec& xs = fs_.values();
    const DenseVec& xt = ft_.values();
    return xs[s_] / ds + xt[t_] / dt - xs[t_] / dt - xt[s_] / ds;
  }

  void reverse(const ReversedWeights& w, DenseVec& out) const {
    out = DenseVec(g_->node_count());
    for (NodeId v = 0; v < out.size(); ++v) out[v] = w(v);
  }

  const Graph* g_;
  NodeId s_, t_;
  Frontier fs_, ft_;
  DenseVec scratch_;
  std::vector<char> mark_;
  double r_b_ = 0.0;
  std::size_t iterations_ = 0;
};

struct SmmResult {
  double r_b = 0.0;
  DenseVec s_star; ///< s*(v) = p_{ell_b}(v, s)
  DenseVec t_star; ///< t*(v) = p_{ell_b}(v, t)
};

/// Truncated resistance Σ_{i=0}^{ell_b} (p_i(s,s)/d(s) + p_i(t,t)/d(t) − p_i(s,t)/d(t) − p_i(t,s)/d(s)).
inline SmmResult smm(const Graph& g, NodeId s, NodeId t, std::size_t ell_b, const Deadline& deadline = Deadline::none()) {
  detail::require_walkable(g, s, t);
  SmmState state(g, s, t);
  for (std::size_t i = 0; i < ell_b; ++i) {
    if ((i & 15) == 0) deadline.check();
    state.step();
  }
  SmmResult out;
  out.r_b = state.r_b();
  state.reverse_s(out.s_star);
  state.reverse_t(out.t_star);
  return out;
}

/// SMM with ell_b set by the degree-aware walk length.
inline Estimate smm_query(const Graph& g, NodeId s, NodeId t, double epsilon, const SpectralMeta& meta,
                          const Deadline& deadline = Deadline::none()) {
  detail::Stopwatch clock;
  detail::require_walkable(g, s, t);
  const double lambda = detail::usable_lambda(g, meta);
  Estimate est;
  est.method = Method::smm;
  if (s != t) {
    const std::size_t ell = refined_ell(g.degree(s), g.degree(t), epsilon, lambda);
    SmmState state(g, s, t);
    for (std::size_t i = 0; i < ell; ++i) {
      if ((i & 15) == 0) deadline.check();
      state.step();
    }
    est.value = state.r_b();
    est.smm_iterations = ell;
  }
  est.elapsed = clock.elapsed();
  return est;
}

// ---------------------------------------------------------------------------
// AMC

struct AmcStats {
  std::uint64_t walks_used = 0;
  std::uint64_t batches_used = 0;
  SampleBudget budget;
};

namespace detail {

inline bool same_weights(const OneHot& a, const OneHot& b) { return a.hot() == b.hot(); }
template <class A, class B>
bool same_weights(const A& a, const B& b) {
  return static_cast<const void*>(&a) == static_cast<const void*>(&b);
}

} // namespace detail

/// One sample Z_k: an ell_f-step walk from each endpoint, weighted by the
/// two vectors. E[Z_k] = q(s,t) and |Z_k| ≤ ψ/2.
template <WalkWeights S, WalkWeights T, class Rng>
double sample_z(const Graph& g, NodeId s, NodeId t, const S& s_vec, const T& t_vec, std::size_t ell_f, Rng& from_s,
                Rng& from_t) {
  const double ds = detail::d(g, s), dt = detail::d(g, t);
  double zk = 0.0;
  walk(g, s, ell_f, from_s, [&](NodeId u) { zk += s_vec(u) / ds - t_vec(u) / dt; });
  walk(g, t, ell_f, from_t, [&](NodeId u) { zk += t_vec(u) / dt - s_vec(u) / ds; });
  return zk;
}

/// Adaptive Monte Carlo estimate of
/// q(s,t) = Σ_{i=1}^{ell_f} Σ_v (p_i(s,v) − p_i(t,v))·(s(v)/d(s) − t(v)/d(t)).
/// Batch i draws η_0·2^{i−1} fresh walk pairs and stops once the empirical
/// Bernstein radius at δ/τ is at most ε/2.
template <WalkWeights S, WalkWeights T>
std::pair<double, AmcStats> amc(const Graph& g, NodeId s, NodeId t, const S& s_vec, const T& t_vec,
                                std::size_t ell_f, const ErrorBudget& budget, std::uint64_t seed,
                                const Deadline& deadline = Deadline::none()) {
  detail::require_walkable(g, s, t);
  AmcStats stats;
  if (ell_f == 0) return {0.0, stats};
  if (s == t && detail::same_weights(s_vec, t_vec)) return {0.0, stats}; // every Z_k is 0

  stats.budget = sample_budget(psi(s_vec, t_vec, g.degree(s), g.degree(t), ell_f), budget);
  const double delta_per_batch = budget.delta() / budget.tau();
  const double target = budget.epsilon() / 2.0;

  double z = 0.0;
  std::uint64_t eta = stats.budget.eta_0;
  for (unsigned batch = 1; batch <= budget.tau(); ++batch) {
    RandomStream from_s = substream(seed, Endpoint::source, batch);
    RandomStream from_t = substream(seed, Endpoint::target, batch);
    WalkAccumulator acc;
    for (std::uint64_t k = 0; k < eta; ++k) {
      if ((k & 1023) == 0) deadline.check();
      acc.add(sample_z(g, s, t, s_vec, t_vec, ell_f, from_s, from_t));
    }
    stats.walks_used += 2 * eta;
    stats.batches_used = batch;
    z = acc.mean();
    if (bernstein_half_width(eta, acc.variance(), stats.budget.psi, delta_per_batch) <= target) break;
    eta *= 2;
  }
  return {z, stats};
}

/// ε-approximate r(s,t) by AMC on one-hot vectors with the degree-aware
/// walk length, plus the analytic zero-length term 1/d(s) + 1/d(t).
inline Estimate amc_query(const Graph& g, NodeId s, NodeId t, const ErrorBudget& budget, const SpectralMeta& meta,
                          std::uint64_t seed, const Deadline& deadline = Deadline::none()) {
  detail::Stopwatch clock;
  detail::require_walkable(g, s, t);
  const double lambda = detail::usable_lambda(g, meta);
  Estimate est;
  est.method = Method::amc;
  est.seed = seed;
  if (s != t) {
    const std::size_t ell = refined_ell(g.degree(s), g.degree(t), budget.epsilon(), lambda);
    auto [r_f, stats] = amc(g, s, t, OneHot(s), OneHot(t), ell, budget, seed, deadline);
    est.value = r_f + 1.0 / detail::d(g, s) + 1.0 / detail::d(g, t);
    est.walks_used = stats.walks_used;
    est.batches_used = stats.batches_used;
  }
  est.elapsed = clock.elapsed();
  return est;
}

// ---------------------------------------------------------------------------
// GEER

/// Where GEER switched from matrix-vector products to sampling.
struct GeerTrace {
  std::size_t ell = 0;
  std::size_t ell_b = 0;
  double r_b = 0.0;
  double r_f = 0.0;
};

/// Greedy hybrid: SMM iterations while their frontier volume stays within the
/// remaining AMC budget h(ℓ − ℓ_b), then AMC on the SMM vectors for the
/// remaining ℓ − ℓ_b steps.
inline Estimate geer(const Graph& g, NodeId s, NodeId t, const ErrorBudget& budget, const SpectralMeta& meta,
                     std::uint64_t seed, const Deadline& deadline = Deadline::none(), GeerTrace* trace = nullptr) {
  detail::Stopwatch clock;
  detail::require_walkable(g, s, t);
  const double lambda = detail::usable_lambda(g, meta);
  Estimate est;
  est.method = Method::geer;
  est.seed = seed;
  if (s == t) {
    est.elapsed = clock.elapsed();
    return est;
  }

  const std::size_t d_s = g.degree(s), d_t = g.degree(t);
  const std::size_t ell = refined_ell(d_s, d_t, budget.epsilon(), lambda);
  const double r_b0 = 1.0 / static_cast<double>(d_s) + 1.0 / static_cast<double>(d_t);
  GeerTrace tr;
  tr.ell = ell;

  // ℓ_b = 0: the frontier is {s, t} and the vectors are one-hot.
  const bool sample_now =
      ell == 0 || d_s + d_t > sample_budget(psi(OneHot(s), OneHot(t), d_s, d_t, ell), budget).h;
  if (sample_now) {
    auto [r_f, stats] = amc(g, s, t, OneHot(s), OneHot(t), ell, budget, seed, deadline);
    tr.r_b = r_b0;
    tr.r_f = r_f;
    est.value = r_b0 + r_f;
    est.walks_used = stats.walks_used;
    est.batches_used = stats.batches_used;
  } else {
    SmmState state(g, s, t);
    for (;;) {
      deadline.check();
      state.step();
      if (state.iterations() >= ell) break;
      const double p = psi(state.s_star(), state.t_star(), d_s, d_t, ell - state.iterations());
      if (state.frontier_volume() > sample_budget(p, budget).h) break;
    }
    tr.ell_b = state.iterations();
    tr.r_b = state.r_b();
    est.value = state.r_b();
    est.smm_iterations = state.iterations();
    if (tr.ell_b < ell) {
      auto [r_f, stats] = amc(g, s, t, state.s_star(), state.t_star(), ell - tr.ell_b, budget, seed, deadline);
      tr.r_f = r_f;
      est.value += r_f;
      est.walks_used = stats.walks_used;
      est.batches_used = stats.batches_used;
    }
  }
  if (trace) *trace = tr;
  est.elapsed = clock.elapsed();
  return est;
}

// ---------------------------------------------------------------------------
// Baselines

/// Commute-time Monte Carlo: η = ⌈3γ·d(s)·ln(1/δ)/ε²⌉ excursions from s
/// (walks until the first return to s); η_r of them visit t. The escape
/// probability is 1/(d(s)·r(s,t)), so r ≈ η/(d(s)·η_r).
inline Estimate mc(const Graph& g, NodeId s, NodeId t, double epsilon, double delta, const McConfig& cfg,
                   std::uint64_t seed, const Deadline& deadline = Deadline::none()) {
  detail::Stopwatch clock;
  detail::require_walkable(g, s, t);
  if (s == t) throw PreconditionError("mc requires distinct endpoints");
  ErrorBudget check(epsilon, delta, 1);
  const double raw = 3.0 * cfg.gamma * detail::d(g, s) * std::log(1.0 / delta) / (epsilon * epsilon);
  const std::uint64_t eta = std::max<std::uint64_t>(1, detail::to_count(detail::tolerant_ceil(raw)));

  RandomStream rng = substream(seed, Endpoint::source, 0);
  std::uint64_t returns_via_t = 0;
  std::uint64_t steps_total = 0;
  for (std::uint64_t k = 0; k < eta; ++k) {
    NodeId cur = s;
    bool hit_t = false;
    std::uint64_t steps = 0;
    do {
      auto nb = g.neighbors(cur);
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      cur = nb[pick(rng)];
      hit_t = hit_t || cur == t;
      if (++steps >= cfg.max_steps && cur != s)
        throw PreconditionError("excursion from s did not return within " + std::to_string(cfg.max_steps) + " steps");
      if ((++steps_total & 0xffff) == 0) deadline.check();
    } while (cur != s);
    if (hit_t) ++returns_via_t;
  }
  if (returns_via_t == 0) throw PreconditionError("no excursion reached t (gamma assumption violated?)");

  Estimate est;
  est.method = Method::mc;
  est.seed = seed;
  est.value = static_cast<double>(eta) / (detail::d(g, s) * static_cast<double>(returns_via_t));
  est.walks_used = eta;
  est.elapsed = clock.elapsed();
  return est;
}

/// Edge-query Monte Carlo: the fraction of ⌈3·ln(1/δ)/(ε²γ)⌉ walks from s
/// whose first arrival at t crosses the edge (s, t).
inline Estimate mc2(const Graph& g, NodeId s, NodeId t, double epsilon, double delta, const McConfig& cfg,
                    std::uint64_t seed, const Deadline& deadline = Deadline::none()) {
  detail::Stopwatch clock;
  detail::require_walkable(g, s, t);
  if (s == t || !g.has_edge(s, t)) throw PreconditionError("mc2 requires (s, t) to be an edge");
  ErrorBudget check(epsilon, delta, 1);
  const double raw = 3.0 * std::log(1.0 / delta) / (epsilon * epsilon * cfg.gamma);
  const std::uint64_t count = std::max<std::uint64_t>(1, detail::to_count(detail::tolerant_ceil(raw)));

  RandomStream rng = substream(seed, Endpoint::source, 0);
  std::uint64_t via_edge = 0;
  std::uint64_t steps_total = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    NodeId prev = s, cur = s;
    std::uint64_t steps = 0;
    while (cur != t) {
      auto nb = g.neighbors(cur);
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      prev = cur;
      cur = nb[pick(rng)];
      if (++steps >= cfg.max_steps && cur != t)
        throw PreconditionError("walk from s did not reach t within " + std::to_string(cfg.max_steps) + " steps");
      if ((++steps_total & 0xffff) == 0) deadline.check();
    }
    if (prev == s) ++via_edge;
  }

  Estimate est;
  est.method = Method::mc2;
  est.seed = seed;
  est.value = static_cast<double>(via_edge) / static_cast<double>(count);
  est.walks_used = count;
  est.elapsed = clock.elapsed();
  return est;
}

/// Number of length-i walks TP draws per endpoint and length:
/// ⌈40ℓ²·ln(8ℓ/δ)/ε²⌉.
inline std::uint64_t tp_walks_per_length(std::size_t ell, double epsilon, double delta) {
  if (ell == 0) return 0;
  const double l = static_cast<double>(ell);
  return detail::to_count(detail::tolerant_ceil(40.0 * l * l * std::log(8.0 * l / delta) / (epsilon * epsilon)));
}

/// Truncated-walk Monte Carlo with the degree-oblivious walk length: end-point
/// frequencies of length-i walks from s and t estimate every p_i term of the
/// truncated series.
inline Estimate tp(const Graph& g, NodeId s, NodeId t, double epsilon, double delta, const SpectralMeta& meta,
                   std::uint64_t seed, const Deadline& deadline = Deadline::none()) {
  detail::Stopwatch clock;
  detail::require_walkable(g, s, t);
  ErrorBudget check(epsilon, delta, 1);
  const double lambda = detail::usable_lambda(g, meta);
  const std::size_t ell = peng_ell(epsilon, lambda);
  const std::uint64_t per_length = tp_walks_per_length(ell, epsilon, delta);
  const double ds = detail::d(g, s), dt = detail::d(g, t);
  const double n = static_cast<double>(per_length);

  double value = s != t ? 1.0 / ds + 1.0 / dt : 0.0;
  for (std::size_t len = 1; len <= ell; ++len) {
    // One pool per endpoint estimates both of its terms.
    auto pool = [&](NodeId origin, Endpoint which) {
      RandomStream rng = substream(seed, which, len);
      std::uint64_t at_s = 0, at_t = 0;
      for (std::uint64_t k = 0; k < per_length; ++k) {
        if ((k & 4095) == 0) deadline.check();
        NodeId end = origin;
        walk(g, origin, len, rng, [&](NodeId v) { end = v; });
        at_s += end == s;
        at_t += end == t;
      }
      return std::pair{static_cast<double>(at_s) / n, static_cast<double>(at_t) / n};
    };
    auto [ss, st] = pool(s, Endpoint::source);
    auto [ts, tt] = pool(t, Endpoint::target);
    value += (ss / ds - st / dt) + (tt / dt - ts / ds);
  }

  Estimate est;
  est.method = Method::tp;
  est.seed = seed;
  est.value = value;
  est.walks_used = 2 * static_cast<std::uint64_t>(ell) * per_length;
  est.elapsed = clock.elapsed();
  return est;
}

} // namespace geer
