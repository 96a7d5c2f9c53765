#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geer/bounds.hpp"
#include "geer/deadline.hpp"
#include "geer/error.hpp"
#include "geer/estimators.hpp"
#include "geer/graph.hpp"
#include "geer/rng.hpp"
#include "geer/spectral.hpp"

// Query generation, ground truth, single queries and benchmarking on top of
// the estimators. Every command returns a process exit code and writes
// diagnostics to the supplied error stream.
namespace geer::harness {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,   ///< I/O, parse or usage error
  kDegenerate = 2,   ///< bipartite / disconnected graph, spectral gap too small
  kUnknownLabel = 3, ///< query label not in the graph
  kPrecondition = 4, ///< method precondition violated
};

/// Graphs at or below this size get exact ground truth instead of SMM.
inline constexpr std::size_t kExactGroundTruthLimit = 2000;
/// MC2 falls back to γ = 1/(2m) only up to this many edges.
inline constexpr std::size_t kMc2DefaultGammaMaxEdges = 1000;

inline const std::vector<double> kDefaultEpsList{0.01, 0.02, 0.05, 0.1, 0.2, 0.5};

// ---------------------------------------------------------------------------
// Formatting

/// Shortest decimal string that round-trips the double.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Query sets

using LabelPair = std::pair<Label, Label>;

enum class QueryKind { random_pairs, edges };

inline std::optional<QueryKind> parse_query_kind(std::string_view s) {
  if (s == "random_pairs" || s == "random") return QueryKind::random_pairs;
  if (s == "edges") return QueryKind::edges;
  return std::nullopt;
}

struct QuerySet {
  QueryKind kind = QueryKind::random_pairs;
  std::vector<LabelPair> entries;
  std::uint64_t seed = 0;
};

/// Uniform random pairs with s ≠ t, or uniform random edges. Both sample
/// without replacement while the pool is large enough and fall back to
/// sampling with replacement (with a warning) otherwise.
inline QuerySet generate_queries(const Graph& g, QueryKind kind, std::size_t count, std::uint64_t seed,
                                 std::ostream& warn) {
  if (count < 1) throw PreconditionError("query count must be at least 1");
  const std::size_t n = g.node_count();
  QuerySet qs{kind, {}, seed};
  RandomStream rng(derive_seed({seed, 0x9e5ULL}));

  if (kind == QueryKind::edges) {
    const std::size_t m = g.edge_count();
    if (m == 0) throw PreconditionError("graph has no edges");
    std::vector<LabelPair> all;
    all.reserve(m);
    g.for_each_edge([&](NodeId u, NodeId v) { all.emplace_back(g.label(u), g.label(v)); });
    if (count <= m) {
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(count);
      qs.entries = std::move(all);
    } else {
      warn << "warning: " << count << " edge queries requested but the graph has " << m
           << " edges; sampling with replacement\n";
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      for (std::size_t i = 0; i < count; ++i) qs.entries.push_back(all[pick(rng)]);
    }
    return qs;
  }

  if (n < 2) throw PreconditionError("random pairs need at least two nodes");
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const bool distinct = static_cast<double>(count) <= pairs;
  if (!distinct)
    warn << "warning: " << count << " random pairs requested but only " << pairs
         << " distinct pairs exist; sampling with replacement\n";
  std::set<std::pair<NodeId, NodeId>> seen;
  while (qs.entries.size() < count) {
    NodeId a = node(rng), b = node(rng);
    if (a == b) continue;
    if (distinct && !seen.emplace(std::min(a, b), std::max(a, b)).second) continue;
    qs.entries.emplace_back(g.label(a), g.label(b));
  }
  return qs;
}

inline void write_queries(const QuerySet& qs, std::ostream& out) {
  out << "# kind=" << (qs.kind == QueryKind::edges ? "edges" : "random_pairs") << " seed=" << qs.seed
      << " count=" << qs.entries.size() << '\n';
  for (const auto& [s, t] : qs.entries) out << s << '\t' << t << '\n';
}

/// Reads a query TSV: two label columns per line, '#' comments.
inline std::vector<LabelPair> read_queries(std::istream& in) {
  std::vector<LabelPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto toks = detail::tokens(body);
    if (toks.size() < 2) throw ParseError("expected two labels", lineno);
    auto a = detail::parse_label(toks[0]);
    auto b = detail::parse_label(toks[1]);
    if (!a || !b) throw ParseError("labels must be non-negative integers", lineno);
    out.emplace_back(*a, *b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground truth

struct GroundTruthRow {
  Label s = 0;
  Label t = 0;
  double r = 0.0;
};

using GroundTruth = std::map<LabelPair, double>;

/// Resolves a label, throwing a lookup error the CLI maps to exit code 3.
class UnknownLabel : public Error {
public:
  explicit UnknownLabel(Label l) : Error("unknown node label " + std::to_string(l)) {}
};

inline NodeId resolve(const Graph& g, Label l) {
  auto v = g.index_of(l);
  if (!v) throw UnknownLabel(l);
  return *v;
}

/// Exact resistances on small graphs, SMM with `iters` iterations otherwise.
inline std::vector<GroundTruthRow> compute_ground_truth(const Graph& g, const std::vector<LabelPair>& queries,
                                                        std::size_t iters) {
  if (iters < 1) throw PreconditionError("iters must be at least 1");
  std::vector<GroundTruthRow> rows;
  rows.reserve(queries.size());
  if (g.node_count() <= kExactGroundTruthLimit) {
    ExactResistance exact(g, kExactGroundTruthLimit);
    for (const auto& [a, b] : queries) rows.push_back({a, b, exact(resolve(g, a), resolve(g, b))});
    return rows;
  }
  require_ergodic(g);
  for (const auto& [a, b] : queries) {
    NodeId s = resolve(g, a), t = resolve(g, b);
    rows.push_back({a, b, s == t ? 0.0 : smm(g, s, t, iters).r_b});
  }
  return rows;
}

/// Tail bound λ^{L+1}/(1−λ)·(1/d(s) + 1/d(t)) on the error of an
/// L-iteration SMM ground truth.
inline double smm_tail_bound(double lambda, std::size_t iters, std::size_t d_s, std::size_t d_t) {
  return std::pow(lambda, static_cast<double>(iters + 1)) / (1.0 - lambda) *
         (1.0 / static_cast<double>(d_s) + 1.0 / static_cast<double>(d_t));
}

inline void write_ground_truth(const std::vector<GroundTruthRow>& rows, std::ostream& out) {
  out << "# s\tt\tr\n";
  for (const auto& row : rows) out << row.s << '\t' << row.t << '\t' << format_double(row.r) << '\n';
}

inline GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth gt;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto toks = detail::tokens(body);
    if (toks.size() != 3) throw ParseError("expected s, t and r columns", lineno);
    auto a = detail::parse_label(toks[0]);
    auto b = detail::parse_label(toks[1]);
    double r{};
    auto [ptr, ec] = std::from_chars(toks[2].data(), toks[2].data() + toks[2].size(), r);
    if (!a || !b || ec != std::errc{} || ptr != toks[2].data() + toks[2].size())
      throw ParseError("malformed ground-truth row", lineno);
    gt[{*a, *b}] = r;
  }
  return gt;
}

// ---------------------------------------------------------------------------
// Single queries

struct QueryOptions {
  Method method = Method::geer;
  double epsilon = 0.1;
  double delta = 0.01;
  unsigned tau = 5;
  std::uint64_t seed = 0;
  std::optional<double> gamma;
  std::optional<std::chrono::milliseconds> timeout;
};

/// Everything a query may need besides the graph; missing pieces are errors
/// only for the methods that need them.
struct QueryContext {
  const Graph* graph = nullptr;
  const SpectralMeta* meta = nullptr;
  const ExactResistance* exact = nullptr;
};

inline const SpectralMeta& require_meta(const QueryContext& ctx, Method m) {
  if (!ctx.meta) throw PreconditionError(std::string("method ") + std::string(to_string(m)) + " requires --meta");
  return *ctx.meta;
}

inline double mc_gamma(const Graph& g, Method m, const std::optional<double>& gamma) {
  if (gamma) return *gamma;
  if (m == Method::mc) return 1.0;
  if (g.edge_count() <= kMc2DefaultGammaMaxEdges) return 1.0 / (2.0 * static_cast<double>(g.edge_count()));
  throw PreconditionError("mc2 on graphs with more than 1000 edges requires --gamma");
}

inline Estimate run_query(const QueryContext& ctx, NodeId s, NodeId t, const QueryOptions& opt) {
  const Graph& g = *ctx.graph;
  const Deadline deadline = opt.timeout ? Deadline(*opt.timeout) : Deadline();
  switch (opt.method) {
  case Method::exact: {
    detail::Stopwatch clock;
    Estimate est;
    est.method = Method::exact;
    est.value = ctx.exact ? (*ctx.exact)(s, t) : exact_er(g, s, t);
    est.elapsed = clock.elapsed();
    return est;
  }
  case Method::smm: return smm_query(g, s, t, opt.epsilon, require_meta(ctx, opt.method), deadline);
  case Method::amc:
    return amc_query(g, s, t, ErrorBudget(opt.epsilon, opt.delta, opt.tau), require_meta(ctx, opt.method), opt.seed,
                     deadline);
  case Method::geer:
    return geer(g, s, t, ErrorBudget(opt.epsilon, opt.delta, opt.tau), require_meta(ctx, opt.method), opt.seed,
                deadline);
  case Method::mc:
    return mc(g, s, t, opt.epsilon, opt.delta, McConfig(mc_gamma(g, opt.method, opt.gamma)), opt.seed, deadline);
  case Method::mc2:
    return mc2(g, s, t, opt.epsilon, opt.delta, McConfig(mc_gamma(g, opt.method, opt.gamma)), opt.seed, deadline);
  case Method::tp:
    return tp(g, s, t, opt.epsilon, opt.delta, require_meta(ctx, opt.method), opt.seed, deadline);
  }
  throw PreconditionError("unknown method");
}

inline nlohmann::ordered_json estimate_json(const Estimate& est, Label s, Label t) {
  return nlohmann::ordered_json{{"method", std::string(to_string(est.method))},
                                {"s", s},
                                {"t", t},
                                {"value", est.value},
                                {"walks_used", est.walks_used},
                                {"smm_iterations", est.smm_iterations},
                                {"batches_used", est.batches_used},
                                {"elapsed_ns", est.elapsed.count()},
                                {"seed", est.seed}};
}

// ---------------------------------------------------------------------------
// Benchmark

struct BenchRecord {
  Method method = Method::exact;
  Label s = 0;
  Label t = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  unsigned tau = 0;
  std::uint64_t seed = 0;
  std::optional<double> value;
  std::optional<double> abs_error;
  std::uint64_t walks_used = 0;
  std::uint64_t smm_iterations = 0;
  std::int64_t elapsed_ns = 0;
  std::string status = "ok";
};

inline constexpr const char* kBenchHeader =
    "method,s,t,epsilon,delta,tau,seed,value,abs_error,walks_used,smm_iterations,elapsed_ns,status";

inline void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << kBenchHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.method) << ',' << r.s << ',' << r.t << ',' << format_double(r.epsilon) << ','
        << format_double(r.delta) << ',' << r.tau << ',' << r.seed << ',' << (r.value ? format_double(*r.value) : "")
        << ',' << (r.abs_error ? format_double(*r.abs_error) : "") << ',' << r.walks_used << ',' << r.smm_iterations
        << ',' << r.elapsed_ns << ',' << r.status << '\n';
  }
}

struct BenchConfig {
  std::vector<Method> methods;
  std::vector<double> eps_list = kDefaultEpsList;
  double delta = 0.01;
  unsigned tau = 5;
  std::uint64_t seed = 0;
  std::optional<double> gamma;
  std::optional<std::chrono::milliseconds> timeout;
  unsigned threads = 1;
};

/// Runs every (method, ε, query) combination. Records come back in that
/// order whatever the thread count; each query's seed depends only on the
/// master seed and the query's position.
inline std::vector<BenchRecord> run_bench(const QueryContext& ctx, const std::vector<LabelPair>& queries,
                                          const BenchConfig& cfg, const GroundTruth* truth, std::ostream& err) {
  const Graph& g = *ctx.graph;
  if (cfg.methods.empty()) throw PreconditionError("no methods given");
  if (cfg.eps_list.empty()) throw PreconditionError("no epsilon values given");

  std::vector<std::pair<NodeId, NodeId>> resolved;
  resolved.reserve(queries.size());
  for (const auto& [a, b] : queries) resolved.emplace_back(resolve(g, a), resolve(g, b));

  std::vector<BenchRecord> records;
  for (Method m : cfg.methods)
    for (double eps : cfg.eps_list)
      for (std::size_t q = 0; q < queries.size(); ++q) {
        BenchRecord r;
        r.method = m;
        r.s = queries[q].first;
        r.t = queries[q].second;
        r.epsilon = eps;
        r.delta = cfg.delta;
        r.tau = cfg.tau;
        r.seed = query_seed(cfg.seed, q);
        records.push_back(r);
      }

  std::vector<std::string> failures(records.size());
  auto run_one = [&](std::size_t i) {
    BenchRecord& r = records[i];
    const std::size_t q = i % queries.size();
    QueryOptions opt{r.method, r.epsilon, r.delta, r.tau, r.seed, cfg.gamma, cfg.timeout};
    const auto start = Clock::now();
    try {
      Estimate est = run_query(ctx, resolved[q].first, resolved[q].second, opt);
      r.value = est.value;
      r.walks_used = est.walks_used;
      r.smm_iterations = est.smm_iterations;
      r.elapsed_ns = est.elapsed.count();
      if (truth) {
        auto it = truth->find(queries[q]);
        if (it != truth->end()) r.abs_error = std::abs(est.value - it->second);
      }
    } catch (const TimeoutError&) {
      r.status = "timeout";
      r.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    } catch (const Error& e) {
      r.status = "error";
      failures[i] = e.what();
    }
  };

  const unsigned threads = std::max(1u, cfg.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < records.size(); i = next++) run_one(i);
      });
  }

  for (std::size_t i = 0; i < records.size(); ++i)
    if (!failures[i].empty())
      err << "error: " << to_string(records[i].method) << " (" << records[i].s << ", " << records[i].t
          << ") eps=" << format_double(records[i].epsilon) << ": " << failures[i] << '\n';
  return records;
}

struct BenchAggregate {
  Method method;
  double epsilon;
  std::size_t ok = 0;
  std::size_t timeouts = 0;
  std::size_t errors = 0;
  std::optional<double> mean_abs_error;
  double mean_elapsed_ms = 0.0;
  double median_elapsed_ms = 0.0;
};

inline std::vector<BenchAggregate> aggregate(const std::vector<BenchRecord>& records) {
  std::map<std::pair<int, double>, std::vector<const BenchRecord*>> groups;
  std::vector<std::pair<int, double>> order;
  for (const auto& r : records) {
    auto key = std::pair{static_cast<int>(r.method), r.epsilon};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<BenchAggregate> out;
  for (const auto& key : order) {
    BenchAggregate a{static_cast<Method>(key.first), key.second};
    std::vector<double> times;
    double err_sum = 0.0;
    std::size_t err_n = 0;
    for (const BenchRecord* r : groups[key]) {
      if (r->status == "timeout") ++a.timeouts;
      else if (r->status != "ok") ++a.errors;
      else ++a.ok;
      if (r->status != "error") times.push_back(static_cast<double>(r->elapsed_ns) / 1e6);
      if (r->abs_error) {
        err_sum += *r->abs_error;
        ++err_n;
      }
    }
    if (err_n > 0) a.mean_abs_error = err_sum / static_cast<double>(err_n);
    if (!times.empty()) {
      double sum = 0.0;
      for (double x : times) sum += x;
      a.mean_elapsed_ms = sum / static_cast<double>(times.size());
      std::sort(times.begin(), times.end());
      const std::size_t mid = times.size() / 2;
      a.median_elapsed_ms = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    }
    out.push_back(a);
  }
  return out;
}

inline void print_aggregates(const std::vector<BenchAggregate>& aggs, std::ostream& err) {
  err << "method\tepsilon\tok\ttimeout\terror\tmean_abs_error\tmean_ms\tmedian_ms\n";
  for (const auto& a : aggs)
    err << to_string(a.method) << '\t' << format_double(a.epsilon) << '\t' << a.ok << '\t' << a.timeouts << '\t'
        << a.errors << '\t' << (a.mean_abs_error ? format_double(*a.mean_abs_error) : "-") << '\t' << a.mean_elapsed_ms
        << '\t' << a.median_elapsed_ms << '\n';
}

// ---------------------------------------------------------------------------
// Commands

struct PreprocessArgs {
  std::string graph_path;
  double tol = 1e-7;
  std::uint64_t max_iter = 100000;
  std::string out_path;
};

struct GenQueriesArgs {
  std::string graph_path;
  QueryKind kind = QueryKind::random_pairs;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::string out_path;
};

struct GroundTruthArgs {
  std::string graph_path;
  std::string queries_path;
  std::size_t iters = 1000;
  std::string meta_path; ///< optional; enables the per-query tail bound report
  std::string out_path;
};

struct QueryArgs {
  std::string graph_path;
  std::string meta_path;
  Label source = 0;
  Label target = 0;
  QueryOptions options;
};

struct BenchArgs {
  std::string graph_path;
  std::string meta_path;
  std::string queries_path;
  std::string groundtruth_path;
  std::string out_path;
  BenchConfig config;
};

namespace detail {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const UnknownLabel& e) {
    err << "error: " << e.what() << '\n';
    return kUnknownLabel;
  } catch (const SpectralDegeneracyError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

inline SpectralMeta load_meta(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  SpectralMeta meta = read_meta(in);
  if (!meta.matches(g))
    throw Error("meta '" + path + "' was computed for a different graph (n=" + std::to_string(meta.n) +
                ", m=" + std::to_string(meta.m) + ")");
  return meta;
}

inline std::vector<LabelPair> load_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_queries(in);
}

/// Opens `path` for writing, or returns the fallback stream when it is empty.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      out_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw Error("cannot write '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

} // namespace detail

inline int cmd_preprocess(const PreprocessArgs& a, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Graph g = load_edge_list_file(a.graph_path);
    auto report = validate(g);
    if (report.bipartite) throw SpectralDegeneracyError("graph is bipartite");
    if (!report.connected) throw SpectralDegeneracyError("graph is disconnected");
    SpectralMeta meta = estimate_lambda(g, a.tol, a.max_iter);
    detail::Sink sink(a.out_path, out);
    write_meta(meta, sink.stream());
    err << "n=" << meta.n << " m=" << meta.m << " lambda_raw=" << meta.lambda_raw << " lambda=" << meta.lambda
        << " iterations=" << meta.iterations_used << '\n';
    return kOk;
  });
}

inline int cmd_gen_queries(const GenQueriesArgs& a, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Graph g = load_edge_list_file(a.graph_path);
    QuerySet qs = generate_queries(g, a.kind, a.count, a.seed, err);
    detail::Sink sink(a.out_path, out);
    write_queries(qs, sink.stream());
    return kOk;
  });
}

inline int cmd_groundtruth(const GroundTruthArgs& a, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Graph g = load_edge_list_file(a.graph_path);
    auto queries = detail::load_queries(a.queries_path);
    auto rows = compute_ground_truth(g, queries, a.iters);
    if (g.node_count() > kExactGroundTruthLimit && !a.meta_path.empty()) {
      SpectralMeta meta = detail::load_meta(a.meta_path, g);
      double worst = 0.0;
      for (const auto& [s, t] : queries)
        if (s != t)
          worst = std::max(worst, smm_tail_bound(meta.lambda, a.iters, g.degree(resolve(g, s)), g.degree(resolve(g, t))));
      err << "SMM-" << a.iters << " ground truth, worst tail bound " << worst << '\n';
    } else if (g.node_count() <= kExactGroundTruthLimit) {
      err << "exact ground truth (n=" << g.node_count() << ")\n";
    }
    detail::Sink sink(a.out_path, out);
    write_ground_truth(rows, sink.stream());
    return kOk;
  });
}

inline int cmd_query(const QueryArgs& a, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Graph g = load_edge_list_file(a.graph_path);
    std::optional<SpectralMeta> meta;
    if (!a.meta_path.empty()) meta = detail::load_meta(a.meta_path, g);
    NodeId s = resolve(g, a.source), t = resolve(g, a.target);
    QueryContext ctx{&g, meta ? &*meta : nullptr, nullptr};
    Estimate est = run_query(ctx, s, t, a.options);
    out << estimate_json(est, a.source, a.target).dump() << '\n';
    return kOk;
  });
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    if (a.config.methods.empty()) {
      err << "error: no methods given\n";
      return kInputError;
    }
    Graph g = load_edge_list_file(a.graph_path);
    std::optional<SpectralMeta> meta;
    if (!a.meta_path.empty()) meta = detail::load_meta(a.meta_path, g);
    auto queries = detail::load_queries(a.queries_path);
    std::optional<GroundTruth> truth;
    if (!a.groundtruth_path.empty()) {
      std::ifstream in(a.groundtruth_path);
      if (!in) throw Error("cannot open '" + a.groundtruth_path + "'");
      truth = read_ground_truth(in);
    }
    std::optional<ExactResistance> exact;
    if (std::find(a.config.methods.begin(), a.config.methods.end(), Method::exact) != a.config.methods.end())
      exact.emplace(g);

    QueryContext ctx{&g, meta ? &*meta : nullptr, exact ? &*exact : nullptr};
    auto records = run_bench(ctx, queries, a.config, truth ? &*truth : nullptr, err);
    detail::Sink sink(a.out_path, out);
    write_bench_csv(records, sink.stream());
    print_aggregates(aggregate(records), err);
    return kOk;
  });
}

} // namespace geer::harness
