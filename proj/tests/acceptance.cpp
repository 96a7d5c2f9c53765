// Acceptance checks 1-11. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Criterion 10 also prints informational lines.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geer/bounds.hpp"
#include "geer/estimators.hpp"
#include "geer/generators.hpp"
#include "geer/harness.hpp"
#include "geer/spectral.hpp"
#include "oracles.hpp"

using namespace geer;
namespace h = geer::harness;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream note;
  note << std::fixed << std::setprecision(2) << secs << " s of " << limit_s << " s";
  if (secs > limit_s) {
    out.pass = false;
    note << ", over the time limit";
  }
  if (!out.pass) ++failures;
  std::cout << (out.pass ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << out.detail << " (" << note.str()
            << ")" << std::endl;
}

std::string fmt(double x, int prec = 6) {
  std::ostringstream s;
  s << std::setprecision(prec) << x;
  return s.str();
}

template <class F>
int successes(int trials, double truth, double eps, F&& run) {
  int ok = 0;
  for (int k = 0; k < trials; ++k) ok += std::abs(run(static_cast<std::uint64_t>(k)) - truth) <= eps;
  return ok;
}

std::vector<std::string> value_column(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> values;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (int c = 0; c <= 7; ++c) std::getline(row, cell, ',');
    values.push_back(cell);
  }
  return values;
}

} // namespace

int main() {
  constexpr int kTrials = 200;

  criterion(1, "exact oracle", 1.0, [] {
    Graph k3 = gen::complete(3);
    double worst = 0.0;
    for (auto [s, t] : std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {0, 2}, {2, 0}})
      worst = std::max(worst, std::abs(exact_er(k3, s, t) - 2.0 / 3.0));
    const double path = exact_er(gen::path(3), 0, 2);
    worst = std::max(worst, std::abs(path - 2.0));
    const double self = exact_er(k3, 1, 1);
    return Outcome{worst <= 1e-10 && self == 0.0,
                   "max deviation " + fmt(worst) + ", r(u,w) on the 3-path = " + fmt(path, 12) + ", r(s,s) = " +
                       fmt(self)};
  });

  criterion(2, "walk counts on the running example", 1.0, [] {
    auto toy = gen::toy();
    const std::vector<std::uint64_t> want_s{2, 4, 8, 26, 42, 184, 268, 1346};
    const std::vector<std::uint64_t> want_t{7, 9, 53, 71, 397, 539, 2963, 4041};
    const bool ok = count_walks(toy.graph, toy.s, 8) == want_s && count_walks(toy.graph, toy.t, 8) == want_t;
    return Outcome{ok, ok ? "both rows match exactly" : "mismatch"};
  });

  const auto corpus = oracle::corpus();

  criterion(3, "truncation bound", 30.0, [&] {
    std::mt19937_64 rng(3);
    int cases = 0, bad = 0;
    double worst_ratio = 0.0;
    for (const auto& g : corpus) {
      const double lambda = dense_eigensystem(g).lambda();
      ExactResistance exact(g);
      std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(g.node_count() - 1));
      for (int p = 0; p < 20; ++p) {
        NodeId s = node(rng), t = node(rng);
        while (t == s) t = node(rng);
        for (double eps : {0.5, 0.1}) {
          const std::size_t ell = refined_ell(g.degree(s), g.degree(t), eps, lambda);
          const double err = std::abs(exact(s, t) - smm(g, s, t, ell).r_b);
          worst_ratio = std::max(worst_ratio, err / (eps / 2));
          ++cases;
          bad += err > eps / 2;
        }
      }
    }
    return Outcome{bad == 0, std::to_string(cases - bad) + "/" + std::to_string(cases) +
                                 " within eps/2, worst error/(eps/2) = " + fmt(worst_ratio, 4)};
  });

  criterion(4, "spectral identities", 30.0, [&] {
    double worst16 = 0.0, worst17 = 0.0;
    for (const auto& g : corpus) {
      EigenSystem es = dense_eigensystem(g);
      const std::size_t n = g.node_count();
      DenseVec pi = stationary(g);
      for (int i : {1, 2, 3, 5}) {
        auto w = oracle::walk_matrix(g, i);
        for (NodeId u = 0; u < n; ++u)
          for (NodeId v = 0; v < n; ++v) {
            double p = 0.0;
            for (std::size_t k = 0; k < n; ++k)
              p += es.eigenvectors[k][u] * es.eigenvectors[k][v] * pi[v] * std::pow(es.eigenvalues[k], i);
            worst16 = std::max(worst16, std::abs(p - w(u, v)));
          }
      }
      for (NodeId v = 0; v < n; ++v) {
        double sum = 0.0;
        for (const auto& f : es.eigenvectors) sum += f[v] * f[v];
        worst17 = std::max(worst17, std::abs(sum - 1.0 / pi[v]));
      }
    }
    return Outcome{worst16 <= 1e-8 && worst17 <= 1e-8,
                   "max walk-probability deviation " + fmt(worst16, 3) + ", max 1/pi deviation " + fmt(worst17, 3)};
  });

  criterion(5, "unbiasedness of Z_k", 60.0, [] {
    std::vector<Graph> graphs{gen::complete(3)};
    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) graphs.push_back(gen::random_connected(10 + 2 * k, 12, rng));
    int ok = 0;
    double worst = 0.0;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      const Graph& g = graphs[gi];
      const NodeId s = 0, t = static_cast<NodeId>(g.node_count() - 1);
      const std::size_t ell_f = 3;
      RandomStream a(derive_seed({5, gi, 0})), b(derive_seed({5, gi, 1}));
      WalkAccumulator acc;
      for (int k = 0; k < 100000; ++k) acc.add(sample_z(g, s, t, OneHot(s), OneHot(t), ell_f, a, b));
      const double se = std::sqrt(acc.variance() / static_cast<double>(acc.count));
      const double z = std::abs(acc.mean() - oracle::q_one_hot(g, s, t, static_cast<int>(ell_f))) / se;
      worst = std::max(worst, z);
      ok += z <= 4.0;
    }
    return Outcome{ok == static_cast<int>(graphs.size()),
                   std::to_string(ok) + "/" + std::to_string(graphs.size()) +
                       " graphs within 4 standard errors, worst " + fmt(worst, 3) + " SE"};
  });

  criterion(6, "walk-sum and range bounds", 60.0, [] {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uint64_t walks = 0, samples = 0, violations = 0;
    for (int gi = 0; gi < 10; ++gi) {
      Graph g = gen::random_connected(20, 25, rng);
      const std::size_t n = g.node_count();
      DenseVec x(n), y(n);
      for (NodeId v = 0; v < n; ++v) {
        x[v] = u(rng);
        y[v] = u(rng);
      }
      DenseWeights wx(x), wy(y);
      double min_x = x[0];
      for (NodeId v = 0; v < n; ++v) min_x = std::min(min_x, x[v]);
      const NodeId s = 0, t = 7;
      for (std::size_t ell_f = 1; ell_f <= 10; ++ell_f) {
        const double half_psi = psi(wx, wy, g.degree(s), g.degree(t), ell_f) / 2.0;
        const double lo = static_cast<double>(ell_f) * min_x;
        const double hi =
            static_cast<double>((ell_f + 1) / 2) * wx.max1() + static_cast<double>(ell_f / 2) * wx.max2();
        RandomStream a(rng()), b(rng());
        for (int k = 0; k < 1000; ++k) {
          Walk w = sample_walk(g, s, ell_f, rng);
          double sum = 0.0;
          for (NodeId v : w.visited) sum += x[v];
          violations += sum < lo - 1e-12 || sum > hi + 1e-12;
          ++walks;
          violations += std::abs(sample_z(g, s, t, wx, wy, ell_f, a, b)) > half_psi + 1e-12;
          ++samples;
        }
      }
    }
    return Outcome{violations == 0, std::to_string(walks) + " walks and " + std::to_string(samples) +
                                        " Z_k samples, " + std::to_string(violations) + " violations"};
  });

  criterion(7, "AMC-query and GEER eps-success frequency", 300.0, [&] {
    const ErrorBudget budget(0.2, 0.1, 5);
    std::mt19937_64 rng(7);
    auto toy = gen::toy();
    struct Case {
      std::string name;
      Graph graph;
      NodeId s, t;
    };
    std::vector<Case> cases{{"K3", gen::complete(3), 0, 1},
                            {"running example", toy.graph, toy.s, toy.t},
                            {"100-node random", gen::random_connected(100, 150, rng), 3, 71}};
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
      const double truth = exact_er(c.graph, c.s, c.t);
      std::string part;
      try {
        const SpectralMeta meta = estimate_lambda(c.graph);
        const int amc_ok = successes(kTrials, truth, budget.epsilon(), [&](std::uint64_t seed) {
          return amc_query(c.graph, c.s, c.t, budget, meta, seed).value;
        });
        const int geer_ok = successes(kTrials, truth, budget.epsilon(), [&](std::uint64_t seed) {
          return geer::geer(c.graph, c.s, c.t, budget, meta, seed).value;
        });
        pass = pass && amc_ok >= 180 && geer_ok >= 180;
        part = c.name + " amc " + std::to_string(amc_ok) + "/200 geer " + std::to_string(geer_ok) + "/200";
      } catch (const SpectralDegeneracyError& e) {
        // Counted as zero successful runs.
        pass = false;
        part = c.name + " refused (" + e.what() + "), 0/200";
      }
      detail += (detail.empty() ? "" : "; ") + part;
    }
    return Outcome{pass, detail};
  });

  criterion(8, "baseline eps-success frequency", 600.0, [] {
    Graph k3 = gen::complete(3);
    const SpectralMeta meta = estimate_lambda(k3);
    const double truth = 2.0 / 3.0;
    const int mc_ok = successes(kTrials, truth, 0.2, [&](std::uint64_t seed) {
      return mc(k3, 0, 1, 0.2, 0.1, McConfig(1.0), seed).value;
    });
    const int mc2_ok = successes(kTrials, truth, 0.2, [&](std::uint64_t seed) {
      return mc2(k3, 0, 1, 0.2, 0.1, McConfig(1.0 / 3.0), seed).value;
    });
    const int tp_ok = successes(kTrials, truth, 0.5, [&](std::uint64_t seed) {
      return tp(k3, 0, 1, 0.5, 0.1, meta, seed).value;
    });
    return Outcome{mc_ok >= 180 && mc2_ok >= 180 && tp_ok >= 180,
                   "mc " + std::to_string(mc_ok) + "/200, mc2 " + std::to_string(mc2_ok) + "/200, tp " +
                       std::to_string(tp_ok) + "/200"};
  });

  criterion(9, "closed-form checks", 1.0, [] {
    const double f = bernstein_half_width(100, 0.04, 1.0, 0.03);
    const auto eta = eta_star(9.0 / 7.0, ErrorBudget(0.5, 0.1, 5));
    const auto rl = refined_ell(2, 2, 0.1, 0.5);
    const auto pl = peng_ell(0.1, 0.5);
    const bool ok = std::abs(f - 0.198852) <= 1e-6 && eta == 61 && rl == 5 && pl == 6;
    return Outcome{ok, "f = " + fmt(f, 9) + ", eta* = " + std::to_string(eta) + ", refined ell = " +
                           std::to_string(rl) + ", Peng ell = " + std::to_string(pl)};
  });

  criterion(10, "directional efficiency at 50k nodes", 900.0, [] {
    constexpr double kEps = 0.2;
    constexpr std::size_t kQueries = 20;
    auto run = [&](const Graph& g, std::uint64_t seed, std::chrono::milliseconds timeout) {
      const SpectralMeta meta = estimate_lambda(g);
      std::ostringstream sink;
      auto qs = h::generate_queries(g, h::QueryKind::random_pairs, kQueries, seed, sink);
      h::BenchConfig cfg;
      cfg.methods = {Method::geer, Method::amc, Method::smm, Method::tp};
      cfg.eps_list = {kEps};
      cfg.seed = seed;
      cfg.timeout = timeout;
      auto records = h::run_bench({&g, &meta, nullptr}, qs.entries, cfg, nullptr, sink);
      std::map<Method, double> median;
      std::map<Method, std::size_t> timeouts;
      for (const auto& a : h::aggregate(records)) {
        median[a.method] = a.median_elapsed_ms;
        timeouts[a.method] = a.timeouts;
      }
      std::size_t refined_le_peng = 0, refined_sum = 0, peng_sum = 0;
      for (const auto& [a, b] : qs.entries) {
        const auto r = refined_ell(g.degree(*g.index_of(a)), g.degree(*g.index_of(b)), kEps, meta.lambda);
        const auto p = peng_ell(kEps, meta.lambda);
        refined_le_peng += r <= p;
        refined_sum += r;
        peng_sum += p;
      }
      std::ostringstream d;
      d << std::setprecision(4) << "lambda " << meta.lambda << ", median ms: geer " << median[Method::geer] << ", amc "
        << median[Method::amc] << ", smm " << median[Method::smm] << ", tp " << median[Method::tp];
      if (timeouts[Method::tp]) d << " (" << timeouts[Method::tp] << "/" << kQueries << " tp runs hit the timeout)";
      d << "; refined ell <= Peng ell on " << refined_le_peng << "/" << kQueries << " queries, mean "
        << static_cast<double>(refined_sum) / kQueries << " vs " << static_cast<double>(peng_sum) / kQueries;
      const bool ok = median[Method::geer] <= median[Method::amc] && median[Method::amc] <= median[Method::tp] &&
                      median[Method::geer] <= median[Method::smm] && refined_le_peng == kQueries;
      return std::pair{ok, d.str()};
    };

    // Uniform random graph: an expander with λ ≈ 0.44, where refined ℓ is 0
    // for most pairs and the timings differ by noise. Reported, not gated.
    {
      std::mt19937_64 rng(100);
      Graph uniform = gen::random_sparse(50000, 20.0, rng);
      auto [ok, detail] = run(uniform, 100, std::chrono::milliseconds(5000));
      std::cout << "INFO [10] uniform random graph (n=" << uniform.node_count() << ", m=" << uniform.edge_count()
                << "): " << detail << ", ordering " << (ok ? "holds" : "does not hold") << std::endl;
    }

    // Two planted communities, so λ ≈ 0.96 and walks are long.
    std::mt19937_64 rng(10);
    Graph g = gen::planted_bisection(50000, 20.0, 0.025, rng);
    auto [ok, detail] = run(g, 10, std::chrono::milliseconds(5000));
    return Outcome{ok, "planted-bisection random graph (n=" + std::to_string(g.node_count()) +
                           ", m=" + std::to_string(g.edge_count()) + "): " + detail};
  });

  criterion(11, "bench determinism across thread counts", 120.0, [] {
    const fs::path dir = fs::temp_directory_path() / ("geer_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::mt19937_64 rng(11);
    {
      std::ofstream out(dir / "g.txt");
      write_edge_list(gen::random_connected(120, 300, rng), out);
    }
    std::ostringstream sink;
    h::PreprocessArgs pre{(dir / "g.txt").string(), 1e-7, 100000, (dir / "g.json").string()};
    h::GenQueriesArgs gq{(dir / "g.txt").string(), h::QueryKind::random_pairs, 20, 11, (dir / "q.tsv").string()};
    if (h::cmd_preprocess(pre, sink, sink) != 0 || h::cmd_gen_queries(gq, sink, sink) != 0)
      return Outcome{false, "setup failed: " + sink.str()};
    auto bench = [&](unsigned threads, const std::string& out) {
      h::BenchArgs b;
      b.graph_path = (dir / "g.txt").string();
      b.meta_path = (dir / "g.json").string();
      b.queries_path = (dir / "q.tsv").string();
      b.out_path = (dir / out).string();
      b.config.methods = {Method::amc, Method::geer, Method::smm, Method::mc, Method::tp};
      b.config.eps_list = {0.5};
      b.config.seed = 2024;
      b.config.threads = threads;
      return h::cmd_bench(b, sink, sink);
    };
    if (bench(1, "one.csv") != 0 || bench(8, "eight.csv") != 0 || bench(1, "again.csv") != 0)
      return Outcome{false, "bench failed: " + sink.str()};
    const auto one = value_column((dir / "one.csv").string());
    const auto eight = value_column((dir / "eight.csv").string());
    const auto again = value_column((dir / "again.csv").string());
    fs::remove_all(dir);
    std::size_t empty = 0;
    for (const auto& v : one) empty += v.empty();
    const bool ok = one == eight && one == again && !one.empty() && empty == 0;
    return Outcome{ok, std::to_string(one.size()) + " records, value columns " +
                           (one == eight ? "identical" : "differ") + " between 1 and 8 threads and " +
                           (one == again ? "identical" : "differ") + " on rerun"};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
