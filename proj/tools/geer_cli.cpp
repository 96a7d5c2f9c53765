#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geer/harness.hpp"

namespace h = geer::harness;

namespace {

std::optional<std::chrono::milliseconds> timeout_from(long long ms) {
  if (ms <= 0) return std::nullopt;
  return std::chrono::milliseconds(ms);
}

// CLI11 reports a missing-but-required option as a usage error, which maps to exit 1.
int parse_failure(CLI::App& app, const CLI::ParseError& e) {
  const int code = app.exit(e);
  return code == 0 ? h::kOk : h::kInputError;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise effective resistance queries and benchmarks"};
  app.require_subcommand(1);

  // preprocess
  h::PreprocessArgs pre;
  auto* cmd_pre = app.add_subcommand("preprocess", "estimate lambda and write the spectral meta sidecar");
  cmd_pre->add_option("--graph", pre.graph_path, "edge list")->required();
  cmd_pre->add_option("--tol", pre.tol, "relative residual tolerance")->capture_default_str();
  cmd_pre->add_option("--max-iter", pre.max_iter, "power iteration cap")->capture_default_str();
  cmd_pre->add_option("--out", pre.out_path, "meta JSON (default: stdout)");

  // gen-queries
  h::GenQueriesArgs gq;
  std::string kind = "random_pairs";
  auto* cmd_gq = app.add_subcommand("gen-queries", "draw a random query set");
  cmd_gq->add_option("--graph", gq.graph_path, "edge list")->required();
  cmd_gq->add_option("--kind", kind, "random_pairs or edges")->capture_default_str();
  cmd_gq->add_option("--count", gq.count, "number of queries")->capture_default_str();
  cmd_gq->add_option("--seed", gq.seed, "generation seed")->capture_default_str();
  cmd_gq->add_option("--out", gq.out_path, "query TSV (default: stdout)");

  // groundtruth
  h::GroundTruthArgs gt;
  auto* cmd_gt = app.add_subcommand("groundtruth", "reference resistances for a query set");
  cmd_gt->add_option("--graph", gt.graph_path, "edge list")->required();
  cmd_gt->add_option("--queries", gt.queries_path, "query TSV")->required();
  cmd_gt->add_option("--iters", gt.iters, "SMM iterations on large graphs")->capture_default_str();
  cmd_gt->add_option("--meta", gt.meta_path, "meta JSON, for the tail-bound report");
  cmd_gt->add_option("--out", gt.out_path, "TSV (default: stdout)");

  // query
  h::QueryArgs q;
  std::string q_method = "geer";
  double q_gamma = 0.0;
  long long q_timeout = 0;
  auto* cmd_q = app.add_subcommand("query", "answer one query and print it as JSON");
  cmd_q->add_option("--graph", q.graph_path, "edge list")->required();
  cmd_q->add_option("--meta", q.meta_path, "meta JSON (needed by smm, amc, geer, tp)");
  cmd_q->add_option("--method", q_method, "exact, smm, amc, geer, mc, mc2 or tp")->capture_default_str();
  cmd_q->add_option("--source,-s", q.source, "source label")->required();
  cmd_q->add_option("--target,-t", q.target, "target label")->required();
  cmd_q->add_option("--eps", q.options.epsilon, "additive error")->capture_default_str();
  cmd_q->add_option("--delta", q.options.delta, "failure probability")->capture_default_str();
  cmd_q->add_option("--tau", q.options.tau, "number of sampling batches")->capture_default_str();
  cmd_q->add_option("--seed", q.options.seed, "RNG seed")->capture_default_str();
  auto* q_gamma_opt = cmd_q->add_option("--gamma", q_gamma, "resistance bound for mc / mc2");
  cmd_q->add_option("--timeout-ms", q_timeout, "abort after this many milliseconds");

  // bench
  h::BenchArgs b;
  std::vector<std::string> b_methods;
  double b_gamma = 0.0;
  long long b_timeout = 0;
  auto* cmd_b = app.add_subcommand("bench", "run methods over a query set and write CSV records");
  cmd_b->add_option("--graph", b.graph_path, "edge list")->required();
  cmd_b->add_option("--meta", b.meta_path, "meta JSON");
  cmd_b->add_option("--queries", b.queries_path, "query TSV")->required();
  cmd_b->add_option("--methods,--method", b_methods, "comma-separated methods")->delimiter(',');
  cmd_b->add_option("--eps-list,--eps", b.config.eps_list, "comma-separated epsilons")->delimiter(',');
  cmd_b->add_option("--delta", b.config.delta, "failure probability")->capture_default_str();
  cmd_b->add_option("--tau", b.config.tau, "number of sampling batches")->capture_default_str();
  cmd_b->add_option("--seed", b.config.seed, "master seed")->capture_default_str();
  auto* b_gamma_opt = cmd_b->add_option("--gamma", b_gamma, "resistance bound for mc / mc2");
  cmd_b->add_option("--groundtruth", b.groundtruth_path, "ground-truth TSV");
  cmd_b->add_option("--timeout-ms", b_timeout, "per-query timeout");
  cmd_b->add_option("--threads", b.config.threads, "worker threads")->capture_default_str();
  cmd_b->add_option("--out", b.out_path, "CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return parse_failure(app, e);
  }

  if (*cmd_pre) return h::cmd_preprocess(pre, std::cout, std::cerr);

  if (*cmd_gq) {
    auto k = h::parse_query_kind(kind);
    if (!k) {
      std::cerr << "error: unknown query kind '" << kind << "'\n";
      return h::kInputError;
    }
    gq.kind = *k;
    return h::cmd_gen_queries(gq, std::cout, std::cerr);
  }

  if (*cmd_gt) return h::cmd_groundtruth(gt, std::cout, std::cerr);

  if (*cmd_q) {
    auto m = geer::parse_method(q_method);
    if (!m) {
      std::cerr << "error: unknown method '" << q_method << "'\n";
      return h::kInputError;
    }
    q.options.method = *m;
    if (q_gamma_opt->count()) q.options.gamma = q_gamma;
    q.options.timeout = timeout_from(q_timeout);
    return h::cmd_query(q, std::cout, std::cerr);
  }

  if (*cmd_b) {
    for (const auto& name : b_methods) {
      auto m = geer::parse_method(name);
      if (!m) {
        std::cerr << "error: unknown method '" << name << "'\n";
        return h::kInputError;
      }
      b.config.methods.push_back(*m);
    }
    if (b_gamma_opt->count()) b.config.gamma = b_gamma;
    b.config.timeout = timeout_from(b_timeout);
    return h::cmd_bench(b, std::cout, std::cerr);
  }
  return h::kInputError;
}
