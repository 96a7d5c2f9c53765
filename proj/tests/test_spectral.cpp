#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "geer/generators.hpp"
#include "geer/spectral.hpp"
#include "oracles.hpp"

using namespace geer;

TEST(EstimateLambda, K3) {
  SpectralMeta meta = estimate_lambda(gen::complete(3));
  EXPECT_NEAR(meta.lambda_raw, 0.5, 1e-7);
  EXPECT_NEAR(meta.lambda, 0.5 * kLambdaMargin, 1e-7);
  EXPECT_TRUE(meta.connected);
  EXPECT_FALSE(meta.bipartite);
  EXPECT_EQ(meta.n, 3u);
  EXPECT_EQ(meta.m, 3u);
}

TEST(EstimateLambda, Petersen) {
  SpectralMeta meta = estimate_lambda(gen::petersen());
  EXPECT_NEAR(meta.lambda_raw, 2.0 / 3.0, 1e-7);
}

TEST(EstimateLambda, RefusesDegenerateGraphs) {
  EXPECT_THROW(estimate_lambda(gen::cycle(4)), SpectralDegeneracyError);
  EXPECT_THROW(estimate_lambda(gen::toy().graph), SpectralDegeneracyError);
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  EXPECT_THROW(estimate_lambda(Graph::from_index_edges(6, e)), SpectralDegeneracyError);
}

TEST(EstimateLambda, NonConvergenceCarriesLastIterate) {
  // Two triangles joined by an edge: λ2 and |λn| are close, so two iterations are not enough.
  try {
    estimate_lambda(gen::two_triangles(), 1e-14, 2);
    FAIL() << "expected non-convergence";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.last_estimate(), 0.0);
    EXPECT_LE(e.last_estimate(), 1.0);
  }
}

TEST(EstimateLambda, MarginAndCapInvariants) {
  EXPECT_DOUBLE_EQ(apply_lambda_margin(0.5), 0.5 * 1.001);
  EXPECT_DOUBLE_EQ(apply_lambda_margin(0.9999999), kLambdaCap);
  for (const auto& g : oracle::corpus(20)) {
    SpectralMeta meta = estimate_lambda(g);
    EXPECT_LE(0.0, meta.lambda_raw);
    EXPECT_LE(meta.lambda_raw, meta.lambda);
    EXPECT_LT(meta.lambda, 1.0);
  }
}

TEST(EstimateLambda, MatchesDenseOracleOnCorpus) {
  for (const auto& g : oracle::corpus()) {
    SpectralMeta meta = estimate_lambda(g);
    EXPECT_NEAR(meta.lambda_raw, oracle::lambda(g), 1e-6) << "n=" << g.node_count() << " m=" << g.edge_count();
  }
}

TEST(Deflation, PrincipalDirectionIsRemoved) {
  for (const auto& g : oracle::corpus(20)) {
    const auto u1 = principal_eigenvector(g);
    std::vector<double> x(u1.begin(), u1.end()), y(g.node_count());
    deflate(u1, x);
    std::vector<double> isd(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) isd[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
    normalized_adjacency_apply(g, isd, x, y);
    deflate(u1, y);
    double rq = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) rq += u1[v] * y[v];
    EXPECT_LE(std::abs(rq), 1e-10);
  }
}

TEST(DenseEigensystem, K3Spectrum) {
  EigenSystem es = dense_eigensystem(gen::complete(3));
  ASSERT_EQ(es.eigenvalues.size(), 3u);
  EXPECT_NEAR(es.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues[1], -0.5, 1e-12);
  EXPECT_NEAR(es.eigenvalues[2], -0.5, 1e-12);
  EXPECT_NEAR(es.lambda(), 0.5, 1e-12);
}

TEST(DenseEigensystem, SizeCap) {
  EXPECT_THROW(dense_eigensystem(gen::cycle(11), 10), PreconditionError);
}

TEST(DenseEigensystem, InvariantsOnCorpus) {
  for (const auto& g : oracle::corpus()) {
    EigenSystem es = dense_eigensystem(g);
    const std::size_t n = g.node_count();
    DenseVec pi = stationary(g);
    EXPECT_NEAR(es.eigenvalues.front(), 1.0, 1e-9);
    for (double l : es.eigenvalues) EXPECT_LE(std::abs(l), 1.0 + 1e-9);
    for (NodeId v = 0; v < n; ++v) EXPECT_EQ(es.eigenvectors[0][v], 1.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = k; j < n; ++j) {
        double ip = 0.0;
        for (NodeId v = 0; v < n; ++v) ip += pi[v] * es.eigenvectors[k][v] * es.eigenvectors[j][v];
        ASSERT_NEAR(ip, k == j ? 1.0 : 0.0, 1e-8);
      }
  }
}

TEST(DenseEigensystem, WalkProbabilityIdentity) {
  for (const auto& g : oracle::corpus()) {
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
          ASSERT_NEAR(p, w(u, v), 1e-8);
        }
    }
  }
}

TEST(DenseEigensystem, ThreeStepsMatchTransitionApply) {
  for (const auto& g : oracle::corpus(10)) {
    EigenSystem es = dense_eigensystem(g);
    const std::size_t n = g.node_count();
    DenseVec pi = stationary(g);
    for (NodeId u = 0; u < n; ++u) {
      DenseVec x = DenseVec::unit(n, u);
      for (int i = 0; i < 3; ++i) x = transition_apply(g, x);
      for (NodeId v = 0; v < n; ++v) {
        double p = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          p += es.eigenvectors[k][u] * es.eigenvectors[k][v] * pi[v] * std::pow(es.eigenvalues[k], 3);
        ASSERT_NEAR(p, x[v], 1e-8);
      }
    }
  }
}

TEST(DenseEigensystem, InverseStationaryIdentity) {
  for (const auto& g : oracle::corpus()) {
    EigenSystem es = dense_eigensystem(g);
    DenseVec pi = stationary(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      double sum = 0.0;
      for (const auto& f : es.eigenvectors) sum += f[v] * f[v];
      ASSERT_NEAR(sum, 1.0 / pi[v], 1e-8);
    }
  }
}

TEST(Meta, RoundTrip) {
  SpectralMeta meta = estimate_lambda(gen::petersen());
  std::stringstream buf;
  write_meta(meta, buf);
  EXPECT_EQ(read_meta(buf), meta);
}

TEST(Meta, MalformedDocuments) {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_meta(in);
  };
  EXPECT_THROW(read("not json"), ParseError);
  EXPECT_THROW(read("[1, 2]"), ParseError);
  EXPECT_THROW(read(R"({"format_version":1,"lambda_raw":0.5,"tolerance":1e-7,"iterations_used":3,)"
                    R"("connected":true,"bipartite":false,"n":3,"m":3})"),
               ParseError);
  EXPECT_THROW(read(R"({"format_version":1,"lambda":"x","lambda_raw":0.5,"tolerance":1e-7,"iterations_used":3,)"
                    R"("connected":true,"bipartite":false,"n":3,"m":3})"),
               ParseError);
  EXPECT_THROW(read(R"({"format_version":9,"lambda":0.5,"lambda_raw":0.5,"tolerance":1e-7,"iterations_used":3,)"
                    R"("connected":true,"bipartite":false,"n":3,"m":3})"),
               ParseError);
}

TEST(Meta, StaleMetaIsDetected) {
  SpectralMeta meta = estimate_lambda(gen::complete(3));
  EXPECT_TRUE(meta.matches(gen::complete(3)));
  EXPECT_FALSE(meta.matches(gen::complete(4)));
}
