// Answers one resistance query with every method on the triangle-plus-tail
// graph and prints the results next to the exact value.
#include <iomanip>
#include <iostream>

#include "geer/estimators.hpp"
#include "geer/generators.hpp"
#include "geer/spectral.hpp"

int main() {
  const geer::Graph g = geer::gen::two_triangles();
  const geer::NodeId s = 0, t = 5;
  const geer::SpectralMeta meta = geer::estimate_lambda(g);
  const geer::ErrorBudget budget(0.05, 0.01);
  const std::uint64_t seed = 7;

  std::cout << std::fixed << std::setprecision(6);
  std::cout << "lambda  " << meta.lambda << '\n';
  std::cout << "exact   " << geer::exact_er(g, s, t) << '\n';
  std::cout << "smm     " << geer::smm_query(g, s, t, budget.epsilon(), meta).value << '\n';
  std::cout << "amc     " << geer::amc_query(g, s, t, budget, meta, seed).value << '\n';
  std::cout << "geer    " << geer::geer(g, s, t, budget, meta, seed).value << '\n';
  std::cout << "mc      " << geer::mc(g, s, t, 0.1, 0.01, geer::McConfig(3.0), seed).value << '\n';
  std::cout << "tp      " << geer::tp(g, s, t, 0.5, 0.1, meta, seed).value << '\n';
}
