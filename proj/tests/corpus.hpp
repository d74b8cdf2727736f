#pragma once

// DSL texts used across tests.

#include <string>
#include <vector>

inline const std::vector<std::string>& dsl_corpus() {
  static const std::vector<std::string> corpus = {
      "x",
      "x + 1",
      "5*x + 3",
      "3*x + 1",
      "x^3 + 5*x + 1",
      "x^2",
      "-x + 7",
      "x - 3*x^2 + 4*x^5",
      "bseries(0, 1, 2)",
      "bseries(1, -3, 0, 5)",
      "closed_ergodic(x^2)",
      "closed_ergodic(bseries(0, 0, 1))",
      "perturb(ell=2, r=2, u=x + 1)",
      "perturb(ell=7, r=2, u=1)",
      "mahler2(1)",
      "mahler2(1, -2, 3)",
      "compose(x^2 + 1, 3*x)",
      "iterate(5*x + 3, 4)",
      "awrap(1, x^2 - x)",
      "xor(x, 1) + 2*and(x, 6)",
      "not(x) + x",
      "or(x^2, 1)",
      "[x1 + x2]",
      "[x1, x2 + x1^2]",
      "[x1*x2 + 1, xor(x1, x2)]",
      "x1 - x2*x3",
  };
  return corpus;
}
