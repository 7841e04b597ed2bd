#pragma once

// Smith normal form over the integers.

#include <vector>

#include "hkt/rational.hpp"

namespace hkt {

using IntegerMatrix = std::vector<std::vector<Integer>>;

/// d = u * a * v with u, v unimodular and d diagonal, d_ii | d_(i+1)(i+1), d_ii >= 0.
struct SmithForm {
  IntegerMatrix u, d, v;
  std::vector<Integer> invariants;  // nonzero diagonal entries
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const IntegerMatrix& a, std::size_t rows, std::size_t cols);

IntegerMatrix multiply(const IntegerMatrix& a, const IntegerMatrix& b, std::size_t inner);

}  // namespace hkt
