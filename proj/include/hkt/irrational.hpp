#pragma once

// Rational closures of real subspaces and detection of small integer relations.

#include <cstdint>
#include <optional>
#include <vector>

#include "hkt/period.hpp"
#include "hkt/rational.hpp"

namespace hkt {

using IntVector = std::vector<std::int64_t>;

struct RelationSearch {
  std::int64_t height = 100;  // bound on the sup-norm of delta
  double tol = 1e-9;          // bound on max_i |delta(w_i)|
};

/// Integer vectors delta with |delta|_inf <= height and |delta . w| < tol for
/// every w, read off an LLL-reduced basis of the weighted relation lattice.
/// The returned forms are linearly independent. Best effort: an empty result
/// does not prove that no relation exists.
std::vector<IntVector> find_integer_relations(const std::vector<Vec>& vectors, const RelationSearch& search);

struct RationalClosure {
  std::size_t ambient = 0;
  std::size_t dimension = 0;
  bool exact = false;
  /// Detect mode: forms found. Exact mode: a basis of the annihilator, cleared to integers.
  std::vector<std::vector<Integer>> relations;
};

RationalClosure rational_closure_exact(const std::vector<QVector>& vectors);
/// The dimension is an upper bound: ambient minus the relations found.
RationalClosure rational_closure_detect(const std::vector<Vec>& vectors, const RelationSearch& search);

struct IrrationalityVerdict {
  bool fully_irrational = false;  // probabilistic when true (unless codimension 0)
  std::optional<std::vector<Integer>> witness;
  double witness_residual = 0;
};

IrrationalityVerdict is_fully_irrational(const std::vector<Vec>& vectors, const RelationSearch& search);

struct PicardVerdict {
  bool trivial = true;  // "trivial up to height"
  std::optional<IntVector> witness;
  double witness_residual = 0;
};

/// Searches for lattice vectors v with |v|_inf <= height orthogonal to Pi_z.
PicardVerdict picard_trivial(const PeriodDomain& dom, const PeriodPoint& z, const RelationSearch& search);

}  // namespace hkt
