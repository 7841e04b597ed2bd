#pragma once

// Graded cohomology rings given by integer structure constants.

#include <cstdint>
#include <vector>

#include "hkt/lattice.hpp"
#include "hkt/rational.hpp"

namespace hkt {

/// b_i cup b_j contains c * b_k.
struct StructureConstant {
  std::size_t i = 0, j = 0, k = 0;
  std::int64_t c = 0;
};

class CohomologyRing {
 public:
  /// Validates degrees, graded commutativity, associativity on all basis
  /// triples and nondegeneracy of the Poincare pairing.
  CohomologyRing(int m, std::vector<int> degrees, std::vector<StructureConstant> constants,
                 std::vector<std::int64_t> integration, std::vector<std::size_t> lattice_indices,
                 QuadLattice lattice);

  /// 1, the 22 classes of U^3 + E8(-1)^2 with x cup y = b(x, y) pt, and pt.
  static CohomologyRing k3();

  int m() const { return m_; }
  std::size_t dim() const { return degrees_.size(); }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<StructureConstant>& constants() const { return constants_; }
  const std::vector<std::int64_t>& integration() const { return integration_; }
  const std::vector<std::size_t>& lattice_indices() const { return lattice_indices_; }
  const QuadLattice& lattice() const { return lattice_; }

  /// Products b_i cup b_j as (k, c) pairs.
  const std::vector<std::pair<std::size_t, std::int64_t>>& product(std::size_t i, std::size_t j) const {
    return table_[i * dim() + j];
  }
  QVector cup(const QVector& x, const QVector& y) const;
  Rational integrate(const QVector& x) const;
  /// Degree-2 class with the given lattice coordinates.
  QVector embed(const QVector& lattice_coords) const;

 private:
  int m_;
  std::vector<int> degrees_;
  std::vector<StructureConstant> constants_;
  std::vector<std::int64_t> integration_;
  std::vector<std::size_t> lattice_indices_;
  QuadLattice lattice_;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> table_;
};

}  // namespace hkt
