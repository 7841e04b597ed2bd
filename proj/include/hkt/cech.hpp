#pragma once

// Cech cochains of a finite nerve with coefficients in a finite abelian group.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hkt/snf.hpp"

namespace hkt {

/// Face-closed simplicial complex of dimension <= 3. Simplices are sorted
/// tuples of vertex positions; labels are kept for I/O.
class Nerve {
 public:
  Nerve(std::vector<std::int64_t> vertices, const std::vector<std::vector<std::int64_t>>& simplices);

  /// All faces of the simplex on n vertices, up to dimension min(n - 1, 3).
  static Nerve full_simplex(std::size_t n);
  /// Boundary of the octahedron: 6 vertices, 12 edges, 8 triangles.
  static Nerve octahedron();

  const std::vector<std::int64_t>& vertices() const { return vertices_; }
  std::size_t count(int d) const { return d < 0 || d > 3 ? 0 : by_dim_[d].size(); }
  const std::vector<std::vector<std::size_t>>& simplices(int d) const { return by_dim_.at(d); }
  std::optional<std::size_t> index_of(const std::vector<std::size_t>& sorted) const;
  /// Integer matrix of d: C^deg -> C^(deg+1), rows indexed by (deg+1)-simplices.
  IntegerMatrix coboundary_matrix(int deg) const;

 private:
  std::vector<std::int64_t> vertices_;
  std::array<std::vector<std::vector<std::size_t>>, 4> by_dim_;
  std::map<std::vector<std::size_t>, std::size_t> index_;
};

/// Z/k_1 + ... + Z/k_r with k_i | k_(i+1), k_i >= 1.
class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<std::int64_t> factors);
  using Element = std::vector<std::int64_t>;

  const std::vector<std::int64_t>& factors() const { return factors_; }
  Integer order() const;
  Element zero() const { return Element(factors_.size(), 0); }
  Element reduce(Element x) const;
  Element add(const Element& a, const Element& b) const;
  Element negate(const Element& a) const;
  Element scale(const Element& a, std::int64_t s) const;
  bool is_zero(const Element& a) const;

 private:
  std::vector<std::int64_t> factors_;
};

struct Cochain {
  int degree = 0;
  std::vector<FiniteAbelianGroup::Element> values;  // one per sorted degree-simplex
};

Cochain zero_cochain(const Nerve& nerve, const FiniteAbelianGroup& group, int degree);
/// Value on an ordered tuple of vertex positions: sign of the sorting permutation times
/// the stored value; zero on tuples with a repeated vertex.
FiniteAbelianGroup::Element evaluate(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c,
                                     const std::vector<std::size_t>& ordered);

/// Throws DomainError("degree overflow") for degree >= 3.
Cochain coboundary(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c);
Cochain add(const FiniteAbelianGroup& group, const Cochain& a, const Cochain& b);
Cochain negate(const FiniteAbelianGroup& group, const Cochain& a);
bool is_zero(const FiniteAbelianGroup& group, const Cochain& c);
bool is_cocycle(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c);

struct CoboundarySolution {
  std::optional<Cochain> solution;
  /// When unsolvable: class of c in coker(d: C^1 -> C^2), Smith basis, nontrivial
  /// coordinates only, factor by factor.
  std::vector<std::int64_t> obstruction;
  std::vector<std::int64_t> obstruction_moduli;
};

/// Solves d x = c. Throws DomainError("input is not a cocycle").
CoboundarySolution solve_coboundary(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c);

/// Invariant factors of H^degree(nerve; group), degree in {0, 1, 2}; empty means trivial.
std::vector<std::int64_t> cohomology(const Nerve& nerve, const FiniteAbelianGroup& group, int degree);

/// Replays the gluing step: with defect c = d f, returns f - x where d x = c.
Cochain corrected_transitions(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& f);

}  // namespace hkt
