#pragma once

// Integral quadratic lattices and exact orthogonal-group arithmetic.
//
// Everything in this header is exact (GMP rationals). Signatures and spinor
// signs are discrete invariants and must never come out of floating point.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hkt/rational.hpp"

namespace hkt {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  bool operator==(const Signature&) const = default;
};

/// Free abelian group Z^rank with the symmetric bilinear form b(x, y) = x^T gram y.
class QuadLattice {
 public:
  /// Throws DomainError("degenerate form") for singular gram, or on asymmetry.
  explicit QuadLattice(std::vector<std::vector<std::int64_t>> gram);

  std::size_t rank() const { return gram_.size(); }
  const std::vector<std::vector<std::int64_t>>& gram() const { return gram_; }
  const QMatrix& gram_q() const { return gram_q_; }
  const QMatrix& gram_inverse() const { return gram_inv_; }
  Signature signature() const { return signature_; }
  Rational determinant() const { return det_; }

  Rational b(const QVector& x, const QVector& y) const;
  Rational q(const QVector& x) const { return b(x, x); }
  /// Functional b(v, .) in dual coordinates.
  QVector dual_of(const QVector& v) const { return gram_q_ * v; }

  bool operator==(const QuadLattice& other) const { return gram_ == other.gram_; }

 private:
  std::vector<std::vector<std::int64_t>> gram_;
  QMatrix gram_q_;
  QMatrix gram_inv_;
  Rational det_;
  Signature signature_;
};

/// Exact inertia of the Gram matrix. Throws DomainError("degenerate form").
Signature signature(const QuadLattice& lattice);
Signature signature_of(const QMatrix& symmetric);

namespace lattices {

QuadLattice hyperbolic_plane();
QuadLattice e8();
QuadLattice rank_one(std::int64_t k);
QuadLattice direct_sum(const std::vector<QuadLattice>& parts);
QuadLattice rescale(const QuadLattice& lattice, std::int64_t s);
/// U^3 + E8(-1)^2.
QuadLattice k3();
/// "U", "E8", "U3", "K3", "rank1(k)".
QuadLattice by_name(const std::string& name);

}  // namespace lattices

/// delta in H^dual, acting by delta(v) = coords . v.
struct WallForm {
  QVector coords;

  /// The functional b(v, .).
  static WallForm dual_to(const QuadLattice& lattice, const QVector& v);
  /// Integral with coprime coordinates.
  bool indivisible() const;
  Rational operator()(const QVector& v) const { return dot(coords, v); }
};

/// q^dual(delta) = coords . gram^{-1} . coords.
Rational dual_value(const QuadLattice& lattice, const WallForm& delta);

struct NegativityReport {
  bool negative = false;
  Rational dual_value;
  std::size_t kernel_positive = 0;
  std::size_t kernel_negative = 0;
  std::size_t kernel_zero = 0;
};

/// Requires signature (3, n). Cross-checks q^dual < 0 against the exact
/// inertia of q on ker(delta); a disagreement is a logic_error.
NegativityReport negativity(const QuadLattice& lattice, const WallForm& delta);
bool is_negative_form(const QuadLattice& lattice, const WallForm& delta);

struct Reflection {
  QVector mirror;
  QMatrix matrix;
  bool integral = false;
};

/// r_v(x) = x - 2 b(x, v) / q(v) v. Throws on q(v) = 0.
Reflection reflection(const QuadLattice& lattice, const QVector& v);

/// g^T gram g == gram.
bool is_isometry(const QuadLattice& lattice, const QMatrix& g);

struct SpinorDecomposition {
  int sign = 1;
  /// g = r_{mirrors[0]} * ... * r_{mirrors[k-1]}.
  std::vector<QVector> mirrors;
};

/// Cartan-Dieudonne decomposition of an isometry into reflections. `order`
/// permutes the coordinate candidates the recursion scans; it changes the
/// factors but not the sign.
SpinorDecomposition spinor_decomposition(const QuadLattice& lattice, const QMatrix& g,
                                         const std::vector<std::size_t>& order = {});

/// Real spinor norm of g for the form -q: sign of prod(-q(v_i)).
int spinor_norm_sign(const QuadLattice& lattice, const QMatrix& g,
                     const std::vector<std::size_t>& order = {});

/// An integral isometry with determinant +-1.
class Isometry {
 public:
  Isometry(const QuadLattice& lattice, QMatrix matrix);
  const QMatrix& matrix() const { return matrix_; }

 private:
  QMatrix matrix_;
};

/// Membership in O^#(-q), the kernel of the real spinor norm for -q.
bool in_O_sharp(const QuadLattice& lattice, const QMatrix& g);

}  // namespace hkt
