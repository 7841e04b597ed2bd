#pragma once

// Lefschetz sl2 triples on a cohomology ring and the Lie algebras they generate.

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "hkt/period.hpp"
#include "hkt/ring.hpp"

namespace hkt {

/// Operator on the total basis shifting cohomological degree by `degree`.
struct GradedOperator {
  Eigen::MatrixXd matrix;
  int degree = 0;
};

struct ExactOperator {
  QMatrix matrix;
  int degree = 0;
};

/// Largest entry outside the blocks allowed by `degree`.
double off_block_residual(const CohomologyRing& ring, const Eigen::MatrixXd& a, int degree);
Eigen::MatrixXd bracket(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double operator_norm(const Eigen::MatrixXd& a);

/// Cup product with eta (lattice coordinates). Raises degree by 2.
GradedOperator lefschetz_e(const CohomologyRing& ring, const Vec& eta);
ExactOperator lefschetz_e_exact(const CohomologyRing& ring, const QVector& eta);
/// Multiplication by 2m - k on H^k.
GradedOperator grading_h(const CohomologyRing& ring);
ExactOperator grading_h_exact(const CohomologyRing& ring);
/// The degree -2 operator with [e, f] = -h. Throws DomainError("hard Lefschetz fails").
GradedOperator lefschetz_f(const CohomologyRing& ring, const Vec& eta, double tol = 1e-9);
ExactOperator lefschetz_f_exact(const CohomologyRing& ring, const QVector& eta);

struct Sl2Residuals {
  double he = 0;  // |[h, e] + 2e|
  double hf = 0;  // |[h, f] - 2f|
  double ef = 0;  // |[e, f] + h|
  double max() const { return std::max({he, hf, ef}); }
};
Sl2Residuals sl2_residuals(const GradedOperator& e, const GradedOperator& h, const GradedOperator& f);

struct LieOptions {
  double tol = 1e-8;
  std::size_t max_dimension = 2000;
  unsigned workers = 1;
};

struct LieClosure {
  std::vector<GradedOperator> basis;  // Frobenius-orthonormal, homogeneous
  std::size_t dimension = 0;
  std::map<int, std::size_t> degree_dimensions;
  double residual = 0;  // largest bracket component left outside the span
};

LieClosure lie_closure(const std::vector<GradedOperator>& generators, const LieOptions& opts = {});

struct ExactLieClosure {
  std::size_t dimension = 0;
  std::map<int, std::size_t> degree_dimensions;
};
ExactLieClosure lie_closure_exact(const std::vector<ExactOperator>& generators, std::size_t max_dimension = 2000);

struct KillingSignature {
  std::size_t positive = 0, negative = 0, zero = 0;
};
/// Inertia of tr(ad x ad y) on the closure, eigenvalues within tol of 0 counted as zero.
KillingSignature killing_signature(const LieClosure& closure, double tol = 1e-8);

/// e_eta for every eta, plus f_eta wherever hard Lefschetz holds.
std::vector<GradedOperator> lefschetz_generators(const CohomologyRing& ring, const std::vector<Vec>& etas);

/// Exact c with q(a)^m = c * int a^(2m) over `samples` (at least 2 rank^2) random integer a.
/// Throws DomainError("Fujiki relation violated: ...").
Rational fujiki_constant(const CohomologyRing& ring, std::size_t samples = 0, std::uint64_t seed = 1);

/// The element X of the degree-0 part with X a = 2b, X b = -2a, X = 0 on Pi_z^perp cap P and on H^0.
GradedOperator deligne_generator(const CohomologyRing& ring, const LieClosure& closure, const PeriodDomain& dom,
                                 const PositiveThreePlane& plane, const PeriodPoint& z, double tol = 1e-8);
/// Eigenvalues of X restricted to the lattice block, sorted by imaginary part.
std::vector<std::complex<double>> block_spectrum(const CohomologyRing& ring, const GradedOperator& x);

struct HodgeDecomposition {
  Eigen::VectorXcd h20;   // sigma
  Eigen::VectorXcd h02;   // conj(sigma)
  Eigen::MatrixXcd h11;   // columns: basis of the h_q-orthogonal complement
  std::size_t h11_positive = 0, h11_negative = 0;
  double orthogonality_residual = 0;  // max |h_q| between different pieces
  double min_h_on_h20_h02 = 0;        // smallest eigenvalue of h_q on H^{2,0} + H^{0,2}
};

HodgeDecomposition hodge_decompose(const PeriodDomain& dom, const PeriodPoint& z);

}  // namespace hkt
