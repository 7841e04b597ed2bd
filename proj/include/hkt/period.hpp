#pragma once

// Geometry of the period domain D = { [sigma] : q(sigma) = 0, h_q(sigma, sigma) > 0 }
// for a lattice of signature (3, n), in double precision.

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "hkt/lattice.hpp"

namespace hkt {

using Vec = Eigen::VectorXd;
using Frame3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct Tolerances {
  double iso = 1e-9;   // isotropy of sigma, normalized vectors
  double orth = 1e-9;  // orthogonality / incidence residuals
  double pos = 1e-6;   // min eigenvalue for positive 3-planes
  double lie = 1e-8;   // rank decisions in Lie closures
  double wall = 1e-8;  // restrictions of wall forms
};

/// The line [re + i im], stored as a q-orthonormal pair with a fixed phase.
class PeriodPoint {
 public:
  const Vec& re() const { return re_; }
  const Vec& im() const { return im_; }
  Eigen::VectorXcd sigma() const;

 private:
  friend class PeriodDomain;
  PeriodPoint(Vec re, Vec im) : re_(std::move(re)), im_(std::move(im)) {}
  Vec re_, im_;
};

struct OrientedTwoPlane {
  Vec a, b;
};

/// q-orthonormal frame of a positive 3-plane; `orientation` is +1 when the
/// frame agrees with the spin orientation.
struct PositiveThreePlane {
  Frame3 frame;
  int orientation = 1;
};

struct TwistorLink {
  PositiveThreePlane plane;
  PeriodPoint entry;
  PeriodPoint exit;
};

using TwistorChain = std::vector<TwistorLink>;

struct ChainOptions {
  std::size_t max_links = 64;
  std::size_t max_subdivisions = 6;
};

enum class FrameCompletion { lowest_indices, highest_indices };

class PeriodDomain {
 public:
  explicit PeriodDomain(QuadLattice lattice, Tolerances tol = {});

  const QuadLattice& lattice() const { return lattice_; }
  const Tolerances& tolerances() const { return tol_; }
  std::size_t rank() const { return lattice_.rank(); }
  const Eigen::MatrixXd& gram() const { return gram_; }
  double b(const Vec& x, const Vec& y) const { return x.dot(gram_ * y); }
  double q(const Vec& x) const { return b(x, x); }

  /// q-orthonormal frame of the reference plane P_o (the positive eigenspace
  /// of the Gram matrix), ordered by projected coordinate axes.
  const Frame3& reference_frame() const { return reference_; }
  /// Columns: q-orthonormal basis (q = -1) of P_o^perp.
  const Eigen::MatrixXd& negative_frame() const { return negative_; }

  /// Validates q(sigma) = 0, h_q > 0 and normalizes the representative.
  PeriodPoint point(const Vec& re, const Vec& im) const;
  bool same_point(const PeriodPoint& x, const PeriodPoint& y, double tol) const;
  PeriodPoint conjugate(const PeriodPoint& z) const;
  double isotropy_residual(const PeriodPoint& z) const;

  OrientedTwoPlane point_to_plane(const PeriodPoint& z) const;
  PeriodPoint plane_to_point(const OrientedTwoPlane& plane) const;

  PositiveThreePlane orient_three_plane(const Vec& v1, const Vec& v2, const Vec& v3) const;
  /// Sign of det of the q-orthogonal projection of `frame` onto P_o.
  int orientation_sign(const Frame3& frame) const;

  /// max |b(c_hat, a)|, |b(c_hat, b)| with c_hat = c / |c|.
  double plane_orthogonality_residual(const PeriodPoint& z, const Vec& c) const;
  bool positive_cone_contains(const PeriodPoint& z, const Vec& c) const;

  PositiveThreePlane twistor_plane(const PeriodPoint& z, const Vec& line) const;
  PeriodPoint conic_point(const PositiveThreePlane& p, const Vec& u,
                          FrameCompletion completion = FrameCompletion::lowest_indices) const;
  /// Euclidean distance of re and im from P (q-orthogonal projection).
  double conic_residual(const PositiveThreePlane& p, const PeriodPoint& z) const;
  bool conic_contains(const PositiveThreePlane& p, const PeriodPoint& z) const;

  /// Smallest eigenvalue of q on a Euclidean-orthonormal basis of span(vectors).
  double min_positivity(const Eigen::MatrixXd& vectors) const;

  TwistorChain chain_connect(const PeriodPoint& from, const PeriodPoint& to, const ChainOptions& opts = {}) const;

 private:
  Vec project_onto(const Frame3& frame, const Vec& x) const;

  QuadLattice lattice_;
  Tolerances tol_;
  Eigen::MatrixXd gram_;
  Frame3 reference_;
  Eigen::MatrixXd negative_;
};

}  // namespace hkt
