#pragma once

// Walls H_delta for negative forms delta, majorant enumeration near a positive
// plane, and chamber tests.

#include <optional>
#include <vector>

#include "hkt/lattice.hpp"
#include "hkt/period.hpp"

namespace hkt {

/// Strict inequality q(v_P) < -eps q(v_perp) for the q-orthogonal splitting along P.
bool in_U_eps(const PeriodDomain& dom, const PositiveThreePlane& p, const Vec& v, double eps);

/// q_P(x) = q(x_P) - q(x_perp) for a maximal positive subspace P.
struct MajorantForm {
  Eigen::MatrixXd frame;      // q-orthonormal basis of P
  Eigen::MatrixXd gram;       // q_P on H
  Eigen::MatrixXd dual_gram;  // q_P on H^dual: gram^-1 q_P gram^-1
  double value(const Vec& x) const { return x.dot(gram * x); }
  double dual_value(const Vec& delta) const { return delta.dot(dual_gram * delta); }
};

/// `frame` spans a positive subspace of dimension = the positive index of the lattice.
/// Throws DomainError when it is not positive or not maximal.
MajorantForm majorant(const QuadLattice& lattice, const Eigen::MatrixXd& frame);

struct EnumerationOptions {
  std::size_t rank_cap = 26;
  std::size_t node_cap = 200'000'000;
  unsigned workers = 1;
};

/// All indivisible integral delta with q^dual(delta) = d and q_P^dual(delta) <= R^2,
/// one per +- pair (first nonzero coordinate positive), sorted lexicographically.
std::vector<WallForm> enumerate_walls_near(const QuadLattice& lattice, const MajorantForm& m, std::int64_t d, double r,
                                           const EnumerationOptions& opts = {});

struct SignedWall {
  WallForm form;
  int sign = 1;  // Kaehler side is sign * delta > 0
};

/// Negative, indivisible, pairwise non-proportional forms on a signature (3, n) lattice.
class WallSet {
 public:
  WallSet(const QuadLattice& lattice, std::vector<SignedWall> walls);
  const std::vector<SignedWall>& walls() const { return walls_; }
  std::size_t size() const { return walls_.size(); }
  bool empty() const { return walls_.empty(); }

 private:
  std::vector<SignedWall> walls_;
};

/// Euclidean norm of (delta_hat(x_1), ..., delta_hat(x_k)), delta_hat = delta / |delta|.
double restriction_norm(const WallForm& delta, const Eigen::MatrixXd& vectors);

struct AvoidanceReport {
  bool avoids = true;
  std::optional<std::size_t> nearest;
  double nearest_norm = 0;
};

AvoidanceReport wall_avoidance(const PositiveThreePlane& p, const WallSet& walls, double tau = 1e-8);

/// Indices of walls with |delta_hat restricted to Pi_z| < tau.
std::vector<std::size_t> relevant_walls(const PeriodPoint& z, const WallSet& walls, double tau = 1e-8);

struct ChamberReport {
  bool contains = false;
  bool in_positive_cone = false;
  std::optional<std::size_t> violated;  // first relevant wall with sign * delta_hat(kappa) <= tau |kappa|
};

/// Throws DomainError("not in Pi_z^perp") for kappa off Pi_z^perp.
ChamberReport kahler_chamber_contains(const PeriodDomain& dom, const PeriodPoint& z, const WallSet& walls,
                                      const Vec& kappa, double tau = 1e-8);

/// Pairs of walls that both contain P within tau.
std::size_t pairwise_incidences(const PositiveThreePlane& p, const WallSet& walls, double tau = 1e-8);

}  // namespace hkt
