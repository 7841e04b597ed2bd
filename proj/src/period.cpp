#include "hkt/period.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "hkt/errors.hpp"

namespace hkt {

Eigen::VectorXcd PeriodPoint::sigma() const {
  Eigen::VectorXcd s(re_.size());
  for (Eigen::Index i = 0; i < re_.size(); ++i) s(i) = {re_(i), im_(i)};
  return s;
}

PeriodDomain::PeriodDomain(QuadLattice lattice, Tolerances tol) : lattice_(std::move(lattice)), tol_(tol) {
  if (lattice_.signature().positive != 3) throw DomainError("period domain requires signature (3, n)");
  const auto n = static_cast<Eigen::Index>(lattice_.rank());
  gram_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) gram_(i, j) = static_cast<double>(lattice_.gram()[i][j]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  Eigen::MatrixXd pos(n, 3);
  negative_.resize(n, n - 3);
  Eigen::Index np = 0, nn = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (vals(k) > 0) {
      pos.col(np++) = vecs.col(k);
    } else {
      negative_.col(nn++) = vecs.col(k) / std::sqrt(-vals(k));
    }
  }
  if (np != 3) throw std::logic_error("eigenvalue count disagrees with exact signature");

  // The positive eigenspace is canonical; its basis is fixed by projecting the
  // coordinate axes in order, so the orientation does not depend on the eigensolver.
  const Eigen::MatrixXd projector = pos * pos.transpose();
  std::vector<Vec> picked, ortho;
  for (Eigen::Index k = 0; k < n && picked.size() < 3; ++k) {
    Vec y = projector.col(k);
    Vec r = y;
    for (const auto& o : ortho) r -= o.dot(r) * o;
    if (r.norm() > 1e-8) {
      picked.push_back(y);
      ortho.push_back(r.normalized());
    }
  }
  reference_.resize(n, 3);
  for (int j = 0; j < 3; ++j) {
    Vec v = picked[j];
    for (int i = 0; i < j; ++i) v -= b(v, reference_.col(i)) * reference_.col(i);
    reference_.col(j) = v / std::sqrt(q(v));
  }
}

PeriodPoint PeriodDomain::point(const Vec& re, const Vec& im) const {
  const auto n = static_cast<Eigen::Index>(rank());
  if (re.size() != n || im.size() != n) throw DomainError("period point has wrong rank");
  if (!re.allFinite() || !im.allFinite()) throw DomainError("period point has non-finite entries");
  const double qa = q(re), qb = q(im), bab = b(re, im);
  const double h = qa + qb;
  if (!(h > 0)) throw DomainError("sigma is not h_q-positive");
  if (std::hypot(qa - qb, 2 * bab) / h > tol_.iso) throw DomainError("sigma is not isotropic");

  // Phase: the first coordinate of non-negligible modulus becomes real positive.
  double maxmod = 0;
  for (Eigen::Index i = 0; i < n; ++i) maxmod = std::max(maxmod, std::hypot(re(i), im(i)));
  Eigen::Index pivot = 0;
  while (std::hypot(re(pivot), im(pivot)) <= 1e-6 * maxmod) ++pivot;
  const std::complex<double> s(re(pivot), im(pivot));
  const std::complex<double> phase = std::conj(s) / std::abs(s);
  Vec a = phase.real() * re - phase.imag() * im;
  Vec c = phase.real() * im + phase.imag() * re;
  a /= std::sqrt(q(a));
  c -= b(a, c) * a;
  c /= std::sqrt(q(c));
  return PeriodPoint(std::move(a), std::move(c));
}

bool PeriodDomain::same_point(const PeriodPoint& x, const PeriodPoint& y, double tol) const {
  return (x.re() - y.re()).lpNorm<Eigen::Infinity>() < tol && (x.im() - y.im()).lpNorm<Eigen::Infinity>() < tol;
}

PeriodPoint PeriodDomain::conjugate(const PeriodPoint& z) const { return point(z.re(), -z.im()); }

double PeriodDomain::isotropy_residual(const PeriodPoint& z) const {
  const double qa = q(z.re()), qb = q(z.im());
  return std::hypot(qa - qb, 2 * b(z.re(), z.im())) / (qa + qb);
}

OrientedTwoPlane PeriodDomain::point_to_plane(const PeriodPoint& z) const { return {z.re(), z.im()}; }

PeriodPoint PeriodDomain::plane_to_point(const OrientedTwoPlane& plane) const {
  const auto n = static_cast<Eigen::Index>(rank());
  if (plane.a.size() != n || plane.b.size() != n) throw DomainError("plane has wrong rank");
  Eigen::MatrixXd m(n, 2);
  m << plane.a, plane.b;
  if (!(min_positivity(m) > 0)) throw DomainError("plane is not positive");
  Vec a = plane.a / std::sqrt(q(plane.a));
  Vec c = plane.b - b(plane.b, a) * a;
  c /= std::sqrt(q(c));
  return point(a, c);
}

double PeriodDomain::min_positivity(const Eigen::MatrixXd& vectors) const {
  Eigen::MatrixXd m = vectors;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double nrm = m.col(j).norm();
    if (nrm == 0) return 0;
    m.col(j) /= nrm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  if (svd.singularValues().minCoeff() < 1e-10) return 0;
  const Eigen::MatrixXd basis = svd.matrixU();
  const Eigen::MatrixXd k = basis.transpose() * gram_ * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

int PeriodDomain::orientation_sign(const Frame3& frame) const {
  const Eigen::Matrix3d m = reference_.transpose() * gram_ * frame;
  const double d = m.determinant();
  if (d == 0) throw std::logic_error("projection onto the reference plane is singular");
  return d > 0 ? 1 : -1;
}

PositiveThreePlane PeriodDomain::orient_three_plane(const Vec& v1, const Vec& v2, const Vec& v3) const {
  const auto n = static_cast<Eigen::Index>(rank());
  if (v1.size() != n || v2.size() != n || v3.size() != n) throw DomainError("3-plane vectors have wrong rank");
  Frame3 f(n, 3);
  f << v1, v2, v3;
  const double mp = min_positivity(f);
  if (!(mp > tol_.pos))
    throw DomainError("span is degenerate or not positive (min eigenvalue " + std::to_string(mp) + ")");
  for (int j = 0; j < 3; ++j) {
    Vec v = f.col(j);
    for (int i = 0; i < j; ++i) v -= b(v, f.col(i)) * f.col(i);
    f.col(j) = v / std::sqrt(q(v));
  }
  return {f, orientation_sign(f)};
}

double PeriodDomain::plane_orthogonality_residual(const PeriodPoint& z, const Vec& c) const {
  if (c.size() != static_cast<Eigen::Index>(rank())) throw DomainError("vector has wrong rank");
  const double nrm = c.norm();
  if (nrm == 0) throw DomainError("zero vector");
  const Vec ch = c / nrm;
  return std::max(std::abs(b(ch, z.re())), std::abs(b(ch, z.im())));
}

bool PeriodDomain::positive_cone_contains(const PeriodPoint& z, const Vec& c) const {
  if (plane_orthogonality_residual(z, c) >= tol_.orth) throw DomainError("not in Pi_z^perp");
  const Vec ch = c.normalized();
  const double qc = q(ch);
  if (!(qc > tol_.iso)) return false;
  Frame3 f(rank(), 3);
  f << z.re(), z.im(), ch / std::sqrt(qc);
  return orientation_sign(f) == 1;
}

PositiveThreePlane PeriodDomain::twistor_plane(const PeriodPoint& z, const Vec& line) const {
  if (plane_orthogonality_residual(z, line) >= tol_.orth) throw DomainError("line is not in Pi_z^perp");
  if (!(q(line.normalized()) > tol_.iso)) throw DomainError("line is not positive");
  return orient_three_plane(z.re(), z.im(), line);
}

Vec PeriodDomain::project_onto(const Frame3& frame, const Vec& x) const {
  return frame * (frame.transpose() * (gram_ * x));
}

PeriodPoint PeriodDomain::conic_point(const PositiveThreePlane& p, const Vec& u, FrameCompletion completion) const {
  if (u.size() != static_cast<Eigen::Index>(rank())) throw DomainError("vector has wrong rank");
  const Eigen::Vector3d coeff = p.frame.transpose() * (gram_ * u);
  if ((u - p.frame * coeff).norm() > tol_.orth * std::max(1.0, u.norm())) throw DomainError("u is not in P");
  if (std::abs(q(u) - 1) > tol_.iso) throw DomainError("u is not a unit vector");

  std::vector<int> idx;
  if (completion == FrameCompletion::lowest_indices) {
    for (int k = 0; k < 3 && idx.size() < 2; ++k)
      if (std::abs(coeff(k)) < 0.9) idx.push_back(k);
  } else {
    for (int k = 2; k >= 0 && idx.size() < 2; --k)
      if (std::abs(coeff(k)) < 0.9) idx.push_back(k);
  }
  Vec v = p.frame.col(idx[0]) - b(p.frame.col(idx[0]), u) * u;
  v /= std::sqrt(q(v));
  Vec w = p.frame.col(idx[1]) - b(p.frame.col(idx[1]), u) * u - b(p.frame.col(idx[1]), v) * v;
  w /= std::sqrt(q(w));
  Frame3 f(rank(), 3);
  f << u, v, w;
  if (orientation_sign(f) < 0) w = -w;
  return point(v, w);
}

double PeriodDomain::conic_residual(const PositiveThreePlane& p, const PeriodPoint& z) const {
  return std::max((z.re() - project_onto(p.frame, z.re())).norm(), (z.im() - project_onto(p.frame, z.im())).norm());
}

bool PeriodDomain::conic_contains(const PositiveThreePlane& p, const PeriodPoint& z) const {
  return conic_residual(p, z) < tol_.orth;
}

}  // namespace hkt
