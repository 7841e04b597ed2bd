#include "hkt/sampling.hpp"

#include <cmath>

#include "hkt/errors.hpp"

namespace hkt {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw DomainError("empty integer range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(gen_());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x = gen_();
  while (x >= limit) x = gen_();
  return lo + static_cast<std::int64_t>(x % span);
}

Vec Rng::normal_vector(std::size_t n) {
  Vec v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal();
  return v;
}

PeriodPoint sample_period_point(const PeriodDomain& dom, std::uint64_t seed) {
  Rng rng(seed);
  const Frame3& p = dom.reference_frame();
  const Eigen::MatrixXd& neg = dom.negative_frame();
  // 2-plane in P_o, graphed over by a contraction into P_o^perp.
  Eigen::Matrix<double, 3, 2> c;
  c.col(0) = rng.normal_vector(3);
  c.col(1) = rng.normal_vector(3);
  Eigen::HouseholderQR<Eigen::Matrix<double, 3, 2>> qr(c);
  const Eigen::Matrix<double, 3, 2> q = qr.householderQ() * Eigen::Matrix<double, 3, 2>::Identity();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(neg.cols(), 3);
  if (neg.cols() > 0) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < 3; ++j) a(i, j) = rng.normal();
    const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
    a *= rng.uniform(0.0, 0.9) / norm;
  }
  Vec x = p * q.col(0) + neg * (a * q.col(0));
  Vec y = p * q.col(1) + neg * (a * q.col(1));
  x /= std::sqrt(dom.q(x));
  y -= dom.b(x, y) * x;
  y /= std::sqrt(dom.q(y));
  return dom.point(x, y);
}

Vec sample_irrational_line(const PeriodDomain& dom, const PeriodPoint& z, const RelationSearch& search,
                           std::uint64_t seed, int max_attempts) {
  if (dom.negative_frame().cols() == 0) throw DomainError("signature too small");
  const Eigen::MatrixXd& g = dom.gram();
  Eigen::MatrixXd c(2, g.rows());
  c.row(0) = (g * z.re()).transpose();
  c.row(1) = (g * z.im()).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  const Eigen::MatrixXd k = svd.matrixV().rightCols(g.rows() - 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.transpose() * g * k);
  const Eigen::Index top = es.eigenvalues().size() - 1;
  if (es.eigenvalues()(top) <= 0) throw NumericalError("no positive direction in Pi_z^perp");
  const Vec l0 = k * es.eigenvectors().col(top) / std::sqrt(es.eigenvalues()(top));
  Rng rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vec dir = Vec::Zero(g.rows());
    Vec coeff = rng.normal_vector(static_cast<std::size_t>(top));
    coeff.normalize();
    for (Eigen::Index i = 0; i < top; ++i)
      dir += coeff(i) * k * es.eigenvectors().col(i) / std::sqrt(-es.eigenvalues()(i));
    Vec line = l0 + rng.uniform(-0.9, 0.9) * dir;
    line /= std::sqrt(dom.q(line));
    if (is_fully_irrational({z.re(), z.im(), line}, search).fully_irrational) return line;
  }
  throw NumericalError("no fully irrational line found");
}

}  // namespace hkt
