#include "hkt/walls.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "hkt/errors.hpp"

namespace hkt {

namespace {

Vec to_vec(const QVector& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].get_d();
  return out;
}

Eigen::MatrixXd to_double(const QuadLattice& l) {
  const auto n = static_cast<Eigen::Index>(l.rank());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = static_cast<double>(l.gram()[i][j]);
  return g;
}

}  // namespace

bool in_U_eps(const PeriodDomain& dom, const PositiveThreePlane& p, const Vec& v, double eps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("epsilon must lie in (0, 1)");
  if (v.size() != static_cast<Eigen::Index>(dom.rank())) throw DomainError("vector has wrong rank");
  const Vec vp = p.frame * (p.frame.transpose() * (dom.gram() * v));
  return dom.q(vp) < -eps * dom.q(v - vp);
}

MajorantForm majorant(const QuadLattice& lattice, const Eigen::MatrixXd& frame) {
  const Eigen::MatrixXd g = to_double(lattice);
  if (frame.rows() != g.rows()) throw DomainError("frame has wrong rank");
  if (static_cast<std::size_t>(frame.cols()) != lattice.signature().positive)
    throw DomainError("frame dimension differs from the positive index");
  const Eigen::MatrixXd fg = frame.transpose() * g * frame;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fg);
  if (!(es.eigenvalues().minCoeff() > 1e-9)) throw DomainError("frame is not positive");
  // q-orthonormalize the frame.
  MajorantForm m;
  m.frame = frame * es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  const Eigen::MatrixXd gp = g * m.frame;
  m.gram = 2 * gp * gp.transpose() - g;
  const Eigen::MatrixXd gi = g.inverse();
  m.dual_gram = gi * m.gram * gi;
  m.dual_gram = (m.dual_gram + m.dual_gram.transpose()) / 2;
  if (!(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.dual_gram).eigenvalues().minCoeff() > 0))
    throw NumericalError("majorant is not positive definite");
  return m;
}

std::vector<WallForm> enumerate_walls_near(const QuadLattice& lattice, const MajorantForm& m, std::int64_t d, double r,
                                           const EnumerationOptions& opts) {
  if (d >= 0) throw DomainError("d must be negative");
  if (!(r > 0)) throw DomainError("R must be positive");
  const std::size_t n = lattice.rank();
  if (n > opts.rank_cap)
    throw DomainError("rank " + std::to_string(n) + " exceeds the enumeration cap; reduce R or the rank");
  if (static_cast<std::size_t>(m.dual_gram.rows()) != n) throw DomainError("majorant has wrong rank");

  // gram^-1 = a / den with integer a; q^dual(delta) = d  <=>  delta^T a delta = d * den.
  const QMatrix& gi = lattice.gram_inverse();
  Integer den = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), gi(i, j).get_den_mpz_t());
  if (!den.fits_slong_p()) throw NumericalError("dual Gram denominator too large");
  std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational x = gi(i, j) * den;
      if (!x.get_num().fits_slong_p()) throw NumericalError("dual Gram entries too large");
      a[i][j] = x.get_num().get_si();
    }
  const __int128 target = static_cast<__int128>(d) * den.get_si();

  // Q = L L^T, Q(x) = sum_i diag_i (x_i + sum_{j>i} u_ij x_j)^2.
  const Eigen::LLT<Eigen::MatrixXd> llt(m.dual_gram);
  if (llt.info() != Eigen::Success) throw NumericalError("majorant Cholesky failed");
  const Eigen::MatrixXd l = llt.matrixL();
  std::vector<double> diag(n);
  std::vector<std::vector<double>> u(n, std::vector<double>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    diag[i] = l(ii, ii) * l(ii, ii);
    for (std::size_t j = i + 1; j < n; ++j) u[i][j] = l(static_cast<Eigen::Index>(j), ii) / l(ii, ii);
  }
  const double bound = r * r * (1 + 1e-12) + 1e-9;
  std::atomic<std::size_t> nodes{0};

  struct Search {
    const std::vector<double>& diag;
    const std::vector<std::vector<double>>& u;
    const std::vector<std::vector<std::int64_t>>& a;
    const MajorantForm& m;
    __int128 target;
    double bound, r2;
    std::size_t node_cap;
    std::atomic<std::size_t>& nodes;
    std::vector<std::int64_t> x;
    std::vector<std::vector<std::int64_t>> found;

    void accept() {
      std::size_t first = 0;
      while (first < x.size() && x[first] == 0) ++first;
      if (first == x.size() || x[first] < 0) return;
      std::int64_t g = 0;
      for (auto v : x) g = std::gcd(g, v);
      if (g != 1) return;
      __int128 s = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        __int128 row = 0;
        for (std::size_t j = 0; j < x.size(); ++j) row += static_cast<__int128>(a[i][j]) * x[j];
        s += row * x[i];
      }
      if (s != target) return;
      Vec v(static_cast<Eigen::Index>(x.size()));
      for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Eigen::Index>(i)) = static_cast<double>(x[i]);
      if (m.dual_value(v) > r2 * (1 + 1e-12) + 1e-9) return;
      found.push_back(x);
    }

    void run(std::size_t level, double partial) {
      if (++nodes > node_cap) throw NumericalError("enumeration node cap exceeded; reduce R");
      double c = 0;
      for (std::size_t j = level + 1; j < x.size(); ++j) c -= u[level][j] * static_cast<double>(x[j]);
      const double room = bound - partial;
      if (room < 0) return;
      const double w = std::sqrt(room / diag[level]);
      const auto lo = static_cast<std::int64_t>(std::ceil(c - w)), hi = static_cast<std::int64_t>(std::floor(c + w));
      for (std::int64_t v = lo; v <= hi; ++v) {
        x[level] = v;
        const double p = partial + diag[level] * (static_cast<double>(v) - c) * (static_cast<double>(v) - c);
        if (p > bound) continue;
        if (level == 0) {
          accept();
        } else {
          run(level - 1, p);
        }
      }
      x[level] = 0;
    }
  };

  // Outermost coordinate x_{n-1} ranges over |x| <= sqrt(bound / diag), split across workers.
  const std::size_t top = n - 1;
  const auto w = static_cast<std::int64_t>(std::floor(std::sqrt(bound / diag[top])));
  std::vector<std::int64_t> values;
  for (std::int64_t v = -w; v <= w; ++v) values.push_back(v);
  std::vector<std::vector<std::vector<std::int64_t>>> per_value(values.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t k = begin; k < values.size(); k += stride) {
      Search s{diag, u, a, m, target, bound, r * r, opts.node_cap, nodes, std::vector<std::int64_t>(n, 0), {}};
      const double v = static_cast<double>(values[k]);
      const double p = diag[top] * v * v;
      if (p > bound) continue;
      s.x[top] = values[k];
      if (top == 0) {
        s.accept();
      } else {
        s.run(top - 1, p);
      }
      per_value[k] = std::move(s.found);
    }
  };
  const unsigned workers = std::max(1u, opts.workers);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex mu;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, workers);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<std::vector<std::int64_t>> all;
  for (auto& v : per_value) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  std::vector<WallForm> out;
  for (const auto& x : all) {
    WallForm f;
    for (auto v : x) f.coords.emplace_back(static_cast<long>(v));
    out.push_back(std::move(f));
  }
  return out;
}

WallSet::WallSet(const QuadLattice& lattice, std::vector<SignedWall> walls) : walls_(std::move(walls)) {
  for (std::size_t i = 0; i < walls_.size(); ++i) {
    const auto& w = walls_[i];
    if (w.form.coords.size() != lattice.rank()) throw DomainError("wall " + std::to_string(i) + " has wrong rank");
    if (w.sign != 1 && w.sign != -1) throw DomainError("wall sign must be +1 or -1");
    if (!w.form.indivisible()) throw DomainError("wall " + std::to_string(i) + " is not indivisible");
    if (!is_negative_form(lattice, w.form)) throw DomainError("wall " + std::to_string(i) + " is not negative");
    for (std::size_t j = 0; j < i; ++j) {
      // Indivisible forms are proportional only when equal up to sign.
      const auto& o = walls_[j].form.coords;
      bool same = true, opposite = true;
      for (std::size_t t = 0; t < o.size(); ++t) {
        same &= o[t] == w.form.coords[t];
        opposite &= o[t] == -w.form.coords[t];
      }
      if (same || opposite)
        throw DomainError("walls " + std::to_string(j) + " and " + std::to_string(i) + " are proportional");
    }
  }
}

double restriction_norm(const WallForm& delta, const Eigen::MatrixXd& vectors) {
  const Vec d = to_vec(delta.coords);
  const double nd = d.norm();
  if (nd == 0) throw DomainError("zero form");
  return (vectors.transpose() * d).norm() / nd;
}

AvoidanceReport wall_avoidance(const PositiveThreePlane& p, const WallSet& walls, double tau) {
  AvoidanceReport rep;
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const double r = restriction_norm(walls.walls()[i].form, p.frame);
    if (!rep.nearest || r < rep.nearest_norm) {
      rep.nearest = i;
      rep.nearest_norm = r;
    }
  }
  rep.avoids = !rep.nearest || rep.nearest_norm > tau;
  return rep;
}

std::vector<std::size_t> relevant_walls(const PeriodPoint& z, const WallSet& walls, double tau) {
  Eigen::MatrixXd plane(z.re().size(), 2);
  plane << z.re(), z.im();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < walls.size(); ++i)
    if (restriction_norm(walls.walls()[i].form, plane) < tau) out.push_back(i);
  return out;
}

ChamberReport kahler_chamber_contains(const PeriodDomain& dom, const PeriodPoint& z, const WallSet& walls,
                                      const Vec& kappa, double tau) {
  ChamberReport rep;
  rep.in_positive_cone = dom.positive_cone_contains(z, kappa);
  if (!rep.in_positive_cone) return rep;
  const double nk = kappa.norm();
  for (std::size_t i : relevant_walls(z, walls, tau)) {
    const auto& w = walls.walls()[i];
    const Vec d = to_vec(w.form.coords);
    if (!(w.sign * d.dot(kappa) / d.norm() > tau * nk)) {
      rep.violated = i;
      return rep;
    }
  }
  rep.contains = true;
  return rep;
}

std::size_t pairwise_incidences(const PositiveThreePlane& p, const WallSet& walls, double tau) {
  std::size_t on = 0;
  for (const auto& w : walls.walls())
    if (restriction_norm(w.form, p.frame) < tau) ++on;
  return on * (on - (on > 0 ? 1 : 0)) / 2;
}

}  // namespace hkt
