#include "hkt/llv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include "hkt/errors.hpp"
#include "hkt/sampling.hpp"

namespace hkt {

namespace {

Eigen::MatrixXd to_double(const QMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

// Positions (a, b) of a degree -2 operator: deg a = deg b - 2.
std::vector<std::pair<std::size_t, std::size_t>> lowering_slots(const CohomologyRing& ring) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t a = 0; a < ring.dim(); ++a)
    for (std::size_t b = 0; b < ring.dim(); ++b)
      if (ring.degrees()[a] == ring.degrees()[b] - 2) slots.push_back({a, b});
  return slots;
}

std::string join(const QVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + "]";
}

}  // namespace

double off_block_residual(const CohomologyRing& ring, const Eigen::MatrixXd& a, int degree) {
  double worst = 0;
  for (std::size_t i = 0; i < ring.dim(); ++i)
    for (std::size_t j = 0; j < ring.dim(); ++j)
      if (ring.degrees()[i] - ring.degrees()[j] != degree)
        worst = std::max(worst, std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
  return worst;
}

Eigen::MatrixXd bracket(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a * b - b * a; }

double operator_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
}

ExactOperator lefschetz_e_exact(const CohomologyRing& ring, const QVector& eta) {
  if (eta.size() != ring.lattice_indices().size()) throw DomainError("eta has wrong length");
  QMatrix e(ring.dim(), ring.dim());
  for (std::size_t t = 0; t < eta.size(); ++t) {
    if (eta[t] == 0) continue;
    const std::size_t i = ring.lattice_indices()[t];
    for (std::size_t j = 0; j < ring.dim(); ++j)
      for (const auto& [k, c] : ring.product(i, j)) e(k, j) += eta[t] * static_cast<long>(c);
  }
  return {e, 2};
}

GradedOperator lefschetz_e(const CohomologyRing& ring, const Vec& eta) {
  if (static_cast<std::size_t>(eta.size()) != ring.lattice_indices().size()) throw DomainError("eta has wrong length");
  const auto n = static_cast<Eigen::Index>(ring.dim());
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index t = 0; t < eta.size(); ++t) {
    if (eta(t) == 0) continue;
    const std::size_t i = ring.lattice_indices()[static_cast<std::size_t>(t)];
    for (std::size_t j = 0; j < ring.dim(); ++j)
      for (const auto& [k, c] : ring.product(i, j))
        e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) += eta(t) * static_cast<double>(c);
  }
  return {e, 2};
}

ExactOperator grading_h_exact(const CohomologyRing& ring) {
  QMatrix h(ring.dim(), ring.dim());
  for (std::size_t i = 0; i < ring.dim(); ++i) h(i, i) = 2 * ring.m() - ring.degrees()[i];
  return {h, 0};
}

GradedOperator grading_h(const CohomologyRing& ring) { return {to_double(grading_h_exact(ring).matrix), 0}; }

GradedOperator lefschetz_f(const CohomologyRing& ring, const Vec& eta, double tol) {
  const Eigen::MatrixXd e = lefschetz_e(ring, eta).matrix;
  const Eigen::MatrixXd h = grading_h(ring).matrix;
  const auto n = static_cast<Eigen::Index>(ring.dim());
  const auto slots = lowering_slots(ring);
  // Column for slot (a, b): e E_ab - E_ab e, flattened column-major.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n * n, static_cast<Eigen::Index>(slots.size()));
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto ra = static_cast<Eigen::Index>(slots[s].first), cb = static_cast<Eigen::Index>(slots[s].second);
    const auto col = static_cast<Eigen::Index>(s);
    for (Eigen::Index i = 0; i < n; ++i) a(i + cb * n, col) += e(i, ra);
    for (Eigen::Index j = 0; j < n; ++j) a(ra + j * n, col) -= e(cb, j);
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(h.data(), n * n);
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(rhs);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t s = 0; s < slots.size(); ++s)
    f(static_cast<Eigen::Index>(slots[s].first), static_cast<Eigen::Index>(slots[s].second)) = x(static_cast<Eigen::Index>(s));
  const double res = operator_norm(bracket(e, f) + h);
  if (!(res <= tol * std::max(1.0, operator_norm(h)))) throw DomainError("hard Lefschetz fails");
  return {f, -2};
}

ExactOperator lefschetz_f_exact(const CohomologyRing& ring, const QVector& eta) {
  const QMatrix e = lefschetz_e_exact(ring, eta).matrix;
  const QMatrix h = grading_h_exact(ring).matrix;
  const std::size_t n = ring.dim();
  const auto slots = lowering_slots(ring);
  QMatrix a(n * n, slots.size());
  QVector rhs(n * n);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto [ra, cb] = slots[s];
    for (std::size_t i = 0; i < n; ++i) a(i * n + cb, s) += e(i, ra);
    for (std::size_t j = 0; j < n; ++j) a(ra * n + j, s) -= e(cb, j);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = -h(i, j);
  const auto x = solve_any(a, rhs);
  if (!x) throw DomainError("hard Lefschetz fails");
  QMatrix f(n, n);
  for (std::size_t s = 0; s < slots.size(); ++s) f(slots[s].first, slots[s].second) = (*x)[s];
  return {f, -2};
}

Sl2Residuals sl2_residuals(const GradedOperator& e, const GradedOperator& h, const GradedOperator& f) {
  Sl2Residuals r;
  r.he = operator_norm(bracket(h.matrix, e.matrix) + 2 * e.matrix);
  r.hf = operator_norm(bracket(h.matrix, f.matrix) - 2 * f.matrix);
  r.ef = operator_norm(bracket(e.matrix, f.matrix) + h.matrix);
  return r;
}

namespace {

class FloatSpan {
 public:
  FloatSpan(Eigen::Index size, double tol) : size_(size), tol_(tol) {}

  // Returns true when a new direction was added.
  bool add(const Eigen::VectorXd& v, int degree, double& residual) {
    auto& b = bases_[degree];
    Eigen::VectorXd r = v;
    for (int pass = 0; pass < 2 && b.count > 0; ++pass) {
      const auto q = b.q.leftCols(b.count);
      r -= q * (q.transpose() * r);
    }
    const double nr = r.norm();
    if (nr <= tol_) {
      residual = std::max(residual, nr);
      return false;
    }
    if (b.count == b.q.cols()) b.q.conservativeResize(size_, std::max<Eigen::Index>(8, 2 * b.q.cols()));
    b.q.col(b.count++) = r / nr;
    elements_.push_back({b.q.col(b.count - 1), degree});
    return true;
  }

  std::size_t size() const { return elements_.size(); }
  const std::pair<Eigen::VectorXd, int>& element(std::size_t i) const { return elements_[i]; }
  std::map<int, std::size_t> degree_dimensions() const {
    std::map<int, std::size_t> out;
    for (const auto& [d, b] : bases_)
      if (b.count > 0) out[d] = static_cast<std::size_t>(b.count);
    return out;
  }

 private:
  struct Basis {
    Eigen::MatrixXd q;
    Eigen::Index count = 0;
  };
  Eigen::Index size_;
  double tol_;
  std::map<int, Basis> bases_;
  std::vector<std::pair<Eigen::VectorXd, int>> elements_;
};

}  // namespace

LieClosure lie_closure(const std::vector<GradedOperator>& generators, const LieOptions& opts) {
  if (generators.empty()) return {};
  const Eigen::Index n = generators.front().matrix.rows();
  for (const auto& g : generators)
    if (g.matrix.rows() != n || g.matrix.cols() != n) throw DomainError("generators act on different spaces");
  FloatSpan span(n * n, opts.tol);
  LieClosure out;
  auto check_cap = [&] {
    if (span.size() > opts.max_dimension)
      throw NumericalError("closure dimension exceeds cap " + std::to_string(opts.max_dimension));
  };
  for (const auto& g : generators) {
    const double norm = g.matrix.norm();
    if (norm <= opts.tol) continue;
    double ignored = 0;
    span.add(Eigen::Map<const Eigen::VectorXd>(g.matrix.data(), n * n) / norm, g.degree, ignored);
    check_cap();
  }
  const unsigned workers = std::max(1u, opts.workers);
  for (std::size_t i = 0; i < span.size(); ++i) {
    const Eigen::Map<const Eigen::MatrixXd> li(span.element(i).first.data(), n, n);
    std::vector<Eigen::MatrixXd> brackets(i);
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j)
        brackets[j] = bracket(li, Eigen::Map<const Eigen::MatrixXd>(span.element(j).first.data(), n, n));
    };
    if (workers == 1 || i < 16) {
      work(0, i);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (i + workers - 1) / workers;
      for (std::size_t b = 0; b < i; b += chunk) pool.emplace_back(work, b, std::min(i, b + chunk));
      for (auto& t : pool) t.join();
    }
    const int di = span.element(i).second;
    for (std::size_t j = 0; j < i; ++j) {
      span.add(Eigen::Map<const Eigen::VectorXd>(brackets[j].data(), n * n), di + span.element(j).second, out.residual);
      check_cap();
    }
  }
  for (std::size_t i = 0; i < span.size(); ++i)
    out.basis.push_back({Eigen::Map<const Eigen::MatrixXd>(span.element(i).first.data(), n, n), span.element(i).second});
  out.dimension = out.basis.size();
  out.degree_dimensions = span.degree_dimensions();
  return out;
}

ExactLieClosure lie_closure_exact(const std::vector<ExactOperator>& generators, std::size_t max_dimension) {
  ExactLieClosure out;
  if (generators.empty()) return out;
  const std::size_t n = generators.front().matrix.rows();
  struct Row {
    QVector v;
    std::size_t pivot;
  };
  std::map<int, std::vector<Row>> echelon;
  std::vector<ExactOperator> elements;
  auto add = [&](const ExactOperator& op) {
    if (op.matrix.rows() != n || op.matrix.cols() != n) throw DomainError("generators act on different spaces");
    QVector v(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = op.matrix(i, j);
    auto& rows = echelon[op.degree];
    for (const auto& r : rows) {
      if (v[r.pivot] == 0) continue;
      const Rational f = v[r.pivot] / r.v[r.pivot];
      for (std::size_t t = r.pivot; t < v.size(); ++t)
        if (r.v[t] != 0) v[t] -= f * r.v[t];
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) return;
    rows.push_back({std::move(v), p});
    elements.push_back(op);
    if (elements.size() > max_dimension)
      throw NumericalError("closure dimension exceeds cap " + std::to_string(max_dimension));
  };
  for (const auto& g : generators) add(g);
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const QMatrix& a = elements[i].matrix;
      const QMatrix& b = elements[j].matrix;
      add({a * b - b * a, elements[i].degree + elements[j].degree});
    }
  out.dimension = elements.size();
  for (const auto& [d, rows] : echelon)
    if (!rows.empty()) out.degree_dimensions[d] = rows.size();
  return out;
}

KillingSignature killing_signature(const LieClosure& closure, double tol) {
  const auto d = static_cast<Eigen::Index>(closure.dimension);
  KillingSignature sig;
  if (d == 0) return sig;
  const Eigen::Index n = closure.basis.front().matrix.rows();
  Eigen::MatrixXd flat(n * n, d);
  for (Eigen::Index c = 0; c < d; ++c)
    flat.col(c) = Eigen::Map<const Eigen::VectorXd>(closure.basis[static_cast<std::size_t>(c)].matrix.data(), n * n);
  std::vector<Eigen::MatrixXd> ad(static_cast<std::size_t>(d), Eigen::MatrixXd(d, d));
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      const Eigen::MatrixXd br = bracket(closure.basis[static_cast<std::size_t>(a)].matrix,
                                         closure.basis[static_cast<std::size_t>(b)].matrix);
      ad[static_cast<std::size_t>(a)].col(b) = flat.transpose() * Eigen::Map<const Eigen::VectorXd>(br.data(), n * n);
    }
  Eigen::MatrixXd k(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a; b < d; ++b)
      k(a, b) = k(b, a) = (ad[static_cast<std::size_t>(a)] * ad[static_cast<std::size_t>(b)]).trace();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol * scale) ++sig.positive;
    else if (ev(i) < -tol * scale) ++sig.negative;
    else ++sig.zero;
  }
  return sig;
}

std::vector<GradedOperator> lefschetz_generators(const CohomologyRing& ring, const std::vector<Vec>& etas) {
  std::vector<GradedOperator> out;
  for (const auto& eta : etas) {
    out.push_back(lefschetz_e(ring, eta));
    try {
      out.push_back(lefschetz_f(ring, eta));
    } catch (const DomainError&) {
    }
  }
  return out;
}

Rational fujiki_constant(const CohomologyRing& ring, std::size_t samples, std::uint64_t seed) {
  const std::size_t r = ring.lattice().rank();
  samples = std::max(samples, 2 * r * r);
  Rng rng(seed);
  std::optional<Rational> c;
  std::vector<std::pair<QVector, std::pair<Rational, Rational>>> pending;  // samples seen before c was fixed
  auto check = [&](const QVector& a, const Rational& qm, const Rational& integral) {
    if (qm != *c * integral)
      throw DomainError("Fujiki relation violated at a = " + join(a) + ": q(a)^m = " + to_string(qm) +
                        ", c * int a^2m = " + to_string(*c * integral));
  };
  for (std::size_t s = 0; s < samples; ++s) {
    QVector a(r);
    for (auto& x : a) x = Rational(rng.integer(-5, 5));
    const QVector cls = ring.embed(a);
    QVector power = cls;
    for (int k = 1; k < 2 * ring.m(); ++k) power = ring.cup(power, cls);
    const Rational integral = ring.integrate(power);
    Rational qm = 1;
    const Rational qa = ring.lattice().q(a);
    for (int k = 0; k < ring.m(); ++k) qm *= qa;
    if (!c) {
      if (integral == 0) {
        pending.push_back({a, {qm, integral}});
        continue;
      }
      c = qm / integral;
      for (const auto& [pa, vals] : pending) check(pa, vals.first, vals.second);
    }
    check(a, qm, integral);
  }
  if (!c) throw DomainError("Fujiki constant undetermined: int a^2m vanished on every sample");
  return *c;
}

GradedOperator deligne_generator(const CohomologyRing& ring, const LieClosure& closure, const PeriodDomain& dom,
                                 const PositiveThreePlane& plane, const PeriodPoint& z, double tol) {
  if (ring.lattice_indices().size() != dom.rank()) throw DomainError("ring lattice block differs from the period lattice");
  if (!dom.conic_contains(plane, z)) throw DomainError("z is not on the conic of P");
  const Eigen::MatrixXd& g = dom.gram();
  const Eigen::Vector3d ca = plane.frame.transpose() * (g * z.re());
  const Eigen::Vector3d cb = plane.frame.transpose() * (g * z.im());
  const Vec ell = plane.frame * ca.cross(cb).normalized();

  const auto n = static_cast<Eigen::Index>(ring.dim());
  auto embed = [&](const Vec& v) {
    Vec out = Vec::Zero(n);
    for (std::size_t t = 0; t < ring.lattice_indices().size(); ++t)
      out(static_cast<Eigen::Index>(ring.lattice_indices()[t])) = v(static_cast<Eigen::Index>(t));
    return out;
  };
  std::vector<std::pair<Vec, Vec>> constraints{{embed(z.re()), 2 * embed(z.im())},
                                               {embed(z.im()), -2 * embed(z.re())},
                                               {embed(ell), Vec::Zero(n)}};
  for (std::size_t i = 0; i < ring.dim(); ++i)
    if (ring.degrees()[i] == 0) constraints.push_back({Vec::Unit(n, static_cast<Eigen::Index>(i)), Vec::Zero(n)});

  std::vector<const GradedOperator*> g0;
  for (const auto& b : closure.basis)
    if (b.degree == 0) g0.push_back(&b);
  if (g0.empty()) throw DomainError("closure has no degree-0 part");
  const auto rows = static_cast<Eigen::Index>(constraints.size()) * n;
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(g0.size()));
  Eigen::VectorXd rhs(rows);
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const auto off = static_cast<Eigen::Index>(c) * n;
    rhs.segment(off, n) = constraints[c].second;
    for (std::size_t k = 0; k < g0.size(); ++k)
      a.block(off, static_cast<Eigen::Index>(k), n, 1) = g0[k]->matrix * constraints[c].first;
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(rhs);
  const double res = (a * x - rhs).norm() / rhs.norm();
  if (!(res <= tol)) throw NumericalError("Deligne generator solve inconsistent (residual " + std::to_string(res) + ")");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < g0.size(); ++k) m += x(static_cast<Eigen::Index>(k)) * g0[k]->matrix;
  return {m, 0};
}

std::vector<std::complex<double>> block_spectrum(const CohomologyRing& ring, const GradedOperator& x) {
  const auto& idx = ring.lattice_indices();
  const auto r = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd b(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      b(i, j) = x.matrix(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                         static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(b, false).eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](auto p, auto q) {
    return p.imag() != q.imag() ? p.imag() < q.imag() : p.real() < q.real();
  });
  return out;
}

HodgeDecomposition hodge_decompose(const PeriodDomain& dom, const PeriodPoint& z) {
  const Eigen::MatrixXd& g = dom.gram();
  const auto r = static_cast<Eigen::Index>(dom.rank());
  HodgeDecomposition out;
  out.h20 = z.sigma();
  out.h02 = out.h20.conjugate();

  Eigen::MatrixXd c(2, r);
  c.row(0) = (g * z.re()).transpose();
  c.row(1) = (g * z.im()).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  const Eigen::MatrixXd k = svd.matrixV().rightCols(r - 2);
  out.h11 = k.cast<std::complex<double>>();

  const Eigen::MatrixXcd gc = g.cast<std::complex<double>>();
  auto h = [&](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) { return x.dot(gc * y); };  // conj(x)^T G y
  const Eigen::VectorXcd s = out.h20 / out.h20.norm(), sb = out.h02 / out.h02.norm();
  double orth = std::abs(h(s, sb));
  for (Eigen::Index j = 0; j < out.h11.cols(); ++j) {
    orth = std::max(orth, std::abs(h(s, out.h11.col(j))));
    orth = std::max(orth, std::abs(h(sb, out.h11.col(j))));
  }
  out.orthogonality_residual = orth;

  Eigen::Matrix2cd m;
  m << h(s, s), h(s, sb), h(sb, s), h(sb, sb);
  out.min_h_on_h20_h02 = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(m).eigenvalues().minCoeff();

  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k.transpose() * g * k).eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::size_t zero = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-9 * scale) ++out.h11_positive;
    else if (ev(i) < -1e-9 * scale) ++out.h11_negative;
    else ++zero;
  }
  const Signature sig = dom.lattice().signature();
  if (zero != 0 || out.h11_positive != 1 || out.h11_negative != sig.negative || out.orthogonality_residual > dom.tolerances().orth ||
      !(out.min_h_on_h20_h02 > 0))
    throw NumericalError("Hodge inertia check failed");
  return out;
}

}  // namespace hkt
