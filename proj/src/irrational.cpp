#include "hkt/irrational.hpp"

#include <cmath>
#include <limits>

#include "hkt/errors.hpp"

namespace hkt {

namespace {

using Wide = __int128;
using Real = long double;

// Relation lattice: row j is (e_j | weight * (w_1[j], ..., w_k[j])). Integer
// parts are kept exactly; real tails are recomputed from them on every update.
class RelationLattice {
 public:
  RelationLattice(const std::vector<Vec>& vectors, Real weight)
      : vectors_(vectors), weight_(weight), dim_(static_cast<std::size_t>(vectors.front().size())) {
    coeffs_.assign(dim_, std::vector<Wide>(dim_, 0));
    tails_.assign(dim_, std::vector<Real>(vectors.size(), 0));
    for (std::size_t j = 0; j < dim_; ++j) {
      coeffs_[j][j] = 1;
      refresh_tail(j);
    }
  }

  void reduce(Real delta = 0.99L) {
    if (dim_ < 2) return;
    mu_.assign(dim_, std::vector<Real>(dim_, 0));
    r_.assign(dim_, std::vector<Real>(dim_, 0));
    norms_.assign(dim_, 0);
    gso_row(0);
    std::size_t k = 1;
    std::size_t guard = 0;
    const std::size_t max_iterations = 200000;
    while (k < dim_) {
      if (++guard > max_iterations) throw NumericalError("LLL did not converge");
      for (int pass = 0; pass < 16; ++pass) {
        gso_row(k);
        bool changed = false;
        for (std::size_t jj = k; jj-- > 0;) {
          const Real m = std::nearbyint(mu_[k][jj]);
          if (m == 0) continue;
          changed = true;
          const Wide mi = static_cast<Wide>(m);
          for (std::size_t t = 0; t < dim_; ++t) coeffs_[k][t] -= mi * coeffs_[jj][t];
          for (std::size_t i = 0; i < jj; ++i) mu_[k][i] -= m * mu_[jj][i];
          mu_[k][jj] -= m;
        }
        if (!changed) break;
        refresh_tail(k);
      }
      gso_row(k);
      if (norms_[k] < (delta - mu_[k][k - 1] * mu_[k][k - 1]) * norms_[k - 1]) {
        std::swap(coeffs_[k], coeffs_[k - 1]);
        std::swap(tails_[k], tails_[k - 1]);
        if (k > 1) {
          --k;
        } else {
          gso_row(0);
        }
      } else {
        ++k;
      }
    }
  }

  std::size_t size() const { return dim_; }
  const std::vector<Wide>& coeffs(std::size_t j) const { return coeffs_[j]; }

 private:
  void refresh_tail(std::size_t j) {
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
      Real s = 0;
      for (std::size_t t = 0; t < dim_; ++t)
        if (coeffs_[j][t] != 0) s += static_cast<Real>(coeffs_[j][t]) * static_cast<Real>(vectors_[i](t));
      tails_[j][i] = weight_ * s;
    }
  }

  Real inner(std::size_t a, std::size_t b) const {
    Real s = 0;
    for (std::size_t t = 0; t < dim_; ++t) s += static_cast<Real>(coeffs_[a][t]) * static_cast<Real>(coeffs_[b][t]);
    for (std::size_t i = 0; i < tails_[a].size(); ++i) s += tails_[a][i] * tails_[b][i];
    return s;
  }

  void gso_row(std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      Real rkj = inner(k, j);
      for (std::size_t i = 0; i < j; ++i) rkj -= mu_[j][i] * r_[k][i];
      r_[k][j] = rkj;
      mu_[k][j] = rkj / norms_[j];
    }
    Real nk = inner(k, k);
    for (std::size_t j = 0; j < k; ++j) nk -= mu_[k][j] * r_[k][j];
    norms_[k] = nk;
  }

  const std::vector<Vec>& vectors_;
  Real weight_;
  std::size_t dim_;
  std::vector<std::vector<Wide>> coeffs_;
  std::vector<std::vector<Real>> tails_;
  std::vector<std::vector<Real>> mu_, r_;
  std::vector<Real> norms_;
};

Real relation_residual(const std::vector<Vec>& vectors, const IntVector& delta) {
  Real worst = 0;
  for (const auto& w : vectors) {
    Real s = 0;
    for (std::size_t t = 0; t < delta.size(); ++t) s += static_cast<Real>(delta[t]) * static_cast<Real>(w(t));
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

void check_input(const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw DomainError("empty input");
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size()) throw DomainError("vectors of different length");
    if (!v.allFinite()) throw DomainError("non-finite vector entries");
  }
  if (vectors.front().size() == 0) throw DomainError("empty input");
}

std::size_t numerical_rank(const std::vector<Vec>& vectors) {
  Eigen::MatrixXd m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-12 * top && top > 0) ++r;
  return r;
}

}  // namespace

std::vector<IntVector> find_integer_relations(const std::vector<Vec>& vectors, const RelationSearch& search) {
  check_input(vectors);
  if (search.height <= 0) return {};
  if (!(search.tol > 0)) throw DomainError("tolerance must be positive");
  const auto dim = static_cast<std::size_t>(vectors.front().size());
  double scale = 0;
  for (const auto& v : vectors) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  if (scale == 0) scale = 1;
  // Relations of height <= H have integer part at most H sqrt(dim); anything with
  // residual >= tol is pushed a factor 1e3 beyond that.
  const Real weight = 1e3L * static_cast<Real>(search.height) * std::sqrt(static_cast<Real>(dim)) /
                      static_cast<Real>(search.tol);
  RelationLattice lat(vectors, weight);
  lat.reduce();

  std::vector<IntVector> out;
  for (std::size_t j = 0; j < lat.size(); ++j) {
    const auto& c = lat.coeffs(j);
    bool small = true;
    IntVector delta(dim);
    for (std::size_t t = 0; t < dim && small; ++t) {
      const Wide x = c[t] < 0 ? -c[t] : c[t];
      if (x > search.height) small = false;
      delta[t] = static_cast<std::int64_t>(c[t]);
    }
    if (!small) continue;
    if (relation_residual(vectors, delta) < search.tol) {
      // Sign convention: first nonzero coefficient positive.
      for (auto x : delta)
        if (x != 0) {
          if (x < 0)
            for (auto& y : delta) y = -y;
          break;
        }
      out.push_back(std::move(delta));
    }
  }
  return out;
}

RationalClosure rational_closure_exact(const std::vector<QVector>& vectors) {
  if (vectors.empty() || vectors.front().empty()) throw DomainError("empty input");
  const QMatrix m = QMatrix::from_rows(vectors);
  RationalClosure out;
  out.exact = true;
  out.ambient = m.cols();
  for (const auto& k : kernel_basis(m)) out.relations.push_back(primitive_integer_vector(k));
  out.dimension = out.ambient - out.relations.size();
  return out;
}

RationalClosure rational_closure_detect(const std::vector<Vec>& vectors, const RelationSearch& search) {
  check_input(vectors);
  RationalClosure out;
  out.ambient = static_cast<std::size_t>(vectors.front().size());
  for (const auto& r : find_integer_relations(vectors, search)) {
    std::vector<Integer> z;
    for (auto x : r) z.emplace_back(static_cast<long>(x));
    out.relations.push_back(std::move(z));
  }
  out.dimension = out.ambient - out.relations.size();
  return out;
}

IrrationalityVerdict is_fully_irrational(const std::vector<Vec>& vectors, const RelationSearch& search) {
  check_input(vectors);
  IrrationalityVerdict v;
  if (numerical_rank(vectors) == static_cast<std::size_t>(vectors.front().size())) {
    v.fully_irrational = true;
    return v;
  }
  const auto rel = find_integer_relations(vectors, search);
  if (rel.empty()) {
    v.fully_irrational = true;
    return v;
  }
  std::vector<Integer> w;
  for (auto x : rel.front()) w.emplace_back(static_cast<long>(x));
  v.witness = std::move(w);
  v.witness_residual = static_cast<double>(relation_residual(vectors, rel.front()));
  return v;
}

PicardVerdict picard_trivial(const PeriodDomain& dom, const PeriodPoint& z, const RelationSearch& search) {
  PicardVerdict v;
  if (search.height <= 0) return v;
  const std::vector<Vec> functionals{dom.gram() * z.re(), dom.gram() * z.im()};
  const auto rel = find_integer_relations(functionals, search);
  if (rel.empty()) return v;
  v.trivial = false;
  v.witness = rel.front();
  v.witness_residual = static_cast<double>(relation_residual(functionals, rel.front()));
  return v;
}

}  // namespace hkt
