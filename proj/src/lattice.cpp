#include "hkt/lattice.hpp"

#include <numeric>
#include <stdexcept>

#include "hkt/errors.hpp"

namespace hkt {

QuadLattice::QuadLattice(std::vector<std::vector<std::int64_t>> gram) : gram_(std::move(gram)) {
  if (gram_.empty()) throw DomainError("lattice of rank 0");
  gram_q_ = QMatrix::from_rows(gram_);
  if (gram_q_.rows() != gram_q_.cols()) throw DomainError("gram matrix not square");
  if (!gram_q_.is_symmetric()) throw DomainError("gram matrix not symmetric");
  det_ = hkt::determinant(gram_q_);
  if (sgn(det_) == 0) throw DomainError("degenerate form");
  gram_inv_ = inverse(gram_q_);
  signature_ = signature_of(gram_q_);
}

Rational QuadLattice::b(const QVector& x, const QVector& y) const {
  if (x.size() != rank() || y.size() != rank()) throw DomainError("vector rank mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < rank(); ++j)
      if (gram_[i][j] != 0) s += x[i] * gram_q_(i, j) * y[j];
  }
  return s;
}

Signature signature_of(const QMatrix& symmetric) {
  const Inertia in = inertia(symmetric);
  if (in.zero != 0) throw DomainError("degenerate form");
  return {in.positive, in.negative};
}

Signature signature(const QuadLattice& lattice) { return signature_of(lattice.gram_q()); }

namespace lattices {

QuadLattice hyperbolic_plane() { return QuadLattice(IntMatrix{{0, 1}, {1, 0}}); }

QuadLattice e8() {
  // Cartan matrix, Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4.
  std::vector<std::vector<std::int64_t>> g(8, std::vector<std::int64_t>(8, 0));
  for (int i = 0; i < 8; ++i) g[i][i] = 2;
  const int edges[][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
  for (const auto& e : edges) g[e[0]][e[1]] = g[e[1]][e[0]] = -1;
  return QuadLattice(std::move(g));
}

QuadLattice rank_one(std::int64_t k) { return QuadLattice(IntMatrix{{k}}); }

QuadLattice direct_sum(const std::vector<QuadLattice>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.rank();
  std::vector<std::vector<std::int64_t>> g(n, std::vector<std::int64_t>(n, 0));
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rank(); ++i)
      for (std::size_t j = 0; j < p.rank(); ++j) g[off + i][off + j] = p.gram()[i][j];
    off += p.rank();
  }
  return QuadLattice(std::move(g));
}

QuadLattice rescale(const QuadLattice& lattice, std::int64_t s) {
  if (s == 0) throw DomainError("rescale by zero");
  auto g = lattice.gram();
  for (auto& row : g)
    for (auto& x : row) x *= s;
  return QuadLattice(std::move(g));
}

QuadLattice k3() {
  const auto u = hyperbolic_plane();
  const auto e8m = rescale(e8(), -1);
  return direct_sum({u, u, u, e8m, e8m});
}

QuadLattice by_name(const std::string& name) {
  if (name == "U") return hyperbolic_plane();
  if (name == "E8") return e8();
  if (name == "U3") return direct_sum({hyperbolic_plane(), hyperbolic_plane(), hyperbolic_plane()});
  if (name == "K3") return k3();
  if (name.rfind("rank1(", 0) == 0 && name.back() == ')') {
    return rank_one(std::stoll(name.substr(6, name.size() - 7)));
  }
  throw DomainError("unknown standard lattice '" + name + "'");
}

}  // namespace lattices

WallForm WallForm::dual_to(const QuadLattice& lattice, const QVector& v) { return {lattice.dual_of(v)}; }

bool WallForm::indivisible() const {
  Integer g = 0;
  for (const auto& c : coords) {
    if (c.get_den() != 1) return false;
    g = gcd(g, c.get_num());
  }
  return g == 1;
}

Rational dual_value(const QuadLattice& lattice, const WallForm& delta) {
  if (delta.coords.size() != lattice.rank()) throw DomainError("wall form rank mismatch");
  return dot(delta.coords, lattice.gram_inverse() * delta.coords);
}

NegativityReport negativity(const QuadLattice& lattice, const WallForm& delta) {
  if (delta.coords.size() != lattice.rank()) throw DomainError("wall form rank mismatch");
  if (is_zero(delta.coords)) throw DomainError("zero linear form");
  const auto sig = lattice.signature();
  if (sig.positive != 3) throw DomainError("negative forms need signature (3, n)");

  NegativityReport rep;
  rep.dual_value = dual_value(lattice, delta);

  QMatrix row(1, lattice.rank());
  for (std::size_t j = 0; j < lattice.rank(); ++j) row(0, j) = delta.coords[j];
  const auto kernel = kernel_basis(row);
  const std::size_t k = kernel.size();
  QMatrix restricted(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) restricted(i, j) = restricted(j, i) = lattice.b(kernel[i], kernel[j]);
  const Inertia in = inertia(restricted);
  rep.kernel_positive = in.positive;
  rep.kernel_negative = in.negative;
  rep.kernel_zero = in.zero;

  rep.negative = sgn(rep.dual_value) < 0;
  const bool by_kernel = in.zero == 0 && in.positive == 3 && in.negative + 1 == sig.negative;
  if (rep.negative != by_kernel)
    throw std::logic_error("negative-form criteria disagree: dual value " + to_string(rep.dual_value));
  return rep;
}

bool is_negative_form(const QuadLattice& lattice, const WallForm& delta) {
  return negativity(lattice, delta).negative;
}

Reflection reflection(const QuadLattice& lattice, const QVector& v) {
  const std::size_t n = lattice.rank();
  if (v.size() != n) throw DomainError("vector rank mismatch");
  const Rational qv = lattice.q(v);
  if (sgn(qv) == 0) throw DomainError("isotropic reflection vector");
  const QVector gv = lattice.dual_of(v);
  Reflection r;
  r.mirror = v;
  r.matrix = QMatrix::identity(n);
  const Rational f = Rational(2) / qv;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.matrix(i, j) -= f * v[i] * gv[j];
  r.integral = r.matrix.is_integral();
  return r;
}

bool is_isometry(const QuadLattice& lattice, const QMatrix& g) {
  if (g.rows() != lattice.rank() || g.cols() != lattice.rank()) return false;
  return g.transpose() * lattice.gram_q() * g == lattice.gram_q();
}

namespace {

// g <- r_v g without forming r_v.
void reflect_left(const QuadLattice& lattice, QMatrix& g, const QVector& v) {
  const std::size_t n = g.rows();
  const Rational f = Rational(2) / lattice.q(v);
  const QVector gv = lattice.dual_of(v);
  QVector w(n);  // (G v)^T g
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (sgn(gv[k]) != 0) w[j] += gv[k] * g(k, j);
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(v[i]) == 0) continue;
    for (std::size_t j = 0; j < n; ++j) g(i, j) -= f * v[i] * w[j];
  }
}

// Basis of span(basis) intersected with x^perp; x is anisotropic and lies in the span.
std::vector<QVector> orthogonal_slice(const QuadLattice& lattice, const std::vector<QVector>& basis,
                                      const QVector& x) {
  std::size_t pivot = basis.size();
  Rational pivot_pairing;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    pivot_pairing = lattice.b(basis[i], x);
    if (sgn(pivot_pairing) != 0) {
      pivot = i;
      break;
    }
  }
  if (pivot == basis.size()) throw std::logic_error("anisotropic vector orthogonal to its own span");
  std::vector<QVector> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i == pivot) continue;
    out.push_back(sub(basis[i], scaled(basis[pivot], lattice.b(basis[i], x) / pivot_pairing)));
  }
  return out;
}

}  // namespace

SpinorDecomposition spinor_decomposition(const QuadLattice& lattice, const QMatrix& g,
                                         const std::vector<std::size_t>& order) {
  const std::size_t n = lattice.rank();
  if (!is_isometry(lattice, g)) throw DomainError("matrix is not an isometry of the lattice");
  std::vector<std::size_t> perm = order;
  if (perm.empty()) {
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
  }
  if (perm.size() != n) throw DomainError("order must be a permutation of the coordinates");
  {
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
      if (p >= n || seen[p]) throw DomainError("order must be a permutation of the coordinates");
      seen[p] = true;
    }
  }

  // Induction on a nondegenerate subspace V preserved by cur, with cur = id on V^perp.
  std::vector<QVector> basis;
  for (std::size_t i = 0; i < n; ++i) {
    QVector e(n);
    e[perm[i]] = 1;
    basis.push_back(std::move(e));
  }
  SpinorDecomposition out;
  QMatrix cur = g;
  while (!basis.empty()) {
    bool identity_on_v = true;
    for (const auto& v : basis)
      if (!(cur * v == v)) {
        identity_on_v = false;
        break;
      }
    if (identity_on_v) break;

    // An anisotropic x in V: some basis vector or pairwise sum works since V is nondegenerate.
    QVector x;
    for (std::size_t i = 0; i < basis.size() && x.empty(); ++i)
      if (sgn(lattice.q(basis[i])) != 0) x = basis[i];
    for (std::size_t i = 0; i < basis.size() && x.empty(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        QVector s = add(basis[i], basis[j]);
        if (sgn(lattice.q(s)) != 0) {
          x = std::move(s);
          break;
        }
      }
    if (x.empty()) throw std::logic_error("degenerate subspace in Cartan-Dieudonne recursion");

    const QVector gx = cur * x;
    if (!(gx == x)) {
      const QVector minus = sub(gx, x);
      if (sgn(lattice.q(minus)) != 0) {
        // r_{gx - x} swaps gx and x.
        reflect_left(lattice, cur, minus);
        out.mirrors.push_back(minus);
      } else {
        // Isotropic mirror: q(gx - x) + q(gx + x) = 4 q(x), so r_x r_{gx + x} sends gx to x.
        const QVector plus = add(gx, x);
        reflect_left(lattice, cur, plus);
        reflect_left(lattice, cur, x);
        out.mirrors.push_back(plus);
        out.mirrors.push_back(x);
      }
    }
    basis = orthogonal_slice(lattice, basis, x);
  }
  // cur = r_{v_k} ... r_{v_1} g = id, so g = r_{v_1} ... r_{v_k}.
  int sign = 1;
  for (const auto& v : out.mirrors)
    if (sgn(lattice.q(v)) > 0) sign = -sign;  // sign(-q(v))
  out.sign = sign;
  return out;
}

int spinor_norm_sign(const QuadLattice& lattice, const QMatrix& g, const std::vector<std::size_t>& order) {
  return spinor_decomposition(lattice, g, order).sign;
}

Isometry::Isometry(const QuadLattice& lattice, QMatrix matrix) : matrix_(std::move(matrix)) {
  if (!matrix_.is_integral()) throw DomainError("isometry must be integral");
  if (!is_isometry(lattice, matrix_)) throw DomainError("matrix is not an isometry of the lattice");
  const Rational d = hkt::determinant(matrix_);
  if (d != 1 && d != -1) throw DomainError("isometry determinant must be +-1");
}

bool in_O_sharp(const QuadLattice& lattice, const QMatrix& g) { return spinor_norm_sign(lattice, g) == 1; }

}  // namespace hkt
