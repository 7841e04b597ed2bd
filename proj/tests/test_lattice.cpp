#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "hkt/errors.hpp"
#include "hkt/lattice.hpp"

using namespace hkt;

namespace {

QVector qv(std::initializer_list<long> xs) {
  QVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

QuadLattice u3() { return lattices::by_name("U3"); }

// Floating-point eigenvalue sign count; test-only oracle.
Signature eigen_signature(const std::vector<std::vector<std::int64_t>>& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = static_cast<double>(g[i][j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Signature s;
  for (Eigen::Index i = 0; i < n; ++i) (es.eigenvalues()(i) > 0 ? s.positive : s.negative) += 1;
  return s;
}

QMatrix random_reflection_product(const QuadLattice& l, std::mt19937_64& rng, int factors,
                                  int* expected_sign) {
  std::uniform_int_distribution<int> coord(-2, 2);
  QMatrix g = QMatrix::identity(l.rank());
  int sign = 1;
  int made = 0;
  while (made < factors) {
    QVector v(l.rank());
    for (auto& x : v) x = coord(rng);
    const Rational qv = l.q(v);
    if (qv != 2 && qv != -2) continue;
    const auto r = reflection(l, v);
    REQUIRE(r.integral);
    g = g * r.matrix;
    if (qv > 0) sign = -sign;
    ++made;
  }
  *expected_sign = sign;
  return g;
}

}  // namespace

TEST_CASE("signature examples") {
  CHECK(signature(lattices::hyperbolic_plane()) == Signature{1, 1});
  CHECK(signature(QuadLattice(IntMatrix{{2, 0, 0}, {0, -2, 0}, {0, 0, -2}})) == Signature{1, 2});
  const auto k3 = lattices::k3();
  CHECK(k3.rank() == 22);
  CHECK(signature(k3) == Signature{3, 19});
  CHECK(k3.determinant() == -1);
  CHECK(signature(lattices::e8()) == Signature{8, 0});
  CHECK(lattices::e8().determinant() == 1);
}

TEST_CASE("degenerate forms are rejected") {
  CHECK_THROWS_WITH_AS(QuadLattice(IntMatrix{{1, 1}, {1, 1}}), "degenerate form", DomainError);
  CHECK_THROWS_AS(QuadLattice(IntMatrix{{1, 2}, {3, 1}}), DomainError);
}

TEST_CASE("standard lattices") {
  CHECK(lattices::rank_one(-2).gram() == std::vector<std::vector<std::int64_t>>{{-2}});
  const auto s = lattices::direct_sum({lattices::hyperbolic_plane(), lattices::hyperbolic_plane(),
                                       lattices::hyperbolic_plane()});
  CHECK(s.rank() == 6);
  CHECK(signature(s) == Signature{3, 3});
  CHECK_THROWS_AS(lattices::rescale(s, 0), DomainError);
  CHECK(lattices::rescale(lattices::rank_one(3), -2).gram()[0][0] == -6);
  CHECK(lattices::by_name("rank1(5)").gram()[0][0] == 5);
  CHECK_THROWS_AS(lattices::by_name("nope"), DomainError);
}

TEST_CASE("signature agrees with the eigenvalue oracle on random matrices") {
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<int> entry(-9, 9);
  int tested = 0;
  while (tested < 200) {
    const int n = 1 + static_cast<int>(rng() % 7);
    std::vector<std::vector<std::int64_t>> g(n, std::vector<std::int64_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g[i][j] = g[j][i] = entry(rng);
    if (sgn(determinant(QMatrix::from_rows(g))) == 0) continue;
    CHECK(signature(QuadLattice(g)) == eigen_signature(g));
    ++tested;
  }
}

TEST_CASE("dual values") {
  const auto u = lattices::hyperbolic_plane();
  CHECK(dual_value(u, WallForm{{-1, 1}}) == -2);
  CHECK(dual_value(u3(), WallForm{{-1, 1, 0, 0, 0, 0}}) == -2);
  CHECK(dual_value(lattices::rank_one(2), WallForm{{1}}) == Rational(1, 2));
}

TEST_CASE("negative forms") {
  const auto l = u3();
  const auto d1 = WallForm::dual_to(l, qv({1, -1, 0, 0, 0, 0}));
  const auto rep = negativity(l, d1);
  CHECK(rep.negative);
  CHECK(rep.kernel_positive == 3);
  CHECK(rep.kernel_negative == 2);
  CHECK_FALSE(is_negative_form(l, WallForm::dual_to(l, qv({1, 1, 0, 0, 0, 0}))));
  CHECK_FALSE(is_negative_form(l, WallForm::dual_to(l, qv({1, 0, 0, 0, 0, 0}))));
  CHECK_THROWS_AS(is_negative_form(l, WallForm{QVector(6)}), DomainError);
  CHECK_THROWS_AS(is_negative_form(lattices::hyperbolic_plane(), WallForm{{1, 0}}), DomainError);
}

TEST_CASE("negativity sweep: dual value sign matches kernel inertia") {
  // negativity() throws logic_error if the two criteria ever disagree.
  const auto l = u3();
  long count = 0;
  QVector c(6);
  std::vector<int> idx(6, -3);
  for (;;) {
    for (int i = 0; i < 6; ++i) c[i] = idx[i];
    if (!is_zero(c)) {
      const auto rep = negativity(l, WallForm{c});
      const bool kernel_ok = rep.kernel_zero == 0 && rep.kernel_positive == 3 && rep.kernel_negative == 2;
      CHECK(rep.negative == kernel_ok);
      ++count;
    }
    int k = 0;
    while (k < 6 && ++idx[k] > 3) idx[k++] = -3;
    if (k == 6) break;
  }
  CHECK(count == 7 * 7 * 7 * 7 * 7 * 7 - 1);
}

TEST_CASE("wall form indivisibility") {
  CHECK(WallForm{{2, 3}}.indivisible());
  CHECK_FALSE(WallForm{{2, 4}}.indivisible());
  CHECK_FALSE(WallForm{{Rational(1, 2), 1}}.indivisible());
}

TEST_CASE("reflections") {
  const auto u = lattices::hyperbolic_plane();
  const auto r = reflection(u, qv({1, -1}));
  CHECK(r.matrix == QMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{0, 1}, {1, 0}}));
  CHECK(r.integral);
  CHECK(reflection(lattices::rank_one(2), qv({1})).matrix ==
        QMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{-1}}));
  CHECK_THROWS_WITH_AS(reflection(u, qv({1, 0})), "isotropic reflection vector", DomainError);

  const auto k3 = lattices::k3();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-3, 3);
  for (int t = 0; t < 20; ++t) {
    QVector v(22);
    for (auto& x : v) x = coord(rng);
    if (sgn(k3.q(v)) == 0) continue;
    const auto rv = reflection(k3, v);
    CHECK(rv.matrix * v == scaled(v, -1));
    CHECK(rv.matrix * rv.matrix == QMatrix::identity(22));
    CHECK(is_isometry(k3, rv.matrix));
  }
  // Non-integral reflection: q(v) = 4 in U.
  CHECK_FALSE(reflection(u, qv({2, 1})).integral);
}

TEST_CASE("spinor norm examples") {
  const auto l = u3();
  CHECK(spinor_norm_sign(l, QMatrix::identity(6)) == 1);
  const auto rneg = reflection(l, qv({1, -1, 0, 0, 0, 0}));
  const auto rpos = reflection(l, qv({1, 1, 0, 0, 0, 0}));
  CHECK(spinor_norm_sign(l, rneg.matrix) == 1);
  CHECK(spinor_norm_sign(l, rpos.matrix) == -1);
  CHECK(in_O_sharp(l, rneg.matrix));
  CHECK_FALSE(in_O_sharp(l, rneg.matrix * rpos.matrix));
  CHECK_THROWS_AS(spinor_norm_sign(l, QMatrix::identity(6) + QMatrix::identity(6)), DomainError);
}

TEST_CASE("spinor decomposition reproduces the isometry") {
  const auto l = lattices::k3();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    int expected = 0;
    const auto g = random_reflection_product(l, rng, 1 + t % 5, &expected);
    const auto dec = spinor_decomposition(l, g);
    QMatrix prod = QMatrix::identity(22);
    for (const auto& v : dec.mirrors) prod = prod * reflection(l, v).matrix;
    CHECK(prod == g);
    CHECK(dec.sign == expected);
    CHECK(dec.mirrors.size() <= 2 * l.rank());
  }
}

TEST_CASE("spinor norm is a homomorphism and decomposition independent") {
  const auto l = u3();
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    int sg = 0, sh = 0;
    const auto g = random_reflection_product(l, rng, 1 + static_cast<int>(rng() % 4), &sg);
    const auto h = random_reflection_product(l, rng, 1 + static_cast<int>(rng() % 4), &sh);
    CHECK(spinor_norm_sign(l, g * h) == spinor_norm_sign(l, g) * spinor_norm_sign(l, h));
    std::vector<std::size_t> order{5, 3, 1, 0, 2, 4};
    CHECK(spinor_norm_sign(l, g, order) == spinor_norm_sign(l, g));
    CHECK(spinor_norm_sign(l, g) == sg);
  }
}

TEST_CASE("exceptional isometries need the auxiliary reflection") {
  // Eichler transvection x -> x + b(x,f1) e2 - b(x,e2) f1 in U^2: image of g - 1 is isotropic.
  const auto l = lattices::direct_sum({lattices::hyperbolic_plane(), lattices::hyperbolic_plane()});
  QVector e1 = qv({1, 0, 0, 0}), f1 = qv({0, 1, 0, 0}), e2 = qv({0, 0, 1, 0});
  QMatrix g(4, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    QVector x(4);
    x[j] = 1;
    QVector y = add(x, scaled(e2, l.b(x, f1)));
    y = sub(y, scaled(f1, l.b(x, e2)));
    for (std::size_t i = 0; i < 4; ++i) g(i, j) = y[i];
  }
  REQUIRE(is_isometry(l, g));
  const auto dec = spinor_decomposition(l, g);
  QMatrix prod = QMatrix::identity(4);
  for (const auto& v : dec.mirrors) prod = prod * reflection(l, v).matrix;
  CHECK(prod == g);
  CHECK(dec.sign == 1);  // unipotent, connected to the identity
}

TEST_CASE("isometry wrapper validates") {
  const auto l = u3();
  CHECK_NOTHROW(Isometry(l, reflection(l, qv({1, -1, 0, 0, 0, 0})).matrix));
  CHECK_THROWS_AS(Isometry(l, reflection(l, qv({2, 1, 0, 0, 0, 0})).matrix), DomainError);
}
