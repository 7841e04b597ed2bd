#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hkt/errors.hpp"
#include "hkt/llv.hpp"
#include "hkt/sampling.hpp"

using namespace hkt;

namespace {

const CohomologyRing& k3() {
  static const CohomologyRing ring = CohomologyRing::k3();
  return ring;
}

Vec diag_u(int i) {
  Vec v = Vec::Zero(22);
  v(2 * i) = v(2 * i + 1) = 1 / std::sqrt(2.0);
  return v;
}

Vec random_positive_eta(Rng& rng, const PeriodDomain& dom) {
  for (;;) {
    Vec v = rng.normal_vector(22);
    v.head(6) *= 4;
    if (dom.q(v) > 0.5) return v;
  }
}

std::vector<StructureConstant> k3_constants() { return k3().constants(); }

}  // namespace

TEST_CASE("K3 ring data") {
  const auto& r = k3();
  CHECK(r.dim() == 24);
  CHECK(r.m() == 1);
  QVector eta(22);
  eta[0] = eta[1] = 1;
  const QVector e = r.embed(eta);
  const QVector sq = r.cup(e, e);
  CHECK(sq[23] == 2);
  CHECK(r.integrate(sq) == 2);
}

TEST_CASE("ring validation rejects bad data") {
  const auto& r = k3();
  auto sc = k3_constants();
  sc.push_back({1, 2, 23, 1});  // breaks symmetry of b_1 b_2
  CHECK_THROWS_WITH_AS(CohomologyRing(1, r.degrees(), sc, r.integration(), r.lattice_indices(), r.lattice()),
                       doctest::Contains("graded commutativity"), DomainError);
  auto sc2 = k3_constants();
  sc2.push_back({1, 1, 0, 1});
  CHECK_THROWS_WITH_AS(CohomologyRing(1, r.degrees(), sc2, r.integration(), r.lattice_indices(), r.lattice()),
                       doctest::Contains("degree-additive"), DomainError);
  auto integ = r.integration();
  integ[23] = 0;
  CHECK_THROWS_WITH_AS(CohomologyRing(1, r.degrees(), r.constants(), integ, r.lattice_indices(), r.lattice()),
                       "Poincare pairing is degenerate", DomainError);
  // Non-associative: 1 fails to be a unit for one class.
  std::vector<StructureConstant> sc3;
  for (const auto& s : r.constants())
    if (!(s.i == 0 && s.j == 5) && !(s.i == 5 && s.j == 0)) sc3.push_back(s);
  CHECK_THROWS_AS(CohomologyRing(1, r.degrees(), sc3, r.integration(), r.lattice_indices(), r.lattice()), DomainError);
}

TEST_CASE("lefschetz e and h") {
  const auto& r = k3();
  Vec eta = Vec::Zero(22);
  eta(0) = eta(1) = 1;
  const GradedOperator e = lefschetz_e(r, eta);
  CHECK(e.degree == 2);
  CHECK(off_block_residual(r, e.matrix, 2) == 0);
  CHECK(e.matrix(1, 0) == 1);
  CHECK(e.matrix(2, 0) == 1);
  // eta cup b_j = b(eta, e_j) pt: U-block gram [[0,1],[1,0]].
  CHECK(e.matrix(23, 1) == 1);
  CHECK(e.matrix(23, 2) == 1);
  CHECK(e.matrix.col(23).isZero());
  CHECK(lefschetz_e(r, Vec::Zero(22)).matrix.isZero());

  const GradedOperator h = grading_h(r);
  CHECK(h.matrix(0, 0) == 2);
  CHECK(h.matrix(5, 5) == 0);
  CHECK(h.matrix(23, 23) == -2);
  CHECK(h.matrix.trace() == 0);
  CHECK((bracket(h.matrix, e.matrix) + 2 * e.matrix).isZero());

  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Vec x = rng.normal_vector(22), y = rng.normal_vector(22);
    CHECK((lefschetz_e(r, x + y).matrix - lefschetz_e(r, x).matrix - lefschetz_e(r, y).matrix).norm() < 1e-12);
  }
}

TEST_CASE("lefschetz f: sl2 relations, scaling, isotropic failure") {
  const auto& r = k3();
  const PeriodDomain dom(r.lattice());
  const GradedOperator h = grading_h(r);
  Vec eta = Vec::Zero(22);
  eta(0) = eta(1) = 1;  // q = 2
  const GradedOperator f = lefschetz_f(r, eta);
  CHECK(f.degree == -2);
  CHECK(off_block_residual(r, f.matrix, -2) < 1e-14);
  CHECK(sl2_residuals(lefschetz_e(r, eta), h, f).max() < 1e-10);
  const GradedOperator f3 = lefschetz_f(r, 3 * eta);
  CHECK((f3.matrix - f.matrix / 3).norm() < 1e-12);

  Vec iso = Vec::Zero(22);
  iso(0) = 1;
  CHECK_THROWS_WITH_AS(lefschetz_f(r, iso), "hard Lefschetz fails", DomainError);
  QVector iso_q(22);
  iso_q[0] = 1;
  CHECK_THROWS_WITH_AS(lefschetz_f_exact(r, iso_q), "hard Lefschetz fails", DomainError);

  // Exact f agrees with the floating solve and satisfies [e, f] = -h exactly.
  QVector eq(22);
  eq[0] = eq[1] = 1;
  const ExactOperator ee = lefschetz_e_exact(r, eq), fe = lefschetz_f_exact(r, eq), he = grading_h_exact(r);
  CHECK((ee.matrix * fe.matrix - fe.matrix * ee.matrix + he.matrix).is_zero());
  CHECK((he.matrix * fe.matrix - fe.matrix * he.matrix) == fe.matrix + fe.matrix);
  for (std::size_t i = 0; i < 24; ++i)
    for (std::size_t j = 0; j < 24; ++j) CHECK(std::abs(fe.matrix(i, j).get_d() - f.matrix(i, j)) < 1e-12);

  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const Vec x = random_positive_eta(rng, dom);
    const auto res = sl2_residuals(lefschetz_e(r, x), h, lefschetz_f(r, x));
    REQUIRE(res.max() < 1e-9);
  }
}

TEST_CASE("closure: single triple and so(5) over a positive 3-plane") {
  const auto& r = k3();
  Vec eta = Vec::Zero(22);
  eta(0) = eta(1) = 1;
  const LieClosure tri = lie_closure({lefschetz_e(r, eta), lefschetz_f(r, eta), grading_h(r)});
  CHECK(tri.dimension == 3);

  const std::vector<Vec> plane{diag_u(0), diag_u(1), diag_u(2)};
  const LieClosure c = lie_closure(lefschetz_generators(r, plane));
  CHECK(c.dimension == 10);
  CHECK(c.degree_dimensions == std::map<int, std::size_t>{{-2, 3}, {0, 4}, {2, 3}});
  CHECK(c.residual < 1e-8);
  for (const auto& b : c.basis) CHECK(off_block_residual(r, b.matrix, b.degree) < 1e-12);

  const KillingSignature ks = killing_signature(c);
  CHECK(ks.positive == 4);
  CHECK(ks.negative == 6);
  CHECK(ks.zero == 0);

  // Same span in another basis, and permuted generators.
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    Eigen::Matrix3d mix;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mix(i, j) = rng.normal();
    REQUIRE(std::abs(mix.determinant()) > 1e-3);
    std::vector<Vec> mixed(3, Vec::Zero(22));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mixed[i] += mix(i, j) * plane[j];
    auto gens = lefschetz_generators(r, mixed);
    std::shuffle(gens.begin(), gens.end(), std::mt19937_64(t));
    const LieClosure m = lie_closure(gens);
    CHECK(m.dimension == 10);
    CHECK(m.degree_dimensions == c.degree_dimensions);
  }

  std::vector<ExactOperator> ex;
  for (int i = 0; i < 3; ++i) {
    QVector v(22);
    v[2 * i] = v[2 * i + 1] = 1;
    ex.push_back(lefschetz_e_exact(r, v));
    ex.push_back(lefschetz_f_exact(r, v));
  }
  const ExactLieClosure exact = lie_closure_exact(ex);
  CHECK(exact.dimension == 10);
  CHECK(exact.degree_dimensions == c.degree_dimensions);
}

TEST_CASE("closure cap and worker determinism") {
  const auto& r = k3();
  const std::vector<Vec> plane{diag_u(0), diag_u(1), diag_u(2)};
  const auto gens = lefschetz_generators(r, plane);
  LieOptions capped;
  capped.max_dimension = 5;
  CHECK_THROWS_WITH_AS(lie_closure(gens, capped), doctest::Contains("exceeds cap"), NumericalError);
  LieOptions threaded;
  threaded.workers = 3;
  std::vector<Vec> more = plane;
  for (int i = 6; i < 12; ++i) more.push_back(Vec::Unit(22, i));
  const auto g2 = lefschetz_generators(r, more);
  const LieClosure a = lie_closure(g2), b = lie_closure(g2, threaded);
  CHECK(a.dimension == b.dimension);
  REQUIRE(a.basis.size() == b.basis.size());
  for (std::size_t i = 0; i < a.basis.size(); ++i) CHECK(a.basis[i].matrix == b.basis[i].matrix);
}

TEST_CASE("fujiki constant") {
  const auto& r = k3();
  CHECK(fujiki_constant(r, 1000) == 1);
  auto integ = r.integration();
  integ[23] = 2;
  const CohomologyRing doubled(1, r.degrees(), r.constants(), integ, r.lattice_indices(), r.lattice());
  CHECK(fujiki_constant(doubled) == Rational(1, 2));
  auto sc = k3_constants();
  sc.push_back({7, 8, 23, 1});
  sc.push_back({8, 7, 23, 1});
  const CohomologyRing perturbed(1, r.degrees(), sc, r.integration(), r.lattice_indices(), r.lattice());
  CHECK_THROWS_WITH_AS(fujiki_constant(perturbed), doctest::Contains("Fujiki relation violated"), DomainError);
}

TEST_CASE("hodge decomposition on sampled K3 points") {
  const PeriodDomain dom(lattices::k3());
  for (std::uint64_t s = 0; s < 100; ++s) {
    const PeriodPoint z = sample_period_point(dom, s);
    const HodgeDecomposition hd = hodge_decompose(dom, z);
    CHECK(hd.h11.cols() == 20);
    CHECK(hd.h11_positive == 1);
    CHECK(hd.h11_negative == 19);
    CHECK(hd.min_h_on_h20_h02 > 0);
    CHECK(hd.orthogonality_residual < 1e-12);
    const Eigen::MatrixXcd g = dom.gram().cast<std::complex<double>>();
    CHECK(std::abs(hd.h20.dot(g * hd.h02)) < 1e-12);  // h_q(sigma, conj sigma) = q(sigma) conj
    const HodgeDecomposition bar = hodge_decompose(dom, dom.conjugate(z));
    CHECK((bar.h20 - hd.h02).norm() < 1e-12);
  }
}

TEST_CASE("deligne generator") {
  const auto& r = k3();
  const PeriodDomain dom(r.lattice());
  const std::vector<Vec> plane{diag_u(0), diag_u(1), diag_u(2)};
  const LieClosure c = lie_closure(lefschetz_generators(r, plane));
  const PositiveThreePlane p = dom.orient_three_plane(plane[0], plane[1], plane[2]);
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const Vec u = p.frame * Eigen::Vector3d(rng.normal_vector(3).normalized());
    const PeriodPoint z = dom.conic_point(p, u);
    const GradedOperator x = deligne_generator(r, c, dom, p, z);
    const auto spec = block_spectrum(r, x);
    REQUIRE(spec.size() == 22);
    CHECK(std::abs(spec.front() - std::complex<double>(0, -2)) < 1e-8);
    CHECK(std::abs(spec.back() - std::complex<double>(0, 2)) < 1e-8);
    for (std::size_t i = 1; i + 1 < spec.size(); ++i) CHECK(std::abs(spec[i]) < 1e-8);
    CHECK(x.matrix.row(0).norm() < 1e-10);
    CHECK(x.matrix.row(23).norm() < 1e-10);
    CHECK(x.matrix.col(0).norm() < 1e-10);
    CHECK(x.matrix.col(23).norm() < 1e-10);
    // X sigma = -2i sigma on the embedded block.
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(24);
    s.segment(1, 22) = z.sigma();
    CHECK((x.matrix.cast<std::complex<double>>() * s - std::complex<double>(0, -2) * s).norm() < 1e-8);
  }
  const PeriodPoint off = sample_period_point(dom, 1);
  CHECK_THROWS_WITH_AS(deligne_generator(r, c, dom, p, off), "z is not on the conic of P", DomainError);
}
