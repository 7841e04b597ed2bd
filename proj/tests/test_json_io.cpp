#include <doctest.h>

#include <random>

#include "hkt/errors.hpp"
#include "hkt/json_io.hpp"

using namespace hkt;
using json_io::Json;

TEST_CASE("rationals and lattices survive a round trip") {
  const QVector v{Rational(-1, 2), Rational(7), Rational(0), Rational(22, 7)};
  CHECK(json_io::to_qvector(json_io::from_qvector(v)) == v);
  CHECK(json_io::from_qvector(v).dump() == R"(["-1/2","7","0","22/7"])");
  CHECK(json_io::to_rational(Json(5)) == 5);
  CHECK_THROWS_AS(json_io::to_rational(Json(0.5)), DomainError);

  const auto k3 = lattices::k3();
  CHECK(json_io::to_lattice(json_io::from_lattice(k3)) == k3);
  CHECK(json_io::to_lattice(Json("K3")) == k3);
  CHECK(json_io::to_lattice(Json{{"standard", "U3"}}).rank() == 6);
  CHECK_THROWS_AS(json_io::to_lattice(Json{{"rank", 3}, {"gram", {{0, 1}, {1, 0}}}}), DomainError);
  CHECK_THROWS_AS(json_io::to_lattice(Json{{"gram", {{1, 1}, {1, 1}}}}), DomainError);
}

TEST_CASE("ring encoding reproduces the products") {
  const auto ring = CohomologyRing::k3();
  const auto back = json_io::to_ring(json_io::from_ring(ring));
  REQUIRE(back.dim() == ring.dim());
  CHECK(back.degrees() == ring.degrees());
  CHECK(back.integration() == ring.integration());
  CHECK(back.lattice() == ring.lattice());
  for (std::size_t i = 0; i < ring.dim(); ++i)
    for (std::size_t j = 0; j < ring.dim(); ++j) CHECK(back.product(i, j) == ring.product(i, j));

  Json broken = json_io::from_ring(ring);
  broken["structure_constants"].push_back(Json::array({1, 2, 23, 5}));
  CHECK_THROWS_AS(json_io::to_ring(broken), DomainError);
  CHECK_THROWS_AS(json_io::to_ring(Json("enriques")), DomainError);
}

TEST_CASE("period points round trip") {
  const PeriodDomain dom(lattices::k3());
  Vec re = Vec::Zero(22), im = Vec::Zero(22);
  re(0) = re(1) = 1;
  im(2) = im(3) = 1;
  const auto z = dom.point(re, im);
  CHECK(dom.same_point(json_io::to_point(dom, json_io::from_point(z)), z, 1e-12));
  CHECK_THROWS_AS(json_io::to_point(dom, Json{{"re", json_io::from_vec(re)}}), DomainError);
}

TEST_CASE("nerves and cochains round trip") {
  const auto oct = Nerve::octahedron();
  const auto back = json_io::to_nerve(json_io::from_nerve(oct));
  for (int d = 0; d <= 3; ++d) CHECK(back.simplices(d) == oct.simplices(d));

  const FiniteAbelianGroup g({2, 6});
  std::mt19937_64 rng(3);
  for (int d = 0; d <= 2; ++d) {
    Cochain c = zero_cochain(oct, g, d);
    for (auto& v : c.values) v = g.reduce({static_cast<std::int64_t>(rng() % 2), static_cast<std::int64_t>(rng() % 6)});
    const auto again = json_io::to_cochain(oct, g, json_io::from_cochain(oct, c));
    CHECK(again.degree == d);
    CHECK(again.values == c.values);
  }
}

TEST_CASE("cochain keys follow orientation and are validated") {
  const auto n = Nerve::full_simplex(3);
  const FiniteAbelianGroup g({6});
  const auto c = json_io::to_cochain(n, g, Json{{"degree", 1}, {"values", {{"1,0", 1}, {"1,2", Json::array({2})}}}});
  CHECK(c.values[*n.index_of({0, 1})] == FiniteAbelianGroup::Element{5});
  CHECK(c.values[*n.index_of({1, 2})] == FiniteAbelianGroup::Element{2});
  CHECK(c.values[*n.index_of({0, 2})] == FiniteAbelianGroup::Element{0});

  auto bad = [&](const Json& values) {
    return json_io::to_cochain(n, g, Json{{"degree", 1}, {"values", values}});
  };
  CHECK_THROWS_AS(bad(Json{{"0,1,2", 1}}), DomainError);
  CHECK_THROWS_AS(bad(Json{{"0,7", 1}}), DomainError);
  CHECK_THROWS_AS(bad(Json{{"0,x", 1}}), DomainError);
  CHECK_THROWS_AS(json_io::to_cochain(n, g, Json{{"degree", 1}}), DomainError);

  const Nerve path({0, 1, 2}, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(json_io::to_cochain(path, g, Json{{"degree", 1}, {"values", {{"0,2", 1}}}}), DomainError);
}
