#include "hkt/ring.hpp"

#include <map>
#include <string>

#include "hkt/errors.hpp"

namespace hkt {

namespace {

std::string triple(std::size_t i, std::size_t j, std::size_t k) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ", " + std::to_string(k) + ")";
}

}  // namespace

CohomologyRing::CohomologyRing(int m, std::vector<int> degrees, std::vector<StructureConstant> constants,
                               std::vector<std::int64_t> integration, std::vector<std::size_t> lattice_indices,
                               QuadLattice lattice)
    : m_(m),
      degrees_(std::move(degrees)),
      constants_(std::move(constants)),
      integration_(std::move(integration)),
      lattice_indices_(std::move(lattice_indices)),
      lattice_(std::move(lattice)) {
  const std::size_t n = degrees_.size();
  if (m_ < 1) throw DomainError("half-dimension m must be positive");
  if (n == 0) throw DomainError("empty basis");
  for (int d : degrees_)
    if (d < 0 || d > 4 * m_) throw DomainError("basis degree out of range 0..4m");
  if (integration_.size() != n) throw DomainError("integration functional has wrong length");
  for (std::size_t i = 0; i < n; ++i)
    if (integration_[i] != 0 && degrees_[i] != 4 * m_) throw DomainError("integration is nonzero outside degree 4m");

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::int64_t> dense;
  for (const auto& s : constants_) {
    if (s.i >= n || s.j >= n || s.k >= n) throw DomainError("structure constant index out of range");
    if (s.c == 0) continue;
    if (degrees_[s.k] != degrees_[s.i] + degrees_[s.j])
      throw DomainError("structure constant " + triple(s.i, s.j, s.k) + " is not degree-additive");
    dense[{s.i, s.j, s.k}] += s.c;
  }
  table_.assign(n * n, {});
  for (const auto& [key, c] : dense)
    if (c != 0) table_[std::get<0>(key) * n + std::get<1>(key)].push_back({std::get<2>(key), c});

  auto coeff = [&](std::size_t i, std::size_t j, std::size_t k) {
    const auto it = dense.find({i, j, k});
    return it == dense.end() ? std::int64_t{0} : it->second;
  };
  for (const auto& [key, c] : dense) {
    const auto [i, j, k] = key;
    const std::int64_t sign = (degrees_[i] * degrees_[j]) % 2 ? -1 : 1;
    if (coeff(j, i, k) != sign * c) throw DomainError("graded commutativity fails at " + triple(i, j, k));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        std::map<std::size_t, Integer> left, right;
        for (const auto& [p, c1] : product(i, j))
          for (const auto& [t, c2] : product(p, k)) left[t] += Integer(static_cast<long>(c1)) * static_cast<long>(c2);
        for (const auto& [p, c1] : product(j, k))
          for (const auto& [t, c2] : product(i, p)) right[t] += Integer(static_cast<long>(c1)) * static_cast<long>(c2);
        std::erase_if(left, [](const auto& e) { return e.second == 0; });
        std::erase_if(right, [](const auto& e) { return e.second == 0; });
        if (left != right) throw DomainError("associativity fails at " + triple(i, j, k));
      }

  QMatrix pairing(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, c] : product(i, j)) pairing(i, j) += Rational(static_cast<long>(c * integration_[k]));
  if (rank(pairing) != n) throw DomainError("Poincare pairing is degenerate");

  if (lattice_indices_.size() != lattice_.rank()) throw DomainError("lattice block size differs from lattice rank");
  for (std::size_t idx : lattice_indices_)
    if (idx >= n || degrees_[idx] != 2) throw DomainError("lattice block must consist of degree-2 classes");
}

CohomologyRing CohomologyRing::k3() {
  const QuadLattice lat = lattices::k3();
  const std::size_t r = lat.rank();
  std::vector<int> degrees(r + 2, 2);
  degrees.front() = 0;
  degrees.back() = 4;
  const std::size_t pt = r + 1;
  std::vector<StructureConstant> sc;
  for (std::size_t i = 0; i < r + 2; ++i) {
    sc.push_back({0, i, i, 1});
    if (i != 0) sc.push_back({i, 0, i, 1});
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (lat.gram()[i][j] != 0) sc.push_back({i + 1, j + 1, pt, lat.gram()[i][j]});
  std::vector<std::int64_t> integration(r + 2, 0);
  integration[pt] = 1;
  std::vector<std::size_t> block(r);
  for (std::size_t i = 0; i < r; ++i) block[i] = i + 1;
  return CohomologyRing(1, std::move(degrees), std::move(sc), std::move(integration), std::move(block), lat);
}

QVector CohomologyRing::cup(const QVector& x, const QVector& y) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n) throw DomainError("class has wrong length");
  QVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j] == 0) continue;
      const Rational xy = x[i] * y[j];
      for (const auto& [k, c] : product(i, j)) out[k] += xy * static_cast<long>(c);
    }
  }
  return out;
}

Rational CohomologyRing::integrate(const QVector& x) const {
  if (x.size() != dim()) throw DomainError("class has wrong length");
  Rational s = 0;
  for (std::size_t i = 0; i < dim(); ++i)
    if (integration_[i] != 0) s += x[i] * static_cast<long>(integration_[i]);
  return s;
}

QVector CohomologyRing::embed(const QVector& lattice_coords) const {
  if (lattice_coords.size() != lattice_indices_.size()) throw DomainError("lattice vector has wrong length");
  QVector out(dim());
  for (std::size_t i = 0; i < lattice_coords.size(); ++i) out[lattice_indices_[i]] = lattice_coords[i];
  return out;
}

}  // namespace hkt
