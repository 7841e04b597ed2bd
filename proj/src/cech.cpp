#include "hkt/cech.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "hkt/errors.hpp"

namespace hkt {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t k) {
  const std::int64_t r = a % k;
  return r < 0 ? r + k : r;
}

std::int64_t mod(const Integer& a, std::int64_t k) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(k));
  return r.get_si();
}

// Inverse of a mod k for gcd(a, k) = 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t k) {
  Integer inv;
  const Integer aa(static_cast<long>(a)), kk(static_cast<long>(k));
  if (mpz_invert(inv.get_mpz_t(), aa.get_mpz_t(), kk.get_mpz_t()) == 0) return k == 1 ? 0 : -1;
  return inv.get_si();
}

// Invariant factors of a direct sum of cyclic groups Z/m (m >= 2).
std::vector<std::int64_t> invariant_factors(const std::vector<std::int64_t>& cyclic) {
  // Split into prime powers, then stack the largest powers per prime.
  std::map<std::int64_t, std::vector<std::int64_t>> by_prime;
  for (std::int64_t m : cyclic) {
    std::int64_t x = m;
    for (std::int64_t p = 2; p * p <= x; ++p) {
      if (x % p) continue;
      std::int64_t q = 1;
      while (x % p == 0) x /= p, q *= p;
      by_prime[p].push_back(q);
    }
    if (x > 1) by_prime[x].push_back(x);
  }
  std::size_t len = 0;
  for (auto& [p, v] : by_prime) {
    std::sort(v.begin(), v.end(), std::greater<>());
    len = std::max(len, v.size());
  }
  std::vector<std::int64_t> out(len, 1);
  for (const auto& [p, v] : by_prime)
    for (std::size_t i = 0; i < v.size(); ++i) out[len - 1 - i] *= v[i];
  return out;
}

}  // namespace

Nerve::Nerve(std::vector<std::int64_t> vertices, const std::vector<std::vector<std::int64_t>>& simplices)
    : vertices_(std::move(vertices)) {
  std::map<std::int64_t, std::size_t> pos;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (!pos.emplace(vertices_[i], i).second) throw DomainError("duplicate vertex " + std::to_string(vertices_[i]));
  std::set<std::vector<std::size_t>> all;
  for (std::size_t i = 0; i < vertices_.size(); ++i) all.insert({i});
  std::set<std::vector<std::size_t>> listed;
  for (const auto& s : simplices) {
    if (s.empty()) throw DomainError("empty simplex");
    if (s.size() > 4) throw DomainError("simplex dimension exceeds 3");
    std::vector<std::size_t> t;
    for (auto v : s) {
      const auto it = pos.find(v);
      if (it == pos.end()) throw DomainError("simplex uses unknown vertex " + std::to_string(v));
      t.push_back(it->second);
    }
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end()) throw DomainError("simplex repeats a vertex");
    if (!listed.insert(t).second) throw DomainError("duplicate simplex");
    all.insert(t);
  }
  for (const auto& t : all) {
    if (t.size() < 2) continue;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<std::size_t> face = t;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      if (!all.count(face)) throw DomainError("nerve is not closed under faces");
    }
  }
  for (const auto& t : all) {
    auto& list = by_dim_[t.size() - 1];
    index_[t] = list.size();
    list.push_back(t);
  }
}

Nerve Nerve::full_simplex(std::size_t n) {
  std::vector<std::int64_t> vs(n);
  std::iota(vs.begin(), vs.end(), 0);
  std::vector<std::vector<std::int64_t>> simplices;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::int64_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(static_cast<std::int64_t>(i));
    if (s.size() >= 2 && s.size() <= 4) simplices.push_back(s);
  }
  return Nerve(vs, simplices);
}

Nerve Nerve::octahedron() {
  // Antipodal pairs (0, 1), (2, 3), (4, 5); faces pick one vertex from each pair.
  std::vector<std::vector<std::int64_t>> simplices;
  for (int a : {0, 1})
    for (int b : {2, 3}) {
      simplices.push_back({a, b});
      for (int c : {4, 5}) simplices.push_back({a, b, c});
    }
  for (int a : {0, 1, 2, 3})
    for (int c : {4, 5}) simplices.push_back({a, c});
  return Nerve({0, 1, 2, 3, 4, 5}, simplices);
}

std::optional<std::size_t> Nerve::index_of(const std::vector<std::size_t>& sorted) const {
  const auto it = index_.find(sorted);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

IntegerMatrix Nerve::coboundary_matrix(int deg) const {
  if (deg < 0 || deg > 2) throw DomainError("degree overflow");
  IntegerMatrix m(count(deg + 1), std::vector<Integer>(count(deg), 0));
  for (std::size_t r = 0; r < count(deg + 1); ++r) {
    const auto& s = by_dim_[deg + 1][r];
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<std::size_t> face = s;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      m[r][*index_of(face)] += i % 2 ? -1 : 1;
    }
  }
  return m;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 1) throw DomainError("invariant factors must be >= 1");
    if (i > 0 && factors_[i] % factors_[i - 1] != 0) throw DomainError("invariant factors must divide each other");
  }
}

Integer FiniteAbelianGroup::order() const {
  Integer o = 1;
  for (auto k : factors_) o *= static_cast<long>(k);
  return o;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::reduce(Element x) const {
  if (x.size() != factors_.size()) throw DomainError("group element has wrong length");
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(x[i], factors_[i]);
  return x;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::add(const Element& a, const Element& b) const {
  Element out(factors_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod(a[i] + b[i], factors_[i]);
  return out;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::negate(const Element& a) const { return scale(a, -1); }

FiniteAbelianGroup::Element FiniteAbelianGroup::scale(const Element& a, std::int64_t s) const {
  Element out(factors_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod(mod(s, factors_[i]) * a[i], factors_[i]);
  return out;
}

bool FiniteAbelianGroup::is_zero(const Element& a) const {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (mod(a[i], factors_[i]) != 0) return false;
  return true;
}

Cochain zero_cochain(const Nerve& nerve, const FiniteAbelianGroup& group, int degree) {
  if (degree < 0 || degree > 3) throw DomainError("degree overflow");
  return {degree, std::vector<FiniteAbelianGroup::Element>(nerve.count(degree), group.zero())};
}

namespace {

void check(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c) {
  if (c.degree < 0 || c.degree > 3) throw DomainError("degree overflow");
  if (c.values.size() != nerve.count(c.degree)) throw DomainError("cochain is not defined on exactly the simplices");
  for (const auto& v : c.values)
    if (v.size() != group.factors().size()) throw DomainError("group element has wrong length");
}

}  // namespace

FiniteAbelianGroup::Element evaluate(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c,
                                     const std::vector<std::size_t>& ordered) {
  std::vector<std::size_t> s = ordered;
  int sign = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j + 1 < s.size() - i; ++j)
      if (s[j] > s[j + 1]) {
        std::swap(s[j], s[j + 1]);
        sign = -sign;
      }
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) return group.zero();
  const auto idx = nerve.index_of(s);
  if (!idx || s.size() != static_cast<std::size_t>(c.degree + 1)) throw DomainError("not a simplex of the cochain's degree");
  return group.scale(c.values[*idx], sign);
}

Cochain coboundary(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c) {
  check(nerve, group, c);
  if (c.degree >= 3) throw DomainError("degree overflow");
  Cochain out = zero_cochain(nerve, group, c.degree + 1);
  for (std::size_t r = 0; r < nerve.count(c.degree + 1); ++r) {
    const auto& s = nerve.simplices(c.degree + 1)[r];
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<std::size_t> face = s;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      const auto& v = c.values[*nerve.index_of(face)];
      out.values[r] = group.add(out.values[r], i % 2 ? group.negate(v) : v);
    }
  }
  return out;
}

Cochain add(const FiniteAbelianGroup& group, const Cochain& a, const Cochain& b) {
  if (a.degree != b.degree || a.values.size() != b.values.size()) throw DomainError("cochains of different shape");
  Cochain out = a;
  for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = group.add(a.values[i], b.values[i]);
  return out;
}

Cochain negate(const FiniteAbelianGroup& group, const Cochain& a) {
  Cochain out = a;
  for (auto& v : out.values) v = group.negate(v);
  return out;
}

bool is_zero(const FiniteAbelianGroup& group, const Cochain& c) {
  return std::all_of(c.values.begin(), c.values.end(), [&](const auto& v) { return group.is_zero(v); });
}

bool is_cocycle(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c) {
  check(nerve, group, c);
  if (c.degree >= 3) return true;
  return is_zero(group, coboundary(nerve, group, c));
}

CoboundarySolution solve_coboundary(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& c) {
  check(nerve, group, c);
  if (c.degree != 2) throw DomainError("solve_coboundary expects a 2-cochain");
  if (!is_cocycle(nerve, group, c)) throw DomainError("input is not a cocycle");
  const std::size_t rows = nerve.count(2), cols = nerve.count(1);
  const SmithForm snf = smith_normal_form(nerve.coboundary_matrix(1), rows, cols);
  CoboundarySolution out;
  Cochain x = zero_cochain(nerve, group, 1);
  for (std::size_t f = 0; f < group.factors().size(); ++f) {
    const std::int64_t k = group.factors()[f];
    // D y = U c (mod k), then x = V y.
    std::vector<std::int64_t> uc(rows, 0);
    for (std::size_t i = 0; i < rows; ++i) {
      Integer s = 0;
      for (std::size_t j = 0; j < rows; ++j) s += snf.u[i][j] * static_cast<long>(c.values[j][f]);
      uc[i] = mod(s, k);
    }
    std::vector<std::int64_t> y(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::int64_t di = i < snf.rank ? mod(snf.invariants[i], k) : 0;
      const std::int64_t g = std::gcd(di, k);  // gcd(0, k) = k
      if (g > 1) {
        if (uc[i] % g != 0 || (di == 0 && uc[i] != 0)) {
          out.obstruction.push_back(uc[i] % g);
          out.obstruction_moduli.push_back(g);
          continue;
        }
        out.obstruction.push_back(0);
        out.obstruction_moduli.push_back(g);
      }
      if (i < cols && di != 0) {
        const std::int64_t kg = k / g;
        y[i] = mod((uc[i] / g) * inverse_mod(di / g, kg), kg);
      }
    }
    for (std::size_t j = 0; j < cols; ++j) {
      Integer s = 0;
      for (std::size_t t = 0; t < cols; ++t) s += snf.v[j][t] * static_cast<long>(y[t]);
      x.values[j][f] = mod(s, k);
    }
  }
  const bool solvable = std::all_of(out.obstruction.begin(), out.obstruction.end(), [](auto v) { return v == 0; });
  if (solvable) {
    out.obstruction.clear();
    out.obstruction_moduli.clear();
    if (!(coboundary(nerve, group, x).values == c.values)) throw std::logic_error("coboundary solve is inconsistent");
    out.solution = std::move(x);
  }
  return out;
}

std::vector<std::int64_t> cohomology(const Nerve& nerve, const FiniteAbelianGroup& group, int degree) {
  if (degree < 0 || degree > 2) throw DomainError("degree must be 0, 1 or 2");
  // Integral cohomology of the cochain complex: H^d = free part + torsion of coker d_(d-1).
  auto integral = [&](int d, std::size_t& free_rank, std::vector<Integer>& torsion) {
    std::size_t rank_in = 0, rank_out = 0;
    torsion.clear();
    if (d >= 1) {
      const SmithForm s = smith_normal_form(nerve.coboundary_matrix(d - 1), nerve.count(d), nerve.count(d - 1));
      rank_in = s.rank;
      for (const auto& inv : s.invariants)
        if (inv > 1) torsion.push_back(inv);
    }
    if (d <= 2) rank_out = smith_normal_form(nerve.coboundary_matrix(d), nerve.count(d + 1), nerve.count(d)).rank;
    free_rank = nerve.count(d) - rank_in - rank_out;
  };
  std::size_t free_d = 0, free_next = 0;
  std::vector<Integer> tors_d, tors_next;
  integral(degree, free_d, tors_d);
  integral(degree + 1, free_next, tors_next);
  // H^d(C; Z/k) = H^d(C) (x) Z/k + Tor(H^(d+1)(C), Z/k).
  std::vector<std::int64_t> cyclic;
  for (std::int64_t k : group.factors()) {
    if (k == 1) continue;
    for (std::size_t i = 0; i < free_d; ++i) cyclic.push_back(k);
    for (const auto& t : tors_d) cyclic.push_back(std::gcd(mod(t, k), k));
    for (const auto& t : tors_next) cyclic.push_back(std::gcd(mod(t, k), k));
  }
  std::erase_if(cyclic, [](std::int64_t m) { return m <= 1; });
  return invariant_factors(cyclic);
}

Cochain corrected_transitions(const Nerve& nerve, const FiniteAbelianGroup& group, const Cochain& f) {
  if (f.degree != 1) throw DomainError("transitions must be a 1-cochain");
  const Cochain defect = coboundary(nerve, group, f);
  const CoboundarySolution s = solve_coboundary(nerve, group, defect);
  if (!s.solution) throw std::logic_error("defect of a 1-cochain is always a coboundary");
  return add(group, f, negate(group, *s.solution));
}

}  // namespace hkt
