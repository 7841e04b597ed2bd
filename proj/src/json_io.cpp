#include "hkt/json_io.hpp"

#include <algorithm>
#include <string>

#include "hkt/errors.hpp"

namespace hkt::json_io {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

namespace {

std::int64_t to_int(const Json& j) {
  if (!j.is_number_integer()) throw DomainError("expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

const Json& array(const Json& j) {
  if (!j.is_array()) throw DomainError("expected an array, got " + j.dump());
  return j;
}

}  // namespace

Rational to_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw DomainError("expected a rational (\"p/q\" string or integer), got " + j.dump());
}

QVector to_qvector(const Json& j) {
  QVector v;
  for (const auto& x : array(j)) v.push_back(to_rational(x));
  return v;
}

Json from_rational(const Rational& r) { return to_string(r); }

Json from_qvector(const QVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(from_rational(x));
  return out;
}

QMatrix to_qmatrix(const Json& j) {
  std::vector<QVector> rows;
  for (const auto& r : array(j)) rows.push_back(to_qvector(r));
  if (rows.empty()) throw DomainError("empty matrix");
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw DomainError("ragged matrix");
  return QMatrix::from_rows(rows);
}

Json from_qmatrix(const QMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(from_qvector(m.row(i)));
  return out;
}

Vec to_vec(const Json& j) {
  const auto& a = array(j);
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_number()) {
      v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    } else if (a[i].is_string()) {
      v(static_cast<Eigen::Index>(i)) = parse_rational(a[i].get<std::string>()).get_d();
    } else {
      throw DomainError("expected a number, got " + a[i].dump());
    }
  }
  return v;
}

Json from_vec(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i) == 0 ? 0.0 : v(i));  // no negative zero
  return out;
}

Eigen::MatrixXd to_columns(const Json& j) {
  const auto& a = array(j);
  if (a.empty()) throw DomainError("empty vector list");
  std::vector<Vec> cols;
  for (const auto& c : a) cols.push_back(to_vec(c));
  Eigen::MatrixXd m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k].size() != m.rows()) throw DomainError("vectors of different length");
    m.col(static_cast<Eigen::Index>(k)) = cols[k];
  }
  return m;
}

Json from_columns(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < m.cols(); ++k) out.push_back(from_vec(m.col(k)));
  return out;
}

Json from_matrix_rows(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(from_vec(m.row(i).transpose()));
  return out;
}

QuadLattice to_lattice(const Json& j) {
  if (j.is_string()) return lattices::by_name(j.get<std::string>());
  if (j.is_object() && j.contains("standard")) return lattices::by_name(field(j, "standard").get<std::string>());
  IntMatrix g;
  for (const auto& row : array(field(j, "gram"))) {
    std::vector<std::int64_t> r;
    for (const auto& x : array(row)) r.push_back(to_int(x));
    g.push_back(r);
  }
  if (j.contains("rank") && to_int(j.at("rank")) != static_cast<std::int64_t>(g.size()))
    throw DomainError("rank does not match the Gram matrix");
  return QuadLattice(g);
}

Json from_lattice(const QuadLattice& l) { return Json{{"rank", l.rank()}, {"gram", l.gram()}}; }

PeriodPoint to_point(const PeriodDomain& dom, const Json& j) {
  return dom.point(to_vec(field(j, "re")), to_vec(field(j, "im")));
}

Json from_point(const PeriodPoint& z) { return Json{{"re", from_vec(z.re())}, {"im", from_vec(z.im())}}; }

Json from_three_plane(const PositiveThreePlane& p) {
  return Json{{"frame", from_columns(p.frame)}, {"orientation", p.orientation}};
}

PositiveThreePlane to_three_plane(const PeriodDomain& dom, const Json& j) {
  const Eigen::MatrixXd f = to_columns(field(j, "frame"));
  if (f.cols() != 3) throw DomainError("a 3-plane needs three vectors");
  return dom.orient_three_plane(f.col(0), f.col(1), f.col(2));
}

Json from_chain(const TwistorChain& c) {
  Json out = Json::array();
  for (const auto& link : c)
    out.push_back(Json{{"plane", from_three_plane(link.plane)}, {"entry", from_point(link.entry)}, {"exit", from_point(link.exit)}});
  return out;
}

CohomologyRing to_ring(const Json& j) {
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    std::transform(name.begin(), name.end(), name.begin(), ::tolower);
    if (name == "k3") return CohomologyRing::k3();
    throw DomainError("unknown ring \"" + j.get<std::string>() + "\"");
  }
  std::vector<int> degrees;
  for (const auto& d : array(field(j, "degrees"))) degrees.push_back(static_cast<int>(to_int(d)));
  std::vector<StructureConstant> sc;
  for (const auto& t : array(field(j, "structure_constants"))) {
    if (!t.is_array() || t.size() != 4) throw DomainError("structure constants are [i, j, k, c] quadruples");
    for (int q = 0; q < 3; ++q)
      if (to_int(t[q]) < 0) throw DomainError("negative basis index");
    sc.push_back({static_cast<std::size_t>(to_int(t[0])), static_cast<std::size_t>(to_int(t[1])),
                  static_cast<std::size_t>(to_int(t[2])), to_int(t[3])});
  }
  std::vector<std::int64_t> integration;
  for (const auto& x : array(field(j, "integration"))) integration.push_back(to_int(x));
  const Json& block = field(j, "lattice_block");
  std::vector<std::size_t> idx;
  for (const auto& x : array(field(block, "indices"))) {
    if (to_int(x) < 0) throw DomainError("negative basis index");
    idx.push_back(static_cast<std::size_t>(to_int(x)));
  }
  return CohomologyRing(static_cast<int>(to_int(field(j, "m"))), degrees, sc, integration, idx,
                        to_lattice(field(block, "lattice")));
}

Json from_ring(const CohomologyRing& r) {
  Json sc = Json::array();
  for (std::size_t i = 0; i < r.dim(); ++i)
    for (std::size_t j = 0; j < r.dim(); ++j)
      for (const auto& [k, c] : r.product(i, j)) sc.push_back(Json::array({i, j, k, c}));
  return Json{{"m", r.m()},
              {"degrees", r.degrees()},
              {"structure_constants", sc},
              {"integration", r.integration()},
              {"lattice_block", Json{{"indices", r.lattice_indices()}, {"lattice", from_lattice(r.lattice())}}}};
}

WallForm to_wall_form(const Json& j) { return WallForm{to_qvector(j)}; }

Json from_wall_form(const WallForm& w) { return from_qvector(w.coords); }

WallSet to_wall_set(const QuadLattice& l, const Json& j) {
  std::vector<SignedWall> walls;
  for (const auto& w : array(j)) {
    if (w.is_array()) {
      walls.push_back({to_wall_form(w), 1});
    } else {
      walls.push_back({to_wall_form(field(w, "coords")), w.contains("sign") ? static_cast<int>(to_int(w.at("sign"))) : 1});
    }
  }
  return WallSet(l, walls);
}

Nerve to_nerve(const Json& j) {
  std::vector<std::int64_t> vs;
  for (const auto& v : array(field(j, "vertices"))) vs.push_back(to_int(v));
  std::vector<std::vector<std::int64_t>> ss;
  for (const auto& s : array(field(j, "simplices"))) {
    std::vector<std::int64_t> t;
    for (const auto& v : array(s)) t.push_back(to_int(v));
    ss.push_back(t);
  }
  return Nerve(vs, ss);
}

Json from_nerve(const Nerve& n) {
  Json ss = Json::array();
  for (int d = 1; d <= 3; ++d)
    for (const auto& s : n.simplices(d)) {
      Json t = Json::array();
      for (auto v : s) t.push_back(n.vertices()[v]);
      ss.push_back(t);
    }
  return Json{{"vertices", n.vertices()}, {"simplices", ss}};
}

FiniteAbelianGroup to_group(const Json& j) {
  std::vector<std::int64_t> f;
  for (const auto& x : array(field(j, "factors"))) f.push_back(to_int(x));
  return FiniteAbelianGroup(f);
}

namespace {

std::string simplex_key(const Nerve& n, const std::vector<std::size_t>& s) {
  std::string k;
  for (std::size_t i = 0; i < s.size(); ++i) k += (i ? "," : "") + std::to_string(n.vertices()[s[i]]);
  return k;
}

}  // namespace

Cochain to_cochain(const Nerve& n, const FiniteAbelianGroup& g, const Json& j) {
  const auto degree = to_int(field(j, "degree"));
  if (degree < 0 || degree > 3) throw DomainError("degree overflow");
  Cochain c = zero_cochain(n, g, static_cast<int>(degree));
  std::map<std::int64_t, std::size_t> pos;
  for (std::size_t i = 0; i < n.vertices().size(); ++i) pos[n.vertices()[i]] = i;
  const Json& values = field(j, "values");
  if (!values.is_object()) throw DomainError("cochain values must be an object keyed by simplices");
  for (const auto& [key, val] : values.items()) {
    std::vector<std::size_t> ordered;
    std::size_t start = 0;
    while (start <= key.size()) {
      const std::size_t end = std::min(key.find(',', start), key.size());
      const std::string tok = key.substr(start, end - start);
      std::int64_t label = 0;
      try {
        std::size_t used = 0;
        label = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw DomainError("bad simplex key \"" + key + "\"");
      }
      const auto it = pos.find(label);
      if (it == pos.end()) throw DomainError("simplex key uses unknown vertex: \"" + key + "\"");
      ordered.push_back(it->second);
      start = end + 1;
    }
    if (ordered.size() != static_cast<std::size_t>(degree + 1)) throw DomainError("simplex key of wrong degree: \"" + key + "\"");
    FiniteAbelianGroup::Element e;
    if (val.is_array()) {
      for (const auto& x : val) e.push_back(to_int(x));
    } else {
      e.push_back(to_int(val));
    }
    e = g.reduce(e);
    // Stored on the sorted simplex with the permutation sign.
    std::vector<std::size_t> sorted = ordered;
    int sign = 1;
    for (std::size_t a = 0; a < sorted.size(); ++a)
      for (std::size_t b = 0; b + 1 < sorted.size() - a; ++b)
        if (sorted[b] > sorted[b + 1]) {
          std::swap(sorted[b], sorted[b + 1]);
          sign = -sign;
        }
    const auto idx = n.index_of(sorted);
    if (!idx) throw DomainError("\"" + key + "\" is not a simplex of the nerve");
    c.values[*idx] = g.scale(e, sign);
  }
  return c;
}

Json from_cochain(const Nerve& n, const Cochain& c) {
  Json values = Json::object();
  for (std::size_t i = 0; i < c.values.size(); ++i) values[simplex_key(n, n.simplices(c.degree)[i])] = c.values[i];
  return Json{{"degree", c.degree}, {"values", values}};
}

}  // namespace hkt::json_io
