#include "hkt/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hkt/errors.hpp"
#include "hkt/irrational.hpp"
#include "hkt/json_io.hpp"
#include "hkt/llv.hpp"
#include "hkt/sampling.hpp"

namespace hkt::cli {
namespace {

using json_io::field;
using json_io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cocycle that is not a coboundary: reported with ok=false, exit 1.
struct Obstruction {
  std::vector<std::int64_t> classes, moduli;
};

Json read_json_file(const std::string& path, std::istream& in) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("malformed JSON input: ") + e.what());
  }
}

Json from_integer(const Integer& z) {
  if (z.fits_slong_p()) return Json(static_cast<std::int64_t>(z.get_si()));
  return Json(z.get_str());
}

struct Context {
  explicit Context(std::istream& input) : in(input) {}

  std::istream& in;
  Tolerances tol;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string json_text, input_path, lattice_arg, ring_arg, span;
  bool killing = false;
  Json diagnostics = Json::object();
  std::optional<Obstruction> obstruction;
  std::optional<Json> doc_;

  const Json& doc() {
    if (!doc_) {
      if (!json_text.empty()) {
        try {
          doc_ = Json::parse(json_text);
        } catch (const Json::parse_error& e) {
          throw UsageError(std::string("malformed JSON input: ") + e.what());
        }
      } else {
        doc_ = read_json_file(input_path.empty() ? "-" : input_path, in);
      }
    }
    return *doc_;
  }
  // Optional lookups never block on stdin; only a required access reads it.
  bool has(const char* key) {
    if (!doc_ && json_text.empty() && input_path.empty()) return false;
    return doc().is_object() && doc().contains(key);
  }

  // {"point": {...}} or the re/im pair at top level.
  PeriodPoint point(const PeriodDomain& dom) {
    const Json& d = doc();
    return json_io::to_point(dom, d.is_object() && d.contains("point") ? d.at("point") : d);
  }

  // Flag values name either a JSON file or a built-in.
  Json named(const std::string& v) {
    if (std::filesystem::is_regular_file(v)) return read_json_file(v, in);
    return Json(v);
  }

  QuadLattice lattice() {
    if (!lattice_arg.empty()) return json_io::to_lattice(named(lattice_arg));
    doc();
    if (has("lattice")) return json_io::to_lattice(doc().at("lattice"));
    if (has("gram") || has("standard") || doc().is_string()) return json_io::to_lattice(doc());
    if (has("ring")) return json_io::to_ring(doc().at("ring")).lattice();
    throw DomainError("no lattice given");
  }

  CohomologyRing ring() {
    if (!ring_arg.empty()) return json_io::to_ring(named(ring_arg));
    doc();
    if (has("ring")) return json_io::to_ring(doc().at("ring"));
    if (has("degrees")) return json_io::to_ring(doc());
    throw DomainError("no ring given");
  }

  std::uint64_t required_seed() {
    if (!seed) throw UsageError("--seed is required for sampling commands");
    diagnostics["seed"] = *seed;
    return *seed;
  }

  RelationSearch search() {
    RelationSearch s;
    if (has("height")) s.height = field(doc(), "height").get<std::int64_t>();
    if (has("tol")) s.tol = field(doc(), "tol").get<double>();
    if (s.height < 1) throw DomainError("height must be positive");
    if (!(s.tol > 0)) throw DomainError("tol must be positive");
    return s;
  }

  double number(const char* key, double fallback) {
    if (!has(key)) return fallback;
    const Json& j = doc().at(key);
    if (!j.is_number()) throw DomainError(std::string("\"") + key + "\" must be a number");
    return j.get<double>();
  }
};

Json tolerances_json(const Tolerances& t) {
  return Json{{"iso", t.iso}, {"orth", t.orth}, {"pos", t.pos}, {"lie", t.lie}, {"wall", t.wall}};
}

// ---- lattice

Json lattice_signature(Context& c) {
  const auto s = c.lattice().signature();
  return Json::array({s.positive, s.negative});
}

Json lattice_dual(Context& c) {
  const auto l = c.lattice();
  const WallForm d = json_io::to_wall_form(field(c.doc(), "delta"));
  if (d.coords.size() != l.rank()) throw DomainError("delta has wrong rank");
  return Json{{"dual_value", json_io::from_rational(dual_value(l, d))}};
}

Json lattice_negative(Context& c) {
  const auto l = c.lattice();
  const WallForm d = json_io::to_wall_form(field(c.doc(), "delta"));
  if (d.coords.size() != l.rank()) throw DomainError("delta has wrong rank");
  const auto r = negativity(l, d);
  return Json{{"negative", r.negative},
              {"dual_value", json_io::from_rational(r.dual_value)},
              {"kernel_inertia", Json::array({r.kernel_positive, r.kernel_negative, r.kernel_zero})}};
}

Json lattice_spinor(Context& c) {
  const auto l = c.lattice();
  const Isometry g(l, json_io::to_qmatrix(field(c.doc(), "matrix")));
  std::vector<std::size_t> order;
  if (c.has("order")) order = c.doc().at("order").get<std::vector<std::size_t>>();
  const auto dec = spinor_decomposition(l, g.matrix(), order);
  Json mirrors = Json::array();
  for (const auto& m : dec.mirrors) mirrors.push_back(json_io::from_qvector(m));
  return Json{{"spinor_norm", dec.sign},
              {"in_O_sharp", in_O_sharp(l, g.matrix())},
              {"determinant", json_io::from_rational(determinant(g.matrix()))},
              {"mirrors", mirrors}};
}

// ---- period

Json period_validate(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  const auto z = c.point(dom);
  return Json{{"valid", true}, {"isotropy_residual", dom.isotropy_residual(z)}};
}

Json period_convert(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  if (c.has("a") || c.has("b")) {
    const OrientedTwoPlane p{json_io::to_vec(field(c.doc(), "a")), json_io::to_vec(field(c.doc(), "b"))};
    return Json{{"point", json_io::from_point(dom.plane_to_point(p))}};
  }
  const auto p = dom.point_to_plane(c.point(dom));
  return Json{{"plane", Json{{"a", json_io::from_vec(p.a)}, {"b", json_io::from_vec(p.b)}}}};
}

Json period_cone(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  const auto z = json_io::to_point(dom, field(c.doc(), "point"));
  const Vec v = json_io::to_vec(field(c.doc(), "vector"));
  if (v.size() != static_cast<Eigen::Index>(dom.rank())) throw DomainError("vector has wrong rank");
  const double res = dom.plane_orthogonality_residual(z, v);
  return Json{{"orthogonality_residual", res}, {"contains", dom.positive_cone_contains(z, v)}};
}

Json period_sample(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  return Json{{"point", json_io::from_point(sample_period_point(dom, c.required_seed()))}};
}

// ---- twistor

Json twistor_plane(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  const auto z = json_io::to_point(dom, field(c.doc(), "point"));
  return json_io::from_three_plane(dom.twistor_plane(z, json_io::to_vec(field(c.doc(), "line"))));
}

Json twistor_point(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  const auto p = json_io::to_three_plane(dom, field(c.doc(), "plane"));
  const auto z = dom.conic_point(p, json_io::to_vec(field(c.doc(), "u")));
  c.diagnostics["conic_residual"] = dom.conic_residual(p, z);
  return Json{{"point", json_io::from_point(z)}};
}

Json twistor_chain(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  ChainOptions opts;
  if (c.has("max_links")) opts.max_links = c.doc().at("max_links").get<std::size_t>();
  const auto chain = dom.chain_connect(json_io::to_point(dom, field(c.doc(), "from")),
                                       json_io::to_point(dom, field(c.doc(), "to")), opts);
  return Json{{"links", chain.size()}, {"chain", json_io::from_chain(chain)}};
}

// ---- irrational

Json relations_json(const std::vector<std::vector<Integer>>& rels) {
  Json out = Json::array();
  for (const auto& r : rels) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(from_integer(x));
    out.push_back(row);
  }
  return out;
}

std::vector<Vec> float_vectors(const Json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("empty input");
  std::vector<Vec> vs;
  for (const auto& v : j) vs.push_back(json_io::to_vec(v));
  return vs;
}

Json irrational_closure(Context& c) {
  RationalClosure rc;
  const Json& vs = field(c.doc(), "vectors");
  if (c.has("exact") && c.doc().at("exact").get<bool>()) {
    if (!vs.is_array() || vs.empty()) throw DomainError("empty input");
    std::vector<QVector> q;
    for (const auto& v : vs) q.push_back(json_io::to_qvector(v));
    rc = rational_closure_exact(q);
  } else {
    rc = rational_closure_detect(float_vectors(vs), c.search());
  }
  return Json{{"ambient", rc.ambient},
              {"dimension", rc.dimension},
              {"exact", rc.exact},
              {"relations", relations_json(rc.relations)}};
}

Json irrational_test(Context& c) {
  const auto v = is_fully_irrational(float_vectors(field(c.doc(), "vectors")), c.search());
  Json out{{"fully_irrational", v.fully_irrational}};
  if (v.witness) {
    out["witness"] = relations_json({*v.witness}).at(0);
    out["witness_residual"] = v.witness_residual;
  }
  return out;
}

Json irrational_picard(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  const auto v = picard_trivial(dom, c.point(dom), c.search());
  Json out{{"trivial", v.trivial}};
  if (v.witness) {
    out["witness"] = *v.witness;
    out["witness_residual"] = v.witness_residual;
  }
  return out;
}

// ---- walls

Eigen::MatrixXd positive_frame(const QuadLattice& l) {
  Eigen::MatrixXd g(l.rank(), l.rank());
  for (std::size_t i = 0; i < l.rank(); ++i)
    for (std::size_t j = 0; j < l.rank(); ++j) g(i, j) = static_cast<double>(l.gram()[i][j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const auto p = static_cast<Eigen::Index>(l.signature().positive);
  return es.eigenvectors().rightCols(p);
}

Json walls_enum(Context& c) {
  c.doc();
  const auto l = c.lattice();
  const Eigen::MatrixXd frame = c.has("frame") ? json_io::to_columns(c.doc().at("frame")) : positive_frame(l);
  const auto m = majorant(l, frame);
  const Json& dj = field(c.doc(), "d");
  if (!dj.is_number_integer()) throw DomainError("d must be an integer");
  EnumerationOptions opts;
  opts.workers = c.workers;
  const auto walls = enumerate_walls_near(l, m, dj.get<std::int64_t>(), c.number("R", 0), opts);
  Json ws = Json::array();
  for (const auto& w : walls) ws.push_back(json_io::from_wall_form(w));
  return Json{{"count", walls.size()}, {"walls", ws}};
}

Json walls_avoid(Context& c) {
  const auto l = c.lattice();
  const PeriodDomain dom(l, c.tol);
  const auto p = json_io::to_three_plane(dom, field(c.doc(), "plane"));
  const WallSet ws = json_io::to_wall_set(l, field(c.doc(), "walls"));
  const auto r = wall_avoidance(p, ws, c.number("tau", c.tol.wall));
  Json out{{"avoids", r.avoids}, {"pairwise_incidences", pairwise_incidences(p, ws, c.number("tau", c.tol.wall))}};
  if (r.nearest) {
    out["nearest"] = *r.nearest;
    out["nearest_norm"] = r.nearest_norm;
  }
  return out;
}

Json walls_chamber(Context& c) {
  const auto l = c.lattice();
  const PeriodDomain dom(l, c.tol);
  const auto z = json_io::to_point(dom, field(c.doc(), "point"));
  const WallSet ws = json_io::to_wall_set(l, field(c.doc(), "walls"));
  const double tau = c.number("tau", c.tol.wall);
  const auto r = kahler_chamber_contains(dom, z, ws, json_io::to_vec(field(c.doc(), "kappa")), tau);
  Json out{{"contains", r.contains}, {"in_positive_cone", r.in_positive_cone}, {"relevant", relevant_walls(z, ws, tau)}};
  if (r.violated) out["violated"] = *r.violated;
  return out;
}

Json walls_ueps(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  const auto p = json_io::to_three_plane(dom, field(c.doc(), "plane"));
  const Json& e = field(c.doc(), "eps");
  if (!e.is_number()) throw DomainError("eps must be a number");
  return Json{{"member", in_U_eps(dom, p, json_io::to_vec(field(c.doc(), "vector")), e.get<double>())}};
}

// ---- llv

Json exact_operator_json(const ExactOperator& op) {
  return Json{{"degree", op.degree}, {"matrix", json_io::from_qmatrix(op.matrix)}};
}

Json llv_e(Context& c) {
  return exact_operator_json(lefschetz_e_exact(c.ring(), json_io::to_qvector(field(c.doc(), "eta"))));
}

Json llv_f(Context& c) {
  return exact_operator_json(lefschetz_f_exact(c.ring(), json_io::to_qvector(field(c.doc(), "eta"))));
}

Json by_degree(const std::map<int, std::size_t>& dims) {
  Json out = Json::object();
  for (const auto& [d, n] : dims) out[std::to_string(d)] = n;
  return out;
}

Json llv_closure(Context& c) {
  const auto ring = c.ring();
  std::vector<Vec> etas;
  if (!c.span.empty()) {
    const auto n = static_cast<Eigen::Index>(ring.lattice().rank());
    if (c.span == "plane") {
      const PeriodDomain dom(ring.lattice(), c.tol);
      for (int k = 0; k < 3; ++k) etas.push_back(dom.reference_frame().col(k));
    } else if (c.span == "all") {
      for (Eigen::Index k = 0; k < n; ++k) etas.push_back(Vec::Unit(n, k));
    } else {
      throw UsageError("--span must be \"plane\" or \"all\"");
    }
  } else {
    etas = float_vectors(field(c.doc(), "etas"));
  }
  LieOptions opts;
  opts.tol = c.tol.lie;
  opts.workers = c.workers;
  const auto closure = lie_closure(lefschetz_generators(ring, etas), opts);
  c.diagnostics["closure_residual"] = closure.residual;
  Json out{{"dimension", closure.dimension}, {"by_degree", by_degree(closure.degree_dimensions)}};
  if (c.killing) {
    const auto k = killing_signature(closure, c.tol.lie);
    out["killing"] = Json{{"positive", k.positive}, {"negative", k.negative}, {"zero", k.zero}};
  }
  return out;
}

Json llv_fujiki(Context& c) {
  const auto ring = c.ring();
  std::size_t samples = 0;
  if (c.has("samples")) samples = c.doc().at("samples").get<std::size_t>();
  const std::uint64_t seed = c.seed.value_or(1);
  c.diagnostics["seed"] = seed;
  return Json{{"c", json_io::from_rational(fujiki_constant(ring, samples, seed))}};
}

Json llv_hodge(Context& c) {
  const PeriodDomain dom(c.lattice(), c.tol);
  const auto h = hodge_decompose(dom, c.point(dom));
  return Json{{"h20", 1},
              {"h11", h.h11.cols()},
              {"h02", 1},
              {"h11_signature", Json::array({h.h11_positive, h.h11_negative})},
              {"orthogonality_residual", h.orthogonality_residual},
              {"min_h_on_h20_h02", h.min_h_on_h20_h02}};
}

Json llv_deligne(Context& c) {
  const auto ring = c.ring();
  const PeriodDomain dom(ring.lattice(), c.tol);
  const auto z = json_io::to_point(dom, field(c.doc(), "point"));
  const auto plane = dom.twistor_plane(z, json_io::to_vec(field(c.doc(), "line")));
  std::vector<Vec> etas;
  for (int k = 0; k < 3; ++k) etas.push_back(plane.frame.col(k));
  LieOptions opts;
  opts.tol = c.tol.lie;
  opts.workers = c.workers;
  const auto closure = lie_closure(lefschetz_generators(ring, etas), opts);
  const auto x = deligne_generator(ring, closure, dom, plane, z, c.tol.lie);
  Json spec = Json::array();
  for (const auto& l : block_spectrum(ring, x)) {
    // Snap sub-tolerance noise so the output is stable.
    auto snap = [&](double v) { return std::abs(v) < c.tol.lie ? 0.0 : v; };
    spec.push_back(Json::array({snap(l.real()), snap(l.imag())}));
  }
  return Json{{"spectrum", spec}};
}

// ---- cech

Nerve nerve_of(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "octahedron") return Nerve::octahedron();
  if (j.is_object() && j.contains("full_simplex")) return Nerve::full_simplex(j.at("full_simplex").get<std::size_t>());
  return json_io::to_nerve(j);
}

struct CechInput {
  Nerve nerve;
  FiniteAbelianGroup group;
};

CechInput cech_input(Context& c) {
  return {nerve_of(field(c.doc(), "nerve")), json_io::to_group(field(c.doc(), "group"))};
}

Json cech_d(Context& c) {
  const auto [n, g] = cech_input(c);
  return json_io::from_cochain(n, coboundary(n, g, json_io::to_cochain(n, g, field(c.doc(), "cochain"))));
}

Json cech_cocycle(Context& c) {
  const auto [n, g] = cech_input(c);
  return Json{{"cocycle", is_cocycle(n, g, json_io::to_cochain(n, g, field(c.doc(), "cochain")))}};
}

Json cech_solve(Context& c) {
  const auto [n, g] = cech_input(c);
  const auto s = solve_coboundary(n, g, json_io::to_cochain(n, g, field(c.doc(), "cochain")));
  if (!s.solution) {
    c.obstruction = Obstruction{s.obstruction, s.obstruction_moduli};
    return Json();
  }
  return Json{{"solution", json_io::from_cochain(n, *s.solution)}};
}

Json cech_cohomology(Context& c) {
  const auto [n, g] = cech_input(c);
  const Json& d = field(c.doc(), "degree");
  if (!d.is_number_integer()) throw DomainError("degree must be an integer");
  const auto inv = cohomology(n, g, d.get<int>());
  return Json{{"invariant_factors", inv}, {"trivial", inv.empty()}};
}

using Handler = std::function<Json(Context&)>;

const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Handler>>>>& commands() {
  static const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Handler>>>> table = {
      {"lattice", {{"signature", lattice_signature}, {"dual", lattice_dual}, {"negative", lattice_negative}, {"spinor", lattice_spinor}}},
      {"period", {{"validate", period_validate}, {"convert", period_convert}, {"cone", period_cone}, {"sample", period_sample}}},
      {"twistor", {{"plane", twistor_plane}, {"point", twistor_point}, {"chain", twistor_chain}}},
      {"irrational", {{"closure", irrational_closure}, {"test", irrational_test}, {"picard", irrational_picard}}},
      {"walls", {{"enum", walls_enum}, {"avoid", walls_avoid}, {"chamber", walls_chamber}, {"ueps", walls_ueps}}},
      {"llv", {{"e", llv_e}, {"f", llv_f}, {"closure", llv_closure}, {"fujiki", llv_fujiki}, {"hodge", llv_hodge}, {"deligne", llv_deligne}}},
      {"cech", {{"d", cech_d}, {"cocycle", cech_cocycle}, {"solve", cech_solve}, {"cohomology", cech_cohomology}}},
  };
  return table;
}

// HKT_CONFIG: {"seed": n, "workers": n, "tolerances": {"iso": x, ...}}
void apply_config(Context& c, std::istream& in) {
  const char* path = std::getenv("HKT_CONFIG");
  if (!path || !*path) return;
  const Json cfg = read_json_file(path, in);
  if (!cfg.is_object()) throw UsageError("HKT_CONFIG must hold a JSON object");
  try {
    if (cfg.contains("seed")) c.seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("workers")) c.workers = cfg.at("workers").get<unsigned>();
    if (cfg.contains("tolerances")) {
      const Json& t = cfg.at("tolerances");
      std::map<std::string, double*> slots{{"iso", &c.tol.iso}, {"orth", &c.tol.orth}, {"pos", &c.tol.pos},
                                           {"lie", &c.tol.lie}, {"wall", &c.tol.wall}};
      for (const auto& [k, v] : t.items()) {
        const auto it = slots.find(k);
        if (it == slots.end()) throw UsageError("unknown tolerance \"" + k + "\" in HKT_CONFIG");
        *it->second = v.get<double>();
      }
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("bad HKT_CONFIG: ") + e.what());
  }
}

Json failure(const std::string& kind, const std::string& message, const Json& diagnostics) {
  return Json{{"ok", false}, {"error", message}, {"error_kind", kind}, {"diagnostics", diagnostics}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Context c(in);
  bool pretty = false;
  auto emit = [&](const Json& j) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; };

  CLI::App app{"Hyperkaehler period and LLV toolkit", "hkt"};
  app.fallthrough();
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  std::optional<double> tiso, torth, tpos, tlie, twall;
  std::optional<unsigned> workers;
  app.add_option("--seed", seed, "RNG seed (required by sampling commands)");
  app.add_option("--tol-iso", tiso, "isotropy tolerance");
  app.add_option("--tol-orth", torth, "orthogonality tolerance");
  app.add_option("--tol-pos", tpos, "positivity tolerance");
  app.add_option("--tol-lie", tlie, "Lie rank tolerance");
  app.add_option("--tol-wall", twall, "wall restriction tolerance");
  app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--input", c.input_path, "JSON input file, - for stdin (default)");
  app.add_option("--json", c.json_text, "inline JSON input");
  app.add_option("--lattice", c.lattice_arg, "lattice name (K3, U3, ...) or JSON file");
  app.add_option("--ring", c.ring_arg, "ring name (k3) or JSON file");
  app.add_option("--span", c.span, "llv closure generators: plane or all");
  app.add_flag("--killing", c.killing, "llv closure: also report the Killing signature");
  app.add_flag("--pretty", pretty, "indent output");

  std::map<const CLI::App*, std::pair<std::string, Handler>> dispatch;
  for (const auto& [group, cmds] : commands()) {
    auto* g = app.add_subcommand(group, group + " commands");
    g->require_subcommand(1);
    for (const auto& [name, handler] : cmds) dispatch[g->add_subcommand(name)] = {group + " " + name, handler};
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "hkt: " << e.what() << '\n';
    emit(failure("usage", e.what(), Json::object()));
    return usage_error;
  }

  const Handler* handler = nullptr;
  for (const auto& [sub, entry] : dispatch)
    if (sub->parsed()) {
      handler = &entry.second;
      c.diagnostics["command"] = entry.first;
    }

  try {
    apply_config(c, in);
    if (seed) c.seed = seed;
    if (workers) c.workers = *workers;
    for (auto [opt, slot] : {std::pair{&tiso, &c.tol.iso}, {&torth, &c.tol.orth}, {&tpos, &c.tol.pos},
                             {&tlie, &c.tol.lie}, {&twall, &c.tol.wall}})
      if (*opt) {
        if (!(**opt > 0)) throw UsageError("tolerances must be positive");
        *slot = **opt;
      }
    c.diagnostics["tolerances"] = tolerances_json(c.tol);
    c.diagnostics["workers"] = c.workers;
    if (!handler) throw UsageError("no command given");

    Json result = (*handler)(c);
    if (c.obstruction) {
      Json j = failure("domain", "cocycle is not a coboundary", c.diagnostics);
      j["obstruction"] = c.obstruction->classes;
      j["obstruction_moduli"] = c.obstruction->moduli;
      emit(j);
      return domain_error;
    }
    emit(Json{{"ok", true}, {"result", result}, {"diagnostics", c.diagnostics}});
    return ok;
  } catch (const UsageError& e) {
    err << "hkt: " << e.what() << '\n';
    emit(failure("usage", e.what(), c.diagnostics));
    return usage_error;
  } catch (const NumericalError& e) {
    err << "hkt: " << e.what() << '\n';
    emit(failure("numerical", e.what(), c.diagnostics));
    return numerical_error;
  } catch (const DomainError& e) {
    err << "hkt: " << e.what() << '\n';
    emit(failure("domain", e.what(), c.diagnostics));
    return domain_error;
  } catch (const Json::exception& e) {
    // Wrong JSON types inside an otherwise valid document.
    err << "hkt: " << e.what() << '\n';
    emit(failure("domain", std::string("invalid input: ") + e.what(), c.diagnostics));
    return domain_error;
  }
}

}  // namespace hkt::cli
