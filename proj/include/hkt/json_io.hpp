#pragma once

// JSON encodings. Rationals travel as "p/q" strings (plain integers are also
// accepted on input); floating vectors as JSON numbers.

#include <json.hpp>

#include "hkt/cech.hpp"
#include "hkt/lattice.hpp"
#include "hkt/period.hpp"
#include "hkt/ring.hpp"
#include "hkt/walls.hpp"

namespace hkt::json_io {

using Json = nlohmann::ordered_json;

/// Field access with DomainError on absence.
const Json& field(const Json& j, const char* name);

Rational to_rational(const Json& j);
QVector to_qvector(const Json& j);
Json from_rational(const Rational& r);
Json from_qvector(const QVector& v);
QMatrix to_qmatrix(const Json& j);
Json from_qmatrix(const QMatrix& m);

Vec to_vec(const Json& j);
Json from_vec(const Vec& v);
Eigen::MatrixXd to_columns(const Json& j);  // list of column vectors
Json from_columns(const Eigen::MatrixXd& m);
Json from_matrix_rows(const Eigen::MatrixXd& m);

/// {"gram": [[...]]} (optionally with "rank"), {"standard": name}, or a bare name string.
QuadLattice to_lattice(const Json& j);
Json from_lattice(const QuadLattice& l);

PeriodPoint to_point(const PeriodDomain& dom, const Json& j);  // {"re": [...], "im": [...]}
Json from_point(const PeriodPoint& z);
Json from_three_plane(const PositiveThreePlane& p);
PositiveThreePlane to_three_plane(const PeriodDomain& dom, const Json& j);  // {"frame": [v1, v2, v3]}
Json from_chain(const TwistorChain& c);

/// "k3" or {"m", "degrees", "structure_constants": [[i, j, k, c]], "integration", "lattice_block": {"indices", "lattice"}}.
CohomologyRing to_ring(const Json& j);
Json from_ring(const CohomologyRing& r);

WallForm to_wall_form(const Json& j);
Json from_wall_form(const WallForm& w);
/// [{"coords": [...], "sign": 1}, ...]; bare coordinate arrays get sign +1.
WallSet to_wall_set(const QuadLattice& l, const Json& j);

Nerve to_nerve(const Json& j);  // {"vertices": [...], "simplices": [[...]]}
Json from_nerve(const Nerve& n);
FiniteAbelianGroup to_group(const Json& j);  // {"factors": [...]}
/// {"degree": d, "values": {"0,1": [1], ...}}; missing simplices are zero.
Cochain to_cochain(const Nerve& n, const FiniteAbelianGroup& g, const Json& j);
Json from_cochain(const Nerve& n, const Cochain& c);

}  // namespace hkt::json_io
