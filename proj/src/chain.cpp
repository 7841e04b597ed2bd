// Chains of twistor conics between two period points.
//
// Every link keeps one unit vector of the current frame and swaps the other
// inside a positive 3-plane. Two planes Pi_1, Pi_2 with cross Gram
// M = F1^T G F2 (F_i q-orthonormal frames) are joined through
// span(u, w) when the smallest singular value of M is below 1: u, w are the
// matching singular vectors and both span(Pi_1, w), span(u, Pi_2) are positive.
// Otherwise Pi_1 + Pi_2 has signature (2, 2) and a positive line orthogonal to
// both gives a three-link detour with identity Gram matrices.

#include <cmath>
#include <optional>

#include "hkt/errors.hpp"
#include "hkt/period.hpp"

namespace hkt {

namespace {

using Links = std::vector<TwistorLink>;

struct Connector {
  const PeriodDomain& dom;

  bool positive(const Vec& x, const Vec& y, const Vec& z) const {
    Eigen::MatrixXd m(x.size(), 3);
    m << x, y, z;
    return dom.min_positivity(m) > dom.tolerances().pos;
  }

  std::optional<Links> direct(const PeriodPoint& z1, const PeriodPoint& z2) const {
    const auto n = static_cast<Eigen::Index>(dom.rank());
    const Vec &a1 = z1.re(), &b1 = z1.im(), &a2 = z2.re(), &b2 = z2.im();
    const Eigen::MatrixXd& g = dom.gram();

    // Shared line: one link.
    Eigen::MatrixXd w4(n, 4);
    w4 << a1.normalized(), b1.normalized(), a2.normalized(), b2.normalized();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd4(w4);
    if (svd4.singularValues()(3) < 1e-9) {
      Eigen::MatrixXd e1(n, 2);
      e1 << a1, b1;
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(e1);
      const Eigen::MatrixXd q1 = qr.householderQ() * Eigen::MatrixXd::Identity(n, 2);
      const Vec ra = a2 - q1 * (q1.transpose() * a2);
      const Vec rb = b2 - q1 * (q1.transpose() * b2);
      const Vec& extra = ra.norm() >= rb.norm() ? a2 : b2;
      if (positive(a1, b1, extra)) return Links{{dom.orient_three_plane(a1, b1, extra), z1, z2}};
    }

    Eigen::MatrixXd f1(n, 2), f2(n, 2);
    f1 << a1, b1;
    f2 << a2, b2;
    const Eigen::Matrix2d m = f1.transpose() * g * f2;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec u_small = f1 * svd.matrixU().col(1);
    const Vec w_small = f2 * svd.matrixV().col(1);

    if (svd.singularValues()(1) < 1 - 1e-9 && positive(a1, b1, w_small) && positive(a2, b2, u_small)) {
      const PeriodPoint mid = dom.plane_to_point({u_small, w_small});
      return Links{{dom.orient_three_plane(a1, b1, w_small), z1, mid},
                   {dom.orient_three_plane(a2, b2, u_small), mid, z2}};
    }

    // Positive line orthogonal to Pi_1 + Pi_2.
    Eigen::MatrixXd w(n, 4);
    w << a1, b1, a2, b2;
    const Eigen::MatrixXd constraints = w.transpose() * g;
    Eigen::JacobiSVD<Eigen::MatrixXd> csvd(constraints, Eigen::ComputeFullV);
    Eigen::Index r = 0;
    const double smax = csvd.singularValues()(0);
    for (Eigen::Index i = 0; i < csvd.singularValues().size(); ++i)
      if (csvd.singularValues()(i) > 1e-10 * smax) ++r;
    if (n - r < 1) return std::nullopt;
    const Eigen::MatrixXd comp = csvd.matrixV().rightCols(n - r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(comp.transpose() * g * comp);
    const Eigen::Index top = es.eigenvalues().size() - 1;
    const double lambda = es.eigenvalues()(top);
    if (!(lambda > dom.tolerances().pos)) return std::nullopt;
    const Vec ell = comp * es.eigenvectors().col(top) / std::sqrt(lambda);

    const Vec x1 = f1 * svd.matrixU().col(0);
    const Eigen::Vector2d t = f2.transpose() * g * x1;
    Eigen::Vector2d c(-t(1), t(0));
    if (c.norm() < 1e-12) c = Eigen::Vector2d(1, 0);
    const Vec w2 = f2 * c.normalized();
    if (!positive(a1, b1, ell) || !positive(x1, ell, w2) || !positive(a2, b2, ell)) return std::nullopt;
    const PeriodPoint m1 = dom.plane_to_point({x1, ell});
    const PeriodPoint m2 = dom.plane_to_point({ell, w2});
    return Links{{dom.orient_three_plane(a1, b1, ell), z1, m1},
                 {dom.orient_three_plane(x1, ell, w2), m1, m2},
                 {dom.orient_three_plane(a2, b2, ell), m2, z2}};
  }

  // Splits at a plane inside the reference 3-plane when no direct route exists.
  bool connect(const PeriodPoint& z1, const PeriodPoint& z2, std::size_t depth, std::size_t max_depth,
               Links& out) const {
    if (dom.same_point(z1, z2, dom.tolerances().orth)) return true;
    if (auto links = direct(z1, z2)) {
      out.insert(out.end(), links->begin(), links->end());
      return true;
    }
    if (depth >= max_depth) return false;
    const Frame3& ref = dom.reference_frame();
    const Eigen::MatrixXd& g = dom.gram();
    for (const PeriodPoint* base : {&z1, &z2}) {
      const Vec pa = ref * (ref.transpose() * (g * base->re()));
      const Vec pb = ref * (ref.transpose() * (g * base->im()));
      Eigen::MatrixXd m(pa.size(), 2);
      m << pa, pb;
      if (!(dom.min_positivity(m) > dom.tolerances().pos)) continue;
      const PeriodPoint mid = dom.plane_to_point({pa, pb});
      if (dom.same_point(mid, z1, dom.tolerances().orth) || dom.same_point(mid, z2, dom.tolerances().orth)) continue;
      Links trial;
      if (connect(z1, mid, depth + 1, max_depth, trial) && connect(mid, z2, depth + 1, max_depth, trial)) {
        out.insert(out.end(), trial.begin(), trial.end());
        return true;
      }
    }
    return false;
  }
};

}  // namespace

TwistorChain PeriodDomain::chain_connect(const PeriodPoint& from, const PeriodPoint& to,
                                         const ChainOptions& opts) const {
  if (lattice_.signature().negative == 0) throw DomainError("signature too small");
  if (from.re().size() != to.re().size()) throw DomainError("period points of different rank");
  TwistorChain chain;
  const Connector c{*this};
  if (!c.connect(from, to, 0, opts.max_subdivisions, chain)) throw NumericalError("no twistor chain found");
  if (chain.size() > opts.max_links) throw NumericalError("max_links exceeded");
  return chain;
}

}  // namespace hkt
