#include "cayley/cayley.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <stdexcept>

namespace cayley {

namespace {

// 2-form a ^ b of two coframe indices with a coefficient.
KForm pair(int a, int b, double coeff) { return KForm::basis({a, b}, coeff); }

}  // namespace

KForm triple_B(const TangentVector& u, const TangentVector& v, const TangentVector& w, const StructurePack& pack) {
    return interior(w, interior(v, interior(u, pack.phi)));
}

KForm pi7(const KForm& a, const StructurePack& pack) {
    if (a.degree() != 2) throw std::invalid_argument("pi7 expects a 2-form");
    // theta^i = flat(X_i) with X_i the metric dual of theta^i.
    std::array<TangentVector, kDim> dual;
    for (int i = 0; i < kDim; ++i) dual[i] = pack.metric.sharp(KForm::basis({i}));

    KForm out = a;
    for (const auto& [m, coeff] : a.terms()) {
        const auto idx = mask_indices(m);
        out += coeff * interior(dual[idx[0]], interior(dual[idx[1]], pack.phi));
    }
    return out * 0.25;
}

Pi7Matrix pi7_matrix(const StructurePack& pack) {
    const auto& masks = masks_of_degree(2);
    Pi7Matrix P;
    for (int col = 0; col < 28; ++col) {
        KForm e(2);
        e.add(masks[col], 1.0);
        const KForm image = pi7(e, pack);
        for (int row = 0; row < 28; ++row) P(row, col) = image.coeff(masks[row]);
    }
    return P;
}

double plane_volume(const FourPlane& plane, const MetricAtPoint& g) {
    Eigen::Matrix4d gram;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gram(i, j) = g.inner(plane.spanning[i], plane.spanning[j]);
    return std::sqrt(std::max(0.0, gram.determinant()));
}

namespace {

void require_independent(const FourPlane& plane, const MetricAtPoint& g) {
    double scale = 1.0;
    for (const auto& v : plane.spanning) scale *= g.inner(v, v);
    const double vol = plane_volume(plane, g);
    if (!(scale > 0.0) || !(vol * vol > 1e-10 * scale))
        throw std::domain_error("spanning vectors of the 4-plane are degenerate");
}

}  // namespace

KForm eta(const FourPlane& plane, const StructurePack& pack) {
    require_independent(plane, pack.metric);
    const auto& [u, v, w, y] = plane.spanning;
    const auto& g = pack.metric;
    const KForm sum = wedge(g.flat(u), triple_B(v, w, y, pack)) + wedge(g.flat(v), triple_B(w, u, y, pack)) +
                      wedge(g.flat(w), triple_B(u, v, y, pack)) + wedge(g.flat(y), triple_B(v, u, w, pack));
    return pi7(sum, pack);
}

CayleyTest is_cayley(const FourPlane& plane, const StructurePack& pack, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const KForm e = eta(plane, pack);
    const double vol = plane_volume(plane, pack.metric);
    CayleyTest out;
    out.residual = pack.metric.norm(e) / vol;
    const auto& s = plane.spanning;
    out.calibration = evaluate(pack.phi, {s[0], s[1], s[2], s[3]}) / vol;
    out.cayley = out.residual < tol;
    return out;
}

std::array<KForm, 7> lambda_basis(const StructurePack& pack) {
    if (pack.chart != ChartKind::so3 || pack.basis != SO3Basis::diagonalizing)
        throw std::invalid_argument("lambda basis lives in the diagonalizing SO(3) coframe");
    using namespace so3;
    const double alpha = pack.coords[0];
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double C5 = 5.0 * (pack.c + pack.r2);

    std::array<KForm, 7> l;
    l[0] = pair(kSigma2, kOmega1, -ca) + pair(kAlpha, kOmega2, 1.0) + pair(kBeta, kDt, 2.0 * sa) +
           pair(kSigma3, kDs, 2.0 * ca);
    l[1] = pair(kSigma2, kOmega2, ca) + pair(kAlpha, kOmega1, 1.0) + pair(kBeta, kDs, -2.0 * sa) +
           pair(kSigma3, kDt, 2.0 * ca);
    l[2] = pair(kSigma3, kOmega1, ca) + pair(kBeta, kOmega2, sa) + pair(kSigma2, kDs, 2.0 * ca) +
           pair(kAlpha, kDt, -2.0);
    l[3] = pair(kSigma3, kOmega2, -ca) + pair(kBeta, kOmega1, sa) + pair(kSigma2, kDt, 2.0 * ca) +
           pair(kAlpha, kDs, 2.0);
    l[4] = pair(kSigma3, kAlpha, C5 * ca) + pair(kSigma2, kBeta, C5 * sa * ca) + pair(kOmega2, kDs, 2.0) +
           pair(kOmega1, kDt, 2.0);
    l[5] = pair(kSigma3, kBeta, C5 * sa * ca) + pair(kSigma2, kAlpha, -C5 * ca) + pair(kOmega2, kOmega1, 1.0) +
           pair(kDt, kDs, 4.0);
    l[6] = pair(kBeta, kAlpha, C5 * sa) + pair(kSigma3, kSigma2, C5 * ca * ca) + pair(kDs, kOmega1, 2.0) +
           pair(kDt, kOmega2, -2.0);
    return l;
}

Pi7Report pi7_suite(const StructurePack& pack) {
    Pi7Report rep;
    // Coefficients in the active coframe scale with the metric, so the checks
    // run on the same operator written in an orthonormal coframe.
    const auto& masks = masks_of_degree(2);
    Pi7Matrix Q, Qinv;
    for (int j = 0; j < 28; ++j) {
        KForm e(2);
        e.add(masks[j], 1.0);
        Q.col(j) = pack.metric.to_orthonormal(e).dense();
        Qinv.col(j) = pack.metric.from_orthonormal(e).dense();
    }
    const Pi7Matrix P = Q * pi7_matrix(pack) * Qinv;
    rep.idempotence = (P * P - P).cwiseAbs().maxCoeff();
    const Eigen::JacobiSVD<Pi7Matrix> svd(P);
    const auto& sv = svd.singularValues();
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-8 * sv[0]) ++rep.rank;
    if (pack.chart == ChartKind::so3 && pack.basis == SO3Basis::diagonalizing) {
        double worst = 0.0;
        for (const auto& l : lambda_basis(pack)) worst = std::max(worst, (pi7(l, pack) - l).max_abs());
        rep.lambda_fixed = worst;
    }
    return rep;
}

StructurePack flat_pack() {
    StructurePack p;
    p.phi = flat_cayley_form();
    p.volume = KForm::basis({0, 1, 2, 3, 4, 5, 6, 7});
    p.metric = MetricAtPoint(Mat8::Identity());
    return p;
}

}  // namespace cayley
