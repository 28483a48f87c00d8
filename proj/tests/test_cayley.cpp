#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "cayley/cayley.hpp"
#include "oracles.hpp"

using namespace cayley;

namespace {

// Gram-Schmidt in the metric g.
std::array<TangentVector, 3> orthonormal_triple(std::mt19937_64& rng, const MetricAtPoint& g) {
    std::array<TangentVector, 3> out;
    for (int i = 0; i < 3; ++i) {
        TangentVector v(oracle::random_vec(rng));
        for (int j = 0; j < i; ++j) v -= g.inner(v, out[j]) * out[j];
        out[i] = (1.0 / std::sqrt(g.inner(v, v))) * v;
    }
    return out;
}

// The plane spanned by an orthonormal triple and its triple cross product is
// Cayley; this builds it from Phi and the metric alone.
FourPlane cross_product_plane(std::mt19937_64& rng, const StructurePack& pack) {
    const auto t = orthonormal_triple(rng, pack.metric);
    Vec8 comps = Vec8::Zero();
    for (int a = 0; a < 8; ++a)
        comps[a] = evaluate(pack.phi, {t[0], t[1], t[2], TangentVector::unit(a)});
    const TangentVector y = pack.metric.sharp(KForm::one_form(comps));
    return {{t[0], t[1], t[2], y}};
}

FourPlane random_plane(std::mt19937_64& rng) {
    return {{TangentVector(oracle::random_vec(rng)), TangentVector(oracle::random_vec(rng)),
             TangentVector(oracle::random_vec(rng)), TangentVector(oracle::random_vec(rng))}};
}

// Matrix of a |-> *(Phi ^ a) on 2-forms, dense coefficient order.
Eigen::MatrixXd star_phi_wedge(const StructurePack& pack) {
    const auto& masks = masks_of_degree(2);
    Eigen::MatrixXd t(28, 28);
    for (int j = 0; j < 28; ++j) {
        KForm e(2);
        e.add(masks[j], 1.0);
        t.col(j) = hodge_star(wedge(pack.phi, e), pack.metric, pack.volume).dense();
    }
    return t;
}

std::vector<StructurePack> sample_packs() {
    std::mt19937_64 rng(31);
    std::vector<StructurePack> packs{flat_pack()};
    for (double c : {0.0, 1.0}) {
        const ChartPointSO3 p = sample_so3_point(rng, c);
        packs.push_back(build_so3_pack(p, SO3Basis::diagonalizing));
        packs.push_back(build_so3_pack(p, SO3Basis::adapted));
        packs.push_back(build_sp1_pack(sample_sp1_point(rng, c)));
    }
    return packs;
}

}  // namespace

TEST_CASE("pi7 is a rank seven projector") {
    for (const auto& pack : sample_packs()) {
        const Pi7Report rep = pi7_suite(pack);
        CHECK(rep.idempotence < 1e-10);
        CHECK(rep.rank == 7);
    }
}

TEST_CASE("pi7 agrees with the spectral projector of *(Phi ^ .)") {
    for (const auto& pack : sample_packs()) {
        const Eigen::MatrixXd t = star_phi_wedge(pack);
        // Eigenvalues are 3 (multiplicity 7) and -1 (multiplicity 21) up to an
        // overall sign fixed by the orientation; pick the one with seven.
        Eigen::EigenSolver<Eigen::MatrixXd> es(t);
        int plus3 = 0;
        for (int i = 0; i < 28; ++i) plus3 += std::abs(es.eigenvalues()[i].real() - 3.0) < 1e-6;
        const double sign = plus3 == 7 ? 1.0 : -1.0;
        const Eigen::MatrixXd expected = (Eigen::MatrixXd::Identity(28, 28) + sign * t) / 4.0;
        const Eigen::MatrixXd p = pi7_matrix(pack);
        CHECK((p - expected).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + expected.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("the explicit Lambda^2_7 basis is fixed by pi7") {
    std::mt19937_64 rng(32);
    const StructurePack pack = build_so3_pack(sample_so3_point(rng, 1.0), SO3Basis::diagonalizing);
    const Pi7Report rep = pi7_suite(pack);
    REQUIRE(rep.lambda_fixed.has_value());
    CHECK(*rep.lambda_fixed < 1e-10);
    const auto basis = lambda_basis(pack);
    for (const auto& l : basis) CHECK(l.degree() == 2);
    CHECK_THROWS_AS(lambda_basis(build_so3_pack(sample_so3_point(rng, 1.0), SO3Basis::adapted)), std::invalid_argument);
    CHECK_THROWS_AS(lambda_basis(build_sp1_pack(sample_sp1_point(rng, 1.0))), std::invalid_argument);
}

TEST_CASE("triple cross product planes are Cayley in every pack") {
    std::mt19937_64 rng(33);
    for (const auto& pack : sample_packs()) {
        for (int i = 0; i < 10; ++i) {
            const FourPlane plane = cross_product_plane(rng, pack);
            const CayleyTest t = is_cayley(plane, pack, 1e-8);
            CHECK(t.cayley);
            CHECK(t.residual < 1e-10);
            CHECK(std::abs(t.calibration) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("generic planes obey the calibration inequality and are not Cayley") {
    std::mt19937_64 rng(34);
    const StructurePack flat = flat_pack();
    for (int i = 0; i < 50; ++i) {
        const CayleyTest t = is_cayley(random_plane(rng), flat, 1e-8);
        CHECK(std::abs(t.calibration) <= 1.0 + 1e-12);
        CHECK_FALSE(t.cayley);
        CHECK(t.residual > 1e-4);
    }
}

TEST_CASE("residual is independent of the spanning set") {
    std::mt19937_64 rng(35);
    const StructurePack flat = flat_pack();
    const FourPlane p = random_plane(rng);
    Eigen::Matrix4d m;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = u(rng) + (i == j ? 2.0 : 0.0);
    FourPlane q;
    for (int i = 0; i < 4; ++i) {
        q.spanning[i] = TangentVector();
        for (int j = 0; j < 4; ++j) q.spanning[i] += m(i, j) * p.spanning[j];
    }
    const double scale = std::abs(m.determinant());
    CHECK(plane_volume(q, flat.metric) == doctest::Approx(scale * plane_volume(p, flat.metric)).epsilon(1e-12));
    CHECK(is_cayley(q, flat).residual == doctest::Approx(is_cayley(p, flat).residual).epsilon(1e-10));
}

TEST_CASE("coordinate planes of the flat model") {
    const StructurePack flat = flat_pack();
    auto plane = [](int a, int b, int c, int d) {
        return FourPlane{{TangentVector::unit(a), TangentVector::unit(b), TangentVector::unit(c), TangentVector::unit(d)}};
    };
    CHECK(is_cayley(plane(0, 1, 2, 3), flat).cayley);
    CHECK(is_cayley(plane(4, 5, 6, 7), flat).cayley);
    // Phi has no dx0 dx1 dx2 da0 term: that plane is far from Cayley.
    CHECK(is_cayley(plane(0, 1, 2, 4), flat).residual > 0.5);
}

TEST_CASE("SO(3) vertical and horizontal coordinate planes are Cayley") {
    std::mt19937_64 rng(36);
    const StructurePack pack = build_so3_pack(sample_so3_point(rng, 1.0), SO3Basis::diagonalizing);
    using namespace so3;
    const FourPlane vertical{{pack.frame(kDs), pack.frame(kDt), pack.frame(kOmega1), pack.frame(kOmega2)}};
    const FourPlane horizontal{{pack.frame(kSigma2), pack.frame(kSigma3), pack.frame(kAlpha), pack.frame(kBeta)}};
    CHECK(is_cayley(vertical, pack).residual < 1e-12);
    CHECK(is_cayley(horizontal, pack).residual < 1e-12);
    // In the ordering (ds, dt, omega1, omega2) the vertical fibre is calibrated
    // with the negative orientation; swapping omega1 and omega2 flips it.
    CHECK(is_cayley(vertical, pack).calibration == doctest::Approx(-1.0).epsilon(1e-12));
    const FourPlane swapped{{pack.frame(kDs), pack.frame(kDt), pack.frame(kOmega2), pack.frame(kOmega1)}};
    CHECK(is_cayley(swapped, pack).calibration == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eta is linear in each slot and vanishes on Cayley planes") {
    std::mt19937_64 rng(37);
    const StructurePack flat = flat_pack();
    FourPlane p = random_plane(rng);
    const KForm e1 = eta(p, flat);
    p.spanning[2] = 2.5 * p.spanning[2];
    CHECK((eta(p, flat) - 2.5 * e1).max_abs() < 1e-12);
    CHECK(eta(cross_product_plane(rng, flat), flat).max_abs() < 1e-12);
}

TEST_CASE("degenerate spanning sets throw") {
    const StructurePack flat = flat_pack();
    const FourPlane p{{TangentVector::unit(0), TangentVector::unit(1), TangentVector::unit(2), TangentVector::unit(1)}};
    CHECK_THROWS_AS(eta(p, flat), std::domain_error);
    CHECK_THROWS_AS(is_cayley(p, flat), std::domain_error);
}

TEST_CASE("triple_B is the contraction Phi(u, v, w, .)") {
    std::mt19937_64 rng(38);
    const StructurePack flat = flat_pack();
    const TangentVector u(oracle::random_vec(rng)), v(oracle::random_vec(rng)), w(oracle::random_vec(rng)),
        y(oracle::random_vec(rng));
    CHECK(evaluate(triple_B(u, v, w, flat), {y}) == doctest::Approx(evaluate(flat.phi, {u, v, w, y})).epsilon(1e-12));
}

TEST_CASE("residual is unchanged by permuting the spanning vectors") {
    std::mt19937_64 rng(39);
    const StructurePack pack = build_so3_pack(sample_so3_point(rng, 1.0));
    FourPlane p;
    for (auto& v : p.spanning) v = TangentVector(oracle::random_vec(rng));
    const double base = is_cayley(p, pack).residual;
    std::array<int, 4> idx{0, 1, 2, 3};
    while (std::next_permutation(idx.begin(), idx.end())) {
        FourPlane q;
        for (int i = 0; i < 4; ++i) q.spanning[i] = p.spanning[idx[i]];
        CHECK(std::abs(is_cayley(q, pack).residual - base) < 1e-8 * (1.0 + base));
    }
}
