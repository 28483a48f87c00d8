#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cayley/fibration_so3.hpp"
#include "oracles.hpp"

using namespace cayley;
using std::numbers::pi;

namespace {

double quad_H(double alpha) {
    return oracle::simpson([](double a) { return std::pow(std::sin(a) * std::cos(a), 1.5); }, 0.0, alpha, 1e-15);
}

SO3State random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a(0.05, pi / 2 - 0.05), st(0.1, 3.0), ang(0.0, 2 * pi);
    return {a(rng), ang(rng), st(rng), st(rng), ang(rng)};
}

double max_abs(const std::array<double, 7>& r) {
    double m = 0.0;
    for (double x : r) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("H(pi/2) matches quadrature and the Gamma-function value") {
    CHECK(std::abs(H_half_pi() - quad_H(pi / 2)) < 1e-12);
    const double gamma_form = std::tgamma(1.25) * std::tgamma(1.25) / (2.0 * std::tgamma(2.5));
    CHECK(H_half_pi() == doctest::Approx(gamma_form).epsilon(1e-14));
}

TEST_CASE("H primitive matches quadrature across the range") {
    for (double a : {0.0, 0.1, 0.4, 0.785, 1.0, 1.3, 1.5, pi / 2}) CHECK(std::abs(H_primitive(a) - quad_H(a)) < 1e-12);
    CHECK(h_integrand(0.7) == doctest::Approx(std::pow(std::sin(0.7) * std::cos(0.7), 1.5)));
    CHECK_THROWS_AS(H_primitive(-0.1), std::domain_error);
    CHECK_THROWS_AS(H_primitive(2.0), std::domain_error);
}

TEST_CASE("ODE velocities satisfy the seven residual equations") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> pert(-0.1, 0.1);
    for (double c : {0.0, 1.0, 2.5}) {
        for (int i = 0; i < 30; ++i) {
            const SO3State x = random_state(rng);
            const SO3Velocity v = ode_rhs_so3(x, c);
            CHECK(max_abs(cayley_residuals_so3(x, v, c)) < 1e-10);
            SO3Velocity w = v;
            w.alpha += 0.1;
            w.s -= 0.1;
            CHECK(max_abs(cayley_residuals_so3(x, w, c)) > 1e-6);
        }
    }
}

TEST_CASE("ODE velocities span Cayley planes with the pack geometry") {
    std::mt19937_64 rng(42);
    for (double c : {0.0, 1.0}) {
        for (int i = 0; i < 10; ++i) {
            const SO3State x = random_state(rng);
            const SO3FibreParams params{x.beta, x.delta, x.s / x.t, 1.0, c};
            const ChartPointSO3 p = so3_chart_point(x.alpha, x.s * x.t, params);
            const StructurePack pack = build_so3_pack(p, SO3Basis::diagonalizing);
            const SO3State on_chart{p.alpha, p.beta, p.s, p.t, p.delta};
            const SO3Velocity v = ode_rhs_so3(on_chart, c);
            CHECK(is_cayley(so3_tangent_plane(pack, v), pack).residual < 1e-9);
            SO3Velocity w = v;
            w.alpha += 0.1;
            CHECK(is_cayley(so3_tangent_plane(pack, w), pack).residual > 1e-6);
        }
    }
}

TEST_CASE("F and v are conserved by the ODE direction") {
    std::mt19937_64 rng(43);
    for (double c : {0.0, 1.0}) {
        for (int i = 0; i < 20; ++i) {
            const SO3State x = random_state(rng);
            const SO3Velocity v = ode_rhs_so3(x, c);
            const double u = x.s * x.t, vv = x.s / x.t;
            const double du = v.s * x.t + x.s * v.t;
            const double dv = (v.s * x.t - x.s * v.t) / (x.t * x.t);
            const double h = 1e-6;
            const double dF_da = (conserved_F(x.alpha + h, u, vv, c) - conserved_F(x.alpha - h, u, vv, c)) / (2 * h);
            const double dF_du = (conserved_F(x.alpha, u + h, vv, c) - conserved_F(x.alpha, u - h, vv, c)) / (2 * h);
            const double scale = std::abs(dF_da * v.alpha) + std::abs(dF_du * du);
            CHECK(std::abs(dF_da * v.alpha + dF_du * du) < 1e-7 * scale);
            CHECK(std::abs(dv) < 1e-14);
            CHECK(std::hypot(v.alpha, du) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(v.alpha > 0.0);
        }
    }
}

TEST_CASE("RK4 integration conserves F and v") {
    const SO3State start{0.3, 0.0, 1.2, 0.8, 0.0};
    const SO3Integration run = integrate_so3(start, 1.0, 0.5, 20000);
    CHECK(run.max_F_drift < 1e-8);
    CHECK(run.max_v_drift < 1e-8);
    CHECK(run.states.back().alpha > start.alpha);
    CHECK_THROWS_AS(integrate_so3(start, 1.0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("level sets solve F = F0") {
    for (double c : {0.0, 1.0}) {
        for (double a : {0.2, 0.7, 1.2}) {
            const double u = level_set_u(a, 3.0, 1.7, c);
            CHECK(conserved_F(a, u, 1.7, c) == doctest::Approx(3.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("topology follows the threshold on F0") {
    const double T = so3_threshold(1.0, 1.0);
    CHECK(T == doctest::Approx(5.0 * H_half_pi()));
    CHECK(classify_so3({0, 0, 1.0, 0.5 * T, 1.0}) == SO3Topology::O_minus_1);
    CHECK(classify_so3({0, 0, 1.0, T, 1.0}) == SO3Topology::R4_singular);
    CHECK(classify_so3({0, 0, 1.0, T + 0.5 * kThresholdTol, 1.0}) == SO3Topology::R4_singular);
    CHECK(classify_so3({0, 0, 1.0, T + 1e-6, 1.0}) == SO3Topology::R_x_S3);
    CHECK(classify_so3({0, 0, 1.0, T - 1e-6, 1.0}) == SO3Topology::O_minus_1);
    CHECK(classify_so3({0, 0, 1.0, 1e-3, 0.0}) == SO3Topology::R_x_S3);
    CHECK(to_string(SO3Topology::O_minus_1) == "O_minus_1");
}

TEST_CASE("invalid fibre parameters throw") {
    CHECK_THROWS_AS(classify_so3({0, 0, 1.0, 0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(classify_so3({0, 0, 1.0, -1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(classify_so3({0, 0, 0.0, 1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(classify_so3({0, 0, 1.0, 1.0, -1.0}), std::domain_error);
    CHECK_THROWS_AS(trace_level_set({0, 0, 1.0, 1.0, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(so3_zero_alpha({0, 0, 1.0, 100.0, 1.0}), std::domain_error);
}

TEST_CASE("the u = 0 endpoint solves F0 = 5 c v H(alpha0)") {
    for (double frac : {0.1, 0.5, 0.9, 0.999}) {
        const SO3FibreParams p{0, 0, 1.0, frac * so3_threshold(1.0, 1.0), 1.0};
        const double a0 = so3_zero_alpha(p);
        CHECK(a0 > 0.0);
        CHECK(a0 < pi / 2);
        // Independent root: bisection on the quadrature primitive.
        double lo = 0.0, hi = pi / 2;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (5.0 * quad_H(mid) < p.F0 ? lo : hi) = mid;
        }
        CHECK(std::abs(a0 - 0.5 * (lo + hi)) < 1e-10);
        CHECK(std::abs(conserved_F(a0, 0.0, 1.0, 1.0) - p.F0) < 1e-12);
    }
}

TEST_CASE("traced level sets are ordered and end where expected") {
    const double T = so3_threshold(1.0, 1.0);
    const FibreCurveSO3 o = trace_level_set({0, 0, 1.0, 0.5 * T, 1.0}, 50);
    CHECK(o.topology == SO3Topology::O_minus_1);
    REQUIRE(o.zero_alpha.has_value());
    CHECK(o.samples.back().first == *o.zero_alpha);
    CHECK(o.samples.back().second == 0.0);
    for (std::size_t i = 1; i < o.samples.size(); ++i) CHECK(o.samples[i].first > o.samples[i - 1].first);
    CHECK(o.conserved_drift < 1e-12);

    const FibreCurveSO3 s = trace_level_set({0, 0, 1.0, T, 1.0}, 50);
    CHECK(s.topology == SO3Topology::R4_singular);
    CHECK(*s.zero_alpha == pi / 2);

    const FibreCurveSO3 r = trace_level_set({0, 0, 1.0, 2 * T, 1.0}, 50);
    CHECK_FALSE(r.zero_alpha.has_value());
    CHECK(r.samples.size() == 50);
}

TEST_CASE("Cayley residual vanishes along traced fibres") {
    const double T = so3_threshold(1.3, 1.0);
    for (double F0 : {0.3 * T, T, 3.0 * T}) CHECK(so3_max_eta(trace_level_set({0.2, 0.4, 1.3, F0, 1.0}, 20)) < 1e-9);
    CHECK(so3_max_eta(trace_level_set({0, 0, 0.7, 2.0, 0.0}, 20)) < 1e-9);
}

TEST_CASE("u minimum locus agrees with direct minimization") {
    for (double c : {0.0, 1.0}) {
        for (double v : {0.5, 1.0, 2.0}) {
            const double F0 = so3_threshold(v, c) + 2.0;
            const double a_star =
                oracle::golden_min([&](double a) { return level_set_u(a, F0, v, c); }, 1e-3, pi / 2 - 1e-3, 1e-12);
            const double u_star = level_set_u(a_star, F0, v, c);
            CHECK(u_min_locus(u_star, v, c) == doctest::Approx(a_star).epsilon(1e-6));
        }
    }
}

TEST_CASE("restricted metric matches the closed form in (alpha, u, v)") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> a(0.1, 1.4), uu(0.1, 4.0), vv(0.3, 3.0), sl(-2.0, 2.0);
    for (double c : {0.0, 1.0, 2.5}) {
        for (int i = 0; i < 10; ++i) {
            const double alpha = a(rng), u = uu(rng), v = vv(rng), du = sl(rng);
            const double U = u * (1 + v * v) / v, K = c + U;
            const double base = 5 * std::pow(K, 0.6), fib = std::pow(K, -0.4);
            const double ca = std::cos(alpha), sa = std::sin(alpha);
            const auto m = restricted_metric_so3(alpha, u, du, v, c);
            CHECK(m.sigma[0] == doctest::Approx(fib * U).epsilon(1e-10));
            CHECK(m.sigma[1] == doctest::Approx(base * ca * ca + fib * U * sa * sa).epsilon(1e-10));
            CHECK(m.sigma[2] == doctest::Approx(base * ca * ca + fib * U * sa * sa).epsilon(1e-10));
            CHECK(m.dalpha == doctest::Approx(base + fib * (1 + v * v) / (u * v) * du * du).epsilon(1e-10));
            CHECK(m.max_offdiag < 1e-10 * (base + fib * U));
        }
    }
}

TEST_CASE("asymptotic cones at both ends") {
    const SO3FibreParams p{0, 0, 1.0, 1e6, 1.0};
    const ConeReport zero = asymptotic_cone_so3(p, SO3End::alpha_to_0, 1e10, 5e11);
    CHECK(zero.radial_coeff == doctest::Approx(9.0 / 25.0).epsilon(0.01));
    CHECK(zero.link_coeffs[1] == doctest::Approx(9.0 / 5.0).epsilon(0.01));
    CHECK(zero.squashing == doctest::Approx(0.2).epsilon(0.01));
    CHECK(zero.dr_coeff == doctest::Approx(1.0).epsilon(0.01));
    CHECK(zero.loglog_slope == doctest::Approx(2.0).epsilon(0.01));

    const ConeReport half = asymptotic_cone_so3(p, SO3End::alpha_to_pi_half, 1e10, 5e11);
    CHECK(half.radial_coeff == doctest::Approx(9.0 / 25.0).epsilon(0.01));
    CHECK(half.squashing == doctest::Approx(1.0).epsilon(0.01));
    CHECK(half.dr_coeff == doctest::Approx(1.0).epsilon(0.01));
    CHECK(half.fibre_radius_max == doctest::Approx(1e6).epsilon(0.01));

    CHECK_THROWS_AS(asymptotic_cone_so3({0, 0, 1.0, 1.0, 1.0}, SO3End::alpha_to_pi_half), std::domain_error);
}

TEST_CASE("singular and smooth local models") {
    const SingularModelReport s = singular_model_so3(1.0, 1.0);
    CHECK(s.sigma_ratios[1] == doctest::Approx(6.0).epsilon(0.02));
    CHECK(s.sigma_ratios[2] == doctest::Approx(6.0).epsilon(0.02));
    CHECK(s.dalpha_coeff == doctest::Approx(9.0).epsilon(0.02));
    CHECK(s.sigma1_coeff == doctest::Approx(1.0).epsilon(0.02));
    const SingularModelReport s2 = singular_model_so3(2.0, 2.5);
    CHECK(s2.dalpha_coeff == doctest::Approx(9.0 * std::pow(2.5, 0.6)).epsilon(0.02));

    const SmoothModelReport m = smooth_model_so3(1.0, 1.0, 0.8);
    CHECK(m.dr_ratio == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(m.sigma1_ratio == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(m.sigma23_ratio == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("SO(3) multi-moment map anchors") {
    for (double c : {0.0, 1.0, 2.5})
        for (double a : {0.0, 0.5, pi / 2}) CHECK(std::abs(multi_moment_so3(a, 0.0, 1.3, c)) < 1e-12);
    // c = 0: (5/6) U^{6/5} (6 cos^2 alpha - 1), zero where cos^2 alpha = 1/6.
    const double a6 = std::acos(1.0 / std::sqrt(6.0));
    CHECK(std::abs(multi_moment_so3(a6, 2.0, 1.0, 0.0)) < 1e-12);
    CHECK(multi_moment_so3(0.0, 2.0, 1.0, 0.0) == doctest::Approx(5.0 / 6.0 * std::pow(4.0, 1.2) * 5.0));
}

TEST_CASE("ODE integration follows the closed-form level set") {
    for (double c : {0.0, 1.0}) {
        const SO3State start{0.3, 0.0, 2.0, 1.0, 0.0};
        const double v = start.s / start.t;
        const double F0 = conserved_F(start.alpha, start.s * start.t, v, c);
        const SO3Integration run = integrate_so3(start, c, 1.0, 5000);
        double worst = 0.0;
        for (const auto& x : run.states) worst = std::max(worst, std::abs(x.s * x.t - level_set_u(x.alpha, F0, v, c)));
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("SO(3) multi-moment map is negative beyond its zero set and positive before it") {
    for (double c : {0.0, 1.0}) {
        int checked = 0;
        for (double u = 0.05; u < 3.0; u += 0.1) {
            const double U = 2.0 * u;  // v = 1
            const double cos2 = (U - 5 * c + 5 * std::pow(c, 1.2) * std::pow(c + U, -0.2)) / (6 * U);
            for (double a = 0.01; a < pi / 2; a += 0.02) {
                const double gap = std::cos(a) * std::cos(a) - cos2;
                if (std::abs(gap) < 1e-6) continue;
                const double nu = multi_moment_so3(a, u, 1.0, c);
                CHECK((nu > 0.0) == (gap > 0.0));
                ++checked;
            }
        }
        CHECK(checked > 1000);
    }
}
