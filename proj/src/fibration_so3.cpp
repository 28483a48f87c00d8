#include "cayley/fibration_so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/numeric/odeint.hpp>

namespace cayley {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kA = 1.25;  // H(alpha) = B(5/4, 5/4) I_{sin^2 alpha}(5/4, 5/4) / 2

double half_beta() {
    static const double b = 0.5 * boost::math::beta(kA, kA);
    return b;
}

// Primitive from 0 written through x = sin^2(angle).
double partial_primitive(double sin_angle) { return half_beta() * boost::math::ibeta(kA, kA, sin_angle * sin_angle); }

void check_alpha_closed(double alpha) {
    if (!(alpha >= 0.0 && alpha <= kPi / 2)) throw std::domain_error("alpha must lie in [0, pi/2]");
}

void check_params(const SO3FibreParams& p) {
    if (!std::isfinite(p.v0) || !(p.v0 > 0.0)) throw std::domain_error("v0 must be finite and positive");
    if (!std::isfinite(p.c) || !(p.c >= 0.0)) throw std::domain_error("c must be finite and >= 0");
    if (!std::isfinite(p.F0) || p.F0 < 0.0) throw std::domain_error("F0 must be finite and >= 0");
    if (p.F0 == 0.0) throw std::domain_error("F0 = 0 has no fibre with u > 0 in the chart");
}

// du/dalpha on the invariant Cayley through (alpha, u), from the ODE, with
// sin and cos supplied separately so alpha near pi/2 keeps its precision.
double level_slope(double sa, double ca, double u, double v, double c) {
    const double r2 = u * (1.0 + v * v) / v;
    const double C = c + r2;
    return 2.0 * u * -(5.0 * C * ca * ca - r2 * sa * sa) / (4.0 * sa * ca * r2);
}

// u on the level set F0, for the angle alpha = pi/2 - eps.
double level_u_near_half_pi(double eps, const SO3FibreParams& p) {
    const double sa = std::cos(eps), ca = std::sin(eps);
    const double above = p.F0 - so3_threshold(p.v0, p.c);
    const double numer = above + 5.0 * p.c * p.v0 * partial_primitive(ca);
    return numer / (2.0 * std::pow(sa, 2.5) * std::sqrt(ca) * (p.v0 * p.v0 + 1.0));
}

// Bisection for a monotone function on [lo, hi]: returns x with f(x) ~ target.
template <class F>
double bisect(F f, double lo, double hi, double target, double tol, bool increasing) {
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool above = f(mid) > target;
        if (above == increasing)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double h_integrand(double alpha) {
    check_alpha_closed(alpha);
    return std::pow(std::sin(alpha) * std::cos(alpha), 1.5);
}

double H_primitive(double alpha) {
    check_alpha_closed(alpha);
    if (alpha <= kPi / 4) return partial_primitive(std::sin(alpha));
    // Symmetric about pi/4; evaluate the complement through cos for accuracy.
    return half_beta() - partial_primitive(std::cos(alpha));
}

double H_half_pi() { return half_beta(); }

SO3Velocity ode_rhs_so3(const SO3State& x, double c) {
    if (!(x.alpha > 0.0 && x.alpha < kPi / 2) || !(x.s > 0.0) || !(x.t > 0.0) || !(c >= 0.0))
        throw std::domain_error("state outside the SO(3) chart");
    const double sa = std::sin(x.alpha), ca = std::cos(x.alpha);
    const double r2 = x.s * x.s + x.t * x.t;
    const double C = c + r2;
    const double u = x.s * x.t;
    // (alpha', kappa) with s' = s kappa, t' = t kappa solves the reduced system.
    const double a_dir = 4.0 * sa * ca * r2;
    const double k_dir = -(5.0 * C * ca * ca - r2 * sa * sa);
    const double norm = std::hypot(a_dir, 2.0 * u * k_dir);
    SO3Velocity out;
    out.alpha = a_dir / norm;
    const double kappa = k_dir / norm;
    out.s = x.s * kappa;
    out.t = x.t * kappa;
    return out;
}

std::array<double, 7> cayley_residuals_so3(const SO3State& x, const SO3Velocity& v, double c) {
    const double sa = std::sin(x.alpha), ca = std::cos(x.alpha);
    const double s = x.s, t = x.t;
    const double r2 = s * s + t * t;
    const double C5 = 5.0 * (c + r2);
    return {
        r2 * sa * sa * ca * v.beta,
        ca * ca * (t * v.s - s * v.t),
        ca * ca * s * t * v.delta,
        -C5 * ca * ca * s * v.alpha + r2 * sa * sa * v.alpha * s - 2.0 * sa * ca * t * t * v.s -
            4.0 * ca * sa * s * s * v.s - 2.0 * sa * ca * s * t * v.t,
        C5 * ca * ca * t * v.alpha - r2 * sa * sa * v.alpha * t + 2.0 * sa * ca * s * s * v.t +
            4.0 * ca * sa * t * t * v.t + 2.0 * sa * ca * s * t * v.s,
        C5 * sa * ca * ca * v.beta * s - 2.0 * sa * ca * t * t * s * v.delta - r2 * sa * sa * sa * v.beta * s,
        -C5 * sa * ca * ca * v.beta * t - 2.0 * sa * ca * t * s * s * v.delta + r2 * sa * sa * sa * v.beta * t,
    };
}

double conserved_F(double alpha, double u, double v, double c) {
    check_alpha_closed(alpha);
    if (!(u >= 0.0) || !(v > 0.0) || !(c >= 0.0)) throw std::domain_error("conserved_F needs u >= 0, v > 0, c >= 0");
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    return 2.0 * std::pow(sa, 2.5) * std::sqrt(ca) * (v * v + 1.0) * u + 5.0 * c * v * H_primitive(alpha);
}

double level_set_u(double alpha, double F0, double v, double c) {
    if (!(alpha > 0.0 && alpha < kPi / 2)) throw std::domain_error("alpha must lie in (0, pi/2)");
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    return (F0 - 5.0 * c * v * H_primitive(alpha)) / (2.0 * std::pow(sa, 2.5) * std::sqrt(ca) * (v * v + 1.0));
}

std::string to_string(SO3Topology t) {
    switch (t) {
        case SO3Topology::R4_singular: return "R4_singular";
        case SO3Topology::O_minus_1: return "O_minus_1";
        case SO3Topology::R_x_S3: return "R_x_S3";
    }
    return "unknown";
}

double so3_threshold(double v0, double c) { return 5.0 * c * v0 * H_half_pi(); }

SO3Topology classify_so3(const SO3FibreParams& params) {
    check_params(params);
    if (params.c == 0.0) return SO3Topology::R_x_S3;
    const double threshold = so3_threshold(params.v0, params.c);
    if (std::abs(params.F0 - threshold) <= kThresholdTol) return SO3Topology::R4_singular;
    return params.F0 < threshold ? SO3Topology::O_minus_1 : SO3Topology::R_x_S3;
}

double so3_zero_alpha(const SO3FibreParams& params, double tol) {
    check_params(params);
    const auto topo = classify_so3(params);
    if (topo == SO3Topology::R4_singular) return kPi / 2;
    if (topo != SO3Topology::O_minus_1) throw std::domain_error("fibre does not reach u = 0 inside the chart");
    const double k = 5.0 * params.c * params.v0;
    return bisect([&](double a) { return k * H_primitive(a); }, 0.0, kPi / 2, params.F0, tol, true);
}

FibreCurveSO3 trace_level_set(const SO3FibreParams& params, int resolution) {
    if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
    FibreCurveSO3 curve;
    curve.params = params;
    curve.topology = classify_so3(params);

    double hi = kPi / 2;
    if (curve.topology != SO3Topology::R_x_S3) {
        hi = so3_zero_alpha(params);
        curve.zero_alpha = hi;
    }
    const bool singular = curve.topology == SO3Topology::R4_singular;
    curve.samples.reserve(resolution + 1);
    for (int i = 1; i <= resolution; ++i) {
        const double alpha = hi * i / (resolution + 1.0);
        double u;
        if (singular) {
            // Traced on the exact threshold value; the numerator is the tail of H.
            u = level_u_near_half_pi(kPi / 2 - alpha, {params.beta0, params.delta0, params.v0,
                                                        so3_threshold(params.v0, params.c), params.c});
        } else {
            u = level_set_u(alpha, params.F0, params.v0, params.c);
        }
        curve.samples.emplace_back(alpha, std::max(u, 0.0));
        const double F = conserved_F(alpha, u, params.v0, params.c);
        curve.conserved_drift = std::max(curve.conserved_drift, std::abs(F - params.F0) / params.F0);
    }
    if (curve.zero_alpha) curve.samples.emplace_back(*curve.zero_alpha, 0.0);
    return curve;
}

double u_min_locus(double u, double v, double c) {
    if (!(u > 0.0) || !(v > 0.0) || !(c >= 0.0)) throw std::domain_error("u_min_locus needs u > 0, v > 0, c >= 0");
    const double w = u * (v * v + 1.0);
    return std::acos(std::sqrt(w / (6.0 * w + 5.0 * c * v)));
}

double multi_moment_so3(double alpha, double u, double v, double c) {
    check_alpha_closed(alpha);
    if (!(u >= 0.0) || !(v > 0.0) || !(c >= 0.0)) throw std::domain_error("multi_moment_so3 needs u >= 0, v > 0, c >= 0");
    const double U = u * (1.0 + v * v) / v;
    const double ca = std::cos(alpha);
    return 5.0 / 6.0 * std::pow(c + U, 0.2) * (6.0 * U * ca * ca - U + 5.0 * c) - 25.0 / 6.0 * std::pow(c, 1.2);
}

ChartPointSO3 so3_chart_point(double alpha, double u, const SO3FibreParams& params) {
    ChartPointSO3 p;
    p.alpha = alpha;
    p.beta = params.beta0;
    p.theta = 1.1;
    p.phi = 0.4;
    p.s = std::sqrt(u * params.v0);
    p.t = std::sqrt(u / params.v0);
    p.delta = params.delta0;
    p.gamma = 0.7;
    p.c = params.c;
    return p;
}

FourPlane so3_tangent_plane(const StructurePack& pack, const SO3Velocity& vel) {
    auto coord = [](int i) {
        Vec8 e = Vec8::Zero();
        e[i] = 1.0;
        return e;
    };
    Vec8 V = Vec8::Zero();
    V[0] = vel.alpha;
    V[1] = vel.beta;
    V[4] = vel.s;
    V[5] = vel.t;
    V[6] = vel.delta;
    return FourPlane{{pack.from_coordinates(coord(7)), pack.from_coordinates(coord(2)),
                      pack.from_coordinates(coord(3)), pack.from_coordinates(V)}};
}

double so3_sample_eta(double alpha, double u, const SO3FibreParams& params) {
    const ChartPointSO3 p = so3_chart_point(alpha, u, params);
    const SO3State x{p.alpha, p.beta, p.s, p.t, p.delta};
    const StructurePack pack = build_so3_pack(p, SO3Basis::diagonalizing);
    return is_cayley(so3_tangent_plane(pack, ode_rhs_so3(x, p.c)), pack).residual;
}

double so3_max_eta(const FibreCurveSO3& curve) {
    double worst = 0.0;
    for (const auto& [alpha, u] : curve.samples) {
        if (!(u > 0.0) || !(alpha > 0.0 && alpha < kPi / 2)) continue;
        worst = std::max(worst, so3_sample_eta(alpha, u, curve.params));
    }
    return worst;
}

SO3Integration integrate_so3(const SO3State& start, double c, double arclength, int steps) {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    using State = std::array<double, 3>;  // alpha, s, t
    auto rhs = [&](const State& y, State& dy, double) {
        const auto v = ode_rhs_so3({y[0], start.beta, y[1], y[2], start.delta}, c);
        dy = {v.alpha, v.s, v.t};
    };
    boost::numeric::odeint::runge_kutta4<State> stepper;
    State y{start.alpha, start.s, start.t};
    const double h = arclength / steps;

    SO3Integration out;
    out.states.reserve(steps + 1);
    out.states.push_back(start);
    const double v0 = start.s / start.t;
    const double F0 = conserved_F(start.alpha, start.s * start.t, v0, c);
    for (int n = 0; n < steps; ++n) {
        stepper.do_step(rhs, y, n * h, h);
        out.states.push_back({y[0], start.beta, y[1], y[2], start.delta});
        const double v = y[1] / y[2];
        const double F = conserved_F(y[0], y[1] * y[2], v, c);
        out.max_F_drift = std::max(out.max_F_drift, std::abs(F - F0) / std::abs(F0));
        out.max_v_drift = std::max(out.max_v_drift, std::abs(v - v0) / v0);
    }
    return out;
}

RestrictedMetricSO3 restricted_metric_so3(double alpha, double u, double du_dalpha, double v, double c) {
    SO3FibreParams params;
    params.v0 = v;
    params.c = c;
    const ChartPointSO3 p = so3_chart_point(alpha, u, params);
    // The diagonal gram stays well conditioned as cos(alpha) -> 0, unlike the adapted one.
    const StructurePack pack = build_so3_pack(p, SO3Basis::diagonalizing);

    // Orbit directions dual to (sigma1, sigma2, sigma3) on the (theta, phi, gamma) slots.
    const double cg = std::cos(p.gamma), sg = std::sin(p.gamma);
    const double ct = std::cos(p.theta), st = std::sin(p.theta);
    Eigen::Matrix3d sig;
    sig << 0.0, ct, 1.0, cg, sg * st, 0.0, sg, -cg * st, 0.0;
    const Eigen::Matrix3d dual = sig.inverse();
    std::array<TangentVector, 4> vs;
    for (int i = 0; i < 3; ++i) {
        Vec8 X = Vec8::Zero();
        X[2] = dual(0, i);
        X[3] = dual(1, i);
        X[7] = dual(2, i);
        vs[i] = pack.from_coordinates(X);
    }
    Vec8 T = Vec8::Zero();
    T[0] = 1.0;
    T[4] = std::sqrt(v) * du_dalpha / (2.0 * std::sqrt(u));
    T[5] = du_dalpha / (2.0 * std::sqrt(u * v));
    vs[3] = pack.from_coordinates(T);

    RestrictedMetricSO3 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double gij = pack.metric.inner(vs[i], vs[j]);
            if (i == j) {
                if (i < 3)
                    out.sigma[i] = gij;
                else
                    out.dalpha = gij;
            } else {
                out.max_offdiag = std::max(out.max_offdiag, std::abs(gij));
            }
        }
    return out;
}

ConeReport asymptotic_cone_so3(const SO3FibreParams& params, SO3End end, double u_lo, double u_hi, int samples) {
    check_params(params);
    if (!(u_lo > 0.0 && u_hi > u_lo) || samples < 2) throw std::invalid_argument("bad fitting range");
    if (end == SO3End::alpha_to_pi_half && classify_so3(params) != SO3Topology::R_x_S3)
        throw std::domain_error("fibre does not reach large u as alpha -> pi/2");

    const double v = params.v0;
    const double w = (1.0 + v * v) / v;
    // alpha of the u-minimum separates the two monotone branches of the level set.
    const double alpha_split = [&] {
        double lo = 1e-9, hi = kPi / 2 - 1e-9;
        if (classify_so3(params) != SO3Topology::R_x_S3) hi = so3_zero_alpha(params) * (1.0 - 1e-12);
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (level_set_u(m1, params.F0, v, params.c) < level_set_u(m2, params.F0, v, params.c))
                hi = m2;
            else
                lo = m1;
        }
        return 0.5 * (lo + hi);
    }();

    std::vector<double> log_r, log_g;
    ConeReport rep;
    for (int k = 0; k < samples; ++k) {
        const double u = u_lo * std::pow(u_hi / u_lo, static_cast<double>(k) / (samples - 1));
        double alpha, sa, ca;
        if (end == SO3End::alpha_to_0) {
            alpha = bisect([&](double a) { return level_set_u(a, params.F0, v, params.c); }, 0.0, alpha_split, u,
                           1e-300, false);
            sa = std::sin(alpha);
            ca = std::cos(alpha);
        } else {
            const double eps = bisect([&](double e) { return level_u_near_half_pi(e, params); }, 0.0,
                                      kPi / 2 - alpha_split, u, 1e-300, false);
            alpha = kPi / 2 - eps;
            sa = std::cos(eps);
            ca = std::sin(eps);
        }
        const double slope = level_slope(sa, ca, u, v, params.c);
        const auto m = restricted_metric_so3(alpha, u, slope, v, params.c);
        const double r = 10.0 / 3.0 * std::pow(w, 0.3) * std::pow(u, 0.3);
        log_r.push_back(std::log(r));
        log_g.push_back(std::log(m.sigma[0]));
        if (k == samples - 1) {
            rep.r_max = r;
            rep.fibre_radius_max = std::sqrt(u * w);
            for (int i = 0; i < 3; ++i) rep.link_coeffs[i] = m.sigma[i] * 4.0 / (r * r);
            rep.radial_coeff = rep.link_coeffs[0];
            rep.squashing = m.sigma[0] / m.sigma[1];
            const double dr_dalpha = 0.3 * r / u * slope;
            rep.dr_coeff = m.dalpha / (dr_dalpha * dr_dalpha);
        }
    }
    // Least-squares slope of log g_11 against log r.
    const double n = static_cast<double>(log_r.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
        mx += log_r[i] / n;
        my += log_g[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
        sxy += (log_r[i] - mx) * (log_g[i] - my);
        sxx += (log_r[i] - mx) * (log_r[i] - mx);
    }
    rep.loglog_slope = sxy / sxx;
    return rep;
}

SingularModelReport singular_model_so3(double v0, double c, double eps) {
    if (!(c > 0.0) || !(v0 > 0.0) || !(eps > 0.0)) throw std::domain_error("singular model needs c > 0, v0 > 0");
    const double A = c * v0 / (1.0 + v0 * v0);
    const double alpha = kPi / 2 - eps;
    const double u = A * eps * eps;
    const auto m = restricted_metric_so3(alpha, u, -2.0 * A * eps, v0, c);
    SingularModelReport rep;
    for (int i = 0; i < 3; ++i) rep.sigma_ratios[i] = m.sigma[i] / m.sigma[0];
    rep.dalpha_coeff = m.dalpha;
    rep.sigma1_coeff = m.sigma[0] / (std::pow(c, 0.6) * eps * eps);
    return rep;
}

SmoothModelReport smooth_model_so3(double v0, double c, double alpha0, double eps) {
    if (!(c > 0.0) || !(v0 > 0.0) || !(alpha0 > 0.0 && alpha0 < kPi / 2) || !(eps > 0.0 && eps < alpha0))
        throw std::domain_error("smooth model needs c > 0, v0 > 0, alpha0 in (0, pi/2)");
    const double K = 5.0 * c * v0 / (2.0 * std::tan(alpha0) * (v0 * v0 + 1.0));
    const double u = K * eps;
    const auto m = restricted_metric_so3(alpha0 - eps, u, -K, v0, c);
    const double scale = std::sqrt((1.0 + v0 * v0) / (v0 * std::pow(c, 0.4)));
    const double r = scale * 2.0 * std::sqrt(u);
    const double dr_dalpha = scale * -K / std::sqrt(u);
    SmoothModelReport rep;
    rep.dr_ratio = m.dalpha / (dr_dalpha * dr_dalpha);
    rep.sigma1_ratio = m.sigma[0] / (r * r / 4.0);
    const double ca = std::cos(alpha0);
    rep.sigma23_ratio = 0.5 * (m.sigma[1] + m.sigma[2]) / (5.0 * std::pow(c, 0.6) * ca * ca);
    return rep;
}

}  // namespace cayley
