#pragma once

// SU(2)-invariant Cayley fibration in the SO(3) x Id_2 chart.
//
// Invariant Cayleys are curves in (alpha, beta, s, t, delta) on which beta,
// delta and v = s/t are constant. With u = st, each curve is a level set of
//     F = 2 sin^{5/2}(alpha) cos^{1/2}(alpha) (v^2 + 1) u + 5 c v H(alpha),
// H being the primitive of (sin cos)^{3/2} with H(0) = 0.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cayley/cayley.hpp"

namespace cayley {

/// Integrand (sin(alpha) cos(alpha))^{3/2}.
double h_integrand(double alpha);
/// Primitive of h_integrand with H(0) = 0, alpha in [0, pi/2].
double H_primitive(double alpha);
/// H(pi/2) = Gamma(5/4)^2 / (2 Gamma(5/2)).
double H_half_pi();

struct SO3State {
    double alpha = 0.0, beta = 0.0, s = 0.0, t = 0.0, delta = 0.0;
};

struct SO3Velocity {
    double alpha = 0.0, beta = 0.0, s = 0.0, t = 0.0, delta = 0.0;
};

/// Tangent of the invariant Cayley through a state, unit speed in (alpha, u).
/// alpha increases along the returned direction.
SO3Velocity ode_rhs_so3(const SO3State& x, double c);

/// The seven scalar equations an invariant Cayley satisfies, evaluated on an
/// arbitrary velocity. All vanish exactly on Cayley tangents.
std::array<double, 7> cayley_residuals_so3(const SO3State& x, const SO3Velocity& v, double c);

double conserved_F(double alpha, double u, double v, double c);

/// The curve u(alpha) on the level set F = F0 (may be negative outside the fibre).
double level_set_u(double alpha, double F0, double v, double c);

enum class SO3Topology { R4_singular, O_minus_1, R_x_S3 };
std::string to_string(SO3Topology t);

struct SO3FibreParams {
    double beta0 = 0.0;
    double delta0 = 0.0;
    double v0 = 1.0;
    double F0 = 1.0;
    double c = 0.0;
};

/// Topology threshold on F0: 5 c v0 H(pi/2).
double so3_threshold(double v0, double c);

/// Absolute tolerance on F0 for the singular (threshold) fibre.
inline constexpr double kThresholdTol = 1e-9;

struct FibreCurveSO3 {
    std::vector<std::pair<double, double>> samples;  // (alpha, u), alpha strictly increasing
    SO3FibreParams params;
    SO3Topology topology = SO3Topology::R_x_S3;
    /// Max |F(sample) - F0| / |F0| over interior samples.
    double conserved_drift = 0.0;
    /// alpha where u reaches 0, when it does (alpha0 < pi/2, or pi/2 for the singular fibre).
    std::optional<double> zero_alpha;
};

SO3Topology classify_so3(const SO3FibreParams& params);
inline SO3Topology classify_so3(const FibreCurveSO3& curve) { return classify_so3(curve.params); }

/// Root of F0 = 5 c v0 H(alpha) in (0, pi/2), by bisection to `tol`.
double so3_zero_alpha(const SO3FibreParams& params, double tol = 1e-12);

/// Samples the level set on `resolution` interior points of its alpha range.
/// For fibres reaching u = 0 the endpoint (alpha0, 0) is appended.
FibreCurveSO3 trace_level_set(const SO3FibreParams& params, int resolution = 200);

/// alpha at which u(alpha) is minimal on the level set through (u, v).
double u_min_locus(double u, double v, double c);

double multi_moment_so3(double alpha, double u, double v, double c);

/// Chart point on the curve with given (alpha, u), orbit coordinates fixed.
ChartPointSO3 so3_chart_point(double alpha, double u, const SO3FibreParams& params);

/// The invariant 4-plane {d/dgamma, d/dtheta, d/dphi, velocity} at a chart
/// point, written in the frame of `pack`.
FourPlane so3_tangent_plane(const StructurePack& pack, const SO3Velocity& velocity);

/// Cayley residual of the invariant 4-plane at one point of a fibre; u > 0.
double so3_sample_eta(double alpha, double u, const SO3FibreParams& params);

/// Max Cayley residual over the curve samples with u > 0.
double so3_max_eta(const FibreCurveSO3& curve);

struct SO3Integration {
    std::vector<SO3State> states;
    double max_F_drift = 0.0;  // relative
    double max_v_drift = 0.0;  // relative
};

/// Fixed-step RK4 integration of ode_rhs_so3 over the given (alpha, u)
/// arclength; the step count is `steps`.
SO3Integration integrate_so3(const SO3State& start, double c, double arclength, int steps);

/// Restricted metric on the invariant 4-fold through (alpha, u) with slope
/// du/dalpha: coefficients of sigma_1^2, sigma_2^2, sigma_3^2 and dalpha^2,
/// plus the largest off-diagonal entry. Computed from the pack metric.
struct RestrictedMetricSO3 {
    std::array<double, 3> sigma{};
    double dalpha = 0.0;
    double max_offdiag = 0.0;
};
RestrictedMetricSO3 restricted_metric_so3(double alpha, double u, double du_dalpha, double v, double c);

enum class SO3End { alpha_to_0, alpha_to_pi_half };

struct ConeReport {
    /// sigma_1 coefficient divided by r^2 / 4 at the largest sampled radius.
    double radial_coeff = 0.0;
    /// All three sigma coefficients divided by r^2 / 4.
    std::array<double, 3> link_coeffs{};
    /// sigma_1 coefficient over sigma_2 coefficient.
    double squashing = 0.0;
    /// Coefficient of dr^2 in the cone radius r.
    double dr_coeff = 0.0;
    /// Fitted exponent of the sigma_1 coefficient against r (2 for a cone).
    double loglog_slope = 0.0;
    double r_max = 0.0;
    /// sqrt(s^2 + t^2) at the largest sample.
    double fibre_radius_max = 0.0;
};

/// Asymptotic cone of a fibre at one of its unbounded ends, fitted over
/// u in [u_lo, u_hi] (log-spaced samples). r = (10/3)((1+v^2)/v)^{3/10} u^{3/10}.
ConeReport asymptotic_cone_so3(const SO3FibreParams& params, SO3End end, double u_lo = 1e4, double u_hi = 1e6,
                               int samples = 21);

struct SingularModelReport {
    std::array<double, 3> sigma_ratios{};  // normalized by the sigma_1 coefficient
    double dalpha_coeff = 0.0;
    double sigma1_coeff = 0.0;  // divided by c^{3/5} (alpha - pi/2)^2
};

/// Restricted metric along u = A (alpha - pi/2)^2, A = c v0 / (1 + v0^2),
/// evaluated at alpha = pi/2 - eps.
SingularModelReport singular_model_so3(double v0, double c, double eps = 1e-3);

struct SmoothModelReport {
    /// Each ratio is 1 for the smooth limit dr^2 + r^2 sigma_1^2/4 + 5 c^{3/5} cos^2(alpha0)(sigma_2^2 + sigma_3^2).
    double dr_ratio = 0.0;
    double sigma1_ratio = 0.0;
    double sigma23_ratio = 0.0;
};

/// Restricted metric along the linear model at a u = 0 endpoint alpha0 < pi/2,
/// evaluated at alpha = alpha0 - eps.
SmoothModelReport smooth_model_so3(double v0, double c, double alpha0, double eps = 1e-6);

}  // namespace cayley
