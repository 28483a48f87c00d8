#pragma once

// Sp(1)-invariant Cayley fibration in the Sp(1) x Id_1 chart.
//
// After fixing the direction of (a0..a3) the invariant Cayleys are curves in
// the strip (alpha, r) in [-pi/2, pi/2] x [0, inf), integral curves of
//     X = (f1, f2),
//     f1 = cos(alpha) (-f cos^2(alpha) + 3 l^2 g r^2),
//     f2 = l (l^2 g r^2 - 3 f cos^2(alpha)) r,
// with l = (sin(alpha) - 1)/2, f = 5 (c + r^2)^{3/5}, g = 4 (c + r^2)^{-2/5}.
//
// Curves are integrated in (log(alpha + pi/2), log r) so that both the
// escape to r -> inf and the approach to alpha = -pi/2 stay resolved.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cayley/cayley.hpp"

namespace cayley {

struct Sp1PhaseState {
    double alpha = 0.0;
    double r = 0.0;
    double c = 0.0;

    double l() const;
    double f() const;
    double g() const;
};

/// The vector field X at a point of the closed strip.
std::pair<double, double> f1_f2(const Sp1PhaseState& x);

/// Curve where f1 changes sign (vertical tangents). -pi/2 at r = 0 for c > 0.
double alpha_c(double r, double c);
/// Curve where f2 changes sign (horizontal tangents).
double beta_c(double r, double c);

enum class Sp1Direction { forward, backward };

enum class Sp1EventKind {
    alpha_c_crossing,
    beta_c_crossing,
    reached_half_pi,       // alpha -> pi/2 at finite r
    escape_minus_half_pi,  // r -> r_max with alpha near -pi/2
    escape_asymptote,      // r -> r_max with alpha near arcsin(-1/4)
    corner,                // (alpha, r) -> (-pi/2, 0)
    r_to_zero,
    exact_solution,
    stalled,               // arclength or step budget exhausted
};
std::string to_string(Sp1EventKind k);

struct Sp1Event {
    Sp1EventKind kind = Sp1EventKind::stalled;
    Sp1Direction direction = Sp1Direction::forward;
    double alpha = 0.0;
    /// alpha + pi/2, kept separately since alpha itself loses it near -pi/2.
    double offset = 0.0;
    double r = 0.0;
    double arclength = 0.0;
};

struct Sp1Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Width of the arclength bracket when refining an event.
    double event_tol = 1e-12;
    double r_max = 1e8;
    double r_min = 1e-8;
    /// Distance from pi/2 at which the flow switches to the graph form.
    double half_pi_margin = 1e-6;
    /// Capture radius around (-pi/2, 0) in the (alpha, r) plane.
    double corner_radius = 1e-3;
    double max_arclength = 1e4;
    int max_steps = 200000;
};

enum class Sp1Topology { S3_x_R, R4_blue, R4_green, S4_zero_section, vertical_fibre };
std::string to_string(Sp1Topology t);

struct Sp1Sample {
    double alpha = 0.0;
    double r = 0.0;
    double offset = 0.0;  // alpha + pi/2
};

struct FibreCurveSp1 {
    /// Ordered along the flow of X: backward end first.
    std::vector<Sp1Sample> samples;
    Sp1PhaseState launch;
    std::optional<Sp1Topology> topology;
    std::vector<Sp1Event> events;
    /// Terminal event of each half; absent for a one-sided integration.
    std::optional<Sp1Event> backward_end;
    std::optional<Sp1Event> forward_end;
    /// Radius at which the curve meets alpha = pi/2.
    std::optional<double> r0;
    /// dr/dalpha where the flow switched to the graph form near pi/2.
    std::optional<double> dr_dalpha_at_switch;
};

/// One half of a fibre. Samples are in integration order.
FibreCurveSp1 integrate_fibre(const Sp1PhaseState& launch, Sp1Direction direction, const Sp1Options& opts = {});

/// Both halves through the launch point, joined and classified. Launches on
/// r = 0 or alpha = -pi/2 return the exact solutions.
FibreCurveSp1 trace_fibre(const Sp1PhaseState& launch, const Sp1Options& opts = {});

/// The fibre leaving the corner (-pi/2, 0) along r = sqrt(5c/4) (alpha + pi/2),
/// launched at alpha + pi/2 = offset. Requires c > 0.
FibreCurveSp1 corner_fibre(double c, double offset = 5e-4, const Sp1Options& opts = {});

/// Reads the topology off the end events; throws if the ends are unresolved.
Sp1Topology classify_sp1(const FibreCurveSp1& curve);

double multi_moment_sp1(double alpha, double r, double c);

struct RestrictedMetricSp1 {
    double sigma_coeff = 0.0;
    double dr_coeff = 0.0;
    double dalpha_coeff = 0.0;
};

/// Closed-form coefficients of the metric on the invariant 4-fold.
RestrictedMetricSp1 restricted_metric_sp1(double alpha, double r, double c);
RestrictedMetricSp1 restricted_metric_sp1(const FibreCurveSp1& curve, std::size_t sample);
/// The same coefficients read off the pack metric on the orbit and radial directions.
RestrictedMetricSp1 restricted_metric_sp1_from_pack(double alpha, double r, double c);

struct Sp1ConeReport {
    /// sigma coefficient over s^2, s = (10/3) r^{3/5}.
    double link_coeff = 0.0;
    /// Coefficient of ds^2 along the curve.
    double ds_coeff = 0.0;
    double alpha = 0.0;
    double r = 0.0;
};

/// Cone data at an escape event of the curve.
Sp1ConeReport sp1_cone_at(const Sp1Event& escape, double c);

struct Sp1SmoothnessReport {
    /// sigma coefficient over 5 (c + r0^2)^{3/5} (alpha - pi/2)^2.
    double sigma_ratio = 0.0;
    /// dalpha^2 coefficient along the curve over 5 (c + r0^2)^{3/5}.
    double dalpha_ratio = 0.0;
};

/// Smoothness at the pi/2 end of a blue fibre, at alpha = pi/2 - eps.
Sp1SmoothnessReport sp1_smoothness(const FibreCurveSp1& curve, double eps = 1e-3);

/// Fixed orbit position and fibre direction used to lift phase-plane points.
ChartPointSp1 sp1_chart_point(double alpha, double r, double c);

/// {d/dgamma1, d/dgamma2, d/dgamma3, alpha' d/dalpha + r' n.d/da} in the pack frame.
FourPlane sp1_tangent_plane(const StructurePack& pack, double dalpha, double dr);

struct Sp1EtaReport {
    double max_eta = 0.0;
    int evaluated = 0;
    int skipped = 0;  // samples too close to alpha = +-pi/2 or r = 0 to lift
};

/// Cayley residual at one sample with X as the velocity; empty when the
/// sample is within min_offset of alpha = +-pi/2 or has r = 0.
std::optional<double> sp1_sample_eta(const Sp1Sample& s, double c, double min_offset = 1e-6);

/// Max Cayley residual over the curve samples, using X as the velocity.
Sp1EtaReport verify_cayley_sp1(const FibreCurveSp1& curve, double min_offset = 1e-6);

/// Residual of the vertical fibre's tangent plane at alpha = -pi/2 + offset.
double vertical_fibre_eta(double r, double c, double offset = 1e-4);

struct PhaseGridRow {
    double alpha, r, f1, f2;
};

/// Cell-centred grid on (-pi/2, pi/2) x (0, r_max).
std::vector<PhaseGridRow> phase_portrait_grid(double c, int n_alpha, int n_r, double r_max);

/// Grid points whose (f1, f2) signs disagree with the regions cut out by
/// alpha_c (f1 > 0 on its left) and beta_c (f2 > 0 on its right).
int phase_sign_mismatches(const std::vector<PhaseGridRow>& grid, double c);

/// Polyline (alpha, r) of alpha_c or beta_c for r in (0, r_max].
std::vector<std::pair<double, double>> critical_curve(bool alpha_curve, double c, double r_max, int n);

}  // namespace cayley
