#pragma once

// Bryant-Salamon Spin(7) data on the negative spinor bundle of S^4, in two
// coordinate charts adapted to SU(2) actions.
//
// Every form in a StructurePack is expressed in the pack's active coframe.
// The coframe itself is recorded as a matrix over coordinate differentials so
// tangent vectors given in coordinates can be moved into the active frame.

#include <array>
#include <random>

#include "cayley/exterior.hpp"

namespace cayley {

/// Chart adapted to SO(3) x Id_2 acting on S^4.
/// Coordinate order: (alpha, beta, theta, phi, s, t, delta, gamma).
struct ChartPointSO3 {
    double alpha = 0.0, beta = 0.0, theta = 0.0, phi = 0.0;
    double s = 0.0, t = 0.0, delta = 0.0, gamma = 0.0;
    double c = 0.0;

    Coords coords() const { return {alpha, beta, theta, phi, s, t, delta, gamma}; }
    static ChartPointSO3 from_coords(const Coords& x, double c);
    double r2() const { return s * s + t * t; }
};

/// Chart adapted to Sp(1) x Id_1 acting on S^4.
/// Coordinate order: (alpha, gamma1, gamma2, gamma3, a0, a1, a2, a3), where
/// (gamma1, gamma2, gamma3) are Euler angles on S^3 and gamma2 in (0, pi).
struct ChartPointSp1 {
    double alpha = 0.0;
    std::array<double, 3> gamma{0.0, 1.0, 0.0};
    std::array<double, 4> a{1.0, 0.0, 0.0, 0.0};
    double c = 0.0;

    Coords coords() const { return {alpha, gamma[0], gamma[1], gamma[2], a[0], a[1], a[2], a[3]}; }
    static ChartPointSp1 from_coords(const Coords& x, double c);
    double r2() const { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]; }
};

enum class ChartKind { so3, sp1 };

/// Active coframe of the SO(3) chart.
///   adapted:        {sigma1, sigma2, sigma3, dalpha, dbeta, ds, dt, ddelta}
///   diagonalizing:  {sigma2, sigma3, dalpha, dbeta, omega1, omega2, ds~, dt~}
enum class SO3Basis { adapted, diagonalizing };

namespace so3 {
// Indices into the diagonalizing coframe.
inline constexpr int kSigma2 = 0, kSigma3 = 1, kAlpha = 2, kBeta = 3;
inline constexpr int kOmega1 = 4, kOmega2 = 5, kDs = 6, kDt = 7;
}  // namespace so3

namespace sp1 {
// Active coframe of the Sp(1) chart: {dalpha, sigma1, sigma2, sigma3, xi0..xi3}.
inline constexpr int kAlpha = 0, kSigma1 = 1, kXi0 = 4;
}  // namespace sp1

struct StructurePack {
    ChartKind chart = ChartKind::so3;
    SO3Basis basis = SO3Basis::adapted;
    double c = 0.0;
    double r2 = 0.0;
    /// Chart coordinates of the base point.
    Coords coords{};

    /// theta^a = coframe_matrix(a, mu) dx^mu.
    Mat8 coframe_matrix = Mat8::Identity();
    /// Column a holds e_a in coordinate components; inverse of coframe_matrix.
    Mat8 frame_matrix = Mat8::Identity();

    KForm phi{4};
    MetricAtPoint metric;
    KForm volume{8};
    std::array<KForm, 4> b;
    std::array<KForm, 3> rho;
    std::array<KForm, 4> xi;
    std::array<KForm, 3> omega_cap;
    std::array<KForm, 3> a_cap;

    KForm coframe(int i) const { return KForm::basis({i}); }
    TangentVector frame(int i) const { return TangentVector::unit(i); }
    /// A coordinate-component vector written in the active frame.
    TangentVector from_coordinates(const Vec8& v) const { return TangentVector(coframe_matrix * v); }
    /// A coordinate-differential 1-form written in the active coframe.
    KForm one_form_from_coordinates(const Vec8& w) const;
};

StructurePack build_so3_pack(const ChartPointSO3& p, SO3Basis basis = SO3Basis::diagonalizing);
StructurePack build_sp1_pack(const ChartPointSp1& p);

/// Phi_c in coordinate differentials at a chart point.
KForm so3_phi_coordinates(const ChartPointSO3& p);
KForm sp1_phi_coordinates(const ChartPointSp1& p);

/// Flat-model Cayley form on R^8 with coframe (dx0..dx3, da0..da3).
KForm flat_cayley_form();

/// Random chart points away from the degenerate loci (margin on every bound).
ChartPointSO3 sample_so3_point(std::mt19937_64& rng, double c, double margin = 1e-3);
ChartPointSp1 sample_sp1_point(std::mt19937_64& rng, double c, double margin = 1e-3);

struct TorsionReport {
    double max_abs_coeff = 0.0;
    int points = 0;
};

/// max |coeff(d Phi_c)| at one chart point, in the same coframe as below.
double torsion_at(ChartKind chart, const Coords& at, double c, double fd_step = 1e-5);

/// Samples points uniformly in the chart box and returns max |coeff(d Phi_c)|
/// in the active coframe (diagonalizing basis for the SO(3) chart).
TorsionReport verify_torsion_free(ChartKind chart, double c, int n_points, double fd_step = 1e-5,
                                  std::uint64_t seed = 1, double margin = 1e-3);

/// |*Phi - Phi| / |Phi| in the pack metric.
double self_duality_error(const StructurePack& pack);

/// Multi-moment map of the fibre-rotation action, a function of r alone.
double multi_moment_fibre(double r, double c);

}  // namespace cayley
