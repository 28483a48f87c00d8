#include "cayley/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cayley {

namespace {

constexpr double kPi = std::numbers::pi;

// The basic 1-forms of both charts, as coordinate-differential components.
struct CoordinateCoframes {
    std::array<Vec8, 4> b;
    std::array<Vec8, 3> rho;
    std::array<Vec8, 4> xi;
    double C = 0.0;  // c + r^2
};

Vec8 zero8() { return Vec8::Zero(); }

Vec8 unit8(int i) {
    Vec8 v = Vec8::Zero();
    v[i] = 1.0;
    return v;
}

// xi_i from da_i, rho_i and a_i.
std::array<Vec8, 4> vertical_forms(const std::array<Vec8, 4>& da, const std::array<Vec8, 3>& rho,
                                   const std::array<double, 4>& a) {
    return {
        da[0] + a[1] * rho[0] + a[2] * rho[1] + a[3] * rho[2],
        da[1] - a[0] * rho[0] - a[2] * rho[2] + a[3] * rho[1],
        da[2] - a[0] * rho[1] + a[1] * rho[2] - a[3] * rho[0],
        da[3] - a[0] * rho[2] - a[1] * rho[1] + a[2] * rho[0],
    };
}

void check_finite(const Coords& x, double c) {
    for (double v : x)
        if (!std::isfinite(v)) throw std::domain_error("chart point has non-finite coordinates");
    if (!std::isfinite(c) || c < 0.0) throw std::domain_error("scale parameter c must be finite and >= 0");
}

void check_so3(const ChartPointSO3& p) {
    check_finite(p.coords(), p.c);
    if (!(p.alpha > 0.0 && p.alpha < kPi / 2)) throw std::domain_error("SO(3) chart needs alpha in (0, pi/2)");
    if (!(p.theta > 0.0 && p.theta < kPi)) throw std::domain_error("SO(3) chart needs theta in (0, pi)");
    if (!(p.s > 0.0 && p.t > 0.0)) throw std::domain_error("SO(3) chart needs s > 0 and t > 0");
}

void check_sp1(const ChartPointSp1& p) {
    check_finite(p.coords(), p.c);
    if (!(p.alpha > -kPi / 2 && p.alpha < kPi / 2)) throw std::domain_error("Sp(1) chart needs alpha in (-pi/2, pi/2)");
    if (!(p.gamma[1] > 0.0 && p.gamma[1] < kPi)) throw std::domain_error("Sp(1) chart needs gamma2 in (0, pi)");
    if (!(p.r2() > 0.0)) throw std::domain_error("Sp(1) chart needs r > 0");
}

// Left-invariant Euler coframe with d sigma_1 = sigma_2 ^ sigma_3 (and cyclic),
// in the angles (psi, theta, phi) at coordinate slots (ipsi, itheta, iphi).
std::array<Vec8, 3> euler_coframe(double psi, double theta, int ipsi, int itheta, int iphi) {
    std::array<Vec8, 3> s{zero8(), zero8(), zero8()};
    s[0][ipsi] = 1.0;
    s[0][iphi] = std::cos(theta);
    s[1][itheta] = std::cos(psi);
    s[1][iphi] = std::sin(psi) * std::sin(theta);
    s[2][itheta] = std::sin(psi);
    s[2][iphi] = -std::cos(psi) * std::sin(theta);
    return s;
}

CoordinateCoframes so3_coframes(const ChartPointSO3& p) {
    CoordinateCoframes out;
    const double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
    const double sth = std::sin(p.theta), cth = std::cos(p.theta);
    out.C = p.c + p.r2();

    out.b = {unit8(0), sa * unit8(1), ca * unit8(2), ca * sth * unit8(3)};

    out.rho = {zero8(), zero8(), zero8()};
    out.rho[0][1] = -0.5 * ca;
    out.rho[0][3] = 0.5 * cth;
    out.rho[1][2] = 0.5 * sa;
    out.rho[2][3] = 0.5 * sa * sth;

    const double pm = 0.5 * (p.delta - p.gamma), pp = 0.5 * (p.delta + p.gamma);
    const std::array<double, 4> a{p.s * std::cos(pm), p.s * std::sin(pm), p.t * std::cos(pp), p.t * std::sin(pp)};
    // d((delta - gamma)/2) and d((delta + gamma)/2)
    const Vec8 dpm = 0.5 * (unit8(6) - unit8(7));
    const Vec8 dpp = 0.5 * (unit8(6) + unit8(7));
    const std::array<Vec8, 4> da{
        std::cos(pm) * unit8(4) - a[1] * dpm,
        std::sin(pm) * unit8(4) + a[0] * dpm,
        std::cos(pp) * unit8(5) - a[3] * dpp,
        std::sin(pp) * unit8(5) + a[2] * dpp,
    };
    out.xi = vertical_forms(da, out.rho, a);
    return out;
}

CoordinateCoframes sp1_coframes(const ChartPointSp1& p) {
    CoordinateCoframes out;
    const double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
    const double l = 0.5 * (sa - 1.0);
    out.C = p.c + p.r2();

    // Halved Euler forms satisfy d sigma_1 = 2 sigma_2 ^ sigma_3.
    auto sigma = euler_coframe(p.gamma[0], p.gamma[1], 1, 2, 3);
    for (auto& s : sigma) s *= 0.5;

    out.b = {unit8(0), ca * sigma[0], ca * sigma[1], ca * sigma[2]};
    out.rho = {l * sigma[0], l * sigma[1], l * sigma[2]};
    const std::array<Vec8, 4> da{unit8(4), unit8(5), unit8(6), unit8(7)};
    out.xi = vertical_forms(da, out.rho, p.a);
    return out;
}

struct CoordinateStructure {
    std::array<KForm, 4> b, xi;
    std::array<KForm, 3> rho, omega_cap, a_cap;
    KForm phi{4};
    KForm volume{8};
    Mat8 gram = Mat8::Zero();
};

CoordinateStructure assemble(const CoordinateCoframes& f) {
    CoordinateStructure s;
    for (int i = 0; i < 4; ++i) {
        s.b[i] = KForm::one_form(f.b[i]);
        s.xi[i] = KForm::one_form(f.xi[i]);
    }
    for (int i = 0; i < 3; ++i) s.rho[i] = KForm::one_form(f.rho[i]);
    for (int i = 1; i <= 3; ++i) {
        const int j = i % 3 + 1, k = j % 3 + 1;
        s.omega_cap[i - 1] = wedge(s.b[0], s.b[i]) - wedge(s.b[j], s.b[k]);
        s.a_cap[i - 1] = wedge(s.xi[0], s.xi[i]) - wedge(s.xi[j], s.xi[k]);
    }
    const double C = f.C;
    const KForm xi4 = wedge(wedge(s.xi[0], s.xi[1]), wedge(s.xi[2], s.xi[3]));
    const KForm b4 = wedge(wedge(s.b[0], s.b[1]), wedge(s.b[2], s.b[3]));
    KForm mixed(4);
    for (int i = 0; i < 3; ++i) mixed += wedge(s.a_cap[i], s.omega_cap[i]);
    s.phi = 16.0 * std::pow(C, -0.8) * xi4 + 25.0 * std::pow(C, 1.2) * b4 + 20.0 * std::pow(C, 0.2) * mixed;
    s.volume = 400.0 * std::pow(C, 0.4) * wedge(xi4, b4);

    const double gv = 4.0 * std::pow(C, -0.4), gh = 5.0 * std::pow(C, 0.6);
    for (int i = 0; i < 4; ++i) s.gram += gv * f.xi[i] * f.xi[i].transpose() + gh * f.b[i] * f.b[i].transpose();
    return s;
}

// Drops exact zeros only: coefficients of Phi_c span many orders of magnitude
// at large r, so a threshold relative to the largest one would erase terms.
KForm clean(const KForm& f) { return f.pruned(0.0); }

StructurePack pack_from(const CoordinateStructure& cs, const Mat8& coframe_matrix, const Mat8* exact_gram) {
    StructurePack p;
    p.coframe_matrix = coframe_matrix;
    p.frame_matrix = coframe_matrix.inverse();
    const Mat8& F = p.frame_matrix;
    auto to_active = [&](const KForm& f) { return clean(change_basis(f, F)); };

    p.phi = to_active(cs.phi);
    p.volume = to_active(cs.volume);
    for (int i = 0; i < 4; ++i) {
        p.b[i] = to_active(cs.b[i]);
        p.xi[i] = to_active(cs.xi[i]);
    }
    for (int i = 0; i < 3; ++i) {
        p.rho[i] = to_active(cs.rho[i]);
        p.omega_cap[i] = to_active(cs.omega_cap[i]);
        p.a_cap[i] = to_active(cs.a_cap[i]);
    }
    if (exact_gram) {
        p.metric = MetricAtPoint(*exact_gram);
    } else {
        Mat8 g = F.transpose() * cs.gram * F;
        p.metric = MetricAtPoint(0.5 * (g + g.transpose()));
    }
    return p;
}

Mat8 so3_coframe_matrix(const ChartPointSO3& p, SO3Basis basis) {
    const auto sigma = euler_coframe(p.gamma, p.theta, 7, 2, 3);
    Mat8 J = Mat8::Zero();
    if (basis == SO3Basis::adapted) {
        for (int i = 0; i < 3; ++i) J.row(i) = sigma[i].transpose();
        J(3, 0) = 1.0;  // dalpha
        J(4, 1) = 1.0;  // dbeta
        J(5, 4) = 1.0;  // ds
        J(6, 5) = 1.0;  // dt
        J(7, 6) = 1.0;  // ddelta
        return J;
    }
    const double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
    using namespace so3;
    J.row(kSigma2) = sigma[1].transpose();
    J.row(kSigma3) = sigma[2].transpose();
    J(kAlpha, 0) = 1.0;
    J(kBeta, 1) = 1.0;
    const Vec8 dbeta = unit8(1), ddelta = unit8(6);
    J.row(kOmega1) = (p.s * ddelta + p.s * ca * dbeta - p.s * sigma[0] + p.t * sa * sigma[2]).transpose();
    J.row(kOmega2) = (p.t * ddelta - p.t * ca * dbeta + p.t * sigma[0] + p.s * sa * sigma[2]).transpose();
    J.row(kDs) = (unit8(4) + 0.5 * p.t * sa * sigma[1]).transpose();
    J.row(kDt) = (unit8(5) - 0.5 * p.s * sa * sigma[1]).transpose();
    return J;
}

Mat8 sp1_coframe_matrix(const ChartPointSp1& p, const CoordinateCoframes& f) {
    auto sigma = euler_coframe(p.gamma[0], p.gamma[1], 1, 2, 3);
    Mat8 J = Mat8::Zero();
    J(sp1::kAlpha, 0) = 1.0;
    for (int i = 0; i < 3; ++i) J.row(sp1::kSigma1 + i) = 0.5 * sigma[i].transpose();
    for (int i = 0; i < 4; ++i) J.row(sp1::kXi0 + i) = f.xi[i].transpose();
    return J;
}

}  // namespace

ChartPointSO3 ChartPointSO3::from_coords(const Coords& x, double c) {
    return {x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], c};
}

ChartPointSp1 ChartPointSp1::from_coords(const Coords& x, double c) {
    ChartPointSp1 p;
    p.alpha = x[0];
    p.gamma = {x[1], x[2], x[3]};
    p.a = {x[4], x[5], x[6], x[7]};
    p.c = c;
    return p;
}

KForm StructurePack::one_form_from_coordinates(const Vec8& w) const {
    return KForm::one_form(frame_matrix.transpose() * w);
}

KForm so3_phi_coordinates(const ChartPointSO3& p) {
    check_so3(p);
    return assemble(so3_coframes(p)).phi;
}

KForm sp1_phi_coordinates(const ChartPointSp1& p) {
    check_sp1(p);
    return assemble(sp1_coframes(p)).phi;
}

StructurePack build_so3_pack(const ChartPointSO3& p, SO3Basis basis) {
    check_so3(p);
    const auto frames = so3_coframes(p);
    const auto cs = assemble(frames);
    const Mat8 J = so3_coframe_matrix(p, basis);

    StructurePack pack;
    if (basis == SO3Basis::diagonalizing) {
        const double sa = std::sin(p.alpha), ca = std::cos(p.alpha);
        const double gh = 5.0 * std::pow(frames.C, 0.6), gv = 4.0 * std::pow(frames.C, -0.4);
        Vec8 d;
        d << gh * ca * ca, gh * ca * ca, gh, gh * sa * sa, 0.25 * gv, 0.25 * gv, gv, gv;
        const Mat8 exact = d.asDiagonal();
        pack = pack_from(cs, J, &exact);
    } else {
        pack = pack_from(cs, J, nullptr);
    }
    pack.chart = ChartKind::so3;
    pack.basis = basis;
    pack.c = p.c;
    pack.r2 = p.r2();
    pack.coords = p.coords();
    return pack;
}

StructurePack build_sp1_pack(const ChartPointSp1& p) {
    check_sp1(p);
    const auto frames = sp1_coframes(p);
    const auto cs = assemble(frames);
    const double ca = std::cos(p.alpha);
    const double gh = 5.0 * std::pow(frames.C, 0.6), gv = 4.0 * std::pow(frames.C, -0.4);
    Vec8 d;
    d << gh, gh * ca * ca, gh * ca * ca, gh * ca * ca, gv, gv, gv, gv;
    const Mat8 exact = d.asDiagonal();
    StructurePack pack = pack_from(cs, sp1_coframe_matrix(p, frames), &exact);
    pack.chart = ChartKind::sp1;
    pack.c = p.c;
    pack.r2 = p.r2();
    pack.coords = p.coords();
    return pack;
}

KForm flat_cayley_form() {
    // Coframe order (x0..x3, a0..a3) -> indices 0..3, 4..7.
    KForm phi = KForm::basis({0, 1, 2, 3}) + KForm::basis({4, 5, 6, 7});
    for (int i = 1; i <= 3; ++i) {
        const int j = i % 3 + 1, k = j % 3 + 1;
        const KForm w = KForm::basis({0, i}) - KForm::basis({j, k});
        const KForm e = KForm::basis({4, 4 + i}) - KForm::basis({4 + j, 4 + k});
        phi += wedge(w, e);
    }
    return phi;
}

ChartPointSO3 sample_so3_point(std::mt19937_64& rng, double c, double margin) {
    auto U = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    ChartPointSO3 p;
    p.alpha = U(margin, kPi / 2 - margin);
    p.beta = U(0.0, 2 * kPi);
    p.theta = U(margin, kPi - margin);
    p.phi = U(0.0, 2 * kPi);
    p.s = U(margin, 2.0);
    p.t = U(margin, 2.0);
    p.delta = U(0.0, 2 * kPi);
    p.gamma = U(0.0, 4 * kPi);
    p.c = c;
    return p;
}

ChartPointSp1 sample_sp1_point(std::mt19937_64& rng, double c, double margin) {
    auto U = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    ChartPointSp1 p;
    p.alpha = U(-kPi / 2 + margin, kPi / 2 - margin);
    p.gamma = {U(0.0, 4 * kPi), U(margin, kPi - margin), U(0.0, 2 * kPi)};
    do {
        for (auto& a : p.a) a = U(-2.0, 2.0);
    } while (std::sqrt(p.r2()) < margin);
    p.c = c;
    return p;
}

double torsion_at(ChartKind chart, const Coords& at, double c, double fd_step) {
    FormField field;
    Mat8 frame;
    if (chart == ChartKind::so3) {
        const auto p = ChartPointSO3::from_coords(at, c);
        check_so3(p);
        field.form = [c](const Coords& x) { return so3_phi_coordinates(ChartPointSO3::from_coords(x, c)); };
        frame = so3_coframe_matrix(p, SO3Basis::diagonalizing).inverse();
    } else {
        const auto p = ChartPointSp1::from_coords(at, c);
        check_sp1(p);
        field.form = [c](const Coords& x) { return sp1_phi_coordinates(ChartPointSp1::from_coords(x, c)); };
        frame = sp1_coframe_matrix(p, sp1_coframes(p)).inverse();
    }
    return change_basis(exterior_derivative(field, at, fd_step), frame).max_abs();
}

TorsionReport verify_torsion_free(ChartKind chart, double c, int n_points, double fd_step, std::uint64_t seed,
                                  double margin) {
    if (n_points < 1) throw std::invalid_argument("n_points must be >= 1");
    std::mt19937_64 rng(seed);
    TorsionReport report;
    for (int n = 0; n < n_points; ++n) {
        const Coords at = chart == ChartKind::so3 ? sample_so3_point(rng, c, margin).coords()
                                                  : sample_sp1_point(rng, c, margin).coords();
        report.max_abs_coeff = std::max(report.max_abs_coeff, torsion_at(chart, at, c, fd_step));
        ++report.points;
    }
    return report;
}

double self_duality_error(const StructurePack& pack) {
    const KForm star = hodge_star(pack.phi, pack.metric, pack.volume);
    return pack.metric.norm(star - pack.phi) / pack.metric.norm(pack.phi);
}

double multi_moment_fibre(double r, double c) {
    if (!(r >= 0.0) || !(c >= 0.0) || !std::isfinite(r) || !std::isfinite(c))
        throw std::domain_error("multi_moment_fibre needs finite r >= 0 and c >= 0");
    const double r2 = r * r;
    return 20.0 / 3.0 * (r2 - 5.0 * c) * std::pow(c + r2, 0.2) + 100.0 / 3.0 * std::pow(c, 1.2);
}

}  // namespace cayley
