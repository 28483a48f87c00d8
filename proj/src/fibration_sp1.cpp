#include "cayley/fibration_sp1.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace cayley {

namespace {

constexpr double kPi = std::numbers::pi;
const double kAsymptote = std::asin(-0.25);

// Trigonometry of alpha through the offset x = alpha + pi/2, in half-angle
// forms so that neither end of the strip suffers cancellation.
struct Trig {
    double sin_a, cos_a;
    double one_plus_s;   // 1 + sin(alpha)
    double l;            // (sin(alpha) - 1) / 2
    double cot2_half;    // cot^2(x/2) = (1 - sin alpha) / (1 + sin alpha)
};

Trig trig_from_offset(double x) {
    const double sh = std::sin(x / 2), ch = std::cos(x / 2);
    Trig t;
    t.sin_a = -std::cos(x);
    t.cos_a = std::sin(x);
    t.one_plus_s = 2.0 * sh * sh;
    t.l = -ch * ch;
    t.cot2_half = (ch * ch) / (sh * sh);
    return t;
}

double f_of(double r, double c) { return 5.0 * std::pow(c + r * r, 0.6); }
double g_of(double r, double c) { return 4.0 * std::pow(c + r * r, -0.4); }

// X divided by cos^2(alpha): A = f1 / cos^2, B = f2 / (r cos^2). Both keep
// their sign structure and stay finite up to the strip boundary.
struct Direction {
    double A, B, q, f;
};

Direction direction_at(double x, double r, double c) {
    const Trig t = trig_from_offset(x);
    const double f = f_of(r, c);
    const double q = g_of(r, c) * r * r * t.cot2_half / 4.0;
    return {t.cos_a * (3.0 * q - f), t.l * (q - 3.0 * f), q, f};
}

// dlog(r)/dalpha near alpha = pi/2 written through e = pi/2 - alpha.
double graph_slope(double e, double rho, double c) {
    const double r = std::exp(rho);
    const double th = std::tan(e / 2);
    const double q = g_of(r, c) * r * r * th * th / 4.0;
    const double f = f_of(r, c);
    return -(th / 2.0) * (q - 3.0 * f) / (3.0 * q - f);
}

void check_c(double c) {
    if (!std::isfinite(c) || c < 0.0) throw std::domain_error("c must be finite and >= 0");
}

Sp1Sample sample_at(double x, double r) { return {x - kPi / 2, r, x}; }

using State = std::array<double, 2>;  // log(alpha + pi/2), log r

// Signed probes; terminal ones fire when they cross from negative to >= 0.
enum Probe { kAlphaC, kBetaC, kHalfPi, kRMax, kRMin, kCorner, kProbes };

std::array<double, kProbes> probe(const State& y, double c, const Sp1Options& o) {
    const double x = std::exp(y[0]), r = std::exp(y[1]);
    const auto d = direction_at(x, r, c);
    return {3.0 * d.q - d.f,
            d.q - 3.0 * d.f,
            x - (kPi - o.half_pi_margin),
            y[1] - std::log(o.r_max),
            std::log(o.r_min) - y[1],
            o.corner_radius * o.corner_radius - (x * x + r * r)};
}

bool terminal(int k) { return k >= kHalfPi; }

Sp1Event make_event(Sp1EventKind kind, Sp1Direction dir, const State& y, double s) {
    const double x = std::exp(y[0]);
    return {kind, dir, x - kPi / 2, x, std::exp(y[1]), s};
}

Sp1EventKind terminal_kind(int k, const State& y) {
    switch (k) {
        case kHalfPi: return Sp1EventKind::reached_half_pi;
        case kRMax: {
            const double x = std::exp(y[0]);
            return x < std::abs(x - kPi / 2 - kAsymptote) ? Sp1EventKind::escape_minus_half_pi
                                                           : Sp1EventKind::escape_asymptote;
        }
        case kRMin: return Sp1EventKind::r_to_zero;
        default: return Sp1EventKind::corner;
    }
}

// Continues a curve from the switch point to alpha = pi/2 in graph form.
void finish_at_half_pi(FibreCurveSp1& out, const State& y, double c) {
    const double e_s = kPi - std::exp(y[0]);
    double rho = y[1];
    out.dr_dalpha_at_switch = std::exp(rho) * graph_slope(e_s, rho, c);
    // RK4 in e from e_s down to 0; dlog(r)/de = -graph_slope.
    constexpr int kSteps = 32;
    const double h = -e_s / kSteps;
    auto F = [c](double e, double p) { return -graph_slope(e, p, c); };
    double e = e_s;
    for (int i = 0; i < kSteps; ++i) {
        const double k1 = F(e, rho);
        const double k2 = F(e + h / 2, rho + h / 2 * k1);
        const double k3 = F(e + h / 2, rho + h / 2 * k2);
        const double k4 = F(e + h, rho + h * k3);
        rho += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        e += h;
    }
    out.r0 = std::exp(rho);
    out.samples.push_back({kPi / 2, *out.r0, kPi});
}

}  // namespace

double Sp1PhaseState::l() const { return (std::sin(alpha) - 1.0) / 2.0; }
double Sp1PhaseState::f() const { return f_of(r, c); }
double Sp1PhaseState::g() const { return g_of(r, c); }

std::pair<double, double> f1_f2(const Sp1PhaseState& s) {
    if (!(s.alpha >= -kPi / 2 && s.alpha <= kPi / 2) || !(s.r >= 0.0)) throw std::domain_error("point outside the strip");
    check_c(s.c);
    const double ca = std::cos(s.alpha);
    const double l = s.l();
    const double f = s.f();
    // g r^2 is finite at r = 0 even for c = 0.
    const double gr2 = s.r == 0.0 ? 0.0 : s.g() * s.r * s.r;
    return {ca * (-f * ca * ca + 3.0 * l * l * gr2), l * (l * l * gr2 - 3.0 * f * ca * ca) * s.r};
}

double alpha_c(double r, double c) {
    check_c(c);
    if (!(r >= 0.0) || (r == 0.0 && c == 0.0)) throw std::domain_error("alpha_c needs r >= 0 and (r, c) != (0, 0)");
    return std::asin(-(2.0 * r * r + 5.0 * c) / (8.0 * r * r + 5.0 * c));
}

double beta_c(double r, double c) {
    check_c(c);
    if (!(r >= 0.0) || (r == 0.0 && c == 0.0)) throw std::domain_error("beta_c needs r >= 0 and (r, c) != (0, 0)");
    return std::asin(-(14.0 * r * r + 15.0 * c) / (16.0 * r * r + 15.0 * c));
}

std::string to_string(Sp1EventKind k) {
    switch (k) {
        case Sp1EventKind::alpha_c_crossing: return "alpha_c";
        case Sp1EventKind::beta_c_crossing: return "beta_c";
        case Sp1EventKind::reached_half_pi: return "half_pi";
        case Sp1EventKind::escape_minus_half_pi: return "escape_minus_half_pi";
        case Sp1EventKind::escape_asymptote: return "escape_asymptote";
        case Sp1EventKind::corner: return "corner";
        case Sp1EventKind::r_to_zero: return "r_to_zero";
        case Sp1EventKind::exact_solution: return "exact";
        case Sp1EventKind::stalled: return "stalled";
    }
    return "unknown";
}

std::string to_string(Sp1Topology t) {
    switch (t) {
        case Sp1Topology::S3_x_R: return "S3_x_R";
        case Sp1Topology::R4_blue: return "R4_blue";
        case Sp1Topology::R4_green: return "R4_green";
        case Sp1Topology::S4_zero_section: return "S4_zero_section";
        case Sp1Topology::vertical_fibre: return "vertical_fibre";
    }
    return "unknown";
}

FibreCurveSp1 integrate_fibre(const Sp1PhaseState& launch, Sp1Direction dir, const Sp1Options& o) {
    check_c(launch.c);
    if (!(launch.alpha > -kPi / 2 && launch.alpha < kPi / 2 - o.half_pi_margin) || !(launch.r > 0.0) ||
        !std::isfinite(launch.r))
        throw std::domain_error("launch must lie in the open strip");
    if (!(o.rtol > 0.0 && o.atol > 0.0 && o.event_tol > 0.0 && o.r_max > launch.r && o.r_min < launch.r))
        throw std::invalid_argument("bad integration options");

    const double c = launch.c;
    const double sign = dir == Sp1Direction::forward ? 1.0 : -1.0;
    auto rhs = [c, sign](const State& y, State& dy, double) {
        const double x = std::exp(y[0]);
        const auto d = direction_at(x, std::exp(y[1]), c);
        const double a = d.A / x;
        const double n = std::hypot(a, d.B);
        dy = {sign * a / n, sign * d.B / n};
    };

    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_dense_output(o.atol, o.rtol, odeint::runge_kutta_dopri5<State>());
    const double x0 = launch.alpha + kPi / 2;
    State y{std::log(x0), std::log(launch.r)};
    stepper.initialize(y, 0.0, 1e-3);

    FibreCurveSp1 out;
    out.launch = launch;
    out.samples.push_back(sample_at(x0, launch.r));
    auto p0 = probe(y, c, o);

    for (int step = 0;; ++step) {
        if (step >= o.max_steps || stepper.current_time() >= o.max_arclength) {
            const auto ev = make_event(Sp1EventKind::stalled, dir, stepper.current_state(), stepper.current_time());
            out.events.push_back(ev);
            (dir == Sp1Direction::forward ? out.forward_end : out.backward_end) = ev;
            return out;
        }
        const auto [t0, t1] = stepper.do_step(rhs);
        const State y1 = stepper.current_state();
        if (!std::isfinite(y1[0]) || !std::isfinite(y1[1])) throw std::runtime_error("fibre integration diverged");
        const auto p1 = probe(y1, c, o);

        struct Hit {
            int k;
            double t;
            State y;
        };
        std::vector<Hit> hits;
        for (int k = 0; k < kProbes; ++k) {
            const bool fired = terminal(k) ? (p0[k] < 0.0 && p1[k] >= 0.0) : ((p0[k] < 0.0) != (p1[k] < 0.0));
            if (!fired) continue;
            double lo = t0, hi = t1;
            State ym;
            while (hi - lo > o.event_tol) {
                const double mid = 0.5 * (lo + hi);
                stepper.calc_state(mid, ym);
                if ((probe(ym, c, o)[k] < 0.0) == (p0[k] < 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            stepper.calc_state(hi, ym);
            hits.push_back({k, hi, ym});
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });

        for (const auto& h : hits) {
            const double x = std::exp(h.y[0]), r = std::exp(h.y[1]);
            out.samples.push_back(sample_at(x, r));
            if (!terminal(h.k)) {
                out.events.push_back(make_event(
                    h.k == kAlphaC ? Sp1EventKind::alpha_c_crossing : Sp1EventKind::beta_c_crossing, dir, h.y, h.t));
                continue;
            }
            const auto ev = make_event(terminal_kind(h.k, h.y), dir, h.y, h.t);
            out.events.push_back(ev);
            (dir == Sp1Direction::forward ? out.forward_end : out.backward_end) = ev;
            if (ev.kind == Sp1EventKind::reached_half_pi) finish_at_half_pi(out, h.y, c);
            return out;
        }
        out.samples.push_back(sample_at(std::exp(y1[0]), std::exp(y1[1])));
        p0 = p1;
    }
}

namespace {

FibreCurveSp1 join(const FibreCurveSp1& back, const FibreCurveSp1& fwd) {
    FibreCurveSp1 out;
    out.launch = fwd.launch;
    out.samples.assign(back.samples.rbegin(), back.samples.rend());
    out.samples.insert(out.samples.end(), fwd.samples.begin() + 1, fwd.samples.end());
    out.events = back.events;
    out.events.insert(out.events.end(), fwd.events.begin(), fwd.events.end());
    out.backward_end = back.backward_end;
    out.forward_end = fwd.forward_end;
    out.r0 = back.r0 ? back.r0 : fwd.r0;
    out.dr_dalpha_at_switch = back.dr_dalpha_at_switch ? back.dr_dalpha_at_switch : fwd.dr_dalpha_at_switch;
    return out;
}

FibreCurveSp1 exact_curve(const Sp1PhaseState& launch, Sp1Topology topo, const Sp1Options& o) {
    FibreCurveSp1 out;
    out.launch = launch;
    out.topology = topo;
    constexpr int kN = 101;
    for (int i = 0; i < kN; ++i) {
        if (topo == Sp1Topology::S4_zero_section) {
            const double x = kPi * i / (kN - 1);
            out.samples.push_back(sample_at(x, 0.0));
        } else {
            out.samples.push_back({-kPi / 2, o.r_max * i / (kN - 1), 0.0});
        }
    }
    Sp1Event ev;
    ev.kind = Sp1EventKind::exact_solution;
    ev.alpha = launch.alpha;
    ev.offset = launch.alpha + kPi / 2;
    ev.r = launch.r;
    out.events.push_back(ev);
    out.backward_end = ev;
    out.forward_end = ev;
    return out;
}

}  // namespace

FibreCurveSp1 trace_fibre(const Sp1PhaseState& launch, const Sp1Options& o) {
    check_c(launch.c);
    if (launch.r == 0.0 && launch.alpha >= -kPi / 2 && launch.alpha <= kPi / 2)
        return exact_curve(launch, Sp1Topology::S4_zero_section, o);
    if (launch.alpha == -kPi / 2 && launch.r >= 0.0) return exact_curve(launch, Sp1Topology::vertical_fibre, o);
    FibreCurveSp1 out =
        join(integrate_fibre(launch, Sp1Direction::backward, o), integrate_fibre(launch, Sp1Direction::forward, o));
    out.topology = classify_sp1(out);
    return out;
}

FibreCurveSp1 corner_fibre(double c, double offset, const Sp1Options& o) {
    check_c(c);
    if (!(c > 0.0)) throw std::domain_error("the corner fibre needs c > 0");
    if (!(offset > 0.0 && offset < o.corner_radius)) throw std::invalid_argument("offset must lie inside the capture radius");
    const Sp1PhaseState launch{offset - kPi / 2, std::sqrt(1.25 * c) * offset, c};
    FibreCurveSp1 back;
    back.launch = launch;
    back.samples.push_back(sample_at(offset, launch.r));
    // Backward from the launch the curve is the ray into the corner; the ray
    // is the only direction entering it, so the end is recorded directly.
    Sp1Event ev;
    ev.kind = Sp1EventKind::corner;
    ev.direction = Sp1Direction::backward;
    ev.alpha = launch.alpha;
    ev.offset = offset;
    ev.r = launch.r;
    back.events.push_back(ev);
    back.backward_end = ev;
    back.samples.insert(back.samples.begin(), Sp1Sample{-kPi / 2, 0.0, 0.0});
    std::reverse(back.samples.begin(), back.samples.end());
    FibreCurveSp1 out = join(back, integrate_fibre(launch, Sp1Direction::forward, o));
    out.topology = classify_sp1(out);
    return out;
}

Sp1Topology classify_sp1(const FibreCurveSp1& curve) {
    if (curve.topology &&
        (*curve.topology == Sp1Topology::S4_zero_section || *curve.topology == Sp1Topology::vertical_fibre))
        return *curve.topology;
    if (!curve.backward_end || !curve.forward_end) throw std::runtime_error("fibre ends are not resolved");
    const auto b = curve.backward_end->kind, f = curve.forward_end->kind;
    if (f == Sp1EventKind::escape_asymptote) {
        if (b == Sp1EventKind::reached_half_pi) return Sp1Topology::R4_blue;
        if (b == Sp1EventKind::corner) return Sp1Topology::R4_green;
        if (b == Sp1EventKind::escape_minus_half_pi) return Sp1Topology::S3_x_R;
        // On the cone the tip is not part of the manifold, so a curve leaving
        // through r = 0 is a half-infinite end.
        if (b == Sp1EventKind::r_to_zero && curve.launch.c == 0.0) return Sp1Topology::S3_x_R;
    }
    throw std::runtime_error("unexpected end events " + to_string(b) + " / " + to_string(f));
}

double multi_moment_sp1(double alpha, double r, double c) {
    check_c(c);
    if (!(alpha >= -kPi / 2 && alpha <= kPi / 2) || !(r >= 0.0)) throw std::domain_error("point outside the strip");
    const double C = c + r * r;
    const double sm = std::sin(alpha) - 1.0;
    const double ca = std::cos(alpha);
    return 5.0 / 6.0 * (r * r - 5.0 * c) * std::pow(C, 0.2) * sm * sm * sm - 12.5 * std::pow(C, 1.2) * ca * ca * sm;
}

namespace {

RestrictedMetricSp1 metric_at_offset(double x, double r, double c) {
    const Trig t = trig_from_offset(x);
    const double C = c + r * r;
    RestrictedMetricSp1 m;
    m.sigma_coeff = 5.0 * std::pow(C, 0.6) * t.cos_a * t.cos_a + 4.0 * std::pow(C, -0.4) * t.l * t.l * r * r;
    m.dr_coeff = 4.0 * std::pow(C, -0.4);
    m.dalpha_coeff = 5.0 * std::pow(C, 0.6);
    return m;
}

}  // namespace

RestrictedMetricSp1 restricted_metric_sp1(double alpha, double r, double c) {
    check_c(c);
    if (!(alpha >= -kPi / 2 && alpha <= kPi / 2) || !(r >= 0.0)) throw std::domain_error("point outside the strip");
    return metric_at_offset(alpha + kPi / 2, r, c);
}

RestrictedMetricSp1 restricted_metric_sp1(const FibreCurveSp1& curve, std::size_t sample) {
    const auto& s = curve.samples.at(sample);
    return metric_at_offset(s.offset, s.r, curve.launch.c);
}

ChartPointSp1 sp1_chart_point(double alpha, double r, double c) {
    ChartPointSp1 p;
    p.alpha = alpha;
    p.gamma = {0.3, 1.2, 0.5};
    // Unit direction in the fibre, fixed along the curve.
    p.a = {0.8 * r, 0.2 * r, -0.4 * r, 0.4 * r};
    p.c = c;
    return p;
}

namespace {

constexpr std::array<double, 4> kFibreDir{0.8, 0.2, -0.4, 0.4};

Vec8 radial_coordinates() {
    Vec8 v = Vec8::Zero();
    for (int i = 0; i < 4; ++i) v[4 + i] = kFibreDir[i];
    return v;
}

Vec8 coordinate_unit(int i) {
    Vec8 e = Vec8::Zero();
    e[i] = 1.0;
    return e;
}

}  // namespace

RestrictedMetricSp1 restricted_metric_sp1_from_pack(double alpha, double r, double c) {
    const StructurePack pack = build_sp1_pack(sp1_chart_point(alpha, r, c));
    // Orbit fields dual to sigma_1..3 along the gamma coordinates.
    const Eigen::Matrix3d M = pack.coframe_matrix.block<3, 3>(sp1::kSigma1, 1);
    const Eigen::Vector3d x1 = M.inverse().col(0);
    Vec8 X = Vec8::Zero();
    X.segment<3>(1) = x1;
    RestrictedMetricSp1 m;
    const auto Xv = pack.from_coordinates(X);
    m.sigma_coeff = pack.metric.inner(Xv, Xv);
    const auto R = pack.from_coordinates(radial_coordinates());
    m.dr_coeff = pack.metric.inner(R, R);
    const auto A = pack.from_coordinates(coordinate_unit(0));
    m.dalpha_coeff = pack.metric.inner(A, A);
    return m;
}

Sp1ConeReport sp1_cone_at(const Sp1Event& escape, double c) {
    if (escape.kind != Sp1EventKind::escape_minus_half_pi && escape.kind != Sp1EventKind::escape_asymptote)
        throw std::invalid_argument("cone data needs an escape event");
    const double r = escape.r;
    const auto m = metric_at_offset(escape.offset, r, c);
    const auto d = direction_at(escape.offset, r, c);
    const double s = 10.0 / 3.0 * std::pow(r, 0.6);
    const double ds_dr = 2.0 * std::pow(r, -0.4);
    const double dalpha_dr = d.A / (d.B * r);
    Sp1ConeReport rep;
    rep.link_coeff = m.sigma_coeff / (s * s);
    rep.ds_coeff = (m.dr_coeff + m.dalpha_coeff * dalpha_dr * dalpha_dr) / (ds_dr * ds_dr);
    rep.alpha = escape.alpha;
    rep.r = r;
    return rep;
}

Sp1SmoothnessReport sp1_smoothness(const FibreCurveSp1& curve, double eps) {
    if (!curve.r0) throw std::invalid_argument("curve does not meet alpha = pi/2");
    const double c = curve.launch.c;
    const double target = kPi - eps;
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        const auto& a = curve.samples[i - 1];
        const auto& b = curve.samples[i];
        if ((a.offset - target) * (b.offset - target) > 0.0) continue;
        const double w = (target - a.offset) / (b.offset - a.offset);
        const double r = a.r + w * (b.r - a.r);
        const auto m = metric_at_offset(target, r, c);
        const double base = 5.0 * std::pow(c + *curve.r0 * *curve.r0, 0.6);
        const double dr_dalpha = r * graph_slope(eps, std::log(r), c);
        Sp1SmoothnessReport rep;
        rep.sigma_ratio = m.sigma_coeff / (base * eps * eps);
        rep.dalpha_ratio = (m.dalpha_coeff + m.dr_coeff * dr_dalpha * dr_dalpha) / base;
        return rep;
    }
    throw std::invalid_argument("curve has no samples around alpha = pi/2 - eps");
}

FourPlane sp1_tangent_plane(const StructurePack& pack, double dalpha, double dr) {
    const Vec8 V = dalpha * coordinate_unit(0) + dr * radial_coordinates();
    return FourPlane{{pack.from_coordinates(coordinate_unit(1)), pack.from_coordinates(coordinate_unit(2)),
                      pack.from_coordinates(coordinate_unit(3)), pack.from_coordinates(V)}};
}

std::optional<double> sp1_sample_eta(const Sp1Sample& s, double c, double min_offset) {
    if (!(s.offset > min_offset && s.offset < kPi - min_offset) || !(s.r > 0.0)) return std::nullopt;
    const auto d = direction_at(s.offset, s.r, c);
    const double n = std::hypot(d.A, d.B);
    const StructurePack pack = build_sp1_pack(sp1_chart_point(s.alpha, s.r, c));
    return is_cayley(sp1_tangent_plane(pack, d.A / n, d.B * s.r / n), pack).residual;
}

Sp1EtaReport verify_cayley_sp1(const FibreCurveSp1& curve, double min_offset) {
    Sp1EtaReport rep;
    for (const auto& s : curve.samples) {
        const auto eta = sp1_sample_eta(s, curve.launch.c, min_offset);
        if (!eta) {
            ++rep.skipped;
            continue;
        }
        rep.max_eta = std::max(rep.max_eta, *eta);
        ++rep.evaluated;
    }
    return rep;
}

double vertical_fibre_eta(double r, double c, double offset) {
    const StructurePack pack = build_sp1_pack(sp1_chart_point(offset - kPi / 2, r, c));
    return is_cayley(sp1_tangent_plane(pack, 0.0, 1.0), pack).residual;
}

std::vector<PhaseGridRow> phase_portrait_grid(double c, int n_alpha, int n_r, double r_max) {
    check_c(c);
    if (n_alpha < 1 || n_r < 1 || !(r_max > 0.0)) throw std::invalid_argument("bad grid specification");
    std::vector<PhaseGridRow> rows;
    rows.reserve(static_cast<std::size_t>(n_alpha) * n_r);
    for (int i = 0; i < n_alpha; ++i) {
        const double alpha = -kPi / 2 + kPi * (i + 0.5) / n_alpha;
        for (int j = 0; j < n_r; ++j) {
            const double r = r_max * (j + 0.5) / n_r;
            const auto [f1, f2] = f1_f2({alpha, r, c});
            rows.push_back({alpha, r, f1, f2});
        }
    }
    return rows;
}

int phase_sign_mismatches(const std::vector<PhaseGridRow>& grid, double c) {
    int bad = 0;
    for (const auto& row : grid) {
        const bool f1_pos = row.alpha < alpha_c(row.r, c);
        const bool f2_pos = row.alpha > beta_c(row.r, c);
        if ((row.f1 > 0.0) != f1_pos || row.f1 == 0.0) ++bad;
        if ((row.f2 > 0.0) != f2_pos || row.f2 == 0.0) ++bad;
    }
    return bad;
}

std::vector<std::pair<double, double>> critical_curve(bool alpha_curve, double c, double r_max, int n) {
    check_c(c);
    if (n < 1 || !(r_max > 0.0)) throw std::invalid_argument("bad polyline specification");
    std::vector<std::pair<double, double>> pts;
    for (int j = 1; j <= n; ++j) {
        const double r = r_max * j / n;
        pts.emplace_back(alpha_curve ? alpha_c(r, c) : beta_c(r, c), r);
    }
    return pts;
}

}  // namespace cayley
