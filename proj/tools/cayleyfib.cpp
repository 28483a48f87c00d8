// cayleyfib: structure checks and invariant Cayley fibre export for the Spin(7)
// metrics on the spinor bundle of S^4.
//
// Exit codes: 0 pass, 1 computational failure or unwritable output, 2 usage.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cayley/fibration_so3.hpp"
#include "cayley/fibration_sp1.hpp"
#include "table.hpp"
#include "worker_pool.hpp"

using namespace cayley;
using cayleyfib::Cell;
using cayleyfib::Format;
using cayleyfib::Table;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    double c = 1.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    Format fmt() const { return format == "json" ? Format::json : Format::csv; }
    std::filesystem::path out_dir() const {
        if (!out.empty()) return out;
        if (const char* env = std::getenv("CAYLEYFIB_OUT_DIR"); env && *env) return env;
        return "cayleyfib_out";
    }
    bool out_given() const {
        const char* env = std::getenv("CAYLEYFIB_OUT_DIR");
        return !out.empty() || (env && *env);
    }
};

void add_common(CLI::App* sub, Common& cm) {
    sub->add_option("--c", cm.c, "scale parameter c >= 0")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--seed", cm.seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", cm.out, "output directory (default $CAYLEYFIB_OUT_DIR or ./cayleyfib_out)");
    sub->add_option("--format", cm.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--threads", cm.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

std::pair<int, int> parse_grid(const std::string& spec) {
    int n = 0, m = 0;
    char x = 0, extra = 0;
    std::istringstream is(spec);
    if (!(is >> n >> x >> m) || (x != 'x' && x != 'X') || (is >> extra) || n < 2 || m < 2)
        throw UsageError("--grid expects NxM with N, M >= 2, got '" + spec + "'");
    return {n, m};
}

void emit(const Table& t, const Common& cm, const std::string& stem) {
    const auto path = cayleyfib::write_table(t, cm.out_dir(), stem, cm.fmt());
    std::cout << "wrote " << path.string() << " (" << t.rows.size() << " rows)\n";
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string chart = "both";
    int points = 200;
    int pi7_points = 10;
    double fd_step = 1e-5;
    double margin = 1e-3;
    double torsion_tol = 1e-6;
    double selfdual_tol = 1e-8;
    double pi7_tol = 1e-10;
};

struct PointResult {
    double torsion = 0.0, selfdual = 0.0;
    std::optional<Pi7Report> pi7;
};

int run_verify(const Common& cm, const VerifyOpts& o) {
    Table report{{"suite", "chart", "c", "points", "max_residual", "tolerance", "pass"}, {}};
    bool all_pass = true;
    auto row = [&](const std::string& suite, const std::string& chart, long long n, double value, double tol) {
        const bool ok = value <= tol;
        all_pass = all_pass && ok;
        report.add({suite, chart, cm.c, n, value, tol, std::string(ok ? "pass" : "fail")});
    };

    std::vector<ChartKind> charts;
    if (o.chart != "sp1") charts.push_back(ChartKind::so3);
    if (o.chart != "so3") charts.push_back(ChartKind::sp1);
    for (const ChartKind chart : charts) {
        const std::string name = chart == ChartKind::so3 ? "so3" : "sp1";
        std::mt19937_64 rng(cm.seed);
        std::vector<Coords> pts;
        for (int i = 0; i < o.points; ++i)
            pts.push_back(chart == ChartKind::so3 ? sample_so3_point(rng, cm.c, o.margin).coords()
                                                  : sample_sp1_point(rng, cm.c, o.margin).coords());
        const auto results = cayleyfib::parallel_map(pts.size(), cm.threads, [&](std::size_t i) {
            PointResult r;
            r.torsion = torsion_at(chart, pts[i], cm.c, o.fd_step);
            const StructurePack pack = chart == ChartKind::so3
                                           ? build_so3_pack(ChartPointSO3::from_coords(pts[i], cm.c))
                                           : build_sp1_pack(ChartPointSp1::from_coords(pts[i], cm.c));
            r.selfdual = self_duality_error(pack);
            if (static_cast<int>(i) < o.pi7_points) r.pi7 = pi7_suite(pack);
            return r;
        });
        double torsion = 0, selfdual = 0, idem = 0, rank_dev = 0, lam = 0;
        bool has_lambda = false;
        long long n_pi7 = 0;
        for (const auto& r : results) {
            torsion = std::max(torsion, r.torsion);
            selfdual = std::max(selfdual, r.selfdual);
            if (!r.pi7) continue;
            ++n_pi7;
            idem = std::max(idem, r.pi7->idempotence);
            rank_dev = std::max(rank_dev, std::abs(r.pi7->rank - 7.0));
            if (r.pi7->lambda_fixed) {
                has_lambda = true;
                lam = std::max(lam, *r.pi7->lambda_fixed);
            }
        }
        row("torsion_free", name, o.points, torsion, o.torsion_tol);
        row("self_duality", name, o.points, selfdual, o.selfdual_tol);
        row("pi7_idempotence", name, n_pi7, idem, o.pi7_tol);
        row("pi7_rank_deviation", name, n_pi7, rank_dev, 0.0);
        if (has_lambda) row("pi7_lambda_fixed", name, n_pi7, lam, o.pi7_tol);
    }
    std::cout << cayleyfib::render(report, cm.fmt());
    if (cm.out_given()) emit(report, cm, "verify");
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------- fibrate-so3

struct So3Opts {
    double v = 1.0;
    std::vector<double> F{0.2, 0.5, 1.0, 2.0};
    double beta0 = 0.0, delta0 = 0.0;
    int resolution = 200;
    double eta_tol = 1e-6;
};

int run_fibrate_so3(const Common& cm, const So3Opts& o) {
    if (!(o.v > 0.0)) throw UsageError("--v must be positive");
    if (o.resolution < 2) throw UsageError("--resolution must be >= 2");
    for (double F : o.F)
        if (!(F > 0.0) || !std::isfinite(F)) throw UsageError("--F values must be positive");

    std::vector<FibreCurveSO3> curves;
    for (double F : o.F) curves.push_back(trace_level_set({o.beta0, o.delta0, o.v, F, cm.c}, o.resolution));

    struct Job {
        std::size_t curve, sample;
    };
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < curves.size(); ++k)
        for (std::size_t i = 0; i < curves[k].samples.size(); ++i) jobs.push_back({k, i});
    const auto etas = cayleyfib::parallel_map(jobs.size(), cm.threads, [&](std::size_t j) {
        const auto& cv = curves[jobs[j].curve];
        const auto [alpha, u] = cv.samples[jobs[j].sample];
        return u > 0.0 ? so3_sample_eta(alpha, u, cv.params) : kNaN;
    });

    Table summary{{"F", "topology", "zero_alpha", "max_eta", "conserved_drift"}, {}};
    bool ok = true;
    std::size_t j = 0;
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& cv = curves[k];
        Table t{{"alpha", "u", "F", "eta_residual"}, {}};
        double worst = 0.0;
        for (const auto& [alpha, u] : cv.samples) {
            const double eta = etas[j++];
            if (!std::isnan(eta)) worst = std::max(worst, eta);
            t.add({alpha, u, conserved_F(alpha, u, o.v, cm.c), eta});
        }
        ok = ok && worst < o.eta_tol;
        emit(t, cm, "so3_fibre_" + std::to_string(k));
        summary.add({o.F[k], to_string(cv.topology), cv.zero_alpha.value_or(kNaN), worst, cv.conserved_drift});
    }
    emit(summary, cm, "so3_summary");
    return ok ? 0 : 1;
}

// ---------------------------------------------------------- fibrate-sp1

struct Sp1Opts {
    std::vector<double> alpha{-1.4, -1.0, -0.6, -0.3, 0.0, 0.5, 1.2};
    std::vector<double> r{0.5, 2.0};
    bool corner = false;
    Sp1Options integ;
    double min_offset = 1e-6;
    double eta_tol = 1e-6;
    bool reflect = false;
};

struct Sp1Result {
    FibreCurveSp1 curve;
    std::vector<double> eta;
};

int run_fibrate_sp1(const Common& cm, const Sp1Opts& o) {
    std::vector<Sp1PhaseState> launches;
    for (double a : o.alpha)
        for (double r : o.r) {
            if (!(a > -kPi / 2 && a < kPi / 2) || !(r > 0.0)) throw UsageError("launch points must lie in the open strip");
            launches.push_back({a, r, cm.c});
        }
    if (o.corner && !(cm.c > 0.0)) throw UsageError("--corner needs c > 0");
    if (!(o.integ.r_max > 1.0) || !(o.integ.rtol > 0.0) || !(o.integ.event_tol > 0.0))
        throw UsageError("bad integration tolerances");
    const std::size_t n = launches.size() + (o.corner ? 1 : 0);

    const auto results = cayleyfib::parallel_map(n, cm.threads, [&](std::size_t i) {
        Sp1Result res;
        res.curve = i < launches.size() ? trace_fibre(launches[i], o.integ) : corner_fibre(cm.c, 5e-4, o.integ);
        for (const auto& s : res.curve.samples)
            res.eta.push_back(sp1_sample_eta(s, cm.c, o.min_offset).value_or(kNaN));
        return res;
    });

    Table summary{{"index", "alpha0", "r_launch", "topology", "backward_end", "forward_end", "r0", "max_eta", "skipped"},
                  {}};
    bool ok = true;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& [cv, eta] = results[k];
        Table t{{"alpha", "r", "eta_residual", "event_tags"}, {}};
        double worst = 0.0;
        long long skipped = 0;
        for (std::size_t i = 0; i < cv.samples.size(); ++i) {
            const auto& s = cv.samples[i];
            std::string tags;
            for (const auto& ev : cv.events)
                if (ev.offset == s.offset && ev.r == s.r) tags += (tags.empty() ? "" : "|") + to_string(ev.kind);
            if (std::isnan(eta[i]))
                ++skipped;
            else
                worst = std::max(worst, eta[i]);
            t.add({o.reflect ? -s.alpha : s.alpha, s.r, eta[i], tags});
        }
        ok = ok && worst < o.eta_tol;
        emit(t, cm, "sp1_fibre_" + std::to_string(k));
        summary.add({static_cast<long long>(k), o.reflect ? -cv.launch.alpha : cv.launch.alpha, cv.launch.r, to_string(classify_sp1(cv)),
                     to_string(cv.backward_end->kind), to_string(cv.forward_end->kind), cv.r0.value_or(kNaN), worst,
                     skipped});
    }
    emit(summary, cm, "sp1_summary");
    return ok ? 0 : 1;
}

// ------------------------------------------------------- phase-portrait

struct PhaseOpts {
    std::string grid = "200x200";
    double r_max = 3.0;
    int curve_points = 400;
    bool reflect = false;
};

int run_phase_portrait(const Common& cm, const PhaseOpts& o) {
    const auto [na, nr] = parse_grid(o.grid);
    if (!(o.r_max > 0.0) || o.curve_points < 2) throw UsageError("--r-max must be positive, --curve-points >= 2");
    const auto rows = phase_portrait_grid(cm.c, na, nr, o.r_max);
    Table grid{{"alpha", "r", "f1", "f2"}, {}};
    // Right multiplication swaps the poles: alpha -> -alpha, and f1 with it.
    const double flip = o.reflect ? -1.0 : 1.0;
    for (const auto& r : rows) grid.add({flip * r.alpha, r.r, flip * r.f1, r.f2});
    emit(grid, cm, "phase_grid");
    for (const bool first : {true, false}) {
        Table t{{"alpha", "r"}, {}};
        for (const auto& [a, r] : critical_curve(first, cm.c, o.r_max, o.curve_points)) t.add({flip * a, r});
        emit(t, cm, first ? "alpha_c" : "beta_c");
    }
    const int bad = phase_sign_mismatches(rows, cm.c);
    std::cout << "sign_mismatches " << bad << "\n";
    return bad == 0 ? 0 : 1;
}

// ----------------------------------------------------------- moment-map

struct MomentOpts {
    std::string action;
    std::vector<double> r;
    std::string grid = "100x100";
    double v = 1.0;
    double u_max = 3.0;
    double r_max = 3.0;
    bool reflect = false;
};

int run_moment_map(const Common& cm, const MomentOpts& o) {
    Table t;
    if (o.action == "fibre") {
        t.columns = {"r", "nu"};
        std::vector<double> rs = o.r;
        if (rs.empty()) {
            const int n = parse_grid(o.grid).first;
            for (int i = 0; i < n; ++i) rs.push_back(o.r_max * i / (n - 1));
        }
        for (double r : rs) {
            if (!(r >= 0.0)) throw UsageError("--r values must be >= 0");
            t.add({r, multi_moment_fibre(r, cm.c)});
        }
    } else {
        const auto [na, nb] = parse_grid(o.grid);
        if (!(o.v > 0.0) || !(o.u_max > 0.0) || !(o.r_max > 0.0)) throw UsageError("--v, --u-max, --r-max must be positive");
        const bool so3 = o.action == "so3";
        t.columns = {"alpha", so3 ? "u" : "r", "nu"};
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) {
                if (so3) {
                    const double alpha = kPi / 2 * (i / (na - 1.0)), u = o.u_max * (j / (nb - 1.0));
                    t.add({alpha, u, multi_moment_so3(alpha, u, o.v, cm.c)});
                } else {
                    const double alpha = -kPi / 2 + kPi * (i / (na - 1.0)), r = o.r_max * (j / (nb - 1.0));
                    t.add({o.reflect ? -alpha : alpha, r, multi_moment_sp1(alpha, r, cm.c)});
                }
            }
    }
    emit(t, cm, "moment_" + o.action);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin(7) structure checks and invariant Cayley fibres on the spinor bundle of S^4"};
    app.require_subcommand(1);

    Common cm;
    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "torsion-free, self-duality and pi7 suites");
    add_common(verify, cm);
    verify->add_option("--chart", vo.chart, "so3, sp1 or both")
        ->check(CLI::IsMember({"so3", "sp1", "both"}))
        ->capture_default_str();
    verify->add_option("--points", vo.points, "random chart points")->check(CLI::PositiveNumber)->capture_default_str();
    verify->add_option("--pi7-points", vo.pi7_points, "points used by the pi7 suite")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    verify->add_option("--fd-step", vo.fd_step, "finite-difference step")->check(CLI::PositiveNumber)->capture_default_str();
    verify->add_option("--margin", vo.margin, "distance kept from chart boundaries")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--torsion-tol", vo.torsion_tol)->check(CLI::PositiveNumber)->capture_default_str();
    verify->add_option("--selfdual-tol", vo.selfdual_tol)->check(CLI::PositiveNumber)->capture_default_str();
    verify->add_option("--pi7-tol", vo.pi7_tol)->check(CLI::PositiveNumber)->capture_default_str();

    So3Opts so;
    auto* fso3 = app.add_subcommand("fibrate-so3", "trace SO(3)-invariant fibres, one file per F");
    add_common(fso3, cm);
    fso3->add_option("--v", so.v, "v = s/t")->capture_default_str();
    fso3->add_option("--F", so.F, "comma-separated values of the first integral")->delimiter(',')->capture_default_str();
    fso3->add_option("--beta0", so.beta0)->capture_default_str();
    fso3->add_option("--delta0", so.delta0)->capture_default_str();
    fso3->add_option("--resolution", so.resolution, "interior samples per fibre")->capture_default_str();
    fso3->add_option("--eta-tol", so.eta_tol)->check(CLI::PositiveNumber)->capture_default_str();

    Sp1Opts sp;
    auto* fsp1 = app.add_subcommand("fibrate-sp1", "integrate Sp(1)-invariant fibres from launch points");
    add_common(fsp1, cm);
    fsp1->add_option("--alpha", sp.alpha, "launch angles (comma list)")->delimiter(',')->capture_default_str();
    fsp1->add_option("--r", sp.r, "launch radii (comma list); all pairs are used")->delimiter(',')->capture_default_str();
    fsp1->add_flag("--corner", sp.corner, "add the fibre leaving (-pi/2, 0)");
    fsp1->add_option("--r-max", sp.integ.r_max, "escape cutoff")->capture_default_str();
    fsp1->add_option("--rtol", sp.integ.rtol)->capture_default_str();
    fsp1->add_option("--event-tol", sp.integ.event_tol)->capture_default_str();
    fsp1->add_option("--min-offset", sp.min_offset, "samples closer to alpha = +-pi/2 get no residual")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fsp1->add_option("--eta-tol", sp.eta_tol)->check(CLI::PositiveNumber)->capture_default_str();
    fsp1->add_flag("--reflect", sp.reflect, "export the right-multiplication variant (alpha -> -alpha)");

    PhaseOpts po;
    auto* phase = app.add_subcommand("phase-portrait", "sample (f1, f2) on a grid plus the alpha_c, beta_c curves");
    add_common(phase, cm);
    phase->add_option("--grid", po.grid, "NxM cells in alpha x r")->capture_default_str();
    phase->add_option("--r-max", po.r_max)->capture_default_str();
    phase->add_option("--curve-points", po.curve_points)->capture_default_str();
    phase->add_flag("--reflect", po.reflect, "export the right-multiplication variant (alpha -> -alpha)");

    MomentOpts mo;
    auto* moment = app.add_subcommand("moment-map", "multi-moment maps on grids");
    add_common(moment, cm);
    moment->add_option("--action", mo.action, "fibre, so3 or sp1")
        ->required()
        ->check(CLI::IsMember({"fibre", "so3", "sp1"}));
    moment->add_option("--r", mo.r, "radii for --action fibre (comma list)")->delimiter(',');
    moment->add_option("--grid", mo.grid, "NxM nodes")->capture_default_str();
    moment->add_option("--v", mo.v, "v for --action so3")->capture_default_str();
    moment->add_option("--u-max", mo.u_max)->capture_default_str();
    moment->add_option("--r-max", mo.r_max)->capture_default_str();
    moment->add_flag("--reflect", mo.reflect, "for --action sp1: the right-multiplication variant (alpha -> -alpha)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return run_verify(cm, vo);
        if (fso3->parsed()) return run_fibrate_so3(cm, so);
        if (fsp1->parsed()) return run_fibrate_sp1(cm, sp);
        if (phase->parsed()) return run_phase_portrait(cm, po);
        return run_moment_map(cm, mo);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
