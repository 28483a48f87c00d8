#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CAYLEYFIB_EXE) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream is(p);
    std::string line;
    std::getline(is, line);
    return line;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("cayleyfib_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Every regular file under a and b has identical bytes, and the sets match.
bool same_tree(const fs::path& a, const fs::path& b) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        const fs::path other = b / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
        ++n;
    }
    return n > 0 && n == static_cast<std::size_t>(std::distance(fs::directory_iterator(b), fs::directory_iterator()));
}

}  // namespace

TEST_CASE("exit codes") {
    TempDir d("codes");
    const std::string out = " --out " + d.path.string();
    CHECK(run("verify --points 3 --pi7-points 1" + out) == 0);
    CHECK(run("verify --points 3 --pi7-points 1 --torsion-tol 1e-300" + out) == 1);
    CHECK(run("verify --c -1") == 2);
    CHECK(run("") == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("phase-portrait --grid 10" + out) == 2);
    CHECK(run("fibrate-so3 --F -1" + out) == 2);
    CHECK(run("moment-map" + out) == 2);
    CHECK(run("--help") == 0);
    CHECK(run("verify --points 2 --out /proc/cayleyfib_no_such_dir") == 1);
}

TEST_CASE("identical runs write identical bytes") {
    TempDir a("det_a"), b("det_b");
    for (const auto* dir : {&a, &b}) {
        const std::string out = " --out " + dir->path.string();
        REQUIRE(run("fibrate-so3 --F 1,3,8 --resolution 20" + out) == 0);
        REQUIRE(run("fibrate-sp1 --alpha -1,0.5 --r 1 --corner" + out) == 0);
        REQUIRE(run("phase-portrait --grid 20x20" + out) == 0);
        REQUIRE(run("moment-map --action sp1 --grid 10x10" + out) == 0);
        REQUIRE(run("verify --points 4 --pi7-points 1" + out) == 0);
    }
    CHECK(same_tree(a.path, b.path));
}

TEST_CASE("multi-threaded runs match single-threaded ones") {
    TempDir a("thr_a"), b("thr_b");
    REQUIRE(run("fibrate-sp1 --alpha -1,0,1 --r 0.5,2 --threads 1 --out " + a.path.string()) == 0);
    REQUIRE(run("fibrate-sp1 --alpha -1,0,1 --r 0.5,2 --threads 3 --out " + b.path.string()) == 0);
    CHECK(same_tree(a.path, b.path));
}

TEST_CASE("output schemas") {
    TempDir d("schema");
    const std::string out = " --out " + d.path.string();
    REQUIRE(run("fibrate-so3 --F 2 --resolution 10" + out) == 0);
    CHECK(first_line(d.path / "so3_fibre_0.csv") == "alpha,u,F,eta_residual");
    REQUIRE(run("fibrate-sp1 --alpha 0 --r 1" + out) == 0);
    CHECK(first_line(d.path / "sp1_fibre_0.csv") == "alpha,r,eta_residual,event_tags");
    REQUIRE(run("phase-portrait --grid 8x8" + out) == 0);
    CHECK(first_line(d.path / "phase_grid.csv") == "alpha,r,f1,f2");
    REQUIRE(run("moment-map --action fibre --r 0,1" + out) == 0);
    CHECK(first_line(d.path / "moment_fibre.csv") == "r,nu");
    CHECK(slurp(d.path / "moment_fibre.csv").find("\n0,0\n") != std::string::npos);
    REQUIRE(run("verify --points 2 --pi7-points 1" + out) == 0);
    CHECK(first_line(d.path / "verify.csv") == "suite,chart,c,points,max_residual,tolerance,pass");

    REQUIRE(run("moment-map --action so3 --grid 5x5 --format json" + out) == 0);
    const auto j = nlohmann::json::parse(slurp(d.path / "moment_so3.json"));
    REQUIRE(j.is_array());
    CHECK(j.size() == 25);
    CHECK(j[0].contains("alpha"));
    CHECK(j[0].contains("u"));
    CHECK(j[0].contains("nu"));
}

TEST_CASE("output directory from the environment") {
    TempDir d("env");
    const std::string cmd = "CAYLEYFIB_OUT_DIR=" + d.path.string() + " " + CAYLEYFIB_EXE +
                            " moment-map --action fibre --r 1 >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(d.path / "moment_fibre.csv"));
}

TEST_CASE("reflected exports mirror alpha") {
    TempDir a("plain"), b("mirror");
    REQUIRE(run("phase-portrait --grid 6x3 --out " + a.path.string()) == 0);
    REQUIRE(run("phase-portrait --grid 6x3 --reflect --out " + b.path.string()) == 0);
    const std::string plain = slurp(a.path / "phase_grid.csv"), mirror = slurp(b.path / "phase_grid.csv");
    CHECK(plain != mirror);
    std::istringstream pa(plain), pb(mirror);
    std::string la, lb;
    std::getline(pa, la);
    std::getline(pb, lb);
    CHECK(la == lb);
    while (std::getline(pa, la) && std::getline(pb, lb)) {
        const double alpha_a = std::stod(la.substr(0, la.find(','))), alpha_b = std::stod(lb.substr(0, lb.find(',')));
        CHECK(alpha_b == -alpha_a);
    }
}
