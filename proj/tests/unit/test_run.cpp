#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "glekin/errors.hpp"
#include "glekin/run.hpp"
#include "glekin/simulate.hpp"

using namespace glekin;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("glekin_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

RunConfig quick_config() {
    RunConfig cfg;
    cfg.t_max = 2.0;
    cfg.dt = 0.05;
    cfg.no_timestamp = true;
    return cfg;
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) { // column header
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

TEST_CASE("chi output matches the in-process pipeline") {
    TempDir tmp;
    RunConfig cfg = quick_config();
    cfg.output_path = (tmp.path / "chi.csv").string();
    run_command("chi", cfg, std::cout);

    const auto rows = parse_csv(slurp(cfg.output_path));
    REQUIRE(rows.size() == 41);
    const auto m = model_from_config(cfg);
    const auto barrier = make_barrier(cfg.omega_b);
    const auto d = spectral_decomposition(m, barrier);
    const auto corr = correlation_form(m);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 4);
        const double mean = mean_position(d, {cfg.x0, cfg.v0}, barrier, row[0]);
        const double sigma = std::sqrt(std::max(variance_closed(d, corr, row[0]), 0.0));
        CHECK(row[3] == doctest::Approx(passing_probability(mean, sigma)).epsilon(1e-10));
    }
}

TEST_CASE("reruns are byte-identical, including across worker counts") {
    TempDir tmp;
    RunConfig cfg = quick_config();
    cfg.n_traj = 256;
    cfg.t_max = 1.0;
    cfg.seed = 4242;

    cfg.output_path = (tmp.path / "a.csv").string();
    cfg.workers = 1;
    run_command("simulate", cfg, std::cout);
    cfg.output_path = (tmp.path / "b.csv").string();
    cfg.workers = 8;
    run_command("simulate", cfg, std::cout);
    cfg.output_path = (tmp.path / "c.csv").string();
    run_command("simulate", cfg, std::cout);

    const auto a = slurp(tmp.path / "a.csv");
    CHECK(a == slurp(tmp.path / "b.csv"));
    CHECK(a == slurp(tmp.path / "c.csv"));
    CHECK(!a.empty());
}

TEST_CASE("kappa subcommand reaches the white-noise limit at t = 20") {
    TempDir tmp;
    RunConfig cfg = quick_config();
    cfg.kind = NoiseKind::Ohmic;
    cfg.gamma_ohmic = 1.0;
    cfg.omega_b = 1.0;
    cfg.t_max = 20.0;
    cfg.dt = 0.1;
    cfg.output_path = (tmp.path / "kappa.csv").string();
    run_command("kappa", cfg, std::cout);
    const auto rows = parse_csv(slurp(cfg.output_path));
    REQUIRE(!rows.empty());
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(rows.back()[0] == doctest::Approx(20.0));
    CHECK(std::abs(rows.back()[1] - golden) <= 1e-4);
}

TEST_CASE("rate rows satisfy the flux/transmission identity") {
    TempDir tmp;
    RunConfig cfg = quick_config();
    cfg.kind = NoiseKind::HAN;
    cfg.output_path = (tmp.path / "rate.csv").string();
    run_command("rate", cfg, std::cout);
    const auto rows = parse_csv(slurp(cfg.output_path));
    REQUIRE(!rows.empty());
    for (const auto& row : rows) {
        REQUIRE(row.size() >= 4); // t, kappa, flag, rate_ratio
        CHECK(std::abs(row[3] - row[1]) < 1e-6);
    }
}

TEST_CASE("validation errors name the offending field") {
    RunConfig cfg = quick_config();
    cfg.omega_b = 0.0;
    std::ostringstream sink;
    CHECK_THROWS_WITH_AS(run_command("chi", cfg, sink), doctest::Contains("omega_b"),
                         ValidationError);
    cfg = quick_config();
    cfg.gamma_big = -1.0;
    CHECK_THROWS_WITH_AS(run_command("response", cfg, sink), doctest::Contains("gamma_big"),
                         ValidationError);
    CHECK_THROWS_AS(run_command("no-such-command", quick_config(), sink), ValidationError);
}

TEST_CASE("self-check passes under the oracle-validated convention and rejects others") {
    std::ostringstream sink;
    RunConfig cfg = quick_config();
    cfg.self_check = true;
    cfg.n_traj = 600;
    cfg.t_max = 1.0;
    cfg.dt = 0.01;
    CHECK_NOTHROW(run_command("simulate", cfg, sink));

    cfg.convention = CorrelationConvention::LiteralEq2;
    CHECK_THROWS_AS(run_command("simulate", cfg, sink), ValidationError);

    cfg.convention = CorrelationConvention::FdtKernel;
    cfg.kappa_ensemble = true;
    CHECK_THROWS_WITH_AS(run_command("simulate", cfg, sink), doctest::Contains("kappa-ensemble"),
                         ValidationError);
}

TEST_CASE("sweep emits one row per grid point") {
    TempDir tmp;
    RunConfig cfg = quick_config();
    cfg.t_max = 6.0;
    cfg.dt = 0.05;
    cfg.sweep_values["eta"] = {0.5, 1.0};
    cfg.sweep_values["omega_b"] = {0.8, 1.0, 1.2};
    cfg.output_path = (tmp.path / "sweep.csv").string();
    run_command("sweep", cfg, std::cout);
    const auto rows = parse_csv(slurp(cfg.output_path));
    REQUIRE(rows.size() == 6);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 4); // eta, omega_b, late_kappa_mean, chi_sign_rate
        CHECK(row[2] > 0.0);
        CHECK(row[2] <= 1.0);
    }
}

TEST_CASE("figure bundles carry three kernels and the convention note") {
    TempDir tmp;
    RunConfig cfg = quick_config();
    cfg.t_max = 3.0;
    cfg.output_path = (tmp.path / "fig2.csv").string();
    run_command("reproduce-fig2", cfg, std::cout);
    const std::string text = slurp(cfg.output_path);
    CHECK(text.find("# convention = fdt-kernel") != std::string::npos);
    CHECK(text.find("oracle-validated") != std::string::npos);
    CHECK(text.find("t,kappa_hn,kappa_hvn,kappa_han") != std::string::npos);
    const auto rows = parse_csv(text);
    REQUIRE(!rows.empty());
    for (const auto& row : rows) REQUIRE(row.size() == 4);
}

TEST_CASE("relative outputs resolve against GLEKIN_OUTDIR") {
    TempDir tmp;
    setenv("GLEKIN_OUTDIR", tmp.path.c_str(), 1);
    RunConfig cfg = quick_config();
    cfg.output_path = "nested.csv";
    run_command("response", cfg, std::cout);
    unsetenv("GLEKIN_OUTDIR");
    CHECK(fs::exists(tmp.path / "nested.csv"));
    CHECK(resolve_output_path("/abs/path.csv") == "/abs/path.csv");
}

TEST_CASE("timestamp header is present by default and absent with no_timestamp") {
    TempDir tmp;
    RunConfig cfg = quick_config();
    cfg.t_max = 1.0;
    cfg.no_timestamp = false;
    cfg.output_path = (tmp.path / "ts.csv").string();
    run_command("response", cfg, std::cout);
    CHECK(slurp(cfg.output_path).find("# generated_at:") != std::string::npos);
    cfg.no_timestamp = true;
    cfg.output_path = (tmp.path / "nots.csv").string();
    run_command("response", cfg, std::cout);
    CHECK(slurp(cfg.output_path).find("# generated_at:") == std::string::npos);
}
