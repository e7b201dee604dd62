#include "glekin/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "glekin/errors.hpp"
#include "glekin/simulate.hpp"
#include "glekin/version.hpp"

namespace glekin {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct CsvWriter {
    std::ofstream file;
    std::ostream* out = nullptr;

    CsvWriter(const RunConfig& cfg, std::ostream& fallback) {
        if (cfg.output_path.empty()) {
            out = &fallback;
            return;
        }
        const std::string path = resolve_output_path(cfg.output_path);
        file.open(path, std::ios::binary); // binary: byte-identical across runs
        if (!file) throw ValidationError("cannot open output file '" + path + "'");
        out = &file;
    }
    std::ostream& os() { return *out; }
};

void write_header(std::ostream& os, const std::string& command, const RunConfig& cfg,
                  const std::string& argv_echo, bool with_sim, bool with_late_window) {
    os << "# glekin " << kVersion << "\n";
    os << "# command: " << command << "\n";
    if (!argv_echo.empty()) os << "# argv: " << argv_echo << "\n";
    if (!cfg.no_timestamp) os << "# generated_at: " << timestamp_utc() << "\n";
    os << "# kind = " << to_string(cfg.kind) << "\n";
    os << "# gamma_big = " << fmt(cfg.gamma_big) << "\n";
    os << "# omega2 = " << fmt(cfg.omega2) << "\n";
    os << "# eta = " << fmt(cfg.eta) << "\n";
    os << "# mass = " << fmt(cfg.mass) << "\n";
    os << "# kT = " << fmt(cfg.kT) << "\n";
    if (cfg.kind == NoiseKind::Ohmic) os << "# gamma_ohmic = " << fmt(cfg.gamma_ohmic) << "\n";
    os << "# omega_b = " << fmt(cfg.omega_b) << "\n";
    os << "# x0 = " << fmt(cfg.x0) << "\n";
    os << "# v0 = " << fmt(cfg.v0) << "\n";
    os << "# t_max = " << fmt(cfg.t_max) << "\n";
    os << "# dt = " << fmt(cfg.dt) << "\n";
    os << "# convention = " << to_string(cfg.convention) << "\n";
    os << "# region = " << to_string(cfg.region)
       << (cfg.convention == CorrelationConvention::FdtKernel &&
                   cfg.region == VarianceRegion::Symmetric
               ? " (oracle-validated)"
               : " (comparison convention)")
       << "\n";
    if (with_sim) {
        os << "# n_traj = " << cfg.n_traj << "\n";
        os << "# seed = " << cfg.seed << "\n";
    }
    if (with_late_window)
        os << "# late_window = [" << fmt(cfg.t_max * (1.0 - kLateWindowFraction)) << ", "
           << fmt(cfg.t_max) << "]\n";
}

struct Pipeline {
    NoiseModel model;
    BarrierSpec barrier;
    CorrelationForm corr;
    SpectralDecomposition decomp;
    InitialState state;
};

Pipeline build_pipeline(const RunConfig& cfg) {
    Pipeline p;
    p.model = model_from_config(cfg);
    p.barrier = make_barrier(cfg.omega_b);
    p.corr = correlation_form(p.model, cfg.convention);
    p.decomp = spectral_decomposition(p.model, p.barrier);
    p.state = InitialState{cfg.x0, cfg.v0};
    return p;
}

void run_response(const RunConfig& cfg, std::ostream& os) {
    const auto p = build_pipeline(cfg);
    const auto grid = make_time_grid(cfg.t_max, cfg.dt).times();
    os << "t,H,H_int\n";
    for (double t : grid)
        os << fmt(t) << ',' << fmt(p.decomp.response(t)) << ',' << fmt(p.decomp.response_integral(t))
           << "\n";
}

void run_moments(const RunConfig& cfg, std::ostream& os) {
    const auto p = build_pipeline(cfg);
    const auto grid = make_time_grid(cfg.t_max, cfg.dt).times();
    const auto curves = moment_curves(p.decomp, p.corr, p.state, p.barrier, grid, cfg.region);
    os << "t,mean,var\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        os << fmt(grid[i]) << ',' << fmt(curves.mean[i]) << ',' << fmt(curves.var[i]) << "\n";
}

void run_chi(const RunConfig& cfg, std::ostream& os) {
    const auto p = build_pipeline(cfg);
    const auto grid = make_time_grid(cfg.t_max, cfg.dt).times();
    os << "t,mean,sigma,chi\n";
    for (double t : grid) {
        const double mean = mean_position(p.decomp, p.state, p.barrier, t);
        const double sigma = std::sqrt(std::max(variance_closed(p.decomp, p.corr, t, cfg.region), 0.0));
        os << fmt(t) << ',' << fmt(mean) << ',' << fmt(sigma) << ','
           << fmt(passing_probability(mean, sigma)) << "\n";
    }
}

void run_kappa(const RunConfig& cfg, std::ostream& os, bool with_flux) {
    const auto p = build_pipeline(cfg);
    const auto grid = make_time_grid(cfg.t_max, cfg.dt).times();
    KineticsOptions opts;
    opts.region = cfg.region;
    opts.with_flux_rate = with_flux;
    opts.tst = cfg.tst;
    const auto curves = kinetics_curves(p.decomp, p.corr, p.model, p.barrier, p.state, grid, opts);

    os << "t,kappa,H_zero_flag";
    if (with_flux) {
        os << ",rate_ratio";
        if (curves.absolute_rate_scale) os << ",k_abs";
    }
    os << "\n";
    std::size_t flag_pos = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        bool flagged = false;
        if (flag_pos < curves.response_zero_flags.size() && curves.response_zero_flags[flag_pos] == i) {
            flagged = true;
            ++flag_pos;
        }
        os << fmt(grid[i]) << ',' << fmt(curves.kappa[i]) << ',' << (flagged ? 1 : 0);
        if (with_flux) {
            os << ',' << fmt(curves.rate_ratio[i]);
            if (curves.absolute_rate_scale)
                os << ',' << fmt(curves.rate_ratio[i] * *curves.absolute_rate_scale);
        }
        os << "\n";
    }
}

void run_simulate(const RunConfig& cfg, std::ostream& os) {
    const auto p = build_pipeline(cfg);
    const auto grid = make_time_grid(cfg.t_max, cfg.dt);
    SimulateOptions opts;
    opts.workers = cfg.workers;

    if (cfg.kappa_ensemble) {
        const auto emp = empirical_kappa(p.model, p.barrier, p.corr, grid, cfg.n_traj, cfg.seed, opts);
        os << "t,kappa_hat,se_kappa\n";
        for (std::size_t i = 0; i < emp.grid.size(); ++i)
            os << fmt(emp.grid[i]) << ',' << fmt(emp.kappa_hat[i]) << ',' << fmt(emp.se[i]) << "\n";
        return;
    }

    const auto ens = simulate_ensemble(p.model, p.barrier, p.corr, p.state, grid, cfg.n_traj, cfg.seed, opts);

    if (cfg.self_check) {
        if (cfg.convention != CorrelationConvention::FdtKernel || cfg.region != VarianceRegion::Symmetric)
            throw ValidationError("self-check requires the oracle-validated convention "
                                  "(fdt-kernel, symmetric)");
        for (double tc : {1.0, 2.0, 4.0}) {
            if (tc > cfg.t_max) continue;
            const auto j = static_cast<std::size_t>(std::llround(tc / cfg.dt));
            const double mean = mean_position(p.decomp, p.state, p.barrier, ens.grid[j]);
            const double var = variance_closed(p.decomp, p.corr, ens.grid[j], cfg.region);
            const double chi = passing_probability(mean, std::sqrt(std::max(var, 0.0)));
            const double se_chi =
                std::sqrt(std::max(chi * (1.0 - chi), 0.0) / static_cast<double>(ens.n_traj)) +
                1.0 / static_cast<double>(ens.n_traj);
            if (std::abs(ens.chi_hat[j] - chi) > 3.0 * se_chi) {
                std::ostringstream msg;
                msg << "self-check failed: chi(" << ens.grid[j] << ") analytic " << chi
                    << " vs ensemble " << ens.chi_hat[j] << " (3 SE = " << 3.0 * se_chi << ")";
                throw SelfCheckError(msg.str());
            }
            if (ens.se_var[j] > 0.0 && std::abs(ens.var_hat[j] - var) > 3.0 * ens.se_var[j]) {
                std::ostringstream msg;
                msg << "self-check failed: var(" << ens.grid[j] << ") analytic " << var
                    << " vs ensemble " << ens.var_hat[j] << " (3 SE = " << 3.0 * ens.se_var[j] << ")";
                throw SelfCheckError(msg.str());
            }
        }
    }

    os << "t,mean_hat,se_mean,var_hat,se_var,chi_hat,se_chi\n";
    for (std::size_t i = 0; i < ens.grid.size(); ++i)
        os << fmt(ens.grid[i]) << ',' << fmt(ens.mean_hat[i]) << ',' << fmt(ens.se_mean[i]) << ','
           << fmt(ens.var_hat[i]) << ',' << fmt(ens.se_var[i]) << ',' << fmt(ens.chi_hat[i]) << ','
           << fmt(ens.se_chi[i]) << "\n";
}

void run_sweep(const RunConfig& cfg, std::ostream& os) {
    // Cartesian scan; parameters not listed keep their scalar value.
    static const std::vector<std::string> keys = {"gamma_big", "omega2", "eta", "omega_b"};
    std::vector<std::vector<double>> axes;
    std::vector<std::string> active;
    for (const auto& k : keys) {
        auto it = cfg.sweep_values.find(k);
        if (it != cfg.sweep_values.end() && !it->second.empty()) {
            axes.push_back(it->second);
            active.push_back(k);
        }
    }
    for (const auto& [k, v] : cfg.sweep_values)
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw ValidationError("sweep: unknown parameter '" + k + "'");
    if (axes.empty()) throw ValidationError("sweep: no parameter lists given");

    for (const auto& k : active) os << k << ',';
    os << "late_kappa_mean,chi_sign_rate\n";

    std::vector<std::size_t> idx(axes.size(), 0);
    const auto grid = make_time_grid(cfg.t_max, cfg.dt).times();
    for (;;) {
        RunConfig point = cfg;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const double value = axes[a][idx[a]];
            if (active[a] == "gamma_big") point.gamma_big = value;
            else if (active[a] == "omega2") point.omega2 = value;
            else if (active[a] == "eta") point.eta = value;
            else if (active[a] == "omega_b") point.omega_b = value;
        }
        const auto p = build_pipeline(point);
        KineticsOptions kopts;
        kopts.region = point.region;
        const auto curves = kinetics_curves(p.decomp, p.corr, p.model, p.barrier, p.state, grid, kopts);
        const double late_kappa = late_window_mean(grid, curves.kappa, kLateWindowFraction);
        const double window = cfg.t_max * kLateWindowFraction;
        const int changes = sign_change_count(grid, curves.chi, 0.5, cfg.t_max - window, cfg.t_max);
        for (std::size_t a = 0; a < axes.size(); ++a) os << fmt(axes[a][idx[a]]) << ',';
        os << fmt(late_kappa) << ',' << fmt(static_cast<double>(changes) / window) << "\n";

        std::size_t a = 0;
        for (; a < axes.size(); ++a) {
            if (++idx[a] < axes[a].size()) break;
            idx[a] = 0;
        }
        if (a == axes.size()) break;
    }
}

void run_figure(const RunConfig& cfg, std::ostream& os, bool kappa_figure) {
    const auto grid = make_time_grid(cfg.t_max, cfg.dt).times();
    static const NoiseKind kinds[] = {NoiseKind::HN, NoiseKind::HVN, NoiseKind::HAN};
    std::vector<std::vector<double>> cols;
    for (NoiseKind kind : kinds) {
        RunConfig kc = cfg;
        kc.kind = kind;
        const auto p = build_pipeline(kc);
        KineticsOptions kopts;
        kopts.region = cfg.region;
        const auto curves = kinetics_curves(p.decomp, p.corr, p.model, p.barrier, p.state, grid, kopts);
        cols.push_back(kappa_figure ? curves.kappa : curves.chi);
    }
    const char* what = kappa_figure ? "kappa" : "chi";
    os << "t," << what << "_hn," << what << "_hvn," << what << "_han\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        os << fmt(grid[i]) << ',' << fmt(cols[0][i]) << ',' << fmt(cols[1][i]) << ','
           << fmt(cols[2][i]) << "\n";
}

} // namespace

NoiseModel model_from_config(const RunConfig& cfg) {
    return make_noise_model(cfg.kind, cfg.gamma_big, cfg.omega2, cfg.eta, cfg.mass, cfg.kT,
                            cfg.gamma_ohmic);
}

std::string resolve_output_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("GLEKIN_OUTDIR");
    if (dir == nullptr || *dir == '\0') return path;
    std::string full = dir;
    if (full.back() != '/') full += '/';
    return full + path;
}

const std::vector<std::string>& run_commands() {
    static const std::vector<std::string> cmds = {"response", "moments",       "chi",
                                                  "kappa",    "rate",          "simulate",
                                                  "sweep",    "reproduce-fig1", "reproduce-fig2"};
    return cmds;
}

void run_command(const std::string& command, const RunConfig& cfg, std::ostream& fallback_out,
                 const std::string& argv_echo) {
    bool known = false;
    for (const auto& name : run_commands()) known = known || name == command;
    if (!known) throw ValidationError("unknown command '" + command + "'");

    // Validate the configuration before any output is written.
    (void)model_from_config(cfg);
    (void)make_barrier(cfg.omega_b);
    (void)make_time_grid(cfg.t_max, cfg.dt);
    if (cfg.tst) (void)tst_rate(*cfg.tst);
    if (command == "simulate" && cfg.kappa_ensemble && cfg.self_check)
        throw ValidationError("self-check applies to the fixed-initial-condition ensemble; "
                              "drop --kappa-ensemble or --self-check");
    if (command == "sweep") {
        bool any = false;
        for (const auto& [k, values] : cfg.sweep_values) {
            (void)k;
            any = any || !values.empty();
        }
        if (!any) throw ValidationError("sweep: no parameter lists given");
    }

    CsvWriter writer(cfg, fallback_out);
    std::ostream& os = writer.os();
    const bool with_sim = command == "simulate";
    const bool with_window = command == "sweep" || command == "kappa" || command == "reproduce-fig2";
    write_header(os, command, cfg, argv_echo, with_sim, with_window);

    if (command == "response") run_response(cfg, os);
    else if (command == "moments") run_moments(cfg, os);
    else if (command == "chi") run_chi(cfg, os);
    else if (command == "kappa") run_kappa(cfg, os, /*with_flux=*/false);
    else if (command == "rate") run_kappa(cfg, os, /*with_flux=*/true);
    else if (command == "simulate") run_simulate(cfg, os);
    else if (command == "sweep") run_sweep(cfg, os);
    else if (command == "reproduce-fig1") run_figure(cfg, os, /*kappa_figure=*/false);
    else run_figure(cfg, os, /*kappa_figure=*/true);

    os.flush();
    if (!os) throw NumericalError("failed writing output");
}

} // namespace glekin
