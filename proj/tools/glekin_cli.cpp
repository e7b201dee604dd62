// Command-line surface for the GLE barrier-kinetics library.
//
// All physics/grid/simulation options are global (they may appear before or after
// the subcommand, and map one-to-one onto config-file keys). Exit codes: 0 success,
// 2 config validation, 3 numerical failure, 4 oracle disagreement in self-check mode.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glekin/errors.hpp"
#include "glekin/run.hpp"
#include "glekin/version.hpp"

namespace {

struct CliState {
    glekin::RunConfig cfg;
    std::string kind_name = "hn";
    std::string convention_name = "fdt-kernel";
    std::string region_name = "symmetric";
    double partition_Q = 0.0, planck_h = 0.0, barrier_VB = 0.0;
    std::vector<double> scan_gamma_big, scan_omega2, scan_eta, scan_omega_b;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-dependent barrier-crossing kinetics of a GLE with structured internal noise"};
    app.set_version_flag("--version", glekin::kVersion);
    app.require_subcommand(1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "config file, one 'key = value' per line, '#' comments; "
                                   "keys are the long option names");
    app.footer("Options are global: they may be given before or after the subcommand, or in the\n"
               "config file as flat 'key = value' lines (command-line values win).\n"
               "Output columns:\n"
               "  response: t,H,H_int   moments: t,mean,var   chi: t,mean,sigma,chi\n"
               "  kappa: t,kappa,H_zero_flag   rate: t,kappa,H_zero_flag,rate_ratio[,k_abs]\n"
               "  simulate: t,mean_hat,se_mean,var_hat,se_var,chi_hat,se_chi\n"
               "  simulate --kappa-ensemble: t,kappa_hat,se_kappa\n"
               "  sweep: <scanned params>,late_kappa_mean,chi_sign_rate\n"
               "  reproduce-fig1: t,chi_hn,chi_hvn,chi_han   reproduce-fig2: t,kappa_hn,kappa_hvn,kappa_han");

    CliState st;

    app.add_option("--kind", st.kind_name, "noise kind: hn, hvn, han, ohmic")
        ->check(CLI::IsMember({"hn", "hvn", "han", "ohmic"}));
    app.add_option("--gamma-big", st.cfg.gamma_big, "damping parameter Gamma");
    app.add_option("--omega2", st.cfg.omega2, "frequency parameter Omega^2");
    app.add_option("--eta", st.cfg.eta, "white-noise intensity eta");
    app.add_option("--mass", st.cfg.mass, "particle mass m");
    app.add_option("--kT", st.cfg.kT, "thermal energy k_B T");
    app.add_option("--gamma-ohmic", st.cfg.gamma_ohmic, "Ohmic friction strength (kind = ohmic)");
    app.add_option("--omega-b", st.cfg.omega_b, "barrier frequency omega_b");
    app.add_option("--x0", st.cfg.x0, "initial position");
    app.add_option("--v0", st.cfg.v0, "initial velocity");
    app.add_option("--t-max", st.cfg.t_max, "time horizon");
    app.add_option("--dt", st.cfg.dt, "grid spacing");
    app.add_option("--convention", st.convention_name, "correlation convention")
        ->check(CLI::IsMember({"fdt-kernel", "literal-eq2"}));
    app.add_option("--region", st.region_name, "variance integration region")
        ->check(CLI::IsMember({"symmetric", "half-region"}));
    app.add_option("-o,--output", st.cfg.output_path,
                   "output CSV path (relative paths resolve against $GLEKIN_OUTDIR); default stdout");
    app.add_flag("--no-timestamp", st.cfg.no_timestamp, "omit the timestamp header line");
    app.add_option("--n-traj", st.cfg.n_traj, "simulate: number of trajectories");
    app.add_option("--seed", st.cfg.seed, "simulate: master RNG seed");
    app.add_option("--workers", st.cfg.workers,
                   "simulate: worker threads (0 = auto); results do not depend on this");
    auto* q = app.add_option("--partition-Q", st.partition_Q, "rate: partition function Q for k_abs");
    auto* h = app.add_option("--planck-h", st.planck_h, "rate: Planck constant h for k_abs");
    auto* v = app.add_option("--barrier-height", st.barrier_VB, "rate: barrier height V_B for k_abs");
    q->needs(h)->needs(v);
    h->needs(q)->needs(v);
    v->needs(q)->needs(h);
    app.add_option("--scan-gamma-big", st.scan_gamma_big, "sweep: Gamma values")->delimiter(',');
    app.add_option("--scan-omega2", st.scan_omega2, "sweep: Omega^2 values")->delimiter(',');
    app.add_option("--scan-eta", st.scan_eta, "sweep: eta values")->delimiter(',');
    app.add_option("--scan-omega-b", st.scan_omega_b, "sweep: omega_b values")->delimiter(',');

    CLI::App* simulate = nullptr;
    for (const std::string& name : glekin::run_commands()) {
        CLI::App* sub = app.add_subcommand(name, name == "simulate"
                                                     ? "stochastic trajectory ensemble"
                                                     : "analytic pipeline: " + name);
        sub->fallthrough();
        if (name == "simulate") simulate = sub;
    }
    simulate->add_flag("--kappa-ensemble", st.cfg.kappa_ensemble,
                       "flux-weighted ensemble at the barrier top (emits kappa_hat)");
    simulate->add_flag("--self-check", st.cfg.self_check,
                       "compare the ensemble against the analytic pipeline; exit 4 on disagreement");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string argv_echo;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) argv_echo += ' ';
        argv_echo += argv[i];
    }

    try {
        st.cfg.kind = glekin::noise_kind_from_string(st.kind_name);
        st.cfg.convention = st.convention_name == "literal-eq2"
                                ? glekin::CorrelationConvention::LiteralEq2
                                : glekin::CorrelationConvention::FdtKernel;
        st.cfg.region = st.region_name == "half-region" ? glekin::VarianceRegion::HalfRegion
                                                        : glekin::VarianceRegion::Symmetric;
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "rate" && st.partition_Q != 0.0)
            st.cfg.tst = glekin::TstNormalization{st.partition_Q, st.planck_h, st.barrier_VB, st.cfg.kT};
        if (command == "sweep") {
            st.cfg.sweep_values["gamma_big"] = st.scan_gamma_big;
            st.cfg.sweep_values["omega2"] = st.scan_omega2;
            st.cfg.sweep_values["eta"] = st.scan_eta;
            st.cfg.sweep_values["omega_b"] = st.scan_omega_b;
        }

        glekin::run_command(command, st.cfg, std::cout, argv_echo);
        return 0;
    } catch (const glekin::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const glekin::SelfCheckError& e) {
        std::cerr << "self-check: " << e.what() << "\n";
        return 4;
    } catch (const glekin::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
