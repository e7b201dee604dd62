#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glekin/kinetics.hpp"
#include "glekin/model.hpp"
#include "glekin/moments.hpp"

namespace glekin {

/// Fully resolved run configuration shared by all CLI subcommands.
/// Defaults are the reference dimensionless parameter set
/// (m = kT = Gamma = eta = omega_b = 1, Omega^2 = 2, x0 = 0, v0 = 2).
struct RunConfig {
    NoiseKind kind = NoiseKind::HN;
    double gamma_big = 1.0;
    double omega2 = 2.0;
    double eta = 1.0;
    double mass = 1.0;
    double kT = 1.0;
    double gamma_ohmic = 1.0;

    double omega_b = 1.0;
    double x0 = 0.0;
    double v0 = 2.0;

    double t_max = 30.0;
    double dt = 0.01;

    CorrelationConvention convention = CorrelationConvention::FdtKernel;
    VarianceRegion region = VarianceRegion::Symmetric;

    std::size_t n_traj = 10000;
    std::uint64_t seed = 12345;
    int workers = 0;
    bool kappa_ensemble = false; // simulate: flux-weighted ensemble instead of fixed IC
    bool self_check = false;     // simulate: compare against the analytic pipeline, exit 4 on disagreement

    std::optional<TstNormalization> tst;

    // sweep: values to scan; parameters with an empty list keep the scalar above
    std::map<std::string, std::vector<double>> sweep_values;

    std::string output_path; // empty -> stdout
    bool no_timestamp = false;
};

/// Late-window fraction used for "stationary" averages (trailing half of the horizon).
inline constexpr double kLateWindowFraction = 0.5;

NoiseModel model_from_config(const RunConfig& cfg);

/// Executes one subcommand, writing a CSV (with '#' metadata header) to
/// cfg.output_path or `fallback_out`. `argv_echo` is reproduced in the header.
/// Throws ValidationError / NumericalError / SelfCheckError; the CLI maps these to
/// exit codes 2 / 3 / 4.
void run_command(const std::string& command, const RunConfig& cfg, std::ostream& fallback_out,
                 const std::string& argv_echo = {});

/// Resolves cfg.output_path against the GLEKIN_OUTDIR environment variable
/// (relative paths only).
std::string resolve_output_path(const std::string& path);

const std::vector<std::string>& run_commands(); // response moments chi kappa rate simulate sweep reproduce-fig1 reproduce-fig2

} // namespace glekin
