#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "glekin/model.hpp"
#include "glekin/moments.hpp"
#include "glekin/resolvent.hpp"
#include "glekin/rng.hpp"

namespace glekin {

struct TimeGrid {
    double t_max = 0.0;
    double dt = 0.0;

    std::size_t size() const; // floor(t_max/dt) + 1
    double time(std::size_t i) const { return static_cast<double>(i) * dt; }
    std::vector<double> times() const;
};

TimeGrid make_time_grid(double t_max, double dt);

/// Exact stationary Gaussian noise on a grid: covariance C(t_i - t_j) from the smooth
/// exponential sum plus d0/dt on the diagonal, factorized once (Cholesky, with jitter
/// up to 1e-10 of the max diagonal) and shared read-only across trajectories.
/// Throws NumericalError naming the most negative eigenvalue if the covariance is not
/// positive semidefinite beyond the jitter budget.
class NoiseSampler {
public:
    NoiseSampler(const CorrelationForm& corr, const TimeGrid& grid);

    /// Path for trajectory `index`; bit-for-bit deterministic in (seed, index).
    void sample_path(std::uint64_t master_seed, std::uint64_t index, std::span<double> out) const;

    /// Path drawn from an existing stream (consumes size() normals).
    void sample_path(NormalStream& stream, std::span<double> out) const;

    const TimeGrid& grid() const { return grid_; }
    bool zero_noise() const { return zero_; }

private:
    TimeGrid grid_;
    Eigen::MatrixXd chol_; // lower triangular
    bool zero_ = false;
};

std::vector<std::vector<double>> sample_noise_paths(const CorrelationForm& corr, const TimeGrid& grid,
                                                    std::size_t n_traj, std::uint64_t seed);

struct Trajectory {
    std::vector<double> x;
    std::vector<double> v;
};

struct IntegrateOptions {
    /// Flip the potential force to a stable well (+omega_b^2 -> restoring); used only
    /// by the equilibrium calibration of the noise/friction convention.
    bool stable_well = false;
};

/// Direct GLE step integrator: the memory integral is a trapezoid over the stored
/// velocity history with the friction kernel beta(tau) = C(tau) / (m kT); the delta
/// part of beta acts as the instantaneous friction m * (d0 / (2 m kT)) * v(t).
/// One-step scheme is velocity-Verlet-style with a Heun corrector for the velocity;
/// second-order accurate in the deterministic limit. O(n^2) per trajectory.
Trajectory integrate_gle(const NoiseModel& model, const BarrierSpec& barrier,
                         const CorrelationForm& corr, std::span<const double> noise_path,
                         const InitialState& state, const TimeGrid& grid,
                         const IntegrateOptions& options = {});

/// Per-time ensemble estimates with standard errors.
struct EnsembleResult {
    std::vector<double> grid;
    std::vector<double> mean_hat, var_hat, chi_hat;
    std::vector<double> se_mean, se_var, se_chi;
    std::size_t n_traj = 0;
    std::uint64_t seed = 0;
};

/// Unbiased per-time mean/variance and passing fraction chi_hat = P(x > 0, strict)
/// with binomial standard errors, from explicitly stored trajectories.
EnsembleResult ensemble_stats(const std::vector<Trajectory>& trajectories, const TimeGrid& grid);

struct SimulateOptions {
    IntegrateOptions integrate;
    int workers = 0; // 0 -> hardware concurrency
};

/// Runs n_traj independent trajectories (chunked across workers, fixed chunk size and
/// fixed reduction order, so the result is byte-identical for any worker count) and
/// accumulates the ensemble statistics without storing trajectories.
EnsembleResult simulate_ensemble(const NoiseModel& model, const BarrierSpec& barrier,
                                 const CorrelationForm& corr, const InitialState& state,
                                 const TimeGrid& grid, std::size_t n_traj, std::uint64_t seed,
                                 const SimulateOptions& options = {});

struct EmpiricalKappa {
    std::vector<double> grid;
    std::vector<double> kappa_hat;
    std::vector<double> se;
    std::size_t n_traj = 0;
    std::uint64_t seed = 0;
};

/// Flux-weighted transmission estimator: antithetic pairs (+|v0|, -|v0|) with |v0|
/// drawn from the flux-weighted Maxwell density at the barrier top and a shared noise
/// path per pair; kappa_hat(t) = <1[x_+ > 0] - 1[x_- > 0]> over pairs, which is
/// exactly 1 in the noiseless limit.
EmpiricalKappa empirical_kappa(const NoiseModel& model, const BarrierSpec& barrier,
                               const CorrelationForm& corr, const TimeGrid& grid,
                               std::size_t n_traj, std::uint64_t seed,
                               const SimulateOptions& options = {});

} // namespace glekin
