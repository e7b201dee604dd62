#include "glekin/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "glekin/errors.hpp"
#include "glekin/rng.hpp"

namespace glekin {

namespace {

constexpr std::size_t kChunk = 64; // fixed chunk size keeps reductions worker-count independent

int resolve_workers(int requested, std::size_t n_chunks) {
    int w = requested;
    if (w <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        w = hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
    }
    return std::max(1, std::min<int>(w, static_cast<int>(std::max<std::size_t>(n_chunks, 1))));
}

/// Runs fn(chunk_index, begin, end) over items split into fixed-size chunks.
/// Chunks are claimed dynamically; per-chunk work must write only chunk-local state.
void run_chunked(std::size_t n_items, int workers,
                 const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    const std::size_t n_chunks = (n_items + kChunk - 1) / kChunk;
    const int w = resolve_workers(workers, n_chunks);
    if (w == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c, c * kChunk, std::min(n_items, (c + 1) * kChunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            fn(c, c * kChunk, std::min(n_items, (c + 1) * kChunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) pool.emplace_back(body);
    for (auto& th : pool) th.join();
}

struct MomentAccumulator {
    std::vector<double> sum, sum_sq;
    std::vector<std::size_t> above;
    explicit MomentAccumulator(std::size_t n) : sum(n, 0.0), sum_sq(n, 0.0), above(n, 0) {}
    void add(const std::vector<double>& x) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum[i] += x[i];
            sum_sq[i] += x[i] * x[i];
            if (x[i] > 0.0) ++above[i]; // strict: samples exactly at 0 count as not passed
        }
    }
    void merge(const MomentAccumulator& other) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += other.sum[i];
            sum_sq[i] += other.sum_sq[i];
            above[i] += other.above[i];
        }
    }
};

EnsembleResult finalize_moments(const TimeGrid& grid, const MomentAccumulator& acc,
                                std::size_t n_traj, std::uint64_t seed) {
    const auto n = grid.size();
    const double N = static_cast<double>(n_traj);
    EnsembleResult res;
    res.grid = grid.times();
    res.n_traj = n_traj;
    res.seed = seed;
    res.mean_hat.resize(n);
    res.var_hat.resize(n);
    res.chi_hat.resize(n);
    res.se_mean.resize(n);
    res.se_var.resize(n);
    res.se_chi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mean = acc.sum[i] / N;
        double var = 0.0;
        if (n_traj >= 2) var = std::max(0.0, (acc.sum_sq[i] - N * mean * mean) / (N - 1.0));
        const double p = static_cast<double>(acc.above[i]) / N;
        res.mean_hat[i] = mean;
        res.var_hat[i] = var;
        res.chi_hat[i] = p;
        res.se_mean[i] = n_traj >= 2 ? std::sqrt(var / N) : 0.0;
        res.se_var[i] = n_traj >= 2 ? var * std::sqrt(2.0 / (N - 1.0)) : 0.0;
        res.se_chi[i] = std::sqrt(p * (1.0 - p) / N);
    }
    return res;
}

} // namespace

std::size_t TimeGrid::size() const {
    return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> t(size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = time(i);
    return t;
}

TimeGrid make_time_grid(double t_max, double dt) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
    if (dt > t_max) throw ValidationError("dt must not exceed t_max");
    TimeGrid g{t_max, dt};
    if (g.size() < 2) throw ValidationError("time grid needs at least 2 samples");
    return g;
}

NoiseSampler::NoiseSampler(const CorrelationForm& corr, const TimeGrid& grid) : grid_(grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (corr.zero()) {
        zero_ = true;
        return;
    }

    std::vector<double> smooth_by_lag(grid.size());
    for (std::size_t l = 0; l < grid.size(); ++l) smooth_by_lag[l] = corr.smooth(grid.time(l));

    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            cov(i, j) = cov(j, i) = smooth_by_lag[static_cast<std::size_t>(i - j)];
    const double diag_boost = corr.delta_weight / grid.dt;
    for (Eigen::Index i = 0; i < n; ++i) cov(i, i) += diag_boost;

    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        const double jitter = 1e-10 * cov.diagonal().maxCoeff();
        Eigen::MatrixXd cov_j = cov;
        cov_j.diagonal().array() += jitter;
        llt.compute(cov_j);
        if (llt.info() != Eigen::Success) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
            std::ostringstream os;
            os << "noise covariance is not positive semidefinite beyond the jitter budget; "
                  "most negative eigenvalue = "
               << es.eigenvalues().minCoeff()
               << " (signals a convention/parameter inconsistency)";
            throw NumericalError(os.str());
        }
    }
    chol_ = llt.matrixL();
}

void NoiseSampler::sample_path(std::uint64_t master_seed, std::uint64_t index,
                               std::span<double> out) const {
    NormalStream stream = NormalStream::substream(master_seed, index);
    sample_path(stream, out);
}

void NoiseSampler::sample_path(NormalStream& stream, std::span<double> out) const {
    if (out.size() != grid_.size()) throw ValidationError("sample_path: output size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    if (zero_) return;
    const auto n = static_cast<Eigen::Index>(grid_.size());
    for (Eigen::Index k = 0; k < n; ++k) {
        const double zk = stream.normal();
        for (Eigen::Index i = k; i < n; ++i) out[static_cast<std::size_t>(i)] += chol_(i, k) * zk;
    }
}

std::vector<std::vector<double>> sample_noise_paths(const CorrelationForm& corr, const TimeGrid& grid,
                                                    std::size_t n_traj, std::uint64_t seed) {
    if (n_traj < 1) throw ValidationError("sample_noise_paths: n_traj must be >= 1");
    NoiseSampler sampler(corr, grid);
    std::vector<std::vector<double>> paths(n_traj, std::vector<double>(grid.size()));
    for (std::size_t i = 0; i < n_traj; ++i) sampler.sample_path(seed, i, paths[i]);
    return paths;
}

Trajectory integrate_gle(const NoiseModel& model, const BarrierSpec& barrier,
                         const CorrelationForm& corr, std::span<const double> noise_path,
                         const InitialState& state, const TimeGrid& grid,
                         const IntegrateOptions& options) {
    const std::size_t n = grid.size();
    if (noise_path.size() != n) throw ValidationError("integrate_gle: noise path length must match grid");

    const double dt = grid.dt;
    const double m = model.mass;
    const double mkT = model.mass * model.kT;
    const double w2 = (options.stable_well ? -1.0 : 1.0) * barrier.omega_b * barrier.omega_b;

    // Friction kernel per unit mass: beta(tau) = C(tau) / (m kT); the delta part acts
    // as the instantaneous coefficient c_inf = d0 / (2 m kT), mirroring the trapezoid
    // endpoint half-weight.
    std::vector<double> beta(n);
    for (std::size_t j = 0; j < n; ++j) beta[j] = corr.smooth(grid.time(j)) / mkT;
    const double cinf = corr.delta_weight / (2.0 * mkT);
    const double half_b0 = 0.5 * dt * beta[0];

    Trajectory traj;
    traj.x.assign(n, 0.0);
    traj.v.assign(n, 0.0);
    traj.x[0] = state.x0;
    traj.v[0] = state.v0;

    auto& x = traj.x;
    auto& v = traj.v;

    double memory = 0.0; // trapezoid over history excluding the current endpoint
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double end_w = j > 0 ? half_b0 : 0.0;
        const double a_j = -(memory + end_w * v[j]) - cinf * v[j] + w2 * x[j] + noise_path[j] / m;

        x[j + 1] = x[j] + v[j] * dt + 0.5 * a_j * dt * dt;
        const double v_star = v[j] + a_j * dt;

        double mem_next = 0.5 * beta[j + 1] * v[0];
        for (std::size_t l = 1; l <= j; ++l) mem_next += beta[j + 1 - l] * v[l];
        mem_next *= dt;

        const double a_star =
            -(mem_next + half_b0 * v_star) - cinf * v_star + w2 * x[j + 1] + noise_path[j + 1] / m;
        v[j + 1] = v[j] + 0.5 * (a_j + a_star) * dt;
        memory = mem_next;
    }
    return traj;
}

EnsembleResult ensemble_stats(const std::vector<Trajectory>& trajectories, const TimeGrid& grid) {
    if (trajectories.size() < 2) throw ValidationError("ensemble_stats: need n_traj >= 2");
    MomentAccumulator acc(grid.size());
    for (const auto& tr : trajectories) {
        if (tr.x.size() != grid.size()) throw ValidationError("ensemble_stats: trajectory/grid mismatch");
        acc.add(tr.x);
    }
    return finalize_moments(grid, acc, trajectories.size(), 0);
}

EnsembleResult simulate_ensemble(const NoiseModel& model, const BarrierSpec& barrier,
                                 const CorrelationForm& corr, const InitialState& state,
                                 const TimeGrid& grid, std::size_t n_traj, std::uint64_t seed,
                                 const SimulateOptions& options) {
    if (n_traj < 2) throw ValidationError("simulate_ensemble: n_traj must be >= 2");
    NoiseSampler sampler(corr, grid);

    const std::size_t n_chunks = (n_traj + kChunk - 1) / kChunk;
    std::vector<MomentAccumulator> parts(n_chunks, MomentAccumulator(grid.size()));
    run_chunked(n_traj, options.workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
        std::vector<double> path(grid.size());
        for (std::size_t i = begin; i < end; ++i) {
            sampler.sample_path(seed, i, path);
            const Trajectory tr = integrate_gle(model, barrier, corr, path, state, grid, options.integrate);
            parts[c].add(tr.x);
        }
    });

    MomentAccumulator total(grid.size());
    for (const auto& part : parts) total.merge(part); // fixed chunk order
    return finalize_moments(grid, total, n_traj, seed);
}

EmpiricalKappa empirical_kappa(const NoiseModel& model, const BarrierSpec& barrier,
                               const CorrelationForm& corr, const TimeGrid& grid,
                               std::size_t n_traj, std::uint64_t seed,
                               const SimulateOptions& options) {
    if (n_traj < 100) throw ValidationError("empirical_kappa: n_traj must be >= 100");
    const std::size_t n_pairs = (n_traj + 1) / 2;
    NoiseSampler sampler(corr, grid);
    const std::size_t n = grid.size();

    struct PairAccumulator {
        std::vector<double> sum, sum_sq;
        explicit PairAccumulator(std::size_t m) : sum(m, 0.0), sum_sq(m, 0.0) {}
    };
    const std::size_t n_chunks = (n_pairs + kChunk - 1) / kChunk;
    std::vector<PairAccumulator> parts(n_chunks, PairAccumulator(n));

    run_chunked(n_pairs, options.workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
        std::vector<double> path(n);
        for (std::size_t p = begin; p < end; ++p) {
            // One stream per pair: |v0| first, then the shared noise path.
            // Flux-weighted Maxwell density p(|v|) ~ v exp(-m v^2 / 2 kT) inverted
            // through its CDF.
            NormalStream stream = NormalStream::substream(seed, p);
            const double u = stream.uniform();
            const double vmag = std::sqrt(-2.0 * model.kT / model.mass * std::log(u));
            sampler.sample_path(stream, path);
            const InitialState plus{barrier.x_b, vmag};
            const InitialState minus{barrier.x_b, -vmag};
            const Trajectory tp = integrate_gle(model, barrier, corr, path, plus, grid, options.integrate);
            const Trajectory tm = integrate_gle(model, barrier, corr, path, minus, grid, options.integrate);
            for (std::size_t i = 0; i < n; ++i) {
                const double y = (tp.x[i] > 0.0 ? 1.0 : 0.0) - (tm.x[i] > 0.0 ? 1.0 : 0.0);
                parts[c].sum[i] += y;
                parts[c].sum_sq[i] += y * y;
            }
        }
    });

    EmpiricalKappa out;
    out.grid = grid.times();
    out.kappa_hat.assign(n, 0.0);
    out.se.assign(n, 0.0);
    out.n_traj = 2 * n_pairs;
    out.seed = seed;
    const double P = static_cast<double>(n_pairs);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& part : parts) {
            sum += part.sum[i];
            sum_sq += part.sum_sq[i];
        }
        const double mean = sum / P;
        out.kappa_hat[i] = mean;
        if (n_pairs >= 2) {
            const double var = std::max(0.0, (sum_sq - P * mean * mean) / (P - 1.0));
            out.se[i] = std::sqrt(var / P);
        }
    }
    return out;
}

} // namespace glekin
