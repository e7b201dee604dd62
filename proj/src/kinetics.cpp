#include "glekin/kinetics.hpp"

#include <algorithm>
#include <cmath>

#include "glekin/errors.hpp"
#include "glekin/quadrature.hpp"

namespace glekin {

double erfc_saturating(double z) {
    if (z > 8.0) return 0.0;
    if (z < -8.0) return 2.0;
    return std::erfc(z);
}

double passing_probability(double mean, double sigma) {
    if (sigma < 0.0 || !std::isfinite(sigma)) throw ValidationError("passing_probability: sigma must be >= 0");
    if (sigma == 0.0) {
        if (mean > 0.0) return 1.0;
        if (mean < 0.0) return 0.0;
        return 0.5;
    }
    return 0.5 * erfc_saturating(-mean / (std::sqrt(2.0) * sigma));
}

double transmission(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                    const NoiseModel& model, double t, VarianceRegion region,
                    bool* at_response_zero) {
    if (t < 0.0) throw ValidationError("transmission: t must be >= 0");
    if (at_response_zero) *at_response_zero = false;
    if (t == 0.0) return 1.0; // t -> 0+ limit

    const double h = decomp.response(t);
    double h_scale = 0.0;
    for (std::size_t i = 0; i < decomp.poles.size(); ++i)
        h_scale += std::abs(decomp.residues[i] * std::exp(decomp.poles[i] * t));
    if (std::abs(h) < 1e-12 * h_scale) {
        // kappa -> 0 continuously as H crosses zero; mark the sample.
        if (at_response_zero) *at_response_zero = true;
        return 0.0;
    }
    const double var = variance_closed(decomp, corr, t, region);
    return 1.0 / std::sqrt(1.0 + model.mass * std::max(var, 0.0) / (model.kT * h * h));
}

double rate_ratio_by_flux(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                          const NoiseModel& model, const BarrierSpec& barrier, double t,
                          VarianceRegion region) {
    if (t <= 0.0) throw ValidationError("rate_ratio_by_flux: t must be > 0");
    const double h = decomp.response(t);
    const double var = variance_closed(decomp, corr, t, region);
    const double sigma = std::sqrt(std::max(var, 0.0));
    const double hint = decomp.response_integral(t);
    const double w2 = barrier.omega_b * barrier.omega_b;
    const double xb_part = (1.0 + w2 * hint) * barrier.x_b;

    // u = v0 sqrt(m/kT); integrand u e^{-u^2/2} chi(x_b, v0; t), tails beyond |u|=10
    // are below 1e-20.
    auto integrand = [&](double u) {
        const double v0 = u * std::sqrt(model.kT / model.mass);
        const double mean = xb_part + h * v0;
        return u * std::exp(-0.5 * u * u) * passing_probability(mean, sigma);
    };
    return integrate_adaptive(integrand, -10.0, 10.0, 1e-10, 1e-9);
}

double tst_rate(const TstNormalization& norm) {
    if (!(norm.partition_Q > 0.0) || !(norm.planck_h > 0.0) || !(norm.kT > 0.0) ||
        !(norm.barrier_height_VB >= 0.0))
        throw ValidationError("tst_rate: Q, h, kT must be positive and V_B non-negative");
    return norm.kT / (norm.partition_Q * norm.planck_h) * std::exp(-norm.barrier_height_VB / norm.kT);
}

KineticsCurves kinetics_curves(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                               const NoiseModel& model, const BarrierSpec& barrier,
                               const InitialState& state, const std::vector<double>& grid,
                               const KineticsOptions& options) {
    KineticsCurves out;
    out.grid = grid;
    out.chi.reserve(grid.size());
    out.kappa.reserve(grid.size());
    if (options.with_flux_rate) out.rate_ratio.reserve(grid.size());
    if (options.tst) out.absolute_rate_scale = tst_rate(*options.tst);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double mean = mean_position(decomp, state, barrier, t);
        const double var = variance_closed(decomp, corr, t, options.region);
        out.chi.push_back(passing_probability(mean, std::sqrt(std::max(var, 0.0))));
        bool flagged = false;
        out.kappa.push_back(transmission(decomp, corr, model, t, options.region, &flagged));
        if (flagged) out.response_zero_flags.push_back(i);
        if (options.with_flux_rate)
            out.rate_ratio.push_back(t > 0.0
                                         ? rate_ratio_by_flux(decomp, corr, model, barrier, t, options.region)
                                         : 1.0);
    }
    return out;
}

double late_window_mean(const std::vector<double>& grid, const std::vector<double>& y,
                        double fraction) {
    if (grid.empty() || grid.size() != y.size())
        throw ValidationError("late_window_mean: empty or mismatched curve");
    const double t_end = grid.back();
    const double t_lo = t_end * (1.0 - fraction);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] >= t_lo) {
            sum += y[i];
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

int sign_change_count(const std::vector<double>& grid, const std::vector<double>& y,
                      double offset, double t_lo, double t_hi) {
    if (grid.size() != y.size()) throw ValidationError("sign_change_count: mismatched curve");
    int count = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i - 1] < t_lo || grid[i] > t_hi) continue;
        if ((y[i - 1] - offset) * (y[i] - offset) < 0.0) ++count;
    }
    return count;
}

} // namespace glekin
