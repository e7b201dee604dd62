#pragma once

#include <optional>
#include <vector>

#include "glekin/moments.hpp"

namespace glekin {

/// erfc with saturation: arguments beyond +-8 return exactly 0 / 2.
double erfc_saturating(double z);

/// P(x > 0) for a Gaussian with the given mean and standard deviation:
/// 1/2 erfc(-mean / (sqrt(2) sigma)). sigma = 0 uses the limit convention
/// {mean > 0 -> 1, mean < 0 -> 0, mean = 0 -> 1/2}.
double passing_probability(double mean, double sigma);

/// kappa(t) = [1 + m sigma_x^2(t) / (kT H(t)^2)]^(-1/2).
/// At zeros of H the limiting value 0 is returned and *at_response_zero (if given)
/// is set; t = 0 returns the limiting value 1.
double transmission(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                    const NoiseModel& model, double t,
                    VarianceRegion region = VarianceRegion::Symmetric,
                    bool* at_response_zero = nullptr);

/// k(t)/k_TST by direct flux quadrature over the Maxwell distribution at the barrier
/// top: (m/kT) int v0 exp(-m v0^2 / 2 kT) chi(x0 = x_b, v0; t) dv0.
/// Agrees with transmission() to quadrature tolerance.
double rate_ratio_by_flux(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                          const NoiseModel& model, const BarrierSpec& barrier, double t,
                          VarianceRegion region = VarianceRegion::Symmetric);

struct TstNormalization {
    double partition_Q = 1.0;
    double planck_h = 1.0;
    double barrier_height_VB = 0.0;
    double kT = 1.0;
};

/// k_TST = kT / (Q h) * exp(-V_B / kT).
double tst_rate(const TstNormalization& norm);

/// Aligned kinetics samples. rate_ratio is filled only when requested (flux
/// quadrature per sample); response_zero_flags marks samples where H(t) = 0 and
/// kappa was set to its limiting value 0.
struct KineticsCurves {
    std::vector<double> grid;
    std::vector<double> chi;
    std::vector<double> kappa;
    std::vector<double> rate_ratio;
    std::optional<double> absolute_rate_scale; // k_TST when a normalization was given
    std::vector<std::size_t> response_zero_flags;
};

struct KineticsOptions {
    VarianceRegion region = VarianceRegion::Symmetric;
    bool with_flux_rate = false;
    std::optional<TstNormalization> tst;
};

KineticsCurves kinetics_curves(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                               const NoiseModel& model, const BarrierSpec& barrier,
                               const InitialState& state, const std::vector<double>& grid,
                               const KineticsOptions& options = {});

/// Mean of y over the trailing `fraction` of the grid (the "late window").
double late_window_mean(const std::vector<double>& grid, const std::vector<double>& y,
                        double fraction = 0.5);

/// Sign changes of (y - offset) between consecutive samples with t in [t_lo, t_hi].
int sign_change_count(const std::vector<double>& grid, const std::vector<double>& y,
                      double offset, double t_lo, double t_hi);

} // namespace glekin
