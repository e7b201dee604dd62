#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace glekin {

enum class NoiseKind { HN, HVN, HAN, Ohmic };

const char* to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// One of the three structured internal noises (or the white-noise baseline),
/// together with the characteristic roots mu1, mu2 of mu^2 + Gamma mu + Omega^2 = 0.
/// Immutable after construction.
struct NoiseModel {
    NoiseKind kind = NoiseKind::HN;
    double gamma_big = 0.0;   // damping parameter Gamma (1/time)
    double omega2 = 0.0;      // frequency parameter Omega^2 (1/time^2)
    double eta = 0.0;         // white-noise intensity
    double mass = 0.0;
    double kT = 0.0;          // thermal energy
    double gamma_ohmic = 0.0; // Ohmic friction strength, used only for kind == Ohmic

    std::complex<double> mu1{}, mu2{}; // Re < 0 always (Gamma, Omega^2 > 0)
};

/// Validates parameters and computes the characteristic roots.
/// eta = 0 is allowed (noiseless limit); everything else must be strictly positive,
/// except gamma_ohmic which may be 0 for the frictionless Ohmic case.
NoiseModel make_noise_model(NoiseKind kind, double gamma_big, double omega2, double eta,
                            double mass, double kT, double gamma_ohmic = 0.0);

/// Laplace transform of the friction kernel, beta_hat(s).
/// HN:  eta Omega^2 (s + Gamma) / (Gamma (s^2 + s Gamma + Omega^2))
/// HVN: s eta Gamma / (s^2 + s Gamma + Omega^2)
/// HAN: s eta (s Gamma + Omega^2) / (Gamma (s^2 + s Gamma + Omega^2))
/// Ohmic: gamma (constant).
/// Throws ValidationError when s is a pole of the kernel.
std::complex<double> kernel_laplace(const NoiseModel& model, std::complex<double> s);

/// High-frequency limit beta_hat(s -> inf): eta for HAN, gamma for Ohmic, 0 otherwise.
/// This is the white (delta) component of the kernel.
double kernel_high_freq_limit(const NoiseModel& model);

/// Which exponential-sum form of the noise autocovariance to use.
/// FdtKernel derives <xi xi> from the Laplace kernel via the fluctuation-dissipation
/// relation and is the convention validated by the simulation oracle. LiteralEq2 keeps
/// the textbook HN/HVN/HAN covariance normalization for comparison runs only; it is
/// inconsistent with the kernel by kind-dependent factors.
enum class CorrelationConvention { FdtKernel, LiteralEq2 };

const char* to_string(CorrelationConvention c);

/// Stationary autocovariance C(tau) = sum_k c_k exp(mu_k |tau|) + d0 delta(tau).
/// The c_k come in conjugate pairs, so the smooth part is real; Re mu_k < 0.
struct CorrelationForm {
    std::vector<std::pair<std::complex<double>, std::complex<double>>> terms; // (c_k, mu_k)
    double delta_weight = 0.0; // d0 >= 0; nonzero only for HAN and Ohmic

    /// Smooth part at lag tau (even in tau).
    double smooth(double tau) const;
    bool zero() const { return terms.empty() && delta_weight == 0.0; }
};

/// Exponential-sum autocovariance of the noise for the given convention.
/// FdtKernel: partial fractions of m kT beta_hat(s), symmetrized in |tau|, with
/// d0 = 2 m kT * kernel_high_freq_limit(model).
/// Throws NumericalError for degenerate roots (Gamma^2 == 4 Omega^2 within tolerance).
CorrelationForm correlation_form(const NoiseModel& model,
                                 CorrelationConvention convention = CorrelationConvention::FdtKernel);

} // namespace glekin
