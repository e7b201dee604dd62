#pragma once

#include <complex>
#include <vector>

#include "glekin/model.hpp"
#include "glekin/polynomial.hpp"

namespace glekin {

/// Parabolic barrier U(x) = -1/2 m omega_b^2 x^2 with its top at x_b.
struct BarrierSpec {
    double omega_b = 0.0;
    double x_b = 0.0; // fixed 0 in this artifact
};

BarrierSpec make_barrier(double omega_b, double x_b = 0.0);

/// Hhat(s) = numerator(s) / characteristic(s), the kernel denominator cleared:
/// characteristic Q(s) = (s^2 + s beta_hat(s) - omega_b^2) * D(s), numerator N(s) = D(s).
struct ResolventRational {
    Polynomial numerator;      // N, degree 2 (HN/HVN/HAN) or 0 (Ohmic)
    Polynomial characteristic; // Q, degree 4 (HN/HVN/HAN) or 2 (Ohmic)
};

ResolventRational characteristic_polynomial(const NoiseModel& model, const BarrierSpec& barrier);

/// (exp(a t) - 1) / a with a series fallback near a = 0.
std::complex<double> expm1_over(std::complex<double> a, double t);

/// Pole/residue representation of the response function H(t) = sum_i r_i exp(s_i t).
/// Simple poles only; complex poles in conjugate pairs with conjugate residues;
/// sum r_i = 0 and sum r_i s_i = 1 (checked at construction, 1e-10 absolute).
struct SpectralDecomposition {
    std::vector<std::complex<double>> poles;
    std::vector<std::complex<double>> residues;
    NoiseModel model;
    BarrierSpec barrier;
    int unstable_count = 0; // poles with Re > 0; exactly 1 for barrier systems
    int dominant_index = 0; // largest real part

    std::complex<double> dominant_pole() const { return poles[static_cast<size_t>(dominant_index)]; }

    /// H(t) for t >= 0; the imaginary residual of the pole sum must stay below
    /// 1e-9 of its magnitude scale.
    double response(double t) const;

    /// int_0^t H(t') dt' = sum_i r_i (exp(s_i t) - 1) / s_i.
    double response_integral(double t) const;
};

/// r_i = N(s_i) / Q'(s_i) over the given simple poles.
/// Throws NumericalError when |Q'(s_i)| indicates a confluent pole or when the
/// sum-rule invariants fail.
SpectralDecomposition residues(const Polynomial& numerator, const Polynomial& characteristic,
                               const std::vector<std::complex<double>>& poles,
                               const NoiseModel& model, const BarrierSpec& barrier);

/// characteristic_polynomial -> find_poles -> residues in one call.
SpectralDecomposition spectral_decomposition(const NoiseModel& model, const BarrierSpec& barrier);

} // namespace glekin
