#include "glekin/resolvent.hpp"

#include <cmath>
#include <sstream>

#include "glekin/errors.hpp"

namespace glekin {

namespace {
using cplx = std::complex<double>;
} // namespace

BarrierSpec make_barrier(double omega_b, double x_b) {
    if (!(omega_b > 0.0) || !std::isfinite(omega_b))
        throw ValidationError("omega_b must be positive (got " + std::to_string(omega_b) + ")");
    return BarrierSpec{omega_b, x_b};
}

ResolventRational characteristic_polynomial(const NoiseModel& model, const BarrierSpec& barrier) {
    const double w2 = barrier.omega_b * barrier.omega_b;
    const double G = model.gamma_big, O2 = model.omega2, eta = model.eta;

    if (model.kind == NoiseKind::Ohmic) {
        ResolventRational r;
        r.numerator = Polynomial({1.0});
        r.characteristic = Polynomial({-w2, model.gamma_ohmic, 1.0});
        return r;
    }

    // D(s) is the kernel denominator, including the Gamma factor where the kernel
    // carries it, so that Hhat = D / Q has polynomial numerator and denominator.
    Polynomial D, kernel_num; // beta_hat = kernel_num / D
    switch (model.kind) {
        case NoiseKind::HN:
            D = Polynomial({G * O2, G * G, G});
            kernel_num = Polynomial({eta * O2 * G, eta * O2});
            break;
        case NoiseKind::HVN:
            D = Polynomial({O2, G, 1.0});
            kernel_num = Polynomial({0.0, eta * G});
            break;
        case NoiseKind::HAN:
            D = Polynomial({G * O2, G * G, G});
            kernel_num = Polynomial({0.0, eta * O2, eta * G});
            break;
        default: break;
    }

    ResolventRational r;
    r.numerator = D;
    // Q = (s^2 - wb^2) D + s * kernel_num
    r.characteristic = Polynomial({-w2, 0.0, 1.0}) * D + Polynomial({0.0, 1.0}) * kernel_num;
    return r;
}

std::complex<double> expm1_over(std::complex<double> a, double t) {
    const cplx z = a * t;
    if (std::abs(z) < 1e-5) {
        return t * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    }
    return (std::exp(z) - 1.0) / a;
}

SpectralDecomposition residues(const Polynomial& numerator, const Polynomial& characteristic,
                               const std::vector<std::complex<double>>& poles,
                               const NoiseModel& model, const BarrierSpec& barrier) {
    SpectralDecomposition d;
    d.poles = poles;
    d.model = model;
    d.barrier = barrier;
    d.residues.reserve(poles.size());

    const Polynomial dq = characteristic.derivative();
    for (const auto& s : poles) {
        const cplx qp = dq.eval(s);
        if (std::abs(qp) < 1e-12 * dq.magnitude_scale(s))
            throw NumericalError("confluent poles unsupported");
        d.residues.push_back(numerator.eval(s) / qp);
    }

    // Conjugate poles get exactly conjugate residues (real coefficients).
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (poles[i].imag() <= 0.0) continue;
        for (std::size_t j = 0; j < poles.size(); ++j) {
            if (poles[j] == std::conj(poles[i])) {
                const cplx avg = (d.residues[i] + std::conj(d.residues[j])) / 2.0;
                d.residues[i] = avg;
                d.residues[j] = std::conj(avg);
            }
        }
    }

    // Sum rules from Hhat(s) ~ 1/s^2: H(0) = 0 and H'(0) = 1.
    cplx sum_r = 0.0, sum_rs = 0.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        sum_r += d.residues[i];
        sum_rs += d.residues[i] * poles[i];
    }
    if (std::abs(sum_r) > 1e-10 || std::abs(sum_rs - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "residues: sum rules violated (sum r = " << sum_r << ", sum r s = " << sum_rs << ")";
        throw NumericalError(os.str());
    }

    d.unstable_count = 0;
    d.dominant_index = 0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (poles[i].real() > 0.0) ++d.unstable_count;
        if (poles[i].real() > poles[static_cast<size_t>(d.dominant_index)].real()) d.dominant_index = static_cast<int>(i);
    }
    return d;
}

SpectralDecomposition spectral_decomposition(const NoiseModel& model, const BarrierSpec& barrier) {
    const auto rational = characteristic_polynomial(model, barrier);
    const auto poles = find_poles(rational.characteristic);
    return residues(rational.numerator, rational.characteristic, poles, model, barrier);
}

double SpectralDecomposition::response(double t) const {
    if (t < 0.0) throw ValidationError("response: t must be >= 0");
    if (t == 0.0) return 0.0; // sum rule H(0) = 0, exact by construction
    cplx acc = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const cplx term = residues[i] * std::exp(poles[i] * t);
        acc += term;
        scale += std::abs(term);
    }
    if (std::abs(acc.imag()) > 1e-9 * scale && scale > 0.0)
        throw NumericalError("response: imaginary residual above tolerance");
    return acc.real();
}

double SpectralDecomposition::response_integral(double t) const {
    if (t < 0.0) throw ValidationError("response_integral: t must be >= 0");
    if (t == 0.0) return 0.0;
    cplx acc = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const cplx term = residues[i] * expm1_over(poles[i], t);
        acc += term;
        scale += std::abs(term);
    }
    if (std::abs(acc.imag()) > 1e-9 * scale && scale > 0.0)
        throw NumericalError("response_integral: imaginary residual above tolerance");
    return acc.real();
}

} // namespace glekin
