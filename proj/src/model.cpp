#include "glekin/model.hpp"

#include <cmath>
#include <sstream>

#include "glekin/errors.hpp"

namespace glekin {

namespace {

using cplx = std::complex<double>;

void require_positive(double value, const char* name, bool allow_zero = false) {
    const bool ok = allow_zero ? value >= 0.0 : value > 0.0;
    if (!std::isfinite(value) || !ok) {
        std::ostringstream os;
        os << name << " must be " << (allow_zero ? "non-negative" : "positive") << " (got " << value << ")";
        throw ValidationError(os.str());
    }
}

/// beta_hat(s) = n(s) / d(s) with d monic: d(s) = s^2 + Gamma s + Omega^2.
cplx kernel_numerator_over_monic(const NoiseModel& m, cplx s) {
    switch (m.kind) {
        case NoiseKind::HN:
            return m.eta * m.omega2 * (s + m.gamma_big) / m.gamma_big;
        case NoiseKind::HVN:
            return m.eta * m.gamma_big * s;
        case NoiseKind::HAN:
            return m.eta * s * (s * m.gamma_big + m.omega2) / m.gamma_big;
        case NoiseKind::Ohmic:
            break;
    }
    return 0.0;
}

void check_nondegenerate_roots(const NoiseModel& m) {
    const double sep = std::abs(m.mu1 - m.mu2);
    if (sep < 1e-8 * std::abs(m.mu1 + m.mu2)) {
        std::ostringstream os;
        os << "degenerate characteristic roots (Gamma^2 == 4 Omega^2): mu1 = mu2 = " << m.mu1
           << "; perturb Gamma or Omega^2 away from the double-root locus";
        throw NumericalError(os.str());
    }
}

} // namespace

const char* to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::HN: return "hn";
        case NoiseKind::HVN: return "hvn";
        case NoiseKind::HAN: return "han";
        case NoiseKind::Ohmic: return "ohmic";
    }
    return "?";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "hn" || name == "HN") return NoiseKind::HN;
    if (name == "hvn" || name == "HVN") return NoiseKind::HVN;
    if (name == "han" || name == "HAN") return NoiseKind::HAN;
    if (name == "ohmic" || name == "Ohmic" || name == "OHMIC") return NoiseKind::Ohmic;
    throw ValidationError("unknown noise kind '" + name + "' (expected hn, hvn, han or ohmic)");
}

const char* to_string(CorrelationConvention c) {
    return c == CorrelationConvention::FdtKernel ? "fdt-kernel" : "literal-eq2";
}

NoiseModel make_noise_model(NoiseKind kind, double gamma_big, double omega2, double eta,
                            double mass, double kT, double gamma_ohmic) {
    require_positive(gamma_big, "gamma_big");
    require_positive(omega2, "omega2");
    require_positive(eta, "eta", /*allow_zero=*/true);
    require_positive(mass, "mass");
    require_positive(kT, "kT");
    if (kind == NoiseKind::Ohmic) require_positive(gamma_ohmic, "gamma_ohmic", /*allow_zero=*/true);

    NoiseModel m;
    m.kind = kind;
    m.gamma_big = gamma_big;
    m.omega2 = omega2;
    m.eta = eta;
    m.mass = mass;
    m.kT = kT;
    m.gamma_ohmic = kind == NoiseKind::Ohmic ? gamma_ohmic : 0.0;

    // mu^2 + Gamma mu + Omega^2 = 0
    const cplx disc = cplx(gamma_big * gamma_big - 4.0 * omega2, 0.0);
    const cplx root = std::sqrt(disc);
    m.mu1 = (-gamma_big + root) / 2.0;
    m.mu2 = (-gamma_big - root) / 2.0;
    return m;
}

std::complex<double> kernel_laplace(const NoiseModel& model, std::complex<double> s) {
    if (model.kind == NoiseKind::Ohmic) return model.gamma_ohmic;
    // Real-coefficient form (not the factored roots): keeps the evaluation
    // complex-step differentiable.
    const cplx d = s * s + model.gamma_big * s + model.omega2;
    const double scale = std::norm(s) + model.gamma_big * std::abs(s) + model.omega2;
    if (std::abs(d) < 1e-12 * scale) {
        std::ostringstream os;
        os << "kernel_laplace evaluated at a kernel pole, s = " << s;
        throw ValidationError(os.str());
    }
    return kernel_numerator_over_monic(model, s) / d;
}

double kernel_high_freq_limit(const NoiseModel& model) {
    switch (model.kind) {
        case NoiseKind::HAN: return model.eta;
        case NoiseKind::Ohmic: return model.gamma_ohmic;
        default: return 0.0;
    }
}

double CorrelationForm::smooth(double tau) const {
    std::complex<double> acc = 0.0;
    const double a = std::abs(tau);
    for (const auto& [c, mu] : terms) acc += c * std::exp(mu * a);
    return acc.real();
}

CorrelationForm correlation_form(const NoiseModel& model, CorrelationConvention convention) {
    CorrelationForm corr;
    const double mkT = model.mass * model.kT;

    if (model.kind == NoiseKind::Ohmic) {
        // beta(tau) = 2 gamma delta(tau); nothing smooth. Both conventions coincide.
        corr.delta_weight = 2.0 * mkT * model.gamma_ohmic;
        return corr;
    }

    check_nondegenerate_roots(model);
    const cplx mu1 = model.mu1, mu2 = model.mu2;

    if (convention == CorrelationConvention::FdtKernel) {
        // C(tau) = m kT beta(|tau|): partial fractions of the proper part of beta_hat,
        // delta weight 2 m kT c_inf (the one-sided transform counts half of the delta).
        const double cinf = kernel_high_freq_limit(model);
        auto proper = [&](cplx s) {
            return kernel_numerator_over_monic(model, s) - cinf * (s - mu1) * (s - mu2);
        };
        corr.terms.emplace_back(mkT * proper(mu1) / (mu1 - mu2), mu1);
        corr.terms.emplace_back(mkT * proper(mu2) / (mu2 - mu1), mu2);
        corr.delta_weight = 2.0 * mkT * cinf;
    } else {
        // Literal textbook forms; retained for comparison runs only.
        const cplx pref = model.eta / (mu1 * mu1 - mu2 * mu2);
        const cplx hn1 = pref / mu1, hn2 = -pref / mu2;
        const cplx hvn1 = -pref * mu1, hvn2 = pref * mu2;
        switch (model.kind) {
            case NoiseKind::HN:
                corr.terms.emplace_back(hn1, mu1);
                corr.terms.emplace_back(hn2, mu2);
                break;
            case NoiseKind::HVN:
                corr.terms.emplace_back(hvn1, mu1);
                corr.terms.emplace_back(hvn2, mu2);
                break;
            case NoiseKind::HAN: {
                const double fac = 1.0 - 2.0 * model.omega2 / (model.gamma_big * model.gamma_big);
                corr.terms.emplace_back(-hn1 - fac * hvn1, mu1);
                corr.terms.emplace_back(-hn2 - fac * hvn2, mu2);
                corr.delta_weight = model.eta;
                break;
            }
            default: break;
        }
    }

    // Drop identically-zero terms (eta = 0) so zero() reflects the noiseless limit.
    if (model.eta == 0.0) corr.terms.clear();
    return corr;
}

} // namespace glekin
