#include "glekin/moments.hpp"

#include <cmath>
#include <sstream>

#include "glekin/errors.hpp"
#include "glekin/quadrature.hpp"

namespace glekin {

namespace {

using cplx = std::complex<double>;

constexpr double kResonanceTol = 1e-8;

bool coincident(cplx a, cplx b) {
    return std::abs(a - b) < kResonanceTol * std::max({std::abs(a), std::abs(b), 1e-300});
}

[[noreturn]] void throw_resonant(cplx a, cplx b) {
    std::ostringstream os;
    os << "resonant exponents unsupported (" << a << " vs " << b << ")";
    throw NumericalError(os.str());
}

/// int_0^t dt1 e^{si(t-t1)} int_0^{t1} dt2 e^{sj(t-t2)} e^{mu(t1-t2)}
/// = e^{(si+sj)t} [E(mu-si; t) - E(-(si+sj); t)] / (sj + mu).
cplx ordered_block(cplx si, cplx sj, cplx mu, double t) {
    return std::exp((si + sj) * t) * (expm1_over(mu - si, t) - expm1_over(-(si + sj), t)) / (sj + mu);
}

} // namespace

const char* to_string(VarianceRegion r) {
    return r == VarianceRegion::Symmetric ? "symmetric" : "half-region";
}

double mean_position(const SpectralDecomposition& decomp, const InitialState& state,
                     const BarrierSpec& barrier, double t) {
    const double w2 = barrier.omega_b * barrier.omega_b;
    return (1.0 + w2 * decomp.response_integral(t)) * state.x0 + decomp.response(t) * state.v0;
}

double variance_closed(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                       double t, VarianceRegion region) {
    if (t < 0.0) throw ValidationError("variance_closed: t must be >= 0");
    if (t == 0.0 || corr.zero()) return 0.0;

    const auto& s = decomp.poles;
    const auto& r = decomp.residues;
    const std::size_t n = s.size();

    for (const auto& [c, mu] : corr.terms) {
        (void)c;
        for (std::size_t i = 0; i < n; ++i) {
            if (coincident(s[i], mu)) throw_resonant(s[i], mu);
            if (coincident(s[i], -mu)) throw_resonant(s[i], -mu);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (coincident(s[i], -s[j])) throw_resonant(s[i], -s[j]);

    cplx acc = 0.0;
    double scale = 0.0;
    for (const auto& [c, mu] : corr.terms) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cplx block = ordered_block(s[i], s[j], mu, t);
                if (region == VarianceRegion::Symmetric) block += ordered_block(s[j], s[i], mu, t);
                const cplx term = r[i] * r[j] * c * block;
                acc += term;
                scale += std::abs(term);
            }
        }
    }
    if (corr.delta_weight != 0.0) {
        const double w = region == VarianceRegion::Symmetric ? 1.0 : 0.5;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const cplx term = corr.delta_weight * w * r[i] * r[j] * expm1_over(s[i] + s[j], t);
                acc += term;
                scale += std::abs(term);
            }
        }
    }

    if (std::abs(acc.imag()) > 1e-9 * scale)
        throw NumericalError("variance_closed: imaginary residual above tolerance");

    double value = acc.real() / (decomp.model.mass * decomp.model.mass);
    // Roundoff can leave a tiny negative at short times.
    if (value < 0.0 && -value < 1e-12 * scale) value = 0.0;
    return value;
}

double variance_quadrature(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                           double t, VarianceRegion region, double abs_tol, double rel_tol) {
    if (t < 0.0) throw ValidationError("variance_quadrature: t must be >= 0");
    if (t == 0.0 || corr.zero()) return 0.0;

    auto H = [&](double u) { return decomp.response(u); };

    double smooth = 0.0;
    if (!corr.terms.empty()) {
        auto outer = [&](double t1) {
            const double upper = region == VarianceRegion::Symmetric ? t : t1;
            if (upper <= 0.0) return 0.0;
            auto inner = [&](double t2) { return corr.smooth(t1 - t2) * H(t - t2); };
            // C(|t1 - t2|) has a cusp at t2 = t1; integrate the smooth halves separately.
            const double in_tol_abs = abs_tol / (t + 1.0), in_tol_rel = rel_tol / 10.0;
            double inner_val;
            if (t1 > 0.0 && t1 < upper) {
                inner_val = integrate_adaptive(inner, 0.0, t1, in_tol_abs / 2.0, in_tol_rel) +
                            integrate_adaptive(inner, t1, upper, in_tol_abs / 2.0, in_tol_rel);
            } else {
                inner_val = integrate_adaptive(inner, 0.0, upper, in_tol_abs, in_tol_rel);
            }
            return H(t - t1) * inner_val;
        };
        smooth = integrate_adaptive(outer, 0.0, t, abs_tol, rel_tol);
    }

    double delta = 0.0;
    if (corr.delta_weight != 0.0) {
        const double w = region == VarianceRegion::Symmetric ? 1.0 : 0.5;
        auto h2 = [&](double u) { return H(u) * H(u); };
        delta = corr.delta_weight * w * integrate_adaptive(h2, 0.0, t, abs_tol, rel_tol);
    }

    return (smooth + delta) / (decomp.model.mass * decomp.model.mass);
}

MomentCurves moment_curves(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                           const InitialState& state, const BarrierSpec& barrier,
                           const std::vector<double>& grid, VarianceRegion region) {
    MomentCurves curves;
    curves.grid = grid;
    curves.mean.reserve(grid.size());
    curves.var.reserve(grid.size());
    for (double t : grid) {
        curves.mean.push_back(mean_position(decomp, state, barrier, t));
        curves.var.push_back(variance_closed(decomp, corr, t, region));
    }
    for (std::size_t i = 1; i < curves.var.size(); ++i)
        if (curves.var[i] < curves.var[i - 1]) curves.nonmonotone_flags.push_back(i);
    return curves;
}

} // namespace glekin
