#pragma once

// Independent oracles used by the tests. These deliberately avoid the library's
// pole/residue path: Talbot inversion works on the rational coefficients, the
// two-pole references use long-double closed forms, bisection refines roots from
// sign changes alone.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "glekin/polynomial.hpp"

namespace oracles {

/// Fixed-Talbot numerical inverse Laplace transform of N(s)/Q(s) at time t.
/// The contour parameter r = 2M/(5t) must exceed the rightmost pole's real part.
/// Summed in long double: the contour carries factors up to e^{2M/5}, so the
/// roundoff floor of the sum is e^{2M/5} * epsilon.
inline double talbot_inverse(const glekin::Polynomial& num, const glekin::Polynomial& den,
                             double t, int M = 64) {
    using cplx = std::complex<long double>;
    const long double pi = std::numbers::pi_v<long double>;
    const long double r = 2.0L * M / (5.0L * t);
    long double acc = 0.0L;
    for (int k = 0; k < M; ++k) {
        const long double th = (k + 0.5L) * pi / M;
        const long double cot = std::cos(th) / std::sin(th);
        const cplx s = r * th * cplx(cot, 1.0L);
        const cplx ds = r * cplx(cot - th / (std::sin(th) * std::sin(th)), 1.0L);
        const cplx F = num.eval(s) / den.eval(s);
        acc += (std::exp(s * static_cast<long double>(t)) * F * ds).imag();
    }
    return static_cast<double>(acc / M);
}

/// Root of f in [lo, hi] by bisection; requires a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::runtime_error("bisect: no sign change");
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

/// Two-pole closed forms for the white-noise (Ohmic) barrier system, evaluated in
/// long double: s_pm = (-gamma +- sqrt(gamma^2 + 4 wb^2)) / 2, residues +-1/sqrt(disc).
struct OhmicReference {
    long double s_plus, s_minus, inv_sqrt_disc;

    OhmicReference(long double gamma, long double wb) {
        const long double disc = gamma * gamma + 4.0L * wb * wb;
        const long double root = std::sqrt(disc);
        s_plus = (-gamma + root) / 2.0L;
        s_minus = (-gamma - root) / 2.0L;
        inv_sqrt_disc = 1.0L / root;
    }
    long double H(long double t) const {
        return (std::exp(s_plus * t) - std::exp(s_minus * t)) * inv_sqrt_disc;
    }
    long double H_integral(long double t) const {
        return ((std::exp(s_plus * t) - 1.0L) / s_plus - (std::exp(s_minus * t) - 1.0L) / s_minus) *
               inv_sqrt_disc;
    }
};

} // namespace oracles
