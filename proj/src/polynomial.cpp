#include "glekin/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "glekin/errors.hpp"

namespace glekin {

namespace {
using cplx = std::complex<double>;
} // namespace

double Polynomial::magnitude_scale(std::complex<double> s) const {
    double scale = 0.0, p = 1.0;
    const double a = std::abs(s);
    for (double ck : c) {
        scale += std::abs(ck) * p;
        p *= a;
    }
    return scale;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    if (c.size() <= 1) {
        d.c = {0.0};
        return d;
    }
    d.c.resize(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = static_cast<double>(k) * c[k];
    return d;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

std::vector<std::complex<double>> find_poles(const Polynomial& q) {
    const int deg = q.degree();
    if (deg < 2) throw ValidationError("find_poles: polynomial degree must be >= 2");
    const double lead = q.c.back();
    if (lead == 0.0 || !std::isfinite(lead))
        throw ValidationError("find_poles: leading coefficient must be nonzero");

    // Companion matrix of the monic polynomial.
    const auto n = static_cast<Eigen::Index>(deg);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i)
        companion(i, n - 1) = -q.c[static_cast<std::size_t>(i)] / lead;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("find_poles: companion eigenvalue iteration failed to converge");

    std::vector<cplx> roots(static_cast<std::size_t>(deg));
    for (Eigen::Index i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);

    // Newton polish against the original coefficients.
    const Polynomial dq = q.derivative();
    for (auto& r : roots) {
        for (int iter = 0; iter < 16; ++iter) {
            const cplx f = q.eval(r);
            if (std::abs(f) <= 1e-13 * q.magnitude_scale(r)) break;
            const cplx df = dq.eval(r);
            if (df == cplx(0.0)) break;
            r -= f / df;
        }
    }

    for (const auto& r : roots) {
        const double residual = std::abs(q.eval(r));
        const double scale = q.magnitude_scale(r);
        if (!(residual < 1e-9 * scale)) {
            std::ostringstream os;
            os << "find_poles: root " << r << " did not converge (|Q| = " << residual
               << ", scale = " << scale << ")";
            throw NumericalError(os.str());
        }
    }

    // Snap near-real roots, then enforce exact conjugate pairing.
    double max_mag = 0.0;
    for (const auto& r : roots) max_mag = std::max(max_mag, std::abs(r));
    for (auto& r : roots)
        if (std::abs(r.imag()) <= 1e-9 * (1.0 + std::abs(r))) r = cplx(r.real(), 0.0);

    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    std::vector<bool> paired(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (paired[i] || roots[i].imag() == 0.0) continue;
        std::size_t best = i;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j == i || paired[j]) continue;
            const double dist = std::abs(roots[j] - std::conj(roots[i]));
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        if (best == i || best_dist > 1e-6 * (1.0 + max_mag))
            throw NumericalError("find_poles: complex root without a conjugate partner");
        const cplx avg = (roots[i] + std::conj(roots[best])) / 2.0;
        roots[i] = avg;
        roots[best] = std::conj(avg);
        paired[i] = paired[best] = true;
    }

    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-8 * std::max(max_mag, 1e-300))
                throw NumericalError("confluent poles unsupported");

    return roots;
}

} // namespace glekin
