#pragma once

#include <complex>
#include <vector>

namespace glekin {

/// Real-coefficient polynomial, coefficients in ascending order: c[0] + c[1] s + ...
struct Polynomial {
    std::vector<double> c;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    int degree() const { return static_cast<int>(c.size()) - 1; }

    template <typename Scalar>
    Scalar eval(Scalar s) const {
        Scalar acc{};
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + Scalar(*it);
        return acc;
    }

    /// sum_k |c_k| |s|^k, the natural magnitude scale of eval(s) for root residuals.
    double magnitude_scale(std::complex<double> s) const;

    Polynomial derivative() const;
};

Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator+(const Polynomial& a, const Polynomial& b);

/// All roots of q via balanced companion-matrix eigenvalues, Newton-polished to
/// |q(s)| < 1e-12 * magnitude scale, with exact conjugate pairing enforced.
/// Canonical order: descending real part, then descending imaginary part.
/// Throws ValidationError for degree < 2 or zero leading coefficient,
/// NumericalError for near-degenerate root pairs ("confluent poles unsupported")
/// or failure to converge.
std::vector<std::complex<double>> find_poles(const Polynomial& q);

} // namespace glekin
