#pragma once

#include <functional>

namespace glekin {

/// Adaptive Gauss-Kronrod integral of f over [a, b].
/// Throws NumericalError (with the achieved estimate in the message) if the error
/// estimate exceeds max(abs_tol, rel_tol * |I|).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-10, double rel_tol = 1e-10, int max_depth = 15);

} // namespace glekin
