#include "glekin/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "glekin/errors.hpp"

namespace glekin {

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    // The Gauss-Kronrod termination target is relative to the L1 norm, which can be
    // larger than |I|; tighten and retry until the caller's budget is met.
    double value = 0.0, error = 0.0;
    double target = rel_tol / 4.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        value = gk::integrate(f, a, b, max_depth, target, &error);
        const double budget = std::max(abs_tol, rel_tol * std::abs(value));
        if (error <= budget) return value;
        target /= 64.0;
    }
    std::ostringstream os;
    os << "adaptive quadrature did not reach tolerance: estimate " << value
       << ", error estimate " << error << ", budget "
       << std::max(abs_tol, rel_tol * std::abs(value));
    throw NumericalError(os.str());
}

} // namespace glekin
