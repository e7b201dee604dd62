#pragma once

#include <vector>

#include "glekin/model.hpp"
#include "glekin/resolvent.hpp"

namespace glekin {

struct InitialState {
    double x0 = 0.0;
    double v0 = 0.0;
};

/// Integration region for the position-variance double integral.
/// Symmetric is the full square [0,t]^2 with the 1/m^2 prefactor; it is the unique
/// convention under which the stochastic oracle agrees. HalfRegion restricts the inner
/// integral to t2 < t1 (and gives the delta term half weight) for comparison runs.
enum class VarianceRegion { Symmetric, HalfRegion };

const char* to_string(VarianceRegion r);

/// <x(t)> = [1 + omega_b^2 int_0^t H] x0 + H(t) v0.
double mean_position(const SpectralDecomposition& decomp, const InitialState& state,
                     const BarrierSpec& barrier, double t);

/// sigma_x^2(t) as a finite sum over pole pairs and correlation terms, the double
/// integral of H(t-t1) C(t1-t2) H(t-t2) done in closed form, plus the delta-term
/// contribution d0 * int_0^t H^2 evaluated from the pole sum.
/// Throws NumericalError("resonant exponents unsupported") when pole/correlation
/// exponents coincide within 1e-8 relative.
double variance_closed(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                       double t, VarianceRegion region = VarianceRegion::Symmetric);

/// Independent check of variance_closed: adaptive 2-D quadrature of the same
/// integrand (the delta term reduced analytically to a 1-D integral of H^2).
double variance_quadrature(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                           double t, VarianceRegion region = VarianceRegion::Symmetric,
                           double abs_tol = 1e-8, double rel_tol = 1e-8);

/// Aligned mean/variance samples over a time grid.
/// nonmonotone_flags records indices where var decreased; the curve is still returned.
struct MomentCurves {
    std::vector<double> grid;
    std::vector<double> mean;
    std::vector<double> var;
    std::vector<std::size_t> nonmonotone_flags;
};

MomentCurves moment_curves(const SpectralDecomposition& decomp, const CorrelationForm& corr,
                           const InitialState& state, const BarrierSpec& barrier,
                           const std::vector<double>& grid,
                           VarianceRegion region = VarianceRegion::Symmetric);

} // namespace glekin
