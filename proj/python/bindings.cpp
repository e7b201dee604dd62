#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "glekin/errors.hpp"
#include "glekin/kinetics.hpp"
#include "glekin/model.hpp"
#include "glekin/moments.hpp"
#include "glekin/resolvent.hpp"
#include "glekin/simulate.hpp"
#include "glekin/version.hpp"

namespace py = pybind11;
using namespace glekin;

namespace {

CorrelationConvention convention_from(const std::string& name) {
    if (name == "fdt-kernel") return CorrelationConvention::FdtKernel;
    if (name == "literal-eq2") return CorrelationConvention::LiteralEq2;
    throw ValidationError("unknown convention '" + name + "'");
}

VarianceRegion region_from(const std::string& name) {
    if (name == "symmetric") return VarianceRegion::Symmetric;
    if (name == "half-region") return VarianceRegion::HalfRegion;
    throw ValidationError("unknown region '" + name + "'");
}

py::dict ensemble_to_dict(const EnsembleResult& e) {
    py::dict d;
    d["t"] = e.grid;
    d["mean"] = e.mean_hat;
    d["var"] = e.var_hat;
    d["chi"] = e.chi_hat;
    d["se_mean"] = e.se_mean;
    d["se_var"] = e.se_var;
    d["se_chi"] = e.se_chi;
    d["n_traj"] = e.n_traj;
    d["seed"] = e.seed;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Barrier-crossing kinetics of a generalized Langevin equation with "
              "structured internal noise";
    m.attr("__version__") = kVersion;

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::enum_<NoiseKind>(m, "NoiseKind")
        .value("HN", NoiseKind::HN)
        .value("HVN", NoiseKind::HVN)
        .value("HAN", NoiseKind::HAN)
        .value("OHMIC", NoiseKind::Ohmic);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def_readonly("kind", &NoiseModel::kind)
        .def_readonly("gamma_big", &NoiseModel::gamma_big)
        .def_readonly("omega2", &NoiseModel::omega2)
        .def_readonly("eta", &NoiseModel::eta)
        .def_readonly("mass", &NoiseModel::mass)
        .def_readonly("kT", &NoiseModel::kT)
        .def_readonly("gamma_ohmic", &NoiseModel::gamma_ohmic)
        .def_readonly("mu1", &NoiseModel::mu1)
        .def_readonly("mu2", &NoiseModel::mu2)
        .def("__repr__", [](const NoiseModel& mo) {
            return std::string("NoiseModel(kind=") + to_string(mo.kind) +
                   ", gamma_big=" + std::to_string(mo.gamma_big) +
                   ", omega2=" + std::to_string(mo.omega2) + ", eta=" + std::to_string(mo.eta) + ")";
        });

    m.def("make_noise_model",
          [](const std::string& kind, double gamma_big, double omega2, double eta, double mass,
             double kT, double gamma_ohmic) {
              return make_noise_model(noise_kind_from_string(kind), gamma_big, omega2, eta, mass,
                                      kT, gamma_ohmic);
          },
          py::arg("kind"), py::arg("gamma_big") = 1.0, py::arg("omega2") = 2.0,
          py::arg("eta") = 1.0, py::arg("mass") = 1.0, py::arg("kT") = 1.0,
          py::arg("gamma_ohmic") = 1.0);

    m.def("kernel_laplace", &kernel_laplace, py::arg("model"), py::arg("s"),
          "Laplace transform of the friction kernel at complex s");

    py::class_<CorrelationForm>(m, "CorrelationForm")
        .def_readonly("terms", &CorrelationForm::terms)
        .def_readonly("delta_weight", &CorrelationForm::delta_weight)
        .def("smooth", &CorrelationForm::smooth, py::arg("tau"));

    m.def("correlation_form",
          [](const NoiseModel& model, const std::string& convention) {
              return correlation_form(model, convention_from(convention));
          },
          py::arg("model"), py::arg("convention") = "fdt-kernel");

    py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("poles", &SpectralDecomposition::poles)
        .def_readonly("residues", &SpectralDecomposition::residues)
        .def_readonly("unstable_count", &SpectralDecomposition::unstable_count)
        .def_property_readonly("dominant_pole", &SpectralDecomposition::dominant_pole)
        .def("response", &SpectralDecomposition::response, py::arg("t"))
        .def("response_integral", &SpectralDecomposition::response_integral, py::arg("t"));

    m.def("spectral_decomposition",
          [](const NoiseModel& model, double omega_b) {
              return spectral_decomposition(model, make_barrier(omega_b));
          },
          py::arg("model"), py::arg("omega_b") = 1.0);

    m.def("mean_position",
          [](const SpectralDecomposition& d, double x0, double v0, double t) {
              return mean_position(d, {x0, v0}, d.barrier, t);
          },
          py::arg("decomp"), py::arg("x0"), py::arg("v0"), py::arg("t"));

    m.def("variance",
          [](const SpectralDecomposition& d, const CorrelationForm& corr, double t,
             const std::string& region, const std::string& method) {
              const auto r = region_from(region);
              if (method == "closed") return variance_closed(d, corr, t, r);
              if (method == "quadrature") return variance_quadrature(d, corr, t, r);
              throw ValidationError("method must be 'closed' or 'quadrature'");
          },
          py::arg("decomp"), py::arg("corr"), py::arg("t"), py::arg("region") = "symmetric",
          py::arg("method") = "closed");

    m.def("passing_probability", &passing_probability, py::arg("mean"), py::arg("sigma"));

    m.def("transmission",
          [](const SpectralDecomposition& d, const CorrelationForm& corr, double t,
             const std::string& region) {
              return transmission(d, corr, d.model, t, region_from(region));
          },
          py::arg("decomp"), py::arg("corr"), py::arg("t"), py::arg("region") = "symmetric");

    m.def("rate_ratio_by_flux",
          [](const SpectralDecomposition& d, const CorrelationForm& corr, double t,
             const std::string& region) {
              return rate_ratio_by_flux(d, corr, d.model, d.barrier, t, region_from(region));
          },
          py::arg("decomp"), py::arg("corr"), py::arg("t"), py::arg("region") = "symmetric");

    m.def("tst_rate",
          [](double partition_Q, double planck_h, double barrier_height, double kT) {
              return tst_rate({partition_Q, planck_h, barrier_height, kT});
          },
          py::arg("partition_Q"), py::arg("planck_h"), py::arg("barrier_height"), py::arg("kT"));

    m.def("kinetics_curves",
          [](const SpectralDecomposition& d, const CorrelationForm& corr, double x0, double v0,
             const std::vector<double>& grid, const std::string& region, bool with_flux_rate) {
              KineticsOptions opts;
              opts.region = region_from(region);
              opts.with_flux_rate = with_flux_rate;
              const auto k = kinetics_curves(d, corr, d.model, d.barrier, {x0, v0}, grid, opts);
              py::dict out;
              out["t"] = k.grid;
              out["chi"] = k.chi;
              out["kappa"] = k.kappa;
              if (with_flux_rate) out["rate_ratio"] = k.rate_ratio;
              out["response_zero_flags"] = k.response_zero_flags;
              return out;
          },
          py::arg("decomp"), py::arg("corr"), py::arg("x0"), py::arg("v0"), py::arg("grid"),
          py::arg("region") = "symmetric", py::arg("with_flux_rate") = false);

    m.def("simulate_ensemble",
          [](const NoiseModel& model, double omega_b, double x0, double v0, double t_max,
             double dt, std::size_t n_traj, std::uint64_t seed, int workers,
             const std::string& convention) {
              const auto corr = correlation_form(model, convention_from(convention));
              SimulateOptions opts;
              opts.workers = workers;
              return ensemble_to_dict(simulate_ensemble(model, make_barrier(omega_b), corr,
                                                        {x0, v0}, make_time_grid(t_max, dt), n_traj,
                                                        seed, opts));
          },
          py::arg("model"), py::arg("omega_b"), py::arg("x0"), py::arg("v0"), py::arg("t_max"),
          py::arg("dt"), py::arg("n_traj"), py::arg("seed"), py::arg("workers") = 0,
          py::arg("convention") = "fdt-kernel");

    m.def("empirical_kappa",
          [](const NoiseModel& model, double omega_b, double t_max, double dt, std::size_t n_traj,
             std::uint64_t seed, int workers) {
              const auto corr = correlation_form(model);
              SimulateOptions opts;
              opts.workers = workers;
              const auto e = empirical_kappa(model, make_barrier(omega_b), corr,
                                             make_time_grid(t_max, dt), n_traj, seed, opts);
              py::dict out;
              out["t"] = e.grid;
              out["kappa"] = e.kappa_hat;
              out["se"] = e.se;
              out["n_traj"] = e.n_traj;
              return out;
          },
          py::arg("model"), py::arg("omega_b"), py::arg("t_max"), py::arg("dt"),
          py::arg("n_traj"), py::arg("seed"), py::arg("workers") = 0);
}
