#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "glekin/errors.hpp"
#include "glekin/quadrature.hpp"
#include "glekin/resolvent.hpp"
#include "oracles.hpp"

using namespace glekin;
using cplx = std::complex<double>;

namespace {

NoiseModel paper_model(NoiseKind kind) {
    return make_noise_model(kind, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0);
}

const BarrierSpec kBarrier = make_barrier(1.0);

} // namespace

TEST_CASE("characteristic polynomial matches the symbolic expansion (HVN)") {
    // (s^2 - 1)(s^2 + s + 2) + s * (s * eta Gamma) expanded term by term.
    const auto sys = characteristic_polynomial(paper_model(NoiseKind::HVN), kBarrier);
    const Polynomial expected =
        Polynomial({-1.0, 0.0, 1.0}) * Polynomial({2.0, 1.0, 1.0}) + Polynomial({0.0, 0.0, 1.0});
    REQUIRE(sys.characteristic.c.size() == expected.c.size());
    for (std::size_t i = 0; i < expected.c.size(); ++i)
        CHECK(sys.characteristic.c[i] == doctest::Approx(expected.c[i]).epsilon(1e-14));
    // s^4 + s^3 + 2 s^2 - s - 2
    CHECK(sys.characteristic.c == std::vector<double>{-2.0, -1.0, 2.0, 1.0, 1.0});
    CHECK(sys.numerator.c == std::vector<double>{2.0, 1.0, 1.0});
}

TEST_CASE("characteristic polynomial for the white-noise baseline") {
    const auto sys = characteristic_polynomial(paper_model(NoiseKind::Ohmic), kBarrier);
    CHECK(sys.characteristic.c == std::vector<double>{-1.0, 1.0, 1.0});
    CHECK(sys.numerator.c == std::vector<double>{1.0});
}

TEST_CASE("Q(0) is negative for every structured kernel") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> draw(0.1, 5.0);
    for (int i = 0; i < 100; ++i) {
        const auto kind = static_cast<NoiseKind>(i % 3);
        const auto m = make_noise_model(kind, draw(rng), draw(rng), draw(rng), 1.0, 1.0);
        const auto sys = characteristic_polynomial(m, make_barrier(draw(rng)));
        CHECK(sys.characteristic.c.front() < 0.0);
    }
}

TEST_CASE("find_poles: quadratic against the closed form") {
    const auto roots = find_poles(Polynomial({-1.0, 1.0, 1.0}));
    REQUIRE(roots.size() == 2);
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(std::abs(roots[0] - cplx(golden, 0.0)) < 1e-12);
    CHECK(std::abs(roots[1] - cplx(-golden - 1.0, 0.0)) < 1e-12);
}

TEST_CASE("find_poles: HVN quartic has its positive root where bisection puts it") {
    const auto sys = characteristic_polynomial(paper_model(NoiseKind::HVN), kBarrier);
    auto q = [&](double s) { return sys.characteristic.eval(s); };
    REQUIRE(q(0.8) < 0.0);
    REQUIRE(q(1.0) > 0.0);
    const double ref = oracles::bisect(q, 0.8, 1.0);
    const auto roots = find_poles(sys.characteristic);
    const auto pos = std::find_if(roots.begin(), roots.end(), [](cplx s) {
        return s.real() > 0.0 && s.imag() == 0.0;
    });
    REQUIRE(pos != roots.end());
    CHECK(std::abs(pos->real() - ref) < 1e-9);
}

TEST_CASE("find_poles rejects double roots") {
    // (s - 1)^2 (s + 2)(s + 3)
    const Polynomial p = Polynomial({-1.0, 1.0}) * Polynomial({-1.0, 1.0}) *
                         Polynomial({2.0, 1.0}) * Polynomial({3.0, 1.0});
    CHECK_THROWS_WITH_AS((void)find_poles(p), doctest::Contains("confluent"), NumericalError);
}

TEST_CASE("find_poles validates degree and leading coefficient") {
    CHECK_THROWS_AS((void)find_poles(Polynomial({1.0, 2.0})), ValidationError);
    CHECK_THROWS_AS((void)find_poles(Polynomial({1.0, 2.0, 0.0})), ValidationError);
}

TEST_CASE("residues of the white-noise system") {
    const auto d = spectral_decomposition(paper_model(NoiseKind::Ohmic), kBarrier);
    REQUIRE(d.poles.size() == 2);
    const double inv_sqrt5 = 1.0 / std::sqrt(5.0);
    CHECK(std::abs(d.residues[0] - cplx(inv_sqrt5, 0.0)) < 1e-13);
    CHECK(std::abs(d.residues[1] - cplx(-inv_sqrt5, 0.0)) < 1e-13);
}

TEST_CASE("sum rules hold for every kind and random parameters") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> draw(0.1, 5.0);
    int done = 0;
    while (done < 60) {
        const double G = draw(rng), O2 = draw(rng);
        if (std::abs(G * G - 4.0 * O2) < 0.05) continue;
        const auto kind = static_cast<NoiseKind>(done % 4);
        const auto m = make_noise_model(kind, G, O2, draw(rng), 1.0, 1.0, draw(rng));
        const auto d = spectral_decomposition(m, make_barrier(draw(rng)));
        cplx sum_r = 0.0, sum_rs = 0.0;
        for (std::size_t i = 0; i < d.poles.size(); ++i) {
            sum_r += d.residues[i];
            sum_rs += d.residues[i] * d.poles[i];
        }
        CHECK(std::abs(sum_r) <= 1e-10);
        CHECK(std::abs(sum_rs - 1.0) <= 1e-10);
        ++done;
    }
}

TEST_CASE("exactly one unstable pole, real and dominant") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> draw(0.1, 5.0);
    int done = 0;
    while (done < 100) {
        const double G = draw(rng), O2 = draw(rng);
        if (std::abs(G * G - 4.0 * O2) < 0.05) continue;
        const auto kind = static_cast<NoiseKind>(done % 3);
        const auto m = make_noise_model(kind, G, O2, draw(rng), 1.0, 1.0);
        const auto d = spectral_decomposition(m, make_barrier(draw(rng)));
        CHECK(d.unstable_count == 1); // recorded, not assumed, by the decomposition
        CHECK(d.dominant_pole().imag() == 0.0);
        CHECK(d.dominant_pole().real() > 0.0);
        ++done;
    }
    for (auto kind : {NoiseKind::HN, NoiseKind::HVN, NoiseKind::HAN, NoiseKind::Ohmic}) {
        const auto d = spectral_decomposition(paper_model(kind), kBarrier);
        CHECK(d.unstable_count == 1);
    }
}

TEST_CASE("response at the origin and its first-order growth") {
    for (auto kind : {NoiseKind::HN, NoiseKind::HVN, NoiseKind::HAN, NoiseKind::Ohmic}) {
        const auto d = spectral_decomposition(paper_model(kind), kBarrier);
        CHECK(std::abs(d.response(0.0)) < 1e-12);
        CHECK(d.response(1e-6) / 1e-6 == doctest::Approx(1.0).epsilon(1e-4));
        CHECK_THROWS_AS((void)d.response(-0.1), ValidationError);
    }
}

TEST_CASE("white-noise response against the long-double two-pole reference") {
    const auto d = spectral_decomposition(paper_model(NoiseKind::Ohmic), kBarrier);
    const oracles::OhmicReference ref(1.0L, 1.0L);
    for (double t : {0.25, 1.0, 3.0, 7.5}) {
        CHECK(d.response(t) ==
              doctest::Approx(static_cast<double>(ref.H(t))).epsilon(1e-12));
    }
    // spot value: H(1) = (e^{0.618...} - e^{-1.618...}) / sqrt(5)
    CHECK(d.response(1.0) == doctest::Approx(0.741027).epsilon(1e-5));
}

TEST_CASE("response integral: endpoints, quadrature oracle, derivative") {
    for (auto kind : {NoiseKind::HN, NoiseKind::HVN, NoiseKind::HAN, NoiseKind::Ohmic}) {
        const auto d = spectral_decomposition(paper_model(kind), kBarrier);
        CHECK(d.response_integral(0.0) == 0.0);
        const double by_quadrature =
            integrate_adaptive([&](double u) { return d.response(u); }, 0.0, 5.0, 1e-10, 1e-12);
        CHECK(std::abs(d.response_integral(5.0) - by_quadrature) < 1e-8);
    }
    const auto d = spectral_decomposition(paper_model(NoiseKind::Ohmic), kBarrier);
    const double h = 1e-6;
    const double deriv = (d.response_integral(1.0 + h) - d.response_integral(1.0 - h)) / (2.0 * h);
    CHECK(deriv == doctest::Approx(d.response(1.0)).epsilon(1e-6));
}

TEST_CASE("spectral sum matches Talbot contour inversion") {
    for (auto kind : {NoiseKind::HN, NoiseKind::HVN, NoiseKind::HAN}) {
        const auto sys = characteristic_polynomial(paper_model(kind), kBarrier);
        const auto d = spectral_decomposition(paper_model(kind), kBarrier);
        for (int i = 0; i <= 24; ++i) {
            const double t = 0.1 + i * (10.0 - 0.1) / 24.0;
            const double via_talbot = oracles::talbot_inverse(sys.numerator, sys.characteristic, t);
            const double via_poles = d.response(t);
            CHECK(std::abs(via_talbot - via_poles) <= 1e-6 * std::abs(via_poles));
        }
    }
}

TEST_CASE("pole ordering does not change the response") {
    const auto d = spectral_decomposition(paper_model(NoiseKind::HN), kBarrier);
    std::vector<std::size_t> perm = {2, 0, 3, 1};
    SpectralDecomposition shuffled = d;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        shuffled.poles[i] = d.poles[perm[i]];
        shuffled.residues[i] = d.residues[perm[i]];
    }
    for (double t : {0.3, 1.7, 6.2}) {
        const double a = d.response(t), b = shuffled.response(t);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
}

TEST_CASE("barrier validation") {
    CHECK_THROWS_WITH_AS((void)make_barrier(0.0), doctest::Contains("omega_b"), ValidationError);
    CHECK_THROWS_AS((void)make_barrier(-2.0), ValidationError);
}
