#include "doctest.h"

#include "ldtk/error.hpp"
#include "ldtk/infinite_line.hpp"
#include "ldtk/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace ldtk;

namespace {
const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
}

TEST_CASE("crossing probability")
{
    CHECK(crossing_probability_g(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(crossing_probability_g(-2.0) == doctest::Approx(0.5 * std::erfc(1.0)).epsilon(1e-14));
    CHECK(crossing_probability_g(-2.0) == doctest::Approx(0.0786496).epsilon(1e-6));
    CHECK_THROWS_AS(crossing_probability_g(0.1), Error);

    // g is the Gaussian tail: compare against direct quadrature of the kernel
    for (double v : {-0.3, -1.0, -2.0, -5.0}) {
        auto kernel = [](double u) { return std::exp(-u * u / 4.0) / (2.0 * std::sqrt(std::numbers::pi)); };
        const double tail = quad::integrate(kernel, -v, 60.0);
        CHECK(crossing_probability_g(v) == doctest::Approx(tail).epsilon(1e-13));
    }
    const double mass = quad::integrate([](double u) { return crossing_probability_g(u); }, -40.0, 0.0);
    CHECK(mass == doctest::Approx(inv_sqrt_pi).epsilon(1e-12));
}

TEST_CASE("annealed free particles")
{
    CHECK(annealed_scgf_free(1.0, 0.0) == 0.0);
    CHECK(annealed_scgf_free(1.0, std::log(2.0)) == doctest::Approx(0.5641895835477563).epsilon(1e-14));
    CHECK(annealed_scgf_free_derivative(2.5, 0.0) == doctest::Approx(2.5 * inv_sqrt_pi).epsilon(1e-14));
    for (double l = -3.0; l <= 3.0; l += 0.25) {
        const double x = std::expm1(l);
        const double integral =
            quad::integrate([x](double u) { return x * crossing_probability_g(u); }, -40.0, 0.0);
        CHECK(std::abs(annealed_scgf_free(0.7, l) - 0.7 * integral) <= 1e-8);
    }
}

TEST_CASE("quenched free particles")
{
    CHECK(quenched_scgf_free(1.0, 0.0) == 0.0);
    // mpmath quadrature of the defining integral
    const double frozen = 0.496921987798289049;
    CHECK(quenched_scgf_free(1.0, std::log(2.0)) == doctest::Approx(frozen).epsilon(1e-10));
    CHECK(quenched_scgf_free(1.0, std::log(2.0)) < annealed_scgf_free(1.0, std::log(2.0)));
    CHECK(quenched_scgf_free_derivative(1.3, 0.0) == doctest::Approx(1.3 * inv_sqrt_pi).epsilon(1e-9));

    double prev2 = 0.0, prev1 = 0.0;
    for (int k = 0; k <= 120; ++k) {
        const double l = -3.0 + 0.05 * k;
        const double mq = quenched_scgf_free(1.0, l);
        CHECK(mq <= annealed_scgf_free(1.0, l) + 1e-12);
        if (k >= 2) CHECK(mq - 2.0 * prev1 + prev2 >= -1e-9);
        prev2 = prev1;
        prev1 = mq;
    }
    const double h = 1e-4;
    for (double l : {-1.0, 0.5, 2.0}) {
        const double fd = (quenched_scgf_free(1.0, l + h) - quenched_scgf_free(1.0, l - h)) / (2 * h);
        CHECK(quenched_scgf_free_derivative(1.0, l) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("rate functions: annealed below quenched")
{
    for (double q : {0.1, 0.3, 0.5641895835477563, 0.9, 1.5}) {
        const double ia = free_rate_function(Ensemble::Annealed, 1.0, q);
        const double iq = free_rate_function(Ensemble::Quenched, 1.0, q);
        CHECK(ia >= -1e-12);
        CHECK(ia <= iq + 1e-10);
    }
    CHECK(std::abs(free_rate_function(Ensemble::Quenched, 1.0, inv_sqrt_pi)) < 1e-10);
}

TEST_CASE("optimal initial profile")
{
    CHECK(optimal_initial_profile(2.0, 1.0, -60.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(optimal_initial_profile(1.0, std::log(2.0), 0.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK_THROWS_AS(optimal_initial_profile(1.0, 1.0, 0.5), Error);

    for (double l : {-1.0, 0.3, std::log(2.0), 1.5}) {
        auto best = [l](double u) { return optimal_initial_profile(0.8, l, u); };
        CHECK(std::abs(annealed_variational(0.8, l, best) - annealed_scgf_free(0.8, l)) <= 1e-8);
        // any other profile does worse
        auto flat = [](double) { return 0.8; };
        auto shifted = [&](double u) { return 1.05 * best(u); };
        CHECK(annealed_variational(0.8, l, flat) < annealed_scgf_free(0.8, l));
        CHECK(annealed_variational(0.8, l, shifted) < annealed_scgf_free(0.8, l));
    }
}

TEST_CASE("annealed SSEP")
{
    CHECK(annealed_scgf_ssep(0.5, 0.0) == 0.0);
    // mpmath value for rho_a = 1, lambda = log(3/2)
    CHECK(annealed_scgf_ssep(1.0, std::log(1.5)) == doctest::Approx(0.242537948935007401).epsilon(1e-10));
    const double dilute = annealed_scgf_ssep(0.01, 1.0);
    CHECK(dilute == doctest::Approx(0.0096360181568333483).epsilon(1e-10));
    CHECK(std::abs(dilute / annealed_scgf_free(0.01, 1.0) - 1.0) < 0.01);
    CHECK_THROWS_AS(annealed_scgf_ssep(1.5, 1.0), Error);

    double prev2 = 0.0, prev1 = 0.0;
    for (int k = 0; k <= 80; ++k) {
        const double m = annealed_scgf_ssep(0.6, -4.0 + 0.1 * k);
        if (k >= 1) CHECK(m > prev1);
        if (k >= 2) CHECK(m - 2.0 * prev1 + prev2 >= -1e-9);
        prev2 = prev1;
        prev1 = m;
    }
}

TEST_CASE("lattice sampling agrees with the continuum formulas")
{
    const std::vector<double> lambdas{0.25, 0.5};
    const auto annealed = sample_line_current(Ensemble::Annealed, 1.0, 400.0, 10000, 11, lambdas);
    const auto quenched = sample_line_current(Ensemble::Quenched, 1.0, 400.0, 10000, 12, lambdas);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double ma = annealed_scgf_free(1.0, lambdas[i]);
        const double mq = quenched_scgf_free(1.0, lambdas[i]);
        CHECK(std::abs(annealed.scgf[i] / ma - 1.0) < 0.05);
        CHECK(std::abs(quenched.scgf[i] / mq - 1.0) < 0.05);
    }
    const auto again = sample_line_current(Ensemble::Quenched, 1.0, 400.0, 10000, 12, lambdas);
    CHECK(again.scgf == quenched.scgf);
}
