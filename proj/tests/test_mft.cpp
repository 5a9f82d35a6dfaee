#include "doctest.h"

#include "ldtk/error.hpp"
#include "ldtk/mft.hpp"
#include "ldtk/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ldtk;

namespace {

const double pi = std::numbers::pi;

// Sine-series Green function of -d^2/dx^2 with Dirichlet ends, truncated.
double green_series(double x, double y, int modes)
{
    double g = 0.0;
    for (int k = 1; k <= modes; ++k) g += 2.0 * std::sin(k * pi * x) * std::sin(k * pi * y) / (k * k * pi * pi);
    return g;
}

}  // namespace

TEST_CASE("steady profiles")
{
    const auto ssep = transport_catalogue("ssep");
    const auto st = steady_profile(ssep, 1.0, 0.0, 64);
    CHECK(st.current == doctest::Approx(1.0).epsilon(1e-13));
    for (std::size_t k = 0; k <= 64; ++k) CHECK(st.profile.values[k] == doctest::Approx(1.0 - st.profile.x(k)).epsilon(1e-12));

    // independent walkers: e^{f'} = rho is linear in x
    const auto zrp = zrp_transport(ZrpRates::independent());
    for (double x : {0.1, 0.5, 0.9}) {
        CHECK(steady_density_at(zrp, 2.0, 1.0, x) == doctest::Approx(2.0 - x).epsilon(1e-10));
        CHECK(zrp_steady_density_at(ZrpRates::independent(), 2.0, 1.0, x) == doctest::Approx(2.0 - x).epsilon(1e-10));
    }

    // monotone for every positive-D model
    for (const char* name : {"ssep", "kmp", "free"}) {
        const auto m = transport_catalogue(name);
        const double hi = std::string(name) == "ssep" ? 0.9 : 3.0;
        const auto p = steady_profile(m, hi, 0.2, 32).profile.values;
        for (std::size_t k = 0; k + 1 < p.size(); ++k) CHECK(p[k + 1] < p[k]);
    }
    CHECK_THROWS_AS(steady_profile(ssep, 1.2, 0.0, 32), Error);
    CHECK_THROWS_AS(steady_profile(ssep, 1.0, 0.0, 8), Error);
}

TEST_CASE("covariance kernel of the exclusion process")
{
    const auto ssep = transport_catalogue("ssep");
    const auto c = covariance(ssep, 1.0, 0.0, 128);
    CHECK(c.long_range(31, 63) == doctest::Approx(-0.125).epsilon(1e-10));
    CHECK(c.local[31] == doctest::Approx(0.25 * 0.75).epsilon(1e-12));

    // independent oracle: 200-mode sine series of the Dirichlet Green function
    for (auto [i, j] : {std::pair{15, 79}, std::pair{40, 100}, std::pair{63, 95}}) {
        const double oracle = -green_series(c.x[i], c.x[j], 200);
        CHECK(std::abs(c.long_range(i, j) - oracle) < 2e-3);
    }

    // the exact-face discretization reproduces -dr^2 x (1 - y) at every n
    for (std::size_t n : {64, 128, 256}) {
        const auto cov = covariance(ssep, 0.8, 0.3, n);
        double err = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = i + 1; j + 1 < n; ++j)
                err = std::max(err, std::abs(cov.long_range(i, j) + 0.25 * cov.x[i] * (1.0 - cov.x[j])));
        CHECK(err < 1e-10);
    }
    CHECK(c.long_range.isApprox(c.long_range.transpose(), 1e-14));
}

TEST_CASE("covariance vanishes without long-range order")
{
    const auto zrp = zrp_transport(ZrpRates::independent());
    CHECK(covariance(zrp, 2.0, 1.0, 64).long_range.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(covariance(transport_catalogue("free"), 2.0, 1.0, 64).long_range.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(covariance(transport_catalogue("ssep"), 0.4, 0.4, 64).long_range.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK_THROWS_AS(covariance(zrp, 2.0, 1.0, 1024), Error);
}

TEST_CASE("number variance")
{
    const auto ssep = transport_catalogue("ssep");
    CHECK(number_variance_ssep(1.0, 0.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(std::abs(number_variance_numeric(ssep, 1.0, 0.0, 256) - 1.0 / 12.0) < 0.01 / 12.0);
    CHECK(number_variance(ssep, 0.7, 0.2) == doctest::Approx(number_variance_ssep(0.7, 0.2)));
    // equilibrium: sigma / (2 D) = rho (1 - rho)
    CHECK(number_variance_ssep(0.3, 0.3) == doctest::Approx(0.21).epsilon(1e-14));
    CHECK(number_variance_numeric(ssep, 0.7, 0.2, 256) ==
          doctest::Approx(number_variance_ssep(0.7, 0.2)).epsilon(1e-4));
}

TEST_CASE("additivity rate function for the exclusion process")
{
    const auto ssep = transport_catalogue("ssep");
    CHECK(additivity_rate_function(ssep, 1.0, 0.0, 1.0).I == 0.0);
    // values from an independent high-precision evaluation of the parametric form
    CHECK(additivity_rate_function(ssep, 1.0, 0.0, 0.5).I == doctest::Approx(0.427724442555038).epsilon(1e-11));
    CHECK(additivity_rate_function(ssep, 1.0, 0.0, 1.5).I == doctest::Approx(0.345582506644484).epsilon(1e-11));
    // q = 0 limit: (int D / sqrt(sigma))^2 / 2 = pi^2 / 4
    CHECK(additivity_rate_function(ssep, 1.0, 0.0, 0.0).I == doctest::Approx(pi * pi / 4.0).epsilon(1e-8));

    // expansion around the typical current: S1 = 1, S2 = 1/3, S3 = 2/15
    for (double d : {-0.01, 0.01}) {
        const double I = additivity_rate_function(ssep, 1.0, 0.0, 1.0 + d).I;
        const double quad2 = 1.5 * d * d;
        const double quad3 = quad2 - 0.3 * d * d * d;
        CHECK(std::abs(I - quad2) / quad2 < 0.011);
        CHECK(std::abs(I - quad3) < 1e-7);
    }
    // reversed currents need sigma > 0 at both reservoirs
    CHECK_THROWS_AS(additivity_rate_function(ssep, 1.0, 0.0, -0.5), Error);
    CHECK_THROWS_AS(additivity_rate_function(ssep, 0.5, 0.5, 0.2), Error);
}

TEST_CASE("fluctuation theorem of the additivity rate function")
{
    for (const auto& [name, r1, r2] : {std::tuple{"ssep", 0.8, 0.3}, std::tuple{"kmp", 2.0, 1.0},
                                        std::tuple{"ssep", 0.2, 0.6}}) {
        const auto m = transport_catalogue(name);
        const double affinity = m.df(r2) - m.df(r1);
        for (double q : {0.05, 0.3, 0.7, 1.2, 2.5}) {
            const double Ip = additivity_rate_function(m, r1, r2, q).I;
            const double Im = additivity_rate_function(m, r1, r2, -q).I;
            CHECK(std::abs(Ip - Im - q * affinity) < 1e-7);
        }
    }
}

TEST_CASE("additivity against direct minimization")
{
    const auto ssep = transport_catalogue("ssep");
    for (double q : {0.5, 1.5}) {
        const double exact = additivity_rate_function(ssep, 1.0, 0.0, q).I;
        const double coarse = additivity_variational(ssep, 1.0, 0.0, q, 32);
        const double fine = additivity_variational(ssep, 1.0, 0.0, q, 64);
        CHECK(std::abs(fine - exact) < 1e-3);
        CHECK(std::abs((4.0 * fine - coarse) / 3.0 - exact) < 1e-4);
    }
    const auto kmp = transport_catalogue("kmp");
    const double fine = additivity_variational(kmp, 2.0, 1.0, 0.6, 64);
    CHECK(fine == doctest::Approx(additivity_rate_function(kmp, 2.0, 1.0, 0.6).I).epsilon(1e-3));
}

TEST_CASE("non-monotonic branch of the KMP model")
{
    const auto kmp = transport_catalogue("kmp");
    // sigma = 2 rho^2 is largest at rho1 = 2, so K_min = -1/16
    const auto edge = additivity_from_K(kmp, 2.0, 1.0, -1.0 / 16.0);
    const double q_sat = edge.q;
    CHECK(q_sat > steady_current(kmp, 2.0, 1.0));
    const auto below = additivity_rate_function(kmp, 2.0, 1.0, q_sat * (1.0 - 1e-9));
    const auto above = additivity_rate_function(kmp, 2.0, 1.0, q_sat * (1.0 + 1e-9));
    CHECK(below.branch == "monotonic");
    CHECK(above.branch == "nonmonotonic");
    CHECK(std::abs(below.I - above.I) < 1e-6);
    CHECK(std::abs(above.I - edge.I) < 1e-6);

    const auto far = additivity_rate_function(kmp, 2.0, 1.0, 5.0);
    CHECK(far.branch == "nonmonotonic");
    CHECK(far.rho0 > 2.0);
    const auto direct = additivity_from_rho0(kmp, 2.0, 1.0, far.rho0);
    CHECK(direct.q == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(direct.I == doctest::Approx(far.I).epsilon(1e-12));
    CHECK_THROWS_AS(additivity_from_rho0(kmp, 2.0, 1.0, 1.5), Error);

    // convexity of the sampled curve across the junction
    std::vector<double> qs;
    for (double q = 0.2; q <= 4.0; q += 0.2) qs.push_back(q);
    const auto curve = additivity_curve(kmp, 2.0, 1.0, qs, true);
    CHECK(curve.envelope_applied);
    CHECK_FALSE(curve.envelope_changed);
    for (std::size_t k = 1; k + 1 < qs.size(); ++k)
        CHECK(curve.samples[k - 1].I + curve.samples[k + 1].I - 2.0 * curve.samples[k].I > -1e-12);
}

TEST_CASE("mirrored reservoirs")
{
    const auto ssep = transport_catalogue("ssep");
    const auto a = additivity_rate_function(ssep, 0.8, 0.3, 0.4);
    const auto b = additivity_rate_function(ssep, 0.3, 0.8, -0.4);
    CHECK(b.q == doctest::Approx(-0.4));
    CHECK(a.I == doctest::Approx(b.I).epsilon(1e-13));
}

TEST_CASE("current cumulants")
{
    const auto ssep = transport_catalogue("ssep");
    const auto c = additivity_cumulants(ssep, 1.0, 0.0);
    CHECK(c.S[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c.cumulants[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(c.cumulants[2] == doctest::Approx(1.0 / 15.0).epsilon(1e-10));
    CHECK(c.mu_coefficients[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));

    const auto f = additivity_cumulants(transport_catalogue("free"), 2.0, 1.0);
    // independent walkers: odd cumulants rho1 - rho2, even ones rho1 + rho2
    CHECK(f.cumulants[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.cumulants[2] == doctest::Approx(1.0).epsilon(1e-12));

    // close to equilibrium the variance rate tends to sigma(rho)
    const auto eq = additivity_cumulants(ssep, 0.4 + 1e-6, 0.4);
    CHECK(eq.cumulants[1] == doctest::Approx(ssep.sigma(0.4)).epsilon(1e-5));
    CHECK(std::abs(eq.cumulants[2]) < 1e-4);
    CHECK_THROWS_AS(additivity_cumulants(ssep, 1.0, 0.0, 4), Error);
}

TEST_CASE("ring instability")
{
    const auto kmp = transport_catalogue("kmp");
    for (double rb : {0.5, 1.0, 2.0}) {
        const auto t = ring_instability_threshold(kmp, rb);
        REQUIRE_FALSE(t.stable);
        CHECK(t.q_c == doctest::Approx(2.0 * pi * rb).epsilon(1e-12));
        const auto s = ring_instability_scan(kmp, rb);
        REQUIRE_FALSE(s.stable);
        CHECK(std::abs(s.q_c - t.q_c) / t.q_c < 1e-6);
        CHECK(std::abs(s.v_opt - t.v_opt) / t.v_opt < 1e-6);
        CHECK(t.v_opt == doctest::Approx(t.q_c * kmp.dsigma(rb) / kmp.sigma(rb)));
    }
    // below threshold every mode costs, above it the optimal drift wins
    CHECK(ring_mode_coefficient(kmp, 1.0, 0.9 * 2.0 * pi, 0.9 * 4.0 * pi) > 0.0);
    CHECK(ring_mode_coefficient(kmp, 1.0, 1.1 * 2.0 * pi, 1.1 * 4.0 * pi) < 0.0);

    const auto ssep = transport_catalogue("ssep");
    for (double rb : {0.2, 0.5, 0.8}) {
        CHECK(ring_instability_threshold(ssep, rb).stable);
        CHECK(ring_instability_scan(ssep, rb).stable);
    }
}

TEST_CASE("equilibrium density large deviations")
{
    const auto ssep = transport_catalogue("ssep");
    const auto flat = DensityProfile::sample(64, [](double) { return 0.5; }, 0.5, 0.5);
    CHECK(equilibrium_density_ldf(ssep, 0.5, flat) == 0.0);
    const auto full = DensityProfile::sample(64, [](double) { return 1.0; }, 0.5, 0.5);
    CHECK(equilibrium_density_ldf(ssep, 0.5, full) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        const double a1 = u(rng), a2 = u(rng), b1 = u(rng), b2 = u(rng);
        auto pa = DensityProfile::sample(64, [&](double x) { return a1 + (a2 - a1) * x * x; }, 0.5, 0.5);
        auto pb = DensityProfile::sample(64, [&](double x) { return b1 + (b2 - b1) * std::sin(pi * x / 2); }, 0.5, 0.5);
        DensityProfile mid = pa;
        for (std::size_t k = 0; k < mid.values.size(); ++k) mid.values[k] = 0.5 * (pa.values[k] + pb.values[k]);
        const double fm = equilibrium_density_ldf(ssep, 0.4, mid);
        CHECK(fm <= 0.5 * (equilibrium_density_ldf(ssep, 0.4, pa) + equilibrium_density_ldf(ssep, 0.4, pb)) + 1e-14);
    }
    const auto bad = DensityProfile::sample(16, [](double) { return 1.5; }, 0.5, 0.5);
    CHECK_THROWS_AS(equilibrium_density_ldf(ssep, 0.5, bad), Error);
}

TEST_CASE("zero-range density functional is local")
{
    const auto rates = ZrpRates::independent();
    const auto p = DensityProfile::sample(64, [](double) { return 1.5; }, 2.0, 1.0);
    const double value = zrp_density_ldf(rates, 2.0, 1.0, p);
    auto f = [](double r) { return r * std::log(r) - r; };
    const double oracle = quad::integrate(
        [&](double x) {
            const double s = 2.0 - x;
            return f(1.5) - f(s) - (1.5 - s) * std::log(s);
        },
        0.0, 1.0);
    CHECK(value == doctest::Approx(oracle).epsilon(1e-8));

    const auto steady = DensityProfile::sample(64, [](double x) { return 2.0 - x; }, 2.0, 1.0);
    CHECK(std::abs(zrp_density_ldf(rates, 2.0, 1.0, steady)) < 1e-12);

    // mixed second difference between separated nodes
    const double e = 1e-3;
    auto shifted = [&](std::initializer_list<std::size_t> at) {
        DensityProfile q = p;
        for (std::size_t k : at) q.values[k] += e;
        return zrp_density_ldf(rates, 2.0, 1.0, q);
    };
    for (auto [i, j] : {std::pair{10ul, 20ul}, std::pair{5ul, 50ul}, std::pair{31ul, 32ul}}) {
        const double mixed = (shifted({i, j}) - shifted({i}) - shifted({j}) + value) / (e * e);
        CHECK(std::abs(mixed) <= 1e-8);
    }
}

TEST_CASE("exclusion density functional between reservoirs")
{
    const auto ssep = transport_catalogue("ssep");
    const auto steady = DensityProfile::sample(128, [](double x) { return 1.0 - x; }, 1.0, 0.0);
    const auto s = density_ldf_ssep(1.0, 0.0, steady);
    CHECK(s.value == 0.0);
    for (std::size_t k = 0; k <= 128; ++k) CHECK(s.F[k] == doctest::Approx(1.0 - steady.x(k)).epsilon(1e-14));

    // Gaussian regime: the functional is half the quadratic form of the inverse covariance
    const std::size_t n = 128;
    auto p = DensityProfile::sample(n, [](double x) { return 1.0 - x + 0.01 * std::sin(pi * x); }, 1.0, 0.0);
    p.values.front() = 1.0;
    p.values.back() = 0.0;
    const auto r = density_ldf_ssep(1.0, 0.0, p);
    const Eigen::MatrixXd P = covariance(ssep, 1.0, 0.0, n).full();
    Eigen::VectorXd d(n - 1);
    for (std::size_t k = 1; k < n; ++k) d(k - 1) = p.values[k] - (1.0 - p.x(k));
    const double gaussian = 0.5 * d.dot(P.ldlt().solve(d));
    CHECK(std::abs(r.value / gaussian - 1.0) < 0.05);
    CHECK(r.residual <= 1e-10);

    // non-negative on assorted profiles
    for (double a : {-0.2, 0.1, 0.3})
        for (double b : {0.05, 0.2}) {
            auto q = DensityProfile::sample(64, [&](double x) { return 0.5 + a * std::sin(pi * x) + b * (0.5 - x); },
                                            0.5 + 0.5 * b, 0.5 - 0.5 * b);
            CHECK(density_ldf_ssep(0.5 + 0.5 * b, 0.5 - 0.5 * b, q).value >= 0.0);
        }

    // equal reservoirs delegate to the equilibrium form
    const auto bump = DensityProfile::sample(64, [](double x) { return 0.4 + 0.1 * std::sin(pi * x); }, 0.4, 0.4);
    CHECK(density_ldf_ssep(0.4, 0.4, bump).value == doctest::Approx(equilibrium_density_ldf(ssep, 0.4, bump)));
    CHECK_THROWS_AS(density_ldf_ssep(1.2, 0.0, steady), Error);
}

TEST_CASE("perturbative auxiliary function")
{
    // F = rho* - dr^2/(rho1(1-rho1)) [x int_x^1 (1-y) drho + (1-x) int_0^x y drho] + O(dr^3)
    auto error_at = [](double dr) {
        const double r1 = 0.6, r2 = 0.6 - dr;
        const std::size_t n = 256;
        auto bump = [](double y) { return 0.05 * std::sin(pi * y); };
        auto p = DensityProfile::sample(n, [&](double x) { return r1 + (r2 - r1) * x + bump(x); }, r1, r2);
        const auto s = density_ldf_ssep(r1, r2, p);
        double err = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double x = p.x(k);
            const double right = quad::integrate([&](double y) { return (1.0 - y) * bump(y); }, x, 1.0);
            const double left = quad::integrate([&](double y) { return y * bump(y); }, 0.0, x);
            const double F = r1 + (r2 - r1) * x - dr * dr / (r1 * (1.0 - r1)) * (x * right + (1.0 - x) * left);
            err = std::max(err, std::abs(F - s.F[k]));
        }
        return err;
    };
    const double e1 = error_at(0.1), e2 = error_at(0.05);
    CHECK(e1 < 1e-4);
    CHECK(e1 / e2 > 5.0);
}

TEST_CASE("exclusion density generating function")
{
    const std::size_t n = 256;
    std::vector<double> zero(n + 1, 0.0);
    const auto g0 = density_scgf_ssep(0.9, 0.2, zero);
    CHECK(std::abs(g0.value) < 1e-14);

    // quadratic expansion with kernel -dr^2 x (1 - y)
    auto expansion_error = [&](double eps, double r1, double r2) {
        std::vector<double> A(n + 1);
        for (std::size_t k = 0; k <= n; ++k) A[k] = eps * (1.0 + std::cos(3.0 * k / double(n)));
        const double G = density_scgf_ssep(r1, r2, A).value;
        auto a = [&](double x) { return eps * (1.0 + std::cos(3.0 * x)); };
        auto rs = [&](double x) { return r1 + (r2 - r1) * x; };
        const double linear = quad::integrate(
            [&](double x) { return a(x) * rs(x) + 0.5 * a(x) * a(x) * rs(x) * (1.0 - rs(x)); }, 0.0, 1.0);
        const double cross = quad::integrate(
            [&](double x) {
                return a(x) * x * quad::integrate([&](double y) { return a(y) * (1.0 - y); }, x, 1.0);
            },
            0.0, 1.0);
        return std::abs(G - (linear - (r1 - r2) * (r1 - r2) * cross));
    };
    for (auto [r1, r2] : {std::pair{1.0, 0.0}, std::pair{0.7, 0.2}}) {
        const double e1 = expansion_error(0.1, r1, r2), e2 = expansion_error(0.05, r1, r2);
        CHECK(e1 < 1e-3);
        CHECK(e1 / e2 > 6.0);
    }
}

TEST_CASE("Legendre duality between the density functionals")
{
    const double r1 = 0.8, r2 = 0.3;
    const std::size_t n = 256;
    std::vector<std::vector<double>> tests(3, std::vector<double>(n + 1));
    for (std::size_t k = 0; k <= n; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(n);
        tests[0][k] = 0.5;
        tests[1][k] = std::sin(pi * x);
        tests[2][k] = 0.8 * x - 0.3;
    }
    for (const auto& A : tests) {
        const double G = density_scgf_ssep(r1, r2, A).value;
        // profile family rho_s = F_s e^{sA} / (1 - F_s + F_s e^{sA})
        auto dual = [&](double s) {
            std::vector<double> sA(A);
            for (double& a : sA) a *= s;
            const auto sol = density_scgf_ssep(r1, r2, sA);
            auto p = DensityProfile::sample(n, [](double) { return 0.0; }, r1, r2);
            std::vector<double> Arho(n + 1);
            for (std::size_t k = 0; k <= n; ++k) {
                const double e = std::exp(sA[k]), F = sol.F[k];
                p.values[k] = F * e / (1.0 - F + F * e);
                Arho[k] = A[k] * p.values[k];
            }
            return quad::simpson(Arho, 1.0 / n) - density_ldf_ssep(r1, r2, p).value;
        };
        double a = 0.5, b = 1.5;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 30; ++it) {
            const double c = b - gr * (b - a), d = a + gr * (b - a);
            if (dual(c) > dual(d)) b = d;
            else a = c;
        }
        const double best = dual(0.5 * (a + b));
        CHECK(std::abs(best - G) < 1e-4);
        CHECK(std::abs(0.5 * (a + b) - 1.0) < 0.05);
    }
}

TEST_CASE("Hamilton-Jacobi residuals of constructed trajectories")
{
    const auto ssep = transport_catalogue("ssep");
    auto ratios = [&](auto build) {
        const auto a = hj_residual(ssep, build(32)), b = hj_residual(ssep, build(64)), c = hj_residual(ssep, build(128));
        return std::array<double, 4>{a.rho / b.rho, b.rho / c.rho, a.H / b.H, b.H / c.H};
    };
    const auto eq = ratios([](std::size_t n) { return equilibrium_excitation_trajectory(0.5, 0.2, n, n, 0.2); });
    const auto anti = ratios([](std::size_t n) { return ssep_antidiffusion_trajectory(0.7, 0.3, 0.01, n, n, 0.2); });
    for (double r : eq) CHECK(std::abs(r / 4.0 - 1.0) < 0.3);
    for (double r : anti) CHECK(std::abs(r / 4.0 - 1.0) < 0.3);

    TrajectoryGrid flat;
    flat.tau0 = -1.0;
    flat.rho = Eigen::MatrixXd::Constant(9, 9, 0.3);
    flat.H = Eigen::MatrixXd::Constant(9, 9, 0.7);
    const auto r = hj_residual(ssep, flat);
    CHECK(r.rho == 0.0);
    CHECK(r.H == 0.0);
    flat.H.resize(9, 8);
    CHECK_THROWS_AS(hj_residual(ssep, flat), Error);
}

TEST_CASE("trajectory action")
{
    const auto ssep = transport_catalogue("ssep");
    const auto anti = ssep_antidiffusion_trajectory(0.7, 0.3, 0.01, 128, 128, 0.2);
    const auto a = trajectory_action(ssep, anti);
    CHECK(std::abs(a.direct - a.h_form) < 1e-8);

    // reaching 1/2 + 0.2 sin(pi x) from equilibrium costs the equilibrium functional
    const auto exc = equilibrium_excitation_trajectory(0.5, 0.2, 128, 256, 1.0);
    const auto p = DensityProfile::sample(256, [](double x) { return 0.5 + 0.2 * std::sin(pi * x); }, 0.5, 0.5);
    const double target = equilibrium_density_ldf(ssep, 0.5, p);
    CHECK(std::abs(trajectory_action(ssep, exc).direct / target - 1.0) < 0.02);
    CHECK(std::abs(trajectory_action(ssep, exc).h_form / target - 1.0) < 0.02);

    // the steady state costs nothing
    TrajectoryGrid steady;
    steady.tau0 = 0.0;
    steady.tau1 = 1.0;
    steady.rho.resize(17, 33);
    steady.j = Eigen::MatrixXd::Constant(17, 33, 0.5);
    for (int k = 0; k <= 32; ++k) steady.rho.col(k).setConstant(0.75 - 0.5 * k / 32.0);
    const auto s = trajectory_action(ssep, steady);
    CHECK(std::abs(s.direct) < 1e-14);
    CHECK(std::isnan(s.h_form));
}
