#include "ldtk/infinite_line.hpp"

#include "ldtk/error.hpp"
#include "ldtk/legendre.hpp"
#include "ldtk/parallel.hpp"
#include "ldtk/quadrature.hpp"
#include "ldtk/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ldtk {

namespace {

constexpr double tail_cut = 40.0;

quad::Options line_tolerance()
{
    quad::Options o;
    o.abs_tol = 1e-13;
    o.rel_tol = 1e-12;
    return o;
}

void require_density(double rho_a)
{
    if (!(rho_a >= 0.0) || !std::isfinite(rho_a)) fail(ErrorCode::DomainViolation, "rho_a must be nonnegative");
}

}  // namespace

double crossing_probability_g(double v)
{
    if (v > 0.0) {
        std::ostringstream os;
        os << "g(v) needs v <= 0, got " << v;
        fail(ErrorCode::PositiveArgument, os.str());
    }
    return 0.5 * std::erfc(-v / 2.0);
}

double annealed_scgf_free(double rho_a, double lambda)
{
    require_density(rho_a);
    return rho_a * std::expm1(lambda) / std::sqrt(std::numbers::pi);
}

double annealed_scgf_free_derivative(double rho_a, double lambda)
{
    require_density(rho_a);
    return rho_a * std::exp(lambda) / std::sqrt(std::numbers::pi);
}

double quenched_scgf_free(double rho_a, double lambda)
{
    require_density(rho_a);
    const double x = std::expm1(lambda);
    // g is at most 1/2, so the argument is smallest at u = 0
    if (1.0 + 0.5 * x <= 0.0) {
        std::ostringstream os;
        os << "1 + (e^lambda - 1) g(u) <= 0 at u = 0 for lambda = " << lambda;
        fail(ErrorCode::LambdaTooNegative, os.str());
    }
    auto integrand = [x](double u) { return std::log1p(x * crossing_probability_g(u)); };
    return rho_a * quad::integrate(integrand, -tail_cut, 0.0, line_tolerance());
}

double quenched_scgf_free_derivative(double rho_a, double lambda)
{
    require_density(rho_a);
    const double e = std::exp(lambda);
    const double x = std::expm1(lambda);
    auto integrand = [e, x](double u) {
        const double g = crossing_probability_g(u);
        return e * g / (1.0 + x * g);
    };
    return rho_a * quad::integrate(integrand, -tail_cut, 0.0, line_tolerance());
}

double optimal_initial_profile(double rho_a, double lambda, double u)
{
    require_density(rho_a);
    return rho_a * (1.0 + std::expm1(lambda) * crossing_probability_g(u));
}

double annealed_variational(double rho_a, double lambda, const std::function<double(double)>& rho0)
{
    require_density(rho_a);
    const double x = std::expm1(lambda);
    // free energy relative to the reservoir, f(r) - f(rho_a) - (r - rho_a) f'(rho_a)
    auto excess = [rho_a](double r) {
        if (r <= 0.0) return rho_a;
        return r * std::log(r / rho_a) - r + rho_a;
    };
    auto integrand = [&](double u) {
        const double r = rho0(u);
        return r * std::log1p(x * crossing_probability_g(u)) - excess(r);
    };
    return quad::integrate(integrand, -tail_cut, 0.0, line_tolerance());
}

double annealed_scgf_ssep(double rho_a, double lambda)
{
    if (!(rho_a > 0.0 && rho_a <= 1.0)) fail(ErrorCode::DomainViolation, "rho_a must lie in (0, 1]");
    const double c = rho_a * std::expm1(lambda);
    if (1.0 + c <= 0.0) {
        std::ostringstream os;
        os << "1 + rho_a (e^lambda - 1) <= 0 at k = 0 for lambda = " << lambda;
        fail(ErrorCode::LambdaTooNegative, os.str());
    }
    // even integrand; e^{-k^2} < 1e-300 beyond k = 27
    auto integrand = [c](double k) { return std::log1p(c * std::exp(-k * k)); };
    return 2.0 / std::numbers::pi * quad::integrate(integrand, 0.0, 27.0, line_tolerance());
}

double free_rate_function(Ensemble ensemble, double rho_a, double q)
{
    std::function<double(double)> mu, dmu;
    if (ensemble == Ensemble::Annealed) {
        mu = [rho_a](double l) { return annealed_scgf_free(rho_a, l); };
        dmu = [rho_a](double l) { return annealed_scgf_free_derivative(rho_a, l); };
    } else {
        mu = [rho_a](double l) { return quenched_scgf_free(rho_a, l); };
        dmu = [rho_a](double l) { return quenched_scgf_free_derivative(rho_a, l); };
    }
    return legendre_by_bisection(mu, dmu, q, -30.0, 10.0).value;
}

LineSampleResult sample_line_current(Ensemble ensemble, double rho_a, double t, std::size_t samples,
                                     std::uint64_t seed, const std::vector<double>& lambdas)
{
    require_density(rho_a);
    if (ensemble == Ensemble::Quenched && rho_a != 1.0)
        fail(ErrorCode::DomainViolation, "quenched lattice sampling needs rho_a = 1");
    if (!(t > 0.0)) fail(ErrorCode::DomainViolation, "t must be positive");
    if (samples < 2) fail(ErrorCode::InsufficientData, "need at least two samples");

    const long depth = static_cast<long>(std::ceil(12.0 * std::sqrt(t))) + 10;
    constexpr std::size_t chunk = 64;
    const std::size_t n_chunks = (samples + chunk - 1) / chunk;
    std::vector<long> q(samples, 0);

    parallel_for(n_chunks, [&](std::size_t c) {
        auto rng = stream_engine(seed, c);
        std::poisson_distribution<long> steps(t);
        std::poisson_distribution<long> occupancy(rho_a > 0.0 ? rho_a : 1.0);
        const std::size_t end = std::min(samples, (c + 1) * chunk);
        for (std::size_t s = c * chunk; s < end; ++s) {
            long count = 0;
            for (long x = 1; x <= depth; ++x) {
                const long walkers = ensemble == Ensemble::Quenched ? 1 : (rho_a > 0.0 ? occupancy(rng) : 0);
                for (long w = 0; w < walkers; ++w) {
                    const long d = steps(rng) - steps(rng);
                    if (d >= x) ++count;
                }
            }
            q[s] = count;
        }
    });

    LineSampleResult out;
    out.lambdas = lambdas;
    const double root_t = std::sqrt(t);
    double mean = 0.0;
    for (long v : q) mean += static_cast<double>(v);
    out.mean_current = mean / static_cast<double>(samples) / root_t;
    for (double l : lambdas) {
        double top = -INFINITY;
        for (long v : q) top = std::max(top, l * static_cast<double>(v));
        double acc = 0.0;
        for (long v : q) acc += std::exp(l * static_cast<double>(v) - top);
        out.scgf.push_back((top + std::log(acc / static_cast<double>(samples))) / root_t);
    }
    return out;
}

}  // namespace ldtk
