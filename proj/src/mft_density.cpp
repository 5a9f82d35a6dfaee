#include "ldtk/mft.hpp"

#include "ldtk/error.hpp"
#include "ldtk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace ldtk {

namespace {

// Residual G and tridiagonal Jacobian on interior nodes 1..n-1 of F.
struct TriSystem {
    std::vector<double> G, lower, diag, upper;
    explicit TriSystem(std::size_t n) : G(n - 1), lower(n - 1), diag(n - 1), upper(n - 1) {}
};

using Assemble = std::function<void(const std::vector<double>& F, TriSystem& sys)>;
using Admissible = std::function<bool(const std::vector<double>& F)>;

struct NewtonOutcome {
    int iterations = 0;
    double residual = 0.0;
};

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double sum_squares(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Thomas algorithm; the system is diagonally dominant near the solution.
std::vector<double> solve_tridiagonal(const TriSystem& s)
{
    const std::size_t n = s.diag.size();
    std::vector<double> c(n), d(n), x(n);
    double b = s.diag[0];
    if (b == 0.0) fail(ErrorCode::SolverSingular, "zero pivot in tridiagonal solve");
    c[0] = s.upper[0] / b;
    d[0] = -s.G[0] / b;
    for (std::size_t i = 1; i < n; ++i) {
        b = s.diag[i] - s.lower[i] * c[i - 1];
        if (b == 0.0) fail(ErrorCode::SolverSingular, "zero pivot in tridiagonal solve");
        c[i] = s.upper[i] / b;
        d[i] = (-s.G[i] - s.lower[i] * d[i - 1]) / b;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

// Damped Newton with Armijo backtracking on |G|^2, damping floor 1e-4.
NewtonOutcome damped_newton(std::vector<double>& F, const Assemble& assemble, const Admissible& admissible)
{
    const std::size_t n = F.size() - 1;
    TriSystem sys(n), trial_sys(n);
    assemble(F, sys);
    NewtonOutcome out;
    out.residual = max_abs(sys.G);
    for (out.iterations = 0; out.iterations < 200; ++out.iterations) {
        if (out.residual <= 1e-10) return out;
        const std::vector<double> step = solve_tridiagonal(sys);
        const double phi = sum_squares(sys.G);
        double t = 1.0;
        bool accepted = false;
        std::vector<double> trial(F);
        while (t >= 1e-4) {
            for (std::size_t i = 0; i + 1 < n; ++i) trial[i + 1] = F[i + 1] + t * step[i];
            if (admissible(trial)) {
                assemble(trial, trial_sys);
                if (sum_squares(trial_sys.G) <= (1.0 - 1e-4 * t) * phi) {
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        const double step_size = max_abs(step);
        if (!accepted) {
            // a full Newton step below rounding counts as convergence
            if (step_size <= 1e-14 * (1.0 + max_abs(F))) return out;
            std::ostringstream os;
            os << "damped Newton stalled with residual " << out.residual;
            fail(ErrorCode::NewtonDiverged, os.str());
        }
        F.swap(trial);
        std::swap(sys, trial_sys);
        out.residual = max_abs(sys.G);
        if (t == 1.0 && step_size <= 1e-14 * (1.0 + max_abs(F))) {
            ++out.iterations;
            return out;
        }
    }
    if (out.residual <= 1e-10) return out;
    std::ostringstream os;
    os << "damped Newton did not converge in 200 iterations, residual " << out.residual;
    fail(ErrorCode::NewtonDiverged, os.str());
}

std::vector<double> linear_guess(std::size_t n, double rho1, double rho2)
{
    std::vector<double> F(n + 1);
    for (std::size_t k = 0; k <= n; ++k) F[k] = rho1 + (rho2 - rho1) * static_cast<double>(k) / static_cast<double>(n);
    F[n] = rho2;
    return F;
}

// First derivative at every node: centered inside, one-sided second order at the ends.
std::vector<double> slope(const std::vector<double>& F, double h)
{
    const std::size_t n = F.size() - 1;
    std::vector<double> d(n + 1);
    for (std::size_t k = 1; k < n; ++k) d[k] = (F[k + 1] - F[k - 1]) / (2.0 * h);
    d[0] = (-3.0 * F[0] + 4.0 * F[1] - F[2]) / (2.0 * h);
    d[n] = (3.0 * F[n] - 4.0 * F[n - 1] + F[n - 2]) / (2.0 * h);
    return d;
}

double xlog_ratio(double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); }

bool interior_in_unit_interval(const std::vector<double>& F)
{
    for (std::size_t k = 1; k + 1 < F.size(); ++k)
        if (!(F[k] > 0.0 && F[k] < 1.0)) return false;
    return true;
}

bool monotone(const std::vector<double>& F, double rho1, double rho2)
{
    const double sign = rho2 > rho1 ? 1.0 : -1.0;
    for (std::size_t k = 0; k + 1 < F.size(); ++k)
        if (!(sign * (F[k + 1] - F[k]) > 0.0)) return false;
    return true;
}

void require_ssep_boundaries(double rho1, double rho2)
{
    for (double r : {rho1, rho2})
        if (!(r >= 0.0 && r <= 1.0)) fail(ErrorCode::DomainViolation, "reservoir densities must lie in [0, 1]");
}

}  // namespace

SsepDensityLdf density_ldf_ssep(double rho1, double rho2, const DensityProfile& profile)
{
    require_ssep_boundaries(rho1, rho2);
    const auto& rho = profile.values;
    if (rho.size() < 5) fail(ErrorCode::GridMismatch, "profile needs at least four intervals");
    for (double v : rho)
        if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::DomainViolation, "profile values must lie in [0, 1]");
    SsepDensityLdf out;
    if (rho1 == rho2) {
        out.value = equilibrium_density_ldf(transport_catalogue("ssep"), rho1, profile);
        out.F.assign(rho.size(), rho1);
        return out;
    }
    const std::size_t n = rho.size() - 1;
    const double h = 1.0 / static_cast<double>(n);
    out.F = linear_guess(n, rho1, rho2);

    auto assemble = [&](const std::vector<double>& F, TriSystem& s) {
        for (std::size_t k = 1; k < n; ++k) {
            const double f = F[k];
            const double d1 = (F[k + 1] - F[k - 1]) / (2.0 * h);
            const double d2 = (F[k + 1] - 2.0 * f + F[k - 1]) / (h * h);
            const double den = f * (1.0 - f);
            const double g = (rho[k] - f) / den;
            const double dg = (-den - (rho[k] - f) * (1.0 - 2.0 * f)) / (den * den);
            s.G[k - 1] = d2 - g * d1 * d1;
            s.lower[k - 1] = 1.0 / (h * h) + g * d1 / h;
            s.upper[k - 1] = 1.0 / (h * h) - g * d1 / h;
            s.diag[k - 1] = -2.0 / (h * h) - dg * d1 * d1;
        }
    };
    const auto result = damped_newton(out.F, assemble, interior_in_unit_interval);
    out.iterations = result.iterations;
    out.residual = result.residual;
    if (!monotone(out.F, rho1, rho2)) fail(ErrorCode::NonMonotoneF, "auxiliary function left the monotone class");

    const std::vector<double> d = slope(out.F, h);
    std::vector<double> integrand(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double F = out.F[k], r = rho[k];
        integrand[k] = xlog_ratio(r, F) + xlog_ratio(1.0 - r, 1.0 - F) + std::log(d[k] / (rho2 - rho1));
    }
    out.value = quad::simpson(integrand, h);
    return out;
}

SsepDensityScgf density_scgf_ssep(double rho1, double rho2, const std::vector<double>& A)
{
    require_ssep_boundaries(rho1, rho2);
    if (A.size() < 5) fail(ErrorCode::GridMismatch, "A needs at least four intervals");
    for (double a : A)
        if (!std::isfinite(a)) fail(ErrorCode::DomainViolation, "A must be finite");
    const std::size_t n = A.size() - 1;
    const double h = 1.0 / static_cast<double>(n);
    std::vector<double> w(n + 1);
    for (std::size_t k = 0; k <= n; ++k) w[k] = std::expm1(A[k]);
    SsepDensityScgf out;
    if (rho1 == rho2) {
        // the constant F solves the equation and the log F' term drops out
        out.F.assign(n + 1, rho1);
        std::vector<double> integrand(n + 1);
        for (std::size_t k = 0; k <= n; ++k) integrand[k] = std::log1p(w[k] * rho1);
        out.value = quad::simpson(integrand, h);
        return out;
    }
    out.F = linear_guess(n, rho1, rho2);
    auto assemble = [&](const std::vector<double>& F, TriSystem& s) {
        for (std::size_t k = 1; k < n; ++k) {
            const double d1 = (F[k + 1] - F[k - 1]) / (2.0 * h);
            const double d2 = (F[k + 1] - 2.0 * F[k] + F[k - 1]) / (h * h);
            const double z = 1.0 + w[k] * F[k];
            const double c = w[k] / z;
            s.G[k - 1] = d2 - c * d1 * d1;
            s.lower[k - 1] = 1.0 / (h * h) + c * d1 / h;
            s.upper[k - 1] = 1.0 / (h * h) - c * d1 / h;
            s.diag[k - 1] = -2.0 / (h * h) + c * c * d1 * d1;
        }
    };
    auto admissible = [&](const std::vector<double>& F) {
        for (std::size_t k = 0; k <= n; ++k)
            if (!(1.0 + w[k] * F[k] > 0.0)) return false;
        return true;
    };
    const auto result = damped_newton(out.F, assemble, admissible);
    out.iterations = result.iterations;
    out.residual = result.residual;
    if (!monotone(out.F, rho1, rho2)) fail(ErrorCode::NonMonotoneF, "auxiliary function left the monotone class");
    const std::vector<double> d = slope(out.F, h);
    std::vector<double> integrand(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        integrand[k] = std::log1p(w[k] * out.F[k]) - std::log(d[k] / (rho2 - rho1));
    out.value = quad::simpson(integrand, h);
    return out;
}

}  // namespace ldtk
