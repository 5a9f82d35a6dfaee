#include "ldtk/mft.hpp"

#include "ldtk/error.hpp"
#include "ldtk/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ldtk {

namespace {

using Fn = std::function<double(double)>;

quad::Options additivity_tolerance()
{
    quad::Options o;
    o.abs_tol = 1e-14;
    o.rel_tol = 1e-13;
    o.max_depth = 50;
    return o;
}

enum class Peak { Lo, Hi, Interior };

// sigma(end) - sigma(end + dir t) for an exact offset t >= 0; short offsets
// integrate sigma' to avoid cancellation.
double sigma_drop(const TransportModel& m, double end, double t, double dir)
{
    if (t > 0.05 * std::max(1.0, std::abs(end))) return m.sigma(end) - m.sigma(end + dir * t);
    const auto& gl = quad::gauss_legendre(10);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        acc += gl.weights[i] * m.dsigma(end + dir * 0.5 * t * (1.0 + gl.nodes[i]));
    return -dir * 0.5 * t * acc;
}

// Integrand of the density and of its gap to the relevant maximum of sigma.
using GapFn = std::function<double(double r, double gap)>;

// Transport data on [lo, hi] = [rho2, rho1] with rho1 > rho2.
struct Span {
    const TransportModel& model;
    double lo;
    double hi;
    double sigma_max = 0.0;
    double arg_max = 0.0;
    Peak peak = Peak::Hi;

    Span(const TransportModel& m, double rho2, double rho1) : model(m), lo(rho2), hi(rho1)
    {
        constexpr int samples = 512;
        int best = 0;
        double best_value = -1.0;
        for (int k = 0; k <= samples; ++k) {
            const double r = lo + (hi - lo) * k / samples;
            const double s = model.sigma(r);
            if (s > best_value) {
                best_value = s;
                best = k;
            }
        }
        if (best == 0 || best == samples) {
            peak = best == 0 ? Peak::Lo : Peak::Hi;
            arg_max = best == 0 ? lo : hi;
            sigma_max = best_value;
            return;
        }
        // sigma' changes sign inside the bracketing cells
        double a = lo + (hi - lo) * (best - 1) / samples;
        double b = lo + (hi - lo) * (best + 1) / samples;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (model.dsigma(mid) > 0.0) a = mid;
            else b = mid;
        }
        arg_max = 0.5 * (a + b);
        sigma_max = model.sigma(arg_max);
        peak = Peak::Interior;
    }

    double K_min() const { return -0.5 / sigma_max; }

    // Integral over [lo, hi] of f(r, sigma_max - sigma(r)), with square-root
    // substitution at the maximum of sigma.
    double integrate_peaked(const GapFn& f) const
    {
        const auto opt = additivity_tolerance();
        auto below = [&](double end) {
            return [&, end](double r, double t) { return f(r, std::max(0.0, sigma_drop(model, end, t, -1.0))); };
        };
        auto above = [&](double end) {
            return [&, end](double r, double t) { return f(r, std::max(0.0, sigma_drop(model, end, t, 1.0))); };
        };
        switch (peak) {
        case Peak::Lo: return quad::integrate_edge_lo(above(lo), lo, hi, opt);
        case Peak::Hi: return quad::integrate_edge_hi(below(hi), lo, hi, opt);
        case Peak::Interior:
            return quad::integrate_edge_hi(below(arg_max), lo, arg_max, opt) +
                   quad::integrate_edge_lo(above(arg_max), arg_max, hi, opt);
        }
        return 0.0;
    }
};

// q and I on the monotonic branch for q > 0.  For K < 0 the profile is
// labelled by u = 1 - K / K_min and 1 + 2 K sigma = (gap + u sigma) / sigma_max.
std::pair<double, double> monotonic_positive(const Span& sp, double K, double u)
{
    const auto& m = sp.model;
    auto root = [&](double s, double gap) {
        if (K >= 0.0) return std::sqrt(1.0 + 2.0 * K * s);
        return std::sqrt((gap + u * s) / sp.sigma_max);
    };
    auto dq = [&](double r, double gap) { return m.D(r) / root(m.sigma(r), gap); };
    auto di = [&](double r, double gap) {
        const double s = m.sigma(r);
        const double w = root(s, gap);
        return m.D(r) * K * K * s / (0.5 * (1.0 + w) * (1.0 + w) * w);
    };
    double q, i;
    if (K < 0.0) {
        q = sp.integrate_peaked(dq);
        i = sp.integrate_peaked(di);
    } else {
        const auto opt = additivity_tolerance();
        q = quad::integrate([&](double r) { return dq(r, 0.0); }, sp.lo, sp.hi, opt);
        i = quad::integrate([&](double r) { return di(r, 0.0); }, sp.lo, sp.hi, opt);
    }
    return {q, q * i};
}

std::pair<double, double> monotonic_positive(const Span& sp, double K)
{
    return monotonic_positive(sp, K, K < 0.0 ? 1.0 - K / sp.K_min() : 1.0);
}

std::pair<double, double> monotonic_u(const Span& sp, double u)
{
    return monotonic_positive(sp, sp.K_min() * (1.0 - u), u);
}

// I(-q) - I(q) = q times the integral of 2 D / sigma, profile by profile.
double reversal_shift(const Span& sp)
{
    const auto& m = sp.model;
    if (!(m.sigma(sp.lo) > 0.0 && m.sigma(sp.hi) > 0.0))
        fail(ErrorCode::QOutOfReach, "reversed currents need sigma > 0 at both boundary densities");
    return quad::integrate([&](double r) { return 2.0 * m.D(r) / m.sigma(r); }, sp.lo, sp.hi, additivity_tolerance());
}

// Non-monotonic profile turning at rho0 beyond the boundary density where
// sigma is largest.
std::pair<double, double> nonmonotonic(const Span& sp, double rho0)
{
    const auto& m = sp.model;
    const auto opt = additivity_tolerance();
    const double s0 = m.sigma(rho0);
    const double K = -0.5 / s0;
    // w^2 = 1 + 2 K sigma = gap / sigma(rho0) with gap = sigma(rho0) - sigma
    auto dq = [&](double r, double gap) { return m.D(r) / std::sqrt(gap / s0); };
    auto di_span = [&](double r, double gap) {
        const double w = std::sqrt(gap / s0);
        return m.D(r) * K * K * m.sigma(r) / (0.5 * (1.0 + w) * (1.0 + w) * w);
    };
    auto di_leg = [&](double r, double gap) {
        const double w = std::sqrt(gap / s0);
        return m.D(r) / m.sigma(r) * 0.5 * (1.0 + w * w) / w;
    };
    const bool up = sp.peak == Peak::Hi;
    const double end = up ? sp.hi : sp.lo;
    const double dir = up ? -1.0 : 1.0;
    const double reach = std::abs(rho0 - end);
    const double base = sigma_drop(m, rho0, reach, dir);  // sigma(rho0) - sigma(end)
    // offsets t are measured from the boundary density on the span, from rho0 on the leg
    auto span = [&](const GapFn& f) {
        auto g = [&](double r, double t) { return f(r, std::max(0.0, base + sigma_drop(m, end, t, dir))); };
        return up ? quad::integrate_edge_hi(g, sp.lo, sp.hi, opt) : quad::integrate_edge_lo(g, sp.lo, sp.hi, opt);
    };
    auto leg = [&](const GapFn& f) {
        auto g = [&](double r, double t) { return f(r, std::max(0.0, sigma_drop(m, rho0, t, dir))); };
        return up ? quad::integrate_edge_hi(g, sp.hi, rho0, opt) : quad::integrate_edge_lo(g, rho0, sp.lo, opt);
    };
    const double q = span(dq) + 2.0 * leg(dq);
    const double i = span(di_span) + 2.0 * leg(di_leg);
    return {q, q * i};
}

// Bisection for a decreasing function on (lo, hi): returns x with f(x) = target.
// Splits geometrically while the bracket spans more than a factor of four.
double solve_decreasing(const Fn& f, double target, double lo, double hi)
{
    for (int it = 0; it < 400; ++it) {
        const bool geometric = lo > 0.0 && hi / lo > 4.0;
        const double mid = geometric ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool nonmonotonic_possible(const Span& sp)
{
    const auto& m = sp.model;
    if (sp.peak == Peak::Hi) return sp.hi < m.hi() && m.dsigma(sp.hi) > 0.0;
    if (sp.peak == Peak::Lo) return sp.lo > m.lo() && m.dsigma(sp.lo) < 0.0;
    return false;
}

// Solve q(rho0) = q on the non-monotonic branch; nullopt-like flag when out of range.
bool solve_nonmonotonic(const Span& sp, double q, RateFunctionBranch& out)
{
    const auto& m = sp.model;
    const bool up = sp.peak == Peak::Hi;
    const double start = up ? sp.hi : sp.lo;
    const double limit = up ? m.hi() : m.lo();
    auto q_at = [&](double rho0) { return nonmonotonic(sp, rho0).first; };
    auto inside = [&](double r) {
        // sigma must stay largest at the turning density
        return m.sigma(r) > sp.sigma_max;
    };
    // distance beyond the boundary density
    double d_lo = 0.0;
    double d_hi = std::isfinite(limit) ? std::abs(limit - start) * (1.0 - 1e-12) : std::max(1.0, std::abs(start));
    auto at = [&](double d) { return up ? start + d : start - d; };
    int grow = 0;
    while (!(inside(at(d_hi)) && q_at(at(d_hi)) > q)) {
        if (!std::isfinite(limit) && grow < 200) {
            d_hi *= 2.0;
            ++grow;
            continue;
        }
        return false;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (d_lo + d_hi);
        if (mid <= d_lo || mid >= d_hi) break;
        if (!inside(at(mid)) || q_at(at(mid)) < q) d_lo = mid;
        else d_hi = mid;
    }
    const double rho0 = at(0.5 * (d_lo + d_hi));
    const auto [qq, ii] = nonmonotonic(sp, rho0);
    out.parameter = rho0;
    out.rho0 = rho0;
    out.q = qq;
    out.I = ii;
    out.branch = "nonmonotonic";
    return true;
}

RateFunctionBranch rate_ordered(const TransportModel& model, double rho1, double rho2, double q)
{
    const Span sp(model, rho2, rho1);
    const double j = steady_current(model, rho1, rho2);
    RateFunctionBranch out;
    out.branch = "monotonic";
    out.rho0 = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(q - j) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(j)) {
        out.q = q;
        return out;
    }
    if (q == 0.0) {
        auto f = [&](double r) { return model.D(r) / std::sqrt(model.sigma(r)); };
        const auto opt = additivity_tolerance();
        const double c = quad::integrate_sqrt_both(f, sp.lo, sp.hi, opt);
        out.parameter = std::numeric_limits<double>::infinity();
        out.I = 0.5 * c * c;
        return out;
    }
    if (q < 0.0) {
        const double shift = reversal_shift(sp);
        RateFunctionBranch b = rate_ordered(model, rho1, rho2, -q);
        b.q = -b.q;
        b.I -= b.q * shift;
        return b;
    }

    bool have_monotonic = false;
    if (q < j) {
        auto qk = [&](double K) { return monotonic_positive(sp, K).first; };
        double hi = 1.0;
        while (qk(hi) > q) {
            hi *= 2.0;
            if (hi > 1e300) fail(ErrorCode::BranchUnavailable, "current too small to bracket");
        }
        const double K = solve_decreasing(qk, q, 0.0, hi);
        const auto [qq, ii] = monotonic_positive(sp, K);
        out.parameter = K;
        out.q = qq;
        out.I = ii;
        return out;
    }

    // q > j: K in (K_min, 0), written as K = K_min (1 - u), u in (0, 1]
    const double kmin = sp.K_min();
    auto qu = [&](double u) { return monotonic_u(sp, u).first; };
    const double saturation = sp.peak == Peak::Interior ? std::numeric_limits<double>::infinity() : qu(0.0);
    if (q < saturation) {
        double lo = 1e-300;
        if (sp.peak == Peak::Interior) {
            lo = 0.5;
            while (qu(lo) < q && lo > 1e-13) lo *= 1e-2;
            if (qu(lo) < q) fail(ErrorCode::BranchUnavailable, "current beyond the resolvable monotonic range");
        }
        const double u = solve_decreasing(qu, q, lo, 1.0);
        const auto [qq, ii] = monotonic_u(sp, u);
        out.parameter = kmin * (1.0 - u);
        out.q = qq;
        out.I = ii;
        have_monotonic = true;
    }
    RateFunctionBranch alt;
    const bool have_alt = nonmonotonic_possible(sp) && q > saturation && solve_nonmonotonic(sp, q, alt);
    if (have_alt && (!have_monotonic || alt.I < out.I)) return alt;
    if (have_monotonic) return out;
    std::ostringstream os;
    os << "no additivity branch reaches q = " << q;
    fail(ErrorCode::BranchUnavailable, os.str());
}

}  // namespace

RateFunctionBranch additivity_from_K(const TransportModel& model, double rho1, double rho2, double K,
                                     bool negative_current)
{
    model.require_domain(rho1, "rho1");
    model.require_domain(rho2, "rho2");
    if (!(rho1 > rho2)) fail(ErrorCode::DomainViolation, "parametric form needs rho1 > rho2");
    const Span sp(model, rho2, rho1);
    RateFunctionBranch out;
    out.branch = "monotonic";
    out.parameter = K;
    out.rho0 = std::numeric_limits<double>::quiet_NaN();
    if (K < sp.K_min()) fail(ErrorCode::BranchUnavailable, "K below -1/(2 max sigma)");
    const auto [q, i] = monotonic_positive(sp, K);
    out.q = q;
    out.I = i;
    if (negative_current) {
        out.q = -q;
        out.I += q * reversal_shift(sp);
    }
    return out;
}

RateFunctionBranch additivity_from_rho0(const TransportModel& model, double rho1, double rho2, double rho0)
{
    model.require_domain(rho1, "rho1");
    model.require_domain(rho2, "rho2");
    model.require_domain(rho0, "rho0");
    if (!(rho1 > rho2)) fail(ErrorCode::DomainViolation, "parametric form needs rho1 > rho2");
    const Span sp(model, rho2, rho1);
    if (!nonmonotonic_possible(sp) || (sp.peak == Peak::Hi && rho0 <= rho1) || (sp.peak == Peak::Lo && rho0 >= rho2) ||
        !(model.sigma(rho0) > sp.sigma_max))
        fail(ErrorCode::BranchUnavailable, "no non-monotonic profile turns at this density");
    const auto [q, i] = nonmonotonic(sp, rho0);
    RateFunctionBranch out;
    out.parameter = rho0;
    out.rho0 = rho0;
    out.q = q;
    out.I = i;
    out.branch = "nonmonotonic";
    return out;
}

RateFunctionBranch additivity_rate_function(const TransportModel& model, double rho1, double rho2, double q)
{
    model.require_domain(rho1, "rho1");
    model.require_domain(rho2, "rho2");
    if (rho1 == rho2) {
        if (q == 0.0) return RateFunctionBranch{0.0, 0.0, 0.0, "monotonic", std::numeric_limits<double>::quiet_NaN()};
        fail(ErrorCode::BranchUnavailable, "equal reservoir densities: only q = 0 is covered");
    }
    if (rho1 < rho2) {
        // mirror x -> 1 - x reverses the current
        RateFunctionBranch b = rate_ordered(model, rho2, rho1, -q);
        b.q = -b.q;
        return b;
    }
    return rate_ordered(model, rho1, rho2, q);
}

AdditivityCurve additivity_curve(const TransportModel& model, double rho1, double rho2, const std::vector<double>& qs,
                                 bool convex_envelope)
{
    AdditivityCurve c;
    for (double q : qs) c.samples.push_back(additivity_rate_function(model, rho1, rho2, q));
    if (!convex_envelope || c.samples.size() < 3) return c;
    c.envelope_applied = true;
    // lower hull of (q, I), then interpolate back onto the sample points
    std::vector<std::size_t> hull;
    for (std::size_t k = 0; k < c.samples.size(); ++k) {
        while (hull.size() >= 2) {
            const auto& a = c.samples[hull[hull.size() - 2]];
            const auto& b = c.samples[hull.back()];
            const auto& p = c.samples[k];
            const double cross = (b.q - a.q) * (p.I - a.I) - (b.I - a.I) * (p.q - a.q);
            if (cross <= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(k);
    }
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const auto& a = c.samples[hull[h]];
        const auto& b = c.samples[hull[h + 1]];
        for (std::size_t k = hull[h] + 1; k < hull[h + 1]; ++k) {
            auto& p = c.samples[k];
            const double v = a.I + (b.I - a.I) * (p.q - a.q) / (b.q - a.q);
            if (v < p.I - 1e-12) {
                p.I = v;
                p.branch = "envelope";
                c.envelope_changed = true;
            }
        }
    }
    return c;
}

double additivity_variational(const TransportModel& model, double rho1, double rho2, double q, std::size_t cells)
{
    model.require_domain(rho1, "rho1");
    model.require_domain(rho2, "rho2");
    if (cells < 4) fail(ErrorCode::DomainViolation, "need at least 4 cells");
    const std::size_t n = cells;
    const double h = 1.0 / static_cast<double>(n);
    const double floor = model.lo() + 1e-12;
    const double ceil = std::isfinite(model.hi()) ? model.hi() - 1e-12 : model.hi();

    auto dD = [&](double r) {
        const double e = 1e-6 * std::max(1.0, std::abs(r));
        const double a = std::max(model.lo(), r - e), b = std::min(model.hi(), r + e);
        return (model.D(b) - model.D(a)) / (b - a);
    };
    auto energy = [&](const Eigen::VectorXd& rho) {
        double e = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double m = 0.5 * (rho(c) + rho(c + 1));
            const double u = q + model.D(m) * (rho(c + 1) - rho(c)) / h;
            e += h * u * u / (2.0 * model.sigma(m));
        }
        return e;
    };
    // gradient with respect to the interior values rho(1..n-1)
    auto gradient = [&](const Eigen::VectorXd& rho) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
        for (std::size_t c = 0; c < n; ++c) {
            const double m = 0.5 * (rho(c) + rho(c + 1));
            const double d = rho(c + 1) - rho(c);
            const double D = model.D(m), Dp = dD(m);
            const double s = model.sigma(m), sp = model.dsigma(m);
            const double u = q + D * d / h;
            const double common = h * (u * 0.5 * Dp * d / h / s - u * u * sp / (4.0 * s * s));
            g(c + 1) += common + u * D / s;
            g(c) += common - u * D / s;
        }
        return Eigen::VectorXd(g.segment(1, static_cast<Eigen::Index>(n - 1)));
    };

    Eigen::VectorXd rho(static_cast<Eigen::Index>(n + 1));
    for (std::size_t k = 0; k <= n; ++k) rho(k) = rho1 + (rho2 - rho1) * static_cast<double>(k) * h;
    const std::size_t N = n - 1;
    double e = energy(rho);
    for (int it = 0; it < 200; ++it) {
        const Eigen::VectorXd g = gradient(rho);
        if (g.cwiseAbs().maxCoeff() < 1e-13) break;
        // tridiagonal Hessian from three colored gradient differences
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
        const double eps = 1e-6;
        for (std::size_t color = 0; color < 3; ++color) {
            Eigen::VectorXd pert = rho;
            for (std::size_t i = color; i < N; i += 3) pert(i + 1) += eps;
            const Eigen::VectorXd gp = gradient(pert);
            for (std::size_t i = color; i < N; i += 3)
                for (std::size_t r = (i ? i - 1 : 0); r <= std::min(N - 1, i + 1); ++r) H(r, i) = (gp(r) - g(r)) / eps;
        }
        H = 0.5 * (H + H.transpose());
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        Eigen::VectorXd step;
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) step = -ldlt.solve(g);
        else step = -g;
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            Eigen::VectorXd trial = rho;
            for (std::size_t i = 0; i < N; ++i) trial(i + 1) = std::clamp(rho(i + 1) + t * step(i), floor, ceil);
            const double et = energy(trial);
            if (et <= e) {
                moved = et < e || t == 1.0;
                rho = trial;
                e = et;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;
    }
    return e;
}

AdditivityCumulants additivity_cumulants(const TransportModel& model, double rho1, double rho2, int order)
{
    model.require_domain(rho1, "rho1");
    model.require_domain(rho2, "rho2");
    if (order < 1 || order > 3) fail(ErrorCode::DomainViolation, "cumulant order must be 1, 2 or 3");
    AdditivityCumulants c;
    const auto opt = additivity_tolerance();
    for (int k = 1; k <= order; ++k)
        c.S.push_back(quad::integrate(
            [&](double r) { return std::pow(model.sigma(r), k - 1) * model.D(r); }, rho2, rho1, opt));
    const double S1 = c.S[0];
    c.cumulants.push_back(S1);
    c.mu_coefficients.push_back(S1);
    if (order >= 2) {
        c.cumulants.push_back(c.S[1] / S1);
        c.mu_coefficients.push_back(c.S[1] / (2.0 * S1));
    }
    if (order >= 3) {
        const double a3 = (S1 * c.S[2] - c.S[1] * c.S[1]) / (2.0 * S1 * S1 * S1);
        c.cumulants.push_back(6.0 * a3);
        c.mu_coefficients.push_back(a3);
    }
    return c;
}

RingInstability ring_instability_threshold(const TransportModel& model, double rho_bar)
{
    model.require_domain(rho_bar, "rho_bar");
    RingInstability r;
    const double s2 = model.d2sigma(rho_bar);
    if (!(s2 > 0.0)) return r;
    const double s = model.sigma(rho_bar), D = model.D(rho_bar);
    r.stable = false;
    r.q_c = std::sqrt(8.0 * std::numbers::pi * std::numbers::pi * s * D * D / s2);
    r.v_opt = r.q_c * model.dsigma(rho_bar) / s;
    return r;
}

double ring_mode_coefficient(const TransportModel& model, double rho_bar, double q, double v, double eps)
{
    model.require_domain(rho_bar, "rho_bar");
    constexpr int points = 64;
    const double sb = model.sigma(rho_bar);
    const auto& gl = quad::gauss_legendre(10);
    double acc = 0.0;
    for (int k = 0; k < points; ++k) {
        const double th = 2.0 * std::numbers::pi * k / points;
        const double S = std::sin(th), C = std::cos(th);
        const double rho = rho_bar + eps * S;
        // sigma(rho) - sigma(rho_bar) as the integral of sigma', free of cancellation
        double ds = 0.0;
        const double half = 0.5 * (rho - rho_bar), mid = 0.5 * (rho + rho_bar);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) ds += gl.weights[i] * model.dsigma(mid + half * gl.nodes[i]);
        ds *= half;
        const double u = eps * v * S + model.D(rho) * 2.0 * std::numbers::pi * eps * C;
        acc += (sb * u * (u + 2.0 * q) - q * q * ds) / (2.0 * (sb + ds) * sb);
    }
    return acc / points / (eps * eps);
}

RingInstability ring_instability_scan(const TransportModel& model, double rho_bar, double eps)
{
    // the coefficient is exactly quadratic in v
    auto minimum = [&](double q) {
        const double s = std::max(1.0, q);
        const double c0 = ring_mode_coefficient(model, rho_bar, q, 0.0, eps);
        const double cp = ring_mode_coefficient(model, rho_bar, q, s, eps);
        const double cm = ring_mode_coefficient(model, rho_bar, q, -s, eps);
        const double a = (cp + cm - 2.0 * c0) / (2.0 * s * s);
        const double b = (cp - cm) / (2.0 * s);
        return std::pair{c0 - b * b / (4.0 * a), -b / (2.0 * a)};
    };
    RingInstability r;
    double lo = 0.0, hi = 1.0;
    while (minimum(hi).first > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) return r;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (minimum(mid).first > 0.0) lo = mid;
        else hi = mid;
    }
    r.stable = false;
    r.q_c = 0.5 * (lo + hi);
    r.v_opt = minimum(r.q_c).second;
    return r;
}

}  // namespace ldtk
