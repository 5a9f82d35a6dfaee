#include "ldtk/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <vector>
#include <stdexcept>

namespace ldtk::quad {

namespace {

Rule make_rule(int n)
{
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

double panel(const Integrand& f, double a, double b)
{
    const Rule& r = gauss_legendre(10);
    double c = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
    return s * h;
}

struct Piece {
    double a, b, halves, err;
    int depth;
    bool operator<(const Piece& o) const { return err < o.err; }
};

Piece make_piece(const Integrand& f, double a, double b, double whole, int depth)
{
    const double m = 0.5 * (a + b);
    const double halves = panel(f, a, m) + panel(f, m, b);
    return {a, b, halves, std::abs(halves - whole), depth};
}

}  // namespace

const Rule& gauss_legendre(int n)
{
    static std::mutex mu;
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

double integrate(const Integrand& f, double a, double b, const Options& opt)
{
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, opt);
    // Global adaptive refinement: split the panel with the largest error
    // estimate until the summed estimate meets the tolerance.  Eight seed
    // panels keep narrow features from being missed.
    const int seeds = 8;
    const double h = (b - a) / seeds;
    std::priority_queue<Piece> open;
    std::vector<Piece> done;
    double total = 0.0, err = 0.0;
    for (int i = 0; i < seeds; ++i) {
        const double lo = a + i * h, hi = (i + 1 == seeds) ? b : a + (i + 1) * h;
        Piece p = make_piece(f, lo, hi, panel(f, lo, hi), 0);
        total += p.halves;
        err += p.err;
        open.push(p);
    }
    int splits = 0;
    while (!open.empty() && err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) && splits < opt.max_panels) {
        Piece p = open.top();
        open.pop();
        const double m = 0.5 * (p.a + p.b);
        if (p.depth >= opt.max_depth || m <= p.a || m >= p.b) {
            done.push_back(p);
            continue;
        }
        Piece l = make_piece(f, p.a, m, panel(f, p.a, m), p.depth + 1);
        Piece r = make_piece(f, m, p.b, panel(f, m, p.b), p.depth + 1);
        total += l.halves + r.halves - p.halves;
        err += l.err + r.err - p.err;
        open.push(l);
        open.push(r);
        ++splits;
    }
    // re-sum to shed the drift of the running total
    double sum = 0.0;
    for (const auto& p : done) sum += p.halves;
    while (!open.empty()) {
        sum += open.top().halves;
        open.pop();
    }
    return sum;
}

double integrate_sqrt_lo(const Integrand& f, double a, double b, const Options& opt)
{
    if (a == b) return 0.0;
    if (a > b) return -integrate_sqrt_hi(f, b, a, opt);
    double wmax = std::sqrt(b - a);
    return integrate(
        [&](double w) {
            double x = a + w * w;
            if (x == a) x = std::nextafter(a, b);  // keep off the singular endpoint
            return 2.0 * w * f(x);
        },
        0.0, wmax, opt);
}

double integrate_sqrt_hi(const Integrand& f, double a, double b, const Options& opt)
{
    if (a == b) return 0.0;
    if (a > b) return -integrate_sqrt_lo(f, b, a, opt);
    double wmax = std::sqrt(b - a);
    return integrate(
        [&](double w) {
            double x = b - w * w;
            if (x == b) x = std::nextafter(b, a);
            return 2.0 * w * f(x);
        },
        0.0, wmax, opt);
}

double integrate_edge_lo(const EdgeIntegrand& f, double a, double b, const Options& opt)
{
    if (a == b) return 0.0;
    if (a > b) return -integrate_edge_hi(f, b, a, opt);
    return integrate([&](double w) { return 2.0 * w * f(a + w * w, w * w); }, 0.0, std::sqrt(b - a), opt);
}

double integrate_edge_hi(const EdgeIntegrand& f, double a, double b, const Options& opt)
{
    if (a == b) return 0.0;
    if (a > b) return -integrate_edge_lo(f, b, a, opt);
    return integrate([&](double w) { return 2.0 * w * f(b - w * w, w * w); }, 0.0, std::sqrt(b - a), opt);
}

double integrate_sqrt_both(const Integrand& f, double a, double b, const Options& opt)
{
    double m = 0.5 * (a + b);
    return integrate_sqrt_lo(f, a, m, opt) + integrate_sqrt_hi(f, m, b, opt);
}

double simpson(std::span<const double> y, double h)
{
    std::size_t n = y.size();
    if (n < 2) return 0.0;
    std::size_t intervals = n - 1;
    if (intervals == 1) return 0.5 * h * (y[0] + y[1]);
    auto simpson_even = [&](std::size_t first, std::size_t count) {
        double s = y[first] + y[first + count];
        for (std::size_t k = 1; k < count; ++k) s += (k % 2 ? 4.0 : 2.0) * y[first + k];
        return s * h / 3.0;
    };
    if (intervals % 2 == 0) return simpson_even(0, intervals);
    std::size_t m = intervals - 3;
    double head = m > 0 ? simpson_even(0, m) : 0.0;
    double tail = 3.0 * h / 8.0 * (y[m] + 3.0 * y[m + 1] + 3.0 * y[m + 2] + y[m + 3]);
    return head + tail;
}

}  // namespace ldtk::quad
