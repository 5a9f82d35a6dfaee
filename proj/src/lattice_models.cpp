#include "ldtk/lattice_models.hpp"

#include "ldtk/error.hpp"
#include "ldtk/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace ldtk {

namespace {

constexpr int max_open_sites = 20;
constexpr std::size_t max_states = std::size_t{1} << 20;

bool nonneg(double x) { return x >= 0.0 && std::isfinite(x); }

}  // namespace

void SsepParams::validate() const
{
    if (L < 1) fail(ErrorCode::IndexOutOfRange, "L must be at least 1");
    if (!nonneg(r)) fail(ErrorCode::NegativeRate, "asymmetry r must be nonnegative");
    if (geometry == Geometry::Open) {
        if (!nonneg(alpha) || !nonneg(gamma) || !nonneg(beta) || !nonneg(delta))
            fail(ErrorCode::NegativeRate, "boundary rates must be nonnegative");
        if (alpha <= 0.0 && delta <= 0.0) fail(ErrorCode::NegativeRate, "open chain needs alpha > 0 or delta > 0");
        if (L > max_open_sites) {
            std::ostringstream os;
            os << "open chain with L = " << L << " exceeds 2^" << max_open_sites << " states";
            fail(ErrorCode::TooLarge, os.str());
        }
    } else {
        if (L < 2) fail(ErrorCode::IndexOutOfRange, "ring needs L >= 2");
        if (n_particles < 0 || n_particles > L) fail(ErrorCode::IndexOutOfRange, "particle number outside [0, L]");
    }
}

SsepParams ssep_open(int L, double alpha, double gamma, double beta, double delta, double r)
{
    SsepParams p;
    p.L = L;
    p.alpha = alpha;
    p.gamma = gamma;
    p.beta = beta;
    p.delta = delta;
    p.r = r;
    return p;
}

SsepParams ssep_ring(int L, int n_particles, double r)
{
    SsepParams p;
    p.L = L;
    p.r = r;
    p.geometry = Geometry::Ring;
    p.n_particles = n_particles;
    return p;
}

std::vector<std::uint32_t> ring_states(int L, int n_particles)
{
    std::vector<std::uint32_t> states;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << L); ++s)
        if (std::popcount(s) == n_particles) states.push_back(s);
    return states;
}

namespace {

MarkovGenerator open_generator(const SsepParams& p)
{
    const int L = p.L;
    const bool entropy = p.alpha > 0 && p.gamma > 0 && p.beta > 0 && p.delta > 0 && (L == 1 || p.r > 0);
    std::vector<std::string> names{"left", "right"};
    if (entropy) names.push_back("entropy");
    const std::size_t n = std::size_t{1} << L;
    GeneratorBuilder b(n, names);
    double e_left = entropy ? std::log(p.alpha / p.gamma) : 0.0;
    double e_right = entropy ? std::log(p.beta / p.delta) : 0.0;
    double e_hop = entropy && L > 1 ? -std::log(p.r) : 0.0;
    std::vector<double> inc(names.size());
    auto push = [&](std::size_t from, std::size_t to, double rate, double ql, double qr, double s) {
        if (rate <= 0.0) return;
        inc[0] = ql;
        inc[1] = qr;
        if (entropy) inc[2] = s;
        b.add(from, to, rate, inc);
    };
    const std::size_t first = 1, last = std::size_t{1} << (L - 1);
    for (std::size_t s = 0; s < n; ++s) {
        if (s & first)
            push(s, s ^ first, p.gamma, -1, 0, -e_left);
        else
            push(s, s | first, p.alpha, +1, 0, e_left);
        for (int i = 0; i + 1 < L; ++i) {
            std::size_t here = std::size_t{1} << i, next = here << 1;
            bool a = s & here, c = s & next;
            if (a && !c) push(s, s ^ here ^ next, 1.0, 0, 0, e_hop);
            if (!a && c) push(s, s ^ here ^ next, p.r, 0, 0, -e_hop);
        }
        if (s & last)
            push(s, s ^ last, p.beta, 0, +1, e_right);
        else
            push(s, s | last, p.delta, 0, -1, -e_right);
    }
    return b.build();
}

MarkovGenerator ring_generator(const SsepParams& p)
{
    const int L = p.L;
    double count = 1.0;
    for (int k = 0; k < p.n_particles; ++k) count = count * (L - k) / (k + 1);
    if (count > static_cast<double>(max_states) || L > 31)
        fail(ErrorCode::TooLarge, "ring sector exceeds 2^20 states");
    auto states = ring_states(L, p.n_particles);
    std::vector<std::int32_t> index(std::size_t{1} << L, -1);
    for (std::size_t k = 0; k < states.size(); ++k) index[states[k]] = static_cast<std::int32_t>(k);
    const bool entropy = p.r > 0;
    std::vector<std::string> names{"bond"};
    if (entropy) names.push_back("entropy");
    double e_hop = entropy ? -std::log(p.r) : 0.0;
    GeneratorBuilder b(states.size(), names);
    std::vector<double> inc(names.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        auto s = states[k];
        for (int i = 0; i < L; ++i) {
            int j = (i + 1) % L;
            std::uint32_t here = 1u << i, next = 1u << j;
            bool a = s & here, c = s & next;
            double bond = (i == L - 1) ? 1.0 : 0.0;
            if (a && !c) {
                inc[0] = bond;
                if (entropy) inc[1] = e_hop;
                b.add(k, index[s ^ here ^ next], 1.0, inc);
            }
            if (!a && c && p.r > 0) {
                inc[0] = -bond;
                if (entropy) inc[1] = -e_hop;
                b.add(k, index[s ^ here ^ next], p.r, inc);
            }
        }
    }
    return b.build();
}

}  // namespace

MarkovGenerator ssep_generator(const SsepParams& params)
{
    params.validate();
    return params.geometry == Geometry::Open ? open_generator(params) : ring_generator(params);
}

MarkovGenerator quantum_dot_generator(double alpha, double gamma, double beta, double delta)
{
    return ssep_generator(ssep_open(1, alpha, gamma, beta, delta));
}

double quantum_dot_scgf(double alpha, double gamma, double beta, double delta, double lambda)
{
    double s = alpha + beta + gamma + delta;
    double disc = s * s + 4.0 * (-std::expm1(-lambda)) * (alpha * beta * std::exp(lambda) - gamma * delta);
    return 0.5 * (std::sqrt(disc) - s);
}

MarkovGenerator multi_bath_two_level(double gap, const std::vector<double>& temperatures,
                                     const std::vector<double>& couplings)
{
    if (temperatures.size() != couplings.size() || temperatures.empty())
        fail(ErrorCode::DimensionMismatch, "one coupling per bath temperature");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < temperatures.size(); ++i) names.push_back("heat" + std::to_string(i + 1));
    GeneratorBuilder b(2, names);
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        if (!(temperatures[i] > 0.0)) fail(ErrorCode::DomainViolation, "bath temperatures must be positive");
        std::vector<double> inc(names.size(), 0.0);
        inc[i] = gap;
        b.add(0, 1, couplings[i] * std::exp(-gap / temperatures[i]), inc);
        inc[i] = -gap;
        b.add(1, 0, couplings[i], inc);
    }
    return b.build();
}

double boundary_symmetry_partner(const SsepParams& p, double lambda)
{
    return -lambda + std::log(p.gamma * p.delta / (p.alpha * p.beta)) + (p.L - 1) * std::log(p.r);
}

namespace {

void require_open_symmetric(const SsepParams& p)
{
    p.validate();
    if (p.geometry != Geometry::Open || p.r != 1.0)
        fail(ErrorCode::DomainViolation, "exact formulas need an open chain with r = 1");
    if (p.beta + p.delta <= 0.0) fail(ErrorCode::DomainViolation, "exact formulas need beta + delta > 0");
}

}  // namespace

SsepSteadyState ssep_steady_statistics(const SsepParams& p)
{
    require_open_symmetric(p);
    const double a = p.a(), b = p.b(), r1 = p.rho1(), r2 = p.rho2();
    const double den = p.L + a + b - 1.0;
    SsepSteadyState st;
    for (int i = 1; i <= p.L; ++i) st.profile.push_back((r1 * (p.L - i + b) + r2 * (i + a - 1.0)) / den);
    st.current = (r1 - r2) / den;
    return st;
}

double ssep_two_point(const SsepParams& p, int i, int j)
{
    require_open_symmetric(p);
    if (!(1 <= i && i < j && j <= p.L)) {
        std::ostringstream os;
        os << "need 1 <= i < j <= L, got (" << i << ", " << j << ")";
        fail(ErrorCode::IndexOrder, os.str());
    }
    const double a = p.a(), b = p.b(), d = p.rho1() - p.rho2(), L = p.L;
    const double s1 = L + a + b - 1.0, s2 = L + a + b - 2.0;
    return -d * d * (i + a - 1.0) * (L + b - j) / (s1 * s1 * s2);
}

double ssep_three_point(const SsepParams& p, int i, int j, int k)
{
    require_open_symmetric(p);
    if (!(1 <= i && i < j && j < k && k <= p.L)) {
        std::ostringstream os;
        os << "need 1 <= i < j < k <= L, got (" << i << ", " << j << ", " << k << ")";
        fail(ErrorCode::IndexOrder, os.str());
    }
    const double a = p.a(), b = p.b(), d = p.rho1() - p.rho2(), L = p.L;
    const double s1 = L + a + b - 1.0, s2 = L + a + b - 2.0, s3 = L + a + b - 3.0;
    return -2.0 * d * d * d * (i + a - 1.0) * (L + 1.0 + b - a - 2.0 * j) * (L + b - k) /
           (s1 * s1 * s1 * s2 * s3);
}

std::vector<double> ssep_correlations_exact(const SsepParams& params, const std::vector<std::vector<int>>& indices)
{
    std::vector<double> out;
    for (const auto& idx : indices) {
        if (idx.size() == 2)
            out.push_back(ssep_two_point(params, idx[0], idx[1]));
        else if (idx.size() == 3)
            out.push_back(ssep_three_point(params, idx[0], idx[1], idx[2]));
        else
            fail(ErrorCode::IndexOrder, "correlation index tuples need 2 or 3 entries");
    }
    return out;
}

// ---------------------------------------------------------------------------

ZrpRates ZrpRates::independent()
{
    ZrpRates z;
    z.kind_ = Kind::Independent;
    return z;
}

ZrpRates ZrpRates::constant(double c) { return table({c}); }

ZrpRates ZrpRates::table(std::vector<double> u)
{
    if (u.empty()) fail(ErrorCode::DimensionMismatch, "zero-range rate table is empty");
    for (double x : u)
        if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::NegativeRate, "zero-range rates must be positive");
    ZrpRates z;
    z.kind_ = Kind::Table;
    z.table_ = std::move(u);
    return z;
}

double ZrpRates::u(long n) const
{
    if (n < 1) return 0.0;
    if (kind_ == Kind::Independent) return static_cast<double>(n);
    return table_[std::min<std::size_t>(static_cast<std::size_t>(n - 1), table_.size() - 1)];
}

double ZrpRates::log_weight(long n) const
{
    if (kind_ == Kind::Independent) return -std::lgamma(static_cast<double>(n) + 1.0);
    double s = 0.0;
    long head = std::min<long>(n, static_cast<long>(table_.size()));
    for (long k = 1; k <= head; ++k) s -= std::log(table_[k - 1]);
    if (n > head) s -= (n - head) * std::log(table_.back());
    return s;
}

std::string ZrpRates::describe() const
{
    if (kind_ == Kind::Independent) return "u(n)=n";
    std::ostringstream os;
    os << "u=[";
    for (std::size_t i = 0; i < table_.size(); ++i) os << (i ? "," : "") << table_[i];
    os << "]";
    return os.str();
}

namespace {

struct Moments {
    double log_z0 = 0.0;  // log Z
    double mean = 0.0;
    double var = 0.0;
    long terms = 0;
};

constexpr long zrp_cap = 10000;

// Moments of m under weights v(m) z^m; nullopt-like flag when the series does
// not settle inside the cap.
bool zrp_moments(const ZrpRates& rates, double log_z, Moments& out)
{
    // Locate the largest log-term to scale the sum.
    std::vector<double> lt;
    lt.reserve(256);
    double lv = 0.0, peak = -std::numeric_limits<double>::infinity();
    for (long m = 0; m <= zrp_cap; ++m) {
        if (m > 0) lv -= std::log(rates.u(m));
        double t = lv + m * log_z;
        lt.push_back(t);
        peak = std::max(peak, t);
        if (m > 0 && t < lt[m - 1]) {
            // Terms now decrease; ratio of the next step bounds the tail geometrically.
            double ratio = std::exp(log_z - std::log(rates.u(m + 1)));
            double tail = ratio < 1.0 ? std::exp(t - peak) * ratio / (1.0 - ratio) : 1.0;
            if (ratio < 1.0 && tail < 1e-16) break;
        }
        if (m == zrp_cap) return false;
    }
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t m = 0; m < lt.size(); ++m) {
        double w = std::exp(lt[m] - peak);
        s0 += w;
        s1 += m * w;
        s2 += double(m) * double(m) * w;
    }
    out.log_z0 = peak + std::log(s0);
    out.mean = s1 / s0;
    double var = 0.0;
    for (std::size_t m = 0; m < lt.size(); ++m) {
        double dm = m - out.mean;
        var += dm * dm * std::exp(lt[m] - peak);
    }
    out.var = var / s0;
    out.terms = static_cast<long>(lt.size());
    return true;
}

}  // namespace

double zrp_density(const ZrpRates& rates, double z)
{
    Moments mo;
    if (!(z > 0.0) || !zrp_moments(rates, std::log(z), mo))
        fail(ErrorCode::OutsideConvergence, "fugacity outside the radius of convergence");
    return mo.mean;
}

ZrpState zrp_thermodynamics(const ZrpRates& rates, double rho)
{
    if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorCode::DomainViolation, "zero-range density must be positive");
    // Bracket y = log z with density(y) increasing.
    Moments mo;
    double lo = std::log(rho) - std::log(rates.u(1)), hi = lo;
    auto dens = [&](double y, Moments& m) { return zrp_moments(rates, y, m) ? m.mean : std::numeric_limits<double>::infinity(); };
    while (dens(lo, mo) > rho) lo -= 1.0;
    double step = 0.5;
    hi = lo + step;
    while (true) {
        double d = dens(hi, mo);
        if (d >= rho) break;
        if (!std::isfinite(d)) break;
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if (step > 1e3) fail(ErrorCode::OutsideConvergence, "density unreachable");
    }
    // Pull hi back inside the convergence region if it stepped over.
    while (!std::isfinite(dens(hi, mo))) {
        double mid = 0.5 * (lo + hi);
        if (dens(mid, mo) >= rho) {
            hi = mid;
            break;
        }
        if (hi - lo < 1e-14) {
            std::ostringstream os;
            os.precision(17);
            os << "density " << rho << " lies beyond the convergence radius of the zero-range series";
            fail(ErrorCode::OutsideConvergence, os.str());
        }
        lo = mid;
    }
    // Safeguarded Newton in y: d rho / d y = Var.
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double d = dens(y, mo);
        double g = d - rho;
        if (std::abs(g) <= 1e-13 * rho) break;
        if (g > 0)
            hi = y;
        else
            lo = y;
        double next = y - g / mo.var;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - y) < 1e-16) break;
        y = next;
    }
    if (!zrp_moments(rates, y, mo) || std::abs(mo.mean - rho) > 1e-10 * std::max(1.0, rho)) {
        std::ostringstream os;
        os.precision(17);
        os << "density " << rho << " not reached inside the convergence radius (closest " << mo.mean << ")";
        fail(ErrorCode::OutsideConvergence, os.str());
    }
    ZrpState st;
    st.rho = rho;
    st.z = std::exp(y);
    st.df = y;
    st.f = rho * y - mo.log_z0;
    st.d2f = 1.0 / mo.var;
    st.D = st.d2f * st.z;
    st.sigma = 2.0 * st.z;
    st.n_terms = mo.terms;
    return st;
}

// ---------------------------------------------------------------------------

TransportModel::TransportModel(Spec spec) : s_(std::move(spec)) {}

double TransportModel::df(double rho) const
{
    if (s_.df) return s_.df(rho);
    const double h = 1e-5 * std::max(1.0, std::abs(rho));
    return (f(rho + h) - f(rho - h)) / (2.0 * h);
}

double TransportModel::d2f(double rho) const
{
    if (s_.d2f) return s_.d2f(rho);
    const double h = 1e-5 * std::max(1.0, std::abs(rho));
    return (f(rho + h) - 2.0 * f(rho) + f(rho - h)) / (h * h);
}

double TransportModel::dsigma(double rho) const
{
    if (s_.dsigma) return s_.dsigma(rho);
    const double h = 1e-5 * std::max(1.0, std::abs(rho));
    return (sigma(rho + h) - sigma(rho - h)) / (2.0 * h);
}

double TransportModel::integral_D(double a, double b) const
{
    if (s_.D_antiderivative) return s_.D_antiderivative(b) - s_.D_antiderivative(a);
    quad::Options opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-13;
    return quad::integrate(s_.D, a, b, opt);
}

double TransportModel::d2sigma(double rho) const
{
    if (s_.d2sigma) return s_.d2sigma(rho);
    const double h = 1e-4 * std::max(1.0, std::abs(rho));
    return (sigma(rho + h) - 2.0 * sigma(rho) + sigma(rho - h)) / (h * h);
}

void TransportModel::require_domain(double rho, const char* what) const
{
    if (!in_domain(rho) || !std::isfinite(rho)) {
        std::ostringstream os;
        os.precision(17);
        os << what << " = " << rho << " outside [" << s_.lo << ", " << s_.hi << "] for model " << s_.name;
        fail(ErrorCode::DomainViolation, os.str());
    }
}

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

TransportModel transport_catalogue(const std::string& name, double alpha)
{
    const double inf = std::numeric_limits<double>::infinity();
    TransportModel::Spec s;
    s.name = name;
    if (name == "ssep" || name == "alpha_model") {
        if (name == "ssep" || alpha == 0.0) {
            s.D = [](double) { return 1.0; };
            s.D_antiderivative = [](double r) { return r; };
            s.sigma = [](double r) { return 2.0 * r * (1.0 - r); };
            s.dsigma = [](double r) { return 2.0 - 4.0 * r; };
            s.d2sigma = [](double) { return -4.0; };
        } else {
            s.D = [alpha](double r) { return 1.0 + 4.0 * r * alpha; };
            s.D_antiderivative = [alpha](double r) { return r + 2.0 * alpha * r * r; };
            s.sigma = [alpha](double r) { return 2.0 * r * (1.0 - r) * (1.0 + 4.0 * r * alpha); };
            s.dsigma = [alpha](double r) {
                return (2.0 - 4.0 * r) * (1.0 + 4.0 * r * alpha) + 8.0 * alpha * r * (1.0 - r);
            };
            s.d2sigma = [alpha](double r) { return -4.0 * (1.0 + 4.0 * r * alpha) + 16.0 * alpha * (1.0 - 2.0 * r); };
        }
        s.f = [](double r) { return xlogx(r) + xlogx(1.0 - r); };
        s.df = [](double r) { return std::log(r / (1.0 - r)); };
        s.d2f = [](double r) { return 1.0 / (r * (1.0 - r)); };
        s.lo = 0.0;
        s.hi = 1.0;
    } else if (name == "kmp") {
        s.D = [](double) { return 1.0; };
        s.D_antiderivative = [](double r) { return r; };
        s.sigma = [](double r) { return 2.0 * r * r; };
        s.dsigma = [](double r) { return 4.0 * r; };
        s.d2sigma = [](double) { return 4.0; };
        s.f = [](double r) { return 1.0 - std::log(r); };
        s.df = [](double r) { return -1.0 / r; };
        s.d2f = [](double r) { return 1.0 / (r * r); };
        s.lo = 0.0;
        s.hi = inf;
    } else if (name == "free") {
        s.D = [](double) { return 1.0; };
        s.D_antiderivative = [](double r) { return r; };
        s.sigma = [](double r) { return 2.0 * r; };
        s.dsigma = [](double) { return 2.0; };
        s.d2sigma = [](double) { return 0.0; };
        s.f = [](double r) { return xlogx(r) - r; };
        s.df = [](double r) { return std::log(r); };
        s.d2f = [](double r) { return 1.0 / r; };
        s.lo = 0.0;
        s.hi = inf;
    } else if (name == "zrp") {
        return zrp_transport(ZrpRates::independent());
    } else {
        fail(ErrorCode::UnknownModel, "unknown transport model '" + name + "'");
    }
    return TransportModel(std::move(s));
}

TransportModel zrp_transport(const ZrpRates& rates)
{
    TransportModel::Spec s;
    s.name = "zrp";
    s.D = [rates](double r) { return zrp_thermodynamics(rates, r).D; };
    // D = dz / d rho
    s.D_antiderivative = [rates](double r) { return zrp_thermodynamics(rates, r).z; };
    s.sigma = [rates](double r) { return 2.0 * zrp_thermodynamics(rates, r).z; };
    s.f = [rates](double r) { return zrp_thermodynamics(rates, r).f; };
    s.df = [rates](double r) { return zrp_thermodynamics(rates, r).df; };
    s.d2f = [rates](double r) { return zrp_thermodynamics(rates, r).d2f; };
    // sigma' = 2 z d(log z)/d rho = 2D
    s.dsigma = [rates](double r) { return 2.0 * zrp_thermodynamics(rates, r).D; };
    s.lo = 0.0;
    s.hi = std::numeric_limits<double>::infinity();
    return TransportModel(std::move(s));
}

double einstein_defect(const TransportModel& m)
{
    double lo = m.lo(), hi = std::isfinite(m.hi()) ? m.hi() : m.lo() + 10.0;
    double worst = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double r = lo + (hi - lo) * k / 101.0;
        double d = m.D(r);
        worst = std::max(worst, std::abs(2.0 * d - m.sigma(r) * m.d2f(r)) / std::max(1.0, std::abs(2.0 * d)));
    }
    return worst;
}

}  // namespace ldtk
