#include "ldtk/markov.hpp"

#include "ldtk/error.hpp"
#include "ldtk/legendre.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace ldtk {

struct MarkovGenerator::Data {
    std::size_t n_states = 0;
    std::vector<std::string> names;
    std::vector<std::uint32_t> from, to;
    std::vector<double> rate, inc;
    std::vector<double> exit;
    std::vector<std::uint32_t> out_offset, out_ids;
    double max_exit = 0.0;
};

std::size_t MarkovGenerator::n_states() const { return d_->n_states; }
std::size_t MarkovGenerator::n_transitions() const { return d_->rate.size(); }
std::size_t MarkovGenerator::n_observables() const { return d_->names.size(); }
const std::vector<std::string>& MarkovGenerator::observable_names() const { return d_->names; }

std::size_t MarkovGenerator::observable_index(std::string_view name) const
{
    for (std::size_t k = 0; k < d_->names.size(); ++k)
        if (d_->names[k] == name) return k;
    fail(ErrorCode::IndexOutOfRange, "no observable named '" + std::string(name) + "'");
}

bool MarkovGenerator::has_observable(std::string_view name) const
{
    return std::find(d_->names.begin(), d_->names.end(), name) != d_->names.end();
}

std::size_t MarkovGenerator::from(std::size_t t) const { return d_->from[t]; }
std::size_t MarkovGenerator::to(std::size_t t) const { return d_->to[t]; }
double MarkovGenerator::rate(std::size_t t) const { return d_->rate[t]; }

std::span<const double> MarkovGenerator::increments(std::size_t t) const
{
    std::size_t k = d_->names.size();
    return {d_->inc.data() + t * k, k};
}

Transition MarkovGenerator::transition(std::size_t t) const
{
    auto q = increments(t);
    return {from(t), to(t), rate(t), std::vector<double>(q.begin(), q.end())};
}

double MarkovGenerator::exit_rate(std::size_t state) const { return d_->exit[state]; }
double MarkovGenerator::max_exit_rate() const { return d_->max_exit; }

std::span<const std::uint32_t> MarkovGenerator::outgoing(std::size_t state) const
{
    auto b = d_->out_offset[state], e = d_->out_offset[state + 1];
    return {d_->out_ids.data() + b, e - b};
}

Eigen::SparseMatrix<double> MarkovGenerator::matrix() const
{
    return TiltedGenerator(*this, std::vector<double>(n_observables(), 0.0)).matrix();
}

Eigen::MatrixXd MarkovGenerator::dense() const
{
    return TiltedGenerator(*this, std::vector<double>(n_observables(), 0.0)).dense();
}

GeneratorBuilder::GeneratorBuilder(std::size_t n_states, std::vector<std::string> observable_names)
    : n_states_(n_states), names_(std::move(observable_names))
{
    if (n_states_ == 0) fail(ErrorCode::IndexOutOfRange, "generator needs at least one state");
    if (n_states_ > std::numeric_limits<std::uint32_t>::max())
        fail(ErrorCode::TooLarge, "state count exceeds 32-bit indexing");
}

void GeneratorBuilder::add(std::size_t from, std::size_t to, double rate, std::span<const double> inc)
{
    if (from >= n_states_ || to >= n_states_) {
        std::ostringstream os;
        os << "transition " << from << " -> " << to << " with " << n_states_ << " states";
        fail(ErrorCode::IndexOutOfRange, os.str());
    }
    if (from == to) fail(ErrorCode::IndexOutOfRange, "self-transition on state " + std::to_string(from));
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        std::ostringstream os;
        os.precision(17);
        os << "rate " << rate << " on " << from << " -> " << to;
        fail(ErrorCode::NegativeRate, os.str());
    }
    if (inc.size() != names_.size()) {
        std::ostringstream os;
        os << "increment vector of length " << inc.size() << ", expected " << names_.size();
        fail(ErrorCode::DimensionMismatch, os.str());
    }
    from_.push_back(static_cast<std::uint32_t>(from));
    to_.push_back(static_cast<std::uint32_t>(to));
    rate_.push_back(rate);
    inc_.insert(inc_.end(), inc.begin(), inc.end());
}

void GeneratorBuilder::add(std::size_t from, std::size_t to, double rate, std::initializer_list<double> inc)
{
    add(from, to, rate, std::span<const double>(inc.begin(), inc.size()));
}

namespace {

bool reaches_all(std::size_t n, const std::vector<std::uint32_t>& offset, const std::vector<std::uint32_t>& adj)
{
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto k = offset[v]; k < offset[v + 1]; ++k) {
            auto w = adj[k];
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

// CSR adjacency of key[t] -> val[t]
void csr(std::size_t n, const std::vector<std::uint32_t>& key, const std::vector<std::uint32_t>& val,
         std::vector<std::uint32_t>& offset, std::vector<std::uint32_t>& out, bool store_index)
{
    offset.assign(n + 1, 0);
    for (auto k : key) ++offset[k + 1];
    for (std::size_t i = 0; i < n; ++i) offset[i + 1] += offset[i];
    out.assign(key.size(), 0);
    std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t t = 0; t < key.size(); ++t)
        out[fill[key[t]]++] = store_index ? static_cast<std::uint32_t>(t) : val[t];
}

}  // namespace

MarkovGenerator GeneratorBuilder::build()
{
    auto d = std::make_shared<MarkovGenerator::Data>();
    d->n_states = n_states_;
    d->names = std::move(names_);
    d->from = std::move(from_);
    d->to = std::move(to_);
    d->rate = std::move(rate_);
    d->inc = std::move(inc_);
    d->exit.assign(n_states_, 0.0);
    for (std::size_t t = 0; t < d->rate.size(); ++t) d->exit[d->from[t]] += d->rate[t];
    d->max_exit = d->exit.empty() ? 0.0 : *std::max_element(d->exit.begin(), d->exit.end());

    csr(n_states_, d->from, d->to, d->out_offset, d->out_ids, true);
    if (n_states_ > 1) {
        std::vector<std::uint32_t> off, adj;
        csr(n_states_, d->from, d->to, off, adj, false);
        bool forward = reaches_all(n_states_, off, adj);
        csr(n_states_, d->to, d->from, off, adj, false);
        bool backward = reaches_all(n_states_, off, adj);
        if (!forward || !backward)
            fail(ErrorCode::NonIrreducible, "generator is not irreducible (some state cannot be reached "
                                            "from or cannot return to state 0)");
    }
    MarkovGenerator g;
    g.d_ = std::move(d);
    return g;
}

MarkovGenerator build_generator(std::size_t n_states, const std::vector<Transition>& transitions,
                                std::vector<std::string> observable_names)
{
    GeneratorBuilder b(n_states, std::move(observable_names));
    for (const auto& t : transitions) b.add(t.from, t.to, t.rate, t.inc);
    return b.build();
}

// ---------------------------------------------------------------------------

TiltedGenerator::TiltedGenerator(MarkovGenerator base, std::vector<double> lambda)
    : base_(std::move(base)), lambda_(std::move(lambda))
{
    if (lambda_.size() != base_.n_observables()) {
        std::ostringstream os;
        os << "lambda has " << lambda_.size() << " components, generator has " << base_.n_observables()
           << " observables";
        fail(ErrorCode::DimensionMismatch, os.str());
    }
    weight_.resize(base_.n_transitions());
    for (std::size_t t = 0; t < weight_.size(); ++t) {
        auto q = base_.increments(t);
        double s = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) s += lambda_[k] * q[k];
        weight_[t] = std::exp(s);
    }
}

Eigen::SparseMatrix<double> TiltedGenerator::matrix() const
{
    std::size_t n = base_.n_states();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(base_.n_transitions() + n);
    for (std::size_t t = 0; t < base_.n_transitions(); ++t)
        trip.emplace_back(static_cast<int>(base_.to(t)), static_cast<int>(base_.from(t)),
                          weight_[t] * base_.rate(t));
    for (std::size_t i = 0; i < n; ++i)
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i), -base_.exit_rate(i));
    Eigen::SparseMatrix<double> m(static_cast<int>(n), static_cast<int>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

Eigen::MatrixXd TiltedGenerator::dense() const
{
    std::size_t n = base_.n_states();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t t = 0; t < base_.n_transitions(); ++t)
        m(base_.to(t), base_.from(t)) += weight_[t] * base_.rate(t);
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= base_.exit_rate(i);
    return m;
}

void TiltedGenerator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const
{
    std::size_t n = base_.n_states();
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = -base_.exit_rate(i) * x[i];
    for (std::size_t t = 0; t < base_.n_transitions(); ++t)
        y[base_.to(t)] += weight_[t] * base_.rate(t) * x[base_.from(t)];
}

void TiltedGenerator::apply_transpose(const Eigen::VectorXd& x, Eigen::VectorXd& y) const
{
    std::size_t n = base_.n_states();
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = -base_.exit_rate(i) * x[i];
    for (std::size_t t = 0; t < base_.n_transitions(); ++t)
        y[base_.from(t)] += weight_[t] * base_.rate(t) * x[base_.to(t)];
}

TiltedGenerator tilted_generator(const MarkovGenerator& gen, std::vector<double> lambda)
{
    return TiltedGenerator(gen, std::move(lambda));
}

// ---------------------------------------------------------------------------

namespace {

void make_positive(Eigen::VectorXd& v)
{
    if (v.sum() < 0) v = -v;
    v = v.cwiseAbs();
}

void finish(const TiltedGenerator& tg, SpectralResult& r)
{
    make_positive(r.right);
    make_positive(r.left);
    r.right /= r.right.sum();
    Eigen::VectorXd mr, ml;
    tg.apply(r.right, mr);
    double lr = r.left.dot(r.right);
    r.left /= lr;
    r.eigenvalue = r.left.dot(mr);
    double scale = std::max(1.0, tg.base().max_exit_rate());
    r.residual = (mr - r.eigenvalue * r.right).cwiseAbs().maxCoeff() / (scale * r.right.cwiseAbs().maxCoeff());
}

SpectralResult dense_scgf(const TiltedGenerator& tg)
{
    Eigen::MatrixXd m = tg.dense();
    const auto n = m.rows();
    SpectralResult r;
    r.method = SpectralMethod::Dense;
    if (n == 1) {
        r.eigenvalue = m(0, 0);
        r.left = Eigen::VectorXd::Ones(1);
        r.right = Eigen::VectorXd::Ones(1);
        return r;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "dense eigensolver failed");
    const auto& ev = es.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i)
        if (ev[i].real() > ev[best].real()) best = i;
    double mu = ev[best].real();

    // Inverse iteration at a slightly shifted point refines both Perron vectors.
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    double shift = mu + 1e-10 * scale;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m - shift * Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd right = Eigen::VectorXd::Ones(n), left = Eigen::VectorXd::Ones(n);
    for (int it = 0; it < 3; ++it) {
        right = lu.solve(right);
        right /= right.cwiseAbs().maxCoeff();
        left = lu.transpose().solve(left);
        left /= left.cwiseAbs().maxCoeff();
    }
    r.right = right;
    r.left = left;
    r.iterations = 3;
    finish(tg, r);
    return r;
}

SpectralResult power_scgf(const TiltedGenerator& tg, const ScgfOptions& opt)
{
    const std::size_t n = tg.base().n_states();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s = std::max(s, tg.base().exit_rate(i));
    s += 1.0;

    auto power = [&](bool transpose, Eigen::VectorXd& v, long& iters) {
        v = Eigen::VectorXd::Constant(n, 1.0 / n);
        Eigen::VectorXd w;
        for (iters = 1; iters <= opt.max_iterations; ++iters) {
            if (transpose)
                tg.apply_transpose(v, w);
            else
                tg.apply(v, w);
            w += s * v;
            double theta = w.sum();
            w /= theta;
            double change = (w - v).cwiseAbs().sum();
            v.swap(w);
            if (change <= opt.tol) return change;
        }
        std::ostringstream os;
        os.precision(6);
        os << "power iteration stopped after " << opt.max_iterations << " iterations";
        fail(ErrorCode::NoConvergence, os.str());
    };
    SpectralResult r;
    r.method = SpectralMethod::Power;
    long it_r = 0, it_l = 0;
    power(false, r.right, it_r);
    power(true, r.left, it_l);
    r.iterations = it_r + it_l;
    finish(tg, r);
    return r;
}

}  // namespace

SpectralResult scgf(const TiltedGenerator& tilted, const ScgfOptions& opt)
{
    bool dense = opt.method == SpectralMethod::Dense ||
                 (opt.method == SpectralMethod::Auto && tilted.base().n_states() <= opt.dense_limit);
    return dense ? dense_scgf(tilted) : power_scgf(tilted, opt);
}

double scgf_value(const MarkovGenerator& gen, std::span<const double> lambda, const ScgfOptions& opt)
{
    return scgf(TiltedGenerator(gen, std::vector<double>(lambda.begin(), lambda.end())), opt).eigenvalue;
}

double scgf_value(const MarkovGenerator& gen, std::size_t observable, double lambda, const ScgfOptions& opt)
{
    if (observable >= gen.n_observables()) fail(ErrorCode::IndexOutOfRange, "observable index");
    std::vector<double> lam(gen.n_observables(), 0.0);
    lam[observable] = lambda;
    return scgf(TiltedGenerator(gen, lam), opt).eigenvalue;
}

std::vector<double> scgf_gradient(const TiltedGenerator& tilted, const SpectralResult& spec)
{
    const auto& g = tilted.base();
    std::vector<double> grad(g.n_observables(), 0.0);
    for (std::size_t t = 0; t < g.n_transitions(); ++t) {
        double w = spec.left[g.to(t)] * tilted.weight(t) * g.rate(t) * spec.right[g.from(t)];
        auto q = g.increments(t);
        for (std::size_t k = 0; k < q.size(); ++k) grad[k] += q[k] * w;
    }
    return grad;
}

std::vector<double> scgf_gradient(const TiltedGenerator& tilted, const ScgfOptions& opt)
{
    return scgf_gradient(tilted, scgf(tilted, opt));
}

std::vector<double> scgf_derivatives(const MarkovGenerator& gen, std::size_t observable, double lambda,
                                     int order, const ScgfOptions& opt)
{
    if (order < 1 || order > 4) fail(ErrorCode::DimensionMismatch, "derivative order must be 1..4");
    if (observable >= gen.n_observables()) fail(ErrorCode::IndexOutOfRange, "observable index");
    auto d1 = [&](double l) {
        std::vector<double> lam(gen.n_observables(), 0.0);
        lam[observable] = l;
        return scgf_gradient(TiltedGenerator(gen, lam), opt)[observable];
    };
    const double h = 1e-3;
    std::vector<double> out{d1(lambda)};
    if (order == 1) return out;

    std::map<int, double> cache;  // keyed by multiples of h/2
    auto at = [&](int k) {
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        double v = k == 0 ? out[0] : d1(lambda + 0.5 * h * k);
        cache.emplace(k, v);
        return v;
    };
    // step = h * m / 2 with m in {2, 1}; Richardson removes the O(step^2) term.
    auto second = [&](int m) { return (at(m) - at(-m)) / (h * m); };
    auto third = [&](int m) {
        double st = 0.5 * h * m;
        return (at(m) - 2.0 * at(0) + at(-m)) / (st * st);
    };
    auto fourth = [&](int m) {
        double st = 0.5 * h * m;
        return (at(2 * m) - 2.0 * at(m) + 2.0 * at(-m) - at(-2 * m)) / (2.0 * st * st * st);
    };
    out.push_back((4.0 * second(1) - second(2)) / 3.0);
    if (order >= 3) out.push_back((4.0 * third(1) - third(2)) / 3.0);
    if (order >= 4) out.push_back((4.0 * fourth(1) - fourth(2)) / 3.0);
    return out;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd stationary_distribution(const MarkovGenerator& gen, const StationaryOptions& opt)
{
    const std::size_t n = gen.n_states();
    bool dense = opt.method == SpectralMethod::Dense ||
                 (opt.method == SpectralMethod::Auto && n <= opt.dense_limit);
    Eigen::VectorXd p;
    if (dense) {
        Eigen::MatrixXd a = gen.dense();
        a.row(n - 1).setOnes();
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        b[n - 1] = 1.0;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        p = lu.solve(b);
        if (!p.allFinite()) fail(ErrorCode::SingularSystem, "augmented balance system is singular");
        // One step of iterative refinement.
        Eigen::VectorXd res = b - a * p;
        p += lu.solve(res);
    } else {
        TiltedGenerator tg(gen, std::vector<double>(gen.n_observables(), 0.0));
        double s = 2.0 * gen.max_exit_rate();
        p = Eigen::VectorXd::Constant(n, 1.0 / n);
        Eigen::VectorXd w;
        long it = 0;
        for (; it < opt.max_iterations; ++it) {
            tg.apply(p, w);
            w = p + w / s;
            w /= w.sum();
            double change = (w - p).cwiseAbs().sum();
            p.swap(w);
            if (change <= opt.tol) break;
        }
        if (it == opt.max_iterations) fail(ErrorCode::SingularSystem, "stationary power iteration did not settle");
    }
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] < 0.0) p[i] = 0.0;
    p /= p.sum();
    return p;
}

MarkovGenerator entropy_generator(const MarkovGenerator& gen)
{
    using Key = std::tuple<std::size_t, std::size_t, std::vector<double>>;
    std::map<Key, double> channels;
    for (std::size_t t = 0; t < gen.n_transitions(); ++t) {
        auto q = gen.increments(t);
        channels[Key{gen.from(t), gen.to(t), std::vector<double>(q.begin(), q.end())}] += gen.rate(t);
    }
    GeneratorBuilder b(gen.n_states(), {"entropy"});
    for (const auto& [key, k] : channels) {
        const auto& [from, to, inc] = key;
        std::vector<double> neg(inc.size());
        for (std::size_t i = 0; i < inc.size(); ++i) neg[i] = inc[i] == 0.0 ? 0.0 : -inc[i];
        auto rev = channels.find(Key{to, from, neg});
        if (rev == channels.end()) {
            std::ostringstream os;
            os << "transition " << from << " -> " << to << " has no reverse channel";
            fail(ErrorCode::IrreversibleTransition, os.str());
        }
        b.add(from, to, k, {std::log(k / rev->second)});
    }
    return b.build();
}

double entropy_production_rate(const MarkovGenerator& gen)
{
    MarkovGenerator eg = entropy_generator(gen);
    Eigen::VectorXd p = stationary_distribution(gen);
    double s = 0.0;
    for (std::size_t t = 0; t < eg.n_transitions(); ++t) s += eg.rate(t) * p[eg.from(t)] * eg.increments(t)[0];
    return s;
}

// ---------------------------------------------------------------------------

bool is_convex(const RateCurve& curve, double tol)
{
    const auto& s = curve.samples;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        double h0 = s[i].x - s[i - 1].x, h1 = s[i + 1].x - s[i].x;
        double slope0 = (s[i].y - s[i - 1].y) / h0, slope1 = (s[i + 1].y - s[i].y) / h1;
        if ((slope1 - slope0) * 0.5 * (h0 + h1) < -tol) return false;
    }
    return true;
}

RateCurve scgf_curve(const MarkovGenerator& gen, std::size_t observable, std::span<const double> lambdas,
                     const ScgfOptions& opt)
{
    RateCurve c;
    c.kind = RateCurve::Kind::Scgf;
    for (double l : lambdas) c.samples.push_back({l, scgf_value(gen, observable, l, opt), ""});
    return c;
}

namespace {

struct Evaluator {
    const MarkovGenerator& gen;
    std::size_t obs;
    const ScgfOptions& opt;

    std::pair<double, double> both(double l) const
    {
        std::vector<double> lam(gen.n_observables(), 0.0);
        lam[obs] = l;
        TiltedGenerator tg(gen, lam);
        auto spec = scgf(tg, opt);
        return {spec.eigenvalue, scgf_gradient(tg, spec)[obs]};
    }
};

void verify_convex(const Evaluator& ev, LambdaWindow w)
{
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 16; ++i) {
        double l = w.lo + (w.hi - w.lo) * i / 16.0;
        double d = ev.both(l).second;
        if (d < prev - 1e-9 * std::max(1.0, std::abs(prev)))
            fail(ErrorCode::NoConvergence, "SCGF derivative decreases on the lambda window (not convex)");
        prev = d;
    }
}

}  // namespace

double rate_function_value(const MarkovGenerator& gen, std::size_t observable, double q, LambdaWindow window,
                           const ScgfOptions& opt)
{
    if (observable >= gen.n_observables()) fail(ErrorCode::IndexOutOfRange, "observable index");
    Evaluator ev{gen, observable, opt};
    return legendre_by_bisection([&](double l) { return ev.both(l).first; },
                                 [&](double l) { return ev.both(l).second; }, q, window.lo, window.hi)
        .value;
}

RateCurve rate_function(const MarkovGenerator& gen, std::size_t observable, std::span<const double> qs,
                        LambdaWindow window, const ScgfOptions& opt)
{
    if (observable >= gen.n_observables()) fail(ErrorCode::IndexOutOfRange, "observable index");
    Evaluator ev{gen, observable, opt};
    verify_convex(ev, window);
    RateCurve c;
    c.kind = RateCurve::Kind::RateFunction;
    for (double q : qs) c.samples.push_back({q, rate_function_value(gen, observable, q, window, opt), ""});
    return c;
}

double gc_symmetry_defect(const MarkovGenerator& gen, const ScgfOptions& opt)
{
    MarkovGenerator eg = entropy_generator(gen);
    double worst = 0.0;
    for (int i = 0; i <= 60; ++i) {
        double l = -2.0 + 0.05 * i;
        double a = scgf_value(eg, 0, l, opt), b = scgf_value(eg, 0, -1.0 - l, opt);
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

OnsagerResult onsager_response_matrix(const MarkovGenerator& gen, double temperature, const ScgfOptions& opt)
{
    if (gen.n_observables() < 2)
        fail(ErrorCode::NotMultiBath, "response matrix needs two heat observables");
    auto grad = [&](double a1, double a2) {
        std::vector<double> lam(gen.n_observables(), 0.0);
        lam[0] = a1;
        lam[1] = a2;
        auto g = scgf_gradient(TiltedGenerator(gen, lam), opt);
        return Eigen::Vector2d(g[0], g[1]);
    };
    const double h = 1e-3;
    Eigen::Matrix2d hess;
    for (int j = 0; j < 2; ++j) {
        auto diff = [&](double step) {
            Eigen::Vector2d e = Eigen::Vector2d::Zero();
            e[j] = step;
            return Eigen::Vector2d((grad(e[0], e[1]) - grad(-e[0], -e[1])) / (2.0 * step));
        };
        hess.col(j) = (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
    }
    OnsagerResult r;
    r.matrix = hess / (2.0 * temperature * temperature);
    r.symmetry_defect = std::abs(r.matrix(0, 1) - r.matrix(1, 0));
    return r;
}

}  // namespace ldtk
