#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ldtk {

// One labelled jump C -> C' with its rate and the increment it adds to each
// registered observable.  Several transitions may join the same pair of
// states (different reservoirs, different increments).
struct Transition {
    std::size_t from = 0;
    std::size_t to = 0;
    double rate = 0.0;
    std::vector<double> inc;
};

// Continuous-time generator acting on column probability vectors:
// dP/dt = M P with M(C',C) the rate C -> C' and M(C,C) = -sum of exit rates.
// Immutable; copies share storage.
class MarkovGenerator {
public:
    std::size_t n_states() const;
    std::size_t n_transitions() const;
    std::size_t n_observables() const;
    const std::vector<std::string>& observable_names() const;
    std::size_t observable_index(std::string_view name) const;
    bool has_observable(std::string_view name) const;

    std::size_t from(std::size_t t) const;
    std::size_t to(std::size_t t) const;
    double rate(std::size_t t) const;
    std::span<const double> increments(std::size_t t) const;
    Transition transition(std::size_t t) const;

    double exit_rate(std::size_t state) const;
    double max_exit_rate() const;
    // Transition ids leaving a state, in insertion order.
    std::span<const std::uint32_t> outgoing(std::size_t state) const;

    Eigen::SparseMatrix<double> matrix() const;
    Eigen::MatrixXd dense() const;

private:
    struct Data;
    std::shared_ptr<const Data> d_;
    friend class GeneratorBuilder;
};

class GeneratorBuilder {
public:
    GeneratorBuilder(std::size_t n_states, std::vector<std::string> observable_names);
    void add(std::size_t from, std::size_t to, double rate, std::span<const double> inc);
    void add(std::size_t from, std::size_t to, double rate, std::initializer_list<double> inc);
    // Validates (NegativeRate, IndexOutOfRange, DimensionMismatch) on add and
    // irreducibility (NonIrreducible) here.
    MarkovGenerator build();

private:
    std::size_t n_states_;
    std::vector<std::string> names_;
    std::vector<std::uint32_t> from_, to_;
    std::vector<double> rate_, inc_;
};

MarkovGenerator build_generator(std::size_t n_states, const std::vector<Transition>& transitions,
                                std::vector<std::string> observable_names);

class TiltedGenerator {
public:
    TiltedGenerator(MarkovGenerator base, std::vector<double> lambda);

    const MarkovGenerator& base() const { return base_; }
    const std::vector<double>& lambda() const { return lambda_; }
    // e^{lambda . q} for transition t
    double weight(std::size_t t) const { return weight_[t]; }

    Eigen::SparseMatrix<double> matrix() const;
    Eigen::MatrixXd dense() const;
    // y = M_lambda x
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
    void apply_transpose(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

private:
    MarkovGenerator base_;
    std::vector<double> lambda_;
    std::vector<double> weight_;
};

// DimensionMismatch if lambda.size() != n_observables.
TiltedGenerator tilted_generator(const MarkovGenerator& gen, std::vector<double> lambda);

enum class SpectralMethod { Auto, Dense, Power };

struct ScgfOptions {
    SpectralMethod method = SpectralMethod::Auto;
    std::size_t dense_limit = 1024;
    double tol = 1e-12;
    long max_iterations = 5'000'000;
};

struct SpectralResult {
    double eigenvalue = 0.0;
    Eigen::VectorXd left;   // normalized with left . right = 1
    Eigen::VectorXd right;  // normalized with sum(right) = 1
    long iterations = 0;
    double residual = 0.0;
    SpectralMethod method = SpectralMethod::Dense;
};

SpectralResult scgf(const TiltedGenerator& tilted, const ScgfOptions& opt = {});
double scgf_value(const MarkovGenerator& gen, std::span<const double> lambda, const ScgfOptions& opt = {});
// mu(lambda) with a single observable tilted and the others at zero.
double scgf_value(const MarkovGenerator& gen, std::size_t observable, double lambda,
                  const ScgfOptions& opt = {});

// d mu / d lambda_k for every observable, from L (dM/dlambda_k) R.
std::vector<double> scgf_gradient(const TiltedGenerator& tilted, const SpectralResult& spec);
std::vector<double> scgf_gradient(const TiltedGenerator& tilted, const ScgfOptions& opt = {});

// (mu', mu'', ...) up to `order` (1..4) at lambda along one observable.
std::vector<double> scgf_derivatives(const MarkovGenerator& gen, std::size_t observable, double lambda,
                                     int order, const ScgfOptions& opt = {});

struct StationaryOptions {
    SpectralMethod method = SpectralMethod::Auto;
    std::size_t dense_limit = 4096;
    double tol = 1e-14;
    long max_iterations = 10'000'000;
};

Eigen::VectorXd stationary_distribution(const MarkovGenerator& gen, const StationaryOptions& opt = {});

// Channels (from, to, increments) with equal keys are merged by summing
// rates; each channel is paired with (to, from, -increments).  The result
// carries a single observable "entropy" with increments log(k / k_reverse).
// IrreversibleTransition if a channel has no reverse partner.
MarkovGenerator entropy_generator(const MarkovGenerator& gen);

double entropy_production_rate(const MarkovGenerator& gen);

struct RateSample {
    double x = 0.0;
    double y = 0.0;
    std::string branch;
};

struct RateCurve {
    enum class Kind { Scgf, RateFunction };
    Kind kind = Kind::Scgf;
    std::vector<RateSample> samples;
};

// Second differences on the (possibly non-uniform) abscissae >= -tol.
bool is_convex(const RateCurve& curve, double tol = 1e-9);

struct LambdaWindow {
    double lo = -6.0;
    double hi = 6.0;
};

RateCurve scgf_curve(const MarkovGenerator& gen, std::size_t observable, std::span<const double> lambdas,
                     const ScgfOptions& opt = {});

// I(q) = sup_lambda (lambda q - mu(lambda)) by bisection on the exact mu'.
// QOutOfRange if q lies outside (mu'(lo), mu'(hi)).
double rate_function_value(const MarkovGenerator& gen, std::size_t observable, double q,
                           LambdaWindow window = {}, const ScgfOptions& opt = {});
RateCurve rate_function(const MarkovGenerator& gen, std::size_t observable, std::span<const double> qs,
                        LambdaWindow window = {}, const ScgfOptions& opt = {});

// max |mu(lambda) - mu(-1 - lambda)| under the entropy tilt, lambda in [-2, 1].
double gc_symmetry_defect(const MarkovGenerator& gen, const ScgfOptions& opt = {});

struct OnsagerResult {
    Eigen::Matrix2d matrix;
    double symmetry_defect = 0.0;
};

// Hessian of mu(alpha_1, alpha_2) over the first two observables at zero,
// divided by 2 T^2 (k_B = 1).  NotMultiBath with fewer than two observables.
OnsagerResult onsager_response_matrix(const MarkovGenerator& gen, double temperature = 1.0,
                                      const ScgfOptions& opt = {});

}  // namespace ldtk
