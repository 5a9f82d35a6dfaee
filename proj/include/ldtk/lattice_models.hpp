#pragma once

#include "ldtk/markov.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ldtk {

enum class Geometry { Open, Ring };

// Exclusion process on L sites.  Particles hop right at rate 1 and left at
// rate r.  Open chains exchange particles with two reservoirs: entry at site 1
// (alpha), exit at site 1 (gamma), exit at site L (beta), entry at site L
// (delta).  Rings keep n_particles fixed.
struct SsepParams {
    int L = 1;
    double alpha = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    double r = 1.0;
    Geometry geometry = Geometry::Open;
    int n_particles = 0;

    double a() const { return 1.0 / (alpha + gamma); }
    double b() const { return 1.0 / (beta + delta); }
    double rho1() const { return alpha * a(); }
    double rho2() const { return delta * b(); }
    void validate() const;
};

SsepParams ssep_open(int L, double alpha, double gamma, double beta, double delta, double r = 1.0);
SsepParams ssep_ring(int L, int n_particles, double r = 1.0);

// Bitmask states, site i <-> bit i-1, ordered by integer value (rings: by
// integer value within the fixed-N sector).  Open chains register "left",
// "right" and, when every reverse rate is positive, "entropy".  Rings register
// "bond" (net hops from site L to site 1) and "entropy" when r > 0.
MarkovGenerator ssep_generator(const SsepParams& params);

// Bitmask of each state index of a ring generator.
std::vector<std::uint32_t> ring_states(int L, int n_particles);

// The L = 1 chain.
MarkovGenerator quantum_dot_generator(double alpha, double gamma, double beta, double delta);
double quantum_dot_scgf(double alpha, double gamma, double beta, double delta, double lambda);

// Two-level system (energies 0 and gap) coupled to several heat baths.  Bath
// i moves the system up at rate c_i e^{-gap/T_i} and down at rate c_i;
// observable "heat<i>" is the energy received from bath i.
MarkovGenerator multi_bath_two_level(double gap, const std::vector<double>& temperatures,
                                     const std::vector<double>& couplings);

// lambda' with mu(lambda) = mu(lambda') for the left-boundary current:
// e^{lambda'} = r^{L-1} (gamma delta / alpha beta) e^{-lambda}.
double boundary_symmetry_partner(const SsepParams& params, double lambda);

struct SsepSteadyState {
    std::vector<double> profile;  // <n_i>, i = 1..L
    double current = 0.0;
};

SsepSteadyState ssep_steady_statistics(const SsepParams& params);

// Truncated correlations for 1 <= i < j (< k) <= L.  IndexOrder otherwise.
double ssep_two_point(const SsepParams& params, int i, int j);
double ssep_three_point(const SsepParams& params, int i, int j, int k);
// Each index tuple has two or three entries.
std::vector<double> ssep_correlations_exact(const SsepParams& params, const std::vector<std::vector<int>>& indices);

// Zero-range hop rates u(n), n >= 1.  Tables are extended by their last entry.
class ZrpRates {
public:
    static ZrpRates independent();  // u(n) = n
    static ZrpRates constant(double c);
    static ZrpRates table(std::vector<double> u);

    double u(long n) const;
    // log v(n) with v(n) = v(n-1) / u(n), v(0) = 1
    double log_weight(long n) const;
    std::string describe() const;

private:
    enum class Kind { Independent, Table };
    Kind kind_ = Kind::Table;
    std::vector<double> table_;
    std::vector<double> log_v_;
};

struct ZrpState {
    double rho = 0.0;
    double z = 0.0;      // fugacity e^{f'}
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;
    double D = 0.0;
    double sigma = 0.0;
    long n_terms = 0;
};

// OutsideConvergence if rho cannot be reached inside the radius of convergence
// of sum v(m) z^m (truncation capped at 10^4 terms).
ZrpState zrp_thermodynamics(const ZrpRates& rates, double rho);

// Grand-canonical density at fugacity z.
double zrp_density(const ZrpRates& rates, double z);

class TransportModel {
public:
    using Fn = std::function<double(double)>;

    struct Spec {
        std::string name;
        Fn D, sigma, f;
        Fn dsigma, d2sigma, df, d2f;  // optional
        Fn D_antiderivative;          // optional
        double lo = 0.0;
        double hi = 1.0;
    };

    explicit TransportModel(Spec spec);

    const std::string& name() const { return s_.name; }
    double D(double rho) const { return s_.D(rho); }
    double sigma(double rho) const { return s_.sigma(rho); }
    double f(double rho) const { return s_.f(rho); }
    double df(double rho) const;
    double d2f(double rho) const;
    double dsigma(double rho) const;
    double d2sigma(double rho) const;
    // integral of D over [a, b], by quadrature unless an antiderivative is known
    double integral_D(double a, double b) const;

    double lo() const { return s_.lo; }
    double hi() const { return s_.hi; }
    bool in_domain(double rho) const { return rho >= s_.lo && rho <= s_.hi; }
    // DomainViolation unless rho lies in the closed domain.
    void require_domain(double rho, const char* what) const;

private:
    Spec s_;
};

// ssep, kmp, free, alpha_model(alpha), zrp (with rates).  UnknownModel otherwise.
TransportModel transport_catalogue(const std::string& name, double alpha = 0.0);
TransportModel zrp_transport(const ZrpRates& rates);

// max |2D - sigma f''| / max(1, |2D|) at 100 interior points.
double einstein_defect(const TransportModel& model);

}  // namespace ldtk
