#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ldtk {

// Step initial condition on the infinite line: density rho_a on x < 0 and
// zero on x > 0.  All generating functions are coefficients of sqrt(t), with
// unit diffusion constant (kernel e^{-u^2/4t} / (2 sqrt(pi t))).

enum class Ensemble { Quenched, Annealed };

// Probability that a walker started at y = v sqrt(t) <= 0 is on the positive
// side at time t: erfc(|v|/2) / 2.  PositiveArgument for v > 0.
double crossing_probability_g(double v);

double annealed_scgf_free(double rho_a, double lambda);
double annealed_scgf_free_derivative(double rho_a, double lambda);

// rho_a * integral over u < 0 of log(1 + (e^lambda - 1) g(u)), truncated at
// u = -40 where g < 1e-170.
double quenched_scgf_free(double rho_a, double lambda);
double quenched_scgf_free_derivative(double rho_a, double lambda);

// Maximizer of the annealed variational problem at u = y / sqrt(t) <= 0.
double optimal_initial_profile(double rho_a, double lambda, double u);

// Annealed variational functional evaluated at a trial initial profile
// rho0(u), u < 0, with f(rho) = rho log rho - rho.
double annealed_variational(double rho_a, double lambda, const std::function<double(double)>& rho0);

// integral over k of log(1 + rho_a (e^lambda - 1) e^{-k^2}) / pi.
double annealed_scgf_ssep(double rho_a, double lambda);

// Legendre transforms I(q) = sup_lambda (lambda q - mu(lambda)).
double free_rate_function(Ensemble ensemble, double rho_a, double q);

struct LineSampleResult {
    std::vector<double> lambdas;
    std::vector<double> scgf;  // log <e^{lambda Q_t}> / sqrt(t)
    double mean_current = 0.0; // <Q_t> / sqrt(t)
};

// Independent continuous-time walkers (hop rate 1 each way) on Z starting at
// sites x < 0: one per site (quenched, rho_a = 1 only) or Poisson(rho_a) per
// site (annealed).  Q_t counts walkers at x >= 0 at time t.
LineSampleResult sample_line_current(Ensemble ensemble, double rho_a, double t, std::size_t samples,
                                     std::uint64_t seed, const std::vector<double>& lambdas);

}  // namespace ldtk
