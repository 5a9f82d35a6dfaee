#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ldtk::quad {

using Integrand = std::function<double(double)>;

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_depth = 40;
    int max_panels = 2000;   // cap on panel splits
};

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes and weights, computed by Newton iteration on P_n.
const Rule& gauss_legendre(int n);

// Globally adaptive bisection with a 10-point Gauss-Legendre panel, comparing
// each panel against its two halves.  a > b is allowed and flips the sign.
double integrate(const Integrand& f, double a, double b, const Options& opt = {});

// Integrands behaving like 1/sqrt(x - a) at a (resp. 1/sqrt(b - x) at b).
// The substitution x = a + w^2 (resp. b - w^2) removes the singularity.
double integrate_sqrt_lo(const Integrand& f, double a, double b, const Options& opt = {});
double integrate_sqrt_hi(const Integrand& f, double a, double b, const Options& opt = {});
double integrate_sqrt_both(const Integrand& f, double a, double b, const Options& opt = {});

// Same substitutions, but the integrand also receives t = w^2, the exact
// distance to the singular endpoint, so it can avoid forming x - a in floating point.
using EdgeIntegrand = std::function<double(double x, double t)>;
double integrate_edge_lo(const EdgeIntegrand& f, double a, double b, const Options& opt = {});
double integrate_edge_hi(const EdgeIntegrand& f, double a, double b, const Options& opt = {});

// Composite Simpson on uniformly spaced samples; an odd interval count is
// closed with a 3/8 panel at the end.
double simpson(std::span<const double> y, double h);

}  // namespace ldtk::quad
