#pragma once

#include "ldtk/lattice_models.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace ldtk {

// Samples rho(x_k), x_k = k / n, k = 0..n, of a profile between reservoirs at
// densities rho1 (x = 0) and rho2 (x = 1).
struct DensityProfile {
    std::vector<double> values;
    double rho1 = 0.0;
    double rho2 = 0.0;

    std::size_t n() const { return values.size() - 1; }
    double h() const { return 1.0 / static_cast<double>(n()); }
    double x(std::size_t k) const { return static_cast<double>(k) * h(); }

    static DensityProfile sample(std::size_t n, const std::function<double(double)>& rho, double rho1, double rho2);
};

// ---- steady state and Gaussian fluctuations --------------------------------

// j* = integral of D over [rho2, rho1].
double steady_current(const TransportModel& model, double rho1, double rho2);
// rho*(x) solving x j* = integral of D over [rho*(x), rho1], by bisection.
double steady_density_at(const TransportModel& model, double rho1, double rho2, double x);

struct SteadyState {
    DensityProfile profile;
    double current = 0.0;
};

// DomainViolation if a boundary density lies outside the model domain or n < 16.
SteadyState steady_profile(const TransportModel& model, double rho1, double rho2, std::size_t n);

// Equal-time covariance of the density fluctuation field on the interior nodes
// x_k = k / n, k = 1..n-1: <r(x_k) r(x_l)> = local_k / h delta_kl + long_range(k, l).
struct Covariance {
    std::vector<double> x;
    std::vector<double> local;    // sigma / (2 D) at each node
    Eigen::MatrixXd long_range;
    double h = 0.0;

    Eigen::MatrixXd full() const;
};

// Stationary Lyapunov equation A P + P A^T + B B^T = 0 for the discretized
// linear fluctuating equation, split as P = diag(local) / h + C.  The
// symmetrized drift is diagonalized, so C follows from one eigendecomposition.
Covariance covariance(const TransportModel& model, double rho1, double rho2, std::size_t n);

// Var(N) / L from the covariance (local integral plus double integral of C).
double number_variance_numeric(const TransportModel& model, double rho1, double rho2, std::size_t n = 256);
// Closed form for the exclusion process.
double number_variance_ssep(double rho1, double rho2);
// Closed form for "ssep", numeric route otherwise.
double number_variance(const TransportModel& model, double rho1, double rho2);

// ---- additivity principle ----------------------------------------------------

struct RateFunctionBranch {
    double parameter = 0.0;  // K, or rho0 on the non-monotonic branch
    double q = 0.0;
    double I = 0.0;
    std::string branch;      // "monotonic" or "nonmonotonic"
    double rho0 = 0.0;       // turning density of a non-monotonic profile
};

// Monotonic profile with multiplier K > K_min = -1/(2 max sigma), carrying
// q > 0; negative_current gives the reversed partner carrying -q.
RateFunctionBranch additivity_from_K(const TransportModel& model, double rho1, double rho2, double K,
                                     bool negative_current = false);
// Profile rising from rho1 to rho0 before decreasing to rho2 (or dipping
// below rho2 when sigma is largest there), with K = -1/(2 sigma(rho0)).
RateFunctionBranch additivity_from_rho0(const TransportModel& model, double rho1, double rho2, double rho0);

// I(q) on the branch with the smaller value.  BranchUnavailable when no branch
// reaches q; QOutOfReach for reversed currents when sigma vanishes at a
// boundary density.  rho1 < rho2 is handled by mirroring.
RateFunctionBranch additivity_rate_function(const TransportModel& model, double rho1, double rho2, double q);

struct AdditivityCurve {
    std::vector<RateFunctionBranch> samples;
    bool envelope_applied = false;
    bool envelope_changed = false;
};

// Optional lower convex envelope of the sampled I(q).
AdditivityCurve additivity_curve(const TransportModel& model, double rho1, double rho2,
                                 const std::vector<double>& qs, bool convex_envelope = false);

// Direct minimization of the time-independent Lagrangian over profiles with
// `cells` midpoint cells (projected damped Newton).  Returns the discrete minimum.
double additivity_variational(const TransportModel& model, double rho1, double rho2, double q,
                              std::size_t cells = 64);

struct AdditivityCumulants {
    std::vector<double> S;           // S_1.. S_order
    std::vector<double> cumulants;   // mean, variance, third cumulant (times L)
    std::vector<double> mu_coefficients;  // lambda^n coefficients of L mu(lambda)
};

AdditivityCumulants additivity_cumulants(const TransportModel& model, double rho1, double rho2, int order = 3);

// ---- ring instability ---------------------------------------------------------

struct RingInstability {
    bool stable = true;
    double q_c = 0.0;
    double v_opt = 0.0;
};

// From the second-order coefficient 8 pi^2 sigma D^2 - q^2 sigma''.
RingInstability ring_instability_threshold(const TransportModel& model, double rho_bar);

// Coefficient of eps^2 in the action of rho = rho_bar + eps sin(2 pi (x - v t)).
double ring_mode_coefficient(const TransportModel& model, double rho_bar, double q, double v, double eps = 1e-4);

// Locates the sign change of min_v ring_mode_coefficient; stable if none below q = 1e6.
RingInstability ring_instability_scan(const TransportModel& model, double rho_bar, double eps = 1e-4);

// ---- density large deviations --------------------------------------------------

// Composite Simpson of f(rho) - f(rho*) - (rho - rho*) f'(rho*).
double equilibrium_density_ldf(const TransportModel& model, double rho_star, const DensityProfile& profile);

struct SsepDensityLdf {
    double value = 0.0;
    std::vector<double> F;  // auxiliary monotone function on the profile grid
    int iterations = 0;
    double residual = 0.0;
};

// Nonlinear boundary value problem rho = F + F(1-F)F''/F'^2, F(0) = rho1,
// F(1) = rho2, by damped Newton; NewtonDiverged, NonMonotoneF.
SsepDensityLdf density_ldf_ssep(double rho1, double rho2, const DensityProfile& profile);

struct SsepDensityScgf {
    double value = 0.0;
    std::vector<double> F;
    int iterations = 0;
    double residual = 0.0;
};

// F'' + F'^2 (1 - e^A) / (1 - F + F e^A) = 0 with the same boundary values;
// A is sampled on the profile grid (n + 1 values).
SsepDensityScgf density_scgf_ssep(double rho1, double rho2, const std::vector<double>& A);

// Local functional with rho* from e^{f'(rho*)} linear in x.
double zrp_density_ldf(const ZrpRates& rates, double rho1, double rho2, const DensityProfile& profile);
double zrp_steady_density_at(const ZrpRates& rates, double rho1, double rho2, double x);

// ---- optimal trajectories ------------------------------------------------------

// Fields sampled on (m + 1) time rows by (n + 1) space columns, x in [0, 1],
// tau' in [tau0, tau1].  j is optional (empty matrix when absent).
struct TrajectoryGrid {
    double tau0 = 0.0;
    double tau1 = 0.0;
    Eigen::MatrixXd rho;
    Eigen::MatrixXd H;
    Eigen::MatrixXd j;

    std::size_t n() const { return static_cast<std::size_t>(rho.cols()) - 1; }
    std::size_t m() const { return static_cast<std::size_t>(rho.rows()) - 1; }
};

struct HjResidual {
    double rho = 0.0;
    double H = 0.0;
};

// Max norms over interior nodes of
//   d_tau rho - d_x(D d_x rho) + d_x(sigma d_x H)  and  d_tau H + D d_xx H + sigma'/2 (d_x H)^2.
HjResidual hj_residual(const TransportModel& model, const TrajectoryGrid& trajectory);

struct TrajectoryAction {
    double direct = 0.0;   // (j + D rho')^2 / (2 sigma); NaN without j
    double h_form = 0.0;   // sigma (H')^2 / 2
};

TrajectoryAction trajectory_action(const TransportModel& model, const TrajectoryGrid& trajectory);

// Equilibrium exclusion process at rho_star: time reversal of the relaxation of
// rho_star + amplitude sin(pi x), observed at tau1 = 0, started at tau0 = -duration.
TrajectoryGrid equilibrium_excitation_trajectory(double rho_star, double amplitude, std::size_t n, std::size_t m,
                                                 double duration);

// Exclusion process between rho1 and rho2: F solves the backward heat equation,
// F = linear + c sin(pi x) e^{pi^2 tau'}, and rho, H follow from F.
TrajectoryGrid ssep_antidiffusion_trajectory(double rho1, double rho2, double c, std::size_t n, std::size_t m,
                                             double duration);

}  // namespace ldtk
