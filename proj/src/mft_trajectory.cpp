#include "ldtk/mft.hpp"

#include "ldtk/error.hpp"
#include "ldtk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ldtk {

namespace {

void require_grid(const TrajectoryGrid& t, bool need_H)
{
    const auto rows = t.rho.rows(), cols = t.rho.cols();
    if (rows < 3 || cols < 3) fail(ErrorCode::GridMismatch, "trajectory needs at least three rows and columns");
    if (need_H && (t.H.rows() != rows || t.H.cols() != cols)) fail(ErrorCode::GridMismatch, "H does not match rho");
    if (t.j.size() != 0 && (t.j.rows() != rows || t.j.cols() != cols))
        fail(ErrorCode::GridMismatch, "j does not match rho");
    if (!(t.tau1 > t.tau0)) fail(ErrorCode::GridMismatch, "tau1 must exceed tau0");
}

// Fourth-order first derivative along a row, one-sided stencils at the ends.
Eigen::VectorXd row_derivative(const Eigen::VectorXd& y, double h)
{
    const Eigen::Index n = y.size() - 1;
    Eigen::VectorXd d(n + 1);
    if (n < 4) {
        for (Eigen::Index k = 1; k < n; ++k) d(k) = (y(k + 1) - y(k - 1)) / (2.0 * h);
        d(0) = (-3.0 * y(0) + 4.0 * y(1) - y(2)) / (2.0 * h);
        d(n) = (3.0 * y(n) - 4.0 * y(n - 1) + y(n - 2)) / (2.0 * h);
        return d;
    }
    for (Eigen::Index k = 2; k + 2 <= n; ++k)
        d(k) = (y(k - 2) - 8.0 * y(k - 1) + 8.0 * y(k + 1) - y(k + 2)) / (12.0 * h);
    d(0) = (-25.0 * y(0) + 48.0 * y(1) - 36.0 * y(2) + 16.0 * y(3) - 3.0 * y(4)) / (12.0 * h);
    d(1) = (-3.0 * y(0) - 10.0 * y(1) + 18.0 * y(2) - 6.0 * y(3) + y(4)) / (12.0 * h);
    d(n) = (25.0 * y(n) - 48.0 * y(n - 1) + 36.0 * y(n - 2) - 16.0 * y(n - 3) + 3.0 * y(n - 4)) / (12.0 * h);
    d(n - 1) = (3.0 * y(n) + 10.0 * y(n - 1) - 18.0 * y(n - 2) + 6.0 * y(n - 3) - y(n - 4)) / (12.0 * h);
    return d;
}

double tensor_simpson(const Eigen::MatrixXd& f, double dt, double h)
{
    std::vector<double> rows(static_cast<std::size_t>(f.rows()));
    std::vector<double> line(static_cast<std::size_t>(f.cols()));
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        for (Eigen::Index k = 0; k < f.cols(); ++k) line[static_cast<std::size_t>(k)] = f(i, k);
        rows[static_cast<std::size_t>(i)] = quad::simpson(line, h);
    }
    return quad::simpson(rows, dt);
}

TrajectoryGrid empty_grid(std::size_t n, std::size_t m, double duration)
{
    if (n < 4 || m < 2) fail(ErrorCode::GridMismatch, "trajectory grid too small");
    if (!(duration > 0.0)) fail(ErrorCode::DomainViolation, "duration must be positive");
    TrajectoryGrid t;
    t.tau0 = -duration;
    t.tau1 = 0.0;
    const auto rows = static_cast<Eigen::Index>(m + 1), cols = static_cast<Eigen::Index>(n + 1);
    t.rho.resize(rows, cols);
    t.H.resize(rows, cols);
    t.j.resize(rows, cols);
    return t;
}

}  // namespace

HjResidual hj_residual(const TransportModel& model, const TrajectoryGrid& t)
{
    require_grid(t, true);
    const Eigen::Index rows = t.rho.rows(), cols = t.rho.cols();
    const double h = 1.0 / static_cast<double>(cols - 1);
    const double dt = (t.tau1 - t.tau0) / static_cast<double>(rows - 1);
    HjResidual r;
    for (Eigen::Index i = 1; i + 1 < rows; ++i) {
        for (Eigen::Index k = 1; k + 1 < cols; ++k) {
            const double rho = t.rho(i, k);
            const double rl = 0.5 * (t.rho(i, k - 1) + rho), rr = 0.5 * (rho + t.rho(i, k + 1));
            const double Dl = model.D(rl), Dr = model.D(rr), sl = model.sigma(rl), sr = model.sigma(rr);
            const double diffusion = (Dr * (t.rho(i, k + 1) - rho) - Dl * (rho - t.rho(i, k - 1))) / (h * h);
            const double drive = (sr * (t.H(i, k + 1) - t.H(i, k)) - sl * (t.H(i, k) - t.H(i, k - 1))) / (h * h);
            const double drho = (t.rho(i + 1, k) - t.rho(i - 1, k)) / (2.0 * dt);
            r.rho = std::max(r.rho, std::abs(drho - diffusion + drive));

            const double dH = (t.H(i + 1, k) - t.H(i - 1, k)) / (2.0 * dt);
            const double Hx = (t.H(i, k + 1) - t.H(i, k - 1)) / (2.0 * h);
            const double Hxx = (t.H(i, k + 1) - 2.0 * t.H(i, k) + t.H(i, k - 1)) / (h * h);
            r.H = std::max(r.H, std::abs(dH + model.D(rho) * Hxx + 0.5 * model.dsigma(rho) * Hx * Hx));
        }
    }
    return r;
}

TrajectoryAction trajectory_action(const TransportModel& model, const TrajectoryGrid& t)
{
    const bool have_H = t.H.size() != 0;
    const bool have_j = t.j.size() != 0;
    if (!have_H && !have_j) fail(ErrorCode::GridMismatch, "trajectory carries neither H nor j");
    require_grid(t, have_H);
    const Eigen::Index rows = t.rho.rows(), cols = t.rho.cols();
    const double h = 1.0 / static_cast<double>(cols - 1);
    const double dt = (t.tau1 - t.tau0) / static_cast<double>(rows - 1);
    Eigen::MatrixXd direct(rows, cols), hform(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Eigen::VectorXd rho = t.rho.row(i).transpose();
        const Eigen::VectorXd rx = row_derivative(rho, h);
        Eigen::VectorXd Hx;
        if (have_H) Hx = row_derivative(t.H.row(i).transpose(), h);
        for (Eigen::Index k = 0; k < cols; ++k) {
            const double s = model.sigma(rho(k));
            if (have_j) {
                const double u = t.j(i, k) + model.D(rho(k)) * rx(k);
                direct(i, k) = u == 0.0 ? 0.0 : u * u / (2.0 * s);
            }
            if (have_H) hform(i, k) = 0.5 * s * Hx(k) * Hx(k);
        }
    }
    TrajectoryAction a;
    a.direct = have_j ? tensor_simpson(direct, dt, h) : std::numeric_limits<double>::quiet_NaN();
    a.h_form = have_H ? tensor_simpson(hform, dt, h) : std::numeric_limits<double>::quiet_NaN();
    return a;
}

TrajectoryGrid equilibrium_excitation_trajectory(double rho_star, double amplitude, std::size_t n, std::size_t m,
                                                 double duration)
{
    if (!(rho_star - std::abs(amplitude) > 0.0 && rho_star + std::abs(amplitude) < 1.0))
        fail(ErrorCode::DomainViolation, "excitation leaves (0, 1)");
    TrajectoryGrid t = empty_grid(n, m, duration);
    const double pi = std::numbers::pi;
    const double ref = std::log(rho_star / (1.0 - rho_star));
    for (std::size_t i = 0; i <= m; ++i) {
        const double tau = t.tau0 + (t.tau1 - t.tau0) * static_cast<double>(i) / static_cast<double>(m);
        const double e = amplitude * std::exp(pi * pi * tau);
        for (std::size_t k = 0; k <= n; ++k) {
            const double x = static_cast<double>(k) / static_cast<double>(n);
            const double rho = rho_star + e * std::sin(pi * x);
            const auto I = static_cast<Eigen::Index>(i), K = static_cast<Eigen::Index>(k);
            t.rho(I, K) = rho;
            t.H(I, K) = std::log(rho / (1.0 - rho)) - ref;
            t.j(I, K) = e * pi * std::cos(pi * x);
        }
    }
    return t;
}

TrajectoryGrid ssep_antidiffusion_trajectory(double rho1, double rho2, double c, std::size_t n, std::size_t m,
                                             double duration)
{
    TrajectoryGrid t = empty_grid(n, m, duration);
    const double pi = std::numbers::pi;
    const double delta = rho2 - rho1;
    for (std::size_t i = 0; i <= m; ++i) {
        const double tau = t.tau0 + (t.tau1 - t.tau0) * static_cast<double>(i) / static_cast<double>(m);
        const double e = c * std::exp(pi * pi * tau);
        for (std::size_t k = 0; k <= n; ++k) {
            const double x = static_cast<double>(k) / static_cast<double>(n);
            const double S = std::sin(pi * x), C = std::cos(pi * x);
            const double F = rho1 + delta * x + e * S;
            const double F1 = delta + e * pi * C;
            const double F2 = -e * pi * pi * S;
            const double F3 = -e * pi * pi * pi * C;
            if (!(F > 0.0 && F < 1.0) || F1 == 0.0) fail(ErrorCode::DomainViolation, "auxiliary function leaves (0, 1)");
            const double N = F * (1.0 - F) * F2;
            const double N1 = (1.0 - 2.0 * F) * F1 * F2 + F * (1.0 - F) * F3;
            const double rho = F + N / (F1 * F1);
            if (!(rho > 0.0 && rho < 1.0)) fail(ErrorCode::DomainViolation, "density leaves (0, 1)");
            const double rx = F1 + N1 / (F1 * F1) - 2.0 * N * F2 / (F1 * F1 * F1);
            const double Hx = rx / (rho * (1.0 - rho)) - F1 / (F * (1.0 - F));
            const auto I = static_cast<Eigen::Index>(i), K = static_cast<Eigen::Index>(k);
            t.rho(I, K) = rho;
            t.H(I, K) = std::log(rho * (1.0 - F) / (F * (1.0 - rho)));
            t.j(I, K) = 2.0 * rho * (1.0 - rho) * Hx - rx;
        }
    }
    return t;
}

}  // namespace ldtk
