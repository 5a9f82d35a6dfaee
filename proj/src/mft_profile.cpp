#include "ldtk/mft.hpp"

#include "ldtk/error.hpp"
#include "ldtk/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace ldtk {

namespace {

void require_profile(const TransportModel& model, const DensityProfile& p)
{
    if (p.values.size() < 3) fail(ErrorCode::GridMismatch, "profile needs at least two intervals");
    for (double v : p.values) model.require_domain(v, "profile value");
}

}  // namespace

DensityProfile DensityProfile::sample(std::size_t n, const std::function<double(double)>& rho, double rho1,
                                      double rho2)
{
    DensityProfile p;
    p.rho1 = rho1;
    p.rho2 = rho2;
    p.values.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) p.values[k] = rho(static_cast<double>(k) / static_cast<double>(n));
    return p;
}

double steady_current(const TransportModel& model, double rho1, double rho2)
{
    model.require_domain(rho1, "rho1");
    model.require_domain(rho2, "rho2");
    if (rho1 == rho2) return 0.0;
    return model.integral_D(rho2, rho1);
}

double steady_density_at(const TransportModel& model, double rho1, double rho2, double x)
{
    if (x <= 0.0) return rho1;
    if (x >= 1.0) return rho2;
    if (rho1 == rho2) return rho1;
    const double j = steady_current(model, rho1, rho2);
    // phi(r) = int_r^rho1 D - x j is monotone in r, -x j at rho1 and (1-x) j at rho2
    auto phi = [&](double r) { return model.integral_D(r, rho1) - x * j; };
    double a = rho1, b = rho2;
    double fa = -x * j;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double fm = phi(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

SteadyState steady_profile(const TransportModel& model, double rho1, double rho2, std::size_t n)
{
    if (n < 16) fail(ErrorCode::DomainViolation, "steady profile needs n >= 16");
    SteadyState s;
    s.current = steady_current(model, rho1, rho2);
    s.profile = DensityProfile::sample(n, [&](double x) { return steady_density_at(model, rho1, rho2, x); }, rho1, rho2);
    return s;
}

Eigen::MatrixXd Covariance::full() const
{
    Eigen::MatrixXd P = long_range;
    for (std::size_t k = 0; k < local.size(); ++k) P(k, k) += local[k] / h;
    return P;
}

Covariance covariance(const TransportModel& model, double rho1, double rho2, std::size_t n)
{
    if (n < 4 || n > 512) fail(ErrorCode::DomainViolation, "covariance grid needs 4 <= n <= 512");
    model.require_domain(rho1, "rho1");
    model.require_domain(rho2, "rho2");
    const std::size_t N = n - 1;
    const double h = 1.0 / static_cast<double>(n);
    const double h3 = h * h * h;

    Covariance cov;
    cov.h = h;
    cov.x.resize(N);
    cov.local.resize(N);
    Eigen::VectorXd D(N), sig(N), face(n);
    for (std::size_t k = 0; k < N; ++k) {
        cov.x[k] = static_cast<double>(k + 1) * h;
        const double r = steady_density_at(model, rho1, rho2, cov.x[k]);
        D(k) = model.D(r);
        sig(k) = model.sigma(r);
        if (!(D(k) > 0.0)) fail(ErrorCode::DomainViolation, "D must be positive along the steady profile");
        cov.local[k] = sig(k) / (2.0 * D(k));
    }
    for (std::size_t f = 0; f < n; ++f)
        face(f) = model.sigma(steady_density_at(model, rho1, rho2, (static_cast<double>(f) + 0.5) * h));

    // source left over once the local part diag(sigma / 2D) / h is subtracted
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        R(i, i) = (face(i) + face(i + 1) - 2.0 * sig(i)) / h3;
        if (i + 1 < N) {
            R(i, i + 1) = (0.5 * (sig(i) + sig(i + 1)) - face(i + 1)) / h3;
            R(i + 1, i) = R(i, i + 1);
        }
    }

    // A = Lap diag(D) is similar to the symmetric S = D^{1/2} Lap D^{1/2}
    const Eigen::VectorXd root = D.cwiseSqrt();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        S(i, i) = -2.0 * D(i) / (h * h);
        if (i + 1 < N) {
            S(i, i + 1) = root(i) * root(i + 1) / (h * h);
            S(i + 1, i) = S(i, i + 1);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    if (eig.info() != Eigen::Success) fail(ErrorCode::SolverSingular, "eigendecomposition of the drift failed");
    const Eigen::MatrixXd& Q = eig.eigenvectors();
    const Eigen::VectorXd& lam = eig.eigenvalues();

    const Eigen::MatrixXd Rt = root.asDiagonal() * R * root.asDiagonal();
    Eigen::MatrixXd Y = -(Q.transpose() * Rt * Q);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const double d = lam(i) + lam(j);
            if (d == 0.0 || !std::isfinite(d)) fail(ErrorCode::SolverSingular, "singular Lyapunov operator");
            Y(i, j) /= d;
        }
    const Eigen::VectorXd inv_root = root.cwiseInverse();
    cov.long_range = inv_root.asDiagonal() * (Q * Y * Q.transpose()) * inv_root.asDiagonal();
    if (!cov.long_range.allFinite()) fail(ErrorCode::SolverSingular, "non-finite covariance");
    return cov;
}

double number_variance_numeric(const TransportModel& model, double rho1, double rho2, std::size_t n)
{
    const Covariance cov = covariance(model, rho1, rho2, n);
    std::vector<double> local(n + 1);
    local[0] = model.sigma(rho1) / (2.0 * model.D(rho1));
    local[n] = model.sigma(rho2) / (2.0 * model.D(rho2));
    for (std::size_t k = 1; k < n; ++k) local[k] = cov.local[k - 1];
    return quad::simpson(local, cov.h) + cov.long_range.sum() * cov.h * cov.h;
}

double number_variance_ssep(double rho1, double rho2)
{
    const double d = rho1 - rho2;
    return 0.5 * (rho1 + rho2) - (rho1 * rho1 + rho1 * rho2 + rho2 * rho2) / 3.0 - d * d / 12.0;
}

double number_variance(const TransportModel& model, double rho1, double rho2)
{
    if (model.name() == "ssep") {
        model.require_domain(rho1, "rho1");
        model.require_domain(rho2, "rho2");
        return number_variance_ssep(rho1, rho2);
    }
    return number_variance_numeric(model, rho1, rho2);
}

double equilibrium_density_ldf(const TransportModel& model, double rho_star, const DensityProfile& profile)
{
    model.require_domain(rho_star, "rho*");
    require_profile(model, profile);
    const double f0 = model.f(rho_star);
    const double df0 = model.df(rho_star);
    std::vector<double> y(profile.values.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double r = profile.values[k];
        y[k] = model.f(r) - f0 - (r - rho_star) * df0;
    }
    return quad::simpson(y, profile.h());
}

double zrp_steady_density_at(const ZrpRates& rates, double rho1, double rho2, double x)
{
    const double z1 = zrp_thermodynamics(rates, rho1).z;
    const double z2 = zrp_thermodynamics(rates, rho2).z;
    return zrp_density(rates, (1.0 - x) * z1 + x * z2);
}

double zrp_density_ldf(const ZrpRates& rates, double rho1, double rho2, const DensityProfile& profile)
{
    if (profile.values.size() < 3) fail(ErrorCode::GridMismatch, "profile needs at least two intervals");
    for (double v : {rho1, rho2})
        if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::DomainViolation, "reservoir density must be nonnegative");
    const double z1 = zrp_thermodynamics(rates, rho1).z;
    const double z2 = zrp_thermodynamics(rates, rho2).z;
    std::vector<double> y(profile.values.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double r = profile.values[k];
        if (!(r >= 0.0) || !std::isfinite(r)) {
            std::ostringstream os;
            os << "profile value " << r << " is negative";
            fail(ErrorCode::DomainViolation, os.str());
        }
        const double x = profile.x(k);
        const double z = (1.0 - x) * z1 + x * z2;
        const double rs = zrp_density(rates, z);
        const ZrpState at = zrp_thermodynamics(rates, r);
        const ZrpState star = zrp_thermodynamics(rates, rs);
        y[k] = at.f - star.f - (r - rs) * std::log(z);
    }
    return quad::simpson(y, profile.h());
}

}  // namespace ldtk
