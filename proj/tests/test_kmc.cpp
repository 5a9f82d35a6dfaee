#include "doctest.h"

#include "ldtk/error.hpp"
#include "ldtk/kmc.hpp"
#include "ldtk/lattice_models.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

using namespace ldtk;

namespace {

LatticeSpec exclusion(const SsepParams& p) { return {LatticeSpec::Kind::Exclusion, p}; }

bool within(double value, double target, double error, double k = 3.0)
{
    return std::abs(value - target) <= k * error;
}

}  // namespace

TEST_CASE("open chain mean current from one long run")
{
    SimulationPlan plan;
    plan.model = exclusion(ssep_open(10, 1, 0, 1, 0));
    plan.t_max = 1e5;
    plan.n_windows = 100;
    plan.seed = 3;
    const auto rec = simulate(plan);
    CHECK(rec.burn_in == 1000.0);
    CHECK(rec.total_events > 0);
    for (std::size_t obs : {0u, 1u}) {
        const auto s = current_statistics(rec, obs);
        CHECK(s.samples == 100);
        CHECK(s.mean_error > 0.0);
        CHECK(within(s.mean_rate, 1.0 / 11.0, s.mean_error));
    }
}

TEST_CASE("replicas are reproducible and independent of the thread count")
{
    SimulationPlan plan;
    plan.model = exclusion(ssep_open(5, 1, 0.2, 0.7, 0.1));
    plan.t_max = 400.0;
    plan.n_replicas = 40;
    plan.seed = 99;
    plan.record_pairs = true;
    setenv("LDTK_THREADS", "1", 1);
    const auto a = simulate(plan);
    setenv("LDTK_THREADS", "3", 1);
    const auto b = simulate(plan);
    unsetenv("LDTK_THREADS");
    CHECK(same_outcome(a, b));
    CHECK(a.replicas[0].Q != a.replicas[1].Q);
    CHECK(a.replicas[0].stream_seed != a.replicas[1].stream_seed);

    plan.seed = 100;
    CHECK_FALSE(same_outcome(a, simulate(plan)));
}

TEST_CASE("quantum dot current and stationary law")
{
    SimulationPlan plan;
    plan.model = quantum_dot_generator(2, 1, 1, 1);
    plan.t_max = 1e6;
    plan.n_windows = 200;
    plan.sample_interval = 2.0;
    plan.seed = 17;
    const auto rec = simulate(plan);

    const auto s = current_statistics(rec, 0);
    CHECK(within(s.mean_rate, 0.2, s.mean_error));

    // chi-square with one degree of freedom against (2/5, 3/5)
    const double n0 = static_cast<double>(rec.state_samples[0]);
    const double n1 = static_cast<double>(rec.state_samples[1]);
    const double total = n0 + n1;
    CHECK(total == doctest::Approx(5e5).epsilon(1e-5));
    const double chi2 = (n0 - 0.4 * total) * (n0 - 0.4 * total) / (0.4 * total) +
                        (n1 - 0.6 * total) * (n1 - 0.6 * total) / (0.6 * total);
    const double p = std::erfc(std::sqrt(chi2 / 2.0));
    CHECK(p > 0.01);

    // time fractions per state
    const auto occ = occupation_statistics(rec);
    CHECK(within(occ.mean[1], 0.6, occ.mean_error[1]));
}

TEST_CASE("equilibrium chain carries no mean current")
{
    SimulationPlan plan;
    plan.model = exclusion(ssep_open(4, 1, 1, 1, 1));
    plan.t_max = 5e4;
    plan.n_windows = 50;
    plan.seed = 5;
    const auto s = current_statistics(simulate(plan), 0);
    CHECK(within(s.mean_rate, 0.0, s.mean_error));
}

TEST_CASE("open chain profile and pair correlations")
{
    const auto params = ssep_open(8, 1, 0, 1, 0);
    SimulationPlan plan;
    plan.model = exclusion(params);
    plan.n_replicas = 8;
    plan.t_max = 640.0 + 4e5;
    plan.n_windows = 40;
    plan.record_pairs = true;
    plan.seed = 2024;
    const auto rec = simulate(plan);
    const auto occ = occupation_statistics(rec);
    const auto exact = ssep_steady_statistics(params);
    for (int i = 0; i < 8; ++i) CHECK(within(occ.mean[i], exact.profile[i], occ.mean_error[i]));

    const double c18 = occ.connected[0 * 8 + 7];
    const double e18 = occ.connected_error[0 * 8 + 7];
    CHECK(c18 < 0.0);
    CHECK(within(c18, ssep_two_point(params, 1, 8), e18));
    CHECK(occ.connected[7 * 8 + 0] == c18);
}

TEST_CASE("equilibrium product measure has no pair correlations")
{
    SimulationPlan plan;
    plan.model = exclusion(ssep_open(6, 1, 1, 1, 1));
    plan.t_max = 360.0 + 1e5;
    plan.n_windows = 40;
    plan.record_pairs = true;
    plan.seed = 8;
    const auto occ = occupation_statistics(simulate(plan));
    for (int i = 0; i < 6; ++i) {
        CHECK(within(occ.mean[i], 0.5, occ.mean_error[i]));
        for (int j = 0; j < 6; ++j)
            if (i != j) CHECK(within(occ.connected[i * 6 + j], 0.0, occ.connected_error[i * 6 + j]));
    }
}

TEST_CASE("ring conserves particles")
{
    SimulationPlan plan;
    plan.model = exclusion(ssep_ring(12, 5, 0.4));
    plan.t_max = 2000.0;
    plan.burn_in = 100.0;
    plan.n_replicas = 3;
    plan.n_windows = 10;
    plan.seed = 1;
    const auto rec = simulate(plan);
    for (const auto& w : rec.occupation) {
        const double total = std::accumulate(w.begin(), w.end(), 0.0) / 3.0;
        CHECK(total == doctest::Approx(5.0).epsilon(1e-9));
        for (double v : w) CHECK((v >= 0.0 && v <= 3.0));
    }
    // driven ring: 5 * 7 / 11 * (1 - r) / L current per bond
    const auto s = current_statistics(rec, 1);
    CHECK(within(s.mean_rate, 5.0 * 7.0 / 11.0 * 0.6 / 12.0, s.mean_error, 4.0));
}

TEST_CASE("free walkers on a ring: current variance sigma(rho)/L")
{
    SimulationPlan plan;
    plan.model = LatticeSpec{LatticeSpec::Kind::FreeWalkers, ssep_ring(100, 100)};
    plan.t_max = 1e5;
    plan.burn_in = 0.0;
    plan.n_windows = 10000;
    plan.seed = 42;
    const auto rec = simulate(plan);
    const auto s = current_statistics(rec, 1);
    CHECK(std::abs(s.variance_rate / 0.02 - 1.0) < 0.1);
    CHECK(within(s.mean_rate, 0.0, s.mean_error));
}

TEST_CASE("invalid plans")
{
    SimulationPlan plan;
    plan.model = exclusion(ssep_open(3, 1, 0, 1, 0));
    plan.t_max = 50.0;  // shorter than the default burn-in of 90
    CHECK_THROWS_AS(simulate(plan), Error);
    plan.t_max = 200.0;
    plan.n_replicas = 0;
    CHECK_THROWS_AS(simulate(plan), Error);
    plan.n_replicas = 1;
    plan.n_windows = 5;
    const auto rec = simulate(plan);
    try {
        current_statistics(rec, 0);
        FAIL("expected InsufficientData");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientData);
    }
    plan.measurement_grid = {150.0, 120.0};
    CHECK_THROWS_AS(simulate(plan), Error);
}
