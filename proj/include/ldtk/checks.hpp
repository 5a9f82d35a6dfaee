#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ldtk {

// Cross-level invariant suite: exact chains, closed forms, macroscopic
// theory and simulation checked against each other.
struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Reduced statistics shrink the Monte Carlo criteria only.
enum class CheckLevel { Reduced, Full };

CheckResult check_quantum_dot_scgf();
CheckResult check_fluctuation_symmetries();
CheckResult check_ssep_statistics();
CheckResult check_onsager_einstein();
CheckResult check_covariance();
CheckResult check_additivity();
CheckResult check_ring_instability();
CheckResult check_density_ldf();
CheckResult check_hamilton_jacobi();
CheckResult check_simulation(CheckLevel level);
CheckResult check_infinite_line(CheckLevel level);

// Criteria 1-11 in order; `report` sees each result as soon as it is known.
std::vector<CheckResult> run_checks(CheckLevel level, const std::function<void(const CheckResult&)>& report = {});

// "PASS  3  name: detail"
std::string format_check(const CheckResult& r);

}  // namespace ldtk
