#pragma once

#include "ldtk/lattice_models.hpp"
#include "ldtk/markov.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ldtk {

// Lattice simulated site by site, without enumerating configurations.
struct LatticeSpec {
    enum class Kind { Exclusion, FreeWalkers };
    Kind kind = Kind::Exclusion;
    // Exclusion: open chain or ring.  FreeWalkers: ring of L sites carrying
    // n_particles independent walkers hopping at rate 1 each way.
    SsepParams params;
};

struct SimulationPlan {
    std::variant<MarkovGenerator, LatticeSpec> model;
    double t_max = 0.0;
    std::size_t n_replicas = 1;
    std::uint64_t seed = 0;
    // Recording times in (burn_in, t_max], increasing.  Consecutive points
    // delimit the averaging windows.  Empty: n_windows equal windows.
    std::vector<double> measurement_grid;
    std::size_t n_windows = 20;
    // Negative: 10 L^2 for lattices, 0 for generators.
    double burn_in = -1.0;
    bool record_pairs = false;
    // Generators only: histogram the state every sample_interval time units.
    double sample_interval = 0.0;
    std::size_t initial_state = 0;
};

struct ReplicaRecord {
    std::uint64_t stream_seed = 0;
    std::vector<std::vector<double>> Q;  // Q[k][observable], counted from burn_in
    std::uint64_t events = 0;
    double cpu_seconds = 0.0;
};

struct SimulationRecord {
    std::vector<std::string> observables;
    std::vector<double> grid;  // absolute times
    double burn_in = 0.0;
    double t_max = 0.0;
    std::size_t n_sites = 0;   // lattice sites, or generator states
    bool exclusion = false;
    std::vector<ReplicaRecord> replicas;
    // Window averages summed over replicas: occupation[w][i], pairs[w][i * n_sites + j].
    std::vector<std::vector<double>> occupation;
    std::vector<std::vector<double>> pairs;
    std::vector<std::uint64_t> state_samples;
    std::uint64_t total_events = 0;
    double cpu_seconds = 0.0;
};

// Same trajectories and estimates; timing fields are ignored.
bool same_outcome(const SimulationRecord& a, const SimulationRecord& b);

// Replica k uses stream_engine(seed, k).  Observables: the generator's, or
// "left" and "right" for lattices (ring: bond L->1 and lattice-averaged
// current).
SimulationRecord simulate(const SimulationPlan& plan);

struct CurrentStatistics {
    double mean_rate = 0.0;
    double mean_error = 0.0;
    double variance_rate = 0.0;
    double variance_error = 0.0;
    std::size_t samples = 0;
};

// Replica ensemble when there are at least 2 replicas, else batch means over
// the measurement windows (at least 10).  Errors by jackknife.
CurrentStatistics current_statistics(const SimulationRecord& record, std::size_t observable = 0);

struct OccupationStatistics {
    std::vector<double> mean;
    std::vector<double> mean_error;
    // Truncated correlations n_i n_j - n_i n_j, row-major; empty unless pairs were recorded.
    std::vector<double> connected;
    std::vector<double> connected_error;
};

// Jackknife over measurement windows (at least 10).
OccupationStatistics occupation_statistics(const SimulationRecord& record);

}  // namespace ldtk
