#include "ldtk/kmc.hpp"

#include "ldtk/error.hpp"
#include "ldtk/parallel.hpp"
#include "ldtk/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace ldtk {

namespace {

constexpr std::size_t chunk_replicas = 16;

// Everything a single replica accumulates.  Window sums are added chunk by
// chunk in replica order, so the merge does not depend on scheduling.
struct Accumulator {
    std::vector<std::vector<double>> occupation;
    std::vector<std::vector<double>> pairs;
    std::vector<std::uint64_t> samples;

    void resize(std::size_t windows, std::size_t sites, bool with_pairs, std::size_t states)
    {
        occupation.assign(windows, std::vector<double>(sites, 0.0));
        if (with_pairs) pairs.assign(windows, std::vector<double>(sites * sites, 0.0));
        samples.assign(states, 0);
    }

    void add(const Accumulator& o)
    {
        for (std::size_t w = 0; w < occupation.size(); ++w)
            for (std::size_t i = 0; i < occupation[w].size(); ++i) occupation[w][i] += o.occupation[w][i];
        for (std::size_t w = 0; w < pairs.size(); ++w)
            for (std::size_t i = 0; i < pairs[w].size(); ++i) pairs[w][i] += o.pairs[w][i];
        for (std::size_t s = 0; s < samples.size(); ++s) samples[s] += o.samples[s];
    }
};

// Tracks the measurement clock, integrated observables and lazily updated
// time integrals of site values (and their products).
class Recorder {
public:
    Recorder(const std::vector<double>& times, std::size_t n_obs, std::vector<double> values, bool pairs,
             double sample_interval, ReplicaRecord& out, Accumulator& acc)
        : times_(times), q_(n_obs, 0.0), n_(std::move(values)), pairs_(pairs), sample_dt_(sample_interval),
          out_(out), acc_(acc)
    {
        const std::size_t L = n_.size();
        integral_.assign(L, 0.0);
        last_.assign(L, 0.0);
        if (pairs_) {
            pair_integral_.assign(L * L, 0.0);
            pair_last_.assign(L * L, 0.0);
        }
        next_sample_ = times_.front();
    }

    bool measuring() const { return next_ > 0; }
    double value(std::size_t i) const { return n_[i]; }
    void add_q(std::size_t k, double dq) { q_[k] += dq; }

    // The configuration is constant on [current, t).
    void advance_to(double t, std::size_t state)
    {
        if (sample_dt_ > 0.0) {
            while (next_sample_ <= t && next_sample_ <= times_.back()) {
                if (next_sample_ > times_.front()) ++acc_.samples[state];
                next_sample_ += sample_dt_;
            }
        }
        while (next_ < times_.size() && times_[next_] <= t) {
            const double T = times_[next_];
            if (next_ == 0) {
                std::fill(q_.begin(), q_.end(), 0.0);
                std::fill(last_.begin(), last_.end(), T);
                std::fill(pair_last_.begin(), pair_last_.end(), T);
            } else {
                close_window(next_ - 1, T);
                out_.Q.push_back(q_);
            }
            ++next_;
        }
    }

    bool finished() const { return next_ >= times_.size(); }

    void set(std::size_t i, double v, double t)
    {
        if (measuring()) {
            const std::size_t L = n_.size();
            integral_[i] += n_[i] * (t - last_[i]);
            last_[i] = t;
            if (pairs_) {
                for (std::size_t j = 0; j < L; ++j) {
                    if (j == i) continue;
                    const std::size_t ij = i * L + j;
                    pair_integral_[ij] += n_[i] * n_[j] * (t - pair_last_[ij]);
                    pair_last_[ij] = t;
                    pair_integral_[j * L + i] = pair_integral_[ij];
                    pair_last_[j * L + i] = t;
                }
            }
        }
        n_[i] = v;
    }

private:
    void close_window(std::size_t w, double T)
    {
        const std::size_t L = n_.size();
        const double width = T - times_[w];
        for (std::size_t i = 0; i < L; ++i) {
            integral_[i] += n_[i] * (T - last_[i]);
            acc_.occupation[w][i] += integral_[i] / width;
            integral_[i] = 0.0;
            last_[i] = T;
        }
        if (pairs_) {
            for (std::size_t i = 0; i < L; ++i)
                for (std::size_t j = 0; j < L; ++j) {
                    if (i == j) continue;
                    const std::size_t ij = i * L + j;
                    pair_integral_[ij] += n_[i] * n_[j] * (T - pair_last_[ij]);
                    pair_last_[ij] = T;
                    acc_.pairs[w][ij] += pair_integral_[ij] / width;
                    pair_integral_[ij] = 0.0;
                }
        }
    }

    const std::vector<double>& times_;
    std::vector<double> q_;
    std::vector<double> n_;
    bool pairs_;
    double sample_dt_;
    double next_sample_ = 0.0;
    ReplicaRecord& out_;
    Accumulator& acc_;
    std::size_t next_ = 0;
    std::vector<double> integral_, last_, pair_integral_, pair_last_;
};

double waiting_time(std::mt19937_64& rng, double total)
{
    if (!std::isfinite(total)) fail(ErrorCode::RateOverflow, "total rate is not finite");
    if (total <= 0.0) fail(ErrorCode::ZeroTotalRate, "no transition available (absorbing configuration)");
    return -std::log1p(-uniform01(rng)) / total;
}

void run_generator(const MarkovGenerator& gen, const SimulationPlan& plan, const std::vector<double>& times,
                   std::mt19937_64& rng, ReplicaRecord& out, Accumulator& acc)
{
    std::size_t state = plan.initial_state;
    std::vector<double> values(gen.n_states(), 0.0);
    values[state] = 1.0;
    Recorder rec(times, gen.n_observables(), std::move(values), false, plan.sample_interval, out, acc);
    double t = 0.0;
    while (true) {
        const double total = gen.exit_rate(state);
        const double t_next = t + waiting_time(rng, total);
        rec.advance_to(std::min(t_next, plan.t_max), state);
        if (t_next > plan.t_max || rec.finished()) break;
        t = t_next;
        const auto out_ids = gen.outgoing(state);
        double target = uniform01(rng) * total;
        std::uint32_t chosen = out_ids.back();
        for (std::uint32_t id : out_ids) {
            target -= gen.rate(id);
            if (target < 0.0) {
                chosen = id;
                break;
            }
        }
        const auto inc = gen.increments(chosen);
        for (std::size_t k = 0; k < inc.size(); ++k) rec.add_q(k, inc[k]);
        rec.set(state, 0.0, t);
        state = gen.to(chosen);
        rec.set(state, 1.0, t);
        ++out.events;
    }
}

void run_exclusion(const SsepParams& p, const SimulationPlan& plan, const std::vector<double>& times,
                   std::mt19937_64& rng, ReplicaRecord& out, Accumulator& acc)
{
    const std::size_t L = static_cast<std::size_t>(p.L);
    const bool ring = p.geometry == Geometry::Ring;
    std::vector<double> values(L, 0.0);
    if (ring)
        for (int i = 0; i < p.n_particles; ++i) values[static_cast<std::size_t>(i)] = 1.0;
    std::vector<unsigned char> n(L);
    for (std::size_t i = 0; i < L; ++i) n[i] = values[i] > 0.0;
    Recorder rec(times, 2, std::move(values), plan.record_pairs, 0.0, out, acc);
    const std::size_t bonds = ring ? L : L - 1;
    const double inv_L = 1.0 / static_cast<double>(L);

    auto flip = [&](std::size_t i, double t) {
        n[i] ^= 1;
        rec.set(i, n[i], t);
    };
    auto total_rate = [&]() {
        double R = 0.0;
        if (!ring) {
            R += n[0] ? p.gamma : p.alpha;
            R += n[L - 1] ? p.beta : p.delta;
        }
        for (std::size_t b = 0; b < bonds; ++b) {
            const std::size_t j = b + 1 == L ? 0 : b + 1;
            if (n[b] && !n[j]) R += 1.0;
            else if (!n[b] && n[j]) R += p.r;
        }
        return R;
    };

    double t = 0.0;
    while (true) {
        const double total = total_rate();
        const double t_next = t + waiting_time(rng, total);
        rec.advance_to(std::min(t_next, plan.t_max), 0);
        if (t_next > plan.t_max || rec.finished()) break;
        t = t_next;
        double target = uniform01(rng) * total;
        bool done = false;
        if (!ring) {
            const double left_rate = n[0] ? p.gamma : p.alpha;
            if (target < left_rate) {
                rec.add_q(0, n[0] ? -1.0 : 1.0);
                flip(0, t);
                done = true;
            } else {
                target -= left_rate;
                const double right_rate = n[L - 1] ? p.beta : p.delta;
                if (target < right_rate) {
                    rec.add_q(1, n[L - 1] ? 1.0 : -1.0);
                    flip(L - 1, t);
                    done = true;
                } else {
                    target -= right_rate;
                }
            }
        }
        for (std::size_t b = 0; !done && b < bonds; ++b) {
            const std::size_t j = b + 1 == L ? 0 : b + 1;
            double rate = 0.0;
            double dir = 0.0;
            if (n[b] && !n[j]) {
                rate = 1.0;
                dir = 1.0;
            } else if (!n[b] && n[j]) {
                rate = p.r;
                dir = -1.0;
            }
            if (rate == 0.0) continue;
            if (target < rate || b + 1 == bonds) {
                flip(b, t);
                flip(j, t);
                if (ring) {
                    if (j == 0) rec.add_q(0, dir);
                    rec.add_q(1, dir * inv_L);
                }
                done = true;
            } else {
                target -= rate;
            }
        }
        ++out.events;
    }
}

void run_walkers(const SsepParams& p, const SimulationPlan& plan, const std::vector<double>& times,
                 std::mt19937_64& rng, ReplicaRecord& out, Accumulator& acc)
{
    const std::size_t L = static_cast<std::size_t>(p.L);
    const std::size_t N = static_cast<std::size_t>(p.n_particles);
    std::vector<std::size_t> pos(N);
    std::vector<double> values(L, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
        pos[k] = k * L / N;
        values[pos[k]] += 1.0;
    }
    Recorder rec(times, 2, std::move(values), plan.record_pairs, 0.0, out, acc);
    const double total = 2.0 * static_cast<double>(N);
    const double inv_L = 1.0 / static_cast<double>(L);
    double t = 0.0;
    while (true) {
        const double t_next = t + waiting_time(rng, total);
        rec.advance_to(std::min(t_next, plan.t_max), 0);
        if (t_next > plan.t_max || rec.finished()) break;
        t = t_next;
        const std::size_t k = std::min(static_cast<std::size_t>(uniform01(rng) * total), 2 * N - 1);
        const std::size_t w = k / 2;
        const std::size_t from = pos[w];
        const bool right = k % 2 == 0;
        const std::size_t to = right ? (from + 1 == L ? 0 : from + 1) : (from == 0 ? L - 1 : from - 1);
        rec.set(from, rec.value(from) - 1.0, t);
        rec.set(to, rec.value(to) + 1.0, t);
        pos[w] = to;
        const double dir = right ? 1.0 : -1.0;
        if ((right && to == 0) || (!right && from == 0)) rec.add_q(0, dir);
        rec.add_q(1, dir * inv_L);
        ++out.events;
    }
}

std::vector<double> measurement_times(const SimulationPlan& plan, double burn_in)
{
    std::vector<double> times{burn_in};
    if (plan.measurement_grid.empty()) {
        if (plan.n_windows == 0) fail(ErrorCode::InsufficientData, "need at least one measurement window");
        const double width = (plan.t_max - burn_in) / static_cast<double>(plan.n_windows);
        for (std::size_t k = 1; k < plan.n_windows; ++k) times.push_back(burn_in + width * static_cast<double>(k));
        times.push_back(plan.t_max);
    } else {
        for (double g : plan.measurement_grid) {
            if (!(g > times.back()) || g > plan.t_max)
                fail(ErrorCode::DomainViolation, "measurement grid must increase inside (burn_in, t_max]");
            times.push_back(g);
        }
    }
    return times;
}

}  // namespace

bool same_outcome(const SimulationRecord& a, const SimulationRecord& b)
{
    if (a.replicas.size() != b.replicas.size()) return false;
    for (std::size_t r = 0; r < a.replicas.size(); ++r) {
        const auto& x = a.replicas[r];
        const auto& y = b.replicas[r];
        if (x.stream_seed != y.stream_seed || x.Q != y.Q || x.events != y.events) return false;
    }
    return a.observables == b.observables && a.grid == b.grid && a.burn_in == b.burn_in && a.t_max == b.t_max &&
           a.occupation == b.occupation && a.pairs == b.pairs && a.state_samples == b.state_samples &&
           a.total_events == b.total_events;
}

SimulationRecord simulate(const SimulationPlan& plan)
{
    if (plan.n_replicas < 1) fail(ErrorCode::InsufficientData, "need at least one replica");
    const MarkovGenerator* gen = std::get_if<MarkovGenerator>(&plan.model);
    const LatticeSpec* lat = std::get_if<LatticeSpec>(&plan.model);

    SimulationRecord rec;
    std::size_t states = 0;
    double default_burn = 0.0;
    if (gen) {
        rec.observables = gen->observable_names();
        rec.n_sites = gen->n_states();
        if (plan.initial_state >= gen->n_states()) fail(ErrorCode::IndexOutOfRange, "initial state out of range");
        if (plan.sample_interval > 0.0) states = gen->n_states();
    } else {
        const SsepParams& p = lat->params;
        if (lat->kind == LatticeSpec::Kind::Exclusion) {
            if (p.L < 1 || (p.geometry == Geometry::Ring && (p.L < 2 || p.n_particles < 0 || p.n_particles > p.L)) ||
                p.r < 0.0 || p.alpha < 0.0 || p.beta < 0.0 || p.gamma < 0.0 || p.delta < 0.0)
                fail(ErrorCode::DomainViolation, "invalid exclusion lattice");
            rec.exclusion = true;
        } else if (p.L < 2 || p.n_particles < 1) {
            fail(ErrorCode::DomainViolation, "walker ring needs L >= 2 and at least one walker");
        }
        rec.observables = {"left", "right"};
        rec.n_sites = static_cast<std::size_t>(p.L);
        default_burn = 10.0 * p.L * p.L;
    }
    const double burn_in = plan.burn_in < 0.0 ? default_burn : plan.burn_in;
    if (!(plan.t_max > burn_in)) fail(ErrorCode::DomainViolation, "t_max must exceed burn_in");
    if (plan.record_pairs && rec.n_sites > 256) fail(ErrorCode::TooLarge, "pair correlations limited to 256 sites");

    const std::vector<double> times = measurement_times(plan, burn_in);
    rec.grid.assign(times.begin() + 1, times.end());
    rec.burn_in = burn_in;
    rec.t_max = plan.t_max;
    const std::size_t windows = rec.grid.size();
    const bool pairs = plan.record_pairs && !gen;

    rec.replicas.resize(plan.n_replicas);
    const std::size_t n_chunks = (plan.n_replicas + chunk_replicas - 1) / chunk_replicas;
    std::vector<Accumulator> chunk_acc(n_chunks);

    parallel_for(n_chunks, [&](std::size_t c) {
        Accumulator& total = chunk_acc[c];
        total.resize(windows, rec.n_sites, pairs, states);
        const std::size_t end = std::min(plan.n_replicas, (c + 1) * chunk_replicas);
        for (std::size_t r = c * chunk_replicas; r < end; ++r) {
            const auto start = std::chrono::steady_clock::now();
            ReplicaRecord& out = rec.replicas[r];
            out.stream_seed = splitmix64(plan.seed + 0x9E3779B97F4A7C15ull * (r + 1));
            auto rng = stream_engine(plan.seed, r);
            Accumulator acc;
            acc.resize(windows, rec.n_sites, pairs, states);
            if (gen) run_generator(*gen, plan, times, rng, out, acc);
            else if (lat->kind == LatticeSpec::Kind::Exclusion) run_exclusion(lat->params, plan, times, rng, out, acc);
            else run_walkers(lat->params, plan, times, rng, out, acc);
            total.add(acc);
            out.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    });

    Accumulator merged;
    merged.resize(windows, rec.n_sites, pairs, states);
    for (const auto& a : chunk_acc) merged.add(a);
    rec.occupation = std::move(merged.occupation);
    rec.pairs = std::move(merged.pairs);
    rec.state_samples = std::move(merged.samples);
    for (const auto& r : rec.replicas) {
        rec.total_events += r.events;
        rec.cpu_seconds += r.cpu_seconds;
    }
    if (rec.total_events == 0) fail(ErrorCode::InsufficientData, "no events were simulated");
    return rec;
}

namespace {

struct Jackknife {
    double value;
    double error;
};

// Delete-one-block jackknife of an estimator over n ordered samples.
template <class Estimator>
Jackknife jackknife(std::size_t n, const Estimator& estimate)
{
    const std::size_t blocks = std::min<std::size_t>(n, 100);
    std::vector<double> theta(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * n / blocks;
        const std::size_t hi = (b + 1) * n / blocks;
        theta[b] = estimate(lo, hi);
    }
    double mean = 0.0;
    for (double x : theta) mean += x;
    mean /= static_cast<double>(blocks);
    double ss = 0.0;
    for (double x : theta) ss += (x - mean) * (x - mean);
    const double B = static_cast<double>(blocks);
    return {estimate(n, n), std::sqrt((B - 1.0) / B * ss)};
}

}  // namespace

CurrentStatistics current_statistics(const SimulationRecord& record, std::size_t observable)
{
    if (observable >= record.observables.size()) fail(ErrorCode::IndexOutOfRange, "observable index out of range");
    CurrentStatistics out;
    if (record.replicas.size() >= 2) {
        const std::size_t n = record.replicas.size();
        const double T = record.grid.back() - record.burn_in;
        std::vector<double> x(n);
        for (std::size_t r = 0; r < n; ++r) x[r] = record.replicas[r].Q.back()[observable];
        double shift = 0.0;
        for (double v : x) shift += v;
        shift /= static_cast<double>(n);
        double s1 = 0.0, s2 = 0.0;
        for (double v : x) {
            s1 += v - shift;
            s2 += (v - shift) * (v - shift);
        }
        // moments with samples [lo, hi) removed
        auto moments = [&](std::size_t lo, std::size_t hi) {
            double a = s1, b = s2;
            for (std::size_t r = lo; r < hi; ++r) {
                a -= x[r] - shift;
                b -= (x[r] - shift) * (x[r] - shift);
            }
            const double m = static_cast<double>(n - (hi - lo));
            return std::pair{a / m, (b - a * a / m) / (m - 1.0)};
        };
        const auto mean = jackknife(n, [&](std::size_t lo, std::size_t hi) { return (shift + moments(lo, hi).first) / T; });
        const auto var = jackknife(n, [&](std::size_t lo, std::size_t hi) { return moments(lo, hi).second / T; });
        out = {mean.value, mean.error, var.value, var.error, n};
        return out;
    }

    const auto& Q = record.replicas.front().Q;
    const std::size_t n = Q.size();
    if (n < 10) fail(ErrorCode::InsufficientData, "batch means need at least 10 measurement windows");
    std::vector<double> dq(n), dt(n);
    for (std::size_t k = 0; k < n; ++k) {
        dq[k] = Q[k][observable] - (k ? Q[k - 1][observable] : 0.0);
        dt[k] = record.grid[k] - (k ? record.grid[k - 1] : record.burn_in);
    }
    auto rate = [&](std::size_t lo, std::size_t hi) {
        double a = 0.0, b = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (k < lo || k >= hi) {
                a += dq[k];
                b += dt[k];
            }
        return a / b;
    };
    auto variance = [&](std::size_t lo, std::size_t hi) {
        const double m = rate(lo, hi);
        double ss = 0.0, tt = 0.0;
        std::size_t used = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (k < lo || k >= hi) {
                ss += (dq[k] - m * dt[k]) * (dq[k] - m * dt[k]);
                tt += dt[k];
                ++used;
            }
        return ss / tt * static_cast<double>(used) / static_cast<double>(used - 1);
    };
    const auto mean = jackknife(n, rate);
    const auto var = jackknife(n, variance);
    out = {mean.value, mean.error, var.value, var.error, n};
    return out;
}

OccupationStatistics occupation_statistics(const SimulationRecord& record)
{
    const std::size_t W = record.occupation.size();
    if (W < 10) fail(ErrorCode::InsufficientData, "occupation statistics need at least 10 measurement windows");
    const std::size_t L = record.n_sites;
    const double R = static_cast<double>(record.replicas.size());
    std::vector<double> width(W);
    for (std::size_t w = 0; w < W; ++w) width[w] = record.grid[w] - (w ? record.grid[w - 1] : record.burn_in);

    auto weighted = [&](const std::vector<std::vector<double>>& data, std::size_t idx, std::size_t lo, std::size_t hi) {
        double a = 0.0, b = 0.0;
        for (std::size_t w = 0; w < W; ++w)
            if (w < lo || w >= hi) {
                a += width[w] * data[w][idx] / R;
                b += width[w];
            }
        return a / b;
    };

    OccupationStatistics out;
    out.mean.resize(L);
    out.mean_error.resize(L);
    for (std::size_t i = 0; i < L; ++i) {
        const auto j = jackknife(W, [&](std::size_t lo, std::size_t hi) { return weighted(record.occupation, i, lo, hi); });
        out.mean[i] = j.value;
        out.mean_error[i] = j.error;
    }
    if (!record.pairs.empty()) {
        out.connected.assign(L * L, 0.0);
        out.connected_error.assign(L * L, 0.0);
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t k = 0; k < L; ++k) {
                if (i == k) continue;
                const auto j = jackknife(W, [&](std::size_t lo, std::size_t hi) {
                    return weighted(record.pairs, i * L + k, lo, hi) -
                           weighted(record.occupation, i, lo, hi) * weighted(record.occupation, k, lo, hi);
                });
                out.connected[i * L + k] = j.value;
                out.connected_error[i * L + k] = j.error;
            }
    }
    return out;
}

}  // namespace ldtk
