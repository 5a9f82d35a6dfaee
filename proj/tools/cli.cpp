#include "cli.hpp"

#include "ldtk/checks.hpp"
#include "ldtk/error.hpp"
#include "ldtk/infinite_line.hpp"
#include "ldtk/kmc.hpp"
#include "ldtk/mft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <variant>

namespace ldtk::cli {

using nlohmann::json;

namespace {

const char* const commands[] = {"scgf",    "rate-function",    "steady",   "correlations",  "ldf-current",
                                "ldf-density", "ring-instability", "simulate", "infinite-line", "check"};

std::pair<double, double> number_pair(const json& v, std::string_view what)
{
    const auto a = number_array(v, what);
    if (a.size() != 2) fail(ErrorCode::ParseError, std::string(what) + " must hold two numbers");
    return {a[0], a[1]};
}

std::size_t count_field(const json& doc, const char* key, long min)
{
    const long v = integer_field(doc, key, "");
    if (v < min) fail(ErrorCode::ParseError, std::string(key) + " must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

void need(const JobConfig& job, bool present, const char* key)
{
    if (!present) fail(ErrorCode::MissingField, "command '" + job.command + "' needs field '" + key + "'");
}

void need_model(const JobConfig& job, bool transport)
{
    need(job, job.model.has_value(), "model");
    const bool is_transport = job.model->kind == ModelBlock::Kind::Transport;
    if (transport && !is_transport)
        fail(ErrorCode::ParseError, "command '" + job.command + "' needs a transport model block");
    if (!transport && is_transport)
        fail(ErrorCode::ParseError, "command '" + job.command + "' needs a lattice or generator model block");
}

// ---- tables ------------------------------------------------------------------

using Cell = std::variant<double, long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c, bool as_json)
{
    if (const double* d = std::get_if<double>(&c)) return as_json && !std::isfinite(*d) ? "null" : format_number(*d);
    if (const long* l = std::get_if<long>(&c)) return std::to_string(*l);
    const auto& s = std::get<std::string>(c);
    return as_json ? json(s).dump() : csv_field(s);
}

class Writer {
public:
    Writer(const JobConfig& job, const RunOptions& options, std::ostream& log)
        : dir_(options.out_dir.value_or(job.output)), json_(job.format == "json"), quiet_(options.quiet), log_(log)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_))
            fail(ErrorCode::OutputUnwritable, "cannot create output directory '" + dir_.string() + "'");
    }

    void write(const std::string& stem, const Table& t) const
    {
        const auto path = dir_ / (stem + (json_ ? ".json" : ".csv"));
        std::ofstream os(path, std::ios::binary);
        if (!os) fail(ErrorCode::OutputUnwritable, "cannot write '" + path.string() + "'");
        if (json_) {
            os << "{\"columns\":" << json(t.columns).dump() << ",\"rows\":[";
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                os << (r ? ",\n[" : "\n[");
                for (std::size_t c = 0; c < t.rows[r].size(); ++c) os << (c ? "," : "") << cell_text(t.rows[r][c], true);
                os << "]";
            }
            os << "\n]}\n";
        } else {
            for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << csv_field(t.columns[c]);
            os << "\n";
            for (const auto& row : t.rows) {
                for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c], false);
                os << "\n";
            }
        }
        if (!os) fail(ErrorCode::OutputUnwritable, "failed writing '" + path.string() + "'");
        note("wrote " + path.string());
    }

    void note(const std::string& line) const
    {
        if (!quiet_) log_ << line << "\n";
    }

private:
    std::filesystem::path dir_;
    bool json_;
    bool quiet_;
    std::ostream& log_;
};

// ---- commands --------------------------------------------------------------------

std::size_t observable_of(const JobConfig& job, const MarkovGenerator& gen)
{
    if (job.observable) return gen.observable_index(*job.observable);
    if (gen.n_observables() == 0) fail(ErrorCode::DimensionMismatch, "the generator registers no observable");
    return 0;
}

int run_scgf(const JobConfig& job, const Writer& w)
{
    const auto& gen = *job.model->generator;
    const auto curve = scgf_curve(gen, observable_of(job, gen), job.lambda_grid);
    Table t{{"lambda", "mu"}, {}};
    for (const auto& s : curve.samples) t.rows.push_back({s.x, s.y});
    w.write("scgf", t);
    return 0;
}

int run_rate_function(const JobConfig& job, const Writer& w)
{
    const auto& gen = *job.model->generator;
    LambdaWindow window;
    if (job.lambda_window) window = {job.lambda_window->first, job.lambda_window->second};
    const auto curve = rate_function(gen, observable_of(job, gen), job.q_grid, window);
    Table t{{"q", "I"}, {}};
    for (const auto& s : curve.samples) t.rows.push_back({s.x, s.y});
    w.write("rate-function", t);
    return 0;
}

int run_steady(const JobConfig& job, const Writer& w)
{
    const auto& m = *job.model;
    if (m.kind != ModelBlock::Kind::Transport) {
        if (!m.lattice || m.lattice->geometry != Geometry::Open)
            fail(ErrorCode::ParseError, "steady needs a transport block or an open exclusion chain");
        const auto st = ssep_steady_statistics(*m.lattice);
        Table t{{"site", "value"}, {}};
        for (std::size_t i = 0; i < st.profile.size(); ++i) t.rows.push_back({static_cast<long>(i + 1), st.profile[i]});
        w.note("current " + format_number(st.current));
        w.write("steady", t);
        return 0;
    }
    need(job, job.rho.has_value(), "rho");
    const auto st = steady_profile(*m.transport, job.rho->first, job.rho->second, job.grid_n);
    Table t{{"x", "value"}, {}};
    for (std::size_t k = 0; k < st.profile.values.size(); ++k) t.rows.push_back({st.profile.x(k), st.profile.values[k]});
    w.note("current " + format_number(st.current));
    w.write("steady", t);
    return 0;
}

int run_correlations(const JobConfig& job, const Writer& w)
{
    const auto c = covariance(*job.model->transport, job.rho->first, job.rho->second, job.grid_n);
    Table t{{"x", "y", "value"}, {}};
    for (std::size_t i = 0; i < c.x.size(); ++i)
        for (std::size_t j = 0; j < c.x.size(); ++j) t.rows.push_back({c.x[i], c.x[j], c.long_range(i, j)});
    w.note("number variance " + format_number(number_variance(*job.model->transport, job.rho->first, job.rho->second)));
    w.write("correlations", t);
    return 0;
}

int run_ldf_current(const JobConfig& job, const Writer& w)
{
    const auto& model = *job.model->transport;
    const double r1 = job.rho->first, r2 = job.rho->second;
    Table t{{"q", "I", "branch"}, {}};
    if (job.convex_envelope) {
        const auto curve = additivity_curve(model, r1, r2, job.q_grid, true);
        for (const auto& s : curve.samples) t.rows.push_back({s.q, s.I, s.branch});
    } else {
        for (double q : job.q_grid) {
            try {
                const auto s = additivity_rate_function(model, r1, r2, q);
                t.rows.push_back({q, s.I, s.branch});
            } catch (const Error& e) {
                if (e.code() != ErrorCode::BranchUnavailable && e.code() != ErrorCode::QOutOfReach) throw;
                t.rows.push_back({q, std::nan(""), std::string("unavailable")});
            }
        }
    }
    w.write("ldf-current", t);
    return 0;
}

int run_ldf_density(const JobConfig& job, const Writer& w)
{
    const auto& m = *job.model;
    const auto& model = *m.transport;
    const double r1 = job.rho->first, r2 = job.rho->second;
    DensityProfile p;
    if (!job.profile.empty()) {
        if (job.profile.size() < 3) fail(ErrorCode::GridMismatch, "profile needs at least three samples");
        p.values = job.profile;
        p.rho1 = r1;
        p.rho2 = r2;
    } else {
        const double a = *job.amplitude;
        p = DensityProfile::sample(
            job.grid_n,
            [&](double x) { return steady_density_at(model, r1, r2, x) + a * std::sin(std::numbers::pi * x); }, r1, r2);
        p.values.front() = r1;
        p.values.back() = r2;
    }

    Table t{{"x", "value"}, {}};
    double value = 0.0;
    if (r1 == r2) {
        value = equilibrium_density_ldf(model, r1, p);
        for (std::size_t k = 0; k < p.values.size(); ++k) t.rows.push_back({p.x(k), r1});
    } else if (m.name == "ssep") {
        const auto r = density_ldf_ssep(r1, r2, p);
        value = r.value;
        for (std::size_t k = 0; k < r.F.size(); ++k) t.rows.push_back({p.x(k), r.F[k]});
    } else if (m.zrp) {
        value = zrp_density_ldf(*m.zrp, r1, r2, p);
        for (std::size_t k = 0; k < p.values.size(); ++k)
            t.rows.push_back({p.x(k), zrp_steady_density_at(*m.zrp, r1, r2, p.x(k))});
    } else {
        fail(ErrorCode::UnknownModel, "no density functional for '" + m.name + "' between distinct reservoirs");
    }
    w.note("functional " + format_number(value));
    w.write("ldf-density", t);
    w.write("ldf-density_value", Table{{"quantity", "value"}, {{std::string("functional"), value}}});
    return 0;
}

int run_ring(const JobConfig& job, const Writer& w)
{
    const auto& model = *job.model->transport;
    Table t{{"rho_bar", "stable", "q_c", "v_opt", "q_c_scan", "v_opt_scan"}, {}};
    for (double rb : job.rho_bar) {
        const auto th = ring_instability_threshold(model, rb);
        const auto sc = ring_instability_scan(model, rb);
        const double nan = std::nan("");
        t.rows.push_back({rb, static_cast<long>(th.stable), th.stable ? nan : th.q_c, th.stable ? nan : th.v_opt,
                          sc.stable ? nan : sc.q_c, sc.stable ? nan : sc.v_opt});
    }
    w.write("ring-instability", t);
    return 0;
}

int run_simulate(const JobConfig& job, const Writer& w)
{
    const auto& m = *job.model;
    SimulationPlan plan;
    if (m.lattice) plan.model = LatticeSpec{LatticeSpec::Kind::Exclusion, *m.lattice};
    else plan.model = *m.generator;
    plan.t_max = *job.t_max;
    plan.n_replicas = job.replicas;
    plan.seed = job.seed;
    if (job.windows) plan.n_windows = *job.windows;
    if (job.burn_in) plan.burn_in = *job.burn_in;
    const auto rec = simulate(plan);

    Table q;
    q.columns = {"replica", "t"};
    for (const auto& name : rec.observables) q.columns.push_back("Q_" + name);
    for (std::size_t r = 0; r < rec.replicas.size(); ++r)
        for (std::size_t k = 0; k < rec.grid.size(); ++k) {
            std::vector<Cell> row{static_cast<long>(r), rec.grid[k]};
            for (double v : rec.replicas[r].Q[k]) row.push_back(v);
            q.rows.push_back(std::move(row));
        }
    w.write("simulate_currents", q);

    const auto occ = occupation_statistics(rec);
    Table s{{"site", "mean_n", "stderr"}, {}};
    for (std::size_t i = 0; i < occ.mean.size(); ++i)
        s.rows.push_back({static_cast<long>(m.lattice ? i + 1 : i), occ.mean[i], occ.mean_error[i]});
    w.write("simulate_profile", s);

    for (std::size_t o = 0; o < rec.observables.size(); ++o) {
        const auto st = current_statistics(rec, o);
        w.note(rec.observables[o] + ": mean rate " + format_number(st.mean_rate) + " +- " + format_number(st.mean_error) +
               ", variance rate " + format_number(st.variance_rate) + " +- " + format_number(st.variance_error));
    }
    return 0;
}

int run_infinite_line(const JobConfig& job, const Writer& w)
{
    const double ra = *job.rho_a;
    Table t{{"lambda", "mu_quenched", "mu_annealed"}, {}};
    for (double l : job.lambda_grid) t.rows.push_back({l, quenched_scgf_free(ra, l), annealed_scgf_free(ra, l)});
    w.write("infinite-line", t);
    if (!job.q_grid.empty()) {
        Table r{{"q", "I_quenched", "I_annealed"}, {}};
        for (double q : job.q_grid)
            r.rows.push_back({q, free_rate_function(Ensemble::Quenched, ra, q), free_rate_function(Ensemble::Annealed, ra, q)});
        w.write("infinite-line_rate", r);
    }
    return 0;
}

int run_check(const Writer& w)
{
    const auto results = run_checks(CheckLevel::Reduced, [&](const CheckResult& r) { w.note(format_check(r)); });
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    CheckResult summary{12, "cross-level suite", passed == static_cast<long>(results.size()),
                        std::to_string(passed) + " of " + std::to_string(results.size()) + " criteria pass"};
    w.note(format_check(summary));
    Table t{{"criterion", "status", "name", "detail"}, {}};
    auto row = [](const CheckResult& r) {
        return std::vector<Cell>{static_cast<long>(r.id), std::string(r.pass ? "PASS" : "FAIL"), r.name, r.detail};
    };
    for (const auto& r : results) t.rows.push_back(row(r));
    t.rows.push_back(row(summary));
    w.write("check", t);
    return summary.pass ? 0 : 2;
}

// Decimal places (up to 12) that make v an integer multiple of 10^-d.
int decimals(double v)
{
    double scale = 1.0;
    for (int d = 0; d <= 12; ++d, scale *= 10.0) {
        const double s = v * scale;
        if (std::abs(s - std::round(s)) <= 1e-9 * std::max(1.0, std::abs(s))) return d;
    }
    return -1;
}

}  // namespace

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> expand_grid(const std::vector<double>& spec, std::string_view what)
{
    const std::string name(what);
    if (spec.size() != 3) fail(ErrorCode::ParseError, name + " must be [min, max, step]");
    const double lo = spec[0], hi = spec[1], step = spec[2];
    if (!(step > 0.0) || !(lo <= hi) || !std::isfinite(hi))
        fail(ErrorCode::ParseError, name + " must be non-empty and ordered with a positive step");
    const double count = std::floor((hi - lo) / step * (1.0 + 1e-12) + 1e-9);
    if (count > 1e7) fail(ErrorCode::ParseError, name + " has too many points");
    const int d = std::max(decimals(lo), decimals(step));
    std::vector<double> out;
    if (decimals(lo) >= 0 && decimals(step) >= 0) {
        const double scale = std::pow(10.0, d);
        const double a = std::round(lo * scale), s = std::round(step * scale);
        for (long k = 0; k <= static_cast<long>(count); ++k) out.push_back((a + s * static_cast<double>(k)) / scale);
    } else {
        for (long k = 0; k <= static_cast<long>(count); ++k) out.push_back(lo + step * static_cast<double>(k));
    }
    return out;
}

JobConfig parse_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + e.what());
    }
    reject_unknown_keys(doc,
                        {"command", "model", "lambda_grid", "q_grid", "grid_n", "t_max", "replicas", "seed", "output",
                         "format", "observable", "lambda_window", "rho", "rho_bar", "rho_a", "profile", "amplitude",
                         "windows", "burn_in", "convex_envelope"},
                        "");

    JobConfig job;
    job.command = string_field(doc, "command", "");
    if (std::find(std::begin(commands), std::end(commands), job.command) == std::end(commands))
        fail(ErrorCode::ParseError, "unknown command '" + job.command + "'");

    if (doc.contains("model")) job.model = model_from_json(doc["model"]);
    if (doc.contains("lambda_grid")) job.lambda_grid = expand_grid(number_array(doc["lambda_grid"], "lambda_grid"), "lambda_grid");
    if (doc.contains("q_grid")) job.q_grid = expand_grid(number_array(doc["q_grid"], "q_grid"), "q_grid");
    if (doc.contains("grid_n")) job.grid_n = count_field(doc, "grid_n", 4);
    if (doc.contains("t_max")) job.t_max = number_field(doc, "t_max", "");
    if (doc.contains("replicas")) job.replicas = count_field(doc, "replicas", 1);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) fail(ErrorCode::ParseError, "seed must be a non-negative integer");
        job.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("output")) job.output = string_field(doc, "output", "");
    if (doc.contains("format")) {
        job.format = string_field(doc, "format", "");
        if (job.format != "csv" && job.format != "json") fail(ErrorCode::ParseError, "format must be csv or json");
    }
    if (doc.contains("observable")) job.observable = string_field(doc, "observable", "");
    if (doc.contains("lambda_window")) job.lambda_window = number_pair(doc["lambda_window"], "lambda_window");
    if (doc.contains("rho")) job.rho = number_pair(doc["rho"], "rho");
    if (doc.contains("rho_bar"))
        job.rho_bar = doc["rho_bar"].is_number() ? std::vector<double>{doc["rho_bar"].get<double>()}
                                                 : number_array(doc["rho_bar"], "rho_bar");
    if (doc.contains("rho_a")) job.rho_a = number_field(doc, "rho_a", "");
    if (doc.contains("profile")) job.profile = number_array(doc["profile"], "profile");
    if (doc.contains("amplitude")) job.amplitude = number_field(doc, "amplitude", "");
    if (doc.contains("windows")) job.windows = count_field(doc, "windows", 1);
    if (doc.contains("burn_in")) job.burn_in = number_field(doc, "burn_in", "");
    if (doc.contains("convex_envelope")) {
        if (!doc["convex_envelope"].is_boolean()) fail(ErrorCode::ParseError, "convex_envelope must be true or false");
        job.convex_envelope = doc["convex_envelope"].get<bool>();
    }
    if (job.lambda_window && !(job.lambda_window->first < job.lambda_window->second))
        fail(ErrorCode::ParseError, "lambda_window must be ordered");

    const std::string& c = job.command;
    if (c == "scgf") {
        need_model(job, false);
        need(job, !job.lambda_grid.empty(), "lambda_grid");
    } else if (c == "rate-function") {
        need_model(job, false);
        need(job, !job.q_grid.empty(), "q_grid");
    } else if (c == "steady") {
        need(job, job.model.has_value(), "model");
    } else if (c == "correlations" || c == "ldf-current" || c == "ldf-density") {
        need_model(job, true);
        need(job, job.rho.has_value(), "rho");
        if (c == "ldf-current") need(job, !job.q_grid.empty(), "q_grid");
        if (c == "ldf-density") need(job, !job.profile.empty() || job.amplitude.has_value(), "profile");
    } else if (c == "ring-instability") {
        need_model(job, true);
        need(job, !job.rho_bar.empty(), "rho_bar");
    } else if (c == "simulate") {
        need_model(job, false);
        need(job, job.t_max.has_value(), "t_max");
    } else if (c == "infinite-line") {
        need(job, job.rho_a.has_value(), "rho_a");
        need(job, !job.lambda_grid.empty(), "lambda_grid");
    }
    return job;
}

int run(const JobConfig& job, const RunOptions& options, std::ostream& log)
{
    const Writer w(job, options, log);
    const std::string& c = job.command;
    if (c == "scgf") return run_scgf(job, w);
    if (c == "rate-function") return run_rate_function(job, w);
    if (c == "steady") return run_steady(job, w);
    if (c == "correlations") return run_correlations(job, w);
    if (c == "ldf-current") return run_ldf_current(job, w);
    if (c == "ldf-density") return run_ldf_density(job, w);
    if (c == "ring-instability") return run_ring(job, w);
    if (c == "simulate") return run_simulate(job, w);
    if (c == "infinite-line") return run_infinite_line(job, w);
    return run_check(w);
}

}  // namespace ldtk::cli
