#include "doctest.h"

#include "cli.hpp"
#include "ldtk/error.hpp"
#include "ldtk/lattice_models.hpp"
#include "ldtk/model_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace ldtk;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::string& text)
{
    try {
        cli::parse_config(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::ParseError;
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("ldtk_cli_" + std::to_string(::getpid()));
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string run_job(const std::string& text, const fs::path& dir)
{
    std::ostringstream log;
    CHECK(cli::run(cli::parse_config(text), {dir.string(), true}, log) == 0);
    CHECK(log.str().empty());
    return text;
}

int shell(const std::string& cmd)
{
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* scgf_job = R"({"command":"scgf","model":{"model":"ssep","L":3,"rates":[1,0,1,0]},"lambda_grid":[-2,2,0.1]})";
const char* current_job = R"({"command":"ldf-current","model":{"transport":"ssep"},"rho":[1,0],"q_grid":[0.2,2.0,0.05]})";

}  // namespace

TEST_CASE("config parsing")
{
    const auto job = cli::parse_config(scgf_job);
    CHECK(job.command == "scgf");
    CHECK(job.grid_n == 128);
    CHECK(job.format == "csv");
    CHECK(job.seed == 0);
    REQUIRE(job.model.has_value());
    CHECK(job.model->lattice->L == 3);
    CHECK(job.model->generator->n_states() == 8);
    CHECK(job.lambda_grid.size() == 41);

    CHECK(code_of(R"({"model":{"transport":"ssep"}})") == ErrorCode::MissingField);
    CHECK(code_of(R"({"command":"scgf","modl":{}})") == ErrorCode::UnknownKey);
    CHECK(code_of(R"({"command":"scgf","model":{"model":"ssep","L":3,"rates":[1,0,1,0],"x":1},"lambda_grid":[0,1,1]})") ==
          ErrorCode::UnknownKey);
    CHECK(code_of(R"({"command":"scgf","model":{"model":"ssep","L":3,"rates":[1,0,1,0]}})") == ErrorCode::MissingField);
    CHECK(code_of(R"({"command":"ldf-current","model":{"transport":"ssep"},"q_grid":[0,1,0.5]})") == ErrorCode::MissingField);
    CHECK(code_of(R"({"command":"fly"})") == ErrorCode::ParseError);
    CHECK(code_of(R"({"command":"check","format":"xml"})") == ErrorCode::ParseError);
    CHECK(code_of(R"({"command":"scgf","model":{"transport":"ssep"},"lambda_grid":[0,1,0.5]})") == ErrorCode::ParseError);
    CHECK(code_of(R"({"command":"steady","model":{"transport":"tasep"}})") == ErrorCode::UnknownModel);

    try {
        cli::parse_config("{\n  \"command\": \"scgf\",\n  \"seed\": ,\n}");
        FAIL("no error raised");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("ParseError: line 3:") != std::string::npos);
    }
}

TEST_CASE("grids")
{
    const auto l = cli::expand_grid({-2, 2, 0.1}, "g");
    CHECK(l.size() == 41);
    CHECK(l[20] == 0.0);
    CHECK(l.back() == 2.0);
    const auto q = cli::expand_grid({0.2, 2.0, 0.05}, "g");
    CHECK(q.size() == 37);
    CHECK(q[16] == 1.0);
    CHECK(cli::expand_grid({1, 1, 0.5}, "g") == std::vector<double>{1.0});
    for (const std::vector<double>& bad : {std::vector<double>{1, 0, 0.1}, {0, 1, 0}, {0, 1}, {0, 1, -0.1}}) {
        CHECK_THROWS_AS(cli::expand_grid(bad, "g"), Error);
    }
}

TEST_CASE("generator documents round-trip")
{
    const auto gen = quantum_dot_generator(2, 1, 1, 1);
    const auto doc = generator_to_json(gen);
    CHECK(doc["n_states"] == 2);
    CHECK(doc["transitions"][0].contains("inc"));
    const auto back = generator_from_json(doc);
    CHECK(back.n_transitions() == gen.n_transitions());
    CHECK(back.observable_names() == gen.observable_names());
    CHECK(scgf_value(back, 0, 0.7) == scgf_value(gen, 0, 0.7));
    CHECK(model_from_json(doc).kind == ModelBlock::Kind::Generator);

    auto broken = doc;
    broken["transitions"][0]["rate"] = -1.0;
    CHECK_THROWS_AS(generator_from_json(broken), Error);
    auto extra = doc;
    extra["transitions"][0]["weight"] = 1.0;
    CHECK_THROWS_AS(generator_from_json(extra), Error);
}

TEST_CASE("scgf and current rate-function jobs")
{
    TempDir tmp;
    run_job(scgf_job, tmp.path);
    const auto mu = read_csv(tmp.path / "scgf.csv");
    REQUIRE(mu.size() == 42);
    CHECK(mu[0] == std::vector<std::string>{"lambda", "mu"});
    CHECK(mu[21][0] == "0");
    CHECK(std::abs(std::stod(mu[21][1])) <= 1e-12);
    // 17 significant digits
    CHECK(mu[1][1].find('.') != std::string::npos);
    CHECK(mu[1][1].size() >= 18);

    run_job(current_job, tmp.path);
    const auto I = read_csv(tmp.path / "ldf-current.csv");
    REQUIRE(I.size() == 38);
    CHECK(I[0] == std::vector<std::string>{"q", "I", "branch"});
    CHECK(I[17] == std::vector<std::string>{"1", "0", "monotonic"});
}

TEST_CASE("outputs are byte-identical across runs")
{
    TempDir tmp;
    const std::string sim =
        R"({"command":"simulate","model":{"model":"ssep","L":4,"rates":[1,0.2,0.7,0.1]},"t_max":300,"replicas":4,"seed":5})";
    run_job(sim, tmp.path / "a");
    run_job(sim, tmp.path / "b");
    for (const char* f : {"simulate_currents.csv", "simulate_profile.csv"}) {
        CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
    }
    const auto q = read_csv(tmp.path / "a" / "simulate_currents.csv");
    CHECK(q[0] == std::vector<std::string>{"replica", "t", "Q_left", "Q_right"});
    CHECK(q.size() == 1 + 4 * 20);
    const auto p = read_csv(tmp.path / "a" / "simulate_profile.csv");
    CHECK(p[0] == std::vector<std::string>{"site", "mean_n", "stderr"});
    CHECK(p.size() == 5);

    run_job(current_job, tmp.path / "c");
    run_job(current_job, tmp.path / "d");
    CHECK(slurp(tmp.path / "c" / "ldf-current.csv") == slurp(tmp.path / "d" / "ldf-current.csv"));
}

TEST_CASE("macroscopic and infinite-line jobs")
{
    TempDir tmp;
    run_job(R"({"command":"steady","model":{"transport":"kmp"},"rho":[2,1],"grid_n":32})", tmp.path);
    auto s = read_csv(tmp.path / "steady.csv");
    CHECK(s[0] == std::vector<std::string>{"x", "value"});
    CHECK(s.size() == 34);
    CHECK(s[1] == std::vector<std::string>{"0", "2"});

    run_job(R"({"command":"correlations","model":{"transport":"ssep"},"rho":[1,0],"grid_n":16})", tmp.path);
    auto c = read_csv(tmp.path / "correlations.csv");
    CHECK(c[0] == std::vector<std::string>{"x", "y", "value"});
    CHECK(c.size() == 1 + 15 * 15);

    run_job(R"({"command":"ldf-density","model":{"transport":"ssep"},"rho":[0.8,0.2],"amplitude":0.05,"grid_n":64})",
            tmp.path);
    auto d = read_csv(tmp.path / "ldf-density.csv");
    CHECK(d[0] == std::vector<std::string>{"x", "value"});
    auto v = read_csv(tmp.path / "ldf-density_value.csv");
    CHECK(std::stod(v[1][1]) > 0.0);

    run_job(R"({"command":"ring-instability","model":{"transport":"kmp"},"rho_bar":[1]})", tmp.path);
    auto r = read_csv(tmp.path / "ring-instability.csv");
    REQUIRE(r.size() == 2);
    CHECK(r[1][1] == "0");
    CHECK(std::stod(r[1][2]) == doctest::Approx(2.0 * 3.141592653589793));

    run_job(R"({"command":"infinite-line","rho_a":1,"lambda_grid":[-1,1,0.5],"q_grid":[0.2,1,0.2]})", tmp.path);
    auto l = read_csv(tmp.path / "infinite-line.csv");
    CHECK(l[0] == std::vector<std::string>{"lambda", "mu_quenched", "mu_annealed"});
    CHECK(l.size() == 6);
    for (std::size_t k = 1; k < l.size(); ++k) CHECK(std::stod(l[k][1]) <= std::stod(l[k][2]));
    auto lr = read_csv(tmp.path / "infinite-line_rate.csv");
    CHECK(lr[0] == std::vector<std::string>{"q", "I_quenched", "I_annealed"});

    run_job(R"({"command":"rate-function","model":{"model":"quantum_dot","rates":[1,0,1,0]},"q_grid":[0.5,1,0.5]})",
            tmp.path);
    auto rf = read_csv(tmp.path / "rate-function.csv");
    CHECK(std::abs(std::stod(rf[1][1])) < 1e-12);
    CHECK(std::stod(rf[2][1]) == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-10));
}

TEST_CASE("json output")
{
    TempDir tmp;
    run_job(R"({"command":"scgf","model":{"model":"quantum_dot","rates":[1,0,1,0]},"lambda_grid":[0,1,0.5],"format":"json"})",
            tmp.path);
    const auto doc = nlohmann::json::parse(slurp(tmp.path / "scgf.json"));
    CHECK(doc["columns"] == nlohmann::json({"lambda", "mu"}));
    REQUIRE(doc["rows"].size() == 3);
    CHECK(doc["rows"][2][1].get<double>() == doctest::Approx(std::exp(0.5) - 1.0).epsilon(1e-12));
}

TEST_CASE("command-line front end")
{
    TempDir tmp;
    const std::string bin = LDTK_BINARY;
    auto config = [&](const std::string& name, const std::string& text) {
        const auto p = tmp.path / name;
        std::ofstream(p) << text;
        return p.string();
    };
    const std::string out = (tmp.path / "out").string();
    CHECK(shell(bin + " " + config("ok.json", scgf_job) + " --quiet --out " + out) == 0);
    CHECK(fs::exists(tmp.path / "out" / "scgf.csv"));
    CHECK(shell(bin + " " + config("bad.json", R"({"command":"scgf","modl":1})") + " --quiet 2>/dev/null") == 1);
    CHECK(shell(bin + " " + config("broken.json", "{\"command\":") + " --quiet 2>/dev/null") == 1);
    CHECK(shell(bin + " " + (tmp.path / "missing.json").string() + " 2>/dev/null") == 1);
    CHECK(shell(bin + " 2>/dev/null") == 1);
    // a negative density is rejected as input, an overflowing tilt is a numerical failure
    CHECK(shell(bin + " " + config("dom.json", R"({"command":"ring-instability","model":{"transport":"kmp"},"rho_bar":-1})") +
                " --quiet --out " + out + " 2>/dev/null") == 1);
    CHECK(shell(bin + " " +
                config("num.json",
                       R"({"command":"scgf","model":{"model":"quantum_dot","rates":[1,1,1,1]},"lambda_grid":[700,720,10]})") +
                " --quiet --out " + out + " 2>/dev/null") == 2);
}

TEST_CASE("check command reports every criterion")
{
    TempDir tmp;
    const std::string cfg = (tmp.path / "check.json").string();
    std::ofstream(cfg) << R"({"command":"check"})";
    const std::string log = (tmp.path / "log.txt").string();
    const int status = shell(std::string(LDTK_BINARY) + " " + cfg + " --out " + tmp.path.string() + " > " + log);
    std::istringstream in(slurp(log));
    int results = 0, failures = 0;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("PASS", 0) == 0 || line.rfind("FAIL", 0) == 0) ++results;
        if (line.rfind("FAIL", 0) == 0) ++failures;
    }
    CHECK(results >= 12);
    CHECK((status == 0) == (failures == 0));
    CHECK(read_csv(tmp.path / "check.csv")[0] == std::vector<std::string>{"criterion", "status", "name", "detail"});
}
