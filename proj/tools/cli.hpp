#pragma once

#include "ldtk/model_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ldtk::cli {

// Validated job description with defaults filled in.
struct JobConfig {
    std::string command;
    std::optional<ModelBlock> model;
    std::vector<double> lambda_grid;  // expanded from [min, max, step]
    std::vector<double> q_grid;
    std::size_t grid_n = 128;
    std::optional<double> t_max;
    std::size_t replicas = 1;
    std::uint64_t seed = 0;
    std::string output = ".";
    std::string format = "csv";

    std::optional<std::string> observable;
    std::optional<std::pair<double, double>> lambda_window;
    std::optional<std::pair<double, double>> rho;
    std::vector<double> rho_bar;
    std::optional<double> rho_a;
    std::vector<double> profile;
    std::optional<double> amplitude;
    std::optional<std::size_t> windows;
    std::optional<double> burn_in;
    bool convex_envelope = false;
};

// ParseError ("line N: ..."), UnknownKey, MissingField.
JobConfig parse_config(std::string_view text);

// [min, max, step] -> min, min + step, ..., max.  Decimal inputs are stepped
// in scaled integers so that grid points such as 0 or 1 come out exact.
std::vector<double> expand_grid(const std::vector<double>& spec, std::string_view what);

struct RunOptions {
    std::optional<std::string> out_dir;  // overrides job.output
    bool quiet = false;
};

// Writes the output files and returns the exit code (0, or 2 when `check`
// finds a failing invariant).  Library errors propagate as ldtk::Error.
int run(const JobConfig& job, const RunOptions& options, std::ostream& log);

// "%.17g"; nan and inf spelled out.
std::string format_number(double v);

}  // namespace ldtk::cli
