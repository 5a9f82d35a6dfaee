#include "cli.hpp"

#include "ldtk/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv)
{
    CLI::App app{"Large-deviation toolkit: runs one JSON job and writes CSV or JSON tables."};
    std::string config_path;
    ldtk::cli::RunOptions options;
    app.add_option("config", config_path, "job description (JSON)")->required();
    app.add_option("--out", options.out_dir, "output directory, overriding the job's \"output\"");
    app.add_flag("--quiet", options.quiet, "print nothing but errors");
    app.footer("Environment: LDTK_THREADS caps the number of worker threads.");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) ldtk::fail(ldtk::ErrorCode::ParseError, "cannot read '" + config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        const auto job = ldtk::cli::parse_config(text.str());
        return ldtk::cli::run(job, options, std::cout);
    } catch (const ldtk::Error& e) {
        std::cerr << "ldtk: " << e.what() << "\n";
        return ldtk::is_input_error(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "ldtk: " << e.what() << "\n";
        return 2;
    }
}
