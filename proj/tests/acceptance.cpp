// Prints one PASS/FAIL line per acceptance criterion, 1 to 12, at full
// statistics.  Criterion 12 runs `ldtk check` end to end.

#include "ldtk/checks.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

int main()
{
    std::vector<ldtk::CheckResult> all =
        ldtk::run_checks(ldtk::CheckLevel::Full, [](const ldtk::CheckResult& r) { std::cout << ldtk::format_check(r) << std::endl; });

    const fs::path dir = fs::temp_directory_path() / ("ldtk_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "check.json") << R"({"command":"check"})";
    const std::string cmd = std::string(LDTK_BINARY) + " " + (dir / "check.json").string() + " --out " + dir.string() +
                            " > " + (dir / "log.txt").string();
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream log(dir / "log.txt");
    int lines = 0;
    for (std::string line; std::getline(log, line);)
        if (line.rfind("PASS", 0) == 0 || line.rfind("FAIL", 0) == 0) ++lines;
    fs::remove_all(dir);

    ldtk::CheckResult cli{12, "check command", code == 0 && lines >= 12,
                          "`ldtk check` printed " + std::to_string(lines) + " invariant lines, exit code " + std::to_string(code)};
    std::cout << ldtk::format_check(cli) << std::endl;
    all.push_back(cli);

    int failed = 0;
    for (const auto& r : all) failed += r.pass ? 0 : 1;
    std::cout << (all.size() - failed) << " of " << all.size() << " criteria pass" << std::endl;
    return failed == 0 ? 0 : 1;
}
