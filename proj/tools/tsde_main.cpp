// tsde: solve dynamic integrodifferential problems on finite time scales
// and check the explicit bounds their solutions obey.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tsde/commands.hpp"
#include "tsde/selftest.hpp"

int main(int argc, char** argv) {
    CLI::App app{"delta-calculus solver and bound checker for dynamic "
                 "integrodifferential equations on finite time scales"};
    app.require_subcommand(1);

    std::string problem_path;
    std::string out_dir = "out";
    std::string which;
    std::uint64_t seed = tsde::kDefaultSelftestSeed;

    CLI::App* solve = app.add_subcommand("solve", "solve a problem file and emit surfaces");
    solve->add_option("file", problem_path, "problem file")->required();
    solve->add_option("-o,--out", out_dir, "output directory")->required();

    CLI::App* certify = app.add_subcommand("certify", "check one theorem certificate");
    certify->add_option("file", problem_path, "problem file")->required();
    certify->add_option("--which", which, "gronwall|bound|depend|unique|constants")->required();
    certify->add_option("-o,--out", out_dir, "output directory")->required();

    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in oracle suite");
    selftest->add_option("--seed", seed, "seed for the randomized families");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : tsde::kExitInputError;
    }

    if (solve->parsed()) return tsde::cmd_solve(problem_path, out_dir, std::cerr).exit_code;
    if (certify->parsed())
        return tsde::cmd_certify(problem_path, which, out_dir, std::cerr).exit_code;
    return tsde::cmd_selftest(seed, std::cout).exit_code;
}
