// Batch commands behind the command-line tool. Exit codes: 0 success or
// certificate pass, 1 certificate fail, 2 inconclusive (non-convergence),
// 3 input error.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tsde {

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> artifacts;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInputError = 3;

/// Solves the problem file and writes u.csv, u_d1.csv, u_d2.csv and
/// report.json into out_dir.
RunResult cmd_solve(const std::string& path, const std::string& out_dir, std::ostream& err);

/// Runs one certificate: which is gronwall | bound | depend | unique |
/// constants. Writes certificate.jsonl and, for surface certificates,
/// bound.csv and observed.csv into out_dir.
RunResult cmd_certify(const std::string& path, const std::string& which,
                      const std::string& out_dir, std::ostream& err);

/// Runs the built-in oracle suite and prints its table to out.
RunResult cmd_selftest(std::uint64_t seed, std::ostream& out);

}  // namespace tsde
