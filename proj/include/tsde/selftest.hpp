// Built-in oracle suite: closed-form exponentials, calculus identities,
// comparison-lemma recursions, the Darboux recursion oracle and the
// randomized Gronwall sweep. Deterministic for a fixed seed.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tsde {

struct SelftestFamily {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<SelftestFamily> families;
    bool all_pass() const;
};

inline constexpr std::uint64_t kDefaultSelftestSeed = 0x7d5a1e5u;

SelftestReport run_selftest(std::uint64_t seed = kDefaultSelftestSeed);
void print_selftest(std::ostream& os, const SelftestReport& report);

struct GronwallSweepResult {
    int instances = 0;
    int passes = 0;
    double min_margin = 0.0;         // most negative bound-observed over all instances
    double min_rel_margin = 0.0;     // min margin / (1 + max bound) per instance
    double max_lemma_rel_err = 0.0;  // worst single-row bound vs one-variable exponential
    bool lemma_consistent = false;
    bool all_pass() const { return passes == instances && lemma_consistent; }
};

/// Randomized equality-recursion instances (scales up to 8 x 8 x 4 points,
/// kernel values in [0, 2], c in [0, 5]); each is handed to verify_gronwall
/// and must pass. Also checks that with r = 0 and a single t2 cell the
/// bound surface matches the one-variable exponential to 1e-12 relative.
GronwallSweepResult run_gronwall_sweep(std::uint64_t seed, int count);

}  // namespace tsde
