#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nehari/config.hpp"

namespace nehari {

struct VerifySuite {
    std::string name;
    int checked = 0;
    int failed = 0;
};

// Deterministic invariant battery behind the `verify` subcommand: identity,
// derivative, homogeneity, projection and root-count checks against the
// oracle code paths.
std::vector<VerifySuite> run_verify_suites(std::uint64_t seed);

// Executes one CLI subcommand (solve | sweep | classify | constants | verify)
// for a parsed config, writing its artifacts into out_dir. Returns the process
// exit status: 0 on full success; on failure an error.json is left in out_dir.
int run_subcommand(const std::string& name, const RunConfig& config, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override = {});

}  // namespace nehari
