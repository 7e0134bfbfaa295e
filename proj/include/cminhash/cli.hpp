#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cminhash/hashing.hpp"

namespace cmh {

/// Process exit codes of the `cmh` tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitBudget = 3,
};

enum class ExperimentKind { Hash, Estimate, Theory, Oracle, Mc, Mae, Synth };

struct RunConfig {
    ExperimentKind kind = ExperimentKind::Mc;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes;
    std::vector<std::uint32_t> k_grid;
    std::uint64_t trials = 0;
    std::uint32_t reps = 0;
    std::optional<std::string> output;
    unsigned threads = 0;
};

/// Checks every cross-field constraint (K <= D for circulant schemes, positive
/// counts) against the dimension the run will use. Throws InvalidArgument.
void validate_run_config(const RunConfig& config, std::uint32_t dim);

/// Entry point of the command-line tool. `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmh
