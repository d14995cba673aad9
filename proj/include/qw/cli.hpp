#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qw::cli {

enum ExitCode : int {
    Success = 0,
    Usage = 1,
    Validation = 2,
    CapHit = 3,
};

struct CliConfig {
    std::string signaturePath;
    std::optional<std::string> algebraPath;
    std::size_t depth = 4;
    std::size_t maxClasses = 100'000;
    std::size_t maxAssignments = 10'000'000;
    std::size_t maxEnumeration = 1'000'000;
    std::string outputFormat = "text";  // text | json | dot | csv
};

/// Seed for randomized commands: --seed if given, else QW_SEED, else a fixed default.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

/// `args` excludes the program name. Output is deterministic for fixed
/// inputs and seed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qw::cli
