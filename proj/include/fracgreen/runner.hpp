#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracgreen {

enum class Command { Solve, Verify, Sweep, Boundary, Stability };

struct RunManifest {
    Command command = Command::Solve;
    std::string spec_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> overrides; // dotted key, value
};

// Exit codes: 0 success, 2 spec/document problems, 3 smallness failure,
// 4 non-convergence, 5 verification failure, 1 anything unexpected.
int run(const RunManifest& manifest);

} // namespace fracgreen
