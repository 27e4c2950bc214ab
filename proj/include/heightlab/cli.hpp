#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace heightlab {

// Parsed run-wide knobs shared by the subcommands. bigint_cap_bytes can be
// overridden by the HEIGHTLAB_BIGINT_CAP environment variable.
struct RunConfig {
    int d = 2;
    double eps = 1e-6;
    long orbit_cap = 256;
    long bigint_cap_bytes = 64L * 1024 * 1024;
    int jobs = 0;
    std::string format; // per-command default; "json" or "csv"
    std::uint64_t seed = 0;
};

// Full command-line surface, exposed for in-process testing. Returns the
// process exit code: 0 ok, 2 usage/parse, 3 certification/cap, 4 strict
// input, 5 budget.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

} // namespace heightlab
