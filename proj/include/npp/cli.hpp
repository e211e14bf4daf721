#ifndef NPP_CLI_HPP
#define NPP_CLI_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace npp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitLimit = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;

// args[0] is the program name. Machine-readable output goes to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// Bench summary rows grouped by (L, N) from per-run records.
nlohmann::json summarize_runs(const std::vector<nlohmann::json>& runs);

}  // namespace npp::cli

#endif
