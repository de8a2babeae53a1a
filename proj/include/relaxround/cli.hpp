#ifndef RELAXROUND_CLI_HPP_
#define RELAXROUND_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace relaxround {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInputError = 2;

// Runs the batch experiment runner. `args` excludes the program name.
// Summaries go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace relaxround

#endif  // RELAXROUND_CLI_HPP_
