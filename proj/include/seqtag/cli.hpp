#ifndef SEQTAG_CLI_HPP
#define SEQTAG_CLI_HPP

#include <iosfwd>

namespace seqtag::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point for the seqtag executable. Subcommands: fetch, stats, split,
// convert, augment, train, tag, eval, benchmark. `--config FILE` supplies
// flat `key = value` defaults that explicit flags override.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seqtag::cli

#endif  // SEQTAG_CLI_HPP
