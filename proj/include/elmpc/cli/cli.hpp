#pragma once

#include <iosfwd>
#include <istream>
#include <vector>

#include "elmpc/info/triple_histogram.hpp"

namespace elmpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;  // divergence, insufficient calibration
inline constexpr int kExitOracleMismatch = 3;

/// Entry point for the elmpc command line. Subcommands: run, baseline,
/// compare, metrics. Output directory: --out, else $ELMPC_OUT, else "out".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Reads integer symbol triples with columns s,a,s_next. Lines starting with
/// '#' and a header row are skipped. Throws ConfigError on malformed input.
std::vector<info::SampleTriple> read_triples_csv(std::istream& in);

}  // namespace elmpc::cli
