#pragma once

// The `opball` command line: subcommand dispatch, run configuration and seed
// resolution. Output is one JSON document on `out`; exit status 0 on success,
// 1 on a domain error ({"error": name, "message": ...}), 2 on a usage error.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "opball/fixedpoint.hpp"

namespace opball {

struct RunConfig {
  Tolerances tol{};
  FixedPointParams solver{};
  std::size_t max_elements = 120;
  std::optional<std::uint64_t> seed;
};

inline constexpr std::uint64_t kDefaultSeed = 1;

/// Reads a flat JSON object whose keys are Tolerances fields, fp_tol,
/// cheb_tol, elliptic_margin, max_iter, max_elements, seed and solver_mode
/// ("midpoint-descent" or "chebyshev-iterate"). Unknown keys and
/// non-positive tolerances throw InvalidArgument; unreadable files ParseError.
RunConfig load_run_config(const std::filesystem::path& path);

/// --seed, then OPBALL_SEED, then the config seed, then kDefaultSeed.
/// Throws InvalidArgument for a malformed OPBALL_SEED.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value,
                           std::optional<std::uint64_t> config_seed);

/// `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace opball
