#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

namespace ucp {

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

/// Hex FNV-1a hash of the canonical (key-sorted, compact) dump of a manifest.
std::string manifest_hash(const nlohmann::json& manifest);

/// Runs the command-line front end. Returns 0 on success, 2 on validation failure, 3 on
/// certification failure, 1 on any other error; errors are written to `err` as a JSON object.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ucp
