#pragma once

#include <filesystem>
#include <string>

#include "ucp/field.hpp"

namespace ucp {

/// Writes columns x, y, re, im. A non-empty `comment` is emitted first as a `# ...` line.
void write_field_csv(const ComplexField& f, const std::filesystem::path& path,
                     const std::string& comment = {});
void write_field_csv(const ScalarField& f, const std::filesystem::path& path,
                     const std::string& comment = {});

/// Reads a field CSV written by write_field_csv (comment lines skipped); the grid is
/// reconstructed from the node coordinates.
ComplexField read_field_csv(const std::filesystem::path& path);

/// Binary dump: int64 n, double half_width, double cx, double cy, then n*n (re, im) double
/// pairs in row-major node order. Native endianness.
void write_field_binary(const ComplexField& f, const std::filesystem::path& path);
ComplexField read_field_binary(const std::filesystem::path& path);

/// Dispatches on extension: ".bin" reads the binary dump, anything else the CSV.
ComplexField read_field(const std::filesystem::path& path);

}  // namespace ucp
