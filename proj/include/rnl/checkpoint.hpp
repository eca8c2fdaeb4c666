#pragma once

// Binary checkpoint format for radial fields:
//   16-byte magic, u64 n (little-endian), f64 L, then 2(n-1) f64 values
//   with real and imaginary parts interleaved.

#include <array>
#include <filesystem>
#include <string_view>

#include "rnl/field.hpp"

namespace rnl {

inline constexpr std::array<char, 16> kCheckpointMagic{'R', 'N', 'L', 'F', 'I', 'E', 'L', 'D',
                                                       '-', 'C', 'K', 'P', 'T', '0', '0', '1'};

void write_checkpoint(const std::filesystem::path& path, const RadialField& f);
RadialField read_checkpoint(const std::filesystem::path& path);

/// Columns r, re, im; one row per interior node.
void write_field_csv(const std::filesystem::path& path, const RadialField& f);

/// Shortest round-trip decimal representation, used by every text artifact.
std::string format_double(double x);

}  // namespace rnl
