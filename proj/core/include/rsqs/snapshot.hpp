#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "rsqs/lattice.hpp"

namespace rsqs {

// Binary snapshot layout, all integers little-endian:
//   "RSQS" | u32 version | u32 eta | u32 d_space | u32 n | u8 representation
//   | (n+1)^D complex values as interleaved float64 (re, im), last axis fastest.
inline constexpr char kSnapshotMagic[4] = {'R', 'S', 'Q', 'S'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 4 + 4 * 4 + 1;

void write_snapshot(std::ostream& out, const WaveFunction& psi);
WaveFunction read_snapshot(std::istream& in);

void write_snapshot(const std::filesystem::path& path, const WaveFunction& psi);
WaveFunction read_snapshot(const std::filesystem::path& path);

}  // namespace rsqs
