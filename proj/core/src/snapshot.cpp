#include "rsqs/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rsqs/error.hpp"

namespace rsqs {
namespace {

template <typename UInt>
void put_le(std::ostream& out, UInt value) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename UInt>
UInt get_le(std::istream& in) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    fail(ErrorCode::kTruncatedFile, "snapshot ended inside the header");
  }
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const WaveFunction& psi) {
  const GridSpec& g = psi.grid();
  out.write(kSnapshotMagic, 4);
  put_le<std::uint32_t>(out, kSnapshotVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.eta()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.d_space()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(psi.representation()));
  for (const Complex& a : psi.amplitudes()) {
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(a.real()));
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(a.imag()));
  }
  if (!out) fail(ErrorCode::kIoFailure, "failed writing snapshot");
}

WaveFunction read_snapshot(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4) fail(ErrorCode::kTruncatedFile, "snapshot shorter than magic");
  if (std::memcmp(magic, kSnapshotMagic, 4) != 0) {
    fail(ErrorCode::kBadMagic, "expected RSQS magic");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kSnapshotVersion) {
    fail(ErrorCode::kVersionMismatch, "snapshot version " + std::to_string(version));
  }
  const auto eta = get_le<std::uint32_t>(in);
  const auto d_space = get_le<std::uint32_t>(in);
  const auto n = get_le<std::uint32_t>(in);
  const auto rep = get_le<std::uint8_t>(in);
  if (rep > 1) fail(ErrorCode::kInvalidArgument, "unknown representation flag");
  const GridSpec grid =
      make_grid(static_cast<int>(eta), static_cast<int>(d_space), static_cast<int>(n));

  std::vector<Complex> amps(grid.point_count());
  std::vector<unsigned char> buf(16 * amps.size());
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
    fail(ErrorCode::kTruncatedFile, "payload shorter than (n+1)^D complex values");
  }
  auto word = [&](std::size_t offset) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[offset + i]) << (8 * i);
    return std::bit_cast<double>(v);
  };
  for (std::size_t i = 0; i < amps.size(); ++i) {
    amps[i] = Complex{word(16 * i), word(16 * i + 8)};
  }
  return WaveFunction(grid, std::move(amps), static_cast<Representation>(rep));
}

void write_snapshot(const std::filesystem::path& path, const WaveFunction& psi) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  write_snapshot(out, psi);
}

WaveFunction read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace rsqs
