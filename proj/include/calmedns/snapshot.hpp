#pragma once

/// Binary snapshot format (file extension .cnsf):
///   magic       4 bytes  "CNSF"
///   version     u16 LE   (currently 1)
///   n_per_axis  u32 LE
///   field_count u8
/// followed by field_count vector fields; each field is 3 components, each
/// component n·n·(n/2+1) complex coefficients as little-endian f64 (re, im)
/// pairs in lattice order (ix, iy, iz) row-major with iz fastest — the same
/// layout WaveGrid::index defines.
///
/// A checkpoint is a snapshot with a JSON sidecar "<path>.json" carrying
/// {time, seed, config_hash}; resume refuses a mismatched hash or a tampered
/// header.

#include <cstdint>
#include <string>
#include <vector>

#include "calmedns/spectral_field.hpp"

namespace calmedns {

inline constexpr std::uint16_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const std::vector<const SpectralField*>& fields);

/// Reads all fields; when expected_grid is set the stored n must match its n
/// (the grid pointer is adopted for the returned fields).
std::vector<SpectralField> read_snapshot(const std::string& path, GridPtr grid);

struct Checkpoint {
  double time = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

void write_checkpoint(const std::string& path, const SpectralField& state, const Checkpoint& meta);

/// Loads state + metadata; throws when the stored config hash differs from
/// expected_hash (pass empty to skip the check) or the header is invalid.
SpectralField read_checkpoint(const std::string& path, GridPtr grid,
                              const std::string& expected_hash, Checkpoint* meta_out = nullptr);

}  // namespace calmedns
