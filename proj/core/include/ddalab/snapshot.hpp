#pragma once

#include <filesystem>
#include <stdexcept>

#include "ddalab/nse2d.hpp"

// Binary field snapshots, little-endian regardless of host:
//   char[8]  magic "DDASNAP\0"
//   uint32   version (1)
//   uint32   N
//   float64  L, nu, t
//   then 2 * N * (N/2 + 1) complex coefficients as (re, im) float64 pairs,
//   component 1 first, each in row-major (i, j) half-plane order.
namespace ddalab::nse {

inline constexpr unsigned kSnapshotVersion = 1;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  int n = 0;
  double length = 0.0;
  double nu = 0.0;
  double t = 0.0;
  SpectralVelocity u;
};

void write_snapshot(const std::filesystem::path& path, const FourierGrid& grid,
                    double nu, double t, const SpectralVelocity& u);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace ddalab::nse
