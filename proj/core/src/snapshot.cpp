#include "ddalab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace ddalab::nse {

namespace {

constexpr char kMagic[8] = {'D', 'D', 'A', 'S', 'N', 'A', 'P', '\0'};

template <class T>
void put(std::ostream& os, T v) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
  }
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw SnapshotError("snapshot: truncated file");
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
  }
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const FourierGrid& grid,
                    double nu, double t, const SpectralVelocity& u) {
  if (u.half() != grid.size()) throw SnapshotError("snapshot: field does not match grid");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw SnapshotError("snapshot: cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kSnapshotVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(grid.n()));
  put<double>(os, grid.length());
  put<double>(os, nu);
  put<double>(os, t);
  for (const Complex& c : u.coeffs()) {
    put<double>(os, c.real());
    put<double>(os, c.imag());
  }
  if (!os.flush()) throw SnapshotError("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SnapshotError("snapshot: cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw SnapshotError("snapshot: bad magic in " + path.string());
  }
  const auto version = get<std::uint32_t>(is);
  if (version != kSnapshotVersion) {
    throw SnapshotError("snapshot: unsupported version " + std::to_string(version));
  }
  Snapshot s;
  s.n = static_cast<int>(get<std::uint32_t>(is));
  s.length = get<double>(is);
  s.nu = get<double>(is);
  s.t = get<double>(is);
  const FourierGrid grid(s.n, s.length);
  s.u = SpectralVelocity(grid);
  for (Complex& c : s.u.coeffs()) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    c = Complex(re, im);
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw SnapshotError("snapshot: trailing bytes in " + path.string());
  }
  return s;
}

}  // namespace ddalab::nse
