#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fbo2d/spectral_field.hpp"

namespace fbo2d {

struct Snapshot {
  RealField field;
  double t = 0.0;
  double alpha = 1.0;
};

namespace detail {

template <class T>
void put_le(std::ostream& os, T v) {
  std::array<char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  os.write(b.data(), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  std::array<char, sizeof(T)> b;
  if (!is.read(b.data(), sizeof(T))) throw std::runtime_error("snapshot: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

}  // namespace detail

inline constexpr std::uint32_t snapshot_version = 1;

inline void write_snapshot(const std::string& path, const Snapshot& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path + " for writing");
  const auto& g = s.field.grid;
  os.write("FBO2", 4);
  detail::put_le<std::uint32_t>(os, snapshot_version);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.nx));
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.ny));
  detail::put_le<double>(os, g.lx);
  detail::put_le<double>(os, g.ly);
  detail::put_le<double>(os, s.t);
  detail::put_le<double>(os, s.alpha);
  for (double v : s.field.values) detail::put_le<double>(os, v);
  if (!os) throw std::runtime_error("snapshot: write failed for " + path);
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "FBO2", 4) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path);
  const auto ver = detail::get_le<std::uint32_t>(is);
  if (ver != snapshot_version)
    throw std::runtime_error("snapshot: unsupported version " + std::to_string(ver));
  const auto nx = detail::get_le<std::uint32_t>(is);
  const auto ny = detail::get_le<std::uint32_t>(is);
  const auto lx = detail::get_le<double>(is);
  const auto ly = detail::get_le<double>(is);
  Snapshot s;
  s.t = detail::get_le<double>(is);
  s.alpha = detail::get_le<double>(is);
  GridSpec g(nx, ny, lx, ly);
  s.field = RealField(g);
  for (auto& v : s.field.values) v = detail::get_le<double>(is);
  return s;
}

}  // namespace fbo2d
