#include <bit>
#include <cstring>
#include <fstream>

#include "kcas/layer_ops.hpp"

namespace kcas {
namespace {

static_assert(std::endian::native == std::endian::little, "matrix dumps assume a little-endian host");

constexpr char kMagic[4] = {'K', 'C', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated matrix dump");
  return v;
}

std::uint32_t axis_tag(Axis a) {
  switch (a) {
    case Axis::real: return 0;
    case Axis::imaginary: return 1;
    case Axis::ray: return 2;
  }
  return 3;
}

}  // namespace

void write_matrix_dump(const std::string& path, const LayerMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.dim()));
  put<std::uint32_t>(out, axis_tag(m.sp.axis));
  put<std::uint32_t>(out, m.real_storage ? (m.times_i ? 2u : 0u) : 1u);
  put<double>(out, m.sp.value);
  const int n = m.dim();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (m.real_storage) {
        put<double>(out, m.re(i, k));
      } else {
        put<double>(out, m.cx(i, k).real());
        put<double>(out, m.cx(i, k).imag());
      }
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

MatrixDump read_matrix_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a KCLM matrix dump");
  MatrixDump d;
  d.version = get<std::uint32_t>(in);
  const auto n = static_cast<Eigen::Index>(get<std::uint64_t>(in));
  d.axis = get<std::uint32_t>(in);
  d.storage = get<std::uint32_t>(in);
  d.magnitude = get<double>(in);
  d.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = get<double>(in);
      const double im = d.storage == 1 ? get<double>(in) : 0.0;
      d.entries(i, k) = d.storage == 2 ? cplx(0.0, re) : cplx(re, im);
    }
  }
  return d;
}

}  // namespace kcas
