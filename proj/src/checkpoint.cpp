#include "rnl/checkpoint.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "rnl/errors.hpp"

namespace rnl {

namespace {

void put_u64(std::vector<unsigned char>& out, std::uint64_t x) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>((x >> (8 * b)) & 0xffu));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t x = 0;
  for (int b = 0; b < 8; ++b) x |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return x;
}

void put_f64(std::vector<unsigned char>& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }
double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const RadialField& f) {
  std::vector<unsigned char> buf;
  buf.reserve(32 + 16 * f.size());
  buf.insert(buf.end(), kCheckpointMagic.begin(), kCheckpointMagic.end());
  put_u64(buf, f.grid().n());
  put_f64(buf, f.grid().L());
  for (const auto& z : f.values()) {
    put_f64(buf, z.real());
    put_f64(buf, z.imag());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_checkpoint: cannot open " + path.string());
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!os) throw std::runtime_error("write_checkpoint: write failed for " + path.string());
}

RadialField read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_checkpoint: cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (buf.size() < 32 || std::memcmp(buf.data(), kCheckpointMagic.data(), 16) != 0) {
    throw InvalidArgument("read_checkpoint: bad magic header in " + path.string());
  }
  const std::uint64_t n = get_u64(buf.data() + 16);
  const double L = get_f64(buf.data() + 24);
  RadialGrid grid(static_cast<std::size_t>(n), L);
  if (buf.size() != 32 + 16 * grid.size()) {
    throw InvalidArgument("read_checkpoint: truncated payload in " + path.string());
  }
  std::vector<cplx> values(grid.size());
  const unsigned char* p = buf.data() + 32;
  for (auto& z : values) {
    z = cplx(get_f64(p), get_f64(p + 8));
    p += 16;
  }
  return RadialField(grid, std::move(values));
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_field_csv(const std::filesystem::path& path, const RadialField& f) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path.string());
  os << "r,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << format_double(f.grid().r(i)) << ',' << format_double(f[i].real()) << ','
       << format_double(f[i].imag()) << '\n';
  }
}

}  // namespace rnl
