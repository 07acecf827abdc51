#include <cstring>
#include <fstream>
#include <stdexcept>

#include "robustcode/matrixgen.hpp"

namespace robustcode {
namespace {

constexpr char kMagic[4] = {'R', 'C', 'M', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(out, v);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  const std::uint64_t v = get_u64(in);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

}  // namespace

void write_matrix(const CodingMatrix& matrix, std::ostream& out) {
  out.write(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(matrix.block_length()));
  put_u32(out, static_cast<std::uint32_t>(matrix.signal_length()));
  const char kind = static_cast<char>(matrix.kind);
  out.write(&kind, 1);
  put_u64(out, matrix.seed);
  for (double d : matrix.a.data) put_f64(out, d);
  for (double d : matrix.q.data) put_f64(out, d);
  if (!out) throw std::runtime_error("matrix write failed");
}

CodingMatrix read_matrix(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("matrix read: bad magic");
  const std::uint32_t m = get_u32(in);
  const std::uint32_t n = get_u32(in);
  char kind_byte;
  in.read(&kind_byte, 1);
  if (kind_byte < 0 || kind_byte > 2) throw std::runtime_error("matrix read: bad kind");
  const std::uint64_t seed = get_u64(in);
  if (n < 1 || m <= n) throw std::runtime_error("matrix read: bad shape");

  Matrix a(m, n), q(m, m - n);
  for (double& d : a.data) d = get_f64(in);
  for (double& d : q.data) d = get_f64(in);
  if (!in) throw std::runtime_error("matrix read: truncated");
  return CodingMatrix::from_parts(std::move(a), std::move(q),
                                  static_cast<MatrixKind>(kind_byte), seed);
}

void save_matrix(const CodingMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  write_matrix(matrix, out);
}

CodingMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  return read_matrix(in);
}

}  // namespace robustcode
