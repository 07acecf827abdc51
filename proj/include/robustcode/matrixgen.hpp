#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "robustcode/model.hpp"

namespace robustcode {

/// QR-orthonormalized standard-normal sample. Deterministic given the seed.
CodingMatrix gen_gaussian_orthonormal(std::size_t m, std::size_t n, std::uint64_t seed);

/// Real coding matrix built from cosine/sine column pairs at n/2 random
/// frequencies in {1..floor((m-1)/2)} (DC and Nyquist excluded), then
/// column-orthonormalized. Requires n even.
CodingMatrix gen_partial_fourier(std::size_t m, std::size_t n, std::uint64_t seed);

/// Orthonormal basis of the null space of a^T, from a full QR factorization.
/// Requires a to have orthonormal columns (1e-8).
Matrix complement_basis(const Matrix& a);

// Binary container: magic "RCM1", little-endian u32 m, u32 n, kind byte,
// u64 seed, then row-major f64 entries of a followed by q.
void save_matrix(const CodingMatrix& matrix, const std::string& path);
CodingMatrix load_matrix(const std::string& path);
void write_matrix(const CodingMatrix& matrix, std::ostream& out);
CodingMatrix read_matrix(std::istream& in);

}  // namespace robustcode
