#pragma once

#include <cstdint>
#include <vector>

#include "robustcode/linalg.hpp"

// Channel model: an information block x is sent as the codeword A x and
// received as y = A x + e + z, where e is sparse gross corruption and z is
// dense small noise. All types are immutable value types.

namespace robustcode {

struct Signal {
  Vec values;

  std::size_t length() const { return values.size(); }
  void validate() const;
};

enum class MatrixKind : std::uint8_t { GaussianOrthonormal = 0, PartialFourier = 1, Explicit = 2 };

/// Encoder A (m x n, orthonormal columns) together with an orthonormal basis
/// Q of the complement of its column space, so that [A|Q] is orthogonal.
struct CodingMatrix {
  Matrix a;  // m x n
  Matrix q;  // m x (m-n)
  MatrixKind kind = MatrixKind::Explicit;
  std::uint64_t seed = 0;

  std::size_t block_length() const { return a.rows; }   // m
  std::size_t signal_length() const { return a.cols; }  // n

  /// Throws if the orthonormality invariants fail (1e-10 max-entry).
  void validate() const;

  static CodingMatrix from_parts(Matrix a, Matrix q, MatrixKind kind, std::uint64_t seed);
};

/// Sparse gross errors (support + values) plus the dense noise vector.
struct CorruptionPlan {
  std::vector<std::size_t> gross_support;  // strictly increasing, < m
  Vec gross_values;                        // matching gross_support
  Vec noise;                               // length m
  double sigma = 0.0;

  void validate(std::size_t m) const;
  /// true when every gross value is nonzero, i.e. e is exactly k-sparse
  bool has_exact_sparsity() const;
  /// e as a dense length-m vector
  Vec dense_gross(std::size_t m) const;
};

struct ReceivedWord {
  Vec values;
};

enum class CorruptionMode { SignFlip, Additive };

/// codeword = A x
Vec encode(const CodingMatrix& matrix, const Signal& signal);

/// Applies the plan to a codeword. In SignFlip mode the gross values are
/// derived from the codeword (-2 (Ax)_i on the support) and written back
/// into the plan so baselines can use the implied e.
ReceivedWord corrupt(const Vec& codeword, CorruptionPlan& plan, CorruptionMode mode);

}  // namespace robustcode
