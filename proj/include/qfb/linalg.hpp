#pragma once

// Sparse exact linear algebra over tower fields.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qfb/field.hpp"

namespace qfb {

using SparseVec = std::map<std::uint32_t, Elem>;

void axpy(SparseVec& y, const Elem& a, const SparseVec& x);  // y += a x, dropping zeros
SparseVec scaled(const SparseVec& x, const Elem& a);
bool is_zero(const SparseVec& x);

/// Incremental row echelon form that remembers how each row was built from
/// the inserted vectors, so membership, coordinates and kernels come for free.
class Echelon {
 public:
  /// Inserts v (input number = insertion count). Returns true if v was independent;
  /// otherwise the dependency is recorded as a kernel vector over the inputs.
  bool insert(const SparseVec& v);
  std::size_t rank() const { return rows_.size(); }
  std::size_t inputs() const { return inputs_; }
  bool contains(const SparseVec& v) const;
  /// Coordinates of v with respect to the independent inputs (by input number).
  std::optional<SparseVec> express(const SparseVec& v) const;
  /// Combinations of nonzero inputs that vanish (zero inputs are not recorded).
  const std::vector<SparseVec>& kernel() const { return kernel_; }
  /// Input numbers that were independent when inserted.
  const std::vector<std::uint32_t>& independent() const { return independent_; }

 private:
  struct Row {
    SparseVec v;      // pivot coefficient 1 at pivot
    SparseVec combo;  // row = sum combo[k] * input_k
  };
  void reduce(SparseVec& v, SparseVec& combo) const;

  std::map<std::uint32_t, Row> rows_;  // pivot -> row
  std::size_t inputs_ = 0;
  std::vector<SparseVec> kernel_;
  std::vector<std::uint32_t> independent_;
};

/// Kernel of the linear map sending basis vector i to images[i].
std::vector<SparseVec> kernel_of(const FieldPtr& F, const std::vector<SparseVec>& images);

std::size_t rank_of(const std::vector<SparseVec>& vectors);

}  // namespace qfb
