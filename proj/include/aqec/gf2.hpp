#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aqec/rng.hpp"

namespace aqec {

// Packed bit vector over GF(2). Word padding bits beyond size() are kept zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  size_t size() const { return n_; }
  bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool v) {
    uint64_t m = uint64_t(1) << (i & 63);
    if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
  }
  void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

  void xor_with(const BitVec& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
  }
  void and_with(const BitVec& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
  }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  size_t popcount() const {
    size_t c = 0;
    for (uint64_t w : w_) c += __builtin_popcountll(w);
    return c;
  }
  bool any() const {
    for (uint64_t w : w_) if (w) return true;
    return false;
  }
  // popcount(a & b)
  static size_t and_popcount(const BitVec& a, const BitVec& b) {
    size_t c = 0;
    for (size_t k = 0; k < a.w_.size(); ++k)
      c += __builtin_popcountll(a.w_[k] & b.w_[k]);
    return c;
  }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  const std::vector<uint64_t>& words() const { return w_; }

 private:
  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

// Dense GF(2) matrix with bit-packed rows (64-bit words).
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

  static BitMatrix identity(size_t n);
  static BitMatrix random(size_t rows, size_t cols, Rng& rng);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  bool get(size_t r, size_t c) const {
    return (data_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1;
  }
  void set(size_t r, size_t c, bool v) {
    uint64_t m = uint64_t(1) << (c & 63);
    if (v) data_[r * wpr_ + (c >> 6)] |= m;
    else data_[r * wpr_ + (c >> 6)] &= ~m;
  }

  void xor_rows(size_t dst, size_t src);  // row dst ^= row src
  void swap_rows(size_t a, size_t b);

  BitMatrix transposed() const;

  // GF(2) row rank; the matrix is not modified.
  size_t rank() const;
  // In-place elimination variant; leaves the matrix in row echelon form and
  // returns its rank.
  static size_t rank_inplace(BitMatrix& m);

  // Some x with M x = b, or nullopt when the system is inconsistent.
  // Requires b.size() == rows().
  std::optional<BitVec> solve(const BitVec& b) const;

  BitVec multiply(const BitVec& x) const;  // M x

  bool operator==(const BitMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<uint64_t> data_;
};

}  // namespace aqec
