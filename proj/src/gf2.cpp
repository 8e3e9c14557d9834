#include "aqec/gf2.hpp"

#include <algorithm>
#include <stdexcept>

namespace aqec {

BitMatrix BitMatrix::identity(size_t n) {
  BitMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::random(size_t rows, size_t cols, Rng& rng) {
  BitMatrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      m.set(r, c, rng_bool(rng));
  return m;
}

void BitMatrix::xor_rows(size_t dst, size_t src) {
  uint64_t* d = &data_[dst * wpr_];
  const uint64_t* s = &data_[src * wpr_];
  for (size_t k = 0; k < wpr_; ++k) d[k] ^= s[k];
}

void BitMatrix::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  for (size_t k = 0; k < wpr_; ++k)
    std::swap(data_[a * wpr_ + k], data_[b * wpr_ + k]);
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r, true);
  return t;
}

size_t BitMatrix::rank_inplace(BitMatrix& m) {
  size_t rank = 0;
  for (size_t col = 0; col < m.cols_ && rank < m.rows_; ++col) {
    size_t pivot = rank;
    while (pivot < m.rows_ && !m.get(pivot, col)) ++pivot;
    if (pivot == m.rows_) continue;
    m.swap_rows(rank, pivot);
    for (size_t r = 0; r < m.rows_; ++r)
      if (r != rank && m.get(r, col)) m.xor_rows(r, rank);
    ++rank;
  }
  return rank;
}

size_t BitMatrix::rank() const {
  BitMatrix copy = *this;
  return rank_inplace(copy);
}

std::optional<BitVec> BitMatrix::solve(const BitVec& b) const {
  if (b.size() != rows_)
    throw std::invalid_argument("BitMatrix::solve: dimension mismatch");
  BitMatrix m = *this;
  BitVec rhs = b;
  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < cols_ && rank < rows_; ++col) {
    size_t pivot = rank;
    while (pivot < rows_ && !m.get(pivot, col)) ++pivot;
    if (pivot == rows_) continue;
    m.swap_rows(rank, pivot);
    bool t = rhs.get(rank);
    rhs.set(rank, rhs.get(pivot));
    rhs.set(pivot, t);
    for (size_t r = 0; r < rows_; ++r) {
      if (r != rank && m.get(r, col)) {
        m.xor_rows(r, rank);
        rhs.set(r, rhs.get(r) ^ rhs.get(rank));
      }
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (size_t r = rank; r < rows_; ++r)
    if (rhs.get(r)) return std::nullopt;
  BitVec x(cols_);
  for (size_t i = 0; i < rank; ++i) x.set(pivot_col[i], rhs.get(i));
  return x;
}

BitVec BitMatrix::multiply(const BitVec& x) const {
  if (x.size() != cols_)
    throw std::invalid_argument("BitMatrix::multiply: dimension mismatch");
  BitVec y(rows_);
  const uint64_t* xw = x.words().data();
  for (size_t r = 0; r < rows_; ++r) {
    uint64_t acc = 0;
    const uint64_t* row = &data_[r * wpr_];
    for (size_t k = 0; k < wpr_; ++k) acc ^= row[k] & xw[k];
    y.set(r, (__builtin_popcountll(acc) & 1) != 0);
  }
  return y;
}

}  // namespace aqec
