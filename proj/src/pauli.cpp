#include "aqec/pauli.hpp"

#include <stdexcept>

namespace aqec {

PauliString PauliString::from_label(std::string_view label) {
  bool neg = false;
  size_t pos = 0;
  if (pos < label.size() && (label[pos] == '+' || label[pos] == '-')) {
    neg = label[pos] == '-';
    ++pos;
  }
  size_t n = label.size() - pos;
  PauliString p(n);
  size_t num_y = 0;
  for (size_t i = 0; i < n; ++i) {
    switch (label[pos + i]) {
      case 'I': case '_': break;
      case 'X': p.set_x(i, true); break;
      case 'Z': p.set_z(i, true); break;
      case 'Y': p.set_x(i, true); p.set_z(i, true); ++num_y; break;
      default: throw std::invalid_argument("PauliString::from_label: bad character");
    }
  }
  p.set_phase_exp(static_cast<uint8_t>((num_y + (neg ? 2 : 0)) & 3));
  return p;
}

int PauliString::sign() const {
  size_t num_y = BitVec::and_popcount(x_, z_);
  unsigned d = (phase_ - num_y) & 3;
  if (d == 0) return 1;
  if (d == 2) return -1;
  throw internal_error("PauliString::sign: operator is not Hermitian");
}

std::string PauliString::label() const {
  std::string s;
  s.reserve(num_qubits() + 1);
  s.push_back(sign() > 0 ? '+' : '-');
  for (size_t i = 0; i < num_qubits(); ++i) {
    bool xi = x(i), zi = z(i);
    s.push_back(xi ? (zi ? 'Y' : 'X') : (zi ? 'Z' : 'I'));
  }
  return s;
}

}  // namespace aqec
