#pragma once

#include <string>
#include <string_view>

#include "aqec/gf2.hpp"

namespace aqec {

// Raised when a tableau or element invariant is broken; maps to exit code 4.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

// n-qubit Pauli operator stored as i^phase * prod_j X^x_j Z^z_j with the
// phase exponent kept mod 4. Hermitian operators satisfy
// phase == popcount(x & z) (mod 2); their sign() is then well defined.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(size_t n) : x_(n), z_(n), phase_(0) {}

  // Parses "+XXIZ", "-Y", "XZ" (implicit +). Y contributes i to the phase so
  // that the stored exponent matches the displayed sign.
  static PauliString from_label(std::string_view label);

  size_t num_qubits() const { return x_.size(); }

  bool x(size_t i) const { return x_.get(i); }
  bool z(size_t i) const { return z_.get(i); }
  void set_x(size_t i, bool v) { x_.set(i, v); }
  void set_z(size_t i, bool v) { z_.set(i, v); }

  const BitVec& x_bits() const { return x_; }
  const BitVec& z_bits() const { return z_; }
  BitVec& x_bits() { return x_; }
  BitVec& z_bits() { return z_; }

  uint8_t phase_exp() const { return phase_; }
  void set_phase_exp(uint8_t p) { phase_ = p & 3; }
  void mul_phase_exp(int p) { phase_ = static_cast<uint8_t>((phase_ + p) & 3); }

  bool is_identity_bits() const { return !x_.any() && !z_.any(); }
  bool is_hermitian() const {
    return ((phase_ ^ BitVec::and_popcount(x_, z_)) & 1) == 0;
  }
  // +1 or -1; throws internal_error for non-Hermitian operators.
  int sign() const;

  bool commutes(const PauliString& o) const {
    return ((BitVec::and_popcount(x_, o.z_) + BitVec::and_popcount(z_, o.x_)) & 1) == 0;
  }

  // this := this * o, tracking the i-exponent.
  void mul(const PauliString& o) {
    phase_ = static_cast<uint8_t>((phase_ + o.phase_ + 2 * BitVec::and_popcount(z_, o.x_)) & 3);
    x_.xor_with(o.x_);
    z_.xor_with(o.z_);
  }

  std::string label() const;  // e.g. "+XYZI"

  bool operator==(const PauliString& o) const {
    return x_ == o.x_ && z_ == o.z_ && phase_ == o.phase_;
  }
  bool operator!=(const PauliString& o) const { return !(*this == o); }

 private:
  BitVec x_, z_;
  uint8_t phase_ = 0;
};

}  // namespace aqec
