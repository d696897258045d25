#pragma once

#include "haarshift/rational.hpp"

#include <cstdint>
#include <memory>

namespace haarshift {

class Cyclotomic;

/// The field obtained by adjoining a primitive N-th root of unity to the
/// rationals. Elements are represented on the power basis 1, z, ..., z^(d-1)
/// where d is the degree (Euler phi of N) and z denotes the root exp(2*pi*i/N);
/// the minimal polynomial of z is cached at construction.
///
/// For non-squarefree N the minimal polynomial is produced from the radical
/// case by exponent substitution, which keeps construction cheap even for
/// conductors in the tens of thousands. A monomial reduction table is kept
/// only for small conductors; past that, reduction is by long division.
class CyclotomicField {
 public:
  static std::shared_ptr<const CyclotomicField> make(std::int64_t conductor);

  std::int64_t conductor() const { return conductor_; }
  std::size_t degree() const { return degree_; }

  /// Minimal polynomial of the generator, monic, listed from the constant
  /// coefficient up; size is degree() + 1.
  const RationalVector& modulus() const { return modulus_; }

  /// Reduces a dense polynomial in the generator (coefficients from the
  /// constant term up, any length) to canonical basis coordinates.
  RationalVector reduce(RationalVector poly) const;

 private:
  explicit CyclotomicField(std::int64_t conductor);

  std::int64_t conductor_ = 1;
  std::size_t degree_ = 1;
  RationalVector modulus_;
  // monomial_[k] holds the reduced coordinates of z^(degree+k); empty for
  // large conductors.
  std::vector<RationalVector> monomial_;
};

using FieldPtr = std::shared_ptr<const CyclotomicField>;

/// Exact element of a cyclotomic field. Values are immutable once built;
/// all arithmetic stays in the field of the operands (mixing fields of
/// different conductors throws std::invalid_argument).
class Cyclotomic {
 public:
  Cyclotomic(FieldPtr field, RationalVector coords);

  static Cyclotomic from_rational(const FieldPtr& field, const Rational& value);
  static Cyclotomic zero(const FieldPtr& field);
  static Cyclotomic one(const FieldPtr& field);

  const FieldPtr& field() const { return field_; }
  /// Canonical coordinates on the power basis; length is the field degree.
  const RationalVector& coords() const { return coords_; }

  bool is_zero() const;
  /// True when the value lies in Q, i.e. all basis coordinates above the
  /// constant one vanish.
  bool is_rational() const;
  /// The rational value, when is_rational(); nullopt otherwise.
  std::optional<Rational> rational_value() const;

  /// Complex conjugate, i.e. the image of z under z -> z^(N-1).
  Cyclotomic conj() const;

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator-(const Cyclotomic& a);
  friend Cyclotomic operator*(const Rational& s, const Cyclotomic& a);
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

 private:
  FieldPtr field_;
  RationalVector coords_;
};

/// z^power in the given field, exponent taken modulo the conductor.
Cyclotomic root_of_unity(const FieldPtr& field, std::int64_t power);

/// Convenience: builds the field of the given conductor and returns z^power.
Cyclotomic root_of_unity(std::int64_t conductor, std::int64_t power);

/// True when the value is fixed by conjugation.
bool is_real(const Cyclotomic& v);

/// Sign of a real cyclotomic value: -1, 0 or +1.
///
/// The zero case is decided exactly on coordinates. A nonzero value is
/// located by evaluating the cosine expansion in interval arithmetic with
/// directed rounding, doubling the working precision until zero is excluded;
/// a nonzero algebraic number guarantees termination. Throws
/// std::domain_error if the value is not real.
int sign_of_real(const Cyclotomic& v);

/// Exact nonnegativity test: false for non-real values, otherwise
/// sign_of_real(v) >= 0.
bool is_real_nonnegative(const Cyclotomic& v);

}  // namespace haarshift
