#pragma once

#include "haarshift/rational.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace haarshift {

/// Exact determinant of an integer matrix (fraction-free elimination).
Int integer_determinant(const IntMatrix& m);

/// Exact positive-semidefiniteness test for a symmetric rational matrix via
/// diagonal-pivot elimination (leading principal minors alone cannot decide
/// the semidefinite case). Throws std::invalid_argument unless the matrix
/// is square and symmetric.
bool is_positive_semidefinite(const RationalMatrix& m);

/// A centered Gaussian law on a torus, described on the dual lattice Z^n by
/// the quadratic exponent of its characteristic function: a symmetric
/// positive semidefinite rational matrix.
class QuadraticGaussianSpec {
 public:
  /// Throws std::invalid_argument unless the matrix is square, symmetric
  /// and positive semidefinite.
  static QuadraticGaussianSpec make(RationalMatrix form);

  std::size_t dimension() const { return form_.size(); }
  const RationalMatrix& form() const { return form_; }

  /// The quadratic exponent <A w, w> at a lattice point.
  Rational value_at(const std::vector<std::int64_t>& w) const;

 private:
  explicit QuadraticGaussianSpec(RationalMatrix form);
  RationalMatrix form_;
};

/// An automorphism of the lattice Z^n: an integer matrix with determinant
/// +-1. Doubles as an automorphism of the torus it is dual to.
class LatticeAutomorphism {
 public:
  /// Throws std::invalid_argument unless the matrix is square with
  /// determinant +-1.
  static LatticeAutomorphism make(IntMatrix matrix);

  std::size_t dimension() const { return matrix_.size(); }
  const IntMatrix& matrix() const { return matrix_; }

  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& v) const;

 private:
  explicit LatticeAutomorphism(IntMatrix matrix);
  IntMatrix matrix_;
};

/// Closed-form symmetry condition for a pair of Gaussian laws coupled
/// through a lattice automorphism: the quartet identity of quadratic
/// exponents holds for all lattice points exactly when the cross term
/// vanishes identically, i.e. A1 + Bt * A2 = 0 (Bt the transpose of the
/// automorphism matrix). Throws std::invalid_argument on dimension
/// mismatch.
bool gaussian_pair_symmetry_condition(const QuadraticGaussianSpec& a1,
                                      const QuadraticGaussianSpec& a2,
                                      const LatticeAutomorphism& at);

struct WindowVerdict {
  bool holds = true;
  /// First violating (u, v) in scan order (u outer, v inner, coordinates
  /// lexicographic from -radius to radius).
  std::optional<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> witness;
};

/// Brute-force check of the quartet identity
///   q1(u+v) + q2(u + Bv) = q1(u-v) + q2(u - Bv)
/// over every pair of lattice points of max-norm <= radius, in exact
/// rational arithmetic, independent of the closed form. Throws
/// std::invalid_argument on dimension mismatch or radius < 1.
WindowVerdict window_verify(const QuadraticGaussianSpec& a1, const QuadraticGaussianSpec& a2,
                            const LatticeAutomorphism& at, int radius);

struct LatticeAdmissibility {
  bool alpha_unimodular = false;
  bool plus_unimodular = false;
  bool minus_unimodular = false;
};

/// Unimodularity of (B, I + B, I - B) by exact determinants.
LatticeAdmissibility admissibility_on_lattice(const LatticeAutomorphism& at);

/// Symmetry condition for a pair of Gaussian laws on the rational dual of a
/// one-dimensional solenoid, with exponents sigma1 * y^2 and sigma2 * y^2
/// and coupling by the rational scalar alpha: holds exactly when
/// sigma1 + alpha * sigma2 = 0. Requires sigma1, sigma2 >= 0 and alpha != 0
/// (throws std::invalid_argument).
bool solenoid_pair_condition(const Rational& sigma1, const Rational& sigma2,
                             const Rational& alpha);

/// One sample of the scalar quartet identity
///   s1 (u+v)^2 + s2 (u + a v)^2 = s1 (u-v)^2 + s2 (u - a v)^2
/// at rational (u, v); the window counterpart of solenoid_pair_condition.
bool solenoid_window_identity(const Rational& sigma1, const Rational& sigma2,
                              const Rational& alpha, const Rational& u, const Rational& v);

}  // namespace haarshift
