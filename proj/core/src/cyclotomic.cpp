#include "haarshift/cyclotomic.hpp"

#include <mpfr.h>

#include <map>
#include <stdexcept>
#include <utility>

#include "haarshift/arith.hpp"

namespace haarshift {

namespace {

void trim(RationalVector& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Exact quotient of num by den; the remainder must vanish.
RationalVector poly_div_exact(RationalVector num, const RationalVector& den) {
  if (num.size() < den.size()) throw std::logic_error("poly_div_exact: degree underflow");
  RationalVector quot(num.size() - den.size() + 1, Rational(0));
  const Rational& lead = den.back();
  for (std::size_t i = quot.size(); i-- > 0;) {
    Rational c = num[i + den.size() - 1] / lead;
    quot[i] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
  }
  for (const auto& r : num) {
    if (r != 0) throw std::logic_error("poly_div_exact: nonzero remainder");
  }
  return quot;
}

// Minimal polynomial of a primitive m-th root for squarefree m, by dividing
// x^m - 1 by the polynomials of all proper divisors.
RationalVector squarefree_min_poly(std::int64_t m, std::map<std::int64_t, RationalVector>& memo) {
  if (auto it = memo.find(m); it != memo.end()) return it->second;
  RationalVector f(static_cast<std::size_t>(m) + 1, Rational(0));
  f[0] = -1;
  f.back() = 1;
  for (std::int64_t d : divisors(m)) {
    if (d == m) continue;
    f = poly_div_exact(std::move(f), squarefree_min_poly(d, memo));
  }
  memo[m] = f;
  return f;
}

constexpr std::int64_t kMonomialTableLimit = 512;

}  // namespace

CyclotomicField::CyclotomicField(std::int64_t conductor) : conductor_(conductor) {
  if (conductor < 1) throw std::invalid_argument("CyclotomicField: conductor must be positive");
  degree_ = static_cast<std::size_t>(euler_phi(conductor));

  std::int64_t radical = 1;
  for (const auto& [p, e] : factorize(conductor)) radical *= p;
  std::map<std::int64_t, RationalVector> memo;
  const RationalVector rad_poly = squarefree_min_poly(radical, memo);

  const std::int64_t stretch = conductor / radical;
  modulus_.assign(static_cast<std::size_t>(stretch) * (rad_poly.size() - 1) + 1, Rational(0));
  for (std::size_t i = 0; i < rad_poly.size(); ++i) {
    modulus_[i * static_cast<std::size_t>(stretch)] = rad_poly[i];
  }
  if (modulus_.size() != degree_ + 1) throw std::logic_error("CyclotomicField: degree mismatch");

  if (conductor <= kMonomialTableLimit && degree_ >= 1) {
    // Enough rows to reduce both any single monomial z^k (k < N) and any
    // product of two reduced elements (degree <= 2*(d-1)).
    const std::int64_t top =
        std::max<std::int64_t>(conductor - 1, 2 * static_cast<std::int64_t>(degree_) - 2);
    if (top >= static_cast<std::int64_t>(degree_)) {
      RationalVector cur(degree_, Rational(0));
      for (std::size_t j = 0; j < degree_; ++j) cur[j] = -modulus_[j];
      monomial_.push_back(cur);  // z^degree
      for (std::int64_t k = static_cast<std::int64_t>(degree_) + 1; k <= top; ++k) {
        RationalVector next(degree_, Rational(0));
        const Rational wrap = cur[degree_ - 1];
        for (std::size_t j = degree_ - 1; j > 0; --j) next[j] = cur[j - 1];
        next[0] = 0;
        if (wrap != 0) {
          for (std::size_t j = 0; j < degree_; ++j) next[j] += wrap * monomial_[0][j];
        }
        monomial_.push_back(next);
        cur = std::move(next);
      }
    }
  }
}

std::shared_ptr<const CyclotomicField> CyclotomicField::make(std::int64_t conductor) {
  return std::shared_ptr<const CyclotomicField>(new CyclotomicField(conductor));
}

RationalVector CyclotomicField::reduce(RationalVector poly) const {
  trim(poly);
  if (poly.size() <= degree_) {
    poly.resize(degree_, Rational(0));
    return poly;
  }
  if (!monomial_.empty() && poly.size() - degree_ <= monomial_.size()) {
    RationalVector out(poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(degree_));
    for (std::size_t k = degree_; k < poly.size(); ++k) {
      if (poly[k] == 0) continue;
      const RationalVector& row = monomial_[k - degree_];
      for (std::size_t j = 0; j < degree_; ++j) out[j] += poly[k] * row[j];
    }
    return out;
  }
  for (std::size_t i = poly.size(); i-- > degree_;) {
    const Rational c = poly[i];
    if (c == 0) continue;
    poly[i] = 0;
    for (std::size_t j = 0; j < degree_; ++j) poly[i - degree_ + j] -= c * modulus_[j];
  }
  poly.resize(degree_, Rational(0));
  return poly;
}

Cyclotomic::Cyclotomic(FieldPtr field, RationalVector coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  if (!field_) throw std::invalid_argument("Cyclotomic: null field");
  if (coords_.size() != field_->degree()) coords_ = field_->reduce(std::move(coords_));
}

Cyclotomic Cyclotomic::from_rational(const FieldPtr& field, const Rational& value) {
  RationalVector c(field->degree(), Rational(0));
  c[0] = value;
  return Cyclotomic(field, std::move(c));
}

Cyclotomic Cyclotomic::zero(const FieldPtr& field) { return from_rational(field, Rational(0)); }

Cyclotomic Cyclotomic::one(const FieldPtr& field) { return from_rational(field, Rational(1)); }

bool Cyclotomic::is_zero() const {
  for (const auto& c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

bool Cyclotomic::is_rational() const {
  for (std::size_t i = 1; i < coords_.size(); ++i) {
    if (coords_[i] != 0) return false;
  }
  return true;
}

std::optional<Rational> Cyclotomic::rational_value() const {
  if (!is_rational()) return std::nullopt;
  return coords_[0];
}

Cyclotomic Cyclotomic::conj() const {
  const std::int64_t n = field_->conductor();
  RationalVector lifted(static_cast<std::size_t>(n), Rational(0));
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (coords_[k] == 0) continue;
    const std::size_t slot = static_cast<std::size_t>((n - static_cast<std::int64_t>(k)) % n);
    lifted[slot] += coords_[k];
  }
  return Cyclotomic(field_, field_->reduce(std::move(lifted)));
}

namespace {

void require_same_field(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.field()->conductor() != b.field()->conductor()) {
    throw std::invalid_argument("Cyclotomic: operands from different fields");
  }
}

}  // namespace

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
  require_same_field(a, b);
  RationalVector c = a.coords_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coords_[i];
  return Cyclotomic(a.field_, std::move(c));
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
  require_same_field(a, b);
  RationalVector c = a.coords_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coords_[i];
  return Cyclotomic(a.field_, std::move(c));
}

Cyclotomic operator-(const Cyclotomic& a) {
  RationalVector c = a.coords_;
  for (auto& v : c) v = -v;
  return Cyclotomic(a.field_, std::move(c));
}

Cyclotomic operator*(const Rational& s, const Cyclotomic& a) {
  RationalVector c = a.coords_;
  for (auto& v : c) v *= s;
  return Cyclotomic(a.field_, std::move(c));
}

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  require_same_field(a, b);
  const std::size_t d = a.coords_.size();
  RationalVector prod(2 * d - 1, Rational(0));
  for (std::size_t i = 0; i < d; ++i) {
    if (a.coords_[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (b.coords_[j] == 0) continue;
      prod[i + j] += a.coords_[i] * b.coords_[j];
    }
  }
  return Cyclotomic(a.field_, a.field_->reduce(std::move(prod)));
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  require_same_field(a, b);
  return a.coords_ == b.coords_;
}

Cyclotomic root_of_unity(const FieldPtr& field, std::int64_t power) {
  const std::int64_t n = field->conductor();
  std::int64_t t = power % n;
  if (t < 0) t += n;
  RationalVector mono(static_cast<std::size_t>(t) + 1, Rational(0));
  mono.back() = 1;
  return Cyclotomic(field, field->reduce(std::move(mono)));
}

Cyclotomic root_of_unity(std::int64_t conductor, std::int64_t power) {
  return root_of_unity(CyclotomicField::make(conductor), power);
}

bool is_real(const Cyclotomic& v) { return v == v.conj(); }

namespace {

class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Encloses the real part sum(c_k * cos(2*pi*k/N)) at the given precision and
// reports the sign if the enclosure excludes zero.
std::optional<int> try_sign(const RationalVector& coords, std::int64_t n, mpfr_prec_t prec) {
  MpfrValue pi_lo(prec), pi_hi(prec);
  mpfr_const_pi(pi_lo.get(), MPFR_RNDD);
  mpfr_const_pi(pi_hi.get(), MPFR_RNDU);

  MpfrValue acc_lo(prec), acc_hi(prec);
  mpfr_set_zero(acc_lo.get(), 0);
  mpfr_set_zero(acc_hi.get(), 0);

  MpfrValue x_lo(prec), x_hi(prec), c_lo(prec), c_hi(prec), width(prec), t_lo(prec), t_hi(prec);
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const Rational& ck = coords[k];
    if (ck == 0) continue;
    Rational angle(2 * static_cast<std::int64_t>(k), n);
    angle.canonicalize();
    mpfr_mul_q(x_lo.get(), pi_lo.get(), angle.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(x_hi.get(), pi_hi.get(), angle.get_mpq_t(), MPFR_RNDU);
    mpfr_sub(width.get(), x_hi.get(), x_lo.get(), MPFR_RNDU);

    // cos over [x_lo, x_hi] lies within cos(x_lo) +- width (cosine is
    // 1-Lipschitz), with the evaluation itself rounded both ways.
    mpfr_cos(c_lo.get(), x_lo.get(), MPFR_RNDD);
    mpfr_cos(c_hi.get(), x_lo.get(), MPFR_RNDU);
    mpfr_sub(c_lo.get(), c_lo.get(), width.get(), MPFR_RNDD);
    mpfr_add(c_hi.get(), c_hi.get(), width.get(), MPFR_RNDU);

    if (sgn(ck) > 0) {
      mpfr_mul_q(t_lo.get(), c_lo.get(), ck.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(t_hi.get(), c_hi.get(), ck.get_mpq_t(), MPFR_RNDU);
    } else {
      mpfr_mul_q(t_lo.get(), c_hi.get(), ck.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(t_hi.get(), c_lo.get(), ck.get_mpq_t(), MPFR_RNDU);
    }
    mpfr_add(acc_lo.get(), acc_lo.get(), t_lo.get(), MPFR_RNDD);
    mpfr_add(acc_hi.get(), acc_hi.get(), t_hi.get(), MPFR_RNDU);
  }

  if (mpfr_sgn(acc_lo.get()) > 0) return 1;
  if (mpfr_sgn(acc_hi.get()) < 0) return -1;
  return std::nullopt;
}

}  // namespace

int sign_of_real(const Cyclotomic& v) {
  if (!is_real(v)) throw std::domain_error("sign_of_real: value is not real");
  if (v.is_zero()) return 0;
  if (auto q = v.rational_value()) return sgn(*q);

  for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t{1} << 22); prec *= 2) {
    if (auto s = try_sign(v.coords(), v.field()->conductor(), prec)) return *s;
  }
  throw std::logic_error("sign_of_real: interval refinement failed to separate zero");
}

bool is_real_nonnegative(const Cyclotomic& v) {
  if (!is_real(v)) return false;
  return sign_of_real(v) >= 0;
}

}  // namespace haarshift
