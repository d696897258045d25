#include "haarshift/gaussian.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace haarshift {

namespace {

void require_square(std::size_t rows, const auto& m, const char* what) {
  if (m.size() != rows) throw std::invalid_argument(std::string(what) + ": matrix not square");
  for (const auto& row : m) {
    if (row.size() != rows) {
      throw std::invalid_argument(std::string(what) + ": matrix not square");
    }
  }
}

}  // namespace

Int integer_determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  require_square(n, m, "integer_determinant");
  if (n == 0) return 1;
  IntMatrix a = m;
  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && a[pivot][k] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      std::swap(a[pivot], a[k]);
      sign = -sign;
    }
    // Bareiss step: every division below is exact.
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

bool is_positive_semidefinite(const RationalMatrix& m) {
  const std::size_t n = m.size();
  require_square(n, m, "is_positive_semidefinite");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m[i][j] != m[j][i]) {
        throw std::invalid_argument("is_positive_semidefinite: matrix not symmetric");
      }
    }
  }
  RationalMatrix a = m;
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  while (!active.empty()) {
    std::size_t chosen = active.size();
    for (std::size_t t = 0; t < active.size(); ++t) {
      const Rational& d = a[active[t]][active[t]];
      if (d < 0) return false;
      if (d != 0 && chosen == active.size()) chosen = t;
    }
    if (chosen == active.size()) {
      // All remaining diagonal entries are zero; the block is positive
      // semidefinite exactly when it vanishes entirely.
      for (std::size_t i : active) {
        for (std::size_t j : active) {
          if (a[i][j] != 0) return false;
        }
      }
      return true;
    }
    const std::size_t k = active[chosen];
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(chosen));
    const Rational d = a[k][k];
    for (std::size_t i : active) {
      for (std::size_t j : active) {
        a[i][j] -= a[i][k] * a[k][j] / d;
      }
    }
  }
  return true;
}

QuadraticGaussianSpec::QuadraticGaussianSpec(RationalMatrix form) : form_(std::move(form)) {}

QuadraticGaussianSpec QuadraticGaussianSpec::make(RationalMatrix form) {
  if (!is_positive_semidefinite(form)) {
    throw std::invalid_argument("QuadraticGaussianSpec: form is not positive semidefinite");
  }
  return QuadraticGaussianSpec(std::move(form));
}

Rational QuadraticGaussianSpec::value_at(const std::vector<std::int64_t>& w) const {
  if (w.size() != form_.size()) {
    throw std::invalid_argument("QuadraticGaussianSpec: dimension mismatch");
  }
  Rational acc(0);
  for (std::size_t i = 0; i < form_.size(); ++i) {
    if (w[i] == 0) continue;
    Rational row(0);
    for (std::size_t j = 0; j < form_.size(); ++j) {
      if (w[j] == 0) continue;
      row += form_[i][j] * Rational(static_cast<long>(w[j]));
    }
    acc += row * Rational(static_cast<long>(w[i]));
  }
  return acc;
}

LatticeAutomorphism::LatticeAutomorphism(IntMatrix matrix) : matrix_(std::move(matrix)) {}

LatticeAutomorphism LatticeAutomorphism::make(IntMatrix matrix) {
  require_square(matrix.size(), matrix, "LatticeAutomorphism");
  const Int det = integer_determinant(matrix);
  if (det != 1 && det != -1) {
    throw std::invalid_argument("LatticeAutomorphism: determinant is not +-1");
  }
  return LatticeAutomorphism(std::move(matrix));
}

std::vector<std::int64_t> LatticeAutomorphism::apply(const std::vector<std::int64_t>& v) const {
  if (v.size() != matrix_.size()) {
    throw std::invalid_argument("LatticeAutomorphism: dimension mismatch");
  }
  std::vector<std::int64_t> out(matrix_.size(), 0);
  for (std::size_t i = 0; i < matrix_.size(); ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < matrix_.size(); ++j) {
      if (!matrix_[i][j].fits_slong_p()) {
        throw std::invalid_argument("LatticeAutomorphism: entry out of range");
      }
      acc += static_cast<__int128>(matrix_[i][j].get_si()) * v[j];
    }
    if (acc > INT64_MAX || acc < INT64_MIN) {
      throw std::overflow_error("LatticeAutomorphism: image coordinate overflow");
    }
    out[i] = static_cast<std::int64_t>(acc);
  }
  return out;
}

bool gaussian_pair_symmetry_condition(const QuadraticGaussianSpec& a1,
                                      const QuadraticGaussianSpec& a2,
                                      const LatticeAutomorphism& at) {
  const std::size_t n = a1.dimension();
  if (a2.dimension() != n || at.dimension() != n) {
    throw std::invalid_argument("gaussian_pair_symmetry_condition: dimension mismatch");
  }
  // Cross term of the quartet identity: <A1 u, v> + <A2 u, B v> = 0 for all
  // u, v, i.e. A1 + Bt * A2 = 0 entrywise.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational acc = a1.form()[i][j];
      for (std::size_t k = 0; k < n; ++k) {
        acc += Rational(at.matrix()[k][i]) * a2.form()[k][j];
      }
      if (acc != 0) return false;
    }
  }
  return true;
}

namespace {

// Dense table of quadratic-form values on the cube |w|_inf <= bound, in
// lexicographic order from -bound.
std::vector<Rational> tabulate_form(const QuadraticGaussianSpec& spec, std::int64_t bound) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < spec.dimension(); ++i) {
    total *= static_cast<std::size_t>(2 * bound + 1);
  }
  std::vector<Rational> values;
  values.reserve(total);
  std::vector<std::int64_t> w(spec.dimension(), -bound);
  for (std::size_t idx = 0; idx < total; ++idx) {
    values.push_back(spec.value_at(w));
    for (std::size_t i = spec.dimension(); i-- > 0;) {
      if (w[i] < bound) {
        ++w[i];
        break;
      }
      w[i] = -bound;
    }
  }
  return values;
}

std::vector<std::vector<std::int64_t>> cube_points(std::size_t n, std::int64_t radius) {
  std::vector<std::vector<std::int64_t>> points;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(2 * radius + 1);
  points.reserve(total);
  std::vector<std::int64_t> w(n, -radius);
  for (std::size_t idx = 0; idx < total; ++idx) {
    points.push_back(w);
    for (std::size_t i = n; i-- > 0;) {
      if (w[i] < radius) {
        ++w[i];
        break;
      }
      w[i] = -radius;
    }
  }
  return points;
}

std::vector<std::int64_t> vec_add(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<std::int64_t> vec_sub(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace

WindowVerdict window_verify(const QuadraticGaussianSpec& a1, const QuadraticGaussianSpec& a2,
                            const LatticeAutomorphism& at, int radius) {
  const std::size_t n = a1.dimension();
  if (a2.dimension() != n || at.dimension() != n) {
    throw std::invalid_argument("window_verify: dimension mismatch");
  }
  if (radius < 1) throw std::invalid_argument("window_verify: radius must be >= 1");
  if (n == 0) return WindowVerdict{};
  double window_size = 1.0;
  for (std::size_t i = 0; i < n; ++i) window_size *= 2.0 * radius + 1.0;
  if (window_size > static_cast<double>(1 << 22)) {
    throw std::invalid_argument("window_verify: window too large");
  }

  const std::vector<std::vector<std::int64_t>> points = cube_points(n, radius);
  std::vector<std::vector<std::int64_t>> images;
  images.reserve(points.size());
  std::int64_t image_bound = 0;
  for (const auto& v : points) {
    images.push_back(at.apply(v));
    for (std::int64_t c : images.back()) image_bound = std::max(image_bound, std::abs(c));
  }

  // Tabulating the two forms makes the pair scan a matter of lookups; fall
  // back to direct evaluation when an extreme automorphism would need an
  // oversized table.
  double q2_size = 1.0;
  for (std::size_t i = 0; i < n; ++i) q2_size *= 2.0 * (radius + image_bound) + 1.0;
  if (q2_size > static_cast<double>(1 << 24)) {
    for (const auto& u : points) {
      for (std::size_t vi = 0; vi < points.size(); ++vi) {
        const auto& v = points[vi];
        const auto& av = images[vi];
        const Rational lhs = a1.value_at(vec_add(u, v)) + a2.value_at(vec_add(u, av));
        const Rational rhs = a1.value_at(vec_sub(u, v)) + a2.value_at(vec_sub(u, av));
        if (lhs != rhs) {
          return WindowVerdict{false, std::make_pair(u, v)};
        }
      }
    }
    return WindowVerdict{};
  }

  // Scale both tables to a common integer denominator so the pair scan adds
  // integers, not canonicalizing rationals.
  const std::int64_t b1 = 2 * radius;
  const std::int64_t b2 = radius + image_bound;
  const std::vector<Rational> v1 = tabulate_form(a1, b1);
  const std::vector<Rational> v2 = tabulate_form(a2, b2);
  Int scale = 1;
  for (const Rational& v : v1) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den_mpz_t());
  for (const Rational& v : v2) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den_mpz_t());
  std::vector<Int> c1(v1.size()), c2(v2.size());
  bool fits = true;
  constexpr std::int64_t kHalfMax = std::numeric_limits<std::int64_t>::max() / 2;
  const auto rescale = [&](const std::vector<Rational>& src, std::vector<Int>& dst) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = src[i].get_num() * (scale / src[i].get_den());
      if (fits && dst[i].fits_slong_p()) {
        const long s = dst[i].get_si();
        fits = s <= kHalfMax && s >= -kHalfMax;
      } else {
        fits = false;
      }
    }
  };
  rescale(v1, c1);
  rescale(v2, c2);

  // Flat lookup indices split into a per-u base and per-v offset: the index
  // of u + w in a bound-b table is sum_i (u_i + radius + w_i + (b - radius))
  // times the stride of coordinate i.
  std::vector<std::size_t> stride1(n), stride2(n);
  {
    std::size_t s1 = 1, s2 = 1;
    for (std::size_t i = n; i-- > 0;) {
      stride1[i] = s1;
      stride2[i] = s2;
      s1 *= static_cast<std::size_t>(2 * b1 + 1);
      s2 *= static_cast<std::size_t>(2 * b2 + 1);
    }
  }
  const std::size_t count = points.size();
  std::vector<std::size_t> o1p(count), o1m(count), o2p(count), o2m(count);
  for (std::size_t vi = 0; vi < count; ++vi) {
    std::size_t p1 = 0, m1 = 0, p2 = 0, m2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t extra1 = b1 - radius;
      const std::int64_t extra2 = b2 - radius;
      p1 += static_cast<std::size_t>(points[vi][i] + extra1) * stride1[i];
      m1 += static_cast<std::size_t>(-points[vi][i] + extra1) * stride1[i];
      p2 += static_cast<std::size_t>(images[vi][i] + extra2) * stride2[i];
      m2 += static_cast<std::size_t>(-images[vi][i] + extra2) * stride2[i];
    }
    o1p[vi] = p1;
    o1m[vi] = m1;
    o2p[vi] = p2;
    o2m[vi] = m2;
  }

  const auto scan = [&](const auto& t1, const auto& t2) -> WindowVerdict {
    for (std::size_t ui = 0; ui < count; ++ui) {
      std::size_t base1 = 0, base2 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(points[ui][i] + radius);
        base1 += c * stride1[i];
        base2 += c * stride2[i];
      }
      for (std::size_t vi = 0; vi < count; ++vi) {
        if (t1[base1 + o1p[vi]] + t2[base2 + o2p[vi]] !=
            t1[base1 + o1m[vi]] + t2[base2 + o2m[vi]]) {
          return WindowVerdict{false, std::make_pair(points[ui], points[vi])};
        }
      }
    }
    return WindowVerdict{};
  };
  if (fits) {
    std::vector<std::int64_t> f1(c1.size()), f2(c2.size());
    for (std::size_t i = 0; i < c1.size(); ++i) f1[i] = c1[i].get_si();
    for (std::size_t i = 0; i < c2.size(); ++i) f2[i] = c2[i].get_si();
    return scan(f1, f2);
  }
  return scan(c1, c2);
}

LatticeAdmissibility admissibility_on_lattice(const LatticeAutomorphism& at) {
  const std::size_t n = at.dimension();
  IntMatrix plus = at.matrix();
  IntMatrix minus = at.matrix();
  for (std::size_t i = 0; i < n; ++i) {
    plus[i][i] += 1;
    for (auto& e : minus[i]) e = -e;
    minus[i][i] += 1;
  }
  const auto unimodular = [](const IntMatrix& m) {
    const Int d = integer_determinant(m);
    return d == 1 || d == -1;
  };
  return LatticeAdmissibility{unimodular(at.matrix()), unimodular(plus), unimodular(minus)};
}

bool solenoid_pair_condition(const Rational& sigma1, const Rational& sigma2,
                             const Rational& alpha) {
  if (sigma1 < 0 || sigma2 < 0) {
    throw std::invalid_argument("solenoid_pair_condition: variances must be nonnegative");
  }
  if (alpha == 0) {
    throw std::invalid_argument("solenoid_pair_condition: alpha must be nonzero");
  }
  return sigma1 + alpha * sigma2 == 0;
}

bool solenoid_window_identity(const Rational& sigma1, const Rational& sigma2,
                              const Rational& alpha, const Rational& u, const Rational& v) {
  const auto sq = [](const Rational& x) { return x * x; };
  const Rational lhs = sigma1 * sq(u + v) + sigma2 * sq(u + alpha * v);
  const Rational rhs = sigma1 * sq(u - v) + sigma2 * sq(u - alpha * v);
  return lhs == rhs;
}

}  // namespace haarshift
