#pragma once

// Exact Gaussian-rational scalars.
//
// Both parts are GMP rationals kept in canonical form (positive denominator,
// reduced). Products and sums of purely real values skip the imaginary
// arithmetic entirely, which matters for the large contraction checks where
// every operand is real.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <string_view>

#include "tenrank/errors.hpp"

namespace tenrank {

class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(long num, unsigned long den) : re_(num, den) {
    if (den == 0) throw InputError("zero denominator");
    re_.canonicalize();
  }
  explicit Scalar(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar imaginary_unit() { return Scalar(mpq_class(0), mpq_class(1)); }

  const mpq_class& real() const { return re_; }
  const mpq_class& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return is_real() && re_ == 1; }

  Scalar conj() const {
    Scalar out(*this);
    out.im_ = -out.im_;
    return out;
  }

  /// |z|^2, exact.
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero scalar");
    if (is_real()) return Scalar(mpq_class(1 / re_));
    mpq_class n = norm2();
    return Scalar(mpq_class(re_ / n), mpq_class(-im_ / n));
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  Scalar operator-() const { return Scalar(mpq_class(-re_), mpq_class(-im_)); }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    if (!o.is_real()) im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    if (!o.is_real()) im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw std::domain_error("division by zero scalar");
    if (is_real() && o.is_real()) {
      re_ /= o.re_;
      return *this;
    }
    return *this *= o.inverse();
  }

  /// this += a * b without a temporary Scalar in the real case.
  void add_product(const Scalar& a, const Scalar& b) {
    if (a.is_real() && b.is_real()) {
      mpq_class t = a.re_ * b.re_;
      re_ += t;
      return;
    }
    *this += a * b;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    if (s.is_real()) return os << s.re_;
    return os << '(' << s.re_ << (sgn(s.im_) < 0 ? "" : "+") << s.im_ << "i)";
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }
inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0.0, 0.0); }
inline bool is_zero(double x) { return x == 0.0; }

/// Canonical "p/q" text form of a rational (always with an explicit denominator).
inline std::string format_rational(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "p/q" or "p" with decimal integers; rejects zero denominators.
inline mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den)) throw InputError("malformed rational '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw InputError("zero denominator in '" + s + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

/// Small random rationals p/q with |p| <= max_num and 1 <= q <= max_den.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed, long max_num = 9, long max_den = 8)
      : rng_(seed), num_(-max_num, max_num), den_(1, max_den) {}

  Scalar real() { return Scalar(num_(rng_), static_cast<unsigned long>(den_(rng_))); }
  Scalar nonzero_real() {
    for (;;) {
      Scalar s = real();
      if (!s.is_zero()) return s;
    }
  }
  Scalar complex() {
    Scalar re = real();
    Scalar im = real();
    return Scalar(re.real(), im.real());
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<long> num_;
  std::uniform_int_distribution<long> den_;
};

}  // namespace tenrank
