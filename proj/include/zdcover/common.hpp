#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace zdcover {

// Exceptions thrown by surface construction and validation.
struct non_permutation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct disconnected_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct dimension_mismatch_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Orbit-level exceptions.  A singular hit means the caller should resample
// its start point; it is not a bug.
struct singular_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct no_return_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct not_hyperbolic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct degenerate_sigma_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct unstable_estimate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cover index vector in Z^d.  Fixed capacity, no heap traffic: these are
// added in the innermost Monte Carlo loops.
class IntVec {
 public:
  static constexpr int max_d = 4;

  IntVec() = default;
  explicit IntVec(int d) : d_(check_dim(d)) { vals_.fill(0); }
  IntVec(std::initializer_list<std::int64_t> xs) : d_(check_dim(int(xs.size()))) {
    vals_.fill(0);
    int i = 0;
    for (auto x : xs) vals_[i++] = x;
  }

  int dim() const { return d_; }
  std::int64_t operator[](int i) const { return vals_[i]; }
  std::int64_t& operator[](int i) { return vals_[i]; }

  IntVec& operator+=(const IntVec& o) {
    for (int i = 0; i < d_; ++i) vals_[i] += o.vals_[i];
    return *this;
  }
  IntVec& operator-=(const IntVec& o) {
    for (int i = 0; i < d_; ++i) vals_[i] -= o.vals_[i];
    return *this;
  }
  friend IntVec operator+(IntVec a, const IntVec& b) { return a += b; }
  friend IntVec operator-(IntVec a, const IntVec& b) { return a -= b; }
  friend IntVec operator-(const IntVec& a) {
    IntVec r(a.d_);
    for (int i = 0; i < a.d_; ++i) r.vals_[i] = -a.vals_[i];
    return r;
  }
  friend bool operator==(const IntVec& a, const IntVec& b) {
    if (a.d_ != b.d_) return false;
    for (int i = 0; i < a.d_; ++i)
      if (a.vals_[i] != b.vals_[i]) return false;
    return true;
  }
  friend bool operator!=(const IntVec& a, const IntVec& b) { return !(a == b); }
  friend bool operator<(const IntVec& a, const IntVec& b) {
    if (a.d_ != b.d_) return a.d_ < b.d_;
    for (int i = 0; i < a.d_; ++i)
      if (a.vals_[i] != b.vals_[i]) return a.vals_[i] < b.vals_[i];
    return false;
  }

  bool is_zero() const {
    for (int i = 0; i < d_; ++i)
      if (vals_[i] != 0) return false;
    return true;
  }
  std::int64_t norm1() const {
    std::int64_t s = 0;
    for (int i = 0; i < d_; ++i) s += vals_[i] < 0 ? -vals_[i] : vals_[i];
    return s;
  }

  static IntVec unit(int d, int axis, std::int64_t sign = 1) {
    IntVec v(d);
    v[axis] = sign;
    return v;
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i < d_; ++i) {
      if (i) s += ',';
      s += std::to_string(vals_[i]);
    }
    return s;
  }

 private:
  static int check_dim(int d) {
    if (d < 0 || d > max_d) throw dimension_mismatch_error("cover rank out of range");
    return d;
  }
  int d_ = 0;
  std::array<std::int64_t, max_d> vals_{};
};

// Exact rational, just enough for cylinder moduli and twist bookkeeping.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return double(num) / double(den); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace zdcover
