#pragma once

// Exact field scalars: arbitrary-precision rationals and prime fields F_p.
// Both are usable as Eigen matrix scalars (NumTraits below).

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sqz {

class Rational {
 public:
  using Rep = boost::multiprecision::cpp_rational;

  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}
  Rational(long long n) : v_(n) {}
  Rational(long long n, long long d) : v_(Rep(n) / d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
  }
  explicit Rational(Rep v) : v_(std::move(v)) {}

  const Rep& rep() const { return v_; }
  bool is_zero() const { return v_.is_zero(); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.v_ / b.v_);
  }
  Rational operator-() const { return Rational(-v_); }
  Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
  Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
  Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
  Rational& operator/=(const Rational& b) { *this = *this / b; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.v_; }

  std::string str() const { return v_.str(); }

  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Rep(boost::multiprecision::cpp_int(s)));
    boost::multiprecision::cpp_int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw std::domain_error("Rational::parse: zero denominator");
    return Rational(Rep(num) / Rep(den));
  }

  static const char* field_name() { return "q"; }

 private:
  Rep v_;
};

inline Rational inverse(const Rational& a) { return Rational(1) / a; }
inline bool is_zero(const Rational& a) { return a.is_zero(); }

// F_p with a process-wide modulus, set once at startup (default 101).
class Fp {
 public:
  Fp() : v_(0) {}
  Fp(int n) : Fp(static_cast<long long>(n)) {}
  Fp(long long n) {
    long long m = static_cast<long long>(p_);
    long long r = n % m;
    if (r < 0) r += m;
    v_ = static_cast<std::uint64_t>(r);
  }

  static void set_modulus(std::uint64_t p) {
    if (p < 2 || p >= (1ull << 31)) throw std::domain_error("Fp: modulus out of range");
    for (std::uint64_t q = 2; q * q <= p; ++q)
      if (p % q == 0) throw std::domain_error("Fp: modulus must be prime");
    p_ = p;
  }
  static std::uint64_t modulus() { return p_; }

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  friend Fp operator+(Fp a, Fp b) { return from_raw((a.v_ + b.v_) % p_); }
  friend Fp operator-(Fp a, Fp b) { return from_raw((a.v_ + p_ - b.v_) % p_); }
  friend Fp operator*(Fp a, Fp b) { return from_raw((a.v_ * b.v_) % p_); }
  friend Fp operator/(Fp a, Fp b) { return a * inv(b); }
  Fp operator-() const { return from_raw(v_ ? p_ - v_ : 0); }
  Fp& operator+=(Fp b) { *this = *this + b; return *this; }
  Fp& operator-=(Fp b) { *this = *this - b; return *this; }
  Fp& operator*=(Fp b) { *this = *this * b; return *this; }
  Fp& operator/=(Fp b) { *this = *this / b; return *this; }

  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

  friend std::ostream& os_put(std::ostream& os, Fp a) { return os << a.v_; }
  friend std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.v_; }

  std::string str() const { return std::to_string(v_); }

  static Fp inv(Fp a) {
    if (a.v_ == 0) throw std::domain_error("Fp: division by zero");
    // extended Euclid
    long long t = 0, nt = 1, r = static_cast<long long>(p_), nr = static_cast<long long>(a.v_);
    while (nr != 0) {
      long long q = r / nr;
      long long tmp = t - q * nt; t = nt; nt = tmp;
      tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += static_cast<long long>(p_);
    return Fp(t);
  }

  static Fp parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Fp(std::stoll(s));
    return Fp(std::stoll(s.substr(0, slash))) / Fp(std::stoll(s.substr(slash + 1)));
  }

  static std::string field_name() { return "p:" + std::to_string(p_); }

 private:
  static Fp from_raw(std::uint64_t v) { Fp r; r.v_ = v; return r; }
  static inline std::uint64_t p_ = 101;
  std::uint64_t v_ = 0;
};

inline Fp inverse(Fp a) { return Fp::inv(a); }
inline bool is_zero(Fp a) { return a.is_zero(); }

}  // namespace sqz

namespace Eigen {

template <>
struct NumTraits<sqz::Rational> {
  typedef sqz::Rational Real;
  typedef sqz::Rational NonInteger;
  typedef sqz::Rational Nested;
  typedef sqz::Rational Literal;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 10, AddCost = 40, MulCost = 40 };
  static inline Real epsilon() { return sqz::Rational(0); }
  static inline Real dummy_precision() { return sqz::Rational(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<sqz::Fp> {
  typedef sqz::Fp Real;
  typedef sqz::Fp NonInteger;
  typedef sqz::Fp Nested;
  typedef sqz::Fp Literal;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 0, RequireInitialization = 1, ReadCost = 1, AddCost = 2, MulCost = 4 };
  static inline Real epsilon() { return sqz::Fp(0); }
  static inline Real dummy_precision() { return sqz::Fp(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
