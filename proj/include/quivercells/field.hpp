#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace quivercells {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldSpec {
  enum class Kind { Rationals, PrimeField };
  Kind kind = Kind::Rationals;
  std::uint32_t p = 0;

  static FieldSpec rationals() { return {}; }
  static FieldSpec prime(std::uint32_t p) { return {Kind::PrimeField, p}; }

  bool is_prime_field() const { return kind == Kind::PrimeField; }
  // "Q" or "Fp:<p>", the same syntax the command line accepts.
  std::string to_string() const {
    return is_prime_field() ? "Fp:" + std::to_string(p) : "Q";
  }
  static FieldSpec parse(const std::string& s);

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline FieldSpec FieldSpec::parse(const std::string& s) {
  if (s == "Q") return rationals();
  if (s.rfind("Fp:", 0) == 0 || s.rfind("F", 0) == 0) {
    std::string digits = s.substr(s[1] == 'p' ? 3 : 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad field '" + s + "'");
    unsigned long long p = std::stoull(digits);
    if (!is_prime(p) || p > 0xffffu) throw ParseError("field characteristic " + digits + " is not a supported prime");
    return prime(static_cast<std::uint32_t>(p));
  }
  throw ParseError("bad field '" + s + "' (expected Q or Fp:<p>)");
}

inline mpq_class parse_rational(const std::string& s) {
  auto bad = [&] { return ParseError("malformed field element '" + s + "'"); };
  auto slash = s.find('/');
  auto check_int = [&](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) throw bad();
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') throw bad();
  };
  if (slash == std::string::npos) {
    check_int(s, true);
    return mpq_class(mpz_class(s[0] == '+' ? s.substr(1) : s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  check_int(num, true);
  check_int(den, false);
  mpz_class d(den);
  if (d == 0) throw ParseError("zero denominator in field element '" + s + "'");
  mpq_class r(mpz_class(num[0] == '+' ? num.substr(1) : num), d);
  r.canonicalize();
  return r;
}

// Q with GMP rationals, always canonical.
struct Rationals {
  using value_type = mpq_class;

  FieldSpec spec() const { return FieldSpec::rationals(); }
  bool finite() const { return false; }
  std::uint32_t characteristic() const { return 0; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return mpq_class(static_cast<long>(v)); }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_one(const value_type& a) const { return a == 1; }
  std::string to_string(const value_type& a) const { return a.get_str(); }
  value_type parse(const std::string& s) const { return parse_rational(s); }

  friend bool operator==(const Rationals&, const Rationals&) { return true; }
};

// F_p for p < 2^16, residues in [0, p).
class PrimeField {
 public:
  using value_type = std::uint32_t;

  PrimeField() = default;
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p > 0xffffu) throw std::invalid_argument("PrimeField needs a prime below 65536");
  }

  FieldSpec spec() const { return FieldSpec::prime(p_); }
  bool finite() const { return true; }
  std::uint32_t characteristic() const { return p_; }
  std::uint32_t order() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % p_; }
  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    return static_cast<value_type>(r < 0 ? r + p_ : r);
  }
  value_type element(std::uint64_t i) const { return static_cast<value_type>(i % p_); }
  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p_);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    long long t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      long long q = r / nr;
      t -= q * nt;
      std::swap(t, nt);
      r -= q * nr;
      std::swap(r, nr);
    }
    return from_int(t);
  }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == 1; }
  std::string to_string(value_type a) const { return std::to_string(a); }
  value_type parse(const std::string& s) const {
    mpq_class r = parse_rational(s);
    mpz_class num = r.get_num() % p_, den = r.get_den() % p_;
    if (den == 0) throw ParseError("denominator of '" + s + "' vanishes mod " + std::to_string(p_));
    return mul(from_int(num.get_si()), inv(from_int(den.get_si())));
  }
  // Reduction of a rational; throws if the denominator is divisible by p.
  value_type reduce(const mpq_class& r) const {
    mpz_class num = r.get_num() % p_, den = r.get_den() % p_;
    if (den == 0) throw std::domain_error("denominator divisible by " + std::to_string(p_));
    return mul(from_int(num.get_si()), inv(from_int(den.get_si())));
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_ = 2;
};

}  // namespace quivercells
