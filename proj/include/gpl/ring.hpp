#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gpl {

enum class RingKind { Integers, Rationals, PrimeField, IntegersMod, TruncatedLocal };

/// Descriptor of a commutative coefficient ring. Cheap to copy.
class Ring {
 public:
  Ring() = default;  // the integers

  static Ring integers();
  static Ring rationals();
  static Ring prime_field(std::int64_t p);
  static Ring integers_mod(std::int64_t m);
  /// K[t]/(t^n) with K a prime field or the rationals.
  static Ring truncated_local(const Ring& base, int n);

  RingKind kind() const { return kind_; }
  /// p for prime fields, m for Z/m, the base prime (or 0) for truncated local rings.
  std::int64_t modulus() const { return modulus_; }
  int nilpotency() const { return n_; }
  Ring base() const;
  std::int64_t characteristic() const;
  bool is_field() const { return kind_ == RingKind::Rationals || kind_ == RingKind::PrimeField; }
  bool is_residue() const { return kind_ == RingKind::PrimeField || kind_ == RingKind::IntegersMod; }
  bool is_local() const { return kind_ == RingKind::TruncatedLocal; }
  bool local_over_rationals() const { return is_local() && modulus_ == 0; }

  std::string name() const;
  nlohmann::json to_json() const;
  static Ring from_json(const nlohmann::json& j);
  /// Accepts "Z", "Q", "F3", "Z/4", "F2[t]/t^3", "Q[t]/t^2".
  static Ring parse(const std::string& text);

  friend bool operator==(const Ring& a, const Ring& b) {
    return a.kind_ == b.kind_ && a.modulus_ == b.modulus_ && a.n_ == b.n_;
  }

 private:
  RingKind kind_ = RingKind::Integers;
  std::int64_t modulus_ = 0;
  int n_ = 1;
};

bool is_prime(std::int64_t n);

/// Exact element of a Ring.
class Scalar {
 public:
  Scalar() : value_(mpz_class(0)) {}

  static Scalar zero(const Ring& ring) { return from_integer(0, ring); }
  static Scalar one(const Ring& ring) { return from_integer(1, ring); }
  /// Image of n under the unital map Z -> ring.
  static Scalar from_integer(const mpz_class& n, const Ring& ring);
  static Scalar from_integer(long long n, const Ring& ring) { return from_integer(mpz_class(static_cast<long>(n)), ring); }
  /// Requires a ring where the denominator is invertible.
  static Scalar from_rational(const mpq_class& q, const Ring& ring);
  /// t^k in a truncated local ring (zero once k reaches the nilpotency).
  static Scalar t_power(int k, const Ring& ring);
  /// Sum of coefficients[k] * t^k; coefficients live in the base ring.
  static Scalar from_coefficients(const Ring& ring, const std::vector<Scalar>& coefficients);

  const Ring& ring() const { return ring_; }
  bool is_zero() const;
  bool is_one() const { return *this == one(ring_); }

  Scalar operator+(const Scalar& b) const;
  Scalar operator-(const Scalar& b) const;
  Scalar operator*(const Scalar& b) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar pow(unsigned e) const;
  /// Multiplicative inverse; NotInvertible when none exists.
  Scalar inverse() const;

  friend bool operator==(const Scalar& a, const Scalar& b);

  /// Least k with a nonzero t^k coefficient; nullopt stands for infinity.
  std::optional<int> valuation() const;
  /// Base-ring coefficient of t^k (truncated local rings only).
  Scalar coefficient(int k) const;

  /// Residue in [0, m) for prime fields and Z/m.
  std::int64_t residue() const { return std::get<std::int64_t>(value_); }
  const mpz_class& integer() const { return std::get<mpz_class>(value_); }
  const mpq_class& rational() const { return std::get<mpq_class>(value_); }

  std::string to_string() const;
  /// True when to_string needs parentheses inside a product.
  bool is_compound() const;

 private:
  using LocalFp = std::vector<std::int64_t>;
  using LocalQ = std::vector<mpq_class>;
  Ring ring_;
  std::variant<mpz_class, mpq_class, std::int64_t, LocalFp, LocalQ> value_;

  void require_same(const Scalar& b) const;
};

/// Ring map induced on scalars: Z -> anything, Z/m -> Z/k for k | m,
/// K[t]/(t^n) -> K[t]/(t^k) for k <= n (k = 0 means the augmentation to K), Q -> Q.
Scalar change_ring(const Scalar& x, const Ring& target);

/// Valuation with respect to the maximal ideal (t); WrongRingKind unless truncated local.
std::optional<int> maximal_ideal_valuation(const Scalar& a);

/// Parses the to_string form: integers, a/b, and for local rings sums like 1+2*t-(1/2)*t^3.
/// SyntaxError on malformed text.
Scalar parse_scalar(const std::string& text, const Ring& ring);

enum class ArithOp { Add, Mul, Neg, Sub };
Scalar scalar_arith(const Scalar& a, const Scalar& b, ArithOp op);

}  // namespace gpl
