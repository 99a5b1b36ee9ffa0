#include "gpl/ring.hpp"

#include <cctype>

#include <regex>

#include "gpl/error.hpp"

namespace gpl {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidRing: return "InvalidRing";
    case Errc::RingMismatch: return "RingMismatch";
    case Errc::WrongRingKind: return "WrongRingKind";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::EmptyBlock: return "EmptyBlock";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::UnknownGenerator: return "UnknownGenerator";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::BadVertex: return "BadVertex";
    case Errc::BadIndex: return "BadIndex";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::OddWeightViolation: return "OddWeightViolation";
    case Errc::UnitArgument: return "UnitArgument";
    case Errc::NotAComplexSpec: return "DifferentialSquareNonzero";
    case Errc::ModelMismatch: return "ModelMismatch";
    case Errc::DegreeError: return "DegreeError";
    case Errc::NotMaurerCartan: return "NotMaurerCartan";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NotFiniteField: return "NotFiniteField";
    case Errc::IdealConditionViolated: return "IdealConditionViolated";
    case Errc::FiberConditionViolated: return "FiberConditionViolated";
    case Errc::NotAComplex: return "NotAComplex";
    case Errc::NotUnital: return "NotUnital";
    case Errc::NotEquivariant: return "NotEquivariant";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::ConfigError: return "ConfigError";
    case Errc::InternalInvariant: return "InternalInvariant";
  }
  return "Error";
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring Ring::integers() { return Ring{}; }

Ring Ring::rationals() {
  Ring r;
  r.kind_ = RingKind::Rationals;
  return r;
}

Ring Ring::prime_field(std::int64_t p) {
  if (!is_prime(p)) raise(Errc::InvalidRing, "prime field needs a prime, got " + std::to_string(p));
  Ring r;
  r.kind_ = RingKind::PrimeField;
  r.modulus_ = p;
  return r;
}

Ring Ring::integers_mod(std::int64_t m) {
  if (m < 2 || m > (std::int64_t{1} << 62)) raise(Errc::InvalidRing, "modulus out of range");
  Ring r;
  r.kind_ = RingKind::IntegersMod;
  r.modulus_ = m;
  return r;
}

Ring Ring::truncated_local(const Ring& base, int n) {
  if (base.kind() != RingKind::PrimeField && base.kind() != RingKind::Rationals)
    raise(Errc::InvalidRing, "truncated local base must be a prime field or the rationals");
  if (n < 1) raise(Errc::InvalidRing, "nilpotency must be at least 1");
  Ring r;
  r.kind_ = RingKind::TruncatedLocal;
  r.modulus_ = base.kind() == RingKind::PrimeField ? base.modulus() : 0;
  r.n_ = n;
  return r;
}

Ring Ring::base() const {
  if (!is_local()) return *this;
  return modulus_ == 0 ? rationals() : prime_field(modulus_);
}

std::int64_t Ring::characteristic() const {
  switch (kind_) {
    case RingKind::Integers:
    case RingKind::Rationals: return 0;
    case RingKind::PrimeField:
    case RingKind::IntegersMod:
    case RingKind::TruncatedLocal: return modulus_;
  }
  return 0;
}

std::string Ring::name() const {
  switch (kind_) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::PrimeField: return "F" + std::to_string(modulus_);
    case RingKind::IntegersMod: return "Z/" + std::to_string(modulus_);
    case RingKind::TruncatedLocal: return base().name() + "[t]/t^" + std::to_string(n_);
  }
  return "?";
}

nlohmann::json Ring::to_json() const {
  switch (kind_) {
    case RingKind::Integers: return {{"kind", "integers"}};
    case RingKind::Rationals: return {{"kind", "rationals"}};
    case RingKind::PrimeField: return {{"kind", "prime_field"}, {"p", modulus_}};
    case RingKind::IntegersMod: return {{"kind", "integers_mod"}, {"m", modulus_}};
    case RingKind::TruncatedLocal:
      return {{"kind", "truncated_local"}, {"base", base().to_json()}, {"n", n_}};
  }
  return {};
}

Ring Ring::from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind")) raise(Errc::InvalidRing, "ring descriptor needs a kind");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "integers") return integers();
  if (kind == "rationals") return rationals();
  if (kind == "prime_field") return prime_field(j.at("p").get<std::int64_t>());
  if (kind == "integers_mod") return integers_mod(j.at("m").get<std::int64_t>());
  if (kind == "truncated_local") return truncated_local(from_json(j.at("base")), j.at("n").get<int>());
  raise(Errc::InvalidRing, "unknown ring kind " + kind);
}

Ring Ring::parse(const std::string& text) {
  static const std::regex local(R"(^\s*(F(\d+)|Q)\[t\]/\(?t\^(\d+)\)?\s*$)");
  static const std::regex field(R"(^\s*F(\d+)\s*$)");
  static const std::regex zmod(R"(^\s*Z/(\d+)\s*$)");
  std::smatch m;
  if (text == "Z") return integers();
  if (text == "Q") return rationals();
  if (std::regex_match(text, m, field)) return prime_field(std::stoll(m[1]));
  if (std::regex_match(text, m, zmod)) return integers_mod(std::stoll(m[1]));
  if (std::regex_match(text, m, local)) {
    const Ring base = m[2].matched ? prime_field(std::stoll(m[2])) : rationals();
    return truncated_local(base, std::stoi(m[3]));
  }
  raise(Errc::InvalidRing, "cannot parse ring '" + text + "'");
}

namespace {

std::int64_t reduce(const mpz_class& n, std::int64_t m) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(m));
  return static_cast<std::int64_t>(r.get_ui());
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::int64_t invmod(std::int64_t a, std::int64_t m) {
  mpz_class r;
  const mpz_class aa(static_cast<long>(a)), mm(static_cast<long>(m));
  if (mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t()) == 0)
    raise(Errc::NotInvertible, std::to_string(a) + " mod " + std::to_string(m));
  return static_cast<std::int64_t>(r.get_si());
}

std::int64_t residue_of(const mpq_class& q, std::int64_t m) {
  const std::int64_t den = reduce(q.get_den(), m);
  return mulmod(reduce(q.get_num(), m), invmod(den, m), m);
}

std::string poly_string(const std::vector<std::string>& coeffs) {
  std::string out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const std::string& c = coeffs[k];
    if (c == "0") continue;
    std::string term;
    if (k == 0) {
      term = c;
    } else {
      const std::string mono = k == 1 ? "t" : "t^" + std::to_string(k);
      if (c == "1") term = mono;
      else if (c == "-1") term = "-" + mono;
      else if (c.find('/') != std::string::npos) term = "(" + c + ")*" + mono;
      else term = c + "*" + mono;
    }
    if (!out.empty() && term[0] != '-') out += "+";
    out += term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace

Scalar Scalar::from_integer(const mpz_class& n, const Ring& ring) {
  Scalar s;
  s.ring_ = ring;
  switch (ring.kind()) {
    case RingKind::Integers: s.value_ = n; break;
    case RingKind::Rationals: s.value_ = mpq_class(n); break;
    case RingKind::PrimeField:
    case RingKind::IntegersMod: s.value_ = reduce(n, ring.modulus()); break;
    case RingKind::TruncatedLocal:
      if (ring.local_over_rationals()) {
        LocalQ c(ring.nilpotency());
        c[0] = n;
        s.value_ = std::move(c);
      } else {
        LocalFp c(ring.nilpotency(), 0);
        c[0] = reduce(n, ring.modulus());
        s.value_ = std::move(c);
      }
      break;
  }
  return s;
}

Scalar Scalar::from_rational(const mpq_class& value, const Ring& ring) {
  if (value.get_den() == 0) raise(Errc::NotInvertible, "zero denominator");
  mpq_class q = value;
  q.canonicalize();
  Scalar s;
  s.ring_ = ring;
  switch (ring.kind()) {
    case RingKind::Integers:
      if (q.get_den() != 1) raise(Errc::NotInvertible, "non-integral rational in Z");
      s.value_ = mpz_class(q.get_num());
      break;
    case RingKind::Rationals: s.value_ = q; break;
    case RingKind::PrimeField:
    case RingKind::IntegersMod: s.value_ = residue_of(q, ring.modulus()); break;
    case RingKind::TruncatedLocal:
      s = from_integer(0, ring);
      if (ring.local_over_rationals()) std::get<LocalQ>(s.value_)[0] = q;
      else std::get<LocalFp>(s.value_)[0] = residue_of(q, ring.modulus());
      break;
  }
  return s;
}

Scalar Scalar::t_power(int k, const Ring& ring) {
  if (!ring.is_local()) raise(Errc::WrongRingKind, "t only exists in truncated local rings");
  Scalar s = from_integer(0, ring);
  if (k < 0 || k >= ring.nilpotency()) return s;
  if (ring.local_over_rationals()) std::get<LocalQ>(s.value_)[k] = 1;
  else std::get<LocalFp>(s.value_)[k] = 1 % ring.modulus();
  return s;
}

Scalar Scalar::from_coefficients(const Ring& ring, const std::vector<Scalar>& coefficients) {
  if (!ring.is_local()) raise(Errc::WrongRingKind, "coefficients need a truncated local ring");
  Scalar s = from_integer(0, ring);
  const Ring base = ring.base();
  for (std::size_t k = 0; k < coefficients.size() && static_cast<int>(k) < ring.nilpotency(); ++k) {
    if (!(coefficients[k].ring() == base)) raise(Errc::RingMismatch, "coefficient outside the base ring");
    if (ring.local_over_rationals()) std::get<LocalQ>(s.value_)[k] = coefficients[k].rational();
    else std::get<LocalFp>(s.value_)[k] = coefficients[k].residue();
  }
  return s;
}

void Scalar::require_same(const Scalar& b) const {
  if (!(ring_ == b.ring_)) raise(Errc::RingMismatch, ring_.name() + " vs " + b.ring_.name());
}

bool Scalar::is_zero() const {
  switch (ring_.kind()) {
    case RingKind::Integers: return std::get<mpz_class>(value_) == 0;
    case RingKind::Rationals: return std::get<mpq_class>(value_) == 0;
    case RingKind::PrimeField:
    case RingKind::IntegersMod: return std::get<std::int64_t>(value_) == 0;
    case RingKind::TruncatedLocal:
      if (ring_.local_over_rationals()) {
        for (const auto& c : std::get<LocalQ>(value_))
          if (c != 0) return false;
      } else {
        for (auto c : std::get<LocalFp>(value_))
          if (c != 0) return false;
      }
      return true;
  }
  return false;
}

bool operator==(const Scalar& a, const Scalar& b) { return a.ring_ == b.ring_ && a.value_ == b.value_; }

Scalar Scalar::operator+(const Scalar& b) const {
  require_same(b);
  Scalar s;
  s.ring_ = ring_;
  switch (ring_.kind()) {
    case RingKind::Integers: s.value_ = mpz_class(std::get<mpz_class>(value_) + std::get<mpz_class>(b.value_)); break;
    case RingKind::Rationals: s.value_ = mpq_class(std::get<mpq_class>(value_) + std::get<mpq_class>(b.value_)); break;
    case RingKind::PrimeField:
    case RingKind::IntegersMod: {
      const std::int64_t m = ring_.modulus();
      std::int64_t r = std::get<std::int64_t>(value_) + std::get<std::int64_t>(b.value_);
      if (r >= m) r -= m;
      s.value_ = r;
      break;
    }
    case RingKind::TruncatedLocal:
      if (ring_.local_over_rationals()) {
        LocalQ c = std::get<LocalQ>(value_);
        const auto& d = std::get<LocalQ>(b.value_);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += d[k];
        s.value_ = std::move(c);
      } else {
        const std::int64_t m = ring_.modulus();
        LocalFp c = std::get<LocalFp>(value_);
        const auto& d = std::get<LocalFp>(b.value_);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = (c[k] + d[k]) % m;
        s.value_ = std::move(c);
      }
      break;
  }
  return s;
}

Scalar Scalar::operator-() const {
  Scalar s;
  s.ring_ = ring_;
  switch (ring_.kind()) {
    case RingKind::Integers: s.value_ = mpz_class(-std::get<mpz_class>(value_)); break;
    case RingKind::Rationals: s.value_ = mpq_class(-std::get<mpq_class>(value_)); break;
    case RingKind::PrimeField:
    case RingKind::IntegersMod: {
      const std::int64_t r = std::get<std::int64_t>(value_);
      s.value_ = r == 0 ? std::int64_t{0} : ring_.modulus() - r;
      break;
    }
    case RingKind::TruncatedLocal:
      if (ring_.local_over_rationals()) {
        LocalQ c = std::get<LocalQ>(value_);
        for (auto& x : c) x = -x;
        s.value_ = std::move(c);
      } else {
        LocalFp c = std::get<LocalFp>(value_);
        for (auto& x : c) x = x == 0 ? 0 : ring_.modulus() - x;
        s.value_ = std::move(c);
      }
      break;
  }
  return s;
}

Scalar Scalar::operator-(const Scalar& b) const { return *this + (-b); }

Scalar Scalar::operator*(const Scalar& b) const {
  require_same(b);
  Scalar s;
  s.ring_ = ring_;
  switch (ring_.kind()) {
    case RingKind::Integers: s.value_ = mpz_class(std::get<mpz_class>(value_) * std::get<mpz_class>(b.value_)); break;
    case RingKind::Rationals: s.value_ = mpq_class(std::get<mpq_class>(value_) * std::get<mpq_class>(b.value_)); break;
    case RingKind::PrimeField:
    case RingKind::IntegersMod:
      s.value_ = mulmod(std::get<std::int64_t>(value_), std::get<std::int64_t>(b.value_), ring_.modulus());
      break;
    case RingKind::TruncatedLocal: {
      const std::size_t n = static_cast<std::size_t>(ring_.nilpotency());
      if (ring_.local_over_rationals()) {
        const auto& a = std::get<LocalQ>(value_);
        const auto& d = std::get<LocalQ>(b.value_);
        LocalQ c(n);
        for (std::size_t i = 0; i < n; ++i)
          if (a[i] != 0)
            for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * d[j];
        s.value_ = std::move(c);
      } else {
        const std::int64_t m = ring_.modulus();
        const auto& a = std::get<LocalFp>(value_);
        const auto& d = std::get<LocalFp>(b.value_);
        LocalFp c(n, 0);
        for (std::size_t i = 0; i < n; ++i)
          if (a[i] != 0)
            for (std::size_t j = 0; i + j < n; ++j) c[i + j] = (c[i + j] + mulmod(a[i], d[j], m)) % m;
        s.value_ = std::move(c);
      }
      break;
    }
  }
  return s;
}

Scalar Scalar::pow(unsigned e) const {
  if (ring_.is_residue()) {
    Scalar s = *this;
    s.value_ = powmod(std::get<std::int64_t>(value_), e, ring_.modulus());
    return s;
  }
  Scalar r = one(ring_), b = *this;
  while (e > 0) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e > 0) b *= b;
  }
  return r;
}

Scalar Scalar::inverse() const {
  switch (ring_.kind()) {
    case RingKind::Integers: {
      const auto& z = std::get<mpz_class>(value_);
      if (z != 1 && z != -1) raise(Errc::NotInvertible, z.get_str() + " in Z");
      return *this;
    }
    case RingKind::Rationals: {
      const auto& q = std::get<mpq_class>(value_);
      if (q == 0) raise(Errc::NotInvertible, "0 in Q");
      return from_rational(mpq_class(1) / q, ring_);
    }
    case RingKind::PrimeField:
    case RingKind::IntegersMod: {
      Scalar s = *this;
      s.value_ = invmod(std::get<std::int64_t>(value_), ring_.modulus());
      return s;
    }
    case RingKind::TruncatedLocal: {
      // u = a0 (1 - x) with x nilpotent; inverse is a0^{-1} (1 + x + ... + x^{n-1}).
      const Scalar a0 = coefficient(0);
      if (a0.is_zero()) raise(Errc::NotInvertible, "element of the maximal ideal");
      const Scalar a0_inv_local = from_coefficients(ring_, {a0.inverse()});
      const Scalar x = one(ring_) - *this * a0_inv_local;
      Scalar sum = one(ring_), power = one(ring_);
      for (int k = 1; k < ring_.nilpotency(); ++k) {
        power *= x;
        sum += power;
      }
      return sum * a0_inv_local;
    }
  }
  return *this;
}

std::optional<int> Scalar::valuation() const {
  if (!ring_.is_local()) raise(Errc::WrongRingKind, "valuation needs a truncated local ring");
  for (int k = 0; k < ring_.nilpotency(); ++k)
    if (!coefficient(k).is_zero()) return k;
  return std::nullopt;
}

Scalar Scalar::coefficient(int k) const {
  if (!ring_.is_local()) raise(Errc::WrongRingKind, "coefficients need a truncated local ring");
  const Ring base = ring_.base();
  if (k < 0 || k >= ring_.nilpotency()) return zero(base);
  if (ring_.local_over_rationals()) return from_rational(std::get<LocalQ>(value_)[k], base);
  Scalar s = zero(base);
  s.value_ = std::get<LocalFp>(value_)[k];
  return s;
}

std::string Scalar::to_string() const {
  switch (ring_.kind()) {
    case RingKind::Integers: return std::get<mpz_class>(value_).get_str();
    case RingKind::Rationals: return std::get<mpq_class>(value_).get_str();
    case RingKind::PrimeField:
    case RingKind::IntegersMod: return std::to_string(std::get<std::int64_t>(value_));
    case RingKind::TruncatedLocal: {
      std::vector<std::string> parts;
      for (int k = 0; k < ring_.nilpotency(); ++k) parts.push_back(coefficient(k).to_string());
      return poly_string(parts);
    }
  }
  return "?";
}

bool Scalar::is_compound() const {
  if (!ring_.is_local()) return false;
  int nonzero = 0;
  for (int k = 0; k < ring_.nilpotency(); ++k) nonzero += coefficient(k).is_zero() ? 0 : 1;
  return nonzero > 1;
}

Scalar change_ring(const Scalar& x, const Ring& target) {
  const Ring& src = x.ring();
  if (src == target) return x;
  switch (src.kind()) {
    case RingKind::Integers: return Scalar::from_integer(x.integer(), target);
    case RingKind::Rationals: break;
    case RingKind::PrimeField:
    case RingKind::IntegersMod:
      if (target.is_residue() && src.modulus() % target.modulus() == 0)
        return Scalar::from_integer(x.residue(), target);
      if (target.is_local() && target.modulus() == src.modulus())
        return Scalar::from_integer(x.residue(), target);
      break;
    case RingKind::TruncatedLocal:
      if (target == src.base()) return x.coefficient(0);
      if (target.is_local() && target.modulus() == src.modulus() && target.nilpotency() <= src.nilpotency()) {
        std::vector<Scalar> c;
        for (int k = 0; k < target.nilpotency(); ++k) c.push_back(x.coefficient(k));
        return Scalar::from_coefficients(target, c);
      }
      break;
  }
  raise(Errc::RingMismatch, "no ring map " + src.name() + " -> " + target.name());
}

std::optional<int> maximal_ideal_valuation(const Scalar& a) { return a.valuation(); }

namespace {

mpq_class parse_rational(const std::string& text, const std::string& whole) {
  mpq_class q;
  if (text.empty() || q.set_str(text, 10) != 0) raise(Errc::SyntaxError, "bad coefficient '" + whole + "'");
  if (q.get_den() == 0) raise(Errc::SyntaxError, "zero denominator in '" + whole + "'");
  q.canonicalize();
  return q;
}

}  // namespace

Scalar parse_scalar(const std::string& text, const Ring& ring) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) raise(Errc::SyntaxError, "empty coefficient");
  if (!ring.is_local()) {
    if (s.front() == '+') s.erase(0, 1);
    return Scalar::from_rational(parse_rational(s, text), ring);
  }
  Scalar out = Scalar::zero(ring);
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') sign = s[i++] == '-' ? -1 : 1;
    // Term: [coef][*]t[^k] or coef, coef possibly parenthesized.
    std::string coef;
    if (i < s.size() && s[i] == '(') {
      const auto close = s.find(')', i);
      if (close == std::string::npos) raise(Errc::SyntaxError, "unbalanced parenthesis in '" + text + "'");
      coef = s.substr(i + 1, close - i - 1);
      i = close + 1;
    } else {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) coef += s[i++];
    }
    int power = 0;
    if (i < s.size() && s[i] == '*') ++i;
    if (i < s.size() && s[i] == 't') {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string digits;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
        if (digits.empty()) raise(Errc::SyntaxError, "bad exponent in '" + text + "'");
        power = std::stoi(digits);
      }
    } else if (coef.empty()) {
      raise(Errc::SyntaxError, "bad term in '" + text + "'");
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-') raise(Errc::SyntaxError, "unexpected character in '" + text + "'");
    const mpq_class c = coef.empty() ? mpq_class(1) : parse_rational(coef, text);
    out += Scalar::from_rational(mpq_class(sign * c), ring) * Scalar::t_power(power, ring);
  }
  return out;
}

Scalar scalar_arith(const Scalar& a, const Scalar& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Neg: return -a;
    case ArithOp::Sub: return a - b;
  }
  return a;
}

}  // namespace gpl
