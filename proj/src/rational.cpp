#include "mcs/rational.hpp"

#include <charconv>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace mcs {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN)) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? Wide(1) : a;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  auto parse_int = [](std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t num = 0;
    std::int64_t den = 0;
    if (!parse_int(text.substr(0, slash), num)) return std::nullopt;
    if (!parse_int(text.substr(slash + 1), den)) return std::nullopt;
    if (den == 0) return std::nullopt;
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::int64_t whole = 0;
    std::int64_t frac = 0;
    const auto frac_text = text.substr(dot + 1);
    if (frac_text.empty() || frac_text.size() > 15) return std::nullopt;
    if (!parse_int(text.substr(0, dot), whole)) return std::nullopt;
    if (!parse_int(frac_text, frac) || frac < 0) return std::nullopt;
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_text.size(); ++i) scale *= 10;
    const bool neg = text.front() == '-';
    const Wide n = Wide(whole) * scale + (neg ? -Wide(frac) : Wide(frac));
    return Rational(narrow(n), scale);
  }
  std::int64_t value = 0;
  if (!parse_int(text, value)) return std::nullopt;
  return Rational(value);
}

Rational& Rational::operator+=(const Rational& rhs) {
  const Wide n = Wide(num_) * rhs.den_ + Wide(rhs.num_) * den_;
  const Wide d = Wide(den_) * rhs.den_;
  const Wide r = wide_gcd(n, d);
  num_ = narrow(n / r);
  den_ = narrow(d / r);
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  return *this += Rational(-rhs.num_, rhs.den_);
}

Rational& Rational::operator*=(const Rational& rhs) {
  const Wide n = Wide(num_) * rhs.num_;
  const Wide d = Wide(den_) * rhs.den_;
  const Wide r = wide_gcd(n, d);
  num_ = narrow(n / r);
  den_ = narrow(d / r);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Wide lhs = Wide(a.num()) * b.den();
  const Wide rhs = Wide(b.num()) * a.den();
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::fraction_str() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace mcs
