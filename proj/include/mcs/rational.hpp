#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace mcs {

/// Exact rational on 64-bit words. Ledger sums and bound comparisons must be
/// exact, so all cost arithmetic runs through this type instead of binary
/// floating point. Always stored reduced with a positive denominator.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit on purpose
  Rational(std::int64_t num, std::int64_t den);

  /// Accepts "3", "2/3" and decimal forms like "2.5". Rejects anything else.
  static std::optional<Rational> parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool negative() const { return num_ < 0; }

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// "3" when integral, "5/2" otherwise.
  std::string str() const;
  /// Always "num/den", e.g. "3/1".
  std::string fraction_str() const;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace mcs
