// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace tripdiag {

/// Exact non-negative rational. A zero denominator is never stored.
class Ratio {
public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) {
      num = 0;
      den = 1;
    }
    const auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend bool operator<(const Ratio& a, const Ratio& b) { return a.num_ * b.den_ < b.num_ * a.den_; }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }

  std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Harmonic mean 2PR/(P+R), or 0 when P+R = 0.
inline Ratio harmonic_f1(const Ratio& p, const Ratio& r) {
  const auto den = p.num() * r.den() + r.num() * p.den();
  if (den == 0) return {};
  return Ratio(2 * p.num() * r.num(), den);
}

}  // namespace tripdiag
