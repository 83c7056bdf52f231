#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace dubalign {

/// Integer microsecond count, used both for instants on the media timeline
/// and for spans between them. Millisecond wire values convert exactly and
/// quarter fractions of any millisecond pause stay integral.
class Time {
 public:
  constexpr Time() = default;

  static constexpr Time from_us(std::int64_t us) { return Time(us); }
  static constexpr Time from_ms(std::int64_t ms) { return Time(ms * 1000); }
  static Time from_seconds(double s);

  constexpr std::int64_t us() const { return us_; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

  /// Milliseconds rounded half-to-even.
  std::int64_t rounded_ms() const;

  constexpr auto operator<=>(const Time&) const = default;

  constexpr Time operator+(Time o) const { return Time(us_ + o.us_); }
  constexpr Time operator-(Time o) const { return Time(us_ - o.us_); }
  constexpr Time operator-() const { return Time(-us_); }
  constexpr Time& operator+=(Time o) { us_ += o.us_; return *this; }
  constexpr Time& operator-=(Time o) { us_ -= o.us_; return *this; }
  constexpr Time operator*(std::int64_t n) const { return Time(us_ * n); }

 private:
  constexpr explicit Time(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

constexpr Time abs(Time t) { return t.us() < 0 ? -t : t; }

/// Midpoint, rounded toward negative infinity.
Time midpoint(Time a, Time b);

std::ostream& operator<<(std::ostream& os, Time t);

}  // namespace dubalign
