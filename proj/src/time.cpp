#include "dubalign/time.hpp"

#include <cmath>

namespace dubalign {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Time Time::from_seconds(double s) {
  return Time(static_cast<std::int64_t>(std::llround(s * 1e6)));
}

std::int64_t Time::rounded_ms() const {
  const std::int64_t q = floor_div(us_, 1000);
  const std::int64_t r = us_ - q * 1000;
  if (r < 500) return q;
  if (r > 500) return q + 1;
  return (q % 2 == 0) ? q : q + 1;
}

Time midpoint(Time a, Time b) {
  return Time::from_us(floor_div(a.us() + b.us(), 2));
}

std::ostream& operator<<(std::ostream& os, Time t) {
  return os << t.us() << "us";
}

}  // namespace dubalign
