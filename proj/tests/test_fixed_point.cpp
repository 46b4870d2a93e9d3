#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "errors.hpp"
#include "fixed_point.hpp"
#include "numerics/rng.hpp"

using namespace qrem;
using boost::multiprecision::cpp_int;

namespace {

// Oracle: digits of m / 2^52 by exact big-integer long division.
std::vector<int> big_digits(std::uint64_t mantissa, int q, int n) {
  cpp_int num = mantissa;
  const cpp_int den = cpp_int(1) << 52;
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    num *= q;
    out.push_back(static_cast<int>(num / den));
    num %= den;
  }
  return out;
}

}  // namespace

TEST_CASE("round trip through double") {
  for (double x : {0.0, 0.5, 0.1, 1.0 - 0x1p-53, 0x1p-1000, 0x1.3p-700, 0.7071067811865476}) {
    CHECK(FixedPointReal::from_double(x).to_double() == x);
  }
  CHECK(FixedPointReal::from_ratio(1, 3, 256).to_double() == 1.0 / 3.0);
  CHECK(FixedPointReal::from_ratio(2, 7, 1024).to_double() == 2.0 / 7.0);
  CHECK_THROWS_AS(FixedPointReal::from_double(1.0), Error);
  CHECK_THROWS_AS(FixedPointReal::from_double(-0.25), Error);
}

TEST_CASE("digits agree with exact big-integer division") {
  numerics::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t m = rng.bits() >> 12;  // 52-bit numerator
    const double x = std::ldexp(static_cast<double>(m), -52);
    for (int q : {2, 3, 7, 10, 16}) {
      const int n = 60;
      const auto x_fp = FixedPointReal::from_double(x, FixedPointReal::required_bits(q, n));
      const auto d = digits_of(x_fp, q, n);
      CHECK(d.digits == big_digits(m, q, n));
    }
  }
}

TEST_CASE("T^n composes and matches floating point at small depth") {
  const auto x = FixedPointReal::from_double(0.637, FixedPointReal::required_bits(10, 40));
  const auto a = apply_T(apply_T(x, 10, 3), 10, 5);
  const auto b = apply_T(x, 10, 8);
  CHECK(a == b);
  double y = 0.637;
  for (int i = 0; i < 3; ++i) y = 10 * y - std::floor(10 * y);
  CHECK(apply_T(x, 10, 3).to_double() == doctest::Approx(y).epsilon(1e-12));
}

TEST_CASE("precision contract") {
  const auto x = FixedPointReal::from_double(0.3, 128);
  CHECK(x.precision_bits() >= 128);
  CHECK_THROWS_AS(apply_T(x, 10, 200), Error);
  try {
    digits_of(x, 2, 500);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precision);
  }
}

TEST_CASE("cell index and digit windows") {
  const auto x = FixedPointReal::from_ratio(1234565, 10000000, 256);  // 0.1234565
  const auto d = digits_of(x, 10, 6);
  CHECK(d.digits == std::vector<int>{1, 2, 3, 4, 5, 6});
  CHECK(d.cell_index() == 123456);
  CHECK(digit_window_index(x, 10, 2, 3) == 234);
  CHECK(digit_window_index(x, 10, 1, 1) == 1);
  // base 2: 0.8125 = 0.1101
  const auto y = FixedPointReal::from_double(0.8125);
  CHECK(digit_window_index(y, 2, 1, 4) == 0b1101);
  CHECK(digit_window_index(y, 2, 3, 2) == 0b01);
  CHECK(DigitString{2, {}}.cell_index() == 0);
}

TEST_CASE("from_ratio truncates") {
  CHECK(digits_of(FixedPointReal::from_ratio(123456, 1000000, 256), 10, 6).cell_index() == 123455);
  const auto t = FixedPointReal::from_ratio(1, 3, 128);
  const auto d = digits_of(t, 2, 60);
  for (int i = 0; i < 60; ++i) CHECK(d.digits[i] == (i % 2));
}
