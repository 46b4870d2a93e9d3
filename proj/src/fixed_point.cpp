#include "fixed_point.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace qrem {

namespace {

void check_base(int q) {
  if (q < 2 || q > 65536) fail(ErrorKind::Domain, "base q must lie in [2, 65536], got " + std::to_string(q));
}

void check_precision(const FixedPointReal& x, int q, int n) {
  if (n < 0) fail(ErrorKind::Domain, "digit depth must be nonnegative");
  const int need = FixedPointReal::required_bits(q, n);
  if (x.precision_bits() < need) {
    fail(ErrorKind::Precision, "fixed-point precision exhausted: depth " + std::to_string(n) + " in base " +
                                   std::to_string(q) + " needs " + std::to_string(need) + " bits, have " +
                                   std::to_string(x.precision_bits()));
  }
}

int limbs_for(int bits) {
  const int n = std::max(1, (bits + FixedPointReal::kLimbBits - 1) / FixedPointReal::kLimbBits);
  if (n > FixedPointReal::kMaxLimbs) {
    fail(ErrorKind::Precision, "requested precision of " + std::to_string(bits) + " bits exceeds the maximum of " +
                                   std::to_string(FixedPointReal::kMaxBits));
  }
  return n;
}

}  // namespace

FixedPointReal FixedPointReal::zero(int bits) { return FixedPointReal(limbs_for(bits)); }

FixedPointReal FixedPointReal::from_double(double x, int min_bits) {
  if (!(x >= 0.0 && x < 1.0)) fail(ErrorKind::Domain, "fixed-point value must lie in [0,1)");
  if (x == 0.0) return zero(min_bits);
  int exp = 0;
  const double frac = std::frexp(x, &exp);  // x = frac * 2^exp, frac in [0.5, 1), exp <= 0
  const auto mantissa = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  // x = mantissa * 2^(exp - 53); numerator = mantissa * 2^(bits + exp - 53)
  const int need = 53 - exp;
  FixedPointReal r(limbs_for(std::max(min_bits, need)));
  const int shift = r.precision_bits() + exp - 53;
  const int limb = shift / kLimbBits;
  const int bit = shift % kLimbBits;
  r.limbs_[limb] |= mantissa << bit;
  if (bit > 11 && limb + 1 < r.nlimbs_) r.limbs_[limb + 1] |= mantissa >> (kLimbBits - bit);
  return r;
}

FixedPointReal FixedPointReal::from_ratio(std::uint64_t num, std::uint64_t den, int bits) {
  if (den == 0 || num >= den) fail(ErrorKind::Domain, "ratio must lie in [0,1)");
  FixedPointReal r(limbs_for(bits));
  // long division of num * 2^bits by den, most significant limb first
  unsigned __int128 rem = num;
  for (int i = r.nlimbs_ - 1; i >= 0; --i) {
    const unsigned __int128 cur = rem << 64;
    r.limbs_[i] = static_cast<std::uint64_t>(cur / den);
    rem = cur % den;
  }
  return r;
}

FixedPointReal FixedPointReal::from_limbs(std::span<const std::uint64_t> limbs) {
  FixedPointReal r(limbs_for(static_cast<int>(limbs.size()) * kLimbBits));
  std::copy(limbs.begin(), limbs.end(), r.limbs_.begin());
  return r;
}

int FixedPointReal::required_bits(int q, int n) {
  check_base(q);
  const double bits = std::ceil(n * std::log2(static_cast<double>(q)) - 1e-9);
  return static_cast<int>(bits) + kGuardBits;
}

bool FixedPointReal::is_zero() const noexcept {
  return std::all_of(limbs_.begin(), limbs_.begin() + nlimbs_, [](std::uint64_t v) { return v == 0; });
}

double FixedPointReal::to_double() const noexcept {
  int t = nlimbs_ - 1;
  while (t >= 0 && limbs_[t] == 0) --t;
  if (t < 0) return 0.0;
  // leading 64 bits, with the remainder folded into a sticky bit for correct rounding
  const int s = std::countl_zero(limbs_[t]);
  std::uint64_t m = limbs_[t] << s;
  bool sticky = false;
  if (t >= 1) {
    if (s > 0) m |= limbs_[t - 1] >> (64 - s);
    sticky = s > 0 ? (limbs_[t - 1] << s) != 0 : limbs_[t - 1] != 0;
    for (int i = t - 2; i >= 0 && !sticky; --i) sticky = limbs_[i] != 0;
  }
  if (sticky) m |= 1;
  return std::ldexp(static_cast<double>(m), 64 * (t - nlimbs_) - s);
}

unsigned FixedPointReal::shift_digit(unsigned q) noexcept {
  unsigned __int128 carry = 0;
  for (int i = 0; i < nlimbs_; ++i) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(limbs_[i]) * q + carry;
    limbs_[i] = static_cast<std::uint64_t>(prod);
    carry = prod >> 64;
  }
  return static_cast<unsigned>(carry);
}

bool operator==(const FixedPointReal& a, const FixedPointReal& b) noexcept {
  return a.nlimbs_ == b.nlimbs_ && std::equal(a.limbs_.begin(), a.limbs_.begin() + a.nlimbs_, b.limbs_.begin());
}

std::uint64_t DigitString::cell_index() const noexcept {
  std::uint64_t k = 0;
  for (int d : digits) k = k * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(d);
  return k;
}

FixedPointReal apply_T(const FixedPointReal& x, int q, int n) {
  check_precision(x, q, n);
  FixedPointReal y = x;
  for (int i = 0; i < n; ++i) y.shift_digit(static_cast<unsigned>(q));
  return y;
}

DigitString digits_of(const FixedPointReal& x, int q, int n) {
  check_precision(x, q, n);
  DigitString out{q, {}};
  out.digits.reserve(n);
  FixedPointReal y = x;
  for (int i = 0; i < n; ++i) out.digits.push_back(static_cast<int>(y.shift_digit(static_cast<unsigned>(q))));
  return out;
}

std::uint64_t digit_window_index(const FixedPointReal& x, int q, int n, int k) {
  if (n < 1 || k < 1) fail(ErrorKind::Domain, "digit window needs n >= 1 and k >= 1");
  check_precision(x, q, n + k - 1);
  FixedPointReal y = x;
  for (int i = 1; i < n; ++i) y.shift_digit(static_cast<unsigned>(q));
  std::uint64_t idx = 0;
  for (int i = 0; i < k; ++i) idx = idx * static_cast<std::uint64_t>(q) + y.shift_digit(static_cast<unsigned>(q));
  return idx;
}

}  // namespace qrem
