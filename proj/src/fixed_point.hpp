#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace qrem {

/// Exact fixed-point representation of x in [0,1): x = numerator / 2^bits with
/// bits a multiple of 64. The base-q map T(x) = qx - floor(qx) is applied in
/// integer arithmetic, so digit extraction never suffers the q^n error
/// amplification of binary floating point.
class FixedPointReal {
 public:
  static constexpr int kLimbBits = 64;
  static constexpr int kMaxLimbs = 32;
  static constexpr int kMaxBits = kLimbBits * kMaxLimbs;
  static constexpr int kGuardBits = 64;

  /// Zero at 128 bits.
  FixedPointReal() : FixedPointReal(zero(128)) {}

  static FixedPointReal zero(int bits);
  /// Exact conversion (every double in [0,1) is a dyadic rational). The
  /// precision is at least `min_bits` and large enough to hold x exactly.
  static FixedPointReal from_double(double x, int min_bits = 128);
  /// floor(num / den * 2^bits) / 2^bits, for num < den.
  static FixedPointReal from_ratio(std::uint64_t num, std::uint64_t den, int bits);
  /// Little-endian limbs; the precision is 64 * limbs.size().
  static FixedPointReal from_limbs(std::span<const std::uint64_t> limbs);

  /// Bits needed for digit queries at depth n: ceil(n log2 q) + 64.
  static int required_bits(int q, int n);

  int precision_bits() const noexcept { return nlimbs_ * kLimbBits; }
  std::span<const std::uint64_t> limbs() const noexcept { return {limbs_.data(), static_cast<std::size_t>(nlimbs_)}; }
  bool is_zero() const noexcept;
  double to_double() const noexcept;

  /// x <- T(x); returns the digit floor(qx). No precision check.
  unsigned shift_digit(unsigned q) noexcept;

  friend bool operator==(const FixedPointReal& a, const FixedPointReal& b) noexcept;

 private:
  explicit FixedPointReal(int nlimbs) : nlimbs_(nlimbs) {}
  std::array<std::uint64_t, kMaxLimbs> limbs_{};
  int nlimbs_ = 2;
};

/// Finite base-q digit sequence, possibly empty.
struct DigitString {
  int q = 2;
  std::vector<int> digits;

  /// Cell index sum_i digits[i] q^(n-1-i), i.e. k - 1 for the cell I_{k;n}.
  std::uint64_t cell_index() const noexcept;
};

/// T^n(x), computed exactly. Throws Error(Precision) when the precision of x
/// is below required_bits(q, n).
FixedPointReal apply_T(const FixedPointReal& x, int q, int n);

/// First n base-q digits of x. Same precision contract as apply_T.
DigitString digits_of(const FixedPointReal& x, int q, int n);

/// Index of the tuple (X_n, ..., X_{n+k-1}) read as a base-q number with
/// X_n most significant. Same precision contract, at depth n + k - 1.
std::uint64_t digit_window_index(const FixedPointReal& x, int q, int n, int k);

}  // namespace qrem
