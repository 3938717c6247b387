#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace injurybench {

using BigNat = mpz_class;

/// Exact rational of the form mantissa / 2^exponent.
///
/// Values are always kept canonical: the mantissa is odd, or the value is
/// zero and stored as 0/2^0. Every x_t of a construction run and every jump
/// size is a Dyadic, so equality and ordering are exact.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long value);  // NOLINT(google-explicit-constructor)
    Dyadic(BigNat mantissa, std::uint64_t exponent);

    /// 2^k for any signed k.
    static Dyadic pow2(std::int64_t k);

    const BigNat& mantissa() const { return mantissa_; }
    std::uint64_t exponent() const { return exponent_; }

    bool is_zero() const { return mantissa_ == 0; }
    int sign() const { return sgn(mantissa_); }

    /// Returns k if the value equals 2^k, nothing otherwise.
    std::optional<std::int64_t> log2_exact() const;

    /// Exact test of *this < 2^k.
    bool less_than_pow2(std::int64_t k) const;

    mpq_class to_rational() const;

    /// "m/2^k" textual form.
    std::string to_string() const;
    static Dyadic parse(std::string_view text);

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    Dyadic operator-() const;
    Dyadic& operator+=(const Dyadic& other) { return *this = *this + other; }
    Dyadic& operator-=(const Dyadic& other) { return *this = *this - other; }

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

private:
    void canonicalize();

    BigNat mantissa_{0};
    std::uint64_t exponent_ = 0;
};

inline Dyadic add(const Dyadic& a, const Dyadic& b) { return a + b; }
inline std::strong_ordering cmp(const Dyadic& a, const Dyadic& b) { return a <=> b; }

}  // namespace injurybench
