#include "injurybench/dyadic.hpp"

#include <algorithm>
#include <stdexcept>

namespace injurybench {

namespace {

BigNat shifted(const BigNat& value, std::uint64_t bits) {
    BigNat out;
    mpz_mul_2exp(out.get_mpz_t(), value.get_mpz_t(), bits);
    return out;
}

}  // namespace

Dyadic::Dyadic(long value) : mantissa_(value) { canonicalize(); }

Dyadic::Dyadic(BigNat mantissa, std::uint64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
    canonicalize();
}

Dyadic Dyadic::pow2(std::int64_t k) {
    if (k >= 0) return Dyadic(shifted(BigNat(1), static_cast<std::uint64_t>(k)), 0);
    return Dyadic(BigNat(1), static_cast<std::uint64_t>(-k));
}

void Dyadic::canonicalize() {
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    const std::uint64_t trailing = mpz_scan1(mantissa_.get_mpz_t(), 0);
    const std::uint64_t drop = std::min(trailing, exponent_);
    if (drop > 0) {
        mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), drop);
        exponent_ -= drop;
    }
}

std::optional<std::int64_t> Dyadic::log2_exact() const {
    if (sign() <= 0) return std::nullopt;
    if (mpz_popcount(mantissa_.get_mpz_t()) != 1) return std::nullopt;
    const auto bits = static_cast<std::int64_t>(mpz_sizeinbase(mantissa_.get_mpz_t(), 2)) - 1;
    return bits - static_cast<std::int64_t>(exponent_);
}

bool Dyadic::less_than_pow2(std::int64_t k) const {
    if (sign() <= 0) return true;
    // m / 2^e < 2^k  <=>  m < 2^(k+e)  <=>  bitlen(m) <= k+e
    const std::int64_t bound = k + static_cast<std::int64_t>(exponent_);
    if (bound < 0) return false;
    return static_cast<std::int64_t>(mpz_sizeinbase(mantissa_.get_mpz_t(), 2)) <= bound;
}

mpq_class Dyadic::to_rational() const {
    mpq_class q(mantissa_, shifted(BigNat(1), exponent_));
    q.canonicalize();
    return q;
}

std::string Dyadic::to_string() const {
    return mantissa_.get_str() + "/2^" + std::to_string(exponent_);
}

Dyadic Dyadic::parse(std::string_view text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return Dyadic(BigNat(std::string(text)), 0);
        const auto denom = text.substr(slash + 1);
        if (denom.substr(0, 2) != "2^") throw std::invalid_argument("denominator must be 2^k");
        const auto exponent = std::stoull(std::string(denom.substr(2)));
        return Dyadic(BigNat(std::string(text.substr(0, slash))), exponent);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed dyadic '" + std::string(text) + "'");
    }
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const auto e = std::max(a.exponent_, b.exponent_);
    return Dyadic(shifted(a.mantissa_, e - a.exponent_) + shifted(b.mantissa_, e - b.exponent_), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

Dyadic Dyadic::operator-() const {
    Dyadic out = *this;
    out.mantissa_ = -out.mantissa_;
    return out;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const auto e = std::max(a.exponent_, b.exponent_);
    const BigNat lhs = shifted(a.mantissa_, e - a.exponent_);
    const BigNat rhs = shifted(b.mantissa_, e - b.exponent_);
    const int c = mpz_cmp(lhs.get_mpz_t(), rhs.get_mpz_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace injurybench
