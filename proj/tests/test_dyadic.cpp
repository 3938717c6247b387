#include "injurybench/dyadic.hpp"

#include "doctest.h"

#include <random>

using namespace injurybench;

namespace {

bool canonical(const Dyadic& d) {
    if (d.is_zero()) return d.exponent() == 0;
    return d.exponent() == 0 || mpz_odd_p(d.mantissa().get_mpz_t());
}

mpq_class exact(const Dyadic& d) {
    mpz_class den = 1;
    den <<= static_cast<mp_bitcnt_t>(d.exponent());
    mpq_class q(d.mantissa(), den);
    q.canonicalize();
    return q;
}

Dyadic random_dyadic(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> bits(0, 90), exp(0, 80), sign(0, 1);
    BigNat m = 0;
    const int n = bits(rng);
    for (int i = 0; i < n; ++i) m = 2 * m + static_cast<long>(rng() & 1);
    if (sign(rng)) m = -m;
    return Dyadic(m, static_cast<std::uint64_t>(exp(rng)));
}

}  // namespace

TEST_SUITE("dyadic") {

TEST_CASE("addition examples") {
    CHECK(add(Dyadic(), Dyadic()) == Dyadic());
    CHECK(add(Dyadic(1, 1), Dyadic(1, 2)) == Dyadic(3, 2));
    const auto q = add(Dyadic(3, 3), Dyadic(-1, 3));
    CHECK(q.mantissa() == 1);
    CHECK(q.exponent() == 2);
}

TEST_CASE("powers of two") {
    CHECK(Dyadic::pow2(0) == Dyadic(1));
    CHECK(Dyadic::pow2(-3) == Dyadic(1, 3));
    CHECK(Dyadic::pow2(5) == Dyadic(32));
    CHECK(Dyadic::pow2(-3).log2_exact() == -3);
    CHECK(Dyadic::pow2(5).log2_exact() == 5);
    CHECK_FALSE(Dyadic(3, 2).log2_exact().has_value());
    CHECK_FALSE(Dyadic(-1, 2).log2_exact().has_value());
}

TEST_CASE("comparison examples") {
    CHECK(cmp(Dyadic(1, 1), Dyadic(1, 1)) == std::strong_ordering::equal);
    CHECK(cmp(Dyadic(3, 3), Dyadic(1, 1)) == std::strong_ordering::less);
    CHECK(cmp(Dyadic(7, 4), Dyadic(3, 3)) == std::strong_ordering::greater);
}

TEST_CASE("text round-trip") {
    CHECK(Dyadic(3, 3).to_string() == "3/2^3");
    CHECK(Dyadic::parse("3/2^3") == Dyadic(3, 3));
    CHECK(Dyadic::parse("-6/2^2") == Dyadic(-3, 1));
    CHECK(Dyadic::parse("5") == Dyadic(5));
    CHECK_THROWS(Dyadic::parse("1/3"));
    CHECK_THROWS(Dyadic::parse("x/2^1"));
}

TEST_CASE("canonical form, algebra and ordering on random values") {
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 3000; ++i) {
        const auto a = random_dyadic(rng), b = random_dyadic(rng), c = random_dyadic(rng);
        REQUIRE(canonical(a));
        CHECK(canonical(a + b));
        CHECK(canonical(a - b));
        CHECK(canonical(a * b));
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(exact(a + b) == exact(a) + exact(b));
        CHECK(exact(a - b) == exact(a) - exact(b));
        CHECK(exact(a * b) == exact(a) * exact(b));
        CHECK(a.to_rational() == exact(a));

        // a.m * 2^{b.k} against b.m * 2^{a.k}
        mpz_class lhs = a.mantissa(), rhs = b.mantissa();
        lhs <<= static_cast<mp_bitcnt_t>(b.exponent());
        rhs <<= static_cast<mp_bitcnt_t>(a.exponent());
        CHECK((a < b) == (lhs < rhs));
        CHECK((a == b) == (lhs == rhs));

        CHECK(Dyadic::parse(a.to_string()) == a);
        const std::int64_t k = static_cast<std::int64_t>(rng() % 40) - 20;
        CHECK(a.less_than_pow2(k) == (exact(a) < exact(Dyadic::pow2(k))));
    }
}

}  // TEST_SUITE
