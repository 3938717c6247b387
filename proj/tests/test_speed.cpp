#include "injurybench/error.hpp"
#include "injurybench/speed.hpp"

#include "doctest.h"

#include <random>
#include <sstream>

using namespace injurybench;

namespace {

// 1 - 2^{-n}
ApproxSequence halving(std::size_t length) { return geometric_sequence(1, length); }

std::vector<std::size_t> iota(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

ApproxSequence random_sequence(std::mt19937_64& rng) {
    std::vector<std::int64_t> exps(5 + rng() % 40);
    for (auto& e : exps) e = static_cast<std::int64_t>(rng() % 30);
    return jump_sequence(exps, static_cast<std::int64_t>(rng() % 40));
}

}  // namespace

TEST_SUITE("speed") {

TEST_CASE("speed-up indices") {
    const auto seq = halving(20);
    const auto half = speedup_indices(seq, Dyadic::pow2(-1));
    CHECK(half.ratio_form == iota(19));
    CHECK(half.prime_form == half.ratio_form);
    const auto three_quarters = speedup_indices(seq, Dyadic(3, 2));
    CHECK(three_quarters.ratio_form.empty());
    CHECK(three_quarters.prime_form.empty());

    ApproxSequence flat{{Dyadic(1, 1), Dyadic(1, 1)}, Dyadic(1), "flat"};
    CHECK_THROWS_AS(speedup_indices(flat, Dyadic(1, 1)), PreconditionError);
    ApproxSequence no_limit{seq.values, std::nullopt, "x"};
    CHECK_THROWS_AS(speedup_indices(no_limit, Dyadic(1, 1)), PreconditionError);
    CHECK_THROWS_AS(speedup_indices(seq, Dyadic(1)), PreconditionError);
}

TEST_CASE("regaining to speedable") {
    const auto seq = geometric_sequence(2, 10);
    const auto y = regain_to_speed(seq);
    CHECK(y.values[1] == Dyadic(1, 2));
    CHECK(y.known_limit == seq.known_limit);
    const auto ratios = regaining_ratios(seq);
    REQUIRE(!ratios.empty());
    CHECK(ratios.front().n == 1);
    CHECK(ratios.front().ratio == mpq_class(7, 12));
    for (const auto& r : ratios) CHECK(r.ratio > mpq_class(1, 4));

    ApproxSequence zero{std::vector<Dyadic>(8, Dyadic()), Dyadic(), "zero"};
    const auto shifted = regain_to_speed(zero);
    for (std::size_t n = 0; n < 8; ++n) CHECK(shifted.values[n] == -Dyadic::pow2(-static_cast<std::int64_t>(n)));
    const auto flat = regaining_ratios(zero);
    CHECK(flat.size() == 7);
    for (const auto& r : flat) CHECK(r.ratio == mpq_class(1, 2));

    ApproxSequence down{{Dyadic(1), Dyadic()}, std::nullopt, "down"};
    CHECK_THROWS_AS(regain_to_speed(down), PreconditionError);
}

TEST_CASE("speedable to regaining: formula values") {
    const auto a = speed_to_regain(ModulusFn::affine(2, 0), Dyadic::pow2(-2));
    CHECK(a.k == 2);
    CHECK(a.m == std::uint64_t{4});
    for (std::uint64_t n = 0; n < 200; ++n) {
        CHECK(a.g(n) == n / 2);
        CHECK(a.h(n) == (n / 2 > 2 ? n / 2 - 2 : 0));
    }
    const auto b = speed_to_regain(ModulusFn::affine(1, 0), Dyadic::pow2(-1));
    CHECK(b.k == 1);
    CHECK(b.m == std::uint64_t{1});
    for (std::uint64_t n = 0; n < 200; ++n) {
        CHECK(b.g(n) == n);
        CHECK(b.h(n) == (n > 1 ? n - 1 : 0));
    }
    const auto c = speed_to_regain(ModulusFn::affine(1, 5), Dyadic::pow2(-1));
    CHECK(c.k == 1);
    CHECK(c.m == std::uint64_t{6});
    for (std::uint64_t n = 0; n < 200; ++n) CHECK(c.g(n) == (n < 5 ? 0 : n - 5));

    // k is minimal with 1/ρ ≤ 2^k.
    CHECK(speed_to_regain(ModulusFn::affine(1, 0), Dyadic(3, 3)).k == 2);

    // Galois inequality g(f(k)) ≥ k.
    for (const auto& f : {ModulusFn::affine(3, 1), ModulusFn::step(4, 3, 2), ModulusFn::table({0, 0, 1, 5, 5, 9})}) {
        const auto g = lower_inverse(f);
        const std::uint64_t top = f.domain() ? *f.domain() - 1 : 60;
        for (std::uint64_t k = 0; k + 1 < top; ++k) CHECK(g(f(k)) >= k);
    }
}

TEST_CASE("search budget") {
    const auto slow = speed_to_regain(ModulusFn::affine(1000, 0), Dyadic::pow2(-3), 50);
    CHECK_FALSE(slow.m.has_value());
    CHECK(slow.budget == 50);
}

TEST_CASE("certify regaining") {
    CHECK(certify_regaining(geometric_sequence(2, 12), ModulusFn::affine(1, 0)) ==
          std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(certify_regaining(halving(12), ModulusFn::affine(0, 0)).size() == 12);
    CHECK(certify_regaining(halving(12), ModulusFn::affine(1, 1)).empty());
}

TEST_CASE("modulus to gap bound") {
    const auto seq = halving(30);
    const auto rep = modulus_to_gapbound(ModulusFn::affine(1, 1), seq);
    CHECK(rep.checked > 0);
    CHECK_FALSE(rep.violation.has_value());
    try {
        modulus_to_gapbound(ModulusFn::affine(0, 0), seq);
        FAIL("expected a refusal");
    } catch (const PreconditionError& ex) {
        CHECK(std::string(ex.what()).find("n=0") != std::string::npos);
    }
    ApproxSequence flat{std::vector<Dyadic>(10, Dyadic(1, 1)), Dyadic(1, 1), "flat"};
    CHECK_FALSE(modulus_to_gapbound(ModulusFn::affine(0, 0), flat).violation.has_value());
}

TEST_CASE("modulus tables") {
    std::stringstream csv;
    write_modulus_csv(csv, ModulusFn::step(2, 3, 1), 9);
    const auto back = read_modulus_csv(csv);
    REQUIRE(back.domain() == std::uint64_t{9});
    for (std::uint64_t n = 0; n < 9; ++n) CHECK(back(n) == 1 + 3 * (n / 2));
    CHECK_THROWS_AS(back(9), PreconditionError);
    CHECK_THROWS_AS(ModulusFn::table({3, 2}), PreconditionError);
    std::stringstream gap("n,f\n0,1\n2,3\n");
    CHECK_THROWS_AS(read_modulus_csv(gap), ParseError);
}

TEST_CASE("properties on random sequences") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto seq = random_sequence(rng);
        const Dyadic rho(static_cast<long>(1 + rng() % 15), 4);
        const auto idx = speedup_indices(seq, rho);
        CHECK(idx.ratio_form == idx.prime_form);

        const auto y = regain_to_speed(seq);
        for (std::size_t n = 0; n + 1 < y.size(); ++n) CHECK(y.values[n] < y.values[n + 1]);
        for (const auto& r : regaining_ratios(seq)) CHECK(r.ratio > mpq_class(1, 4));
    }
}

TEST_CASE("bounded moduli are refused by the inverse") {
    const auto g = lower_inverse(ModulusFn::affine(0, 3));
    CHECK(g(2) == 0);
    CHECK_THROWS_AS(g(3), PreconditionError);
}

}  // TEST_SUITE
