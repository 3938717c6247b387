#include "injurybench/error.hpp"
#include "injurybench/phi.hpp"

#include "doctest.h"
#include "util.hpp"

#include <random>

using namespace injurybench;
using namespace injurybench::testing;

namespace {

PhiRegistry single(SlotKind kind, std::uint64_t a = 1, std::uint64_t b = 0) {
    PhiConfig c;
    SlotSpec s;
    s.index = 0;
    s.kind = kind;
    s.a = a;
    s.b = b;
    c.slots.push_back(s);
    return PhiRegistry(c);
}

}  // namespace

TEST_SUITE("phi") {

TEST_CASE("step applies the value convention") {
    const auto id = single(SlotKind::Identity);
    CHECK_FALSE(id.step(0, 3, 2).has_value());
    CHECK(id.step(0, 3, 3) == 3u);
    const auto div = single(SlotKind::Diverge);
    for (Stage t = 0; t < 50; ++t) CHECK_FALSE(div.step(0, t / 2, t).has_value());
    CHECK_FALSE(id.step(42, 0, 100).has_value());
}

TEST_CASE("length function examples") {
    CHECK(single(SlotKind::Identity).ell(0, 5) == 5);
    const auto five = single(SlotKind::Constant, 1, 5);
    CHECK(five.ell(0, 4) == -1);
    for (Stage t = 5; t < 40; ++t) CHECK(five.ell(0, t) == 0);
    CHECK(single(SlotKind::Diverge).ell(0, 30) == -1);
    const auto doubling = single(SlotKind::Linear, 2, 0);
    for (Stage t = 0; t < 60; ++t) CHECK(doubling.ell(0, t) == static_cast<std::int64_t>(t / 2));
    const PhiRegistry empty;
    for (Index e = 0; e < 5; ++e) CHECK(empty.ell(e, 20) == -1);
}

TEST_CASE("toy program: doubling plus one, 4n+3 steps") {
    PhiConfig c;
    SlotSpec s;
    s.index = 3;
    s.kind = SlotKind::Program;
    s.code = doubling_program();
    s.output_register = 1;
    c.slots.push_back(s);
    const PhiRegistry reg(c);
    CHECK_FALSE(reg.total_increasing(3).has_value());
    for (std::uint64_t n = 0; n < 12; ++n) {
        const Stage halts = 4 * n + 3;
        CHECK_FALSE(reg.step(3, n, halts - 1).has_value());
        CHECK(reg.step(3, n, halts) == 2 * n + 1);
    }
}

TEST_CASE("default suite and configuration") {
    const auto reg = default_registry();
    CHECK(reg.total_increasing(0) == true);
    CHECK(reg.total_increasing(1) == true);
    CHECK(reg.total_increasing(4) == false);
    CHECK(reg.total_increasing(6) == false);
    for (Stage t = 0; t < 40; ++t) CHECK(reg.ell(0, t) == static_cast<std::int64_t>(t));

    PhiRegistry dup;
    register_default_suite(dup);
    SlotSpec again;
    again.index = 0;
    CHECK_THROWS_AS(dup.add(again), PreconditionError);

    const auto cfg = default_suite_config();
    const auto back = PhiConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(back.digest() == cfg.digest());
    CHECK_THROWS_AS(PhiConfig::from_json(nlohmann::json{{"slots", {{{"index", 0}, {"kind", "nope"}}}}}),
                    PreconditionError);
    CHECK_THROWS_AS(PhiConfig::load(fixture("missing.json")), PreconditionError);
    const auto from_file = PhiConfig::load(fixture("identity.json"));
    REQUIRE(from_file.slots.size() == 1);
    CHECK(from_file.slots[0].kind == SlotKind::Identity);
}

TEST_CASE("convention, monotone length, growth on random registries") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 60; ++round) {
        const auto cfg = random_config(rng);
        const PhiRegistry reg(cfg);
        for (const auto& slot : cfg.slots) {
            std::int64_t prev = -1;
            for (Stage t = 0; t < 120; ++t) {
                for (std::uint64_t n = 0; n < 12; ++n) {
                    const auto v = reg.step(slot.index, n, t);
                    if (v) {
                        CHECK(*v <= t);
                        CHECK(reg.step(slot.index, n, t + 7) == v);
                    }
                }
                const auto l = reg.ell(slot.index, t);
                CHECK(l >= prev);
                CHECK(l <= static_cast<std::int64_t>(t));
                if (l >= 0) {
                    const auto v = reg.step(slot.index, static_cast<std::uint64_t>(l), t);
                    REQUIRE(v.has_value());
                    CHECK(*v <= t);
                }
                prev = l;
            }
            if (reg.total_increasing(slot.index) == true) {
                // Doubling schedule: ℓ keeps growing.
                std::int64_t last = reg.ell(slot.index, 64);
                for (Stage t = 128; t <= 4096; t *= 2) {
                    const auto l = reg.ell(slot.index, t);
                    CHECK(l > last);
                    last = l;
                }
            }
        }
    }
}

}  // TEST_SUITE
