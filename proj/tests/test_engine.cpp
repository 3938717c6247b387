#include "injurybench/engine.hpp"
#include "injurybench/error.hpp"

#include "doctest.h"
#include "util.hpp"

using namespace injurybench;
using namespace injurybench::testing;

TEST_SUITE("engine") {

TEST_CASE("fresh parameters") {
    Engine eng(EngineKind::A, identity_only());
    CHECK(eng.witness(BinStr()) == 0);
    CHECK(eng.witness(BinStr("1")) == 2);
    CHECK(eng.witness(BinStr("0110")) == 21);
    CHECK_FALSE(eng.params(BinStr("10")).c.has_value());
    CHECK(eng.params(BinStr("10")).r == 0);
    CHECK(eng.params(BinStr("10")).flag == 0);
    // ℓ(0)[0] = 0 ≥ w(λ) = 0 and 0 < 2^0.
    CHECK(eng.is_threatened(BinStr()));
    CHECK_FALSE(eng.is_threatened(BinStr("0")));
    CHECK_FALSE(eng.is_expansionary(BinStr()));
}

TEST_CASE("engine A: first three stages with the identity at 0") {
    Engine eng(EngineKind::A, identity_only());

    const auto s0 = eng.run_stage();
    CHECK(s0.action.kind == ActionKind::TopOut);
    CHECK(s0.settled.empty());
    CHECK(s0.jump.is_zero());
    CHECK(s0.init_regions.empty());

    const auto s1 = eng.run_stage();
    CHECK(s1.action.kind == ActionKind::ThreatJump);
    CHECK(s1.settled.empty());
    CHECK(s1.jump == Dyadic(1));
    REQUIRE(s1.init_regions.size() == 1);
    CHECK(s1.init_regions[0].anchor.empty());
    CHECK(s1.init_regions[0].relation == Relation::LexGreaterOrExtends);
    CHECK(eng.x() == std::vector<Dyadic>{0, 0, 1});
    CHECK(eng.params(BinStr()).flag == 1);
    CHECK_FALSE(eng.is_threatened(BinStr()));
    CHECK(eng.is_expansionary(BinStr()));
    // ν("0") + 1 + 2
    CHECK(eng.witness(BinStr("0")) == 4);

    const auto s2 = eng.run_stage();
    CHECK(s2.settled == BinStr("01"));
    CHECK(s2.action.kind == ActionKind::TopOut);
    CHECK(s2.jump.is_zero());
    CHECK(eng.params(BinStr()).r == 1);
    REQUIRE(s2.param_writes.size() == 1);
    CHECK(s2.param_writes[0].field == Field::R);
    CHECK(std::get<BigNat>(s2.param_writes[0].after) == 1);
    REQUIRE(s2.init_regions.size() == 1);
    CHECK(s2.init_regions[0].anchor == BinStr("01"));
    CHECK(s2.init_regions[0].relation == Relation::LexGreater);
}

TEST_CASE("engine B: threat, pause, and the next threat") {
    Engine eng(EngineKind::B, identity_only());
    CHECK(eng.run_stage().action.kind == ActionKind::TopOut);

    const auto s1 = eng.run_stage();
    CHECK(s1.action.kind == ActionKind::ThreatJump);
    CHECK(s1.jump == Dyadic(1));
    CHECK(eng.params(BinStr()).flag == 1);
    CHECK(eng.witness(BinStr()) == 1);
    // {τ : λ <_L τ} is empty.
    CHECK(s1.init_regions.empty());

    CHECK_FALSE(eng.is_threatened(BinStr()));
    const auto s2 = eng.run_stage();
    CHECK(s2.settled == BinStr("01"));
    CHECK(eng.params(BinStr()).flag == 0);
    CHECK(eng.params(BinStr()).r == 1);

    const auto s3 = eng.run_stage();
    CHECK(s3.action.kind == ActionKind::ThreatJump);
    CHECK(s3.jump == Dyadic::pow2(-1));
    CHECK(eng.witness(BinStr()) == 2);
}

TEST_CASE("runs: prefixes, silence, determinism") {
    CHECK_THROWS_AS(run_a(identity_only(), 0), PreconditionError);
    CHECK(run_a(identity_only(), 1).x == std::vector<Dyadic>{0, 0});
    CHECK(run_b(identity_only(), 1).x == std::vector<Dyadic>{0, 0});
    CHECK(run_a(identity_only(), 2).x == std::vector<Dyadic>{0, 0, 1});
    CHECK(run_b(identity_only(), 2).x == std::vector<Dyadic>{0, 0, 1});

    const PhiRegistry diverge(PhiConfig::load(fixture("diverge.json")));
    for (auto kind : {EngineKind::A, EngineKind::B}) {
        const auto tr = run(kind, diverge, 300);
        for (const auto& x : tr.x) CHECK(x.is_zero());
        for (const auto& rec : tr.stages) CHECK(rec.action.kind == ActionKind::TopOut);
    }

    for (auto kind : {EngineKind::A, EngineKind::B}) {
        std::vector<StageRecord> streamed;
        const auto a = run(kind, default_registry(), 500, [&](const StageRecord& r) { streamed.push_back(r); });
        const auto b = run(kind, default_registry(), 500);
        CHECK(a.digest() == b.digest());
        CHECK(serialize(a) == serialize(b));
        CHECK(streamed == a.stages);
    }
}

TEST_CASE("settled strings stay within the stage bound") {
    const auto& tr = default_trace(EngineKind::A, 2000);
    for (const auto& rec : tr.stages) CHECK(rec.settled.size() <= rec.t);
}

}  // TEST_SUITE
