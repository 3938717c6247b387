#include "injurybench/analysis.hpp"
#include "injurybench/error.hpp"

#include "doctest.h"
#include "util.hpp"

using namespace injurybench;
using namespace injurybench::testing;

TEST_SUITE("analysis") {

TEST_CASE("immediate threat jumps map to themselves") {
    const auto tr = run_a(identity_only(), 4);
    const auto J = jump_set(tr);
    REQUIRE(J == std::vector<Stage>{1});
    const auto u = u_map(tr);
    CHECK(u.at(1) == 1);
    CHECK(cutoff_stages(tr, BinStr()) == Stage{1});
    CHECK(final_threat_stage(tr, BinStr()) == Stage{1});
    CHECK_FALSE(cutoff_stages(tr, BinStr("0")).has_value());
}

TEST_CASE("silent runs have no jumps") {
    const PhiRegistry diverge(PhiConfig::load(fixture("diverge.json")));
    const auto tr = run_a(diverge, 50);
    CHECK(jump_set(tr).empty());
    CHECK(u_map(tr).empty());
    CHECK_FALSE(cutoff_stages(tr, BinStr()).has_value());
}

TEST_CASE("split jumps map back to the scheduling threat") {
    const auto& tr = default_trace(EngineKind::A, 2000);
    const auto u = u_map(tr);
    const auto fibers = u_fibers(u);
    CHECK(u.size() == jump_set(tr).size());
    std::size_t split = 0;
    for (const auto& rec : tr.stages) {
        if (rec.action.kind != ActionKind::ThreatSchedule) continue;
        const auto it = fibers.find(rec.t);
        if (it == fibers.end()) continue;
        ++split;
        for (Stage t : it->second) {
            CHECK(t > rec.t);
            CHECK(tr.stages[t].action.kind == ActionKind::ExpansionJump);
            REQUIRE(tr.stages[t].action.decoded.has_value());
            CHECK(tr.stages[t].action.decoded->label == rec.settled);
        }
        const auto cut = cutoff_stages(tr, rec.settled);
        if (final_threat_stage(tr, rec.settled) == rec.t) CHECK(cut == it->second.back());
    }
    CHECK(split > 0);
}

TEST_CASE("unexplained jumps are corruption") {
    auto tr = run_a(identity_only(), 4);
    tr.stages[0].jump = Dyadic(1, 3);
    CHECK_THROWS_AS(u_map(tr), TraceCorruption);
}

TEST_CASE("initialization lookups") {
    const auto tr = run_a(identity_only(), 6);
    CHECK(last_initialization(tr, BinStr("0")) >= Stage{1});
    CHECK_FALSE(last_initialization(tr, BinStr()).has_value());
    CHECK(initialized_between(tr, BinStr("0"), 1, 2));
    CHECK_FALSE(initialized_between(tr, BinStr("0"), 0, 1));
    const ApplicationIndex apps(tr);
    CHECK(apps.applications(BinStr()).size() == 6);
    CHECK(apps.next_application(BinStr(), 2) == Stage{3});
    CHECK(apps.applications(BinStr("0")).front() == 2);
}

}  // TEST_SUITE
