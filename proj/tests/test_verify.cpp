#include "injurybench/error.hpp"
#include "injurybench/verify.hpp"

#include "doctest.h"
#include "support/mutations.hpp"
#include "util.hpp"

#include <algorithm>
#include <set>

using namespace injurybench;
using namespace injurybench::testing;

namespace {

Report only(const Trace& tr, const std::string& name) {
    const auto reps = run_checks(tr, {name});
    REQUIRE(!reps.empty());
    Report worst = reps.front();
    for (const auto& r : reps)
        if (r.status == Status::Fail) worst = r;
    return worst;
}

const Report& named(const std::vector<Report>& reps, const std::string& check) {
    for (const auto& r : reps)
        if (r.check == check) return r;
    FAIL("no report " << check);
    return reps.front();
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("default runs at T = 2000 have no failures") {
    for (auto kind : {EngineKind::A, EngineKind::B}) {
        const auto& tr = default_trace(kind, 2000);
        const auto reps = run_checks(tr, {"all"});
        for (const auto& r : reps) {
            INFO(to_string(kind) << " " << r.to_json().dump());
            CHECK(r.status != Status::Fail);
        }
        CHECK(named(reps, "monotonicity").status == Status::Pass);
        CHECK(named(reps, "convergence_bound").status == Status::Pass);
        CHECK(named(reps, "settlement_facts").status == Status::Pass);
        CHECK(named(reps, "pause_dynamics").status == Status::Pass);
        CHECK(named(reps, "requirement_N_0").status == Status::Pass);
        CHECK(named(reps, "requirement_N_1").status == Status::Pass);
        CHECK(named(reps, "requirement_P_0").status == Status::Pass);
    }
    CHECK(named(run_checks(default_trace(EngineKind::B, 2000), {"requirement_p"}), "requirement_P_1").status ==
          Status::Pass);
}

TEST_CASE("silent runs pass vacuously") {
    const PhiRegistry diverge(PhiConfig::load(fixture("diverge.json")));
    const auto tr = run_a(diverge, 100);
    for (const auto& r : run_checks(tr, {"monotonicity", "convergence_bound", "cutoffs", "settlement_facts",
                                         "jump_sums"}))
        CHECK(r.status == Status::Pass);
}

TEST_CASE("first cut-off is certified") {
    const auto tr = run_a(identity_only(), 3);
    const auto rep = check_cutoffs(tr);
    CHECK(rep.status == Status::Pass);
    REQUIRE(!rep.witnesses.empty());
    CHECK(rep.witnesses.back().at("cutoffs") == 1);
    CHECK(rep.witnesses.back().at("tail_checked") == 1);
}

TEST_CASE("immediate threat episode has an exact sum") {
    const auto tr = run_a(identity_only(), 3);
    const auto rep = check_jump_sums(tr);
    CHECK(rep.status == Status::Pass);
    CHECK(rep.witnesses.back().at("exact") == 1);
}

TEST_CASE("requirement N before the horizon allows a certificate") {
    const auto tr = run_a(identity_only(), 2);
    // x_2 - x_0 = 1 already rules out x - x_0 < 2^0
    CHECK(check_requirement_N(tr, 0).status == Status::Pass);
}

TEST_CASE("preconditions") {
    const auto& tr = default_trace(EngineKind::A, 2000);
    CHECK_THROWS_AS(check_requirement_N(tr, 4), PreconditionError);
    CHECK_THROWS_AS(check_requirement_P(tr, 6), PreconditionError);
    CHECK_THROWS_AS(run_checks(tr, {"bogus"}), PreconditionError);
}

TEST_CASE("checkers are order independent") {
    const auto& tr = default_trace(EngineKind::B, 2000);
    auto names = check_names();
    const auto forward = run_checks(tr, names);
    std::reverse(names.begin(), names.end());
    auto backward = run_checks(tr, names);
    std::reverse(backward.begin(), backward.end());
    REQUIRE(forward.size() == backward.size());
    // requirement_* expand to one report per slot; compare as sets.
    std::multiset<std::string> a, b;
    for (const auto& r : forward) a.insert(r.to_json().dump());
    for (const auto& r : backward) b.insert(r.to_json().dump());
    CHECK(a == b);
}

TEST_CASE("each checker fails on its mutation") {
    for (const auto& m : mutation_catalogue()) {
        INFO(m.checker << ": " << m.description);
        const auto& clean = default_trace(m.engine, 2000);
        CHECK(only(clean, m.checker).status != Status::Fail);
        Trace bad = clean;
        REQUIRE(m.apply(bad));
        CHECK(only(bad, m.checker).status == Status::Fail);
    }
}

}  // TEST_SUITE
