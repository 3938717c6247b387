#include "injurybench/verify.hpp"

#include "doctest.h"
#include "support/naive_engine.hpp"
#include "util.hpp"

using namespace injurybench;
using namespace injurybench::testing;

TEST_SUITE("fuzz") {

TEST_CASE("random registries: no checker fails, oracle agrees") {
    std::mt19937_64 rng(271828);
    for (int round = 0; round < 120; ++round) {
        const PhiRegistry reg(random_config(rng));
        const Stage T = 20 + rng() % 400;
        for (auto kind : {EngineKind::A, EngineKind::B}) {
            const auto tr = run(kind, reg, T);
            for (const auto& rep : run_checks(tr, {"all"})) {
                INFO("round " << round << " engine " << to_string(kind) << " T " << T << ": "
                              << rep.to_json().dump());
                CHECK(rep.status != Status::Fail);
            }
            if (T <= 120) CHECK(naive_run(kind, reg, T).x == tr.x);
        }
    }
}

}  // TEST_SUITE
