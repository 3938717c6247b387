#pragma once

#include "injurybench/engine.hpp"
#include "injurybench/phi.hpp"

#include <cstdlib>
#include <map>
#include <random>
#include <string>

namespace injurybench::testing {

/// Directory holding test fixtures; INJURYBENCH_SEED_DIR overrides the
/// compiled-in default.
inline std::string fixture(const std::string& name) {
    const char* dir = std::getenv("INJURYBENCH_SEED_DIR");
    return std::string(dir ? dir : INJURYBENCH_FIXTURE_DIR) + "/" + name;
}

inline PhiRegistry identity_only() {
    PhiConfig c;
    SlotSpec s;
    s.index = 0;
    s.kind = SlotKind::Identity;
    c.slots.push_back(s);
    return PhiRegistry(c);
}

inline PhiRegistry default_registry() { return PhiRegistry(default_suite_config()); }

/// Full default-suite runs, computed once per process.
inline const Trace& default_trace(EngineKind kind, Stage T) {
    static std::map<std::pair<EngineKind, Stage>, Trace> cache;
    auto it = cache.find({kind, T});
    if (it == cache.end()) it = cache.emplace(std::make_pair(kind, T), run(kind, default_registry(), T)).first;
    return it->second;
}

/// Random registry of up to five slots drawn from every slot kind.
inline PhiConfig random_config(std::mt19937_64& rng) {
    PhiConfig c;
    std::uniform_int_distribution<int> kind(0, 7), small(0, 6), count(0, 5);
    const int slots = count(rng);
    for (int i = 0; i < slots; ++i) {
        SlotSpec s;
        s.index = i;
        switch (kind(rng)) {
            case 0: s.kind = SlotKind::Identity; break;
            case 1: s.kind = SlotKind::Linear; s.a = 1 + small(rng) % 3; s.b = small(rng); break;
            case 2: s.kind = SlotKind::Shift; s.b = small(rng); break;
            case 3: s.kind = SlotKind::Square; break;
            case 4: s.kind = SlotKind::Constant; s.b = small(rng); break;
            case 5:
                s.kind = SlotKind::Partial;
                for (int n = 0; n < small(rng); ++n) s.graph[n] = 2 * n + small(rng);
                break;
            case 6:
                s.kind = SlotKind::Program;
                s.code = doubling_program();
                s.output_register = 1;
                s.declared_total_increasing = true;
                break;
            default: s.kind = SlotKind::Diverge; break;
        }
        c.slots.push_back(s);
    }
    return c;
}

}  // namespace injurybench::testing
