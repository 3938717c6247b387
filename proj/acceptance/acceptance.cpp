// Acceptance run: one line per criterion, "PASS" or "FAIL", followed by the
// evidence. Exit status is 0 only when every criterion passes.

#include "injurybench/engine.hpp"
#include "injurybench/speed.hpp"
#include "injurybench/verify.hpp"

#include "support/mutations.hpp"
#include "support/naive_engine.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace injurybench;
using namespace injurybench::testing;

namespace {

// Pinned limits. Every arithmetic comparison below is exact; the only
// tolerance anywhere is wall-clock time.
constexpr double kRuntimeBudgetSeconds = 10.0;
constexpr Stage kDeterminismStages = 500;
constexpr Stage kReplayStages = 200;
constexpr Stage kFullStages = 2000;
constexpr unsigned long kBijectionLimit = 1ul << 16;
constexpr int kSyntheticSequences = 20;
constexpr int kRatioFormInstances = 50;
constexpr std::uint64_t kModulusRange = 1000;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok: " : "VIOLATED: ") + what);
    }
    void note(const std::string& what) { notes.push_back(what); }
};

const PhiRegistry& registry() {
    static const PhiRegistry reg(default_suite_config());
    return reg;
}

const Trace& full(EngineKind kind, Stage T = kFullStages) {
    static std::map<std::pair<EngineKind, Stage>, Trace> cache;
    auto it = cache.find({kind, T});
    if (it == cache.end()) it = cache.emplace(std::make_pair(kind, T), run(kind, registry(), T)).first;
    return it->second;
}

std::string label(EngineKind k) { return "engine " + to_string(k); }

std::string status_line(const Report& r) {
    std::ostringstream s;
    s << r.check << "=" << to_string(r.status);
    return s.str();
}

Outcome determinism_and_replay() {
    Outcome out;
    for (auto kind : {EngineKind::A, EngineKind::B}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto first = run(kind, registry(), kDeterminismStages);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto second = run(kind, registry(), kDeterminismStages);
        out.require(serialize(first) == serialize(second),
                    label(kind) + ": two T=500 runs serialize identically (digest " + first.digest() + ")");
        std::ostringstream t;
        t << label(kind) << ": T=500 in " << secs << " s (budget " << kRuntimeBudgetSeconds << " s)";
        out.require(secs < kRuntimeBudgetSeconds, t.str());

        const auto fast = run(kind, registry(), kReplayStages, {}, EngineOptions{.record_reads = true});
        const auto slow = naive_run(kind, registry(), kReplayStages);
        bool same = fast.x == slow.x;
        std::size_t reads = 0;
        for (Stage s = 0; same && s < kReplayStages; ++s) {
            const auto& mine = fast.stages[s].reads;
            const auto& theirs = slow.reads[s];
            same = mine.size() == theirs.size();
            for (std::size_t i = 0; same && i < mine.size(); ++i, ++reads) {
                const auto& a = mine[i];
                const auto& b = theirs[i].params;
                same = a.strategy == theirs[i].sigma && a.values.c == b.c &&
                       BigNat(static_cast<long>(a.values.r)) == b.r && a.values.flag == b.flag &&
                       witness_value(a.strategy, a.values.w_offset) == b.w;
            }
        }
        out.require(same, label(kind) + ": naive replay reproduces every x_t and " + std::to_string(reads) +
                              " parameter reads for T=200");
    }
    return out;
}

Outcome global_bound() {
    Outcome out;
    for (auto kind : {EngineKind::A, EngineKind::B})
        for (Stage T : {Stage{100}, Stage{500}, Stage{2000}}) {
            const auto rep = check_convergence_bound(full(kind, T));
            out.require(rep.status == Status::Pass, label(kind) + " T=" + std::to_string(T) +
                                                        ": x non-decreasing, power-of-two jumps, x_T = " +
                                                        full(kind, T).x.back().to_string() + " < 4");
        }
    return out;
}

Outcome monotonicity() {
    Outcome out;
    for (auto kind : {EngineKind::A, EngineKind::B}) {
        const auto rep = check_monotonicity(full(kind));
        out.require(rep.status == Status::Pass, label(kind) + ": " + rep.witnesses.back().dump());
    }
    return out;
}

Outcome jump_sums() {
    Outcome out;
    for (auto kind : {EngineKind::A, EngineKind::B}) {
        const auto rep = check_jump_sums(full(kind));
        const auto& counts = rep.witnesses.back();
        out.require(rep.status != Status::Fail, label(kind) + ": no episode breaks its identity or bound " +
                                                     counts.dump());
        out.require(counts.at("exact").get<std::size_t>() > 0,
                    label(kind) + ": at least one complete episode sums exactly");
        if (rep.status == Status::Incomplete)
            out.note(label(kind) + ": episodes cut by the horizon satisfy the <= bound and stay open");
    }
    return out;
}

Outcome cutoffs() {
    Outcome out;
    const auto rep = check_cutoffs(full(EngineKind::A));
    const auto& counts = rep.witnesses.back();
    out.require(rep.status != Status::Fail, "engine A: items 1, 2 and the tail bound hold " + counts.dump());
    out.require(counts.at("tail_checked").get<std::size_t>() > 0, "engine A: some cut-off fully certified");
    for (const auto& w : rep.witnesses)
        if (w.contains("reason")) out.note("open: " + w.dump());
    return out;
}

Outcome requirements() {
    Outcome out;
    for (auto kind : {EngineKind::A, EngineKind::B}) {
        const auto& tr = full(kind);
        for (Index e : {Index{0}, Index{1}}) {
            const auto n = check_requirement_N(tr, e);
            out.require(n.status == Status::Pass, label(kind) + ": " + status_line(n) + " " + n.witnesses.front().dump());
            const auto p = check_requirement_P(tr, e);
            out.require(p.status != Status::Fail, label(kind) + ": " + status_line(p) + " (never fail)");
            if (!p.witnesses.empty()) out.note("  " + p.witnesses.back().dump());
            if (p.status == Status::Incomplete)
                out.note("  " + p.witnesses.front().dump());
        }
    }
    return out;
}

Outcome pause_dynamics() {
    Outcome out;
    const auto rep = check_pause_dynamics(full(EngineKind::B));
    out.require(rep.status == Status::Pass, "engine B: alternation, no consecutive threats, w + 1 per threat " +
                                                rep.witnesses.back().dump());
    return out;
}

Outcome transforms() {
    Outcome out;
    const auto ratios = regaining_ratios(geometric_sequence(2, 12));
    out.require(!ratios.empty() && ratios.front().n == 1 && ratios.front().ratio == mpq_class(7, 12),
                "x_n = 1 - 4^-n: ratio at n=1 is exactly 7/12");

    std::mt19937_64 rng(8);
    std::size_t indices = 0;
    bool above = true;
    for (int i = 0; i < kSyntheticSequences; ++i) {
        ApproxSequence seq;
        if (i % 2 == 0) {
            seq = geometric_sequence(1 + i / 2, 24);
        } else {
            // Mixed rates: long stretches of tiny jumps between big ones keep
            // some indices regaining and others not.
            std::vector<std::int64_t> exps;
            for (int j = 0; j < 30; ++j) exps.push_back(j % 5 == 0 ? j + 1 : j + 3 + static_cast<int>(rng() % 5));
            seq = jump_sequence(exps, 35);
        }
        for (const auto& r : regaining_ratios(seq)) {
            ++indices;
            above = above && r.ratio > mpq_class(1, 4);
        }
    }
    out.require(above && indices > 0, std::to_string(kSyntheticSequences) + " synthetic sequences: ratio > 1/4 at all " +
                                          std::to_string(indices) + " regaining indices");

    const auto s = speed_to_regain(ModulusFn::affine(2, 0), Dyadic::pow2(-2));
    bool formulas = s.k == 2 && s.m == std::uint64_t{4};
    for (std::uint64_t n = 0; n < kModulusRange; ++n)
        formulas = formulas && s.g(n) == n / 2 && s.h(n) == (n / 2 > 2 ? n / 2 - 2 : 0);
    out.require(formulas, "f(n)=2n, rho=1/4: g=floor(n/2), k=2, h=max(0,floor(n/2)-2), m=4 for n < 1000");

    bool equal = true;
    for (int i = 0; i < kRatioFormInstances; ++i) {
        std::vector<std::int64_t> exps(3 + rng() % 30);
        for (auto& e : exps) e = static_cast<std::int64_t>(rng() % 25);
        const auto seq = jump_sequence(exps, static_cast<std::int64_t>(rng() % 30));
        const Dyadic rho(static_cast<long>(1 + 2 * (rng() % 32)), 6);
        const auto idx = speedup_indices(seq, rho);
        equal = equal && idx.ratio_form == idx.prime_form;
    }
    out.require(equal, std::to_string(kRatioFormInstances) + " random (sequence, rho): both ratio forms select the same indices");
    return out;
}

Outcome bijections() {
    Outcome out;
    bool numbering = true, pairing = true;
    for (unsigned long n = 0; n < kBijectionLimit; ++n) {
        numbering = numbering && nu(nu_inv(n)) == n;
        const auto [s, k] = unpair(n);
        const auto [m, j] = cantor_unpair(n);
        pairing = pairing && pair(s, k) == n && cantor_pair(m, j) == n;
    }
    out.require(numbering, "nu(nu_inv(n)) = n for all n < 2^16");
    out.require(pairing, "pair(unpair(c)) = c and P(unpair(c)) = c for all c < 2^16");
    out.require(cantor_pair(0, 0) == 0 && cantor_pair(2, 1) == 7 && cantor_pair(1, 2) == 8,
                "P(0,0)=0, P(2,1)=7, P(1,2)=8");
    return out;
}

Outcome mutation_kill() {
    Outcome out;
    for (const auto& m : mutation_catalogue()) {
        const auto& clean = full(m.engine);
        auto worst = [&](const Trace& tr) {
            return overall(run_checks(tr, {m.checker}));
        };
        const auto before = worst(clean);
        Trace bad = clean;
        const bool applied = m.apply(bad);
        const auto after = applied ? worst(bad) : Status::Pass;
        out.require(applied && before != Status::Fail && after == Status::Fail,
                    m.checker + ": clean=" + to_string(before) + ", mutated (" + m.description + ")=" + to_string(after));
    }
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"determinism and replay", determinism_and_replay},
        {"global bound", global_bound},
        {"monotonicity suite", monotonicity},
        {"jump-sum identities", jump_sums},
        {"cut-off certification", cutoffs},
        {"requirement certification", requirements},
        {"pause dynamics", pause_dynamics},
        {"speed transforms", transforms},
        {"bijection laws", bijections},
        {"mutation kill", mutation_kill},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, check] = criteria[i];
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.note(std::string("exception: ") + ex.what());
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << ": " << name << '\n';
        for (const auto& n : o.notes) std::cout << "      " << n << '\n';
        std::cout.flush();
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
