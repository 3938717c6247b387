#pragma once

#include "injurybench/params.hpp"
#include "injurybench/phi.hpp"
#include "injurybench/trace.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace injurybench {

struct EngineOptions {
    /// Log every applied strategy's parameter values into StageRecord::reads.
    bool record_reads = false;
};

/// Called once per finished stage. Must not touch the engine.
using StageHook = std::function<void(const StageRecord&)>;

/// Where the two constructions differ. Everything else is shared.
struct RuleTable {
    bool expansion_needs_flag;           // A: s(σ) = 1 is a conjunct of "expansionary"
    bool clear_flag_unless_threatened;   // B: p(σ) := 0 when σ is not threatened
    bool threat_bumps_witness;           // B: w(σ) := w(σ) + 1 on a threat
    Relation threat_relation;            // region anchored at σ after a threat
    bool expansion_anchor_is_label;      // A: anchor α and include extensions; B: anchor σ0
};

const RuleTable& rules_for(EngineKind kind);

class Engine {
public:
    Engine(EngineKind kind, PhiRegistry registry, EngineOptions options = {});

    EngineKind kind() const { return kind_; }
    Stage stage() const { return t_; }
    const std::vector<Dyadic>& x() const { return x_; }
    const std::vector<BinStr>& settlements() const { return settlements_; }
    const std::vector<std::pair<Stage, InitRegion>>& init_log() const { return init_log_; }
    const PhiRegistry& registry() const { return registry_; }

    /// Parameter values of σ at the current stage.
    StrategyParams params(const BinStr& sigma);
    BigNat witness(const BinStr& sigma);

    bool is_threatened(const BinStr& sigma);
    bool is_expansionary(const BinStr& sigma);

    StageRecord run_stage();
    TraceHeader header() const;

    std::size_t materialized_nodes() const { return store_.node_count(); }

private:
    using Cursor = ParamStore::Cursor;

    const Dyadic& gap(std::size_t e);
    bool threatened_at(const Cursor& at, const StrategyParams& p);
    bool expansionary_at(const Cursor& at, const StrategyParams& p);

    EngineKind kind_;
    const RuleTable& rules_;
    PhiRegistry registry_;
    EngineOptions options_;
    ParamStore store_;
    Stage t_ = 0;
    std::vector<Dyadic> x_;
    std::vector<BinStr> settlements_;
    std::vector<std::pair<Stage, InitRegion>> init_log_;

    // Per-stage cache of x_t - x_{φ_e(ℓ(e)[t])}, keyed by e.
    std::vector<std::optional<Dyadic>> gaps_;
    Stage gaps_stage_ = 0;
};

Trace run(EngineKind kind, const PhiRegistry& reg, Stage stages, const StageHook& hook = {},
          EngineOptions options = {});

inline Trace run_a(const PhiRegistry& reg, Stage stages, const StageHook& hook = {},
                   EngineOptions options = {}) {
    return run(EngineKind::A, reg, stages, hook, options);
}

inline Trace run_b(const PhiRegistry& reg, Stage stages, const StageHook& hook = {},
                   EngineOptions options = {}) {
    return run(EngineKind::B, reg, stages, hook, options);
}

}  // namespace injurybench
