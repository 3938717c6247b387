#include "injurybench/engine.hpp"

#include "injurybench/error.hpp"

namespace injurybench {

namespace {

const RuleTable kRulesA{
    .expansion_needs_flag = true,
    .clear_flag_unless_threatened = false,
    .threat_bumps_witness = false,
    .threat_relation = Relation::LexGreaterOrExtends,
    .expansion_anchor_is_label = true,
};

const RuleTable kRulesB{
    .expansion_needs_flag = false,
    .clear_flag_unless_threatened = true,
    .threat_bumps_witness = true,
    .threat_relation = Relation::LexGreater,
    .expansion_anchor_is_label = false,
};

// {τ : σ <_L τ} is empty when σ has no 0 bit.
bool region_is_empty(const InitRegion& r) {
    return r.relation == Relation::LexGreater &&
           r.anchor.bits().find('0') == std::string::npos;
}

ParamValue nat(std::int64_t v) { return BigNat(static_cast<long>(v)); }

}  // namespace

const RuleTable& rules_for(EngineKind kind) { return kind == EngineKind::A ? kRulesA : kRulesB; }

Engine::Engine(EngineKind kind, PhiRegistry registry, EngineOptions options)
    : kind_(kind),
      rules_(rules_for(kind)),
      registry_(std::move(registry)),
      options_(options),
      store_(kind) {
    x_.emplace_back(0);
}

StrategyParams Engine::params(const BinStr& sigma) { return store_.current(store_.locate(sigma)); }

BigNat Engine::witness(const BinStr& sigma) {
    return witness_value(sigma, params(sigma).w_offset);
}

bool Engine::is_threatened(const BinStr& sigma) {
    const auto at = store_.locate(sigma);
    return threatened_at(at, store_.current(at));
}

bool Engine::is_expansionary(const BinStr& sigma) {
    const auto at = store_.locate(sigma);
    return expansionary_at(at, store_.current(at));
}

const Dyadic& Engine::gap(std::size_t e) {
    if (gaps_stage_ != t_ || gaps_.size() <= e) {
        if (gaps_stage_ != t_) gaps_.clear();
        gaps_stage_ = t_;
        if (gaps_.size() <= e) gaps_.resize(e + 1);
    }
    auto& slot = gaps_[e];
    if (!slot) {
        const auto ell = registry_.ell(static_cast<Index>(e), t_);
        if (ell < 0) throw TraceCorruption("gap requested with ell < 0");
        const auto idx = registry_.step(static_cast<Index>(e), static_cast<std::uint64_t>(ell), t_);
        if (!idx || *idx > t_)
            throw TraceCorruption("phi_" + std::to_string(e) + "(" + std::to_string(ell) +
                                  ") is not visible at stage " + std::to_string(t_));
        slot = x_[t_] - x_[*idx];
    }
    return *slot;
}

bool Engine::threatened_at(const Cursor& at, const StrategyParams& p) {
    if (p.flag != 0) return false;
    const auto ell = registry_.ell(static_cast<Index>(at.depth), t_);
    // A witness beyond 2^61 can never be reached by ℓ ≤ t.
    if (ell < 0 || !at.nu) return false;
    const std::uint64_t w = *at.nu + static_cast<std::uint64_t>(p.w_offset);
    if (static_cast<std::uint64_t>(ell) < w) return false;
    return gap(at.depth).less_than_pow2(-static_cast<std::int64_t>(w));
}

bool Engine::expansionary_at(const Cursor& at, const StrategyParams& p) {
    if (rules_.expansion_needs_flag && p.flag != 1) return false;
    if (registry_.ell(static_cast<Index>(at.depth), t_) < 0) return false;
    return gap(at.depth).less_than_pow2(-p.r);
}

StageRecord Engine::run_stage() {
    const Stage t = t_;
    StageRecord rec;
    rec.t = t;

    std::vector<Cursor> path{store_.root()};
    std::string bits;
    const Field flag_field = kind_ == EngineKind::A ? Field::S : Field::P;

    auto write = [&](const BinStr& who, Field f, ParamValue before, ParamValue after) {
        rec.param_writes.push_back(ParamWrite{who, f, std::move(before), std::move(after)});
    };
    auto region = [&](BinStr anchor, Relation rel) {
        InitRegion r{std::move(anchor), rel};
        if (!region_is_empty(r)) rec.init_regions.push_back(std::move(r));
    };
    // Longest γ with γ0 ⊑ σ, optionally also requiring r(γ)[t+1] ≥ bound.
    auto find_gamma = [&](std::optional<std::uint64_t> bound) -> std::optional<std::size_t> {
        for (std::size_t i = bits.size(); i-- > 0;) {
            if (bits[i] != '0') continue;
            if (!bound) return i;
            const auto r = store_.r_next(path[i]);
            if (r >= 0 && static_cast<std::uint64_t>(r) >= *bound) return i;
        }
        return std::nullopt;
    };

    for (;;) {
        const Cursor at = path.back();
        const std::size_t e = bits.size();
        const StrategyParams p = store_.current(at);
        if (options_.record_reads) rec.reads.push_back(ParamRead{BinStr(bits), p});

        if (e == t) {
            rec.action = StageAction{ActionKind::TopOut, BinStr(bits), {}, {}, {}};
            region(BinStr(bits), Relation::LexGreater);
            break;
        }

        if (threatened_at(at, p)) {
            const BinStr sigma(bits);
            const std::uint64_t w = *at.nu + static_cast<std::uint64_t>(p.w_offset);
            rec.action.strategy = sigma;
            if (const auto g = find_gamma(w)) {
                const auto rg = store_.r_next(path[*g]);
                Counter c{sigma, BigNat(1)};
                c.count <<= static_cast<mp_bitcnt_t>(static_cast<std::uint64_t>(rg) - w);
                const BinStr gamma = sigma.prefix(*g);
                write(gamma, Field::C, store_.next(path[*g]).c, CounterSlot(c));
                store_.write_c(path[*g], c);
                rec.action.kind = ActionKind::ThreatSchedule;
                rec.action.target = gamma;
                rec.action.scheduled = c;
            } else {
                rec.jump = Dyadic::pow2(-static_cast<std::int64_t>(w));
                rec.action.kind = ActionKind::ThreatJump;
            }
            write(sigma, flag_field, nat(p.flag), nat(1));
            store_.write_flag(at, 1);
            if (rules_.threat_bumps_witness) {
                write(sigma, Field::W, BigNat(static_cast<unsigned long>(w)),
                      BigNat(static_cast<unsigned long>(w + 1)));
                store_.write_w_offset(at, p.w_offset + 1);
            }
            region(sigma, rules_.threat_relation);
            break;
        }
        if (rules_.clear_flag_unless_threatened && p.flag != 0) {
            write(BinStr(bits), flag_field, nat(p.flag), nat(0));
            store_.write_flag(at, 0);
        }

        if (!expansionary_at(at, p)) {
            bits.push_back('1');
            path.push_back(store_.descend(at, 1));
            continue;
        }
        if (!p.c) {
            write(BinStr(bits), Field::R, nat(p.r), nat(p.r + 1));
            store_.write_r(at, p.r + 1);
            bits.push_back('0');
            path.push_back(store_.descend(at, 0));
            continue;
        }

        const BinStr sigma(bits);
        const Counter& decoded = *p.c;
        rec.action.strategy = sigma;
        rec.action.decoded = decoded;
        if (const auto g = find_gamma(std::nullopt)) {
            const auto rg = store_.r_next(path[*g]);
            if (rg < p.r)
                throw TraceCorruption("r(gamma)[t+1] < r(sigma)[t] at stage " + std::to_string(t));
            Counter c{decoded.label, BigNat(1)};
            c.count <<= static_cast<mp_bitcnt_t>(rg - p.r);
            const BinStr gamma = sigma.prefix(*g);
            write(gamma, Field::C, store_.next(path[*g]).c, CounterSlot(c));
            store_.write_c(path[*g], c);
            rec.action.kind = ActionKind::ExpansionDelegate;
            rec.action.target = gamma;
            rec.action.scheduled = c;
        } else {
            rec.jump = Dyadic::pow2(-p.r);
            rec.action.kind = ActionKind::ExpansionJump;
        }
        CounterSlot rest;
        if (decoded.count > 1) rest = Counter{decoded.label, decoded.count - 1};
        write(sigma, Field::C, p.c, rest);
        store_.write_c(at, rest);
        if (rules_.expansion_anchor_is_label)
            region(decoded.label, Relation::LexGreaterOrExtends);
        else
            region(sigma.child(0), Relation::LexGreater);
        break;
    }

    rec.settled = BinStr(bits);
    rec.x_next = x_[t] + rec.jump;
    store_.commit(t, rec.init_regions);
    for (const auto& r : rec.init_regions) init_log_.emplace_back(t, r);
    settlements_.push_back(rec.settled);
    x_.push_back(rec.x_next);
    ++t_;
    return rec;
}

TraceHeader Engine::header() const {
    TraceHeader h;
    h.engine = kind_;
    h.stages = t_;
    h.phi_config_digest = registry_.config().digest();
    h.phi_config = registry_.config().to_json();
    return h;
}

Trace run(EngineKind kind, const PhiRegistry& reg, Stage stages, const StageHook& hook,
          EngineOptions options) {
    if (stages < 1) throw PreconditionError("a run needs at least one stage");
    Engine engine(kind, reg, options);
    Trace trace;
    trace.stages.reserve(stages);
    for (Stage t = 0; t < stages; ++t) {
        trace.stages.push_back(engine.run_stage());
        if (hook) hook(trace.stages.back());
    }
    trace.header = engine.header();
    trace.x = engine.x();
    return trace;
}

}  // namespace injurybench
