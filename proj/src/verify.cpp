#include "injurybench/verify.hpp"

#include "injurybench/analysis.hpp"
#include "injurybench/error.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace injurybench {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxWitnesses = 500;

PhiRegistry registry_of(const Trace& trace) {
    return PhiRegistry(PhiConfig::from_json(trace.header.phi_config));
}

std::string str(const Dyadic& d) { return d.to_string(); }

std::int64_t witness_small(const TraceReplayer::PathEntry& p) {
    if (!p.nu) throw TraceCorruption("threatened strategy with an unbounded witness");
    return static_cast<std::int64_t>(*p.nu) + p.params.w_offset;
}

// A threat episode starts at a threatened stage and is owed 2^{-w}; an
// expansion-counter episode starts at an expansionary stage with a non-zero
// counter and is owed 2^{-r}.
struct Episode {
    bool threat = false;
    Stage t1 = 0;
    BinStr sigma;
    std::int64_t exponent = 0;
    std::optional<Stage> origin;
    std::optional<Stage> t2;
    bool interrupted = false;
};

std::vector<Episode> collect_episodes(const Trace& trace, const ApplicationIndex& apps) {
    std::vector<Episode> out;
    std::unordered_map<BinStr, Stage> last_threat;
    TraceReplayer rp(trace);
    for (; !rp.done(); rp.advance()) {
        const auto& rec = rp.record();
        const auto kind = rec.action.kind;
        if (rec.threatened() || kind == ActionKind::ExpansionJump ||
            kind == ActionKind::ExpansionDelegate) {
            const auto& top = rp.path().back();
            Episode ep;
            ep.t1 = rec.t;
            ep.sigma = rec.settled;
            if (rec.threatened()) {
                ep.threat = true;
                ep.exponent = witness_small(top);
                ep.origin = rec.t;
            } else {
                ep.exponent = top.params.r;
                if (rec.action.decoded) {
                    auto it = last_threat.find(rec.action.decoded->label);
                    if (it != last_threat.end()) ep.origin = it->second;
                }
            }
            ep.t2 = apps.next_application(ep.sigma, ep.t1);
            ep.interrupted =
                initialized_between(trace, ep.sigma, ep.t1, ep.t2.value_or(trace.horizon()));
            out.push_back(std::move(ep));
        }
        if (rec.threatened()) last_threat[rec.settled] = rec.t;
    }
    return out;
}

Dyadic fiber_sum(const Trace& trace, const std::vector<Stage>& fiber, Stage from, Stage to) {
    Dyadic sum;
    for (Stage t : fiber)
        if (t >= from && t < to) sum += trace.stages[t].jump;
    return sum;
}

// σ <_L τ for every τ of {τ : σ <_L τ or σ ⊏ τ} exactly when the region
// contains that whole set.
bool region_contains_right_of(const InitRegion& r, const BinStr& sigma) {
    if (lex_less(r.anchor, sigma)) return true;
    return r.relation == Relation::LexGreaterOrExtends && is_prefix(r.anchor, sigma);
}

json episode_json(const Episode& ep) {
    json j{{"sigma", ep.sigma.display()}, {"t1", ep.t1}, {"exponent", ep.exponent}};
    if (ep.t2) j["t2"] = *ep.t2;
    if (ep.origin) j["origin"] = *ep.origin;
    return j;
}

}  // namespace

std::string to_string(Status status) {
    switch (status) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Incomplete: return "incomplete";
    }
    return "?";
}

void Report::fail(json witness) {
    status = Status::Fail;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
}

void Report::incomplete(json witness) {
    if (status == Status::Pass) status = Status::Incomplete;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
}

void Report::note(json witness) {
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
}

json Report::to_json() const {
    return {{"check", check},
            {"status", to_string(status)},
            {"witnesses", witnesses},
            {"assumptions", assumptions}};
}

Status overall(const std::vector<Report>& reports) {
    Status s = Status::Pass;
    for (const auto& r : reports) {
        if (r.status == Status::Fail) return Status::Fail;
        if (r.status == Status::Incomplete) s = Status::Incomplete;
    }
    return s;
}

Report check_monotonicity(const Trace& trace) {
    Report rep{"monotonicity"};
    const bool engine_a = trace.header.engine == EngineKind::A;
    struct Seen {
        Stage t = 0;
        std::int64_t r = 0;
        std::int64_t w_offset = 0;
        bool valid = false;
    };
    std::vector<Seen> seen;
    std::size_t observations = 0;

    TraceReplayer rp(trace);
    for (; !rp.done(); rp.advance()) {
        const auto& rec = rp.record();
        const Stage t = rec.t;
        const auto& path = rp.path();
        for (std::size_t i = 0; i < path.size(); ++i) {
            const auto& p = path[i];
            ++observations;
            if (p.params.r < 0 || static_cast<Stage>(p.params.r) > t)
                rep.fail({{"rule", "r<=t"}, {"sigma", rec.settled.prefix(i).display()}, {"t", t},
                          {"r", p.params.r}});
            if (seen.size() <= p.node) seen.resize(p.node + 1);
            auto& s = seen[p.node];
            if (s.valid) {
                if (p.params.r < s.r)
                    rep.fail({{"rule", "r monotone"}, {"sigma", rec.settled.prefix(i).display()},
                              {"t", t}, {"earlier_t", s.t}, {"r", p.params.r}, {"earlier_r", s.r}});
                if (p.params.w_offset < s.w_offset)
                    rep.fail({{"rule", "w monotone"}, {"sigma", rec.settled.prefix(i).display()},
                              {"t", t}, {"earlier_t", s.t}});
            }
            s = Seen{t, p.params.r, p.params.w_offset, true};
            // w(σ) ≤ w(σb) ⟺ w_off(σ) ≤ ν(σ) + 1 + b + w_off(σb)
            if (engine_a && i + 1 < path.size() && p.nu) {
                const auto& q = path[i + 1];
                const std::int64_t rhs = static_cast<std::int64_t>(*p.nu) + 1 +
                                         rec.settled.bit(i) + q.params.w_offset;
                if (p.params.w_offset > rhs)
                    rep.fail({{"rule", "w prefix-monotone"},
                              {"sigma", rec.settled.prefix(i).display()}, {"t", t}});
            }
        }
        for (const auto& w : rec.param_writes) {
            const auto now = rp.params(w.strategy).get(w.field, w.strategy);
            if (now != w.before)
                rep.fail({{"rule", "recorded before-value"}, {"sigma", w.strategy.display()},
                          {"t", t}, {"field", to_string(w.field)},
                          {"recorded", to_string(w.before)}, {"replayed", to_string(now)}});
            if (w.field == Field::R || w.field == Field::W) {
                const auto& b = std::get<BigNat>(w.before);
                const auto& a = std::get<BigNat>(w.after);
                if (a < b)
                    rep.fail({{"rule", to_string(w.field) + " monotone"},
                              {"sigma", w.strategy.display()}, {"t", t},
                              {"before", b.get_str()}, {"after", a.get_str()}});
                if (w.field == Field::R && a > t + 1)
                    rep.fail({{"rule", "r<=t"}, {"sigma", w.strategy.display()}, {"t", t + 1},
                              {"r", a.get_str()}});
            }
        }
    }
    rep.note({{"observations", observations}, {"stages", trace.horizon()}});
    rep.assumptions.push_back(
        "parameters are compared at every stage where the strategy is applied and at every write; "
        "initializations only raise w because the reset value nu+t+2 exceeds any earlier offset");
    return rep;
}

Report check_jump_sums(const Trace& trace) {
    Report rep{"jump_sums"};
    const ApplicationIndex apps(trace);
    const auto fibers = u_fibers(u_map(trace));
    std::size_t exact = 0, bounded = 0, truncated = 0;
    for (const auto& ep : collect_episodes(trace, apps)) {
        const Dyadic owed = Dyadic::pow2(-ep.exponent);
        if (!ep.origin) {
            rep.fail({{"rule", "expansion counter without an originating threat"},
                      {"episode", episode_json(ep)}});
            continue;
        }
        const auto it = fibers.find(*ep.origin);
        const Stage end = ep.t2.value_or(trace.horizon());
        const Dyadic sum =
            it == fibers.end() ? Dyadic() : fiber_sum(trace, it->second, ep.t1, end);
        auto w = episode_json(ep);
        w["sum"] = str(sum);
        w["owed"] = str(owed);
        w["kind"] = ep.threat ? "threat" : "expansion";
        if (sum > owed) {
            rep.fail(w);
        } else if (!ep.t2) {
            ++truncated;
            if (truncated <= 20) rep.incomplete(w);
            else if (rep.status == Status::Pass) rep.status = Status::Incomplete;
        } else if (ep.interrupted) {
            ++bounded;
        } else if (sum != owed) {
            rep.fail(w);
        } else {
            ++exact;
        }
    }
    rep.note({{"exact", exact}, {"bounded", bounded}, {"truncated", truncated}});
    rep.assumptions.push_back(
        "episodes whose next application lies beyond the horizon are reported incomplete");
    return rep;
}

Report check_convergence_bound(const Trace& trace) {
    Report rep{"convergence_bound"};
    if (trace.x.size() != trace.horizon() + 1) {
        rep.fail({{"rule", "x length"}, {"entries", trace.x.size()}});
        return rep;
    }
    if (!trace.x[0].is_zero()) rep.fail({{"rule", "x_0 = 0"}, {"x_0", str(trace.x[0])}});
    for (const auto& s : trace.stages) {
        const auto t = s.t;
        if (s.jump.sign() < 0) rep.fail({{"rule", "non-decreasing"}, {"t", t}});
        if (!s.jump.is_zero() && !s.jump.log2_exact())
            rep.fail({{"rule", "jump is a power of two"}, {"t", t}, {"jump", str(s.jump)}});
        if (trace.x[t] + s.jump != trace.x[t + 1])
            rep.fail({{"rule", "x matches jumps"}, {"t", t}});
        if (trace.x[t + 1] < trace.x[t]) rep.fail({{"rule", "non-decreasing"}, {"t", t}});
    }
    const Dyadic& last = trace.x.back();
    if (!last.less_than_pow2(2)) rep.fail({{"rule", "x_T < 4"}, {"x_T", str(last)}});
    rep.note({{"x_T", str(last)}, {"x_T_approx", last.to_rational().get_d()}});
    return rep;
}

Report check_requirement_N(const Trace& trace, Index e) {
    Report rep{"requirement_N_" + std::to_string(e)};
    const PhiRegistry reg = registry_of(trace);
    if (reg.total_increasing(e) != true)
        throw PreconditionError("slot " + std::to_string(e) +
                                " is not declared total and increasing");
    const Stage T = trace.horizon();
    const Dyadic& xT = trace.x.back();

    // x_T - x_{φ_e(n)} ≥ 2^{-n} for every n with φ_e(n) ≤ T.
    std::vector<bool> holds;
    for (std::uint64_t n = 0;; ++n) {
        const auto v = reg.step(e, n, T);
        if (!v) break;
        holds.push_back(!(xT - trace.x[*v]).less_than_pow2(-static_cast<std::int64_t>(n)));
    }

    if (trace.header.engine == EngineKind::A) {
        auto it = std::find(holds.begin(), holds.end(), true);
        if (it == holds.end()) {
            rep.incomplete({{"result", "not yet"}, {"searched_up_to", holds.size()}});
        } else {
            const auto m = static_cast<std::uint64_t>(it - holds.begin());
            rep.note({{"certified_m", m}, {"phi_m", *reg.step(e, m, T)}});
        }
    } else {
        std::optional<std::size_t> top;
        for (std::size_t n = holds.size(); n-- > 0;)
            if (holds[n]) { top = n; break; }
        if (!top) {
            rep.incomplete({{"result", "not yet"}, {"searched_up_to", holds.size()}});
        } else {
            std::size_t m = *top;
            while (m > 0 && holds[m - 1]) --m;
            rep.note({{"window", {m, *top}}});
        }
    }

    // Every complete threat episode of a length-e strategy already pays
    // 2^{-w} before its next application.
    const ApplicationIndex apps(trace);
    std::size_t episodes = 0;
    for (const auto& ep : collect_episodes(trace, apps)) {
        if (!ep.threat || ep.sigma.size() != static_cast<std::size_t>(e)) continue;
        if (!ep.t2 || ep.interrupted) continue;
        ++episodes;
        const auto ell = reg.ell(e, ep.t1);
        const auto idx = ell >= 0 ? reg.step(e, static_cast<std::uint64_t>(ell), ep.t1) : std::nullopt;
        if (!idx) {
            rep.fail({{"rule", "threat without a visible phi value"}, {"episode", episode_json(ep)}});
            continue;
        }
        const Dyadic gain = trace.x[*ep.t2] - trace.x[*idx];
        if (gain.less_than_pow2(-ep.exponent)) {
            auto w = episode_json(ep);
            w["rule"] = "x_t2 - x_phi(ell) >= 2^-w";
            w["gain"] = str(gain);
            rep.fail(w);
        }
    }
    rep.note({{"complete_threat_episodes", episodes}});
    rep.assumptions.push_back("x >= x_T, so a certificate found at the horizon is final");
    if (trace.header.engine == EngineKind::B)
        rep.assumptions.push_back("the universal tail beyond the reported window is not certified");
    return rep;
}

Report check_requirement_P(const Trace& trace, Index e, const TruePathOptions& options) {
    Report rep{"requirement_P_" + std::to_string(e)};
    const PhiRegistry reg = registry_of(trace);
    if (reg.total_increasing(e) != true)
        throw PreconditionError("slot " + std::to_string(e) +
                                " is not declared total and increasing");
    const bool engine_a = trace.header.engine == EngineKind::A;
    const Stage T = trace.horizon();
    const auto len = static_cast<std::size_t>(e);

    std::vector<BinStr> settled;
    settled.reserve(T);
    for (const auto& s : trace.stages) settled.push_back(s.settled);
    const Window window = options.window.value_or(Window{T / 2, T});
    const auto est = true_path_estimate(settled, window, options.threshold, len);
    if (est.stable_upto < len) {
        rep.incomplete({{"result", "true-path prefix unstable"}, {"estimate", est.path.display()},
                        {"stable_upto", est.stable_upto}});
        return rep;
    }
    const BinStr sigma = est.path;

    // S restricted to prefixes of σ.
    std::vector<bool> in_s(len + 1);
    for (std::size_t i = 0; i <= len; ++i)
        in_s[i] = reg.total_increasing(static_cast<Index>(i)) == true;

    // Start after σ's last initialization (and, for B, after the last threat
    // to a prefix outside S).
    Stage t0 = 0;
    if (auto li = last_initialization(trace, sigma)) t0 = *li + 1;
    if (!engine_a) {
        for (const auto& s : trace.stages)
            if (s.threatened() && is_prefix(s.settled, sigma) && !in_s[s.settled.size()])
                t0 = std::max<Stage>(t0, s.t + 1);
    }

    struct Expansionary {
        Stage t;
        std::int64_t r;
        std::int64_t ell;
        Dyadic witness_sum;
    };
    std::vector<Expansionary> stages;
    TraceReplayer rp(trace);
    for (; !rp.done(); rp.advance()) {
        const auto& rec = rp.record();
        if (rec.t < t0 || !is_prefix(sigma, rec.settled)) continue;
        const auto& path = rp.path();
        const auto& p = path[len].params;
        if (engine_a && p.flag != 1) continue;
        const auto ell = reg.ell(e, rec.t);
        if (ell < 0) continue;
        const auto idx = reg.step(e, static_cast<std::uint64_t>(ell), rec.t);
        if (!(trace.x[rec.t] - trace.x[*idx]).less_than_pow2(-p.r)) continue;
        Dyadic wsum;
        if (!engine_a)
            for (std::size_t i = 0; i <= len; ++i)
                if (in_s[i]) wsum += Dyadic::pow2(1 - witness_small(path[i]));
        stages.push_back(Expansionary{rec.t, p.r, ell, wsum});
    }

    const std::int64_t margin = engine_a ? 2 : 3;
    std::size_t certified = 0;
    for (std::int64_t n = 0;; ++n) {
        std::optional<std::size_t> tn;
        for (std::size_t j = 0; j < stages.size(); ++j) {
            if (stages[j].r < n + margin) continue;
            if (!engine_a && stages[j].witness_sum > Dyadic::pow2(-(n + 1))) continue;
            tn = j;
            break;
        }
        if (!tn) {
            rep.incomplete({{"n", n}, {"status", "incomplete"}, {"reason", "t(n) beyond horizon"}});
            break;
        }
        const auto v = stages[*tn].ell;
        std::size_t checked = 0;
        bool ok = true;
        for (std::size_t j = *tn; j + 1 < stages.size(); ++j) {
            const auto lo = std::max(stages[j].ell, v);
            for (std::int64_t i = lo; i < stages[j + 1].ell; ++i) {
                const auto a = reg.step(e, static_cast<std::uint64_t>(i), T);
                const auto b = reg.step(e, static_cast<std::uint64_t>(i + 1), T);
                ++checked;
                const Dyadic diff = trace.x[*b] - trace.x[*a];
                if (!diff.less_than_pow2(-n)) {
                    ok = false;
                    rep.fail({{"n", n}, {"i", i}, {"difference", str(diff)},
                              {"t1", stages[j].t}, {"t2", stages[j + 1].t}});
                }
            }
        }
        if (ok) ++certified;
        rep.note({{"n", n}, {"status", ok ? "pass" : "fail"}, {"t_n", stages[*tn].t}, {"v_n", v},
                  {"checked", checked}});
        if (n > 4096) break;
    }
    rep.note({{"sigma", sigma.display()}, {"t0", t0}, {"certified_n", certified}});
    rep.assumptions.push_back("t0 is the stage after the last initialization of sigma within the horizon");
    rep.assumptions.push_back(
        "each i is checked against the earliest bracketing pair of consecutive expansionary stages");
    if (rep.status == Status::Incomplete && certified > 0) rep.status = Status::Pass;
    return rep;
}

Report check_cutoffs(const Trace& trace) {
    Report rep{"cutoffs"};
    if (trace.header.engine != EngineKind::A) {
        rep.assumptions.push_back("cut-off stages are defined for engine A only");
        return rep;
    }
    const auto u = u_map(trace);
    const auto fibers = u_fibers(u);
    const Stage T = trace.horizon();

    struct Cut {
        BinStr sigma;
        Stage origin;
        Stage t_sigma;
    };
    std::vector<Cut> cuts;
    std::set<BinStr> seen;
    for (const auto& s : trace.stages) {
        if (!s.threatened() || !seen.insert(s.settled).second) continue;
        const auto origin = final_threat_stage(trace, s.settled);
        if (!origin) continue;
        auto it = fibers.find(*origin);
        if (it == fibers.end()) {
            rep.incomplete({{"sigma", s.settled.display()}, {"threat", *origin},
                            {"reason", "no jump executed within the horizon"}});
            continue;
        }
        cuts.push_back(Cut{s.settled, *origin, it->second.back()});
    }
    std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.t_sigma < b.t_sigma; });

    TraceReplayer rp(trace);
    std::size_t next = 0, complete = 0;
    for (; !rp.done() && next < cuts.size(); rp.advance()) {
        const Stage t = rp.stage();
        while (next < cuts.size() && cuts[next].t_sigma + 1 == t) {
            const auto& c = cuts[next++];
            json w{{"sigma", c.sigma.display()}, {"threat", c.origin}, {"t_sigma", c.t_sigma}};
            bool covered = false;
            for (const auto& r : trace.stages[c.t_sigma].init_regions)
                covered = covered || region_contains_right_of(r, c.sigma);
            if (!covered) {
                w["rule"] = "item 1: initialization at t_sigma";
                rep.fail(w);
                continue;
            }
            bool pending = false;
            for (const auto& [tau, counter] : rp.live_counters())
                pending = pending || counter.label == c.sigma;
            if (pending) {
                w["reason"] = "split jumps still pending";
                rep.incomplete(w);
                continue;
            }
            for (const auto& [tau, counter] : rp.live_counters()) {
                if (!lex_less(tau.child(0), c.sigma)) {
                    auto v = w;
                    v["rule"] = "item 2: counter right of sigma";
                    v["tau"] = tau.display();
                    rep.fail(v);
                }
            }
            if (initialized_between(trace, c.sigma, c.origin, T)) {
                w["reason"] = "sigma initialized after its threat; tail bound not applicable";
                rep.note(w);
                continue;
            }
            const Dyadic tail = trace.x.back() - trace.x[c.t_sigma + 1];
            if (tail > Dyadic::pow2(-static_cast<std::int64_t>(c.t_sigma + 1))) {
                w["rule"] = "item 5: tail bound";
                w["tail"] = str(tail);
                rep.fail(w);
            } else {
                ++complete;
            }
        }
    }
    // t_σ = T-1 has no replay stage T; check coverage and tail only.
    for (; next < cuts.size(); ++next) {
        const auto& c = cuts[next];
        rep.incomplete({{"sigma", c.sigma.display()}, {"t_sigma", c.t_sigma},
                        {"reason", "cut-off at the last stage"}});
    }
    rep.note({{"cutoffs", cuts.size()}, {"tail_checked", complete}});
    rep.assumptions.push_back(
        "the last initialization within the horizon stands in for the final one");
    return rep;
}

Report check_settlement_facts(const Trace& trace) {
    Report rep{"settlement_facts"};
    const ApplicationIndex apps(trace);
    const auto u = u_map(trace);
    const auto fibers = u_fibers(u);

    TraceReplayer rp(trace);
    for (; !rp.done(); rp.advance()) {
        const auto& rec = rp.record();
        if (rec.action.strategy != rec.settled)
            rep.fail({{"rule", "stage settles on the acting strategy"}, {"t", rec.t},
                      {"settled", rec.settled.display()},
                      {"strategy", rec.action.strategy.display()}});
        const auto& path = rp.path();
        for (std::size_t i = 0; i < rec.settled.size(); ++i)
            if (rec.settled.bit(i) == 0 && path[i].params.c)
                rep.fail({{"rule", "counters of gamma with gamma0 below the path are zero"},
                          {"t", rec.t}, {"gamma", rec.settled.prefix(i).display()}});
    }

    for (const auto& ep : collect_episodes(trace, apps)) {
        if (!ep.threat) continue;
        const auto it = fibers.find(ep.t1);
        if (it == fibers.end()) continue;
        // Every piece of the fiber is one unit of the counter that finally
        // carried it; all pieces together never exceed the owed 2^{-w}.
        Dyadic sum;
        for (Stage t : it->second) sum += trace.stages[t].jump;
        if (sum > Dyadic::pow2(-ep.exponent)) {
            auto w = episode_json(ep);
            w["rule"] = "u-fiber bounded by the owed amount";
            w["fiber_size"] = it->second.size();
            w["sum"] = str(sum);
            rep.fail(w);
        }
    }
    rep.note({{"jumps", u.size()}, {"fibers", fibers.size()}});
    return rep;
}

Report check_pause_dynamics(const Trace& trace) {
    Report rep{"pause_dynamics"};
    if (trace.header.engine != EngineKind::B) {
        rep.assumptions.push_back("pause flags exist in engine B only");
        return rep;
    }
    struct Last {
        int p = 0;
        bool threatened = false;
        Stage t = 0;
        bool valid = false;
    };
    std::vector<Last> last;
    std::size_t threats = 0;
    TraceReplayer rp(trace);
    for (; !rp.done(); rp.advance()) {
        const auto& rec = rp.record();
        const auto& path = rp.path();
        for (std::size_t i = 0; i < path.size(); ++i) {
            const auto& p = path[i];
            const bool threatened = i + 1 == path.size() && rec.threatened();
            if (last.size() <= p.node) last.resize(p.node + 1);
            auto& l = last[p.node];
            if (l.valid) {
                if (l.p != 0 && p.params.flag != 0)
                    rep.fail({{"rule", "p(t1)=0 or p(t2)=0"}, {"sigma", rec.settled.prefix(i).display()},
                              {"t1", l.t}, {"t2", rec.t}});
                if (l.threatened && threatened)
                    rep.fail({{"rule", "no consecutive threats"},
                              {"sigma", rec.settled.prefix(i).display()}, {"t1", l.t}, {"t2", rec.t}});
            }
            l = Last{p.params.flag, threatened, rec.t, true};
        }
        if (rec.threatened()) {
            ++threats;
            const BigNat w = BigNat(static_cast<unsigned long>(witness_small(path.back())));
            bool bumped = false;
            for (const auto& wr : rec.param_writes)
                if (wr.strategy == rec.settled && wr.field == Field::W)
                    bumped = std::get<BigNat>(wr.before) == w && std::get<BigNat>(wr.after) == w + 1;
            if (!bumped)
                rep.fail({{"rule", "threat raises w by exactly 1"}, {"t", rec.t},
                          {"sigma", rec.settled.display()}});
        }
    }
    rep.note({{"threats", threats}});
    return rep;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{
        "monotonicity", "jump_sums",        "convergence_bound", "requirement_n",
        "requirement_p", "cutoffs",         "settlement_facts",  "pause_dynamics"};
    return names;
}

std::vector<Report> run_checks(const Trace& trace, const std::vector<std::string>& names,
                               const VerifyOptions& options) {
    std::vector<std::string> selected;
    for (const auto& n : names) {
        if (n == "all") {
            selected.insert(selected.end(), check_names().begin(), check_names().end());
        } else if (std::find(check_names().begin(), check_names().end(), n) != check_names().end()) {
            selected.push_back(n);
        } else {
            throw PreconditionError("unknown check: " + n);
        }
    }

    std::vector<Index> indices;
    if (options.indices) {
        indices = *options.indices;
    } else {
        const PhiRegistry reg = registry_of(trace);
        for (const auto& slot : reg.config().slots)
            if (reg.total_increasing(slot.index) == true) indices.push_back(slot.index);
        std::sort(indices.begin(), indices.end());
    }

    std::vector<Report> out;
    for (const auto& n : selected) {
        if (n == "monotonicity") out.push_back(check_monotonicity(trace));
        else if (n == "jump_sums") out.push_back(check_jump_sums(trace));
        else if (n == "convergence_bound") out.push_back(check_convergence_bound(trace));
        else if (n == "cutoffs") out.push_back(check_cutoffs(trace));
        else if (n == "settlement_facts") out.push_back(check_settlement_facts(trace));
        else if (n == "pause_dynamics") out.push_back(check_pause_dynamics(trace));
        else if (n == "requirement_n")
            for (auto e : indices) out.push_back(check_requirement_N(trace, e));
        else if (n == "requirement_p")
            for (auto e : indices) out.push_back(check_requirement_P(trace, e, options.true_path));
    }
    return out;
}

}  // namespace injurybench
