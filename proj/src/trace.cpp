#include "injurybench/trace.hpp"

#include "injurybench/digest.hpp"
#include "injurybench/error.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace injurybench {

using nlohmann::json;

namespace {

constexpr int kTraceVersion = 1;

const char* const kActionNames[] = {"TopOut", "ThreatJump", "ThreatSchedule", "ExpansionJump",
                                    "ExpansionDelegate"};

json dyadic_json(const Dyadic& d) {
    return {{"m", d.mantissa().get_str()}, {"k", d.exponent()}};
}

Dyadic dyadic_from(const json& j) {
    BigNat m;
    if (m.set_str(j.at("m").get<std::string>(), 10) != 0) throw PreconditionError("bad mantissa");
    return Dyadic(m, j.at("k").get<std::uint64_t>());
}

BigNat bignat_from(const json& j) {
    BigNat n;
    if (!j.is_string() || n.set_str(j.get<std::string>(), 10) != 0)
        throw PreconditionError("expected a decimal string");
    return n;
}

json counter_json(const CounterSlot& c) {
    if (!c) return nullptr;
    return {{"label", c->label.bits()}, {"count", c->count.get_str()}};
}

CounterSlot counter_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    Counter c{BinStr(j.at("label").get<std::string>()), bignat_from(j.at("count"))};
    if (c.count < 1) throw PreconditionError("counter with zero count");
    return c;
}

json value_json(const ParamValue& v) {
    if (const auto* n = std::get_if<BigNat>(&v)) return n->get_str();
    return counter_json(std::get<CounterSlot>(v));
}

ParamValue value_from(Field field, const json& j) {
    if (field == Field::C) return counter_from(j);
    return bignat_from(j);
}

json header_json(const TraceHeader& h, bool with_timestamp) {
    json j{{"engine", to_string(h.engine)},
           {"T", h.stages},
           {"phi_config_digest", h.phi_config_digest},
           {"version", h.version},
           {"phi_config", h.phi_config}};
    if (with_timestamp && h.timestamp) j["timestamp"] = *h.timestamp;
    return j;
}

TraceHeader header_from(const json& j) {
    TraceHeader h;
    h.engine = parse_engine_kind(j.at("engine").get<std::string>());
    h.stages = j.at("T").get<Stage>();
    h.phi_config_digest = j.at("phi_config_digest").get<std::string>();
    h.version = j.at("version").get<int>();
    if (h.version != kTraceVersion)
        throw PreconditionError("unsupported trace version " + std::to_string(h.version));
    h.phi_config = j.value("phi_config", json::object());
    if (j.contains("timestamp")) h.timestamp = j.at("timestamp").get<std::string>();
    return h;
}

}  // namespace

std::string to_string(ActionKind kind) { return kActionNames[static_cast<int>(kind)]; }

ActionKind parse_action_kind(const std::string& text) {
    for (int i = 0; i < 5; ++i)
        if (text == kActionNames[i]) return static_cast<ActionKind>(i);
    throw PreconditionError("unknown action: " + text);
}

std::vector<BinStr> StageRecord::applied() const {
    std::vector<BinStr> out;
    out.reserve(settled.size() + 1);
    for (std::size_t n = 0; n <= settled.size(); ++n) out.push_back(settled.prefix(n));
    return out;
}

json to_json(const StageRecord& r) {
    json action{{"kind", to_string(r.action.kind)}, {"sigma", r.action.strategy.bits()}};
    if (r.action.target) action["gamma"] = r.action.target->bits();
    if (r.action.scheduled) action["scheduled"] = counter_json(r.action.scheduled);
    if (r.action.decoded) action["decoded"] = counter_json(r.action.decoded);

    json regions = json::array();
    for (const auto& reg : r.init_regions)
        regions.push_back({{"anchor", reg.anchor.bits()}, {"relation", to_string(reg.relation)}});
    json writes = json::array();
    for (const auto& w : r.param_writes)
        writes.push_back({{"sigma", w.strategy.bits()},
                          {"field", to_string(w.field)},
                          {"before", value_json(w.before)},
                          {"after", value_json(w.after)}});
    return {{"t", r.t},
            {"settled", r.settled.bits()},
            {"action", action},
            {"jump", dyadic_json(r.jump)},
            {"x", dyadic_json(r.x_next)},
            {"init", regions},
            {"writes", writes}};
}

StageRecord stage_from_json(const json& j) {
    StageRecord r;
    r.t = j.at("t").get<Stage>();
    r.settled = BinStr(j.at("settled").get<std::string>());
    const auto& a = j.at("action");
    r.action.kind = parse_action_kind(a.at("kind").get<std::string>());
    r.action.strategy = BinStr(a.at("sigma").get<std::string>());
    if (a.contains("gamma")) r.action.target = BinStr(a.at("gamma").get<std::string>());
    if (a.contains("scheduled")) r.action.scheduled = counter_from(a.at("scheduled"));
    if (a.contains("decoded")) r.action.decoded = counter_from(a.at("decoded"));
    r.jump = dyadic_from(j.at("jump"));
    r.x_next = dyadic_from(j.at("x"));
    for (const auto& reg : j.at("init"))
        r.init_regions.push_back(InitRegion{BinStr(reg.at("anchor").get<std::string>()),
                                            parse_relation(reg.at("relation").get<std::string>())});
    for (const auto& w : j.at("writes")) {
        const Field f = parse_field(w.at("field").get<std::string>());
        r.param_writes.push_back(ParamWrite{BinStr(w.at("sigma").get<std::string>()), f,
                                            value_from(f, w.at("before")),
                                            value_from(f, w.at("after"))});
    }
    return r;
}

std::string Trace::digest() const {
    Fnv1a h;
    h.update(header_json(header, false).dump());
    h.update("\n");
    for (const auto& s : stages) {
        h.update(to_json(s).dump());
        h.update("\n");
    }
    return h.hex();
}

void check_consistency(const Trace& trace) {
    if (trace.x.size() != trace.stages.size() + 1)
        throw TraceCorruption("x has " + std::to_string(trace.x.size()) + " entries for " +
                              std::to_string(trace.stages.size()) + " stages");
    if (!trace.x.empty() && !trace.x[0].is_zero()) throw TraceCorruption("x_0 is not 0");
    for (std::size_t t = 0; t < trace.stages.size(); ++t) {
        const auto& s = trace.stages[t];
        if (s.t != t) throw TraceCorruption("stage " + std::to_string(t) + " is out of order");
        if (trace.x[t] + s.jump != s.x_next || s.x_next != trace.x[t + 1])
            throw TraceCorruption("x_" + std::to_string(t + 1) + " disagrees with the jumps");
    }
}

void write_trace(std::ostream& out, const Trace& trace) {
    out << header_json(trace.header, true).dump() << '\n';
    for (const auto& s : trace.stages) out << to_json(s).dump() << '\n';
}

Trace read_trace(std::istream& in) {
    Trace trace;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    trace.x.emplace_back(0);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            if (!have_header) {
                trace.header = header_from(j);
                have_header = true;
                continue;
            }
            auto rec = stage_from_json(j);
            const Stage expect = trace.stages.size();
            if (rec.t != expect)
                throw ParseError(lineno, "expected stage " + std::to_string(expect));
            if (trace.x.back() + rec.jump != rec.x_next)
                throw ParseError(lineno, "x does not match the accumulated jumps");
            trace.x.push_back(rec.x_next);
            trace.stages.push_back(std::move(rec));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(lineno, e.what());
        }
    }
    if (!have_header) throw ParseError(lineno, "missing trace header");
    if (trace.stages.size() != trace.header.stages)
        throw ParseError(lineno, "header announces " + std::to_string(trace.header.stages) +
                                     " stages, found " + std::to_string(trace.stages.size()));
    return trace;
}

std::string serialize(const Trace& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

Trace deserialize(const std::string& text) {
    std::istringstream in(text);
    return read_trace(in);
}

void save_trace(const std::string& path, const Trace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_trace(out, trace);
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_trace(in);
}

void write_sequence_csv(std::ostream& out, std::span<const Dyadic> xs) {
    out << "t,mantissa,exponent\n";
    for (std::size_t t = 0; t < xs.size(); ++t)
        out << t << ',' << xs[t].mantissa().get_str() << ',' << xs[t].exponent() << '\n';
}

std::vector<Dyadic> read_sequence_csv(std::istream& in) {
    std::vector<Dyadic> xs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (lineno == 1 && line.rfind("t,", 0) == 0)) continue;
        std::istringstream row(line);
        std::string t, m, k;
        if (!std::getline(row, t, ',') || !std::getline(row, m, ',') || !std::getline(row, k))
            throw ParseError(lineno, "expected t,mantissa,exponent");
        if (t != std::to_string(xs.size()))
            throw ParseError(lineno, "expected t=" + std::to_string(xs.size()));
        BigNat mant;
        if (mant.set_str(m, 10) != 0) throw ParseError(lineno, "bad mantissa");
        try {
            xs.emplace_back(mant, std::stoull(k));
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad exponent");
        }
    }
    return xs;
}

ParamValue replay_params(const Trace& trace, const BinStr& sigma, Stage t, Field field) {
    if (t > trace.horizon()) throw PreconditionError("stage beyond the trace horizon");
    CounterSlot c;
    BigNat r = 0, flag = 0, w = nu(sigma);
    for (Stage s = 0; s < t; ++s) {
        const auto& rec = trace.stages[s];
        for (const auto& wr : rec.param_writes) {
            if (wr.strategy != sigma) continue;
            switch (wr.field) {
                case Field::C: c = std::get<CounterSlot>(wr.after); break;
                case Field::R: r = std::get<BigNat>(wr.after); break;
                case Field::S:
                case Field::P: flag = std::get<BigNat>(wr.after); break;
                case Field::W: w = std::get<BigNat>(wr.after); break;
            }
        }
        for (const auto& reg : rec.init_regions) {
            if (!reg.covers(sigma)) continue;
            c.reset();
            if (trace.header.engine == EngineKind::A) flag = 0;
            w = nu(sigma) + static_cast<unsigned long>(s + 2);
        }
    }
    switch (field) {
        case Field::C: return c;
        case Field::R: return r;
        case Field::S:
        case Field::P: return flag;
        case Field::W: return w;
    }
    return r;
}

TraceReplayer::TraceReplayer(const Trace& trace)
    : trace_(&trace), store_(trace.header.engine) {}

const std::vector<TraceReplayer::PathEntry>& TraceReplayer::path() {
    if (!path_ready_) {
        path_.clear();
        const auto& settled = record().settled;
        auto at = store_.root();
        path_.push_back(PathEntry{store_.current(at), at.node, at.nu});
        for (std::size_t i = 0; i < settled.size(); ++i) {
            at = store_.descend(at, settled.bit(i));
            path_.push_back(PathEntry{store_.current(at), at.node, at.nu});
        }
        path_ready_ = true;
    }
    return path_;
}

StrategyParams TraceReplayer::params(const BinStr& sigma) {
    return store_.current(store_.locate(sigma));
}

void TraceReplayer::advance() {
    const auto& rec = record();
    for (const auto& w : rec.param_writes) {
        const auto at = store_.locate(w.strategy);
        switch (w.field) {
            case Field::C: {
                const auto& c = std::get<CounterSlot>(w.after);
                store_.write_c(at, c);
                if (c)
                    counters_[w.strategy] = *c;
                else
                    counters_.erase(w.strategy);
                break;
            }
            case Field::R: store_.write_r(at, std::get<BigNat>(w.after).get_si()); break;
            case Field::S:
            case Field::P: store_.write_flag(at, static_cast<int>(std::get<BigNat>(w.after).get_si())); break;
            case Field::W: {
                const BigNat off = std::get<BigNat>(w.after) - nu(w.strategy);
                if (!off.fits_slong_p()) throw TraceCorruption("witness write out of range");
                store_.write_w_offset(at, off.get_si());
                break;
            }
        }
    }
    store_.commit(t_, rec.init_regions);
    for (const auto& reg : rec.init_regions)
        std::erase_if(counters_, [&](const auto& kv) { return reg.covers(kv.first); });
    ++t_;
    path_ready_ = false;
}

}  // namespace injurybench
