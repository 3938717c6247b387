#include "injurybench/params.hpp"

#include "injurybench/error.hpp"

#include <stdexcept>

namespace injurybench {

namespace {

// Event ordering inside the store: writes of stage t carry 2t+1, and
// initializations of stage t carry 2t+2, so they apply after the writes.
std::uint64_t write_stamp(Stage t) { return 2 * t + 1; }
std::uint64_t init_stamp(Stage t) { return 2 * t + 2; }
Stage stamp_stage(std::uint64_t stamp) { return (stamp - 1) / 2; }

std::optional<std::uint64_t> nu_child(const std::optional<std::uint64_t>& nu, int bit) {
    constexpr std::uint64_t kLimit = (std::uint64_t{1} << 61);
    if (!nu || *nu >= kLimit) return std::nullopt;
    return 2 * *nu + 1 + static_cast<std::uint64_t>(bit);
}

}  // namespace

std::string to_string(EngineKind kind) { return kind == EngineKind::A ? "A" : "B"; }

EngineKind parse_engine_kind(const std::string& text) {
    if (text == "A" || text == "a") return EngineKind::A;
    if (text == "B" || text == "b") return EngineKind::B;
    throw PreconditionError("unknown engine: " + text);
}

std::string to_string(Field field) {
    switch (field) {
        case Field::C: return "c";
        case Field::R: return "r";
        case Field::S: return "s";
        case Field::P: return "p";
        case Field::W: return "w";
    }
    return "?";
}

Field parse_field(const std::string& text) {
    if (text == "c") return Field::C;
    if (text == "r") return Field::R;
    if (text == "s") return Field::S;
    if (text == "p") return Field::P;
    if (text == "w") return Field::W;
    throw PreconditionError("unknown parameter field: " + text);
}

std::string to_string(const ParamValue& value) {
    if (const auto* n = std::get_if<BigNat>(&value)) return n->get_str();
    const auto& c = std::get<CounterSlot>(value);
    if (!c) return "0";
    return "<" + c->label.display() + "," + c->count.get_str() + ">";
}

BigNat witness_value(const BinStr& sigma, std::int64_t offset) {
    return nu(sigma) + offset;
}

ParamValue StrategyParams::get(Field field, const BinStr& sigma) const {
    switch (field) {
        case Field::C: return c;
        case Field::R: return BigNat(static_cast<long>(r));
        case Field::S:
        case Field::P: return BigNat(flag);
        case Field::W: return witness_value(sigma, w_offset);
    }
    throw std::logic_error("bad field");
}

std::string to_string(Relation relation) {
    return relation == Relation::LexGreater ? "lex_greater" : "lex_greater_or_extends";
}

Relation parse_relation(const std::string& text) {
    if (text == "lex_greater") return Relation::LexGreater;
    if (text == "lex_greater_or_extends") return Relation::LexGreaterOrExtends;
    throw PreconditionError("unknown relation: " + text);
}

bool InitRegion::covers(const BinStr& tau) const {
    if (lex_less(anchor, tau)) return true;
    return relation == Relation::LexGreaterOrExtends && is_proper_prefix(anchor, tau);
}

ParamStore::ParamStore(EngineKind kind) : kind_(kind) { nodes_.emplace_back(); }

ParamStore::Cursor ParamStore::root() const {
    return Cursor{0, nodes_[0].subtree_stamp, std::uint64_t{0}, 0};
}

ParamStore::Cursor ParamStore::descend(const Cursor& from, int bit) {
    NodeId id = nodes_[from.node].children[bit];
    if (id == 0) {
        id = static_cast<NodeId>(nodes_.size());
        nodes_.emplace_back();
        nodes_[from.node].children[bit] = id;
    }
    Cursor out;
    out.node = id;
    out.inherited = std::max(from.inherited, nodes_[id].subtree_stamp);
    out.nu = nu_child(from.nu, bit);
    out.depth = from.depth + 1;
    return out;
}

ParamStore::Cursor ParamStore::locate(const BinStr& sigma) {
    Cursor at = root();
    for (std::size_t i = 0; i < sigma.size(); ++i) at = descend(at, sigma.bit(i));
    return at;
}

ParamStore::Node& ParamStore::resolve(const Cursor& at) {
    Node& n = nodes_[at.node];
    if (at.inherited > n.local_stamp) {
        n.c.reset();
        if (kind_ == EngineKind::A) n.flag = 0;
        n.w_offset = static_cast<std::int64_t>(stamp_stage(at.inherited)) + 2;
        n.local_stamp = at.inherited;
    }
    return n;
}

StrategyParams ParamStore::current(const Cursor& at) {
    const Node& n = resolve(at);
    return StrategyParams{n.c, n.r, n.flag, n.w_offset};
}

const ParamStore::Pending* ParamStore::find_pending(NodeId node, Field field) const {
    for (auto it = pending_.rbegin(); it != pending_.rend(); ++it)
        if (it->at.node == node && it->field == field) return &*it;
    return nullptr;
}

StrategyParams ParamStore::next(const Cursor& at) {
    StrategyParams out = current(at);
    if (const auto* p = find_pending(at.node, Field::C)) out.c = p->c;
    if (const auto* p = find_pending(at.node, Field::R)) out.r = p->number;
    const Field flag_field = kind_ == EngineKind::A ? Field::S : Field::P;
    if (const auto* p = find_pending(at.node, flag_field)) out.flag = static_cast<int>(p->number);
    if (const auto* p = find_pending(at.node, Field::W)) out.w_offset = p->number;
    return out;
}

std::int64_t ParamStore::r_current(const Cursor& at) { return nodes_[at.node].r; }

std::int64_t ParamStore::r_next(const Cursor& at) {
    if (const auto* p = find_pending(at.node, Field::R)) return p->number;
    return nodes_[at.node].r;
}

void ParamStore::write_c(const Cursor& at, CounterSlot value) {
    pending_.push_back(Pending{at, Field::C, std::move(value), 0});
}

void ParamStore::write_r(const Cursor& at, std::int64_t value) {
    pending_.push_back(Pending{at, Field::R, std::nullopt, value});
}

void ParamStore::write_flag(const Cursor& at, int value) {
    const Field f = kind_ == EngineKind::A ? Field::S : Field::P;
    pending_.push_back(Pending{at, f, std::nullopt, value});
}

void ParamStore::write_w_offset(const Cursor& at, std::int64_t value) {
    pending_.push_back(Pending{at, Field::W, std::nullopt, value});
}

void ParamStore::mark(NodeId node, std::uint64_t stamp) {
    Node& n = nodes_[node];
    n.subtree_stamp = std::max(n.subtree_stamp, stamp);
}

void ParamStore::commit(Stage stage, const std::vector<InitRegion>& regions) {
    for (auto& p : pending_) {
        Node& n = resolve(p.at);
        switch (p.field) {
            case Field::C: n.c = std::move(p.c); break;
            case Field::R: n.r = p.number; break;
            case Field::S:
            case Field::P: n.flag = static_cast<int>(p.number); break;
            case Field::W: n.w_offset = p.number; break;
        }
        n.local_stamp = std::max(n.local_stamp, write_stamp(stage));
    }
    pending_.clear();

    const std::uint64_t stamp = init_stamp(stage);
    for (const auto& region : regions) {
        const auto& a = region.anchor;
        Cursor at = root();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a.bit(i) == 0) mark(descend(at, 1).node, stamp);
            at = descend(at, a.bit(i));
        }
        if (region.relation == Relation::LexGreaterOrExtends) {
            mark(descend(at, 0).node, stamp);
            mark(descend(at, 1).node, stamp);
        }
    }
}

}  // namespace injurybench
