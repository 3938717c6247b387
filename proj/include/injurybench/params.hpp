#pragma once

#include "injurybench/dyadic.hpp"
#include "injurybench/strings.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace injurybench {

using Stage = std::uint64_t;

enum class EngineKind { A, B };

std::string to_string(EngineKind kind);
EngineKind parse_engine_kind(const std::string& text);

/// A non-zero counter ⟨label, count⟩ with count ≥ 1. An empty optional is
/// the zero counter.
struct Counter {
    BinStr label;
    BigNat count;

    /// The natural number ⟨label, count⟩ = P(ν(label), count).
    BigNat encode() const { return pair(label, count); }
    friend bool operator==(const Counter&, const Counter&) = default;
};
using CounterSlot = std::optional<Counter>;

/// c, r, flag, w. The flag is s in engine A and p in engine B.
enum class Field { C, R, S, P, W };

std::string to_string(Field field);
Field parse_field(const std::string& text);

/// A parameter value: a natural number or a counter (field C).
using ParamValue = std::variant<BigNat, CounterSlot>;

std::string to_string(const ParamValue& value);

/// w = ν(σ) + offset. Witnesses only ever move by small offsets from ν(σ).
BigNat witness_value(const BinStr& sigma, std::int64_t offset);

/// Values of one strategy's parameters at one stage.
struct StrategyParams {
    CounterSlot c;
    std::int64_t r = 0;
    int flag = 0;
    std::int64_t w_offset = 0;

    ParamValue get(Field field, const BinStr& sigma) const;
    friend bool operator==(const StrategyParams&, const StrategyParams&) = default;
};

enum class Relation {
    LexGreater,           // {τ : anchor <_L τ}
    LexGreaterOrExtends,  // {τ : anchor <_L τ or anchor ⊏ τ}
};

std::string to_string(Relation relation);
Relation parse_relation(const std::string& text);

/// A symbolic initialization of infinitely many strategies.
struct InitRegion {
    BinStr anchor;
    Relation relation = Relation::LexGreater;

    bool covers(const BinStr& tau) const;
    friend bool operator==(const InitRegion&, const InitRegion&) = default;
};

/// Parameters of every strategy, materialized on demand in a binary trie.
///
/// Initialization regions are recorded as stamps on the roots of the
/// subtrees they cover; a node resolves its reset lazily from the largest
/// stamp on its root path. Writes made during a stage are buffered and
/// committed at stage end, so reads of "[t+1]" values see them while reads
/// of "[t]" values do not.
class ParamStore {
public:
    using NodeId = std::uint32_t;

    struct Cursor {
        NodeId node = 0;
        std::uint64_t inherited = 0;       // largest init stamp on the root path
        std::optional<std::uint64_t> nu;   // ν of the node, while it fits
        std::size_t depth = 0;
    };

    explicit ParamStore(EngineKind kind);

    Cursor root() const;
    Cursor descend(const Cursor& from, int bit);
    Cursor locate(const BinStr& sigma);

    /// Committed values, i.e. the values at the current stage.
    StrategyParams current(const Cursor& at);
    /// Current values overlaid with this stage's buffered writes.
    StrategyParams next(const Cursor& at);

    std::int64_t r_current(const Cursor& at);
    std::int64_t r_next(const Cursor& at);

    void write_c(const Cursor& at, CounterSlot value);
    void write_r(const Cursor& at, std::int64_t value);
    void write_flag(const Cursor& at, int value);
    void write_w_offset(const Cursor& at, std::int64_t value);

    /// Apply buffered writes made during `stage`, then the initializations.
    void commit(Stage stage, const std::vector<InitRegion>& regions);

    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        NodeId children[2] = {0, 0};
        std::uint64_t subtree_stamp = 0;
        std::uint64_t local_stamp = 0;
        CounterSlot c;
        std::int64_t r = 0;
        int flag = 0;
        std::int64_t w_offset = 0;
    };

    struct Pending {
        Cursor at;
        Field field;
        CounterSlot c;
        std::int64_t number = 0;
    };

    Node& resolve(const Cursor& at);
    void mark(NodeId node, std::uint64_t stamp);
    const Pending* find_pending(NodeId node, Field field) const;

    EngineKind kind_;
    std::vector<Node> nodes_;
    std::vector<Pending> pending_;
};

}  // namespace injurybench
