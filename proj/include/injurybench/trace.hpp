#pragma once

#include "injurybench/dyadic.hpp"
#include "injurybench/params.hpp"
#include "injurybench/strings.hpp"

#include "json.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace injurybench {

/// How a stage terminated. Increments of r and descents are implied by the
/// settled string and the parameter writes.
enum class ActionKind { TopOut, ThreatJump, ThreatSchedule, ExpansionJump, ExpansionDelegate };

std::string to_string(ActionKind kind);
ActionKind parse_action_kind(const std::string& text);

struct StageAction {
    ActionKind kind = ActionKind::TopOut;
    BinStr strategy;               // σ, always the settled string
    std::optional<BinStr> target;  // γ for schedule/delegate
    CounterSlot scheduled;         // counter written to γ
    CounterSlot decoded;           // ⟨α, k+1⟩ read from c(σ) on expansion

    friend bool operator==(const StageAction&, const StageAction&) = default;
};

struct ParamWrite {
    BinStr strategy;
    Field field = Field::R;
    ParamValue before;
    ParamValue after;

    friend bool operator==(const ParamWrite&, const ParamWrite&) = default;
};

/// Parameter values an applied strategy saw at the start of its substage.
struct ParamRead {
    BinStr strategy;
    StrategyParams values;

    friend bool operator==(const ParamRead&, const ParamRead&) = default;
};

struct StageRecord {
    Stage t = 0;
    BinStr settled;
    StageAction action;
    Dyadic jump;
    Dyadic x_next;
    std::vector<InitRegion> init_regions;
    std::vector<ParamWrite> param_writes;
    /// Filled only when the engine is asked to log reads; never serialized.
    std::vector<ParamRead> reads;

    /// The substage path: every prefix of the settled string.
    std::vector<BinStr> applied() const;
    bool threatened() const {
        return action.kind == ActionKind::ThreatJump || action.kind == ActionKind::ThreatSchedule;
    }

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct TraceHeader {
    EngineKind engine = EngineKind::A;
    Stage stages = 0;
    std::string phi_config_digest;
    int version = 1;
    nlohmann::json phi_config;
    /// Excluded from the digest.
    std::optional<std::string> timestamp;
};

struct Trace {
    TraceHeader header;
    std::vector<StageRecord> stages;
    std::vector<Dyadic> x;  // x_0 .. x_T

    Stage horizon() const { return stages.size(); }
    std::string digest() const;
};

/// Rebuild x from the jumps and check every record's x_next against it.
void check_consistency(const Trace& trace);

nlohmann::json to_json(const StageRecord& record);
StageRecord stage_from_json(const nlohmann::json& doc);

void write_trace(std::ostream& out, const Trace& trace);
/// Throws ParseError with a 1-based line number on malformed input.
Trace read_trace(std::istream& in);
std::string serialize(const Trace& trace);
Trace deserialize(const std::string& text);
void save_trace(const std::string& path, const Trace& trace);
Trace load_trace(const std::string& path);

/// CSV with header "t,mantissa,exponent".
void write_sequence_csv(std::ostream& out, std::span<const Dyadic> xs);
std::vector<Dyadic> read_sequence_csv(std::istream& in);

/// Value of one parameter of σ at stage t, rebuilt from defaults, init regions
/// and parameter writes by a linear scan of the trace.
ParamValue replay_params(const Trace& trace, const BinStr& sigma, Stage t, Field field);

/// Walks a trace stage by stage, maintaining every parameter.
class TraceReplayer {
public:
    struct PathEntry {
        StrategyParams params;
        ParamStore::NodeId node = 0;       // stable identity of the strategy
        std::optional<std::uint64_t> nu;   // ν while it fits in 62 bits
    };

    explicit TraceReplayer(const Trace& trace);

    bool done() const { return t_ >= trace_->stages.size(); }
    Stage stage() const { return t_; }
    const StageRecord& record() const { return trace_->stages[t_]; }

    /// Values at the current stage of every prefix of the settled string,
    /// shortest first.
    const std::vector<PathEntry>& path();
    StrategyParams params(const BinStr& sigma);
    /// Every non-zero counter at the current stage.
    const std::map<BinStr, Counter>& live_counters() const { return counters_; }

    /// Apply the current record's writes and initializations.
    void advance();

private:
    const Trace* trace_;
    Stage t_ = 0;
    ParamStore store_;
    std::vector<PathEntry> path_;
    bool path_ready_ = false;
    std::map<BinStr, Counter> counters_;
};

}  // namespace injurybench
