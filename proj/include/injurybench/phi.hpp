#pragma once

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace injurybench {

using Index = std::int64_t;
using Stage = std::uint64_t;

/// One instruction of the toy register machine. Every executed instruction
/// costs one step.
struct Instruction {
    enum class Op { Inc, DecJz, Halt };
    Op op = Op::Halt;
    std::size_t reg = 0;
    /// DecJz: jump here when the register is zero, else decrement and fall through.
    std::size_t target = 0;
};

enum class SlotKind { Identity, Linear, Shift, Square, Constant, Partial, Program, Diverge };

struct SlotSpec {
    Index index = 0;
    SlotKind kind = SlotKind::Diverge;
    /// Linear: a*n + b. Shift: n + b. Constant: b.
    std::uint64_t a = 1;
    std::uint64_t b = 0;
    /// Partial: finite graph n -> value.
    std::map<std::uint64_t, std::uint64_t> graph;
    /// Program: input in register 0, result read from `output_register`.
    std::vector<Instruction> code;
    std::size_t output_register = 0;
    /// Programs carry no inferred classification; it must be declared.
    std::optional<bool> declared_total_increasing;
};

struct PhiConfig {
    std::vector<SlotSpec> slots;

    nlohmann::json to_json() const;
    static PhiConfig from_json(const nlohmann::json& doc);
    static PhiConfig load(const std::string& path);
    /// Digest of the canonical JSON form.
    std::string digest() const;
};

struct DefaultSuiteOptions {
    Index identity = 0;
    Index doubling = 1;
    Index shift = 2;
    std::uint64_t shift_by = 3;
    Index square = 3;
    Index constant = 4;
    std::uint64_t constant_value = 5;
    Index partial = 5;
    Index diverge = 6;
    Index first_program = 7;
    std::size_t programs = 1;
};

/// The configured stand-in for a standard enumeration (φ_e)_e. Unknown
/// indices behave like the empty function. Results are memoized; the memo
/// is internally synchronized.
class PhiRegistry {
public:
    PhiRegistry() = default;
    explicit PhiRegistry(const PhiConfig& config);
    PhiRegistry(const PhiRegistry& other);
    PhiRegistry& operator=(const PhiRegistry& other);

    /// Throws PreconditionError when the index is already taken.
    void add(SlotSpec slot);

    /// φ_e(n)[t]: the value when the raw computation halts within t steps
    /// and the value is at most t.
    std::optional<std::uint64_t> step(Index e, std::uint64_t n, Stage t) const;

    /// ℓ(e)[t]: largest l ≤ t with φ_e(0) < ... < φ_e(l) all visible at t;
    /// -1 when φ_e(0) is not yet visible.
    std::int64_t ell(Index e, Stage t) const;

    /// Known classification as total and increasing; nothing when a program
    /// slot has no declaration.
    std::optional<bool> total_increasing(Index e) const;

    const PhiConfig& config() const { return config_; }

private:
    struct Machine {
        std::vector<std::uint64_t> regs;
        std::size_t pc = 0;
        std::uint64_t steps = 0;
        bool halted = false;
    };

    const SlotSpec* find(Index e) const;
    std::optional<std::uint64_t> raw_step(const SlotSpec& slot, std::uint64_t n, Stage t) const;

    PhiConfig config_;
    std::map<Index, std::size_t> by_index_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<Index, std::uint64_t>, Machine> machines_;
    mutable std::map<Index, std::vector<std::int64_t>> ell_memo_;
};

PhiConfig default_suite_config(const DefaultSuiteOptions& options = {});
void register_default_suite(PhiRegistry& reg, const DefaultSuiteOptions& options = {});

/// n ↦ 2n+1 on the toy machine, halting after 4n+3 steps.
std::vector<Instruction> doubling_program();

}  // namespace injurybench
