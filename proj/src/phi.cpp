#include "injurybench/phi.hpp"

#include "injurybench/digest.hpp"
#include "injurybench/error.hpp"

#include <algorithm>
#include <fstream>

namespace injurybench {

namespace {

constexpr std::uint64_t kMaxProgramSteps = std::uint64_t{1} << 40;

const std::map<SlotKind, std::string>& kind_names() {
    static const std::map<SlotKind, std::string> names{
        {SlotKind::Identity, "identity"}, {SlotKind::Linear, "linear"},
        {SlotKind::Shift, "shift"},       {SlotKind::Square, "square"},
        {SlotKind::Constant, "constant"}, {SlotKind::Partial, "partial"},
        {SlotKind::Program, "program"},   {SlotKind::Diverge, "diverge"},
    };
    return names;
}

SlotKind parse_kind(const std::string& name) {
    for (const auto& [kind, text] : kind_names())
        if (text == name) return kind;
    throw PreconditionError("unknown slot kind '" + name + "'");
}

nlohmann::json instruction_to_json(const Instruction& ins) {
    switch (ins.op) {
        case Instruction::Op::Inc:
            return {{"op", "inc"}, {"reg", ins.reg}};
        case Instruction::Op::DecJz:
            return {{"op", "decjz"}, {"reg", ins.reg}, {"target", ins.target}};
        case Instruction::Op::Halt:
            break;
    }
    return {{"op", "halt"}};
}

Instruction instruction_from_json(const nlohmann::json& j) {
    Instruction ins;
    const auto op = j.at("op").get<std::string>();
    if (op == "inc") {
        ins.op = Instruction::Op::Inc;
        ins.reg = j.at("reg").get<std::size_t>();
    } else if (op == "decjz") {
        ins.op = Instruction::Op::DecJz;
        ins.reg = j.at("reg").get<std::size_t>();
        ins.target = j.at("target").get<std::size_t>();
    } else if (op == "halt") {
        ins.op = Instruction::Op::Halt;
    } else {
        throw PreconditionError("unknown instruction '" + op + "'");
    }
    return ins;
}

}  // namespace

nlohmann::json PhiConfig::to_json() const {
    auto slots_json = nlohmann::json::array();
    for (const auto& s : slots) {
        nlohmann::json params = nlohmann::json::object();
        switch (s.kind) {
            case SlotKind::Linear:
                params = {{"a", s.a}, {"b", s.b}};
                break;
            case SlotKind::Shift:
                params = {{"c", s.b}};
                break;
            case SlotKind::Constant:
                params = {{"value", s.b}};
                break;
            case SlotKind::Partial: {
                auto graph = nlohmann::json::array();
                for (const auto& [n, v] : s.graph) graph.push_back({n, v});
                params = {{"graph", graph}};
                break;
            }
            case SlotKind::Program: {
                auto code = nlohmann::json::array();
                for (const auto& ins : s.code) code.push_back(instruction_to_json(ins));
                params = {{"code", code}, {"output", s.output_register}};
                if (s.declared_total_increasing)
                    params["total_increasing"] = *s.declared_total_increasing;
                break;
            }
            default:
                break;
        }
        slots_json.push_back({{"index", s.index}, {"kind", kind_names().at(s.kind)}, {"params", params}});
    }
    return {{"slots", slots_json}};
}

PhiConfig PhiConfig::from_json(const nlohmann::json& doc) {
    PhiConfig config;
    try {
        for (const auto& j : doc.at("slots")) {
            SlotSpec s;
            s.index = j.at("index").get<Index>();
            s.kind = parse_kind(j.at("kind").get<std::string>());
            const auto params = j.value("params", nlohmann::json::object());
            switch (s.kind) {
                case SlotKind::Linear:
                    s.a = params.value("a", std::uint64_t{1});
                    s.b = params.value("b", std::uint64_t{0});
                    break;
                case SlotKind::Shift:
                    s.b = params.value("c", std::uint64_t{0});
                    break;
                case SlotKind::Constant:
                    s.b = params.value("value", std::uint64_t{0});
                    break;
                case SlotKind::Partial:
                    for (const auto& entry : params.at("graph"))
                        s.graph[entry.at(0).get<std::uint64_t>()] = entry.at(1).get<std::uint64_t>();
                    break;
                case SlotKind::Program:
                    for (const auto& ins : params.at("code")) s.code.push_back(instruction_from_json(ins));
                    s.output_register = params.value("output", std::size_t{0});
                    if (params.contains("total_increasing"))
                        s.declared_total_increasing = params.at("total_increasing").get<bool>();
                    break;
                default:
                    break;
            }
            config.slots.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw PreconditionError(std::string("malformed phi config: ") + ex.what());
    }
    return config;
}

PhiConfig PhiConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open phi config '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& ex) {
        throw PreconditionError("phi config '" + path + "' is not valid JSON: " + ex.what());
    }
    return from_json(doc);
}

std::string PhiConfig::digest() const { return fnv1a_hex(to_json().dump()); }

PhiRegistry::PhiRegistry(const PhiConfig& config) {
    for (const auto& s : config.slots) add(s);
}

PhiRegistry::PhiRegistry(const PhiRegistry& other)
    : config_(other.config_), by_index_(other.by_index_) {}

PhiRegistry& PhiRegistry::operator=(const PhiRegistry& other) {
    if (this != &other) {
        std::scoped_lock lock(mutex_);
        config_ = other.config_;
        by_index_ = other.by_index_;
        machines_.clear();
        ell_memo_.clear();
    }
    return *this;
}

void PhiRegistry::add(SlotSpec slot) {
    if (by_index_.count(slot.index))
        throw PreconditionError("duplicate phi index " + std::to_string(slot.index));
    if (slot.kind == SlotKind::Program) {
        for (const auto& ins : slot.code)
            if (ins.op == Instruction::Op::DecJz && ins.target > slot.code.size())
                throw PreconditionError("program jump target out of range");
    }
    std::scoped_lock lock(mutex_);
    by_index_[slot.index] = config_.slots.size();
    config_.slots.push_back(std::move(slot));
    ell_memo_.clear();
}

const SlotSpec* PhiRegistry::find(Index e) const {
    const auto it = by_index_.find(e);
    return it == by_index_.end() ? nullptr : &config_.slots[it->second];
}

std::optional<bool> PhiRegistry::total_increasing(Index e) const {
    const auto* slot = find(e);
    if (!slot) return false;
    switch (slot->kind) {
        case SlotKind::Identity:
        case SlotKind::Shift:
        case SlotKind::Square:
            return true;
        case SlotKind::Linear:
            return slot->a >= 1;
        case SlotKind::Program:
            return slot->declared_total_increasing;
        default:
            return false;
    }
}

// Caller holds mutex_.
std::optional<std::uint64_t> PhiRegistry::raw_step(const SlotSpec& slot, std::uint64_t n, Stage t) const {
    switch (slot.kind) {
        case SlotKind::Identity:
            return n;
        case SlotKind::Linear:
            return slot.a * n + slot.b;
        case SlotKind::Shift:
            return n + slot.b;
        case SlotKind::Square:
            return n * n;
        case SlotKind::Constant:
            return slot.b;
        case SlotKind::Partial: {
            const auto it = slot.graph.find(n);
            if (it == slot.graph.end()) return std::nullopt;
            return it->second;
        }
        case SlotKind::Diverge:
            return std::nullopt;
        case SlotKind::Program:
            break;
    }

    auto [it, fresh] = machines_.try_emplace({slot.index, n});
    Machine& m = it->second;
    if (fresh) {
        std::size_t regs = std::max<std::size_t>(1, slot.output_register + 1);
        for (const auto& ins : slot.code) regs = std::max(regs, ins.reg + 1);
        m.regs.assign(regs, 0);
        m.regs[0] = n;
    }
    const std::uint64_t budget = std::min(t, kMaxProgramSteps);
    while (!m.halted && m.steps < budget) {
        if (m.pc >= slot.code.size()) {
            m.halted = true;
            break;
        }
        const auto& ins = slot.code[m.pc];
        ++m.steps;
        switch (ins.op) {
            case Instruction::Op::Inc:
                ++m.regs[ins.reg];
                ++m.pc;
                break;
            case Instruction::Op::DecJz:
                if (m.regs[ins.reg] == 0) {
                    m.pc = ins.target;
                } else {
                    --m.regs[ins.reg];
                    ++m.pc;
                }
                break;
            case Instruction::Op::Halt:
                m.halted = true;
                break;
        }
    }
    if (!m.halted && m.pc >= slot.code.size()) m.halted = true;
    if (m.halted && m.steps <= t) return m.regs[slot.output_register];
    return std::nullopt;
}

std::optional<std::uint64_t> PhiRegistry::step(Index e, std::uint64_t n, Stage t) const {
    const auto* slot = find(e);
    if (!slot) return std::nullopt;
    std::scoped_lock lock(mutex_);
    const auto value = raw_step(*slot, n, t);
    if (!value || *value > t) return std::nullopt;
    return value;
}

std::int64_t PhiRegistry::ell(Index e, Stage t) const {
    const auto* slot = find(e);
    if (!slot || slot->kind == SlotKind::Diverge) return -1;

    std::scoped_lock lock(mutex_);
    auto& memo = ell_memo_[e];
    while (memo.size() <= t) {
        const Stage s = memo.size();
        std::int64_t l = memo.empty() ? -1 : memo.back();
        auto visible = [&](std::uint64_t k) -> std::optional<std::uint64_t> {
            const auto v = raw_step(*slot, k, s);
            if (!v || *v > s) return std::nullopt;
            return v;
        };
        if (l < 0 && visible(0)) l = 0;
        if (l >= 0) {
            auto prev = visible(static_cast<std::uint64_t>(l));
            while (static_cast<Stage>(l + 1) <= s) {
                const auto next = visible(static_cast<std::uint64_t>(l + 1));
                if (!next || *next <= *prev) break;
                prev = next;
                ++l;
            }
        }
        memo.push_back(l);
    }
    return memo[t];
}

std::vector<Instruction> doubling_program() {
    using Op = Instruction::Op;
    return {
        {Op::DecJz, 0, 4}, {Op::Inc, 1, 0}, {Op::Inc, 1, 0},
        {Op::DecJz, 2, 0}, {Op::Inc, 1, 0}, {Op::Halt, 0, 0},
    };
}

PhiConfig default_suite_config(const DefaultSuiteOptions& o) {
    PhiConfig config;
    auto add = [&](Index index, SlotKind kind) -> SlotSpec& {
        SlotSpec s;
        s.index = index;
        s.kind = kind;
        config.slots.push_back(s);
        return config.slots.back();
    };
    add(o.identity, SlotKind::Identity);
    add(o.doubling, SlotKind::Linear).a = 2;
    add(o.shift, SlotKind::Shift).b = o.shift_by;
    add(o.square, SlotKind::Square);
    add(o.constant, SlotKind::Constant).b = o.constant_value;
    add(o.partial, SlotKind::Partial).graph = {{0, 1}, {1, 4}, {2, 6}};
    add(o.diverge, SlotKind::Diverge);
    for (std::size_t i = 0; i < o.programs; ++i) {
        auto& p = add(o.first_program + static_cast<Index>(i), SlotKind::Program);
        p.code = doubling_program();
        p.output_register = 1;
        p.declared_total_increasing = true;
    }
    return config;
}

void register_default_suite(PhiRegistry& reg, const DefaultSuiteOptions& options) {
    for (auto& s : default_suite_config(options).slots) reg.add(std::move(s));
}

}  // namespace injurybench
