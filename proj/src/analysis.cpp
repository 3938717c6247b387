#include "injurybench/analysis.hpp"

#include "injurybench/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace injurybench {

const std::vector<Stage> ApplicationIndex::kEmpty;

std::vector<Stage> jump_set(const Trace& trace) {
    std::vector<Stage> out;
    for (const auto& s : trace.stages)
        if (s.jump.sign() > 0) out.push_back(s.t);
    return out;
}

std::map<Stage, Stage> u_map(const Trace& trace) {
    std::map<Stage, Stage> u;
    std::unordered_map<BinStr, Stage> last_threat;
    for (const auto& s : trace.stages) {
        if (s.jump.sign() > 0) {
            if (s.action.kind == ActionKind::ThreatJump) {
                u[s.t] = s.t;
            } else if (s.action.kind == ActionKind::ExpansionJump && s.action.decoded) {
                auto it = last_threat.find(s.action.decoded->label);
                if (it == last_threat.end())
                    throw TraceCorruption("jump at stage " + std::to_string(s.t) + " labeled " +
                                          s.action.decoded->label.display() +
                                          " has no earlier threat");
                u[s.t] = it->second;
            } else {
                throw TraceCorruption("jump at stage " + std::to_string(s.t) +
                                      " is neither a threat nor an expansion jump");
            }
        }
        if (s.threatened()) last_threat[s.settled] = s.t;
    }
    return u;
}

std::map<Stage, std::vector<Stage>> u_fibers(const std::map<Stage, Stage>& u) {
    std::map<Stage, std::vector<Stage>> out;
    for (const auto& [t, origin] : u) out[origin].push_back(t);
    return out;
}

std::optional<Stage> last_initialization(const Trace& trace, const BinStr& sigma,
                                         std::optional<Stage> upto) {
    const Stage end = std::min<Stage>(upto.value_or(trace.horizon()), trace.horizon());
    for (Stage t = end; t-- > 0;)
        for (const auto& r : trace.stages[t].init_regions)
            if (r.covers(sigma)) return t;
    return std::nullopt;
}

bool initialized_between(const Trace& trace, const BinStr& sigma, Stage from, Stage to) {
    to = std::min<Stage>(to, trace.horizon());
    for (Stage t = from; t < to; ++t)
        for (const auto& r : trace.stages[t].init_regions)
            if (r.covers(sigma)) return true;
    return false;
}

std::optional<Stage> final_threat_stage(const Trace& trace, const BinStr& sigma) {
    const auto init = last_initialization(trace, sigma);
    const Stage from = init ? *init + 1 : 0;
    for (Stage t = from; t < trace.horizon(); ++t) {
        const auto& s = trace.stages[t];
        if (s.threatened() && s.settled == sigma) return t;
    }
    return std::nullopt;
}

std::optional<Stage> cutoff_stages(const Trace& trace, const BinStr& sigma) {
    const auto origin = final_threat_stage(trace, sigma);
    if (!origin) return std::nullopt;
    std::optional<Stage> best;
    for (const auto& [t, o] : u_map(trace))
        if (o == *origin) best = t;
    return best;
}

ApplicationIndex::ApplicationIndex(const Trace& trace) {
    nodes_.emplace_back();
    for (const auto& s : trace.stages) {
        std::uint32_t at = 0;
        nodes_[at].stages.push_back(s.t);
        for (std::size_t i = 0; i < s.settled.size(); ++i) {
            const int b = s.settled.bit(i);
            if (nodes_[at].child[b] == 0) {
                nodes_[at].child[b] = static_cast<std::uint32_t>(nodes_.size());
                nodes_.emplace_back();
            }
            at = nodes_[at].child[b];
            nodes_[at].stages.push_back(s.t);
        }
    }
}

const std::vector<Stage>& ApplicationIndex::applications(const BinStr& sigma) const {
    std::uint32_t at = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        at = nodes_[at].child[sigma.bit(i)];
        if (at == 0) return kEmpty;
    }
    return nodes_[at].stages;
}

std::optional<Stage> ApplicationIndex::next_application(const BinStr& sigma, Stage t) const {
    const auto& v = applications(sigma);
    auto it = std::upper_bound(v.begin(), v.end(), t);
    if (it == v.end()) return std::nullopt;
    return *it;
}

}  // namespace injurybench
