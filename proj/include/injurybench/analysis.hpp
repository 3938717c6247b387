#pragma once

#include "injurybench/trace.hpp"

#include <map>
#include <optional>
#include <vector>

namespace injurybench {

/// J: the stages with x_{t+1} > x_t.
std::vector<Stage> jump_set(const Trace& trace);

/// u: J -> stages. A threat jump maps to its own stage; an expansion jump
/// labeled α maps to the latest earlier stage at which α was applied and
/// threatened. Throws TraceCorruption when a jump fits neither case.
std::map<Stage, Stage> u_map(const Trace& trace);

/// u^{-1}(t') as sorted stage lists.
std::map<Stage, std::vector<Stage>> u_fibers(const std::map<Stage, Stage>& u);

/// The last stage (before `upto`) whose initializations cover σ.
std::optional<Stage> last_initialization(const Trace& trace, const BinStr& sigma,
                                         std::optional<Stage> upto = std::nullopt);

/// Whether some stage in [from, to) initializes σ.
bool initialized_between(const Trace& trace, const BinStr& sigma, Stage from, Stage to);

/// The stage t' at which σ is applied and threatened after its last
/// initialization within the horizon, if any.
std::optional<Stage> final_threat_stage(const Trace& trace, const BinStr& sigma);

/// t_σ = max{t ∈ J : u(t) = t'} for σ's final threat stage t'; absent when
/// σ has no such threat or its jumps have not started within the horizon.
std::optional<Stage> cutoff_stages(const Trace& trace, const BinStr& sigma);

/// Stages at which each strategy was applied, indexed by a trie over the
/// settled strings.
class ApplicationIndex {
public:
    explicit ApplicationIndex(const Trace& trace);

    /// Sorted stages at which σ was applied.
    const std::vector<Stage>& applications(const BinStr& sigma) const;
    /// The first stage > t at which σ is applied.
    std::optional<Stage> next_application(const BinStr& sigma, Stage t) const;

private:
    struct Node {
        std::uint32_t child[2] = {0, 0};
        std::vector<Stage> stages;
    };
    std::vector<Node> nodes_;
    static const std::vector<Stage> kEmpty;
};

}  // namespace injurybench
