#pragma once

#include "injurybench/phi.hpp"
#include "injurybench/trace.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace injurybench {

enum class Status { Pass, Fail, Incomplete };

std::string to_string(Status status);

struct Report {
    Report() = default;
    explicit Report(std::string name) : check(std::move(name)) {}

    std::string check;
    Status status = Status::Pass;
    std::vector<nlohmann::json> witnesses;
    std::vector<std::string> assumptions;

    /// Record a violation; the report becomes "fail".
    void fail(nlohmann::json witness);
    /// Record a horizon-conditional gap; "pass" becomes "incomplete".
    void incomplete(nlohmann::json witness);
    void note(nlohmann::json witness);

    nlohmann::json to_json() const;
};

/// Worst status of a set of reports (fail > incomplete > pass).
Status overall(const std::vector<Report>& reports);

/// r(σ)[t] ≤ t, r and w non-decreasing in t, w prefix-monotone (engine A),
/// and every recorded "before" value agrees with the replayed parameters.
Report check_monotonicity(const Trace& trace);

/// Jump sums of threat episodes (2^{-w}) and expansion-counter episodes
/// (2^{-r}): equality for complete episodes, ≤ otherwise.
Report check_jump_sums(const Trace& trace);

/// x_0 = 0, x non-decreasing, jumps are powers of two, x_T < 4.
Report check_convergence_bound(const Trace& trace);

/// A: the least m with x_T - x_{φ_e(m)} ≥ 2^{-m}. B: the maximal window
/// [m, n_max] on which x_T - x_{φ_e(n)} ≥ 2^{-n} holds for every n. Both
/// modes also check x_{t2} - x_{φ_e(ℓ(e)[t1])} ≥ 2^{-w(σ)[t1]} for every
/// complete threat episode of a length-e strategy.
/// Throws PreconditionError unless slot e is declared total and increasing.
Report check_requirement_N(const Trace& trace, Index e);

struct TruePathOptions {
    std::optional<Window> window;  // default: second half of the run
    std::size_t threshold = 3;
};

/// Modulus v(n) = ℓ(e)[t(n)] along the estimated true path and the bound
/// x_{φ_e(i+1)} - x_{φ_e(i)} < 2^{-n} for every bracketed i ≥ v(n).
/// Throws PreconditionError unless slot e is declared total and increasing.
Report check_requirement_P(const Trace& trace, Index e, const TruePathOptions& options = {});

/// Engine A cut-off stages: init coverage at t_σ, counters at t_σ+1, and
/// x_T - x_{t_σ+1} ≤ 2^{-(t_σ+1)}.
Report check_cutoffs(const Trace& trace);

/// Stages settle on the acting strategy, counters left of the path are
/// zero, and the jumps of each u-fiber sum to at most the owed 2^{-w}.
Report check_settlement_facts(const Trace& trace);

/// Engine B: no two consecutive applications with p = 1, no consecutive
/// threats, each threat raises w by exactly 1.
Report check_pause_dynamics(const Trace& trace);

struct VerifyOptions {
    /// Slots to certify with the requirement checkers; default: every slot
    /// declared total and increasing.
    std::optional<std::vector<Index>> indices;
    TruePathOptions true_path;
};

const std::vector<std::string>& check_names();

/// Runs the named checkers ("all" expands to every checker). Throws
/// PreconditionError on an unknown name.
std::vector<Report> run_checks(const Trace& trace, const std::vector<std::string>& names,
                               const VerifyOptions& options = {});

}  // namespace injurybench
