#pragma once

#include "injurybench/dyadic.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace injurybench {

/// A finite prefix (x_0, ..., x_{N-1}) of an approximation, optionally with
/// its exact limit.
struct ApproxSequence {
    std::vector<Dyadic> values;
    std::optional<Dyadic> known_limit;
    std::string provenance;

    std::size_t size() const { return values.size(); }
};

/// Total non-decreasing map N -> N.
class ModulusFn {
public:
    /// a*n + b
    static ModulusFn affine(std::uint64_t a, std::uint64_t b);
    /// offset + height * floor(n / width)
    static ModulusFn step(std::uint64_t width, std::uint64_t height, std::uint64_t offset = 0);
    /// Explicit values; evaluation past the table throws PreconditionError.
    static ModulusFn table(std::vector<std::uint64_t> values);
    static ModulusFn from_function(std::function<std::uint64_t(std::uint64_t)> f,
                                   std::string description);

    std::uint64_t operator()(std::uint64_t n) const { return f_(n); }
    /// Largest n + 1 on which the function is defined, for tables.
    std::optional<std::uint64_t> domain() const { return domain_; }
    const std::string& description() const { return description_; }

private:
    std::function<std::uint64_t(std::uint64_t)> f_;
    std::optional<std::uint64_t> domain_;
    std::string description_;
};

struct SpeedupIndices {
    std::vector<std::size_t> ratio_form;  // (x_{n+1}-x_n)/(x-x_n) ≥ ρ
    std::vector<std::size_t> prime_form;  // (x-x_{n+1})/(x-x_n) ≤ 1-ρ
};

/// Indices n (with n+1 in range) at which the approximation is sped up by ρ,
/// in both equivalent forms. Requires an increasing sequence whose known
/// limit exceeds every value, and 0 < ρ < 1.
SpeedupIndices speedup_indices(const ApproxSequence& seq, const Dyadic& rho);

/// y_n = x_n - 2^{-n}. Requires a non-decreasing sequence.
ApproxSequence regain_to_speed(const ApproxSequence& seq);

struct RatioAt {
    std::size_t n = 0;
    mpq_class ratio;
};

/// For every regaining index n of seq (x - x_n < 2^{-n}, n+1 in range), the
/// ratio (y_{n+1}-y_n)/(x-y_n) of the shifted sequence y.
std::vector<RatioAt> regaining_ratios(const ApproxSequence& seq);

struct SpeedToRegain {
    ModulusFn g;
    std::uint64_t k = 0;
    ModulusFn h;
    std::optional<std::uint64_t> m;  // absent when not found within the budget
    std::uint64_t budget = 0;
};

/// g(n) = 0 if f(0) > n, else max{k : f(k) ≤ n}; k minimal with 1/ρ ≤ 2^k;
/// h(n) = max(0, g(n) - k); m = min{i ≥ f(0) : g(i) ≥ k}.
SpeedToRegain speed_to_regain(const ModulusFn& f, const Dyadic& rho,
                              std::uint64_t budget = std::uint64_t{1} << 20);

/// g(n) = 0 if f(0) > n, else max{k : f(k) ≤ n}. Throws PreconditionError
/// when f looks bounded, so the max does not exist.
ModulusFn lower_inverse(const ModulusFn& f);

/// All n in range with x - x_n ≤ 2^{-h(n)}.
std::vector<std::size_t> certify_regaining(const ApproxSequence& seq, const ModulusFn& h);

struct GapBoundReport {
    std::size_t checked = 0;
    std::optional<std::size_t> violation;  // first n with x_{n+1} - x_n ≥ 2^{-g(n)}
};

/// Checks that f is a modulus of seq on the available range (throws
/// PreconditionError with the first counterexample otherwise), then checks
/// x_{n+1} - x_n < 2^{-g(n)} for every n ≥ f(0) in range.
GapBoundReport modulus_to_gapbound(const ModulusFn& f, const ApproxSequence& seq);

/// x_n = 1 - 2^{-rate*n}, limit 1.
ApproxSequence geometric_sequence(std::uint64_t rate, std::size_t length);
/// x_n = sum_{i<n} 2^{-exponents[i]}; the limit adds 2^{-tail} on top of the
/// full sum, so it exceeds every value.
ApproxSequence jump_sequence(const std::vector<std::int64_t>& exponents, std::int64_t tail);

/// CSV "n,f" for modulus tables.
void write_modulus_csv(std::ostream& out, const ModulusFn& f, std::uint64_t count);
ModulusFn read_modulus_csv(std::istream& in);

}  // namespace injurybench
