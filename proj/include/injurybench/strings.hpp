#pragma once

#include "injurybench/dyadic.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

namespace injurybench {

/// Finite binary string; a node of the strategy tree.
class BinStr {
public:
    BinStr() = default;
    /// Accepts text over {0,1}; "λ" is accepted as the empty string.
    explicit BinStr(std::string bits);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    int bit(std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }
    int last() const { return bit(size() - 1); }

    BinStr child(int b) const;
    BinStr prefix(std::size_t n) const;
    const std::string& bits() const { return bits_; }
    /// Human form: "λ" for the empty string.
    std::string display() const;

    friend bool operator==(const BinStr&, const BinStr&) = default;
    friend auto operator<=>(const BinStr&, const BinStr&) = default;

private:
    std::string bits_;
};

/// σ ⊑ τ
bool is_prefix(const BinStr& sigma, const BinStr& tau);
/// σ ⊏ τ
bool is_proper_prefix(const BinStr& sigma, const BinStr& tau);
/// σ <_L τ: some ρ has ρ0 ⊑ σ and ρ1 ⊑ τ.
bool lex_less(const BinStr& sigma, const BinStr& tau);

/// Position of σ in the length-lexicographic order (λ ↦ 0, "0" ↦ 1, ...).
BigNat nu(const BinStr& sigma);
/// ν(σ) when it fits in 62 bits.
std::optional<std::uint64_t> nu_small(const BinStr& sigma);
BinStr nu_inv(const BigNat& n);

/// Cantor's pairing ½(m+n)(m+n+1)+n.
BigNat cantor_pair(const BigNat& m, const BigNat& n);
std::pair<BigNat, BigNat> cantor_unpair(const BigNat& code);

/// ⟨σ, n⟩ = P(ν(σ), n).
BigNat pair(const BinStr& sigma, const BigNat& n);
std::pair<BinStr, BigNat> unpair(const BigNat& code);

struct Window {
    std::size_t lo = 0;  // inclusive
    std::size_t hi = 0;  // exclusive
};

struct TruePathEstimate {
    BinStr path;
    std::size_t stable_upto = 0;
    Window window;
};

/// Finite-horizon surrogate of the true path of a settlement sequence.
///
/// Bit e+1 is 0 iff the current prefix followed by 0 prefixes at least
/// `threshold` settlements inside the window. The prefix stays "stable"
/// while the chosen bit's count beats the other bit's count by at least
/// `threshold`. The path length defaults to the longest settlement seen in
/// the window.
TruePathEstimate true_path_estimate(std::span<const BinStr> settlements, Window window,
                                    std::size_t threshold,
                                    std::optional<std::size_t> length = std::nullopt);

}  // namespace injurybench

template <>
struct std::hash<injurybench::BinStr> {
    std::size_t operator()(const injurybench::BinStr& s) const noexcept {
        return std::hash<std::string>{}(s.bits());
    }
};
