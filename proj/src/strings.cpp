#include "injurybench/strings.hpp"

#include "injurybench/error.hpp"

#include <algorithm>

namespace injurybench {

BinStr::BinStr(std::string bits) : bits_(std::move(bits)) {
    if (bits_ == "λ") bits_.clear();
    if (!std::all_of(bits_.begin(), bits_.end(), [](char c) { return c == '0' || c == '1'; }))
        throw PreconditionError("binary string contains characters other than 0/1: " + bits_);
}

BinStr BinStr::child(int b) const {
    BinStr out = *this;
    out.bits_.push_back(b ? '1' : '0');
    return out;
}

BinStr BinStr::prefix(std::size_t n) const {
    BinStr out;
    out.bits_ = bits_.substr(0, n);
    return out;
}

std::string BinStr::display() const { return bits_.empty() ? "λ" : bits_; }

bool is_prefix(const BinStr& sigma, const BinStr& tau) {
    return sigma.size() <= tau.size() &&
           std::equal(sigma.bits().begin(), sigma.bits().end(), tau.bits().begin());
}

bool is_proper_prefix(const BinStr& sigma, const BinStr& tau) {
    return sigma.size() < tau.size() && is_prefix(sigma, tau);
}

bool lex_less(const BinStr& sigma, const BinStr& tau) {
    const auto n = std::min(sigma.size(), tau.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (sigma.bit(i) != tau.bit(i)) return sigma.bit(i) == 0;
    }
    return false;
}

BigNat nu(const BinStr& sigma) {
    BigNat out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, sigma.size());
    out -= 1;
    if (!sigma.empty()) out += BigNat(sigma.bits(), 2);
    return out;
}

std::optional<std::uint64_t> nu_small(const BinStr& sigma) {
    if (sigma.size() > 61) return std::nullopt;
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) value = (value << 1) | static_cast<std::uint64_t>(sigma.bit(i));
    return ((std::uint64_t{1} << sigma.size()) - 1) + value;
}

BinStr nu_inv(const BigNat& n) {
    if (n < 0) throw PreconditionError("nu_inv of a negative number");
    const BigNat shifted = n + 1;
    const auto length = mpz_sizeinbase(shifted.get_mpz_t(), 2) - 1;
    if (length == 0) return BinStr{};
    // Drop the leading one; the remaining `length` bits spell σ.
    std::string bits = shifted.get_str(2).substr(1);
    return BinStr(std::move(bits));
}

BigNat cantor_pair(const BigNat& m, const BigNat& n) {
    const BigNat s = m + n;
    return s * (s + 1) / 2 + n;
}

std::pair<BigNat, BigNat> cantor_unpair(const BigNat& code) {
    if (code < 0) throw PreconditionError("cantor_unpair of a negative number");
    BigNat w;
    const BigNat disc = 8 * code + 1;
    mpz_sqrt(w.get_mpz_t(), disc.get_mpz_t());
    w = (w - 1) / 2;
    const BigNat triangle = w * (w + 1) / 2;
    const BigNat n = code - triangle;
    return {w - n, n};
}

BigNat pair(const BinStr& sigma, const BigNat& n) { return cantor_pair(nu(sigma), n); }

std::pair<BinStr, BigNat> unpair(const BigNat& code) {
    auto [m, n] = cantor_unpair(code);
    return {nu_inv(m), n};
}

TruePathEstimate true_path_estimate(std::span<const BinStr> settlements, Window window,
                                    std::size_t threshold, std::optional<std::size_t> length) {
    if (window.lo >= window.hi) throw PreconditionError("true-path window is empty");
    if (window.hi > settlements.size())
        throw PreconditionError("true-path window exceeds the number of settlements");
    if (threshold == 0) throw PreconditionError("true-path threshold must be at least 1");

    const auto observed = settlements.subspan(window.lo, window.hi - window.lo);
    std::size_t target = 0;
    if (length) {
        target = *length;
    } else {
        for (const auto& s : observed) target = std::max(target, s.size());
    }

    TruePathEstimate out;
    out.window = window;
    bool stable = true;
    for (std::size_t e = 0; e < target; ++e) {
        std::size_t zeros = 0;
        std::size_t ones = 0;
        for (const auto& s : observed) {
            if (s.size() <= e || !is_prefix(out.path, s)) continue;
            (s.bit(e) == 0 ? zeros : ones) += 1;
        }
        const int chosen = zeros >= threshold ? 0 : 1;
        const auto mine = chosen == 0 ? zeros : ones;
        const auto other = chosen == 0 ? ones : zeros;
        out.path = out.path.child(chosen);
        if (stable && mine >= other + threshold) {
            out.stable_upto = out.path.size();
        } else {
            stable = false;
        }
    }
    return out;
}

}  // namespace injurybench
