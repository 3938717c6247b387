#include "injurybench/speed.hpp"

#include "injurybench/error.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace injurybench {

namespace {

constexpr std::uint64_t kInverseSearchCap = std::uint64_t{1} << 22;

void require_limit(const ApproxSequence& seq) {
    if (!seq.known_limit) throw PreconditionError("sequence has no known limit");
}

void require_rho(const Dyadic& rho) {
    if (rho.sign() <= 0 || !rho.less_than_pow2(0)) throw PreconditionError("rho must lie in (0,1)");
}

}  // namespace

ModulusFn ModulusFn::affine(std::uint64_t a, std::uint64_t b) {
    return from_function([a, b](std::uint64_t n) { return a * n + b; },
                         std::to_string(a) + "n+" + std::to_string(b));
}

ModulusFn ModulusFn::step(std::uint64_t width, std::uint64_t height, std::uint64_t offset) {
    if (width == 0) throw PreconditionError("step width must be positive");
    return from_function(
        [=](std::uint64_t n) { return offset + height * (n / width); },
        std::to_string(offset) + "+" + std::to_string(height) + "*floor(n/" +
            std::to_string(width) + ")");
}

ModulusFn ModulusFn::table(std::vector<std::uint64_t> values) {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1])
            throw PreconditionError("modulus table decreases at n=" + std::to_string(i));
    const auto size = values.size();
    auto out = from_function(
        [v = std::move(values)](std::uint64_t n) {
            if (n >= v.size())
                throw PreconditionError("modulus table has no entry for n=" + std::to_string(n));
            return v[n];
        },
        "table[" + std::to_string(size) + "]");
    out.domain_ = size;
    return out;
}

ModulusFn ModulusFn::from_function(std::function<std::uint64_t(std::uint64_t)> f,
                                   std::string description) {
    ModulusFn out;
    out.f_ = std::move(f);
    out.description_ = std::move(description);
    return out;
}

SpeedupIndices speedup_indices(const ApproxSequence& seq, const Dyadic& rho) {
    require_limit(seq);
    require_rho(rho);
    const Dyadic& x = *seq.known_limit;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        if (n > 0 && !(seq.values[n - 1] < seq.values[n]))
            throw PreconditionError("sequence is not increasing at n=" + std::to_string(n));
        if (!(seq.values[n] < x))
            throw PreconditionError("known limit does not exceed x_" + std::to_string(n));
    }
    const mpq_class r = rho.to_rational();
    const mpq_class r_prime = 1 - r;
    SpeedupIndices out;
    for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
        const mpq_class gap = (x - seq.values[n]).to_rational();
        const mpq_class step = (seq.values[n + 1] - seq.values[n]).to_rational();
        const mpq_class rest = (x - seq.values[n + 1]).to_rational();
        if (step / gap >= r) out.ratio_form.push_back(n);
        if (rest / gap <= r_prime) out.prime_form.push_back(n);
    }
    return out;
}

ApproxSequence regain_to_speed(const ApproxSequence& seq) {
    ApproxSequence out;
    out.known_limit = seq.known_limit;
    out.provenance = "regain_to_speed(" + seq.provenance + ")";
    out.values.reserve(seq.size());
    for (std::size_t n = 0; n < seq.size(); ++n) {
        if (n > 0 && seq.values[n] < seq.values[n - 1])
            throw PreconditionError("sequence decreases at n=" + std::to_string(n));
        out.values.push_back(seq.values[n] - Dyadic::pow2(-static_cast<std::int64_t>(n)));
    }
    return out;
}

std::vector<RatioAt> regaining_ratios(const ApproxSequence& seq) {
    require_limit(seq);
    const Dyadic& x = *seq.known_limit;
    const auto y = regain_to_speed(seq);
    std::vector<RatioAt> out;
    for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
        if (!(x - seq.values[n]).less_than_pow2(-static_cast<std::int64_t>(n))) continue;
        const mpq_class num = (y.values[n + 1] - y.values[n]).to_rational();
        const mpq_class den = (x - y.values[n]).to_rational();
        out.push_back(RatioAt{n, num / den});
    }
    return out;
}

ModulusFn lower_inverse(const ModulusFn& f) {
    return ModulusFn::from_function(
        [f](std::uint64_t n) -> std::uint64_t {
            if (f(0) > n) return 0;
            std::uint64_t k = 0;
            while (f(k + 1) <= n)
                if (++k > kInverseSearchCap)
                    throw PreconditionError("modulus stays at or below " + std::to_string(n) +
                                            " past n=" + std::to_string(kInverseSearchCap) +
                                            "; it must be unbounded");
            return k;
        },
        "lower_inverse(" + f.description() + ")");
}

SpeedToRegain speed_to_regain(const ModulusFn& f, const Dyadic& rho, std::uint64_t budget) {
    require_rho(rho);
    SpeedToRegain out{lower_inverse(f), 0, ModulusFn(), std::nullopt, 0};
    // Minimal k with 1 ≤ ρ·2^k.
    while ((rho * Dyadic::pow2(static_cast<std::int64_t>(out.k))) < Dyadic(1)) ++out.k;
    const auto g = out.g;
    const auto k = out.k;
    out.h = ModulusFn::from_function(
        [g, k](std::uint64_t n) { return g(n) > k ? g(n) - k : 0; },
        "max(0, g(n)-" + std::to_string(k) + ")");
    const std::uint64_t start = f(0);
    for (std::uint64_t i = start; i < start + budget; ++i) {
        ++out.budget;
        if (g(i) >= k) {
            out.m = i;
            break;
        }
    }
    return out;
}

std::vector<std::size_t> certify_regaining(const ApproxSequence& seq, const ModulusFn& h) {
    require_limit(seq);
    const Dyadic& x = *seq.known_limit;
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < seq.size(); ++n)
        if (x - seq.values[n] <= Dyadic::pow2(-static_cast<std::int64_t>(h(n)))) out.push_back(n);
    return out;
}

GapBoundReport modulus_to_gapbound(const ModulusFn& f, const ApproxSequence& seq) {
    require_limit(seq);
    const Dyadic& x = *seq.known_limit;
    const std::size_t N = seq.size();
    for (std::uint64_t n = 0; n < N + 64; ++n) {
        const std::uint64_t from = f(n);
        if (from >= N) break;
        const Dyadic bound = Dyadic::pow2(-static_cast<std::int64_t>(n));
        for (std::size_t j = from; j < N; ++j) {
            Dyadic d = x - seq.values[j];
            if (d.sign() < 0) d = -d;
            if (!(d < bound)) {
                std::ostringstream msg;
                msg << "f is not a modulus: n=" << n << ", j=" << j << ", |x - x_j| = "
                    << d.to_string() << " is not below 2^-" << n;
                throw PreconditionError(msg.str());
            }
        }
    }
    const auto g = lower_inverse(f);
    GapBoundReport out;
    for (std::size_t n = f(0); n + 1 < N; ++n) {
        ++out.checked;
        const Dyadic gap = seq.values[n + 1] - seq.values[n];
        if (gap.sign() <= 0) continue;
        if (!gap.less_than_pow2(-static_cast<std::int64_t>(g(n)))) {
            out.violation = n;
            break;
        }
    }
    return out;
}

ApproxSequence geometric_sequence(std::uint64_t rate, std::size_t length) {
    ApproxSequence out;
    out.known_limit = Dyadic(1);
    out.provenance = "geometric(rate=" + std::to_string(rate) + ")";
    for (std::size_t n = 0; n < length; ++n)
        out.values.push_back(Dyadic(1) - Dyadic::pow2(-static_cast<std::int64_t>(rate * n)));
    return out;
}

ApproxSequence jump_sequence(const std::vector<std::int64_t>& exponents, std::int64_t tail) {
    ApproxSequence out;
    out.provenance = "jumps";
    Dyadic x;
    out.values.push_back(x);
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        x += Dyadic::pow2(-exponents[i]);
        if (i + 1 < exponents.size()) out.values.push_back(x);
    }
    out.known_limit = x + Dyadic::pow2(-tail);
    return out;
}

void write_modulus_csv(std::ostream& out, const ModulusFn& f, std::uint64_t count) {
    out << "n,f\n";
    for (std::uint64_t n = 0; n < count; ++n) out << n << ',' << f(n) << '\n';
}

ModulusFn read_modulus_csv(std::istream& in) {
    std::vector<std::uint64_t> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (lineno == 1 && line.rfind("n,", 0) == 0)) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(lineno, "expected n,f");
        try {
            const auto n = std::stoull(line.substr(0, comma));
            if (n != values.size()) throw ParseError(lineno, "rows must be consecutive from 0");
            values.push_back(std::stoull(line.substr(comma + 1)));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(lineno, "expected non-negative integers");
        }
    }
    return ModulusFn::table(std::move(values));
}

}  // namespace injurybench
