#include "naive_engine.hpp"

#include <map>
#include <optional>
#include <stdexcept>

namespace injurybench::testing {

namespace {

bool lex_before(const std::string& a, const std::string& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (a[i] != b[i]) return a[i] == '0';
    return false;
}

bool strictly_extends(const std::string& anchor, const std::string& tau) {
    return tau.size() > anchor.size() && tau.compare(0, anchor.size(), anchor) == 0;
}

struct Init {
    Stage t;
    std::string anchor;
    bool or_extends;

    bool covers(const std::string& tau) const {
        return lex_before(anchor, tau) || (or_extends && strictly_extends(anchor, tau));
    }
};

Dyadic two_to_minus(const BigNat& k) { return Dyadic::pow2(-static_cast<std::int64_t>(k.get_si())); }

class Naive {
public:
    Naive(EngineKind kind, const PhiRegistry& reg) : a_(kind == EngineKind::A), reg_(reg) {}

    NaiveRun run(Stage stages) {
        NaiveRun out;
        out.x.push_back(Dyadic());
        for (t_ = 0; t_ < stages; ++t_) {
            out.reads.emplace_back();
            stage(out);
        }
        return out;
    }

private:
    // ℓ(e)[t] straight from the definition.
    long ell(std::size_t e, Stage t) {
        const auto key = std::make_pair(e, t);
        if (auto it = ell_.find(key); it != ell_.end()) return it->second;
        long l = -1;
        std::optional<std::uint64_t> prev;
        for (std::uint64_t k = 0; k <= t; ++k) {
            const auto v = reg_.step(static_cast<Index>(e), k, t);
            if (!v || (prev && *v <= *prev)) break;
            prev = v;
            l = static_cast<long>(k);
        }
        return ell_[key] = l;
    }

    NaiveParams get(const std::string& s) const {
        if (auto it = now_.find(s); it != now_.end()) return it->second;
        NaiveParams p;
        p.w = naive_nu(s);
        for (auto it = inits_.rbegin(); it != inits_.rend(); ++it) {
            if (it->covers(s)) {
                p.w += it->t + 2;
                break;
            }
        }
        return p;
    }

    NaiveParams get_next(const std::string& s) const {
        if (auto it = next_.find(s); it != next_.end()) return it->second;
        return get(s);
    }

    NaiveParams& edit_next(const std::string& s) {
        auto it = next_.find(s);
        if (it == next_.end()) it = next_.emplace(s, get(s)).first;
        return it->second;
    }

    Dyadic gap(std::size_t e, const std::vector<Dyadic>& x) {
        const auto l = ell(e, t_);
        const auto idx = reg_.step(static_cast<Index>(e), static_cast<std::uint64_t>(l), t_);
        if (!idx) throw std::logic_error("naive: invisible phi value");
        return x[t_] - x[*idx];
    }

    void stage(NaiveRun& out) {
        next_.clear();
        std::vector<Init> fresh;
        Dyadic jump;
        std::string s;
        for (;;) {
            const std::size_t e = s.size();
            const NaiveParams p = get(s);
            out.reads.back().push_back(NaiveRead{BinStr(s), p});

            if (e == t_) {
                fresh.push_back(Init{t_, s, false});
                break;
            }

            const long l = ell(e, t_);
            const bool threatened =
                p.flag == 0 && l >= 0 && BigNat(l) >= p.w && gap(e, out.x) < two_to_minus(p.w);
            if (threatened) {
                std::optional<std::size_t> g;
                for (std::size_t i = s.size(); i-- > 0;)
                    if (s[i] == '0' && get_next(s.substr(0, i)).r >= p.w) {
                        g = i;
                        break;
                    }
                if (g) {
                    const auto gamma = s.substr(0, *g);
                    const BigNat rg = get_next(gamma).r;
                    BigNat count = 1;
                    count <<= static_cast<mp_bitcnt_t>(BigNat(rg - p.w).get_ui());
                    edit_next(gamma).c = Counter{BinStr(s), count};
                } else {
                    jump = two_to_minus(p.w);
                }
                edit_next(s).flag = 1;
                if (!a_) edit_next(s).w = p.w + 1;
                fresh.push_back(Init{t_, s, a_});
                break;
            }
            if (!a_ && p.flag != 0) edit_next(s).flag = 0;

            const bool expansionary =
                (!a_ || p.flag == 1) && l >= 0 && gap(e, out.x) < two_to_minus(p.r);
            if (!expansionary) {
                s += '1';
                continue;
            }
            if (!p.c) {
                edit_next(s).r = p.r + 1;
                s += '0';
                continue;
            }
            const Counter held = *p.c;
            std::optional<std::size_t> g;
            for (std::size_t i = s.size(); i-- > 0;)
                if (s[i] == '0') {
                    g = i;
                    break;
                }
            if (g) {
                const auto gamma = s.substr(0, *g);
                const BigNat rg = get_next(gamma).r;
                if (rg < p.r) throw std::logic_error("naive: negative delegate exponent");
                BigNat count = 1;
                count <<= static_cast<mp_bitcnt_t>(BigNat(rg - p.r).get_ui());
                edit_next(gamma).c = Counter{held.label, count};
            } else {
                jump = two_to_minus(p.r);
            }
            if (held.count > 1)
                edit_next(s).c = Counter{held.label, held.count - 1};
            else
                edit_next(s).c.reset();
            if (a_)
                fresh.push_back(Init{t_, held.label.bits(), true});
            else
                fresh.push_back(Init{t_, s + "0", false});
            break;
        }

        for (auto& [key, value] : next_) now_[key] = value;
        for (const auto& init : fresh) {
            for (auto& [key, value] : now_) {
                if (!init.covers(key)) continue;
                value.c.reset();
                value.w = naive_nu(key) + init.t + 2;
                if (a_) value.flag = 0;
            }
            inits_.push_back(init);
        }
        out.settled.push_back(BinStr(s));
        out.x.push_back(out.x.back() + jump);
    }

    bool a_;
    const PhiRegistry& reg_;
    Stage t_ = 0;
    std::map<std::string, NaiveParams> now_;
    std::map<std::string, NaiveParams> next_;
    std::vector<Init> inits_;
    std::map<std::pair<std::size_t, Stage>, long> ell_;
};

}  // namespace

BigNat naive_nu(const std::string& bits) {
    BigNat n = 0;
    for (char b : bits) n = 2 * n + 1 + (b == '1' ? 1 : 0);
    return n;
}

NaiveRun naive_run(EngineKind kind, const PhiRegistry& reg, Stage stages) {
    return Naive(kind, reg).run(stages);
}

}  // namespace injurybench::testing
