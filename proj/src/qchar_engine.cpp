#include "qtw/qchar_engine.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace qtw {

namespace {

using YMon = YMonomial;

void bump(YMon& m, int node, SpectralParam a, long e) {
    auto [it, fresh] = m.try_emplace({node, a}, e);
    if (!fresh) {
        it->second += e;
        if (it->second == 0) m.erase(it);
    }
}

void times_A_inverse(YMon& m, const Frame& ade, int node, SpectralParam b) {
    bump(m, node, b * SpectralParam::q_pow(1), -1);
    bump(m, node, b * SpectralParam::q_pow(-1), -1);
    for (int j = 0; j < ade.slots; ++j)
        if (ade.type.C[node][j] == -1) bump(m, j, b, 1);
}

bool dominant_at(const YMon& m, int node) {
    for (const auto& [key, e] : m)
        if (key.first == node && e < 0) return false;
    return true;
}

// sl2 strings of the Y_{node,*} part: each is a list of A^{-1} parameters in the order they are applied.
std::vector<std::vector<SpectralParam>> string_steps(const YMon& m, int node) {
    // residue class: (twice_n mod 4, m)
    std::map<std::pair<long, int>, std::map<long, long>> classes;
    for (const auto& [key, e] : m) {
        if (key.first != node || e <= 0) continue;
        long r = ((key.second.twice_n % 4) + 4) % 4;
        classes[{r, key.second.m}][key.second.twice_n] += e;
    }
    std::vector<std::vector<SpectralParam>> out;
    for (auto& [cls, pts] : classes) {
        while (!pts.empty()) {
            // one connected run of the support, one copy from each point
            std::vector<long> run;
            long start = pts.begin()->first;
            for (long t = start; pts.count(t); t += 4) run.push_back(t);
            for (long t : run)
                if (--pts[t] == 0) pts.erase(t);
            std::vector<SpectralParam> steps;
            for (auto it = run.rbegin(); it != run.rend(); ++it) steps.push_back(SpectralParam(*it + 2, cls.second));
            out.push_back(std::move(steps));
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

LWeight ymonomial_weight(const Frame& ade, const YMonomial& m) {
    LWeight w(ade.slots);
    for (const auto& [key, e] : m) w *= make_Y(ade, key.first, key.second).pow(e);
    return w;
}

LWeight DominantMonomial::weight(const Frame& f) const {
    LWeight w = identity_weight(f);
    for (const auto& [slot, a] : factors) w *= frame_Z(f, slot, a);
    return w;
}

std::string DominantMonomial::str(const Frame& f) const {
    std::string out;
    char sym = f.twisted ? 'Z' : 'Y';
    for (const auto& [slot, a] : factors) {
        if (!out.empty()) out += "*";
        out += std::string(1, sym) + "[" + f.label(slot) + "," + a.str(f.display_L()) + "]";
    }
    return out.empty() ? "1" : out;
}

DominantMonomial DominantMonomial::parse(const std::string& text, const Frame& f) {
    DominantMonomial out;
    std::string s = trim(text);
    if (s == "1" || s.empty()) return out;
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        throw QCharError("monomial '" + text + "' at column " + std::to_string(pos + 1) + ": " + why);
    };
    while (pos < s.size()) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size() || (s[pos] != 'Z' && s[pos] != 'Y')) fail("expected Z[...] or Y[...]");
        ++pos;
        if (pos >= s.size() || s[pos] != '[') fail("expected '['");
        auto close = s.find(']', pos);
        auto comma = s.find(',', pos);
        if (close == std::string::npos || comma == std::string::npos || comma > close) fail("expected [label,param]");
        int slot;
        SpectralParam a;
        try {
            slot = f.parse_label(trim(s.substr(pos + 1, comma - pos - 1)));
            a = SpectralParam::parse(s.substr(comma + 1, close - comma - 1), f.display_L());
        } catch (const std::exception& e) {
            fail(e.what());
        }
        pos = close + 1;
        long power = 1;
        if (pos < s.size() && s[pos] == '^') {
            std::size_t used = 0;
            try {
                power = std::stol(s.substr(pos + 1), &used);
            } catch (const std::exception&) {
                fail("bad exponent");
            }
            if (power <= 0) fail("exponents of a dominant monomial must be positive");
            pos += 1 + used;
        }
        for (long k = 0; k < power; ++k) out.factors.push_back({slot, a});
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos < s.size()) {
            if (s[pos] != '*') fail("expected '*'");
            ++pos;
        }
    }
    return out;
}

DominantMonomial kr_monomial(int slot, int k, SpectralParam a) {
    if (k < 1) throw QCharError("KR length must be positive");
    DominantMonomial m;
    for (int r = 0; r < k; ++r) m.factors.push_back({slot, a * SpectralParam::q_pow(2 * r)});
    return m;
}

std::vector<std::pair<YMonomial, long>> fm_expand(const FramePtr& ade, const DominantMonomial& m, int trunc,
                                                  std::size_t budget) {
    if (ade->twisted) throw QCharError("monomial expansion runs in the non-twisted frame");
    if (trunc < 0) throw QCharError("negative truncation height");
    const int n = ade->slots;
    struct Info {
        long s = 0;
        std::vector<long> col;
    };
    std::vector<std::map<YMon, Info>> levels(trunc + 1);
    YMon top;
    for (const auto& [slot, a] : m.factors) bump(top, slot, a, 1);
    levels[0][top] = Info{1, std::vector<long>(n, 0)};
    std::size_t count = 1;

    for (int h = 0; h <= trunc; ++h) {
        for (auto& [mon, info] : levels[h]) {
            if (h > 0) info.s = *std::max_element(info.col.begin(), info.col.end());
            for (int i = 0; i < n; ++i) {
                long need = info.s - info.col[i];
                if (need <= 0) continue;
                if (!dominant_at(mon, i))
                    throw QCharError("monomial expansion is not consistent at node " + ade->label(i));
                auto strings = string_steps(mon, i);
                // enumerate r_s in [0, len_s] with sum <= trunc - h
                std::vector<std::size_t> r(strings.size(), 0);
                int room = trunc - h;
                while (true) {
                    std::size_t k = 0;
                    int total = 0;
                    for (auto x : r) total += static_cast<int>(x);
                    if (total > 0) {
                        YMon next = mon;
                        for (std::size_t s = 0; s < strings.size(); ++s)
                            for (std::size_t t = 0; t < r[s]; ++t) times_A_inverse(next, *ade, i, strings[s][t]);
                        auto [it, fresh] = levels[h + total].try_emplace(std::move(next));
                        if (fresh) {
                            it->second.col.assign(n, 0);
                            if (++count > budget)
                                throw ResourceError("monomial budget of " + std::to_string(budget) + " exceeded");
                        }
                        it->second.col[i] += need;
                    }
                    // odometer step, skipping combinations above the window
                    for (k = 0; k < r.size(); ++k) {
                        if (r[k] < strings[k].size() && total < room) {
                            ++r[k];
                            break;
                        }
                        total -= static_cast<int>(r[k]);
                        r[k] = 0;
                    }
                    if (k == r.size()) break;
                }
                info.col[i] = info.s;
            }
        }
    }
    std::vector<std::pair<YMonomial, long>> out;
    for (auto& level : levels)
        for (auto& [mon, info] : level) out.emplace_back(mon, info.s);
    return out;
}

QCharacter fm_qcharacter(const FramePtr& ade, const DominantMonomial& m, int trunc, std::size_t budget) {
    auto mons = fm_expand(ade, m, trunc, budget);
    QCharacter out(ade, ymonomial_weight(*ade, mons.front().first).sexp, trunc);
    for (const auto& [mon, k] : mons) out.add(ymonomial_weight(*ade, mon), k);
    return out;
}

QCharacter monomial_qcharacter(const FramePtr& f, const DominantMonomial& m, int trunc, std::size_t budget) {
    if (!f->twisted) return fm_qcharacter(f, m, trunc, budget);
    DominantMonomial lifted;
    for (const auto& [slot, a] : m.factors) lifted.factors.push_back({f->type.rep[slot], a});
    return fold_char(f, fm_qcharacter(Frame::ade(f->type), lifted, trunc, budget));
}

QCharacter kr_qcharacter(const FramePtr& f, int slot, int k, SpectralParam a, int trunc) {
    return monomial_qcharacter(f, kr_monomial(slot, k, a), trunc);
}

QCharacter normalized_kr(const FramePtr& f, int slot, int k, int trunc) {
    DominantMonomial m = kr_monomial(slot, k, SpectralParam::q_pow(-2 * k + 1));
    return monomial_qcharacter(f, m, trunc) * m.weight(*f).inverse();
}

LimitWindow normalized_kr_limit(const FramePtr& f, int slot, int trunc) {
    const int margin = 4;
    QCharacter prev = normalized_kr(f, slot, 1, trunc);
    for (int k = 2; k <= trunc + 1 + margin; ++k) {
        QCharacter cur = normalized_kr(f, slot, k, trunc);
        if (cur.window_equal(prev)) return {cur, k};
        prev = std::move(cur);
    }
    throw QCharError("normalized KR characters did not stabilize");
}

QCharacter neg_prefund_qchar(const FramePtr& f, int slot, SpectralParam a, int trunc, int* stable_k) {
    LimitWindow lim = normalized_kr_limit(f, slot, trunc);
    if (stable_k) *stable_k = lim.stable_k;
    QCharacter out = lim.chi * frame_psi(*f, slot, SpectralParam(), -1);
    if (a == SpectralParam()) return out;
    QCharacter shifted(f, out.top(), out.trunc());
    for (const auto& [w, k] : out.terms()) shifted.add(w.shifted(a), k);
    return shifted;
}

QCharacter pos_prefund_qchar(const FramePtr& f, int slot, SpectralParam a, int trunc) {
    return normalized_kr_limit(f, slot, trunc).chi.usual() * frame_psi(*f, slot, a, +1);
}

QCharacter chi_string(const FramePtr& f, int slot, SpectralParam a, int trunc) {
    LWeight w = identity_weight(*f);
    QCharacter out = QCharacter::term(f, w, 1, trunc);
    for (int r = 1; r <= trunc; ++r) {
        w *= frame_A(*f, slot, a * SpectralParam::q_pow(-2 * (r - 1))).inverse();
        out.add(w, 1);
    }
    return out;
}

QCharacter geometric_alpha(const FramePtr& f, int slot, int trunc) {
    QCharacter out(f, identity_weight(*f).sexp, trunc);
    for (int k = 0; k <= trunc; ++k) out.add(alpha_half(*f, slot, -2 * k), 1);
    return out;
}

QCharacter normalized_X_qchar(const FramePtr& f, int slot, SpectralParam a, int trunc) {
    QCharacter one_minus = QCharacter::term(f, identity_weight(*f), 1, trunc);
    one_minus.add(alpha_half(*f, slot, -2), -1);
    return (chi_string(f, slot, a, trunc) * one_minus) * frame_psi_tilde(*f, slot, a);
}

}  // namespace qtw
