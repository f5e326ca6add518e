#include "qtw/lweights.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qtw {

// ---------------------------------------------------------------- SpectralParam

CycloRational SpectralParam::value() const {
    return CycloRational::s_pow(twice_n) * CycloRational(CycloNum::root_of_unity(m, kL));
}

std::string SpectralParam::str(int L) const {
    if (L <= 0 || kL % L != 0) throw LWeightError("bad root-of-unity order " + std::to_string(L));
    int step = kL / L;
    if (m % step != 0) L = kL, step = 1;
    std::string out;
    if (twice_n != 0) out = "q^{" + n().str() + "}";
    if (m != 0) {
        if (!out.empty()) out += "*";
        out += "w^{" + std::to_string(m / step) + "}";
    }
    return out.empty() ? "1" : out;
}

namespace {

std::string strip(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
}

// Exponent after '^', with or without braces or parentheses; absent means 1.
std::string exponent_text(const std::string& tok, std::size_t pos) {
    if (pos >= tok.size()) return "1";
    if (tok[pos] != '^') throw LWeightError("expected '^' in '" + tok + "'");
    std::string e = tok.substr(pos + 1);
    if (e.size() >= 2 && ((e.front() == '{' && e.back() == '}') || (e.front() == '(' && e.back() == ')')))
        e = e.substr(1, e.size() - 2);
    if (e.empty()) throw LWeightError("empty exponent in '" + tok + "'");
    return e;
}

}  // namespace

SpectralParam SpectralParam::parse(const std::string& text, int L) {
    if (L <= 0 || kL % L != 0) throw LWeightError("bad root-of-unity order " + std::to_string(L));
    std::string s = strip(text);
    SpectralParam out;
    if (!s.empty() && s[0] == '-') {
        out = out * minus_one();
        s = s.substr(1);
    }
    if (s.empty()) throw LWeightError("empty spectral parameter");
    std::stringstream ss(s);
    std::string tok;
    try {
        while (std::getline(ss, tok, '*')) {
            if (tok.empty()) throw LWeightError("empty factor in '" + text + "'");
            if (tok == "1") continue;
            if (tok[0] == 'q') {
                out = out * q_pow(HalfInt::parse(exponent_text(tok, 1)));
            } else if (tok[0] == 'w') {
                out = out * SpectralParam(0, std::stol(exponent_text(tok, 1)) * (kL / L));
            } else {
                throw LWeightError("unexpected factor '" + tok + "' in spectral parameter '" + text + "'");
            }
        }
    } catch (const FieldError& e) {
        throw LWeightError(std::string("bad spectral parameter '") + text + "': " + e.what());
    } catch (const std::invalid_argument&) {
        throw LWeightError("bad spectral parameter '" + text + "'");
    }
    return out;
}

// ---------------------------------------------------------------- Frame

namespace {

std::vector<std::vector<Rat>> rational_inverse(const IntMatrix& m) {
    std::size_t n = m.size();
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw LWeightError("singular root pairing");
        std::swap(a[p], a[c]);
        Rat inv = 1 / a[c][c];
        for (auto& x : a[c]) x *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rat f = a[r][c];
            for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<std::vector<Rat>> out(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
    return out;
}

}  // namespace

FramePtr Frame::ade(const TwistedType& t) {
    auto f = std::make_shared<Frame>();
    f->type = t;
    f->twisted = false;
    f->slots = t.rank;
    f->B = t.C;
    f->B_inv = rational_inverse(f->B);
    return f;
}

FramePtr Frame::folded(const TwistedType& t) {
    auto f = std::make_shared<Frame>();
    f->type = t;
    f->twisted = true;
    f->slots = t.num_orbits();
    f->B.assign(f->slots, std::vector<int>(f->slots));
    for (int i = 0; i < f->slots; ++i)
        for (int j = 0; j < f->slots; ++j) f->B[i][j] = t.B(i, j);
    f->B_inv = rational_inverse(f->B);
    return f;
}

std::string Frame::label(int slot) const {
    return twisted ? type.orbit_label(slot) : std::to_string(slot + 1);
}

int Frame::parse_label(const std::string& label) const {
    if (twisted) {
        int o = type.parse_orbit(label);
        if (o == type.eps()) throw LWeightError("the affine node has no l-weight component");
        return o;
    }
    try {
        int node = std::stoi(label) - 1;
        if (node >= 0 && node < slots) return node;
    } catch (const std::exception&) {
    }
    throw LWeightError("unknown node label '" + label + "'");
}

// ---------------------------------------------------------------- LWeight

bool LWeight::is_constant() const {
    return std::all_of(roots.begin(), roots.end(), [](const Factors& f) { return f.empty(); });
}

bool LWeight::is_identity() const {
    return is_constant() && std::all_of(sexp.begin(), sexp.end(), [](long e) { return e == 0; });
}

void LWeight::add_root(int slot, SpectralParam a, long mult) {
    if (mult == 0) return;
    Factors& f = roots[slot];
    auto it = std::lower_bound(f.begin(), f.end(), a, [](const auto& x, const SpectralParam& b) { return x.first < b; });
    if (it != f.end() && it->first == a) {
        it->second += mult;
        if (it->second == 0) f.erase(it);
    } else {
        f.insert(it, {a, mult});
    }
}

LWeight LWeight::inverse() const { return pow(-1); }

LWeight LWeight::pow(long k) const {
    if (k == 0) return LWeight(slots());
    LWeight out = *this;
    for (auto& e : out.sexp) e *= k;
    for (auto& f : out.roots)
        for (auto& r : f) r.second *= k;
    return out;
}

LWeight LWeight::shifted(SpectralParam a) const {
    LWeight out = *this;
    for (auto& f : out.roots) {
        for (auto& r : f) r.first = r.first * a;
        std::sort(f.begin(), f.end());
    }
    return out;
}

LWeight LWeight::constant_part() const {
    LWeight out(slots());
    out.sexp = sexp;
    return out;
}

LWeight& LWeight::operator*=(const LWeight& o) {
    if (o.slots() != slots()) throw LWeightError("l-weights of different frames");
    for (int i = 0; i < slots(); ++i) {
        sexp[i] += o.sexp[i];
        if (roots[i].empty()) {
            roots[i] = o.roots[i];
            continue;
        }
        if (o.roots[i].empty()) continue;
        Factors merged;
        merged.reserve(roots[i].size() + o.roots[i].size());
        auto a = roots[i].cbegin();
        auto b = o.roots[i].cbegin();
        while (a != roots[i].end() || b != o.roots[i].end()) {
            if (b == o.roots[i].end() || (a != roots[i].end() && a->first < b->first)) {
                merged.push_back(*a++);
            } else if (a == roots[i].end() || b->first < a->first) {
                merged.push_back(*b++);
            } else {
                long m = a->second + b->second;
                if (m != 0) merged.push_back({a->first, m});
                ++a, ++b;
            }
        }
        roots[i] = std::move(merged);
    }
    return *this;
}

std::vector<CycloRational> LWeight::series(int slot, int order) const {
    std::vector<CycloRational> c(order + 1);
    c[0] = CycloRational::s_pow(sexp[slot]);
    for (const auto& [a, mult] : roots[slot]) {
        CycloRational av = a.value();
        long reps = std::abs(mult);
        for (long r = 0; r < reps; ++r) {
            if (mult > 0) {
                for (int k = order; k >= 1; --k) c[k] -= av * c[k - 1];
            } else {
                for (int k = 1; k <= order; ++k) c[k] += av * c[k - 1];
            }
        }
    }
    return c;
}

std::string LWeight::str(const Frame& f) const {
    std::string out;
    int L = f.display_L();
    for (int i = 0; i < slots(); ++i) {
        if (sexp[i] == 0 && roots[i].empty()) continue;
        if (!out.empty()) out += " ";
        out += f.label(i) + ":[q^{" + HalfInt::from_twice(sexp[i]).str() + "}";
        for (const auto& [a, m] : roots[i]) out += " (1-" + a.str(L) + "u)^" + std::to_string(m);
        out += "]";
    }
    return out.empty() ? "1" : out;
}

LWeight identity_weight(const Frame& f) { return LWeight(f.slots); }

LWeight constant_weight(std::vector<long> e) {
    LWeight w(static_cast<int>(e.size()));
    w.sexp = std::move(e);
    return w;
}

LWeight alpha_half(const Frame& f, int i, long k) {
    LWeight w(f.slots);
    for (int j = 0; j < f.slots; ++j) w.sexp[j] = k * f.B[i][j];
    return w;
}

LWeight fundamental_weight(const Frame& f, int i) {
    return frame_Z(f, i, SpectralParam()).constant_part();
}

LWeight make_Y(const Frame& ade, int node, SpectralParam a) {
    LWeight w(ade.slots);
    w.sexp[node] = 2;
    w.add_root(node, a * SpectralParam::q_pow(-1), 1);
    w.add_root(node, a * SpectralParam::q_pow(1), -1);
    return w;
}

LWeight make_A_ade(const Frame& ade, int node, SpectralParam a) {
    LWeight w = make_Y(ade, node, a * SpectralParam::q_pow(1)) * make_Y(ade, node, a * SpectralParam::q_pow(-1));
    for (int j = 0; j < ade.slots; ++j)
        if (ade.type.C[node][j] == -1) w *= make_Y(ade, j, a).inverse();
    return w;
}

LWeight make_psi_ade(const Frame& ade, int node, SpectralParam a, int sign) {
    LWeight w(ade.slots);
    w.add_root(node, a, sign >= 0 ? 1 : -1);
    return w;
}

LWeight make_psi_tilde_ade(const Frame& ade, int node, SpectralParam a) {
    LWeight w = make_psi_ade(ade, node, a, -1);
    for (int j = 0; j < ade.slots; ++j)
        if (ade.type.C[node][j] == -1) w *= make_psi_ade(ade, j, a * SpectralParam::q_pow(1), +1);
    return w;
}

LWeight fold_weight(const Frame& folded, const LWeight& w) {
    const TwistedType& t = folded.type;
    if (w.slots() != t.rank) throw LWeightError("fold expects a node-indexed l-weight");
    LWeight out(t.num_orbits());
    SpectralParam om = SpectralParam::omega(t.M);
    for (int o = 0; o < t.num_orbits(); ++o)
        for (int r = 0; r < t.M; ++r) {
            int node = t.sigma_pow(t.rep[o], r);
            out.sexp[o] += w.sexp[node];
            for (const auto& [a, m] : w.roots[node]) out.add_root(o, a * om.pow(r), m);
        }
    return out;
}

namespace {

const Frame& unfolded(const Frame& tw) {
    thread_local std::map<std::string, FramePtr> cache;
    auto& slot = cache[tw.type.name];
    if (!slot) slot = Frame::ade(tw.type);
    return *slot;
}

void require_twisted(const Frame& f) {
    if (!f.twisted) throw LWeightError("twisted constructor used on a non-twisted frame");
}

}  // namespace

LWeight make_Z(const Frame& tw, int orbit, SpectralParam a) {
    require_twisted(tw);
    return fold_weight(tw, make_Y(unfolded(tw), tw.type.rep[orbit], a));
}

LWeight make_A(const Frame& tw, int orbit, SpectralParam a) {
    require_twisted(tw);
    return fold_weight(tw, make_A_ade(unfolded(tw), tw.type.rep[orbit], a));
}

LWeight make_psi(const Frame& tw, int orbit, SpectralParam a, int sign) {
    require_twisted(tw);
    return fold_weight(tw, make_psi_ade(unfolded(tw), tw.type.rep[orbit], a, sign));
}

LWeight make_psi_tilde(const Frame& tw, int orbit, SpectralParam a) {
    require_twisted(tw);
    return fold_weight(tw, make_psi_tilde_ade(unfolded(tw), tw.type.rep[orbit], a));
}

LWeight frame_Z(const Frame& f, int slot, SpectralParam a) {
    return f.twisted ? make_Z(f, slot, a) : make_Y(f, slot, a);
}

LWeight frame_A(const Frame& f, int slot, SpectralParam a) {
    return f.twisted ? make_A(f, slot, a) : make_A_ade(f, slot, a);
}

LWeight frame_psi(const Frame& f, int slot, SpectralParam a, int sign) {
    return f.twisted ? make_psi(f, slot, a, sign) : make_psi_ade(f, slot, a, sign);
}

LWeight frame_psi_tilde(const Frame& f, int slot, SpectralParam a) {
    return f.twisted ? make_psi_tilde(f, slot, a) : make_psi_tilde_ade(f, slot, a);
}

bool twist_condition(const Frame& f, const LWeight& w) {
    if (w.slots() != f.slots) return false;
    if (!f.twisted) return true;
    SpectralParam om = SpectralParam::omega(f.type.M);
    for (int o = 0; o < f.slots; ++o) {
        if (!f.type.fixed(o)) continue;
        for (const auto& [a, m] : w.roots[o]) {
            auto& fac = w.roots[o];
            auto it = std::lower_bound(fac.begin(), fac.end(), a * om,
                                       [](const auto& x, const SpectralParam& b) { return x.first < b; });
            if (it == fac.end() || it->first != a * om || it->second != m) return false;
        }
    }
    return true;
}

std::vector<long> varpi(const LWeight& w) { return w.sexp; }

std::optional<std::vector<long>> height_between(const Frame& f, const std::vector<long>& hi,
                                                const std::vector<long>& lo) {
    // hi_j - lo_j = sum_i n_i 2 B_ij  (s-exponents)
    std::vector<long> n(f.slots);
    for (int i = 0; i < f.slots; ++i) {
        Rat x = 0;
        for (int j = 0; j < f.slots; ++j) x += Rat(hi[j] - lo[j]) * f.B_inv[j][i];
        x /= 2;
        if (x.get_den() != 1 || x < 0) return std::nullopt;
        n[i] = x.get_num().get_si();
    }
    return n;
}

std::optional<std::vector<long>> height_between(const Frame& f, const LWeight& hi, const LWeight& lo) {
    return height_between(f, hi.sexp, lo.sexp);
}

// ---------------------------------------------------------------- QCharacter

namespace {

long total(const std::vector<long>& n) { return std::accumulate(n.begin(), n.end(), 0L); }

std::optional<int> min_trunc(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

}  // namespace

QCharacter::QCharacter(FramePtr f, std::vector<long> top, std::optional<int> trunc)
    : frame_(std::move(f)), top_(std::move(top)), trunc_(trunc) {
    if (trunc_ && *trunc_ < 0) throw LWeightError("negative truncation height");
}

QCharacter QCharacter::zero(FramePtr f) { return QCharacter(std::move(f), {}, std::nullopt); }

QCharacter QCharacter::term(FramePtr f, const LWeight& w, long mult, std::optional<int> trunc) {
    QCharacter c(std::move(f), w.sexp, trunc);
    c.add(w, mult);
    return c;
}

void QCharacter::add(const LWeight& w, long k) {
    if (k == 0) return;
    auto [it, fresh] = terms_.try_emplace(w, k);
    if (!fresh) {
        it->second += k;
        if (it->second == 0) terms_.erase(it);
    }
}

long QCharacter::height_of(const LWeight& w) const {
    if (top_.empty()) return 0;
    auto n = height_between(*frame_, top_, w.sexp);
    if (!n) throw LWeightError("term " + w.str(*frame_) + " is not below the leading weight");
    return total(*n);
}

void QCharacter::insert(const LWeight& w, long k) {
    if (top_.empty()) top_ = w.sexp;
    if (trunc_ && height_of(w) > *trunc_) return;
    add(w, k);
}

long QCharacter::multiplicity(const LWeight& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? 0 : it->second;
}

long QCharacter::total_multiplicity() const {
    long s = 0;
    for (const auto& [w, k] : terms_) s += k;
    return s;
}

QCharacter QCharacter::truncated(int h) const {
    QCharacter out(frame_, top_, min_trunc(trunc_, h));
    for (const auto& [w, k] : terms_)
        if (height_of(w) <= *out.trunc_) out.add(w, k);
    return out;
}

QCharacter QCharacter::with_top(const std::vector<long>& top) const {
    if (top_.empty()) return QCharacter(frame_, top, trunc_);
    auto n = height_between(*frame_, top, top_);
    if (!n) throw LWeightError("new leading weight is not above the old one");
    std::optional<int> t = trunc_ ? std::optional<int>(*trunc_ + static_cast<int>(total(*n))) : std::nullopt;
    QCharacter out(frame_, top, t);
    out.terms_ = terms_;
    return out;
}

QCharacter& QCharacter::operator+=(const QCharacter& o) {
    if (!frame_) frame_ = o.frame_;
    if (o.top_.empty() && o.terms_.empty()) {
        if (o.trunc_) *this = truncated(*o.trunc_);
        return *this;
    }
    if (top_.empty() && terms_.empty()) {
        std::optional<int> t = min_trunc(trunc_, o.trunc_);
        *this = t ? o.truncated(*t) : o;
        return *this;
    }
    const auto* hi = &top_;
    if (top_ != o.top_) {
        if (height_between(*frame_, o.top_, top_)) {
            hi = &o.top_;
        } else if (!height_between(*frame_, top_, o.top_)) {
            if (trunc_ || o.trunc_) throw LWeightError("adding truncated characters with incomparable leading weights");
        }
    }
    std::vector<long> top = *hi;
    QCharacter a = with_top(top), b = o.with_top(top);
    std::optional<int> t = min_trunc(a.trunc_, b.trunc_);
    trunc_ = t;
    top_ = top;
    terms_.clear();
    for (const auto* src : {&a, &b})
        for (const auto& [w, k] : src->terms_)
            if (!t || height_of(w) <= *t) add(w, k);
    return *this;
}

QCharacter& QCharacter::operator-=(const QCharacter& o) { return *this += o.scaled(-1); }

QCharacter QCharacter::scaled(long k) const {
    QCharacter out(frame_, top_, trunc_);
    if (k != 0)
        for (const auto& [w, m] : terms_) out.terms_.emplace(w, m * k);
    return out;
}

QCharacter operator*(const QCharacter& a, const QCharacter& b) {
    FramePtr f = a.frame_ ? a.frame_ : b.frame_;
    if (a.top_.empty() || b.top_.empty()) return QCharacter(f, {}, min_trunc(a.trunc_, b.trunc_));
    std::vector<long> top(a.top_.size());
    for (std::size_t i = 0; i < top.size(); ++i) top[i] = a.top_[i] + b.top_[i];
    QCharacter out(f, top, min_trunc(a.trunc_, b.trunc_));
    auto heights = [](const QCharacter& c) {
        std::vector<std::pair<long, const std::pair<const LWeight, long>*>> v;
        for (const auto& t : c.terms_) v.push_back({c.height_of(t.first), &t});
        return v;
    };
    bool exact = !out.trunc_;
    auto ha = heights(a), hb = heights(b);
    for (const auto& [h1, t1] : ha)
        for (const auto& [h2, t2] : hb) {
            if (!exact && h1 + h2 > *out.trunc_) continue;
            out.add(t1->first * t2->first, t1->second * t2->second);
        }
    return out;
}

QCharacter QCharacter::operator*(const LWeight& w) const {
    QCharacter out(frame_, top_, trunc_);
    if (!top_.empty())
        for (std::size_t i = 0; i < top_.size(); ++i) out.top_[i] += w.sexp[i];
    for (const auto& [x, k] : terms_) out.terms_.emplace(x * w, k);
    return out;
}

bool QCharacter::window_equal(const QCharacter& o) const { return !first_difference(o).has_value(); }

std::optional<std::pair<LWeight, std::pair<long, long>>> QCharacter::first_difference(const QCharacter& o) const {
    QCharacter a = *this, b = o;
    if (a.top_.empty()) a.top_ = b.top_;
    if (b.top_.empty()) b.top_ = a.top_;
    if (!a.top_.empty() && a.top_ != b.top_) {
        // align to the higher of the two leading weights
        if (height_between(*frame_, b.top_, a.top_)) a = a.with_top(b.top_);
        else if (height_between(*frame_, a.top_, b.top_)) b = b.with_top(a.top_);
        else throw LWeightError("comparing characters with incomparable leading weights");
    }
    std::optional<int> t = min_trunc(a.trunc_, b.trunc_);
    if (t) {
        a = a.truncated(*t);
        b = b.truncated(*t);
    }
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
        if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first))
            return std::make_pair(ia->first, std::make_pair(ia->second, 0L));
        if (ia == a.terms_.end() || ib->first < ia->first)
            return std::make_pair(ib->first, std::make_pair(0L, ib->second));
        if (ia->second != ib->second) return std::make_pair(ia->first, std::make_pair(ia->second, ib->second));
        ++ia, ++ib;
    }
    return std::nullopt;
}

QCharacter QCharacter::usual() const {
    QCharacter out(frame_, top_, trunc_);
    for (const auto& [w, k] : terms_) out.add(w.constant_part(), k);
    return out;
}

QCharacter QCharacter::inverse(std::optional<int> trunc) const {
    std::optional<int> t = min_trunc(trunc_, trunc);
    if (!t) throw LWeightError("inverse of an exact character needs a truncation height");
    if (top_.empty()) throw LWeightError("inverse of zero");
    std::optional<LWeight> lead;
    long c = 0;
    for (const auto& [w, k] : terms_) {
        if (height_of(w) != 0) continue;
        if (lead) throw LWeightError("inverse needs a single leading term");
        lead = w;
        c = k;
    }
    if (!lead || (c != 1 && c != -1)) throw LWeightError("inverse needs leading coefficient +-1");
    // x = c [lead] (1 - r), x^{-1} = c [lead]^{-1} sum_k r^k
    QCharacter r = (*this * lead->inverse()).scaled(c).truncated(*t);
    r = QCharacter::term(frame_, identity_weight(*frame_), 1, *t) - r;
    QCharacter sum = QCharacter::term(frame_, identity_weight(*frame_), 1, *t);
    QCharacter power = sum;
    for (int k = 1; k <= *t; ++k) {
        power = power * r;
        sum += power;
    }
    return (sum * lead->inverse()).scaled(c);
}

nlohmann::json QCharacter::to_json() const {
    const Frame& f = *frame_;
    int L = f.display_L();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [w, k] : terms_) {
        nlohmann::json pre = nlohmann::json::object(), fac = nlohmann::json::object();
        for (int i = 0; i < w.slots(); ++i) {
            pre[f.label(i)] = HalfInt::from_twice(w.sexp[i]).str();
            nlohmann::json rs = nlohmann::json::array();
            for (const auto& [a, m] : w.roots[i]) {
                int step = SpectralParam::kL / L;
                int mm = a.m % step == 0 ? a.m / step : a.m;
                rs.push_back(nlohmann::json::array({a.n().str(), mm, m}));
            }
            fac[f.label(i)] = rs;
        }
        terms.push_back({{"prefactor", pre}, {"roots", fac}, {"multiplicity", k}});
    }
    nlohmann::json out;
    out["type"] = f.type.name;
    out["twisted"] = f.twisted;
    out["root_of_unity_order"] = L;
    out["trunc"] = trunc_ ? nlohmann::json(*trunc_) : nlohmann::json(nullptr);
    out["terms"] = terms;
    return out;
}

std::string QCharacter::str() const {
    std::string out;
    for (const auto& [w, k] : terms_) {
        if (!out.empty()) out += "\n";
        out += std::to_string(k) + " * " + w.str(*frame_);
    }
    if (trunc_) out += (out.empty() ? "" : "\n") + std::string("+ O(height > ") + std::to_string(*trunc_) + ")";
    return out.empty() ? "0" : out;
}

QCharacter fold_char(const FramePtr& folded, const QCharacter& c) {
    if (!folded->twisted) throw LWeightError("fold target must be a twisted frame");
    std::vector<long> top;
    if (!c.top().empty()) top = fold_weight(*folded, constant_weight(c.top())).sexp;
    QCharacter out(folded, top, c.trunc());
    for (const auto& [w, k] : c.terms()) out.add(fold_weight(*folded, w), k);
    return out;
}

}  // namespace qtw
