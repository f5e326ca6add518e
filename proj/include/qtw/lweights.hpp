#pragma once

#include "qtw/root_data.hpp"

#include "json.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qtw {

class LWeightError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The point q^{n/2} * zeta_6^m. Every spectral parameter of a type with M <= 3 lives on this lattice;
// omega = zeta_6^{6/M} and -1 = zeta_6^3.
struct SpectralParam {
    static constexpr int kL = 6;
    long twice_n = 0;
    int m = 0;

    SpectralParam() = default;
    SpectralParam(long twice_n_, long m_) : twice_n(twice_n_), m(static_cast<int>(((m_ % kL) + kL) % kL)) {}
    static SpectralParam q_pow(HalfInt e) { return {e.twice(), 0}; }
    static SpectralParam minus_one() { return {0, kL / 2}; }
    static SpectralParam omega(int M) { return {0, kL / M}; }

    HalfInt n() const { return HalfInt::from_twice(twice_n); }
    SpectralParam inverse() const { return {-twice_n, -m}; }
    SpectralParam pow(long k) const { return {k * twice_n, k * m}; }
    friend SpectralParam operator*(SpectralParam a, SpectralParam b) { return {a.twice_n + b.twice_n, a.m + b.m}; }
    friend auto operator<=>(const SpectralParam&, const SpectralParam&) = default;

    CycloRational value() const;
    // Text form "q^{n/2}*w^{m}" with w a primitive L-th root of unity (L divides 6).
    std::string str(int L = 2) const;
    static SpectralParam parse(const std::string& text, int L = 2);
};

// Weight frame: the index set of an l-weight and the pairing of simple roots with it.
// Non-twisted frames are indexed by the nodes of the simply-laced diagram; twisted frames by orbits,
// an l-weight being stored through its component at the orbit representative.
struct Frame {
    TwistedType type;
    bool twisted = false;
    int slots = 0;
    // [alpha_i](k_j) = q^{B[i][j]}
    IntMatrix B;
    std::vector<std::vector<Rat>> B_inv;

    static std::shared_ptr<const Frame> ade(const TwistedType& t);
    static std::shared_ptr<const Frame> folded(const TwistedType& t);
    std::string label(int slot) const;
    int parse_label(const std::string& label) const;
    int display_L() const { return twisted && type.M == 3 ? 6 : 2; }
};
using FramePtr = std::shared_ptr<const Frame>;

// A tuple of rational functions Psi_i(u) = q^{e_i/2} prod_a (1 - a u)^{mult}, one per slot.
// Factors are sorted by root with no zero multiplicities, so equality is structural.
struct LWeight {
    using Factors = std::vector<std::pair<SpectralParam, long>>;
    std::vector<long> sexp;
    std::vector<Factors> roots;

    LWeight() = default;
    explicit LWeight(int slots) : sexp(slots, 0), roots(slots) {}

    int slots() const { return static_cast<int>(sexp.size()); }
    bool is_constant() const;
    bool is_identity() const;
    LWeight inverse() const;
    LWeight pow(long k) const;
    // u -> a u
    LWeight shifted(SpectralParam a) const;
    LWeight constant_part() const;
    void add_root(int slot, SpectralParam a, long mult);

    LWeight& operator*=(const LWeight& o);
    friend LWeight operator*(LWeight a, const LWeight& b) { return a *= b; }
    friend LWeight operator/(LWeight a, const LWeight& b) { return a *= b.inverse(); }
    friend auto operator<=>(const LWeight&, const LWeight&) = default;

    // Power-series coefficients of Psi_slot(u) up to u^order.
    std::vector<CycloRational> series(int slot, int order) const;
    std::string str(const Frame& f) const;
};

LWeight identity_weight(const Frame& f);
// Constant l-weight [lambda] with s-exponents e.
LWeight constant_weight(std::vector<long> e);
// [k alpha_i / 2]
LWeight alpha_half(const Frame& f, int i, long k);
// [omega_i]: the constant part of Y_{i,a} (resp. Z_{i,a}).
LWeight fundamental_weight(const Frame& f, int i);

// Non-twisted constructors, node-indexed.
LWeight make_Y(const Frame& ade, int node, SpectralParam a);
LWeight make_A_ade(const Frame& ade, int node, SpectralParam a);
LWeight make_psi_ade(const Frame& ade, int node, SpectralParam a, int sign);
LWeight make_psi_tilde_ade(const Frame& ade, int node, SpectralParam a);

// pi_0: Psi^sigma_i(u) = prod_{r=0}^{M-1} Psi_{sigma^r(i)}(omega^r u), kept at orbit representatives.
LWeight fold_weight(const Frame& folded, const LWeight& w);

// Twisted constructors, orbit-indexed; all are folds of the non-twisted ones at the representative.
LWeight make_Z(const Frame& tw, int orbit, SpectralParam a);
LWeight make_A(const Frame& tw, int orbit, SpectralParam a);
LWeight make_psi(const Frame& tw, int orbit, SpectralParam a, int sign);
LWeight make_psi_tilde(const Frame& tw, int orbit, SpectralParam a);

// Slot-generic forms: Y/Z, A, Psi, Psi-tilde in whichever frame.
LWeight frame_Z(const Frame& f, int slot, SpectralParam a);
LWeight frame_A(const Frame& f, int slot, SpectralParam a);
LWeight frame_psi(const Frame& f, int slot, SpectralParam a, int sign);
LWeight frame_psi_tilde(const Frame& f, int slot, SpectralParam a);

// Psi_{sigma(i)}(u) = Psi_i(omega u) is automatic for non-fixed orbits; fixed orbits need omega-stable roots.
bool twist_condition(const Frame& f, const LWeight& w);

std::vector<long> varpi(const LWeight& w);
// n with hi - lo = sum_i n_i alpha_i and all n_i >= 0; nullopt when not comparable.
std::optional<std::vector<long>> height_between(const Frame& f, const std::vector<long>& hi, const std::vector<long>& lo);
std::optional<std::vector<long>> height_between(const Frame& f, const LWeight& hi, const LWeight& lo);

// Truncated element of E_l: terms whose t-weight lies at most `trunc` simple roots below `top` are exact;
// nothing below that is represented. trunc = nullopt means the sum is exact (finite).
class QCharacter {
public:
    using Terms = std::map<LWeight, long>;

    QCharacter() = default;
    QCharacter(FramePtr f, std::vector<long> top, std::optional<int> trunc);
    static QCharacter zero(FramePtr f);
    static QCharacter term(FramePtr f, const LWeight& w, long mult = 1, std::optional<int> trunc = std::nullopt);

    const Frame& frame() const { return *frame_; }
    const FramePtr& frame_ptr() const { return frame_; }
    const Terms& terms() const { return terms_; }
    const std::vector<long>& top() const { return top_; }
    std::optional<int> trunc() const { return trunc_; }
    bool empty() const { return terms_.empty(); }

    // Adds k[w] without checking it against the window; use insert() for checked insertion.
    void add(const LWeight& w, long k);
    // Adds k[w] if its height below top is within trunc; throws if w is not below top.
    void insert(const LWeight& w, long k);
    long height_of(const LWeight& w) const;
    long multiplicity(const LWeight& w) const;
    long total_multiplicity() const;
    // Drops terms above height h and lowers trunc to h.
    QCharacter truncated(int h) const;
    QCharacter with_top(const std::vector<long>& top) const;

    QCharacter& operator+=(const QCharacter& o);
    QCharacter& operator-=(const QCharacter& o);
    friend QCharacter operator+(QCharacter a, const QCharacter& b) { return a += b; }
    friend QCharacter operator-(QCharacter a, const QCharacter& b) { return a -= b; }
    friend QCharacter operator*(const QCharacter& a, const QCharacter& b);
    QCharacter operator*(const LWeight& w) const;
    QCharacter scaled(long k) const;

    // Equality on the common window (same top required, compared up to the smaller trunc).
    bool window_equal(const QCharacter& o) const;
    // First term (in canonical order) at which the windows differ.
    std::optional<std::pair<LWeight, std::pair<long, long>>> first_difference(const QCharacter& o) const;

    QCharacter usual() const;  // varpi applied termwise
    // Inverse of an element whose leading part is +-[top] (e.g. a usual character), to the same trunc.
    QCharacter inverse(std::optional<int> trunc = std::nullopt) const;

    nlohmann::json to_json() const;
    std::string str() const;

private:
    FramePtr frame_;
    std::vector<long> top_;
    std::optional<int> trunc_;
    Terms terms_;
};

// pi applied termwise; the result lives in the folded frame of the same type.
QCharacter fold_char(const FramePtr& folded, const QCharacter& c);

}  // namespace qtw
