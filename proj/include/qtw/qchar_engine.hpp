#pragma once

#include "qtw/lweights.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qtw {

class QCharError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResourceError : public QCharError {
public:
    using QCharError::QCharError;
};

inline constexpr std::size_t kDefaultBudget = 1000000;

// Product of Y_{i,a} (non-twisted frame) or Z_{i,a} (twisted frame) with positive exponents.
struct DominantMonomial {
    std::vector<std::pair<int, SpectralParam>> factors;  // one entry per unit of exponent

    LWeight weight(const Frame& f) const;
    std::string str(const Frame& f) const;
    // "Z[1,q^-1]*Z[1,q^1]^2"; Y[...] in non-twisted frames.
    static DominantMonomial parse(const std::string& text, const Frame& f);
};

// M = Z_{i,a} Z_{i,aq^2} ... Z_{i,aq^{2k-2}}
DominantMonomial kr_monomial(int slot, int k, SpectralParam a);

using YMonomial = std::map<std::pair<int, SpectralParam>, long>;
LWeight ymonomial_weight(const Frame& ade, const YMonomial& m);
// Monomials of the truncated q-character of L(m) with their multiplicities, highest first.
std::vector<std::pair<YMonomial, long>> fm_expand(const FramePtr& ade, const DominantMonomial& m, int trunc,
                                                  std::size_t budget = kDefaultBudget);

// Truncated q-character of L(m) for a simply-laced type, by sl2-coloured monomial expansion.
// Valid for modules whose character has a single dominant monomial (KR modules, products at
// parameters in distinct q-lattices); any colouring obstruction raises QCharError.
QCharacter fm_qcharacter(const FramePtr& ade, const DominantMonomial& m, int trunc,
                         std::size_t budget = kDefaultBudget);

// Twisted monomials are lifted to the representative nodes and the result is folded.
QCharacter monomial_qcharacter(const FramePtr& f, const DominantMonomial& m, int trunc,
                               std::size_t budget = kDefaultBudget);

QCharacter kr_qcharacter(const FramePtr& f, int slot, int k, SpectralParam a, int trunc);

// chi(L(M_k)) / M_k with M_k = Z_{i,q^{-2k+1}} ... Z_{i,q^{-1}}
QCharacter normalized_kr(const FramePtr& f, int slot, int k, int trunc);

struct LimitWindow {
    QCharacter chi;
    int stable_k = 0;
};
// First k at which the height-trunc windows of normalized_kr at k-1 and k agree.
LimitWindow normalized_kr_limit(const FramePtr& f, int slot, int trunc);

QCharacter neg_prefund_qchar(const FramePtr& f, int slot, SpectralParam a, int trunc, int* stable_k = nullptr);
QCharacter pos_prefund_qchar(const FramePtr& f, int slot, SpectralParam a, int trunc);

// sum_{r>=0} (A_{i,a} A_{i,aq^{-2}} ... A_{i,aq^{-2r+2}})^{-1}
QCharacter chi_string(const FramePtr& f, int slot, SpectralParam a, int trunc);
// [Psi-tilde_{i,a}] chi_{i,a} (1 - [-alpha_i])
QCharacter normalized_X_qchar(const FramePtr& f, int slot, SpectralParam a, int trunc);

// sum_{k=0}^{trunc} [-alpha_i]^k, the character 1/(1 - [-alpha_i]) on a window
QCharacter geometric_alpha(const FramePtr& f, int slot, int trunc);

}  // namespace qtw
