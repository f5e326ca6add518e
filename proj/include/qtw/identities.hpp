#pragma once

#include "qtw/qchar_engine.hpp"
#include "qtw/report.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qtw {

class IdentityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// chi_q(Q_{i,a}) = [Psi^+_{i,a}]
QCharacter eval_Q(const FramePtr& f, int slot, SpectralParam a, int trunc);
// chi_q(Q-tilde_{i,a}) = [-alpha_i/2] [Psi-tilde_{i,aq^{-2}}] chi_{i,aq^{-2}}
QCharacter eval_Qtilde(const FramePtr& f, int slot, SpectralParam a, int trunc);

// Arguments (orbit, parameter) of the Q factors on the right-hand side of the QQ-tilde system at (i, a).
std::vector<std::pair<int, SpectralParam>> qq_rhs_factors(const Frame& f, int slot, SpectralParam a);

Report verify_qq(const FramePtr& f, int slot, SpectralParam a, int trunc);

// One summand of a TQ relation: mult * prod_j [omega_j]^{omega[j]} * prod [L+_{j,b}]^{e}.
struct TQTerm {
    long mult = 1;
    std::vector<long> omega;
    std::map<std::pair<int, SpectralParam>, long> lplus;

    friend auto operator<=>(const TQTerm&, const TQTerm&) = default;
    std::string str(const Frame& f) const;
};

struct TQRelation {
    int slot = 0;
    SpectralParam a;
    std::vector<TQTerm> terms;  // sorted
    // Common denominator: [V][denominator] = sum of cleared terms.
    std::map<std::pair<int, SpectralParam>, long> denominator;
    std::vector<TQTerm> cleared;
    Report check;

    std::string str(const Frame& f) const;
    std::string cleared_str(const Frame& f) const;
};

// (a) dim L(Z_{1,1} Z_{1,q^2}) = 6 for A2^2 against dim L(Y_{1,1} Y_{2,-q^2}) = 9 for A2;
// (b) the folded Xtilde_sl3 window differs from the X_A2t window;
// (c) the two windows agree after dividing each by its usual character.
// Module windows are read from the built-in modules at bound height + 3.
std::vector<Report> verify_counterexamples(int height = 5);

// Replaces Z_{j,b} by [omega_j] L+_{j,bq^{-1}} / L+_{j,bq} in chi_q(V_{i,a}) and compares both sides at trunc.
TQRelation tq_relation(const FramePtr& f, int slot, SpectralParam a, int trunc);

// -u_i^{-2} Q_i(a0 q^2)/Q_i(a0 q^{-2}) = prod over neighbour factors Q_j(a0 q c)/Q_j(a0 q^{-1} c)
struct BetheFactor {
    int orbit;
    SpectralParam shift;  // argument a0 * shift
    int power;            // +1 numerator, -1 denominator
    friend auto operator<=>(const BetheFactor&, const BetheFactor&) = default;
};

struct BetheEquation {
    int orbit;
    int sign = -1;
    int u_power = -2;
    std::vector<BetheFactor> lhs;  // Q_i ratio
    std::vector<BetheFactor> rhs;  // sorted
    std::string str(const Frame& f) const;
};

struct BetheSystem {
    std::string type;
    std::vector<BetheEquation> equations;
    std::string str(const Frame& f) const;
};

BetheSystem bethe_equations(const FramePtr& f);
BetheEquation bethe_equation(const FramePtr& f, int slot);

// Random polynomial Q data with a root a0 of Q_i; u_i and Q-tilde_i(a0) are solved from the QQ-tilde
// relation at a = a0 q^{+-1}, and the emitted equation is evaluated. Returns the maximal relative error.
struct NumericCheck {
    Real max_rel_error;
    int samples = 0;
};
NumericCheck numeric_consistency(const FramePtr& f, const Complex& q0, int samples, unsigned seed = 1);
// Evaluates lhs / rhs - 1 of an equation for given polynomials (roots per orbit) and twist u.
Complex bethe_residual(const BetheEquation& eq, const std::vector<std::vector<Complex>>& roots, const Complex& u,
                       const Complex& a0, const Complex& q0);

}  // namespace qtw
