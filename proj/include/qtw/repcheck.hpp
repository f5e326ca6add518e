#pragma once

#include "qtw/lweights.hpp"
#include "qtw/report.hpp"

#include <map>
#include <string>
#include <vector>

namespace qtw {

class RepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using SparseCol = std::map<int, CycloRational>;

// Linear map on a truncated basis. Column v is exact when it is the true image of basis vector v,
// i.e. nothing was lost beyond the truncation bound while computing it; this is the truncation mask.
struct GradedOp {
    std::vector<SparseCol> cols;
    std::vector<char> exact;

    static GradedOp identity(int n);
    static GradedOp zero(int n);
    int dim() const { return static_cast<int>(cols.size()); }
    long exact_count() const;

    GradedOp& operator+=(const GradedOp& o);
    GradedOp& operator-=(const GradedOp& o);
    friend GradedOp operator+(GradedOp a, const GradedOp& b) { return a += b; }
    friend GradedOp operator-(GradedOp a, const GradedOp& b) { return a -= b; }
    friend GradedOp operator*(const GradedOp& a, const GradedOp& b);
    friend GradedOp operator*(const CycloRational& c, GradedOp a);
    GradedOp pow(int k) const;
    // Inverse of a diagonal map with nonzero diagonal.
    GradedOp diagonal_inverse() const;
};
GradedOp commutator(const GradedOp& a, const GradedOp& b);

// Truncated infinite-dimensional module: basis labels are index tuples of total level <= bound.
struct GradedModule {
    std::string name;
    // "A2^2" (generators k_eps, k_1, e_eps, e_1) or "A2" (k0, k1, k2, e0, e1, e2)
    std::string presentation;
    int bound = 0;
    std::vector<std::string> index_names;
    std::vector<std::vector<int>> labels;
    std::vector<int> level;
    std::map<std::string, GradedOp> actions;

    int dim() const { return static_cast<int>(labels.size()); }
    int index_of(const std::vector<int>& label) const;  // -1 when absent
    std::string label_str(int v) const;
    const GradedOp& op(const std::string& generator) const;
    bool twisted() const { return presentation == "A2^2"; }
};

std::vector<std::string> builtin_modules();
// neg_prefund_A2t, pos_prefund_A2t, X_A2t, Xtilde_sl3 at truncation bound N.
GradedModule load_builtin(const std::string& name, int bound);
// All generators act by zero except k = 1.
GradedModule trivial_module(const std::string& presentation, int bound);
// Delta(e) = e (x) 1 + k (x) e, Delta(k) = k (x) k on pairs of total level <= bound.
GradedModule tensor_module(const GradedModule& a, const GradedModule& b, int bound);

// Weyl, central and Serre relations of the presentation on every interior vector.
std::vector<Report> verify_presentation(const GradedModule& m);

struct DrinfeldData {
    int nodes = 0;
    std::vector<GradedOp> xminus1, h1;
    std::vector<std::vector<GradedOp>> xplus;  // [node][m], m = 0..max_m
    std::vector<std::vector<GradedOp>> phi;    // [node][m], m = 0..max_m
};
// A2^2: x_0^+ = e_1, x_1^- = -k_1(e_eps e_1 - q^-2 e_1 e_eps), h_1 = k_1^-1 [x_0^+, x_1^-],
//   x_{m+1}^+ = (q^{1/2} - q^{-1/2}) / ((q - q^-1)(q + 1 + q^-1)) [h_1, x_m^+],
//   phi_0 = k_1, phi_{m+1} = (q^{1/2} - q^{-1/2}) [x_m^+, x_1^-].
// A2: x_{i,0}^+ = e_i, x_{1,1}^- = q^-6 (e_2 e_0 - q e_0 e_2) k_1, x_{2,1}^- = -q^-6 (e_1 e_0 - q e_0 e_1) k_2,
//   h_{i,1} = k_i^-1 [x_{i,0}^+, x_{i,1}^-], x_{i,m+1}^+ = [h_{i,1}, x_{i,m}^+] / [2]_q,
//   phi_{i,0} = k_i, phi_{i,m+1} = (q - q^-1) [x_{i,m}^+, x_{i,1}^-].
DrinfeldData drinfeld_generators(const GradedModule& m, int max_m);

FramePtr module_frame(const GradedModule& m);

// Joint generalized eigenvalues of the phi_{i,m} on one weight block, read back as an l-weight.
struct LWeightSpace {
    LWeight weight;
    int dim = 0;
    int level = 0;
};
std::vector<LWeightSpace> lweight_spaces(const GradedModule& m, const DrinfeldData& d);

// Window of complete weight blocks as a truncated q-character; phi series are read to order max_m.
QCharacter qchar_from_module(const GradedModule& m, int max_m = 8);

// Highest l-weight read on the level-0 vector.
LWeight highest_lweight(const GradedModule& m, int max_m = 8);

// a is a root parameter of a polynomial highest l-weight, (1 - a u) | psi_i(u). Checks that every
// interior phi_{i,p} v vanishes past a cutoff and that phi_i(a^{-1}) v = sum_p a^{-p} phi_{i,p} v = 0.
Report verify_phi_vanishing(const GradedModule& m, SpectralParam a, int max_p = 12);

// Drinfeld-Jimbo coproduct on v0 (x) v0: x^+ kills it and its phi eigenvalue is the product of the
// two highest l-weights.
Report verify_coproduct_on_highest(const GradedModule& a, const GradedModule& b, int max_m = 6);

}  // namespace qtw
