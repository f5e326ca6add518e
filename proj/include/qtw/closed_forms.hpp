#pragma once

// Closed-form characters of the built-in A2^(2) and A2 modules, built term by term from l-weights.

#include "qtw/lweights.hpp"

namespace qtw::closed {

inline SpectralParam q_pow(long n) { return SpectralParam::q_pow(n); }
inline SpectralParam minus_q_pow(long twice_n) { return SpectralParam(twice_n, SpectralParam::kL / 2); }

// Sum over 0 <= i <= j of A^{-1}_{1} ... A^{-1}_{q^{-2j+2}} A^{-1}_{-q} ... A^{-1}_{-q^{-2i+3}}, times Psi^-_{1}.
inline QCharacter neg_prefund_form(const FramePtr& f, int trunc) {
    QCharacter out(f, identity_weight(*f).sexp, trunc);
    for (int j = 0; j <= trunc; ++j)
        for (int i = 0; i <= j && i + j <= trunc; ++i) {
            LWeight w = make_psi(*f, 0, q_pow(0), -1);
            for (int s = 0; s < j; ++s) w *= make_A(*f, 0, q_pow(-2 * s)).inverse();
            for (int s = 0; s < i; ++s) w *= make_A(*f, 0, minus_q_pow(2 - 4 * s)).inverse();
            out.add(w, 1);
        }
    return out;
}

// Psi_{a} sum_k floor((k+2)/2) [alpha]^{-k}
inline QCharacter pos_prefund_form(const FramePtr& f, int trunc, SpectralParam a = {}) {
    QCharacter out(f, identity_weight(*f).sexp, trunc);
    for (int k = 0; k <= trunc; ++k) out.add(make_psi(*f, 0, a, 1) * alpha_half(*f, 0, -2 * k), (k + 2) / 2);
    return out;
}

// [Psi-tilde_{1,1}] sum_j A^{-1}_{1} ... A^{-1}_{q^{-2j+2}}, with Psi-tilde = Psi^{-1}_{1} Psi_{-q}
inline QCharacter x_form(const FramePtr& f, int trunc) {
    LWeight top = make_psi(*f, 0, q_pow(0), -1) * make_psi(*f, 0, minus_q_pow(2), 1);
    QCharacter out(f, identity_weight(*f).sexp, trunc);
    LWeight w = top;
    for (int j = 0; j <= trunc; ++j) {
        out.add(w, 1);
        w *= make_A(*f, 0, q_pow(-2 * j)).inverse();
    }
    return out;
}

// [Psi^{-1}_{1,1} Psi_{2,q}] sum_k A^{-1}_{1,1} ... A^{-1}_{1,q^{-2k+2}} sum_l [alpha_2]^{-l}
inline QCharacter xtilde_sl3_form(const FramePtr& a2, int trunc) {
    LWeight top = make_psi_ade(*a2, 0, q_pow(0), -1) * make_psi_ade(*a2, 1, q_pow(1), 1);
    QCharacter out(a2, identity_weight(*a2).sexp, trunc);
    LWeight w = top;
    for (int k = 0; k <= trunc; ++k) {
        for (int l = 0; k + l <= trunc; ++l) out.add(w * alpha_half(*a2, 1, -2 * l), 1);
        w *= make_A_ade(*a2, 0, q_pow(-2 * k)).inverse();
    }
    return out;
}

// q^{-i-j} (1+q^3u)(1-q^{-2i+2}u)(1+q^{-2j+1}u) / ((1+q^{-2i+1}u)(1+q^{-2i+3}u)(1-q^{-2j}u)(1-q^{-2j+2}u))
inline LWeight neg_prefund_phi(const FramePtr& f, int i, int j) {
    LWeight w(f->slots);
    w.sexp[0] = -2 * (i + j);
    w.add_root(0, minus_q_pow(6), 1);
    w.add_root(0, q_pow(-2 * i + 2), 1);
    w.add_root(0, minus_q_pow(-4 * j + 2), 1);
    w.add_root(0, minus_q_pow(-4 * i + 2), -1);
    w.add_root(0, minus_q_pow(-4 * i + 6), -1);
    w.add_root(0, q_pow(-2 * j), -1);
    w.add_root(0, q_pow(-2 * j + 2), -1);
    return w;
}

}  // namespace qtw::closed
