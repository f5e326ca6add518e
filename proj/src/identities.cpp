#include "qtw/identities.hpp"
#include "qtw/repcheck.hpp"

#include <algorithm>
#include <random>

namespace qtw {

QCharacter eval_Q(const FramePtr& f, int slot, SpectralParam a, int trunc) {
    return QCharacter::term(f, frame_psi(*f, slot, a, +1), 1, trunc);
}

QCharacter eval_Qtilde(const FramePtr& f, int slot, SpectralParam a, int trunc) {
    SpectralParam b = a * SpectralParam::q_pow(-2);
    return chi_string(f, slot, b, trunc) * (frame_psi_tilde(*f, slot, b) * alpha_half(*f, slot, -1));
}

std::vector<std::pair<int, SpectralParam>> qq_rhs_factors(const Frame& f, int slot, SpectralParam a) {
    std::vector<std::pair<int, SpectralParam>> out;
    const TwistedType& t = f.type;
    if (!f.twisted) {
        for (int j = 0; j < t.rank; ++j)
            if (t.C[slot][j] == -1) out.push_back({j, a});
        return out;
    }
    if (t.family == TwistedFamily::A_even) {
        int nbar = t.num_orbits() - 1;
        if (slot == nbar) {
            out.push_back({nbar, a * SpectralParam::minus_one()});
            if (nbar > 0) out.push_back({nbar - 1, a});
        } else {
            if (slot > 0) out.push_back({slot - 1, a});
            out.push_back({slot + 1, a});
        }
        return out;
    }
    SpectralParam om = SpectralParam::omega(t.M);
    for (int j = 0; j < t.num_orbits(); ++j) {
        if (j == slot) continue;
        switch (t.C_sigma[j][slot]) {
            case 0:
                break;
            case -1:
                out.push_back({j, a});
                break;
            case -2:
                out.push_back({j, a});
                out.push_back({j, a * SpectralParam::minus_one()});
                break;
            case -3:
                out.push_back({j, a});
                out.push_back({j, a * om});
                out.push_back({j, a * om.pow(2)});
                break;
            default:
                throw IdentityError("unexpected twisted Cartan entry");
        }
    }
    return out;
}

Report verify_qq(const FramePtr& f, int slot, SpectralParam a, int trunc) {
    Report r;
    r.relation = std::string("QQ-tilde system ") + f->type.name + (f->twisted ? "" : " (untwisted)") + " orbit " +
                 f->label(slot) + " a=" + a.str(f->display_L());
    SpectralParam q = SpectralParam::q_pow(1);
    QCharacter lhs = eval_Q(f, slot, a * q.inverse(), trunc) * eval_Qtilde(f, slot, a * q, trunc) *
                     alpha_half(*f, slot, 1);
    QCharacter second =
        eval_Q(f, slot, a * q, trunc) * eval_Qtilde(f, slot, a * q.inverse(), trunc) * alpha_half(*f, slot, -1);
    // the difference telescopes, so count the terms of both products
    r.vectors_checked = static_cast<long>(lhs.terms().size() + second.terms().size());
    lhs -= second;
    QCharacter rhs = QCharacter::term(f, identity_weight(*f), 1, trunc);
    for (const auto& [j, b] : qq_rhs_factors(*f, slot, a)) rhs = rhs * eval_Q(f, j, b, trunc);
    if (auto d = lhs.first_difference(rhs))
        r.fail("term " + d->first.str(*f) + ": lhs " + std::to_string(d->second.first) + ", rhs " +
               std::to_string(d->second.second));
    return r;
}

// ---------------------------------------------------------------- counterexamples

std::vector<Report> verify_counterexamples(int height) {
    std::vector<Report> out;
    const TwistedType& t = twisted_type("A2^2");
    FramePtr tw = Frame::folded(t);
    FramePtr a2 = Frame::ade(t);

    Report dims;
    dims.relation = "dimension of L(Z_{1,1} Z_{1,q^2}) against L(Y_{1,1} Y_{2,-q^2})";
    long d_tw = monomial_qcharacter(tw, DominantMonomial::parse("Z[1,1]*Z[1,q^2]", *tw), 8).total_multiplicity();
    long d_a2 = fm_qcharacter(a2, DominantMonomial::parse("Y[1,1]*Y[2,-q^2]", *a2), 8).total_multiplicity();
    dims.vectors_checked = d_tw + d_a2;
    if (d_tw != 6 || d_a2 != 9)
        dims.fail("dimensions " + std::to_string(d_tw) + " and " + std::to_string(d_a2) + ", expected 6 and 9");
    out.push_back(dims);

    int bound = height + 3;
    QCharacter x = qchar_from_module(load_builtin("X_A2t", bound)).truncated(height);
    QCharacter folded = fold_char(x.frame_ptr(), qchar_from_module(load_builtin("Xtilde_sl3", bound))).truncated(height);

    Report differ;
    differ.relation = "folded Xtilde_sl3 character differs from X_A2t character";
    differ.vectors_checked = static_cast<long>(x.terms().size() + folded.terms().size());
    long lowest = height + 1;
    QCharacter diff = x - folded;
    for (const auto& [w, k] : diff.terms())
        if (k != 0) lowest = std::min(lowest, x.height_of(w));
    if (lowest > height)
        differ.fail("windows agree to height " + std::to_string(height));
    else if (lowest != 1)
        differ.fail("first difference at height " + std::to_string(lowest) + ", expected 1");
    out.push_back(differ);

    Report normalized;
    normalized.relation = "normalized X_A2t character equals normalized folded Xtilde_sl3 character";
    QCharacter nx = x * x.usual().inverse();
    QCharacter nf = folded * folded.usual().inverse();
    normalized.vectors_checked = static_cast<long>(std::max(nx.terms().size(), nf.terms().size()));
    if (auto e = nx.first_difference(nf))
        normalized.fail("term " + e->first.str(*tw) + ": " + std::to_string(e->second.first) + " against " +
                        std::to_string(e->second.second));
    out.push_back(normalized);
    return out;
}

// ---------------------------------------------------------------- TQ

namespace {

std::string lplus_str(const Frame& f, const std::pair<int, SpectralParam>& key) {
    return "[L+_{" + f.label(key.first) + "," + key.second.str(f.display_L()) + "}]";
}

std::string product_str(const Frame& f, const std::map<std::pair<int, SpectralParam>, long>& m, int sign) {
    std::string out;
    for (const auto& [key, e] : m) {
        if (e * sign <= 0) continue;
        for (long k = 0; k < e * sign; ++k) out += lplus_str(f, key);
    }
    return out;
}

void bump(std::map<std::pair<int, SpectralParam>, long>& m, std::pair<int, SpectralParam> key, long e) {
    auto [it, fresh] = m.try_emplace(key, e);
    if (!fresh) {
        it->second += e;
        if (it->second == 0) m.erase(it);
    }
}

// Z_{j,b} with b reduced modulo omega at fixed orbits.
std::pair<int, SpectralParam> z_variable(const Frame& f, int node, SpectralParam b) {
    if (!f.twisted) return {node, b};
    const TwistedType& t = f.type;
    int o = t.orbit_of[node];
    int r = 0;
    while (t.sigma_pow(t.rep[o], r) != node) ++r;
    SpectralParam c = b * SpectralParam::omega(t.M).pow(r);
    if (t.fixed(o)) c.m %= SpectralParam::kL / t.M;
    return {o, c};
}

}  // namespace

std::string TQTerm::str(const Frame& f) const {
    std::string out = mult == 1 ? "" : std::to_string(mult) + "*";
    for (std::size_t j = 0; j < omega.size(); ++j) {
        if (omega[j] == 0) continue;
        std::string name = "omega_" + f.label(static_cast<int>(j));
        if (omega[j] == 1) out += "[" + name + "]";
        else if (omega[j] == -1) out += "[-" + name + "]";
        else out += "[" + std::to_string(omega[j]) + name + "]";
    }
    std::string num = product_str(f, lplus, +1), den = product_str(f, lplus, -1);
    out += num.empty() ? "1" : num;
    if (!den.empty()) out += "/" + den;
    return out;
}

std::string TQRelation::str(const Frame& f) const {
    std::string out = "[V_{" + f.label(slot) + "," + a.str(f.display_L()) + "}] = ";
    for (std::size_t k = 0; k < terms.size(); ++k) out += (k ? " + " : "") + terms[k].str(f);
    return out;
}

std::string TQRelation::cleared_str(const Frame& f) const {
    std::string out = "[V_{" + f.label(slot) + "," + a.str(f.display_L()) + "}]" + product_str(f, denominator, +1) + " = ";
    for (std::size_t k = 0; k < cleared.size(); ++k) out += (k ? " + " : "") + cleared[k].str(f);
    return out;
}

TQRelation tq_relation(const FramePtr& f, int slot, SpectralParam a, int trunc) {
    TQRelation rel;
    rel.slot = slot;
    rel.a = a;
    FramePtr ade = f->twisted ? Frame::ade(f->type) : f;
    int node = f->twisted ? f->type.rep[slot] : slot;
    // fundamental characters are finite; this height bounds every type in the table
    const int full = 64;
    auto mons = fm_expand(ade, kr_monomial(node, 1, a), full);
    SpectralParam q = SpectralParam::q_pow(1);
    std::map<TQTerm, long> collected;
    for (const auto& [mon, k] : mons) {
        TQTerm t;
        t.omega.assign(f->slots, 0);
        for (const auto& [key, e] : mon) {
            auto [j, b] = z_variable(*f, key.first, key.second);
            t.omega[j] += e;
            bump(t.lplus, {j, z_variable(*f, f->twisted ? f->type.rep[j] : j, b * q.inverse()).second}, e);
            bump(t.lplus, {j, z_variable(*f, f->twisted ? f->type.rep[j] : j, b * q).second}, -e);
        }
        collected[t] += k;
    }
    for (const auto& [t, k] : collected) {
        rel.terms.push_back(t);
        rel.terms.back().mult = k;
    }
    std::sort(rel.terms.begin(), rel.terms.end());
    for (const auto& t : rel.terms)
        for (const auto& [key, e] : t.lplus)
            if (e < 0) rel.denominator[key] = std::max(rel.denominator[key], -e);
    for (auto t : rel.terms) {
        for (const auto& [key, e] : rel.denominator) bump(t.lplus, key, e);
        rel.cleared.push_back(t);
    }

    rel.check.relation = "TQ relation " + f->type.name + " V_{" + f->label(slot) + "," + a.str(f->display_L()) + "}";
    QCharacter lhs = kr_qcharacter(f, slot, 1, a, trunc);
    QCharacter rhs(f, lhs.top(), trunc);
    for (const auto& t : rel.terms) {
        LWeight w = identity_weight(*f);
        for (int j = 0; j < f->slots; ++j) w *= fundamental_weight(*f, j).pow(t.omega[j]);
        for (const auto& [key, e] : t.lplus) w *= frame_psi(*f, key.first, key.second, +1).pow(e);
        rhs.insert(w, t.mult);
    }
    rel.check.vectors_checked = static_cast<long>(lhs.terms().size());
    if (auto d = lhs.first_difference(rhs))
        rel.check.fail("term " + d->first.str(*f) + ": lhs " + std::to_string(d->second.first) + ", rhs " +
                       std::to_string(d->second.second));
    return rel;
}

// ---------------------------------------------------------------- Bethe equations

namespace {

std::string factor_str(const Frame& f, const BetheFactor& b) {
    return "Q_{" + f.label(b.orbit) + "}(a0*" + b.shift.str(f.display_L()) + ")";
}

std::string ratio_str(const Frame& f, const std::vector<BetheFactor>& fs) {
    std::string num, den;
    for (const auto& b : fs) (b.power > 0 ? num : den) += factor_str(f, b);
    if (num.empty()) num = "1";
    return den.empty() ? num : num + "/" + den;
}

}  // namespace

std::string BetheEquation::str(const Frame& f) const {
    std::string out = (sign < 0 ? "-" : "") + std::string("u_{") + f.label(orbit) + "}^{" + std::to_string(u_power) +
                      "} " + ratio_str(f, lhs) + " = ";
    if (rhs.empty()) return out + "1";
    // group numerator/denominator pairs per factor
    for (std::size_t k = 0; k < rhs.size(); k += 2) {
        if (k) out += " ";
        out += "(" + ratio_str(f, {rhs[k], rhs[k + 1]}) + ")";
    }
    return out;
}

std::string BetheSystem::str(const Frame& f) const {
    std::string out;
    for (const auto& e : equations) out += e.str(f) + "\n";
    return out;
}

BetheEquation bethe_equation(const FramePtr& f, int slot) {
    BetheEquation eq;
    eq.orbit = slot;
    SpectralParam q = SpectralParam::q_pow(1);
    eq.lhs = {{slot, q.pow(2), +1}, {slot, q.pow(-2), -1}};
    for (const auto& [j, c] : qq_rhs_factors(*f, slot, SpectralParam())) {
        eq.rhs.push_back({j, c * q, +1});
        eq.rhs.push_back({j, c * q.inverse(), -1});
    }
    return eq;
}

BetheSystem bethe_equations(const FramePtr& f) {
    BetheSystem s;
    s.type = f->type.name;
    for (int i = 0; i < f->slots; ++i) s.equations.push_back(bethe_equation(f, i));
    return s;
}

namespace {

Complex eval_poly(const std::vector<Complex>& roots, const Complex& z) {
    Complex v(Real(1));
    for (const auto& r : roots) v = v * (Complex(Real(1)) - z / r);
    return v;
}

Complex param_value(const SpectralParam& p, const Complex& q0) { return eval_numeric(p.value(), q0); }

}  // namespace

Complex bethe_residual(const BetheEquation& eq, const std::vector<std::vector<Complex>>& roots, const Complex& u,
                       const Complex& a0, const Complex& q0) {
    auto side = [&](const std::vector<BetheFactor>& fs) {
        Complex v(Real(1));
        for (const auto& b : fs) {
            Complex x = eval_poly(roots[b.orbit], a0 * param_value(b.shift, q0));
            v = b.power > 0 ? v * x : v / x;
        }
        return v;
    };
    Complex lhs = side(eq.lhs) * complex_pow(u, eq.u_power);
    if (eq.sign < 0) lhs = Complex(Real(0)) - lhs;
    return lhs / side(eq.rhs) - Complex(Real(1));
}

NumericCheck numeric_consistency(const FramePtr& f, const Complex& q0, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    auto random_complex = [&] { return Complex(Real(coord(rng)), Real(coord(rng))); };
    NumericCheck out{Real(0), 0};
    SpectralParam q = SpectralParam::q_pow(1);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < f->slots; ++i) {
            std::vector<std::vector<Complex>> roots(f->slots);
            for (auto& r : roots)
                for (int k = 0; k < 3; ++k) r.push_back(random_complex());
            Complex a0 = roots[i][0];
            auto R = [&](const Complex& a) {
                Complex v(Real(1));
                for (const auto& [j, c] : qq_rhs_factors(*f, i, SpectralParam()))
                    v = v * eval_poly(roots[j], a * param_value(c, q0));
                return v;
            };
            Complex qv = param_value(q, q0);
            Complex qi = param_value(q.inverse(), q0);
            // u Q~(a0) = R(a0 q^{-1}) / Q(a0 q^{-2}),  u^{-1} Q~(a0) = -R(a0 q) / Q(a0 q^2)
            Complex X = R(a0 * qi) / eval_poly(roots[i], a0 * qi * qi);
            Complex Y = Complex(Real(0)) - R(a0 * qv) / eval_poly(roots[i], a0 * qv * qv);
            Complex u = complex_sqrt(X / Y);
            Real err = bethe_residual(bethe_equation(f, i), roots, u, a0, q0).abs();
            if (err > out.max_rel_error) out.max_rel_error = err;
        }
        ++out.samples;
    }
    return out;
}

}  // namespace qtw
