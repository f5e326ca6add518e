#include "qtw/suite.hpp"

#include "qtw/closed_forms.hpp"
#include "qtw/identities.hpp"
#include "qtw/repcheck.hpp"
#include "qtw/root_data.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace qtw {

const std::vector<SuiteGroup>& suite_groups() {
    static const std::vector<SuiteGroup> groups = {
        {1, "detf", "F(k) determinant table"},
        {2, "presentation", "relations of the explicit A2^(2) and A2 modules"},
        {3, "phi-spectrum", "phi eigenvalues on the negative prefundamental module"},
        {4, "module-characters", "q-characters of the explicit modules"},
        {5, "counterexamples", "dimension and folding counterexamples"},
        {6, "qq", "twisted QQ-tilde systems"},
        {7, "tq", "A2^(2) TQ relation"},
        {8, "folding", "normalized twisted characters as folds"},
        {9, "vanishing", "phi(a^-1) v = 0 at roots of a polynomial highest l-weight"},
        {10, "limits", "limits of normalized KR characters"},
        {11, "bae", "Bethe Ansatz equations"},
    };
    return groups;
}

nlohmann::json SuiteCheck::to_json() const {
    nlohmann::json j = report.to_json();
    j["criterion"] = criterion;
    j["group"] = group;
    j["anchor"] = anchor;
    if (info) j["status"] = report.ok ? "info" : "info-fail";
    return j;
}

namespace {

using Clock = std::chrono::steady_clock;

QCharacter normalized(const QCharacter& c) { return c * c.usual().inverse(); }

void compare(Report& r, const QCharacter& lhs, const QCharacter& rhs) {
    r.vectors_checked += static_cast<long>(std::max(lhs.terms().size(), rhs.terms().size()));
    if (lhs.top() != rhs.top()) {
        r.fail("leading weights differ: " + lhs.str().substr(0, 80) + " against " + rhs.str().substr(0, 80));
        return;
    }
    if (auto d = lhs.first_difference(rhs))
        r.fail("term " + d->first.str(lhs.frame()) + ": " + std::to_string(d->second.first) + " against " +
               std::to_string(d->second.second));
}

class Runner {
public:
    Runner(std::vector<SuiteCheck>& out, const std::function<void(const SuiteCheck&)>& progress)
        : out_(out), progress_(progress) {}

    void check(const SuiteGroup& g, const std::string& relation, const std::function<void(Report&)>& body,
               bool info = false) {
        SuiteCheck c{g.criterion, g.name, g.anchor, {}, info, 0};
        c.report.relation = relation;
        auto t0 = Clock::now();
        try {
            body(c.report);
        } catch (const std::exception& e) {
            c.report.fail(std::string("error: ") + e.what());
        }
        c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        out_.push_back(c);
        if (progress_) progress_(out_.back());
    }

    // Module characters are shared between groups.
    const QCharacter& module_qchar(const std::string& name, int bound) {
        auto key = std::make_pair(name, bound);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, qchar_from_module(load_builtin(name, bound))).first;
        return it->second;
    }

private:
    std::vector<SuiteCheck>& out_;
    const std::function<void(const SuiteCheck&)>& progress_;
    std::map<std::pair<std::string, int>, QCharacter> cache_;
};

SpectralParam sp(const std::string& s) { return SpectralParam::parse(s); }

// ---------------------------------------------------------------- groups

void run_detf(Runner& run, const SuiteGroup& g) {
    for (auto name : {"A3^2", "A5^2", "D3^2", "D4^2", "E6^2", "D4^3"}) {
        TwistedType t = twisted_type(name);
        auto one = [&](long k, bool divisible) {
            std::string label = std::string(divisible ? "det F(k)" : "det F'(k)") + " " + name + " k=" + std::to_string(k);
            run.check(g, label, [&](Report& r) {
                CycloRational got = divisible ? det_f(t, k) : det_f_prime(t, k);
                CycloRational want = divisible ? det_f_closed_form(t, k) : det_f_prime_closed_form(t, k);
                r.vectors_checked = 1;
                if (!(got == want)) r.fail("computed " + got.str() + ", listed " + want.str());
            });
        };
        for (long k = 1; k <= 4; ++k) one(t.M * k, true);
        int found = 0;
        for (long k = 1; found < 4; ++k)
            if (k % t.M != 0) {
                one(k, false);
                ++found;
            }
    }
}

void run_presentation(Runner& run, const SuiteGroup& g) {
    for (const auto& name : builtin_modules())
        run.check(g, "module relations of " + name + " at bound 10", [&](Report& r) {
            for (const auto& rel : verify_presentation(load_builtin(name, 10))) {
                r.vectors_checked += rel.vectors_checked;
                if (!rel.ok) r.fail(rel.relation + ": " + *rel.first_failure);
            }
        });
}

void run_phi_spectrum(Runner& run, const SuiteGroup& g) {
    const int height = 8;
    GradedModule m = load_builtin("neg_prefund_A2t", height + 3);
    FramePtr f = module_frame(m);
    DrinfeldData d;
    run.check(g, "v[i,j] is a phi eigenvector with the rational eigenvalue, i+j <= 8", [&](Report& r) {
        d = drinfeld_generators(m, height);
        for (int v = 0; v < m.dim(); ++v) {
            if (m.level[v] > height) continue;
            auto want = closed::neg_prefund_phi(f, m.labels[v][0], m.labels[v][1]).series(0, height);
            ++r.vectors_checked;
            for (int p = 0; p <= height; ++p) {
                const GradedOp& op = d.phi[0][p];
                if (!op.exact[v]) r.fail("phi_" + std::to_string(p) + " " + m.label_str(v) + " is cut by the bound");
                for (const auto& [row, x] : op.cols[v])
                    if (row != v && !(x == CycloRational(0)))
                        r.fail("phi_" + std::to_string(p) + " " + m.label_str(v) + " has a component on " +
                               m.label_str(row));
                auto it = op.cols[v].find(v);
                CycloRational got = it == op.cols[v].end() ? CycloRational(0) : it->second;
                if (!(got == want[p]))
                    r.fail("phi_" + std::to_string(p) + " " + m.label_str(v) + ": " + got.str() + " against " +
                           want[p].str());
            }
        }
    });
    run.check(g, "generalized l-weights of levels <= 8 are the rational formulas", [&](Report& r) {
        std::map<LWeight, int> want;
        for (int v = 0; v < m.dim(); ++v)
            if (m.level[v] <= height) ++want[closed::neg_prefund_phi(f, m.labels[v][0], m.labels[v][1])];
        std::map<LWeight, int> got;
        for (const auto& s : lweight_spaces(m, d))
            if (s.level <= height) got[s.weight] += s.dim;
        r.vectors_checked = static_cast<long>(want.size());
        for (const auto& [w, k] : want)
            if (got[w] != k) r.fail("l-weight " + w.str(*f) + " has multiplicity " + std::to_string(got[w]));
        for (const auto& [w, k] : got)
            if (!want.count(w)) r.fail("unexpected l-weight " + w.str(*f));
    });
}

void run_module_characters(Runner& run, const SuiteGroup& g) {
    const int height = 8, bound = height + 3;
    auto window = [&](const std::string& name, Report& r) -> const QCharacter& {
        const QCharacter& c = run.module_qchar(name, bound);
        if (c.trunc() != height) r.fail("window reaches height " + std::to_string(c.trunc().value_or(-1)));
        return c;
    };
    run.check(g, "neg_prefund_A2t character to height 8", [&](Report& r) {
        const QCharacter& c = window("neg_prefund_A2t", r);
        compare(r, c, closed::neg_prefund_form(c.frame_ptr(), height));
    });
    run.check(g, "pos_prefund_A2t character to height 8", [&](Report& r) {
        const QCharacter& c = window("pos_prefund_A2t", r);
        compare(r, c, closed::pos_prefund_form(c.frame_ptr(), height));
    });
    run.check(
        g, "pos_prefund_A2t character to height 8 with spectral parameter q^2",
        [&](Report& r) {
            const QCharacter& c = window("pos_prefund_A2t", r);
            compare(r, c, closed::pos_prefund_form(c.frame_ptr(), height, closed::q_pow(2)));
        },
        true);
    run.check(g, "X_A2t character to height 8", [&](Report& r) {
        const QCharacter& c = window("X_A2t", r);
        compare(r, c, closed::x_form(c.frame_ptr(), height));
    });
    run.check(g, "Xtilde_sl3 character to height 8", [&](Report& r) {
        const QCharacter& c = window("Xtilde_sl3", r);
        compare(r, c, closed::xtilde_sl3_form(c.frame_ptr(), height));
    });
}

void run_counterexamples(Runner& run, const SuiteGroup& g) {
    std::vector<Report> reports;
    run.check(g, "counterexample computation to height 8", [&](Report& r) {
        reports = verify_counterexamples(8);
        r.vectors_checked = static_cast<long>(reports.size());
    });
    for (const auto& rep : reports) run.check(g, rep.relation, [&](Report& r) { r = rep; });
}

void run_qq(Runner& run, const SuiteGroup& g) {
    for (auto name : {"A2^2", "A3^2", "D3^2", "D4^3"}) {
        FramePtr f = Frame::folded(twisted_type(name));
        for (int slot = 0; slot < f->slots; ++slot)
            for (auto a : {"1", "q", "-1"}) {
                std::string label = std::string("QQ-tilde system ") + name + " orbit " + f->label(slot) + " a=" + a;
                run.check(g, label, [&](Report& r) {
                    Report got = verify_qq(f, slot, sp(a), 6);
                    r.vectors_checked = got.vectors_checked;
                    if (!got.ok) r.fail(*got.first_failure);
                });
            }
    }
}

void run_tq(Runner& run, const SuiteGroup& g) {
    FramePtr f = Frame::folded(twisted_type("A2^2"));
    TQRelation rel;
    run.check(g, "A2^2 TQ relation evaluates equal at height 4", [&](Report& r) {
        rel = tq_relation(f, 0, sp("1"), 4);
        r.vectors_checked = rel.check.vectors_checked;
        if (!rel.check.ok) r.fail(*rel.check.first_failure);
    });
    run.check(g, "A2^2 TQ relation has the three expected terms", [&](Report& r) {
        using Key = std::pair<int, SpectralParam>;
        auto term = [](long omega, std::vector<std::pair<std::string, long>> lp) {
            TQTerm t;
            t.omega = {omega};
            for (auto& [p, e] : lp) t.lplus[{0, sp(p)}] += e;
            return t;
        };
        std::vector<TQTerm> want = {
            term(1, {{"q^-1", 1}, {"q", -1}}),
            term(0, {{"q^3", 1}, {"-1", 1}, {"q", -1}, {"-q^2", -1}}),
            term(-1, {{"-q^4", 1}, {"-q^2", -1}}),
        };
        std::sort(want.begin(), want.end());
        r.vectors_checked = static_cast<long>(want.size());
        if (rel.terms != want) r.fail("generated " + rel.str(*f));
        std::map<Key, long> den = {{{0, sp("q")}, 1}, {{0, sp("-q^2")}, 1}};
        if (rel.denominator != den) r.fail("cleared form " + rel.cleared_str(*f));
        std::set<std::pair<long, std::map<Key, long>>> cleared, want_cleared = {
            {1, {{{0, sp("q^-1")}, 1}, {{0, sp("-q^2")}, 1}}},
            {0, {{{0, sp("q^3")}, 1}, {{0, sp("-1")}, 1}}},
            {-1, {{{0, sp("q")}, 1}, {{0, sp("-q^4")}, 1}}},
        };
        for (const auto& t : rel.cleared) cleared.insert({t.omega[0], t.lplus});
        if (cleared != want_cleared) r.fail("cleared form " + rel.cleared_str(*f));
    });
}

void run_folding(Runner& run, const SuiteGroup& g) {
    const int height = 6;
    const TwistedType& t = twisted_type("A2^2");
    FramePtr tw = Frame::folded(t), a2 = Frame::ade(t);
    for (int k = 1; k <= 3; ++k)
        run.check(g, "normalized W(1)_{" + std::to_string(k) + ",1} of A2^2 is the fold of the A2 one", [&](Report& r) {
            QCharacter lhs = normalized(kr_qcharacter(tw, 0, k, sp("1"), height));
            compare(r, lhs, fold_char(tw, normalized(kr_qcharacter(a2, 0, k, sp("1"), height))));
        });
    run.check(g, "normalized L- window of A2^2 is the fold of the A2 one", [&](Report& r) {
        QCharacter want = fold_char(tw, normalized(neg_prefund_qchar(a2, 0, sp("1"), height)));
        compare(r, normalized(neg_prefund_qchar(tw, 0, sp("1"), height)), want);
        compare(r, normalized(run.module_qchar("neg_prefund_A2t", 11).truncated(height)), want);
    });
    run.check(g, "normalized L+ window of A2^2 is the fold of the A2 one", [&](Report& r) {
        QCharacter want = fold_char(tw, normalized(pos_prefund_qchar(a2, 0, sp("q^2"), height)));
        compare(r, normalized(pos_prefund_qchar(tw, 0, sp("q^2"), height)), want);
        compare(r, normalized(run.module_qchar("pos_prefund_A2t", 11).truncated(height)), want);
    });
}

void run_vanishing(Runner& run, const SuiteGroup& g) {
    for (auto name : {"pos_prefund_A2t", "X_A2t"})
        run.check(g, std::string("phi vanishing on ") + name + " at bound 10", [&](Report& r) {
            GradedModule m = load_builtin(name, 10);
            FramePtr f = module_frame(m);
            LWeight top = highest_lweight(m);
            std::set<SpectralParam> roots;
            for (int i = 0; i < top.slots(); ++i)
                for (const auto& [a, mult] : top.roots[i]) {
                    if (mult < 0) {
                        r.fail("highest l-weight " + top.str(*f) + " is not polynomial");
                        return;
                    }
                    roots.insert(a);
                }
            if (roots.empty()) r.fail("highest l-weight " + top.str(*f) + " has no roots");
            for (const auto& a : roots) {
                Report v = verify_phi_vanishing(m, a);
                r.vectors_checked += v.vectors_checked;
                if (!v.ok) r.fail("root " + a.str(f->display_L()) + ": " + *v.first_failure);
            }
        });
}

void run_limits(Runner& run, const SuiteGroup& g) {
    for (auto name : {"A2^2", "A3^2", "D4^3"}) {
        FramePtr f = Frame::folded(twisted_type(name));
        for (int slot = 0; slot < f->slots; ++slot)
            run.check(g, std::string("normalized KR windows of ") + name + " orbit " + f->label(slot) + ", h <= 6",
                      [&](Report& r) {
                          for (int h = 0; h <= 6; ++h) {
                              QCharacter base = normalized_kr(f, slot, h + 1, h);
                              for (int k = h + 2; k <= h + 3; ++k) {
                                  Report one;
                                  compare(one, normalized_kr(f, slot, k, h), base);
                                  r.vectors_checked += one.vectors_checked;
                                  if (!one.ok)
                                      r.fail("h=" + std::to_string(h) + " k=" + std::to_string(k) + ": " +
                                             *one.first_failure);
                              }
                          }
                      });
    }
}

// -u_i^-2 Q_i(a0 q^2)/Q_i(a0 q^-2) = prod_{C_ji < 0} prod_{r < -C_ji} Q_j(a0 q omega^r)/Q_j(a0 q^-1 omega^r)
BetheEquation bethe_template(const TwistedType& t, int i) {
    BetheEquation e;
    e.orbit = i;
    SpectralParam q = SpectralParam::q_pow(1), w = SpectralParam::omega(t.M);
    e.lhs = {{i, q.pow(2), 1}, {i, q.pow(-2), -1}};
    for (int j = 0; j < t.num_orbits(); ++j) {
        if (j == i || t.C_sigma[j][i] >= 0) continue;
        for (int r = 0; r < -t.C_sigma[j][i]; ++r) {
            e.rhs.push_back({j, q * w.pow(r), 1});
            e.rhs.push_back({j, q.inverse() * w.pow(r), -1});
        }
    }
    std::sort(e.rhs.begin(), e.rhs.end());
    return e;
}

void run_bae(Runner& run, const SuiteGroup& g) {
    for (auto name : {"A3^2", "D4^3"}) {
        FramePtr f = Frame::folded(twisted_type(name));
        run.check(g, std::string("Bethe equations of ") + name + " match the template", [&](Report& r) {
            BetheSystem sys = bethe_equations(f);
            if (static_cast<int>(sys.equations.size()) != f->type.num_orbits()) r.fail("wrong number of equations");
            for (const auto& e : sys.equations) {
                BetheEquation want = bethe_template(f->type, e.orbit);
                std::vector<BetheFactor> rhs = e.rhs;
                std::sort(rhs.begin(), rhs.end());
                ++r.vectors_checked;
                if (e.sign != -1 || e.u_power != -2 || e.lhs != want.lhs || rhs != want.rhs)
                    r.fail("orbit " + f->label(e.orbit) + ": " + e.str(*f));
            }
        });
        run.check(g, std::string("Bethe equations of ") + name + " at q0 = 5/4 within 1e-20", [&](Report& r) {
            set_precision_bits(200);
            NumericCheck c = numeric_consistency(f, Complex(Real(5) / 4), 3);
            r.vectors_checked = c.samples;
            if (c.samples == 0 || !(c.max_rel_error < Real("1e-20")))
                r.fail("relative error " + c.max_rel_error.str(6, std::ios_base::scientific));
        });
    }
}

}  // namespace

std::vector<SuiteCheck> run_suite(const std::set<std::string>& only,
                                  const std::function<void(const SuiteCheck&)>& progress) {
    using Fn = void (*)(Runner&, const SuiteGroup&);
    static const std::map<std::string, Fn> bodies = {
        {"detf", run_detf},
        {"presentation", run_presentation},
        {"phi-spectrum", run_phi_spectrum},
        {"module-characters", run_module_characters},
        {"counterexamples", run_counterexamples},
        {"qq", run_qq},
        {"tq", run_tq},
        {"folding", run_folding},
        {"vanishing", run_vanishing},
        {"limits", run_limits},
        {"bae", run_bae},
    };
    for (const auto& name : only)
        if (!bodies.count(name)) throw std::invalid_argument("unknown check group '" + name + "'");
    std::vector<SuiteCheck> out;
    Runner run(out, progress);
    for (const auto& g : suite_groups())
        if (only.empty() || only.count(g.name)) bodies.at(g.name)(run, g);
    return out;
}

}  // namespace qtw
