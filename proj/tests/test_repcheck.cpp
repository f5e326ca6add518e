#include "doctest.h"
#include "qtw/qchar_engine.hpp"
#include "qtw/repcheck.hpp"
#include "qtw/closed_forms.hpp"

using namespace qtw;

namespace {

CycloRational q(long twice) { return CycloRational::s_pow(twice); }

CycloRational entry(const GradedModule& m, const std::string& gen, std::vector<int> from, std::vector<int> to) {
    const auto& col = m.op(gen).cols[m.index_of(from)];
    auto it = col.find(m.index_of(to));
    return it == col.end() ? CycloRational(0) : it->second;
}

// Three basis vectors at levels 0, 1, 2 with e lowering the level by one and e_0 / e_eps raising it by two.
GradedModule three_dim(bool twisted, const CycloRational& raise) {
    GradedModule m;
    m.name = "three";
    m.presentation = twisted ? "A2^2" : "A2";
    m.bound = 2;
    m.labels = {{0}, {1}, {2}};
    m.level = {0, 1, 2};
    m.index_names = {"l"};
    auto diag = [](std::vector<long> e) {
        GradedOp o = GradedOp::zero(3);
        for (int v = 0; v < 3; ++v) o.cols[v].emplace(v, q(e[v]));
        return o;
    };
    auto move = [](std::vector<std::pair<int, int>> arrows, const CycloRational& c) {
        GradedOp o = GradedOp::zero(3);
        for (auto [from, to] : arrows) o.cols[from].emplace(to, c);
        return o;
    };
    if (twisted) {
        m.actions["k_1"] = diag({2, 0, -2});
        m.actions["k_eps"] = diag({-4, 0, 4});
        m.actions["e_1"] = move({{1, 0}, {2, 1}}, 1);
        m.actions["e_eps"] = move({{0, 2}}, raise);
    } else {
        m.actions["k1"] = diag({2, -2, 0});
        m.actions["k2"] = diag({0, 2, -2});
        m.actions["k0"] = diag({-2, 0, 2});
        m.actions["e1"] = move({{1, 0}}, 1);
        m.actions["e2"] = move({{2, 1}}, 1);
        m.actions["e0"] = move({{0, 2}}, raise);
    }
    return m;
}

}  // namespace

TEST_CASE("built-in modules load from the coefficient table") {
    auto neg = load_builtin("neg_prefund_A2t", 4);
    CHECK(neg.dim() == 9);
    CHECK(neg.op("e_1").cols[neg.index_of({0, 0})].empty());
    CHECK(entry(neg, "e_1", {1, 1}, {0, 1}) == q(4) - CycloRational(1));
    CHECK(entry(neg, "k_1", {1, 2}, {1, 2}) == q(-6));
    auto x = load_builtin("X_A2t", 4);
    CycloRational c = q(7) / ((q(2) - 1).pow(3) * (q(2) + 1) * (q(4) + 1));
    CHECK(entry(x, "e_eps", {0}, {2}) == c);
    CHECK(entry(x, "e_eps", {1}, {3}) == c * q(-4));
    // top-level images leave the window
    CHECK_FALSE(x.op("e_eps").exact[x.index_of({3})]);
    CHECK(x.op("e_1").exact[x.index_of({4})]);
    auto sl3 = load_builtin("Xtilde_sl3", 3);
    CHECK(sl3.dim() == 10);
    CHECK(entry(sl3, "e1", {1, 2}, {1, 1}) == q(2) * (q(2) + q(-2)));
    CHECK_THROWS_AS(load_builtin("L_plus", 4), RepError);
}

TEST_CASE("presentations hold on the built-in modules") {
    for (const auto& name : builtin_modules()) {
        auto reports = verify_presentation(load_builtin(name, 10));
        CAPTURE(name);
        CHECK(all_ok(reports));
        for (const auto& r : reports) CHECK(r.vectors_checked > 0);
    }
    CHECK(all_ok(verify_presentation(trivial_module("A2^2", 3))));
    CHECK(all_ok(verify_presentation(trivial_module("A2", 3))));
}

TEST_CASE("a flipped sign breaks the cubic Serre relation") {
    auto m = load_builtin("neg_prefund_A2t", 8);
    auto& col = m.actions["e_eps"].cols[m.index_of({0, 0})];
    col[m.index_of({1, 1})] = -col[m.index_of({1, 1})];
    auto reports = verify_presentation(m);
    auto bad = std::find_if(reports.begin(), reports.end(), [](const Report& r) { return !r.ok; });
    REQUIRE(bad != reports.end());
    CHECK(bad->relation.rfind("Serre degree 3", 0) == 0);
    CHECK(bad->first_failure->find("v[0,0]") != std::string::npos);
    CHECK(bad->to_json()["status"] == "fail");
}

TEST_CASE("Drinfeld generators") {
    auto m = load_builtin("neg_prefund_A2t", 6);
    auto d = drinfeld_generators(m, 3);
    CHECK(d.nodes == 1);
    CHECK(d.xplus[0][0].cols == m.op("e_1").cols);
    CHECK(d.phi[0][0].cols == m.op("k_1").cols);
    REQUIRE(d.phi[0].size() == 4);
    CHECK(d.phi[0][1].exact[m.index_of({0, 0})]);
    CHECK_FALSE(d.phi[0][1].exact[m.index_of({3, 3})]);
}

TEST_CASE("the recursion reproduces fundamental q-characters") {
    // sl3 evaluation module: e0 v1 = v3
    auto sl3 = three_dim(false, 1);
    REQUIRE(all_ok(verify_presentation(sl3)));
    auto chi = qchar_from_module(sl3);
    CHECK(chi.terms() == kr_qcharacter(module_frame(sl3), 0, 1, closed::q_pow(-6), 2).terms());
    // twisted 3-dimensional module
    auto tw = three_dim(true, q(2) + 1);
    REQUIRE(all_ok(verify_presentation(tw)));
    auto f = module_frame(tw);
    CHECK(qchar_from_module(tw).terms() == kr_qcharacter(f, 0, 1, SpectralParam(-5, 0), 2).terms());
}

TEST_CASE("l-weights of the negative prefundamental module") {
    auto m = load_builtin("neg_prefund_A2t", 8);
    auto f = module_frame(m);
    auto d = drinfeld_generators(m, 6);
    for (int v = 0; v < m.dim(); ++v) {
        if (m.level[v] > 5) continue;
        auto want = closed::neg_prefund_phi(f, m.labels[v][0], m.labels[v][1]).series(0, 6);
        for (int p = 0; p <= 6; ++p) {
            const auto& col = d.phi[0][p].cols[v];
            CAPTURE(m.label_str(v));
            CHECK(col.size() <= 1);
            CHECK((col.empty() ? CycloRational(0) : col.begin()->second) == want[p]);
        }
    }
    auto chi = qchar_from_module(m);
    CHECK(*chi.trunc() == 5);
    CHECK(chi.window_equal(closed::neg_prefund_form(f, 5)));
    for (const auto& [w, k] : chi.terms()) CHECK(k == 1);
}

TEST_CASE("characters of the other built-in modules") {
    auto pos = qchar_from_module(load_builtin("pos_prefund_A2t", 8));
    auto f = pos.frame_ptr();
    // the printed module is L^+ at q^2
    CHECK(pos.window_equal(closed::pos_prefund_form(f, 5, closed::q_pow(2))));
    CHECK_FALSE(pos.terms() == closed::pos_prefund_form(f, 5).terms());
    auto x = qchar_from_module(load_builtin("X_A2t", 8));
    CHECK(x.window_equal(closed::x_form(f, 5)));
    auto xs = qchar_from_module(load_builtin("Xtilde_sl3", 8));
    CHECK(xs.window_equal(closed::xtilde_sl3_form(xs.frame_ptr(), 5)));
}

TEST_CASE("phi vanishing on polynomial weights") {
    auto pos = load_builtin("pos_prefund_A2t", 7);
    CHECK(highest_lweight(pos) == make_psi(*module_frame(pos), 0, closed::q_pow(2), 1));
    auto r = verify_phi_vanishing(pos, closed::q_pow(2), 10);
    CHECK(r.ok);
    CHECK(r.vectors_checked > 0);
    CHECK_THROWS_AS(verify_phi_vanishing(pos, closed::q_pow(0)), RepError);
    CHECK_THROWS_AS(verify_phi_vanishing(load_builtin("neg_prefund_A2t", 6), closed::q_pow(0)), RepError);
    CHECK_THROWS_AS(verify_phi_vanishing(load_builtin("X_A2t", 6), closed::minus_q_pow(2)), RepError);
}

TEST_CASE("coproduct on highest weight vectors") {
    auto pos = load_builtin("pos_prefund_A2t", 5);
    auto r = verify_coproduct_on_highest(pos, pos);
    CHECK(r.ok);
    CHECK(verify_coproduct_on_highest(pos, load_builtin("X_A2t", 5)).ok);
    CHECK(verify_coproduct_on_highest(load_builtin("Xtilde_sl3", 5), load_builtin("Xtilde_sl3", 5)).ok);
    CHECK_THROWS_AS(verify_coproduct_on_highest(pos, load_builtin("Xtilde_sl3", 5)), RepError);
}
