#include "doctest.h"
#include "qtw/identities.hpp"

#include <set>

using namespace qtw;

namespace {

SpectralParam sp(const std::string& s, int L = 2) { return SpectralParam::parse(s, L); }

using Key = std::pair<int, SpectralParam>;

TQTerm tq_term(long omega, std::vector<std::pair<std::string, long>> lp) {
    TQTerm t;
    t.omega = {omega};
    for (auto& [p, e] : lp) t.lplus[{0, sp(p)}] += e;
    return t;
}

}  // namespace

TEST_CASE("QQ-tilde right-hand sides") {
    auto a2 = Frame::folded(twisted_type("A2^2"));
    CHECK(qq_rhs_factors(*a2, 0, sp("1")) == std::vector<Key>{{0, sp("-1")}});
    auto a3 = Frame::folded(twisted_type("A3^2"));
    CHECK(qq_rhs_factors(*a3, 0, sp("q")) == std::vector<Key>{{1, sp("q")}});
    CHECK(qq_rhs_factors(*a3, 1, sp("q")) == std::vector<Key>{{0, sp("q")}, {0, sp("-q")}});
    auto d4 = Frame::folded(twisted_type("D4^3"));
    CHECK(qq_rhs_factors(*d4, 0, sp("1")) == std::vector<Key>{{1, sp("1")}});
    CHECK(qq_rhs_factors(*d4, 1, sp("1")) == std::vector<Key>{{0, sp("1")}, {0, sp("w^{2}", 6)}, {0, sp("w^{4}", 6)}});
    auto sl3 = Frame::ade(twisted_type("A2^2"));
    CHECK(qq_rhs_factors(*sl3, 0, sp("1")) == std::vector<Key>{{1, sp("1")}});
}

TEST_CASE("QQ-tilde systems hold on small windows") {
    for (auto name : {"A2^2", "A3^2", "D3^2", "D4^3"}) {
        auto f = Frame::folded(twisted_type(name));
        for (int i = 0; i < f->slots; ++i)
            for (auto a : {"1", "q", "-1"}) {
                Report r = verify_qq(f, i, sp(a), 3);
                CAPTURE(r.relation);
                CHECK(r.ok);
                CHECK(r.vectors_checked > 0);
            }
    }
    auto sl3 = Frame::ade(twisted_type("A2^2"));
    CHECK(verify_qq(sl3, 0, sp("1"), 3).ok);
    CHECK(verify_qq(Frame::folded(twisted_type("A2^2")), 0, sp("1"), 0).ok);
}

TEST_CASE("Q-tilde at trunc 0 is a single weight") {
    auto f = Frame::folded(twisted_type("A3^2"));
    auto qt = eval_Qtilde(f, 1, sp("q"), 0);
    REQUIRE(qt.terms().size() == 1);
    CHECK(qt.terms().begin()->first == make_psi_tilde(*f, 1, sp("q^{-1}")) * alpha_half(*f, 1, -1));
    CHECK(eval_Q(f, 0, sp("1"), 5).terms().size() == 1);
}

TEST_CASE("A2^2 TQ relation") {
    auto f = Frame::folded(twisted_type("A2^2"));
    TQRelation rel = tq_relation(f, 0, sp("1"), 4);
    CHECK(rel.check.ok);
    std::vector<TQTerm> expected = {
        tq_term(1, {{"q^-1", 1}, {"q", -1}}),
        tq_term(0, {{"q^3", 1}, {"-1", 1}, {"q", -1}, {"-q^2", -1}}),
        tq_term(-1, {{"-q^4", 1}, {"-q^2", -1}}),
    };
    std::sort(expected.begin(), expected.end());
    CHECK(rel.terms == expected);
    CHECK(rel.denominator == std::map<Key, long>{{{0, sp("q")}, 1}, {{0, sp("-q^2")}, 1}});
    std::set<std::pair<long, std::map<Key, long>>> cleared, want = {
        {1, {{{0, sp("q^-1")}, 1}, {{0, sp("-q^2")}, 1}}},
        {0, {{{0, sp("q^3")}, 1}, {{0, sp("-1")}, 1}}},
        {-1, {{{0, sp("q")}, 1}, {{0, sp("-q^4")}, 1}}},
    };
    for (const auto& t : rel.cleared) cleared.insert({t.omega[0], t.lplus});
    CHECK(cleared == want);
    // a different spectral parameter still balances
    CHECK(tq_relation(f, 0, sp("q"), 4).check.ok);
    CHECK(tq_relation(Frame::folded(twisted_type("A3^2")), 0, sp("1"), 4).check.ok);
    CHECK(tq_relation(Frame::folded(twisted_type("A3^2")), 1, sp("1"), 4).check.ok);
}

TEST_CASE("Bethe equations") {
    auto d4 = Frame::folded(twisted_type("D4^3"));
    BetheEquation e = bethe_equation(d4, 1);
    SpectralParam q = sp("q"), w = SpectralParam::omega(3);
    std::vector<BetheFactor> rhs = {{0, q, 1}, {0, q.inverse(), -1}, {0, q * w, 1}, {0, q.inverse() * w, -1},
                                    {0, q * w.pow(2), 1}, {0, q.inverse() * w.pow(2), -1}};
    CHECK(e.rhs == rhs);
    CHECK(e.lhs == std::vector<BetheFactor>{{1, q.pow(2), 1}, {1, q.pow(-2), -1}});
    CHECK(e.sign == -1);
    CHECK(e.u_power == -2);
    auto a3 = Frame::folded(twisted_type("A3^2"));
    CHECK(bethe_equation(a3, 0).rhs == std::vector<BetheFactor>{{1, q, 1}, {1, q.inverse(), -1}});

    set_precision_bits(200);
    Complex q0(Real(5) / 4);
    for (auto f : {a3, d4}) {
        auto check = numeric_consistency(f, q0, 3);
        CHECK(check.samples == 3);
        CHECK(check.max_rel_error < Real("1e-20"));
    }
    // constant Q data cannot have a root: the equation reads -1 = 1
    std::vector<std::vector<Complex>> none(2);
    Complex r = bethe_residual(e, none, Complex(Real(1)), Complex(Real(1)), q0);
    CHECK(r.abs() > Real("1"));
}

TEST_CASE("counterexamples") {
    auto reports = verify_counterexamples(4);
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) {
        CAPTURE(r.relation);
        CAPTURE(r.first_failure.value_or(""));
        CHECK(r.ok);
    }
}
