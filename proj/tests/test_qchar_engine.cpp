#include "doctest.h"
#include "qtw/qchar_engine.hpp"
#include "qtw/closed_forms.hpp"

using namespace qtw;

namespace {

SpectralParam sp(const std::string& s) { return SpectralParam::parse(s); }

}  // namespace

TEST_CASE("monomial grammar") {
    auto f = Frame::folded(twisted_type("D4^3"));
    auto m = DominantMonomial::parse("Z[1,q^-1]*Z[2,q^{1/2}*w^{2}]^2", *f);
    REQUIRE(m.factors.size() == 3);
    CHECK(m.factors[0] == std::make_pair(0, sp("q^-1")));
    CHECK(m.factors[2].second == SpectralParam(1, 2));
    CHECK(DominantMonomial::parse(m.str(*f), *f).factors == m.factors);
    CHECK_THROWS_AS(DominantMonomial::parse("Z[1,q]^-1", *f), QCharError);
    CHECK_THROWS_AS(DominantMonomial::parse("Z[5,q]", *f), QCharError);
    CHECK_THROWS_AS(DominantMonomial::parse("Z[1,q]Z[1,1]", *f), QCharError);
}

TEST_CASE("sl3 fundamental") {
    auto a = Frame::ade(twisted_type("A2^2"));
    auto c = fm_qcharacter(a, DominantMonomial::parse("Y[1,1]", *a), 4);
    // Y_{1,1} + Y_{1,q^2}^{-1} Y_{2,q} + Y_{2,q^3}^{-1}
    QCharacter expected = QCharacter::term(a, make_Y(*a, 0, sp("1")), 1, 4);
    expected.add(make_Y(*a, 0, sp("q^2")).inverse() * make_Y(*a, 1, sp("q")), 1);
    expected.add(make_Y(*a, 1, sp("q^3")).inverse(), 1);
    CHECK(c.window_equal(expected));
    CHECK(fm_qcharacter(a, DominantMonomial::parse("Y[1,1]", *a), 0).terms().size() == 1);
}

TEST_CASE("dimensions of small modules") {
    auto a2 = Frame::ade(twisted_type("A2^2"));
    CHECK(fm_qcharacter(a2, DominantMonomial::parse("Y[1,1]*Y[2,-q^2]", *a2), 10).total_multiplicity() == 9);
    CHECK(fm_qcharacter(a2, DominantMonomial::parse("Y[1,1]*Y[1,q^2]", *a2), 10).total_multiplicity() == 6);
    CHECK(fm_qcharacter(a2, DominantMonomial::parse("Y[1,1]*Y[1,q^2]*Y[1,q^4]", *a2), 10).total_multiplicity() == 10);
    auto a3 = Frame::ade(twisted_type("A3^2"));
    CHECK(fm_qcharacter(a3, DominantMonomial::parse("Y[2,1]", *a3), 10).total_multiplicity() == 6);
    auto d4 = Frame::ade(twisted_type("D4^3"));
    CHECK(fm_qcharacter(d4, DominantMonomial::parse("Y[1,1]", *d4), 12).total_multiplicity() == 8);
    // KR module at the trivalent node: adjoint plus trivial
    CHECK(fm_qcharacter(d4, DominantMonomial::parse("Y[2,1]", *d4), 12).total_multiplicity() == 29);
    auto tw = Frame::folded(twisted_type("A2^2"));
    CHECK(kr_qcharacter(tw, 0, 2, sp("1"), 10).total_multiplicity() == 6);
    CHECK(kr_qcharacter(tw, 0, 1, sp("1"), 10).terms().size() == 3);
    CHECK_THROWS_AS(fm_qcharacter(d4, DominantMonomial::parse("Y[2,1]", *d4), 12, 5), ResourceError);
}

TEST_CASE("usual characters are Weyl symmetric") {
    // sl3, W^{(1)}_{2}: weights of Sym^2 C^3 each with multiplicity 1
    auto a2 = Frame::ade(twisted_type("A2^2"));
    auto c = fm_qcharacter(a2, DominantMonomial::parse("Y[1,1]*Y[1,q^2]", *a2), 10).usual();
    std::map<std::vector<long>, long> mult;
    for (const auto& [w, k] : c.terms()) mult[w.sexp] += k;
    CHECK(mult.size() == 6);
    for (const auto& [e, k] : mult) {
        CHECK(k == 1);
        // s_1 reflection: e -> e - (e_1/2) * (2 alpha_1 in s-units)
        std::vector<long> r = {-e[0], e[1] + e[0]};
        CHECK(mult.count(r) == 1);
    }
}

TEST_CASE("negative prefundamental window for A2^2") {
    auto f = Frame::folded(twisted_type("A2^2"));
    int k = 0;
    auto c = neg_prefund_qchar(f, 0, sp("1"), 8, &k);
    CHECK(c.window_equal(closed::neg_prefund_form(f, 8)));
    CHECK(k <= 10);
    CHECK(neg_prefund_qchar(f, 0, sp("1"), 0).terms().size() == 1);
    auto pos = pos_prefund_qchar(f, 0, sp("1"), 8);
    CHECK(pos.usual().window_equal(c.usual()));
    // (1-u) sum_k floor((k+2)/2) [alpha]^{-k}
    for (int h = 0; h <= 8; ++h)
        CHECK(pos.multiplicity(make_psi(*f, 0, sp("1"), 1) * alpha_half(*f, 0, -2 * h)) == (h + 2) / 2);
    // shifting the spectral parameter shifts the roots
    auto shifted = neg_prefund_qchar(f, 0, sp("q"), 3);
    CHECK(shifted.total_multiplicity() == neg_prefund_qchar(f, 0, sp("1"), 3).total_multiplicity());
    CHECK(shifted.multiplicity(make_psi(*f, 0, sp("q"), -1)) == 1);
}

TEST_CASE("normalized KR windows stabilize") {
    for (auto name : {"A2^2", "A3^2", "D4^3"}) {
        auto f = Frame::folded(twisted_type(name));
        for (int slot = 0; slot < f->slots; ++slot)
            for (int h = 0; h <= 3; ++h) {
                auto base = normalized_kr(f, slot, h + 1, h);
                for (int k = h + 2; k <= h + 3; ++k) CHECK(normalized_kr(f, slot, k, h).window_equal(base));
            }
    }
}

TEST_CASE("normalized X character") {
    auto f = Frame::folded(twisted_type("A2^2"));
    auto x = normalized_X_qchar(f, 0, sp("1"), 5);
    CHECK(x.multiplicity(make_psi_tilde(*f, 0, sp("1"))) == 1);
    // times the usual character 1/(1-[-alpha]) gives [Psi-tilde] chi back
    auto back = x * geometric_alpha(f, 0, 5);
    auto expected = chi_string(f, 0, sp("1"), 5) * make_psi_tilde(*f, 0, sp("1"));
    CHECK(back.window_equal(expected));
    CHECK(normalized_X_qchar(f, 0, sp("1"), 0).terms().size() == 1);
}
