#include "doctest.h"
#include "qtw/lweights.hpp"

#include <random>

using namespace qtw;

namespace {

const char* kTypes[] = {"A2^2", "A3^2", "A4^2", "D3^2", "D4^2", "E6^2", "D4^3"};

SpectralParam sp(const std::string& s, int L = 2) { return SpectralParam::parse(s, L); }

CycloRational q_(long e) { return CycloRational::s_pow(2 * e); }

}  // namespace

TEST_CASE("spectral parameter grammar") {
    CHECK(sp("q^{1/2}") == SpectralParam(1, 0));
    CHECK(sp("q^{-3}") == SpectralParam(-6, 0));
    CHECK(sp("q^2*w^{1}") == SpectralParam(4, 3));
    CHECK(sp("-q") == SpectralParam(2, 3));
    CHECK(sp("w^{2}", 6) == SpectralParam(0, 2));
    CHECK(sp("1") == SpectralParam());
    CHECK(sp("q^{-1}*w^{1}").str() == "q^{-1}*w^{1}");
    CHECK(SpectralParam(0, 2).str(6) == "w^{2}");
    CHECK(SpectralParam(0, 2).str(2) == "w^{2}");  // not an L=2 point, shown in sixths
    for (auto t : {"q^{3/2}*w^{1}", "w^{1}", "q^{-2}"}) CHECK(sp(sp(t).str()) == sp(t));
    CHECK_THROWS_AS(sp("x^2"), LWeightError);
    CHECK_THROWS_AS(sp("q^{a}"), LWeightError);
    CHECK_THROWS_AS(sp(""), LWeightError);
    CHECK(sp("q^{1}*w^{1}").value() == -q_(1));
    CHECK(SpectralParam::omega(3).pow(3) == SpectralParam());
}

TEST_CASE("l-weight group laws") {
    auto f = Frame::folded(twisted_type("D4^3"));
    LWeight x = make_Z(*f, 0, sp("q")) * make_psi(*f, 1, sp("-1"), -1);
    LWeight y = make_A(*f, 1, sp("q^{-2}"));
    CHECK((x * x.inverse()).is_identity());
    CHECK(x * y == y * x);
    CHECK((x / y) * y == x);
    CHECK(x.pow(3) == x * x * x);
    CHECK((make_psi(*f, 0, sp("1"), 1) * make_psi(*f, 0, sp("1"), -1)).is_identity());
}

TEST_CASE("A2^2 fundamental l-weight expansion") {
    auto f = Frame::folded(twisted_type("A2^2"));
    LWeight z = make_Z(*f, 0, sp("1"));
    // q (1 - q^{-1} u)/(1 - q u) = q + sum_{k>=1} (q^{k+1} - q^{k-1}) u^k
    auto c = z.series(0, 6);
    CHECK(c[0] == q_(1));
    for (int k = 1; k <= 6; ++k) CHECK(c[k] == q_(k + 1) - q_(k - 1));
    CHECK(z.str(*f) == "1:[q^{1} (1-q^{-1}u)^1 (1-q^{1}u)^-1]");
}

TEST_CASE("psi-tilde and fold of a pair of fundamentals for A2^2") {
    auto t = twisted_type("A2^2");
    auto f = Frame::folded(t);
    auto a = Frame::ade(t);
    // (1 + q u)/(1 - u)
    LWeight pt = make_psi_tilde(*f, 0, sp("1"));
    auto c = pt.series(0, 5);
    CHECK(c[0] == CycloRational(1));
    for (int k = 1; k <= 5; ++k) CHECK(c[k] == CycloRational(1) + q_(1));
    LWeight lhs = fold_weight(*f, make_Y(*a, 0, sp("1")) * make_Y(*a, 1, sp("-q^2")));
    CHECK(lhs == make_Z(*f, 0, sp("1")) * make_Z(*f, 0, sp("q^2")));
}

TEST_CASE("fold is compatible with the twist") {
    for (auto name : kTypes) {
        std::string type_name = name;
        CAPTURE(type_name);
        auto t = twisted_type(name);
        auto f = Frame::folded(t);
        auto a = Frame::ade(t);
        SpectralParam om = SpectralParam::omega(t.M);
        for (int node = 0; node < t.rank; ++node) {
            int o = t.orbit_of[node];
            // Y_{sigma^k(i), a} folds to Z_{i, a omega^k}
            int k = 0;
            while (t.sigma_pow(t.rep[o], k) != node) ++k;
            auto b = sp("q^{1/2}");
            CHECK(fold_weight(*f, make_Y(*a, node, b)) == make_Z(*f, o, b * om.pow(k)));
            CHECK(fold_weight(*f, make_A_ade(*a, node, b)) == make_A(*f, o, b * om.pow(k)));
        }
        for (int o = 0; o < f->slots; ++o) {
            CHECK(twist_condition(*f, make_Z(*f, o, sp("q"))));
            CHECK(twist_condition(*f, make_psi_tilde(*f, o, sp("-q"))));
            // constant part of A is [alpha]
            CHECK(make_A(*f, o, sp("1")).constant_part() == alpha_half(*f, o, 2));
            auto h = height_between(*f, make_Z(*f, o, sp("1")), make_Z(*f, o, sp("1")) * make_A(*f, o, sp("q")).inverse());
            REQUIRE(h);
            for (int j = 0; j < f->slots; ++j) CHECK((*h)[j] == (j == o ? 1 : 0));
        }
        for (int node = 0; node < t.rank; ++node)
            CHECK(make_A_ade(*a, node, sp("1")).constant_part() == alpha_half(*a, node, 2));
    }
}

TEST_CASE("fixed orbit of D4^3") {
    auto t = twisted_type("D4^3");
    auto f = Frame::folded(t);
    LWeight z = make_Z(*f, 1, sp("1"));
    // q^3 (1 - q^{-3} u^3)/(1 - q^3 u^3)
    auto c = z.series(1, 9);
    for (int k = 0; k <= 9; ++k) {
        CycloRational e = k == 0 ? q_(3) : (k % 3 == 0 ? q_(3 + k) - q_(k - 3) : CycloRational(0));
        CHECK(c[k] == e);
    }
    LWeight p = make_psi(*f, 1, sp("q"), 1);
    auto pc = p.series(1, 4);
    CHECK(pc[3] == -q_(3));
    CHECK(pc[1].is_zero());
    CHECK(z.shifted(SpectralParam::omega(3)) == z);
    LWeight bad(2);
    bad.add_root(1, sp("1"), 1);
    CHECK_FALSE(twist_condition(*f, bad));
}

TEST_CASE("fold is a ring homomorphism on characters") {
    std::mt19937 rng(7);
    for (auto name : {"A2^2", "A3^2", "D4^3"}) {
        auto t = twisted_type(name);
        auto f = Frame::folded(t);
        auto a = Frame::ade(t);
        auto random_char = [&] {
            LWeight top = identity_weight(*a);
            for (int i = 0; i < t.rank; ++i) top *= make_Y(*a, i, SpectralParam(long(rng() % 5) - 2, rng() % 6));
            QCharacter c = QCharacter::term(a, top, 1);
            LWeight w = top;
            for (int s = 0; s < 4; ++s) {
                w *= make_A_ade(*a, rng() % t.rank, SpectralParam(long(rng() % 7) - 3, rng() % 6)).inverse();
                c.insert(w, long(rng() % 5) - 2);
            }
            return c;
        };
        for (int trial = 0; trial < 5; ++trial) {
            QCharacter x = random_char(), y = random_char();
            QCharacter lhs = fold_char(f, x * y), rhs = fold_char(f, x) * fold_char(f, y);
            CHECK(lhs.window_equal(rhs));
            CHECK(fold_char(f, x + y).window_equal(fold_char(f, x) + fold_char(f, y)));
            CHECK(fold_char(f, x).usual().total_multiplicity() == x.total_multiplicity());
        }
    }
}

TEST_CASE("truncated arithmetic") {
    auto t = twisted_type("A2^2");
    auto f = Frame::folded(t);
    LWeight z = make_Z(*f, 0, sp("1"));
    LWeight a_inv = make_A(*f, 0, sp("q")).inverse();
    QCharacter x = QCharacter::term(f, z, 1, 4);
    x.insert(z * a_inv, 2);
    x.insert(z * a_inv * a_inv, -1);
    QCharacter inv = x.inverse();
    QCharacter one = x * inv;
    CHECK(one.window_equal(QCharacter::term(f, identity_weight(*f), 1, 4)));
    CHECK(one.trunc() == 4);
    // terms beyond the window are dropped
    QCharacter y = QCharacter::term(f, z, 1, 1);
    y.insert(z * a_inv * a_inv, 5);
    CHECK(y.terms().size() == 1);
    CHECK_THROWS_AS(y.insert(z * make_A(*f, 0, sp("1")), 1), LWeightError);
    // sum with a lower leading weight shifts the window
    QCharacter lower = QCharacter::term(f, z * a_inv, 1, 2);
    QCharacter s = y + lower;
    CHECK(s.trunc() == 1);
    CHECK(s.multiplicity(z * a_inv) == 1);
    auto diff = s.first_difference(y);
    REQUIRE(diff);
    CHECK(diff->second == std::make_pair(1L, 0L));
    auto j = s.to_json();
    CHECK(j["terms"].size() == 2);
    CHECK(j["terms"][0]["multiplicity"].is_number());
}
