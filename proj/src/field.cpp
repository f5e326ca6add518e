#include "qtw/field.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace qtw {

// ---------------------------------------------------------------- HalfInt

HalfInt HalfInt::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return HalfInt(std::stol(s));
        long num = std::stol(s.substr(0, slash));
        long den = std::stol(s.substr(slash + 1));
        if (den == 1) return HalfInt(num);
        if (den == 2) return from_twice(num);
    } catch (const std::exception&) {
    }
    throw FieldError("not a half-integer: " + s);
}

long HalfInt::as_integer() const {
    if (!is_integer()) throw FieldError("half-integer " + str() + " is not an integer");
    return t_ / 2;
}

std::string HalfInt::str() const {
    if (is_integer()) return std::to_string(t_ / 2);
    return std::to_string(t_) + "/2";
}

// ---------------------------------------------------------------- CycloNum

CycloNum::CycloNum(Rat a, Rat b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
}

CycloNum CycloNum::root_of_unity(long m, int L) {
    if (L <= 0 || 6 % L != 0) throw FieldError("root of unity of order " + std::to_string(L) + " not in Q(z)");
    long e = ((m * (6 / L)) % 6 + 6) % 6;
    CycloNum z6(1, 1);
    CycloNum r(1);
    for (long i = 0; i < e; ++i) r *= z6;
    return r;
}

CycloNum CycloNum::inverse() const {
    Rat n = norm();
    if (sgn(n) == 0) throw FieldError("division by zero");
    CycloNum c = conj();
    return CycloNum(c.a_ / n, c.b_ / n);
}

CycloNum& CycloNum::operator+=(const CycloNum& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

CycloNum& CycloNum::operator*=(const CycloNum& o) {
    if (sgn(b_) == 0 && sgn(o.b_) == 0) {
        a_ *= o.a_;
        return *this;
    }
    Rat bd = b_ * o.b_;
    Rat na = a_ * o.a_ - bd;
    Rat nb = a_ * o.b_ + b_ * o.a_ - bd;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
}

std::string CycloNum::str() const {
    if (sgn(b_) == 0) return a_.get_str();
    std::string s;
    if (sgn(a_) != 0) s = a_.get_str();
    if (b_ == 1) s += s.empty() ? "z" : "+z";
    else if (b_ == -1) s += "-z";
    else {
        if (sgn(b_) > 0 && !s.empty()) s += "+";
        s += b_.get_str() + "*z";
    }
    return sgn(a_) == 0 ? s : "(" + s + ")";
}

// ---------------------------------------------------------------- Z[z] scalars and polynomials

namespace {

struct Zz {
    Int a, b;
    bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
};

Zz zmul(const Zz& x, const Zz& y) {
    Int bd = x.b * y.b;
    return {x.a * y.a - bd, x.a * y.b + x.b * y.a - bd};
}

bool is_unit_root(const CycloNum& u, int& t) {
    CycloNum w(1);
    CycloNum z6(1, 1);
    for (t = 0; t < 6; ++t) {
        if (w == u) return true;
        w *= z6;
    }
    return false;
}

Zz coeff(const ZzPoly& p, std::size_t i) {
    Zz c;
    if (i < p.re.size()) c.a = p.re[i];
    if (i < p.im.size()) c.b = p.im[i];
    return c;
}

void ensure_im(ZzPoly& p) {
    if (p.im.size() < p.re.size()) p.im.resize(p.re.size());
}

std::vector<Int> real_mul(const std::vector<Int>& x, const std::vector<Int>& y) {
    if (x.empty() || y.empty()) return {};
    std::vector<Int> r(x.size() + y.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (sgn(x[i]) == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j)
            mpz_addmul(r[i + j].get_mpz_t(), x[i].get_mpz_t(), y[j].get_mpz_t());
    }
    return r;
}

void vec_sub(std::vector<Int>& x, const std::vector<Int>& y) {
    if (x.size() < y.size()) x.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] -= y[i];
}

void vec_add(std::vector<Int>& x, const std::vector<Int>& y) {
    if (x.size() < y.size()) x.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
}

ZzPoly zp_mul(const ZzPoly& x, const ZzPoly& y) {
    ZzPoly r;
    if (x.is_zero() || y.is_zero()) return r;
    if (x.is_real() && y.is_real()) {
        r.re = real_mul(x.re, y.re);
    } else if (x.is_real()) {
        r.re = real_mul(x.re, y.re);
        r.im = real_mul(x.re, y.im);
    } else if (y.is_real()) {
        r.re = real_mul(x.re, y.re);
        r.im = real_mul(x.im, y.re);
    } else {
        auto pp = real_mul(x.re, y.re);
        auto qq = real_mul(x.im, y.im);
        auto cross = real_mul(x.re, y.im);
        vec_add(cross, real_mul(x.im, y.re));
        r.re = pp;
        vec_sub(r.re, qq);
        r.im = std::move(cross);
        vec_sub(r.im, qq);
    }
    r.trim();
    return r;
}

// acc += k * s^shift * x
void zp_axpy(ZzPoly& acc, const Zz& k, long shift, const ZzPoly& x) {
    std::size_t n = x.re.size() + shift;
    if (acc.re.size() < n) acc.re.resize(n);
    bool cplx = sgn(k.b) != 0 || !x.is_real();
    if (cplx || !acc.im.empty()) ensure_im(acc);
    if (cplx && acc.im.size() < n) acc.im.resize(n);
    for (std::size_t i = 0; i < x.re.size(); ++i) {
        Zz c = zmul(k, coeff(x, i));
        acc.re[i + shift] += c.a;
        if (sgn(c.b) != 0) acc.im[i + shift] += c.b;
    }
    acc.trim();
}

ZzPoly zp_scale(const ZzPoly& x, const Zz& k) {
    ZzPoly r;
    zp_axpy(r, k, 0, x);
    return r;
}

ZzPoly zp_one() {
    ZzPoly r;
    r.re = {Int(1)};
    return r;
}

bool zp_is_one(const ZzPoly& p) { return p.re.size() == 1 && p.re[0] == 1 && p.im.empty(); }

Int zp_content(const ZzPoly& p) {
    Int g = 0;
    for (auto& c : p.re) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (auto& c : p.im) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

// Rewrites p as k * s^shift * p' with p' primitive; returns (k, shift).
std::pair<CycloNum, long> zp_normalize(ZzPoly& p) {
    p.trim();
    if (p.is_zero()) return {CycloNum(0), 0};
    long shift = 0;
    while (coeff(p, shift).is_zero()) ++shift;
    if (shift > 0) {
        p.re.erase(p.re.begin(), p.re.begin() + shift);
        if (!p.im.empty()) p.im.erase(p.im.begin(), p.im.begin() + shift);
    }
    CycloNum k(1);
    Zz lc = coeff(p, p.re.size() - 1);
    if (sgn(lc.b) != 0) {
        Zz cj{lc.a - lc.b, -lc.b};
        p = zp_scale(p, cj);
        k = CycloNum(Rat(cj.a), Rat(cj.b)).inverse();
    }
    Int g = zp_content(p);
    if (g != 1) {
        for (auto& c : p.re) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        for (auto& c : p.im) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        k *= CycloNum(g);
    }
    if (sgn(p.re.back()) < 0) {
        for (auto& c : p.re) c = -c;
        for (auto& c : p.im) c = -c;
        k = -k;
    }
    return {k, shift};
}

// ---------------------------------------------------------------- polynomials over Q(z)

QzPoly to_qz(const ZzPoly& p) {
    QzPoly r(p.re.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        Zz c = coeff(p, i);
        r[i] = CycloNum(Rat(c.a), Rat(c.b));
    }
    return r;
}

void qz_trim(QzPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// p = k * result with result in Z[z][s] (not normalized).
std::pair<CycloNum, ZzPoly> from_qz(const QzPoly& p) {
    Int l = 1;
    for (auto& c : p) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.a().get_den_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.b().get_den_mpz_t());
    }
    ZzPoly r;
    r.re.resize(p.size());
    r.im.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        Rat a = p[i].a() * l, b = p[i].b() * l;
        r.re[i] = a.get_num();
        r.im[i] = b.get_num();
    }
    r.trim();
    return {CycloNum(Rat(1, 1) / Rat(l)), r};
}

void qz_divmod(const QzPoly& a, const QzPoly& b, QzPoly& q, QzPoly& r) {
    r = a;
    qz_trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, CycloNum(0));
    CycloNum inv = b.back().inverse();
    while (r.size() >= b.size() && !r.empty()) {
        std::size_t sh = r.size() - b.size();
        CycloNum c = r.back() * inv;
        q[sh] = c;
        for (std::size_t j = 0; j < b.size(); ++j) r[sh + j] -= c * b[j];
        r.pop_back();
        qz_trim(r);
    }
}

QzPoly qz_gcd(QzPoly a, QzPoly b) {
    qz_trim(a);
    qz_trim(b);
    while (!b.empty()) {
        QzPoly q, r;
        qz_divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        CycloNum inv = a.back().inverse();
        for (auto& c : a) c *= inv;
    }
    return a;
}

// ---------------------------------------------------------------- modular images

constexpr std::uint64_t kP = (std::uint64_t(1) << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kP);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t cube_root_mod() {
    static const std::uint64_t w = [] {
        for (std::uint64_t g = 2;; ++g) {
            std::uint64_t c = powmod(g, (kP - 1) / 3);
            if (c != 1) return c;
        }
    }();
    return w;
}

std::uint64_t modp(const Int& x) { return mpz_fdiv_ui(x.get_mpz_t(), kP); }

std::vector<std::uint64_t> to_modp(const ZzPoly& p) {
    std::uint64_t w = cube_root_mod();
    std::vector<std::uint64_t> r(p.re.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = modp(p.re[i]);
        if (i < p.im.size() && sgn(p.im[i]) != 0) r[i] = (r[i] + mulmod(modp(p.im[i]), w)) % kP;
    }
    return r;
}

bool modp_divides(std::vector<std::uint64_t> p, const std::vector<std::uint64_t>& f) {
    std::size_t df = f.size() - 1;
    for (std::size_t i = p.size(); i-- > df;) {
        std::uint64_t c = p[i];
        if (c == 0) continue;
        for (std::size_t j = 0; j < df; ++j) {
            std::uint64_t t = mulmod(c, f[j]);
            p[i - df + j] = (p[i - df + j] + kP - t) % kP;
        }
    }
    for (std::size_t j = 0; j < df && j < p.size(); ++j)
        if (p[j] != 0) return false;
    return true;
}

// ---------------------------------------------------------------- cyclotomic factor registry

long euler_phi(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

bool divide_monic(const ZzPoly& p, const ZzPoly& f, ZzPoly& q);

class Registry {
public:
    Registry() { slots_.reserve(1 << 16); }

    const detail::Factor& get(int id) const { return *slots_[id]; }

    int id(int d, int part) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_.find({d, part});
        if (it != index_.end()) return it->second;
        if (part == 0) {
            add(d, 0, cyclo_locked(d));
        } else {
            ZzPoly phi = cyclo_locked(d);
            QzPoly bin(d / 3 + 1, CycloNum(0));
            bin[0] = -CycloNum::zeta();
            bin.back() = CycloNum(1);
            QzPoly g = qz_gcd(to_qz(phi), bin);
            ZzPoly h1 = from_qz(g).second;
            ZzPoly h2;
            if (!divide_monic(phi, h1, h2)) throw FieldError("internal: cyclotomic split failed");
            add(d, 1, h1);
            add(d, 2, h2);
        }
        return index_.at({d, part});
    }

    ZzPoly cyclotomic(int d) {
        std::lock_guard<std::mutex> lock(mu_);
        return cyclo_locked(d);
    }

private:
    void add(int d, int part, const ZzPoly& poly) {
        auto f = std::make_unique<detail::Factor>();
        f->poly = poly;
        f->d = d;
        f->part = part;
        f->modp = to_modp(poly);
        if (slots_.size() == slots_.capacity()) throw FieldError("factor registry exhausted");
        index_[{d, part}] = static_cast<int>(slots_.size());
        slots_.push_back(std::move(f));
    }

    ZzPoly cyclo_locked(int d) {
        auto it = cyclo_.find(d);
        if (it != cyclo_.end()) return it->second;
        ZzPoly p;
        p.re.assign(d + 1, Int(0));
        p.re[0] = -1;
        p.re[d] = 1;
        for (int e = 1; e < d; ++e) {
            if (d % e) continue;
            ZzPoly q;
            divide_monic(p, cyclo_locked(e), q);
            p = q;
        }
        cyclo_[d] = p;
        return p;
    }

    std::mutex mu_;
    std::vector<std::unique_ptr<detail::Factor>> slots_;
    std::map<std::pair<int, int>, int> index_;
    std::map<int, ZzPoly> cyclo_;
};

Registry& registry() {
    static Registry r;
    return r;
}

bool divide_monic(const ZzPoly& p, const ZzPoly& f, ZzPoly& q) {
    std::size_t df = f.re.size() - 1;
    if (p.re.size() < f.re.size()) return false;
    std::vector<Int> re = p.re, im = p.im;
    bool cplx = !p.is_real() || !f.is_real();
    if (cplx) im.resize(re.size());
    std::size_t nq = re.size() - df;
    q = ZzPoly{};
    q.re.assign(nq, Int(0));
    if (cplx) q.im.assign(nq, Int(0));
    for (std::size_t i = re.size(); i-- > df;) {
        std::size_t k = i - df;
        if (sgn(re[i]) == 0 && (!cplx || sgn(im[i]) == 0)) continue;
        Zz c{re[i], cplx ? im[i] : Int(0)};
        q.re[k] = c.a;
        if (cplx) q.im[k] = c.b;
        for (std::size_t j = 0; j <= df; ++j) {
            if (f.is_real()) {
                if (sgn(f.re[j]) == 0) continue;
                mpz_submul(re[k + j].get_mpz_t(), c.a.get_mpz_t(), f.re[j].get_mpz_t());
                if (cplx) mpz_submul(im[k + j].get_mpz_t(), c.b.get_mpz_t(), f.re[j].get_mpz_t());
            } else {
                Zz t = zmul(c, coeff(f, j));
                re[k + j] -= t.a;
                im[k + j] -= t.b;
            }
        }
    }
    for (std::size_t j = 0; j < df; ++j)
        if (sgn(re[j]) != 0 || (cplx && sgn(im[j]) != 0)) return false;
    q.trim();
    return true;
}

bool divide_factor(const ZzPoly& p, int id, ZzPoly& q) {
    const auto& f = registry().get(id);
    if (p.re.size() < f.poly.re.size()) return false;
    if (!modp_divides(to_modp(p), f.modp)) return false;
    return divide_monic(p, f.poly, q);
}

// Strips every power of factor `id` out of p; returns the multiplicity removed.
int strip_factor(ZzPoly& p, int id, int max_times = 1 << 30) {
    int n = 0;
    const auto& f = registry().get(id);
    auto pm = to_modp(p);
    while (n < max_times && p.re.size() >= f.poly.re.size() && modp_divides(pm, f.modp)) {
        ZzPoly q;
        if (!divide_monic(p, f.poly, q)) break;
        p = std::move(q);
        pm = to_modp(p);
        ++n;
    }
    return n;
}

ZzPoly expand_den(const CycloRational::Den& den) {
    ZzPoly r = zp_one();
    for (auto& [id, e] : den)
        for (int k = 0; k < e; ++k) r = zp_mul(r, registry().get(id).poly);
    return r;
}

void den_add(CycloRational::Den& den, int id, int e) {
    if (e == 0) return;
    auto it = std::lower_bound(den.begin(), den.end(), std::make_pair(id, 0),
                               [](auto& a, auto& b) { return a.first < b.first; });
    if (it != den.end() && it->first == id) {
        it->second += e;
        if (it->second == 0) den.erase(it);
    } else {
        den.insert(it, {id, e});
    }
}

// Factors of s^n - u (u a 6th root of unity, u = zeta_6^t) among the base factors.
std::vector<int> binomial_factors(long n, int t) {
    std::vector<int> ids;
    int ord = 6 / std::gcd(t, 6);
    long N = n * ord;
    for (long d = 1; d <= N; ++d) {
        if (N % d) continue;
        // zeta_d^k satisfies x^n = zeta_6^t iff 6 n k = t d (mod 6 d)
        auto root_ok = [&](long k) { return (((6 * n * k - t * d) % (6 * d)) + 6 * d) % (6 * d) == 0; };
        if (d % 3) {
            if (root_ok(1)) ids.push_back(registry().id(static_cast<int>(d), 0));
        } else {
            if (root_ok(1)) ids.push_back(registry().id(static_cast<int>(d), 1));
            if (root_ok(d - 1)) ids.push_back(registry().id(static_cast<int>(d), 2));
        }
    }
    return ids;
}

// Splits p (primitive, p(0) != 0) into base factors and a leftover.
void factor_out(ZzPoly& p, CycloRational::Den& den) {
    long deg = p.degree();
    if (deg <= 0) return;
    std::size_t nz = 0, last = 0;
    for (std::size_t i = 0; i < p.re.size(); ++i)
        if (!coeff(p, i).is_zero()) ++nz, last = i;
    if (nz == 2) {
        Zz a = coeff(p, last), b = coeff(p, 0);
        CycloNum u = -CycloNum(Rat(b.a), Rat(b.b)) / CycloNum(Rat(a.a), Rat(a.b));
        int t;
        if (is_unit_root(u, t)) {
            for (int id : binomial_factors(static_cast<long>(last), t)) {
                ZzPoly q;
                if (!divide_factor(p, id, q)) throw FieldError("internal: binomial factorization failed");
                p = std::move(q);
                den_add(den, id, 1);
            }
            return;
        }
    }
    bool cplx = !p.is_real();
    for (long d = 1; d <= 6 * deg + 6 && p.degree() > 0; ++d) {
        long ph = euler_phi(d);
        if (d % 3 == 0) {
            if (ph / 2 > p.degree()) continue;
            if (ph <= p.degree()) {
                ZzPoly phi = registry().cyclotomic(static_cast<int>(d));
                if (modp_divides(to_modp(p), to_modp(phi))) {
                    int n1 = strip_factor(p, registry().id(static_cast<int>(d), 1));
                    int n2 = strip_factor(p, registry().id(static_cast<int>(d), 2));
                    den_add(den, registry().id(static_cast<int>(d), 1), n1);
                    den_add(den, registry().id(static_cast<int>(d), 2), n2);
                    continue;
                }
            }
            if (cplx && d <= 90) {
                for (int part = 1; part <= 2; ++part) {
                    int id = registry().id(static_cast<int>(d), part);
                    den_add(den, id, strip_factor(p, id));
                }
            }
        } else {
            if (ph > p.degree()) continue;
            int id = registry().id(static_cast<int>(d), 0);
            den_add(den, id, strip_factor(p, id));
        }
    }
}

ZzPoly reverse(const ZzPoly& p) {
    ZzPoly r = p;
    std::reverse(r.re.begin(), r.re.end());
    if (!r.im.empty()) {
        r.im.resize(p.re.size());
        std::reverse(r.im.begin(), r.im.end());
    }
    r.trim();
    return r;
}

}  // namespace

void ZzPoly::trim() {
    std::size_t n = std::max(re.size(), im.size());
    re.resize(n);
    if (!im.empty()) im.resize(n);
    while (n > 0 && sgn(re[n - 1]) == 0 && (im.empty() || sgn(im[n - 1]) == 0)) --n;
    re.resize(n);
    if (!im.empty()) {
        im.resize(n);
        if (std::all_of(im.begin(), im.end(), [](const Int& c) { return sgn(c) == 0; })) im.clear();
    }
}

const detail::Factor& detail::factor(int id) { return registry().get(id); }

// ---------------------------------------------------------------- CycloRational

CycloRational::CycloRational(const CycloNum& c) {
    if (c.is_zero()) return;
    c_ = c;
    p_ = zp_one();
}

CycloRational CycloRational::s_pow(long k) {
    CycloRational r(1);
    r.v_ = k;
    return r;
}

CycloRational CycloRational::laurent(long low, const std::vector<CycloNum>& coeffs) {
    auto [k, zz] = from_qz(coeffs);
    return assemble(k, low, zz, {}, {});
}

CycloRational CycloRational::binomial(long n, const CycloNum& u) {
    if (n == 0) return CycloRational(CycloNum(1) - u);
    std::vector<CycloNum> c(std::labs(n) + 1, CycloNum(0));
    if (n > 0) {
        c.back() = 1;
        c[0] = -u;
        return laurent(0, c);
    }
    c[0] = 1;
    c.back() = -u;
    return laurent(n, c);
}

CycloRational CycloRational::assemble(CycloNum c, long v, ZzPoly p, Den den, ZzPoly r) {
    CycloRational x;
    auto [kp, sp] = zp_normalize(p);
    if (p.is_zero() || c.is_zero()) return x;
    c *= kp;
    v += sp;
    if (!r.is_zero()) {
        auto [kr, sr] = zp_normalize(r);
        c /= kr;
        v -= sr;
        if (r.degree() == 0) r = ZzPoly{};
    }
    x.c_ = std::move(c);
    x.v_ = v;
    x.p_ = std::move(p);
    x.den_ = std::move(den);
    x.r_ = std::move(r);
    return x;
}

bool CycloRational::is_one() const {
    return zp_is_one(p_) && v_ == 0 && den_.empty() && r_.is_zero() && c_.is_one();
}

CycloNum CycloRational::constant() const {
    if (is_zero()) return CycloNum(0);
    if (!is_constant()) throw FieldError("not a constant: " + str());
    return c_;
}

CycloRational operator-(CycloRational x) {
    x.c_ = -x.c_;
    return x;
}

CycloRational CycloRational::inverse() const {
    if (is_zero()) throw FieldError("division by zero");
    ZzPoly p = p_;
    Den den;
    factor_out(p, den);
    ZzPoly num = zp_mul(expand_den(den_), r_.is_zero() ? zp_one() : r_);
    return assemble(c_.inverse(), -v_, std::move(num), std::move(den), p.degree() > 0 ? p : ZzPoly{});
}

CycloRational& CycloRational::operator*=(const CycloRational& o) {
    if (is_zero()) return *this;
    if (o.is_zero()) return *this = CycloRational();
    ZzPoly px = p_, py = o.p_;
    Den dx = den_, dy = o.den_;
    for (auto& [id, e] : dx) {
        int n = strip_factor(py, id, e);
        e -= n;
    }
    for (auto& [id, e] : dy) {
        int n = strip_factor(px, id, e);
        e -= n;
    }
    CycloNum c = c_ * o.c_;
    auto cancel_residual = [&c](ZzPoly& num, const ZzPoly& res, ZzPoly& res_out) {
        res_out = res;
        if (res.is_zero() || num.degree() == 0) return;
        QzPoly g = qz_gcd(to_qz(num), to_qz(res));
        if (g.size() <= 1) return;
        QzPoly q, rem;
        qz_divmod(to_qz(num), g, q, rem);
        auto [kn, zn] = from_qz(q);
        qz_divmod(to_qz(res), g, q, rem);
        auto [kr, zr] = from_qz(q);
        num = zn;
        res_out = zr;
        c *= kn / kr;
    };
    ZzPoly rx, ry;
    cancel_residual(py, r_, rx);
    cancel_residual(px, o.r_, ry);
    Den den = dx;
    for (auto& [id, e] : dy) den_add(den, id, e);
    den.erase(std::remove_if(den.begin(), den.end(), [](auto& f) { return f.second == 0; }), den.end());
    ZzPoly r = rx;
    if (!ry.is_zero()) r = r.is_zero() ? ry : zp_mul(r, ry);
    *this = assemble(c, v_ + o.v_, zp_mul(px, py), std::move(den), std::move(r));
    return *this;
}

CycloRational& CycloRational::operator+=(const CycloRational& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    Den den;
    {
        std::size_t i = 0, j = 0;
        while (i < den_.size() || j < o.den_.size()) {
            if (j == o.den_.size() || (i < den_.size() && den_[i].first < o.den_[j].first)) den.push_back(den_[i++]);
            else if (i == den_.size() || o.den_[j].first < den_[i].first) den.push_back(o.den_[j++]);
            else {
                den.push_back({den_[i].first, std::max(den_[i].second, o.den_[j].second)});
                ++i, ++j;
            }
        }
    }
    auto missing = [&den](const Den& have) {
        Den m;
        for (auto& [id, e] : den) {
            int h = 0;
            for (auto& [id2, e2] : have)
                if (id2 == id) h = e2;
            if (e > h) m.push_back({id, e - h});
        }
        return expand_den(m);
    };
    CycloNum cx = c_, cy = o.c_;
    ZzPoly mx = missing(den_), my = missing(o.den_);
    ZzPoly r;
    if (r_ == o.r_) {
        r = r_;
    } else if (r_.is_zero()) {
        r = o.r_;
        mx = zp_mul(mx, o.r_);
    } else if (o.r_.is_zero()) {
        r = r_;
        my = zp_mul(my, r_);
    } else {
        QzPoly g = qz_gcd(to_qz(r_), to_qz(o.r_));
        QzPoly q, rem;
        qz_divmod(to_qz(o.r_), g, q, rem);
        auto [k1, z1] = from_qz(q);
        qz_divmod(to_qz(r_), g, q, rem);
        auto [k2, z2] = from_qz(q);
        mx = zp_mul(mx, z1);
        cx *= k1;
        my = zp_mul(my, z2);
        cy *= k2;
        r = zp_mul(r_, z1);
    }
    Int l = 1;
    for (auto* c : {&cx, &cy}) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c->a().get_den_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c->b().get_den_mpz_t());
    }
    auto zz = [&l](const CycloNum& c) {
        Rat a = c.a() * l, b = c.b() * l;
        return Zz{a.get_num(), b.get_num()};
    };
    long v = std::min(v_, o.v_);
    ZzPoly sum;
    zp_axpy(sum, zz(cx), v_ - v, zp_mul(p_, mx));
    zp_axpy(sum, zz(cy), o.v_ - v, zp_mul(o.p_, my));
    if (sum.is_zero()) return *this = CycloRational();
    auto [k, sh] = zp_normalize(sum);
    for (auto& [id, e] : den) e -= strip_factor(sum, id, e);
    den.erase(std::remove_if(den.begin(), den.end(), [](auto& f) { return f.second == 0; }), den.end());
    CycloNum c = k / CycloNum(Rat(l));
    if (!r.is_zero() && sum.degree() > 0) {
        QzPoly g = qz_gcd(to_qz(sum), to_qz(r));
        if (g.size() > 1) {
            QzPoly q, rem;
            qz_divmod(to_qz(sum), g, q, rem);
            auto [kn, zn] = from_qz(q);
            qz_divmod(to_qz(r), g, q, rem);
            auto [kr, zr] = from_qz(q);
            sum = zn;
            r = zr;
            c *= kn / kr;
        }
    }
    *this = assemble(c, v + sh, std::move(sum), std::move(den), std::move(r));
    return *this;
}

CycloRational& CycloRational::operator-=(const CycloRational& o) { return *this += -o; }

bool operator==(const CycloRational& x, const CycloRational& y) {
    if (x.c_ == y.c_ && x.v_ == y.v_ && x.p_ == y.p_ && x.den_ == y.den_ && x.r_ == y.r_) return true;
    if (x.r_.is_zero() && y.r_.is_zero()) return false;
    return (x - y).is_zero();
}

CycloRational CycloRational::pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    CycloRational r(1), b = *this;
    while (k) {
        if (k & 1) r *= b;
        k >>= 1;
        if (k) b *= b;
    }
    return r;
}

CycloRational CycloRational::bar() const {
    if (is_zero()) return *this;
    // f(1/s) = s^-deg * rev(f), rev of a base factor is f(0) times a base factor
    CycloNum c = c_;
    long v = -v_;
    ZzPoly p = reverse(p_);
    v -= p_.degree();
    Den den;
    for (auto& [id, e] : den_) {
        const auto& f = registry().get(id);
        int rid = id;
        if (f.part != 0) rid = registry().id(f.d, 3 - f.part);
        Zz f0 = coeff(f.poly, 0);
        CycloNum k(Rat(f0.a), Rat(f0.b));
        for (int i = 0; i < e; ++i) c /= k;
        v += f.poly.degree() * e;
        den_add(den, rid, e);
    }
    ZzPoly r;
    if (!r_.is_zero()) {
        r = reverse(r_);
        v += r_.degree();
    }
    return assemble(c, v, std::move(p), std::move(den), std::move(r));
}

std::pair<long, std::vector<CycloNum>> CycloRational::numerator() const {
    if (is_zero()) return {0, {}};
    ZzPoly d = r_.is_zero() ? expand_den(den_) : zp_mul(expand_den(den_), r_);
    Zz lc = coeff(d, d.re.size() - 1);
    CycloNum k = c_ / CycloNum(Rat(lc.a), Rat(lc.b));
    QzPoly q = to_qz(p_);
    for (auto& x : q) x *= k;
    return {v_, q};
}

std::vector<CycloNum> CycloRational::denominator() const {
    if (is_zero()) return {CycloNum(1)};
    ZzPoly d = r_.is_zero() ? expand_den(den_) : zp_mul(expand_den(den_), r_);
    QzPoly q = to_qz(d);
    CycloNum inv = q.back().inverse();
    for (auto& x : q) x *= inv;
    return q;
}

std::pair<long, std::vector<CycloNum>> CycloRational::laurent_coeffs() const {
    if (!is_laurent_polynomial()) throw FieldError("not a Laurent polynomial: " + str());
    return numerator();
}

namespace {

std::string render_laurent(long low, const std::vector<CycloNum>& c) {
    std::string out;
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i].is_zero()) continue;
        long e = low + static_cast<long>(i);
        std::string mono = e == 0 ? "" : (e == 1 ? "s" : "s^" + std::to_string(e));
        std::string coef = c[i].str();
        bool neg = c[i].is_rational() && sgn(c[i].a()) < 0;
        if (neg) coef = (-c[i]).str();
        std::string term;
        if (mono.empty()) term = coef;
        else if (coef == "1") term = mono;
        else term = coef + "*" + mono;
        if (out.empty()) out = neg ? "-" + term : term;
        else out += (neg ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::string CycloRational::str() const {
    if (is_zero()) return "0";
    auto [low, num] = numerator();
    std::string n = render_laurent(low, num);
    if (den_.empty() && r_.is_zero()) return n;
    return "(" + n + ") / (" + render_laurent(0, denominator()) + ")";
}

// ---------------------------------------------------------------- q-numbers

CycloRational qnumber(long m, HalfInt d) {
    if (m < 0) return -qnumber(-m, d);
    if (m == 0) return CycloRational();
    if (d.twice() == 0) return CycloRational(m);
    long t = std::labs(d.twice());
    std::vector<CycloNum> c(2 * t * (m - 1) + 1, CycloNum(0));
    for (long k = 0; k < m; ++k) c[2 * t * k] = 1;
    return CycloRational::laurent(-t * (m - 1), c);
}

CycloRational qbracket(HalfInt e, HalfInt d) {
    if (d.twice() == 0) throw FieldError("qbracket with d = 0");
    if (e.twice() % d.twice() == 0) return qnumber(e.twice() / d.twice(), d);
    long E = e.twice(), D = d.twice();
    CycloRational num = CycloRational::s_pow(-E) * CycloRational::binomial(2 * E, CycloNum(1));
    CycloRational den = CycloRational::s_pow(-D) * CycloRational::binomial(2 * D, CycloNum(1));
    return num / den;
}

CycloRational qfactorial(long m, HalfInt d) {
    if (m < 0) throw FieldError("qfactorial of negative integer");
    CycloRational r(1);
    for (long k = 1; k <= m; ++k) r *= qnumber(k, d);
    return r;
}

// ---------------------------------------------------------------- numerics

namespace {
unsigned g_bits = 200;
bool g_precision_set = false;

void ensure_precision() {
    if (!g_precision_set) set_precision_bits(g_bits);
}
}  // namespace

void set_precision_bits(unsigned bits) {
    g_bits = bits;
    g_precision_set = true;
    Real::default_precision(static_cast<unsigned>(bits * 0.30103) + 2);
}

Complex operator/(const Complex& a, const Complex& b) {
    Real n = b.re * b.re + b.im * b.im;
    if (n == 0) throw FieldError("complex division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

Real Complex::abs() const { return boost::multiprecision::sqrt(re * re + im * im); }

Complex complex_sqrt(const Complex& z) {
    ensure_precision();
    Real m = z.abs();
    if (m == 0) return Complex();
    Real re = boost::multiprecision::sqrt((m + z.re) / 2);
    Real im = boost::multiprecision::sqrt((m - z.re) / 2);
    if (z.im < 0) im = -im;
    return {re, im};
}

Complex complex_pow(const Complex& z, long k) {
    if (k < 0) return Complex(Real(1)) / complex_pow(z, -k);
    Complex r(Real(1)), b = z;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

Complex complex_root_of_unity(long m, long L) {
    ensure_precision();
    Real ang = 2 * boost::math::constants::pi<Real>() * Real(m) / Real(L);
    return {boost::multiprecision::cos(ang), boost::multiprecision::sin(ang)};
}

Complex to_complex(const CycloNum& c) {
    ensure_precision();
    Complex z = complex_root_of_unity(1, 3);
    Real a(c.a().get_mpq_t()), b(c.b().get_mpq_t());
    return Complex(a) + Complex(b) * z;
}


Complex eval_numeric(const CycloRational& x, const Complex& q0) {
    ensure_precision();
    if (x.is_zero()) return Complex();
    Complex s = complex_sqrt(q0);
    auto [low, num] = x.numerator();
    auto den = x.denominator();
    Complex n, d;
    for (std::size_t i = num.size(); i-- > 0;) n = n * s + to_complex(num[i]);
    for (std::size_t i = den.size(); i-- > 0;) d = d * s + to_complex(den[i]);
    Real scale = 0;
    Real sa = s.abs();
    Real pw = 1;
    for (auto& c : den) {
        scale += to_complex(c).abs() * pw;
        pw *= sa;
    }
    Real tol = boost::multiprecision::pow(Real(2), -static_cast<int>(g_bits / 2));
    if (d.abs() <= tol * scale) throw FieldError("pole at the evaluation point");
    return n / d * complex_pow(s, low);
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
public:
    Parser(const std::string& text, const ExprEnv& env) : t_(text), env_(env) {}

    CycloRational run() {
        auto v = collapse(expr());
        skip();
        if (pos_ != t_.size()) fail("unexpected '" + std::string(1, t_[pos_]) + "'");
        return v;
    }

private:
    using Product = std::vector<CycloRational>;

    [[noreturn]] void fail(const std::string& msg) const {
        throw FieldError("parse error at column " + std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip() {
        while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < t_.size() && t_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static CycloRational collapse(const Product& p) {
        CycloRational r(1);
        for (auto& f : p) r *= f;
        return r;
    }

    Product expr() {
        Product acc = term();
        for (;;) {
            if (eat('+')) {
                Product t = term();
                acc = {collapse(acc) + collapse(t)};
            } else if (eat('-')) {
                Product t = term();
                acc = {collapse(acc) - collapse(t)};
            } else {
                return acc;
            }
        }
    }

    Product term() {
        Product acc = unary();
        for (;;) {
            if (eat('*')) {
                Product f = unary();
                acc.insert(acc.end(), f.begin(), f.end());
            } else if (eat('/')) {
                Product f = unary();
                for (auto& x : f) {
                    if (x.is_zero()) fail("division by zero");
                    acc.push_back(x.inverse());
                }
            } else if (implicit_factor()) {
                Product f = power();
                acc.insert(acc.end(), f.begin(), f.end());
            } else {
                return acc;
            }
        }
    }

    bool implicit_factor() {
        skip();
        if (pos_ >= t_.size()) return false;
        char c = t_[pos_];
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '(';
    }

    Product unary() {
        if (eat('-')) {
            Product p = unary();
            p.push_back(CycloRational(-1));
            return p;
        }
        if (eat('+')) return unary();
        return power();
    }

    Rat exponent() {
        skip();
        bool neg = false;
        while (eat('-')) neg = !neg;
        std::size_t at = pos_;
        CycloRational e = collapse(primary(nullptr));
        if (!e.is_zero() && !e.is_constant()) {
            pos_ = at;
            fail("exponent must be a rational constant");
        }
        CycloNum c = e.constant();
        if (!c.is_rational()) fail("exponent must be rational");
        return neg ? Rat(-c.a()) : c.a();
    }

    Product power() {
        bool is_q = false;
        Product base = primary(&is_q);
        if (!eat('^')) return base;
        Rat e = exponent();
        if (is_q) {
            Rat twice = e * 2;
            if (twice.get_den() != 1) fail("q exponent must be a half-integer");
            return {CycloRational::s_pow(twice.get_num().get_si())};
        }
        if (e.get_den() != 1) fail("exponent must be an integer");
        long k = e.get_num().get_si();
        Product r;
        for (auto& f : base) r.push_back(f.pow(k));
        return r;
    }

    Product primary(bool* is_q) {
        skip();
        if (pos_ >= t_.size()) fail("unexpected end of input");
        char c = t_[pos_];
        if (c == '(' || c == '{') {
            ++pos_;
            Product p = expr();
            if (!eat(c == '(' ? ')' : '}')) fail("unbalanced bracket");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
            return {CycloRational(Int(t_.substr(b, pos_ - b)))};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos_;
            while (pos_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[pos_])) || t_[pos_] == '_')) ++pos_;
            std::string name = t_.substr(b, pos_ - b);
            if (name == "qint") return {qint_call()};
            if (name == "q") {
                if (is_q) *is_q = true;
                return {CycloRational::s_pow(2)};
            }
            if (name == "s") return {CycloRational::s_pow(1)};
            if (name == "z") return {CycloRational::zeta()};
            CycloRational v;
            if (env_.var && env_.var(name, v)) return {v};
            pos_ = b;
            fail("unknown symbol '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    CycloRational qint_call() {
        if (!eat('(')) fail("expected '('");
        CycloRational m = collapse(expr());
        if (!eat(',')) fail("expected ','");
        CycloRational d = collapse(expr());
        if (!eat(')')) fail("expected ')'");
        auto rat = [this](const CycloRational& x) {
            CycloNum c = x.constant();
            if (!c.is_rational()) fail("qint arguments must be rational");
            return c.a();
        };
        Rat mm = rat(m), dd = rat(d) * 2;
        if (mm.get_den() != 1 || dd.get_den() != 1) fail("qint(m, d) needs integer m and half-integer d");
        return qnumber(mm.get_num().get_si(), HalfInt::from_twice(dd.get_num().get_si()));
    }

    const std::string& t_;
    const ExprEnv& env_;
    std::size_t pos_ = 0;
};

}  // namespace

CycloRational parse_expression(const std::string& text, const ExprEnv& env) { return Parser(text, env).run(); }

CycloRational CycloRational::parse(const std::string& text) { return parse_expression(text); }

}  // namespace qtw
