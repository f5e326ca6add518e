#include "qtw/repcheck.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace qtw {

namespace {

using Label = std::vector<int>;

CycloRational qp(long twice) { return CycloRational::s_pow(twice); }

// Coefficients exactly as printed for each module; the target is label + shift.
struct Entry {
    const char* generator;
    std::vector<int> shift;
    const char* coefficient;
};

struct ModuleTable {
    const char* name;
    const char* presentation;
    std::vector<std::string> index_names;
    std::function<bool(const Label&)> in_basis;
    std::vector<std::pair<const char*, const char*>> diagonal;  // k-generators
    std::vector<Entry> entries;
};

const std::vector<ModuleTable>& tables() {
    static const std::vector<ModuleTable> t = {
        {"neg_prefund_A2t",
         "A2^2",
         {"i", "j"},
         [](const Label& l) { return 0 <= l[0] && l[0] <= l[1]; },
         {{"k_1", "q^{-i-j}"}, {"k_eps", "q^{2i+2j}"}},
         {
             {"e_1", {-1, 0}, "(q^{2i} - 1)"},
             {"e_1", {0, -1},
              "(q^{2j+1}+1)(q^{2j}-q^{2i})q^{i-j+3}/((q-1)^2(q+1)(q^{2i+1}+q^{2j})(q^{2i}+q^{2j+1}))"},
             {"e_eps", {0, 2}, "q^{2i+5/2}(q-1)(q+1)/(q^2+1)"},
             {"e_eps", {1, 1}, "(q+1)q^{i+3j+5+1/2}/((q-1)(q^{2i+1}+q^{2j})(q^{2i}+q^{2j+3}))"},
             {"e_eps", {2, 0},
              "-(q^{2j}-q^{2i})(q^{2j}-q^{2i+2})q^{-2i+4j+5+1/2}/((q^2+1)(q-1)^3(q+1)(q^{2i+1}+q^{2j})^2"
              "(q^{2i+3}+q^{2j})(q^{2i}+q^{2j+1}))"},
         }},
        {"pos_prefund_A2t",
         "A2^2",
         {"i", "j"},
         [](const Label& l) { return 0 <= l[0] && l[0] <= l[1]; },
         {{"k_1", "q^{-i-j}"}, {"k_eps", "q^{2i+2j}"}},
         {
             {"e_1", {-1, 0}, "(q^{2i}-1)q^{3i-j+7/2}/((q-1)^2(q^{2i}+q^{2j+1})(q^{2i}+q^{2j+3}))"},
             {"e_1", {0, -1}, "-q^{-4i-2j+5/2}(q+1)(q^{2j+1}+1)(q^{2j}-q^{2i})"},
             {"e_eps", {0, 2},
              "-q^{8i+6j+19/2}/((q^2-1)^3(q^2+1)(q^{2i}+q^{2j+3})^2(q^{2i}+q^{2j+5})(q^{2i}+q^{2j+1}))"},
             {"e_eps", {1, 1}, "q^{3i+5j+7/2}/((q^2-1)(q^{2i+1}+q^{2j})(q^{2i}+q^{2j+3}))"},
             {"e_eps", {2, 0}, "q^{-4i+2j-5/2}(q-1)(q^{2j}-q^{2i+2})(q^{2j}-q^{2i})/((q^2+1)(q+1))"},
         }},
        {"X_A2t",
         "A2^2",
         {"j"},
         [](const Label& l) { return 0 <= l[0]; },
         {{"k_1", "q^{-j}"}, {"k_eps", "q^{2j}"}},
         {
             {"e_1", {-1}, "(q^{2j}-1)"},
             {"e_eps", {2}, "q^{-2j+7/2}/((q-1)^3(q+1)(q^2+1))"},
         }},
        {"Xtilde_sl3",
         "A2",
         {"j", "k"},
         [](const Label& l) { return 0 <= l[0] && 0 <= l[1]; },
         {{"k1", "q^{j-2k}"}, {"k2", "q^{k-2j}"}, {"k0", "q^{j+k}"}},
         {
             {"e1", {0, -1}, "q^j qint(k, 1)"},
             {"e2", {-1, 0}, "qint(j, 1)"},
             {"e0", {1, 1}, "q^{-k+6}/(q-q^{-1})"},
         }},
    };
    return t;
}

struct Presentation {
    std::vector<std::string> k, e;  // e[i] has Cartan element k[i]
    IntMatrix A;                    // k_i e_j k_i^-1 = q^{A[i][j]} e_j
};

const Presentation& presentation(const std::string& name) {
    static const Presentation twisted{{"k_1", "k_eps"}, {"e_1", "e_eps"}, {{1, -2}, {-2, 4}}};
    static const Presentation sl3{{"k0", "k1", "k2"}, {"e0", "e1", "e2"}, {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}};
    if (name == "A2^2") return twisted;
    if (name == "A2") return sl3;
    throw RepError("unknown presentation '" + name + "'");
}

void enumerate_labels(const ModuleTable& t, int bound, std::vector<Label>& out) {
    std::size_t n = t.index_names.size();
    Label l(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
        if (pos == n) {
            if (t.in_basis(l)) out.push_back(l);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            l[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, bound);
    std::stable_sort(out.begin(), out.end(), [](const Label& a, const Label& b) {
        return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
    });
}

CycloRational eval_entry(const char* text, const std::vector<std::string>& names, const Label& l) {
    ExprEnv env;
    env.var = [&](const std::string& n, CycloRational& v) {
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] == n) {
                v = CycloRational(static_cast<long>(l[k]));
                return true;
            }
        return false;
    };
    return parse_expression(text, env);
}

bool col_zero(const SparseCol& c) {
    for (auto& [k, v] : c)
        if (!v.is_zero()) return false;
    return true;
}

void add_to(SparseCol& c, int k, const CycloRational& v) {
    if (v.is_zero()) return;
    auto it = c.find(k);
    if (it == c.end()) {
        c.emplace(k, v);
    } else {
        it->second += v;
        if (it->second.is_zero()) c.erase(it);
    }
}

// ---- dense linear algebra over Q(z)(s) on small blocks ----

using Vec = std::vector<CycloRational>;
using Mat = std::vector<Vec>;  // row-major

Mat mat_mul(const Mat& a, const Mat& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Mat r(n, Vec(m, CycloRational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[t][j].is_zero()) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

// Null space basis (as columns of the returned n x r matrix).
Mat kernel(Mat a) {
    std::size_t rows = a.size(), n = rows ? a[0].size() : 0;
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        CycloRational inv = a[r][c].inverse();
        for (auto& x : a[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            CycloRational f = a[i][c];
            for (std::size_t j = c; j < n; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<char> is_pivot(n, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    Mat basis(n, Vec());
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        Vec v(n, CycloRational(0));
        v[free] = CycloRational(1);
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -a[i][free];
        for (std::size_t i = 0; i < n; ++i) basis[i].push_back(v[i]);
    }
    return basis;
}

// Coordinates of the columns of y in the basis given by the (independent) columns of s.
Mat solve_in_basis(const Mat& s, const Mat& y) {
    std::size_t n = s.size(), k = s[0].size(), m = y[0].size();
    Mat aug(n, Vec(k + m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug[i][j] = s[i][j];
        for (std::size_t j = 0; j < m; ++j) aug[i][k + j] = y[i][j];
    }
    std::size_t r = 0;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = r;
        while (p < n && aug[p][c].is_zero()) ++p;
        if (p == n) throw RepError("dependent basis in block restriction");
        std::swap(aug[p], aug[r]);
        CycloRational inv = aug[r][c].inverse();
        for (auto& x : aug[r]) x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || aug[i][c].is_zero()) continue;
            CycloRational f = aug[i][c];
            for (std::size_t j = c; j < k + m; ++j)
                if (!aug[r][j].is_zero()) aug[i][j] -= f * aug[r][j];
        }
        ++r;
    }
    for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (!aug[i][k + j].is_zero()) throw RepError("block subspace is not invariant under phi");
    Mat out(k, Vec(m));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j) out[i][j] = aug[i][k + j];
    return out;
}

struct Part {
    Mat basis;  // block-coordinates, columns
    std::vector<CycloRational> eigen;
};

// Joint generalized eigenspaces of commuting matrices. Eigenvalue candidates are the diagonal entries of
// each restriction and its mean eigenvalue; a spectrum not exhausted by them is reported as an error.
std::vector<Part> joint_spectrum(const std::vector<Mat>& ops, std::size_t d) {
    Mat id(d, Vec(d, CycloRational(0)));
    for (std::size_t i = 0; i < d; ++i) id[i][i] = CycloRational(1);
    std::vector<Part> parts{{id, {}}};
    for (const Mat& a : ops) {
        std::vector<Part> next;
        for (const Part& p : parts) {
            std::size_t k = p.basis[0].size();
            Mat m = solve_in_basis(p.basis, mat_mul(a, p.basis));
            std::vector<CycloRational> cand;
            CycloRational tr(0);
            for (std::size_t i = 0; i < k; ++i) tr += m[i][i];
            cand.push_back(tr / CycloRational(static_cast<long>(k)));
            for (std::size_t i = 0; i < k; ++i) cand.push_back(m[i][i]);
            std::size_t found = 0;
            std::vector<CycloRational> used;
            for (const auto& lam : cand) {
                if (std::any_of(used.begin(), used.end(), [&](const CycloRational& u) { return u == lam; })) continue;
                used.push_back(lam);
                Mat shifted = m;
                for (std::size_t i = 0; i < k; ++i) shifted[i][i] -= lam;
                Mat power = shifted;
                for (std::size_t e = 1; e < k; ++e) power = mat_mul(power, shifted);
                Mat ker = kernel(power);
                if (ker.empty() || ker[0].empty()) continue;
                Part q{mat_mul(p.basis, ker), p.eigen};
                q.eigen.push_back(lam);
                found += ker[0].size();
                next.push_back(std::move(q));
                if (found == k) break;
            }
            if (found != k) throw RepError("phi spectrum on a weight block is not resolved by its diagonal");
        }
        parts = std::move(next);
    }
    return parts;
}

// l-weight component from phi eigenvalues lambda_0..lambda_P, via power sums of the roots.
void read_component(LWeight& w, int slot, const std::vector<CycloRational>& lam) {
    const CycloRational& l0 = lam[0];
    auto [low, coeffs] = l0.laurent_coeffs();
    if (coeffs.size() != 1 || !coeffs[0].is_one()) throw RepError("phi_0 eigenvalue is not a power of q^{1/2}");
    w.sexp[slot] = low;
    std::size_t P = lam.size() - 1;
    if (P < 6) throw RepError("at least six phi modes are needed to read an l-weight");
    std::vector<CycloRational> f(P + 1), ps(P + 1, CycloRational(0));
    CycloRational inv = l0.inverse();
    for (std::size_t p = 0; p <= P; ++p) f[p] = lam[p] * inv;
    // Newton: log f = -sum_p ps_p u^p / p with ps_p = sum mult * a^p
    for (std::size_t p = 1; p <= P; ++p) {
        CycloRational v = -CycloRational(static_cast<long>(p)) * f[p];
        for (std::size_t k = 1; k < p; ++k) v -= ps[k] * f[p - k];
        ps[p] = v;
    }
    std::map<long, std::vector<CycloNum>> g;  // n -> g_n(p), p = 1..6
    for (std::size_t p = 1; p <= 6; ++p) {
        if (ps[p].is_zero()) continue;
        if (!ps[p].is_laurent_polynomial()) throw RepError("phi power sum is not a Laurent polynomial");
        auto [lo, cs] = ps[p].laurent_coeffs();
        for (std::size_t t = 0; t < cs.size(); ++t) {
            if (cs[t].is_zero()) continue;
            long e = lo + static_cast<long>(t);
            if (e % static_cast<long>(p) != 0) throw RepError("phi power sum off the spectral lattice");
            g.try_emplace(e / static_cast<long>(p), std::vector<CycloNum>(7, CycloNum(0)));
        }
    }
    for (auto& [n, gv] : g)
        for (std::size_t p = 1; p <= 6; ++p) {
            if (ps[p].is_zero()) continue;
            auto [lo, cs] = ps[p].laurent_coeffs();
            long t = n * static_cast<long>(p) - lo;
            if (t >= 0 && t < static_cast<long>(cs.size())) gv[p] = cs[t];
        }
    for (auto& [n, gv] : g)
        for (int m = 0; m < 6; ++m) {
            CycloNum c(0);
            for (int p = 1; p <= 6; ++p) c += gv[p] * CycloNum::root_of_unity(-m * p, 6);
            c /= CycloNum(6);
            if (c.is_zero()) continue;
            if (!c.is_rational() || c.a().get_den() != 1) throw RepError("non-integral root multiplicity");
            w.add_root(slot, SpectralParam(n, m), c.a().get_num().get_si());
        }
    auto series = w.series(slot, static_cast<int>(P));
    for (std::size_t p = 0; p <= P; ++p)
        if (!(series[p] == lam[p])) throw RepError("phi eigenvalues are not those of a rational l-weight");
}

std::vector<int> weight_key(const GradedModule& m, int v) {
    std::vector<int> key;
    for (const auto& k : presentation(m.presentation).k) {
        auto it = m.op(k).cols[v].find(v);
        auto [lo, cs] = it->second.laurent_coeffs();
        key.push_back(static_cast<int>(lo));
    }
    return key;
}

}  // namespace

// ---- GradedOp ----

GradedOp GradedOp::identity(int n) {
    GradedOp r = zero(n);
    for (int i = 0; i < n; ++i) r.cols[i].emplace(i, CycloRational(1));
    return r;
}

GradedOp GradedOp::zero(int n) {
    GradedOp r;
    r.cols.assign(n, {});
    r.exact.assign(n, 1);
    return r;
}

long GradedOp::exact_count() const { return std::count(exact.begin(), exact.end(), 1); }

GradedOp& GradedOp::operator+=(const GradedOp& o) {
    for (int v = 0; v < dim(); ++v) {
        exact[v] = exact[v] && o.exact[v];
        for (auto& [k, x] : o.cols[v]) add_to(cols[v], k, x);
    }
    return *this;
}

GradedOp& GradedOp::operator-=(const GradedOp& o) {
    for (int v = 0; v < dim(); ++v) {
        exact[v] = exact[v] && o.exact[v];
        for (auto& [k, x] : o.cols[v]) add_to(cols[v], k, -x);
    }
    return *this;
}

GradedOp operator*(const GradedOp& a, const GradedOp& b) {
    GradedOp r = GradedOp::zero(a.dim());
    for (int v = 0; v < b.dim(); ++v) {
        bool ex = b.exact[v];
        for (auto& [u, c] : b.cols[v]) {
            ex = ex && a.exact[u];
            for (auto& [w, x] : a.cols[u]) add_to(r.cols[v], w, x * c);
        }
        r.exact[v] = ex;
    }
    return r;
}

GradedOp operator*(const CycloRational& c, GradedOp a) {
    for (auto& col : a.cols) {
        if (c.is_zero()) col.clear();
        for (auto& [k, x] : col) x *= c;
    }
    return a;
}

GradedOp GradedOp::pow(int k) const {
    GradedOp r = identity(dim());
    for (int i = 0; i < k; ++i) r = *this * r;
    return r;
}

GradedOp GradedOp::diagonal_inverse() const {
    GradedOp r = zero(dim());
    for (int v = 0; v < dim(); ++v) {
        auto it = cols[v].find(v);
        if (cols[v].size() != 1 || it == cols[v].end()) throw RepError("diagonal_inverse of a non-diagonal map");
        r.cols[v].emplace(v, it->second.inverse());
        r.exact[v] = exact[v];
    }
    return r;
}

GradedOp commutator(const GradedOp& a, const GradedOp& b) { return a * b - b * a; }

// ---- modules ----

int GradedModule::index_of(const std::vector<int>& label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label, [](const Label& a, const Label& b) {
        int la = std::accumulate(a.begin(), a.end(), 0), lb = std::accumulate(b.begin(), b.end(), 0);
        return la != lb ? la < lb : a < b;
    });
    return it != labels.end() && *it == label ? static_cast<int>(it - labels.begin()) : -1;
}

std::string GradedModule::label_str(int v) const {
    std::string s = "v[";
    for (std::size_t k = 0; k < labels[v].size(); ++k) s += (k ? "," : "") + std::to_string(labels[v][k]);
    return s + "]";
}

const GradedOp& GradedModule::op(const std::string& generator) const {
    auto it = actions.find(generator);
    if (it == actions.end()) throw RepError("module " + name + " has no generator '" + generator + "'");
    return it->second;
}

std::vector<std::string> builtin_modules() {
    std::vector<std::string> r;
    for (const auto& t : tables()) r.push_back(t.name);
    return r;
}

GradedModule load_builtin(const std::string& name, int bound) {
    auto it = std::find_if(tables().begin(), tables().end(), [&](const ModuleTable& t) { return name == t.name; });
    if (it == tables().end()) throw RepError("unknown module '" + name + "'");
    if (bound < 0) throw RepError("negative truncation bound");
    const ModuleTable& t = *it;
    GradedModule m;
    m.name = t.name;
    m.presentation = t.presentation;
    m.bound = bound;
    m.index_names = t.index_names;
    enumerate_labels(t, bound, m.labels);
    std::sort(m.labels.begin(), m.labels.end(), [](const Label& a, const Label& b) {
        int la = std::accumulate(a.begin(), a.end(), 0), lb = std::accumulate(b.begin(), b.end(), 0);
        return la != lb ? la < lb : a < b;
    });
    int n = m.dim();
    for (const auto& l : m.labels) m.level.push_back(std::accumulate(l.begin(), l.end(), 0));
    for (auto [gen, expr] : t.diagonal) {
        GradedOp op = GradedOp::zero(n);
        for (int v = 0; v < n; ++v) op.cols[v].emplace(v, eval_entry(expr, t.index_names, m.labels[v]));
        m.actions[gen] = std::move(op);
    }
    for (const auto& e : t.entries) {
        auto [pos, fresh] = m.actions.try_emplace(e.generator, GradedOp::zero(n));
        GradedOp& op = pos->second;
        for (int v = 0; v < n; ++v) {
            Label target = m.labels[v];
            for (std::size_t k = 0; k < target.size(); ++k) target[k] += e.shift[k];
            CycloRational c = eval_entry(e.coefficient, t.index_names, m.labels[v]);
            if (!t.in_basis(target)) {
                if (!c.is_zero())
                    throw RepError(std::string(e.generator) + " on " + m.label_str(v) + " leaves the basis");
                continue;
            }
            int tl = std::accumulate(target.begin(), target.end(), 0);
            if (tl > bound) {
                if (!c.is_zero()) op.exact[v] = 0;
                continue;
            }
            add_to(op.cols[v], m.index_of(target), c);
        }
    }
    return m;
}

GradedModule trivial_module(const std::string& presentation_name, int bound) {
    const Presentation& p = presentation(presentation_name);
    GradedModule m;
    m.name = "trivial";
    m.presentation = presentation_name;
    m.bound = bound;
    m.labels = {{0}};
    m.level = {0};
    m.index_names = {"j"};
    for (const auto& k : p.k) m.actions[k] = GradedOp::identity(1);
    for (const auto& e : p.e) m.actions[e] = GradedOp::zero(1);
    return m;
}

GradedModule tensor_module(const GradedModule& a, const GradedModule& b, int bound) {
    if (a.presentation != b.presentation) throw RepError("tensor of modules over different algebras");
    const Presentation& p = presentation(a.presentation);
    GradedModule m;
    m.name = a.name + "(x)" + b.name;
    m.presentation = a.presentation;
    m.bound = bound;
    m.index_names = {"a", "b"};
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < a.dim(); ++x)
        for (int y = 0; y < b.dim(); ++y)
            if (a.level[x] + b.level[y] <= bound) pairs.push_back({x, y});
    std::stable_sort(pairs.begin(), pairs.end(), [&](auto& u, auto& v) {
        return a.level[u.first] + b.level[u.second] < a.level[v.first] + b.level[v.second];
    });
    std::map<std::pair<int, int>, int> index;
    for (auto& pr : pairs) {
        index[pr] = m.dim();
        m.labels.push_back({pr.first, pr.second});
        m.level.push_back(a.level[pr.first] + b.level[pr.second]);
    }
    int n = m.dim();
    // (x (x) y)(u (x) w) for the given factor maps
    auto tensor = [&](const GradedOp& x, const GradedOp& y) {
        GradedOp r = GradedOp::zero(n);
        for (int v = 0; v < n; ++v) {
            auto [u, w] = pairs[v];
            bool ex = x.exact[u] && y.exact[w];
            for (auto& [u2, c1] : x.cols[u])
                for (auto& [w2, c2] : y.cols[w]) {
                    auto it = index.find({u2, w2});
                    if (it == index.end()) {
                        ex = false;
                        continue;
                    }
                    add_to(r.cols[v], it->second, c1 * c2);
                }
            r.exact[v] = ex;
        }
        return r;
    };
    GradedOp ida = GradedOp::identity(a.dim()), idb = GradedOp::identity(b.dim());
    for (std::size_t i = 0; i < p.k.size(); ++i) {
        m.actions[p.k[i]] = tensor(a.op(p.k[i]), b.op(p.k[i]));
        m.actions[p.e[i]] = tensor(a.op(p.e[i]), idb) + tensor(a.op(p.k[i]), b.op(p.e[i]));
    }
    (void)ida;
    return m;
}

// ---- relations ----

namespace {

Report check_zero(const GradedModule& m, const std::string& relation, const GradedOp& residual) {
    Report r;
    r.relation = relation;
    for (int v = 0; v < residual.dim(); ++v) {
        if (!residual.exact[v]) continue;
        ++r.vectors_checked;
        if (!col_zero(residual.cols[v])) r.fail(relation + " at " + m.label_str(v));
    }
    if (r.vectors_checked == 0) r.fail(relation + ": no interior vectors");
    return r;
}

}  // namespace

std::vector<Report> verify_presentation(const GradedModule& m) {
    const Presentation& p = presentation(m.presentation);
    std::vector<Report> out;
    std::size_t r = p.k.size();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const GradedOp &k = m.op(p.k[i]), &e = m.op(p.e[j]);
            long c = p.A[i][j];
            std::string name = "Weyl: " + p.k[i] + " " + p.e[j] + " " + p.k[i] + "^-1 = q^" + std::to_string(c) + " " + p.e[j];
            out.push_back(check_zero(m, name, k * e - qp(2 * c) * (e * k)));
        }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            const GradedOp &a = m.op(p.k[i]), &b = m.op(p.k[j]);
            out.push_back(check_zero(m, "Cartan: " + p.k[i] + " " + p.k[j] + " = " + p.k[j] + " " + p.k[i], commutator(a, b)));
        }
    int n = m.dim();
    if (m.twisted()) {
        const GradedOp &k1 = m.op("k_1"), &ke = m.op("k_eps"), &e1 = m.op("e_1"), &ee = m.op("e_eps");
        out.push_back(check_zero(m, "central: k_eps = k_1^-2", ke * k1 * k1 - GradedOp::identity(n)));
        CycloRational two = qnumber(2, HalfInt(2)).inverse();
        GradedOp s3 = two * (ee * ee * e1) - ee * e1 * ee + two * (e1 * ee * ee);
        out.push_back(check_zero(m, "Serre degree 3: e_eps^2 e_1 / [2]_{q^2} - e_eps e_1 e_eps + e_1 e_eps^2 / [2]_{q^2}", s3));
        GradedOp s6 = GradedOp::zero(n);
        HalfInt half = HalfInt::from_twice(1);
        for (int t = 0; t <= 5; ++t) {
            CycloRational c = (qfactorial(5 - t, half) * qfactorial(t, half)).inverse();
            if (t % 2) c = -c;
            s6 += c * (e1.pow(5 - t) * ee * e1.pow(t));
        }
        out.push_back(check_zero(m, "Serre degree 6: sum_r (-1)^r e_1^{5-r} e_eps e_1^r / ([5-r]_{q^{1/2}}! [r]_{q^{1/2}}!)", s6));
    } else {
        GradedOp prod = GradedOp::identity(n);
        for (const auto& k : p.k) prod = m.op(k) * prod;
        out.push_back(check_zero(m, "central: k0 k1 k2 = 1", prod - GradedOp::identity(n)));
        CycloRational two = qnumber(2, HalfInt(1)).inverse();
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                if (i == j) continue;
                const GradedOp &ei = m.op(p.e[i]), &ej = m.op(p.e[j]);
                GradedOp s = two * (ei * ei * ej) - ei * ej * ei + two * (ej * ei * ei);
                out.push_back(check_zero(m, "Serre: " + p.e[i] + "^2 " + p.e[j] + " / [2]_q - " + p.e[i] + " " + p.e[j] + " " +
                                                 p.e[i] + " + " + p.e[j] + " " + p.e[i] + "^2 / [2]_q",
                                         s));
            }
    }
    return out;
}

// ---- Drinfeld generators ----

DrinfeldData drinfeld_generators(const GradedModule& m, int max_m) {
    if (max_m < 0) throw RepError("negative mode bound");
    DrinfeldData d;
    auto s = qp(1), q = qp(2);
    if (m.twisted()) {
        d.nodes = 1;
        const GradedOp &k1 = m.op("k_1"), &e1 = m.op("e_1"), &ee = m.op("e_eps");
        GradedOp k1inv = k1.diagonal_inverse();
        GradedOp xm = CycloRational(-1) * (k1 * (ee * e1 - qp(-4) * (e1 * ee)));
        GradedOp h = k1inv * commutator(e1, xm);
        CycloRational c = (s - s.inverse()) / ((q - q.inverse()) * (q + CycloRational(1) + q.inverse()));
        d.xminus1 = {xm};
        d.h1 = {h};
        d.xplus = {{e1}};
        for (int k = 0; k < max_m; ++k) d.xplus[0].push_back(c * commutator(h, d.xplus[0].back()));
        d.phi = {{k1}};
        for (int k = 0; k < max_m; ++k) d.phi[0].push_back((s - s.inverse()) * commutator(d.xplus[0][k], xm));
        return d;
    }
    d.nodes = 2;
    const GradedOp& e0 = m.op("e0");
    CycloRational two = qnumber(2, HalfInt(1)).inverse();
    for (int i = 0; i < 2; ++i) {
        const GradedOp &ei = m.op(i == 0 ? "e1" : "e2"), &ej = m.op(i == 0 ? "e2" : "e1");
        const GradedOp& ki = m.op(i == 0 ? "k1" : "k2");
        CycloRational norm = i == 0 ? qp(-12) : -qp(-12);
        GradedOp xm = norm * ((ej * e0 - q * (e0 * ej)) * ki);
        GradedOp h = ki.diagonal_inverse() * commutator(ei, xm);
        d.xminus1.push_back(xm);
        d.h1.push_back(h);
        std::vector<GradedOp> xp{ei}, ph{ki};
        for (int k = 0; k < max_m; ++k) xp.push_back(two * commutator(h, xp.back()));
        for (int k = 0; k < max_m; ++k) ph.push_back((q - q.inverse()) * commutator(xp[k], xm));
        d.xplus.push_back(std::move(xp));
        d.phi.push_back(std::move(ph));
    }
    return d;
}

FramePtr module_frame(const GradedModule& m) {
    static const FramePtr twisted = Frame::folded(twisted_type("A2^2"));
    static const FramePtr sl3 = Frame::ade(twisted_type("A2^2"));
    return m.twisted() ? twisted : sl3;
}

std::vector<LWeightSpace> lweight_spaces(const GradedModule& m, const DrinfeldData& d) {
    int n = m.dim();
    std::size_t P = d.phi[0].size() - 1;
    std::vector<char> valid(n, 1);
    for (const auto& node : d.phi)
        for (const auto& op : node)
            for (int v = 0; v < n; ++v) valid[v] = valid[v] && op.exact[v];
    std::map<std::vector<int>, std::vector<int>> blocks;
    for (int v = 0; v < n; ++v) blocks[weight_key(m, v)].push_back(v);
    FramePtr f = module_frame(m);
    std::vector<LWeightSpace> out;
    for (const auto& [key, members] : blocks) {
        if (!std::all_of(members.begin(), members.end(), [&](int v) { return valid[v]; })) continue;
        std::size_t k = members.size();
        std::map<int, std::size_t> pos;
        for (std::size_t t = 0; t < k; ++t) pos[members[t]] = t;
        std::vector<Mat> ops;
        for (const auto& node : d.phi)
            for (const auto& op : node) {
                Mat a(k, Vec(k, CycloRational(0)));
                for (std::size_t c = 0; c < k; ++c)
                    for (auto& [row, x] : op.cols[members[c]]) {
                        auto it = pos.find(row);
                        if (it == pos.end()) throw RepError("phi does not preserve the weight of " + m.label_str(members[c]));
                        a[it->second][c] = x;
                    }
                ops.push_back(std::move(a));
            }
        for (std::size_t x = 0; x < ops.size(); ++x)
            for (std::size_t y = x + 1; y < ops.size(); ++y) {
                Mat ab = mat_mul(ops[x], ops[y]), ba = mat_mul(ops[y], ops[x]);
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        if (!(ab[i][j] == ba[i][j])) throw RepError("phi matrices do not commute at " + m.label_str(members[0]));
            }
        for (const Part& part : joint_spectrum(ops, k)) {
            LWeight w(f->slots);
            for (int i = 0; i < d.nodes; ++i) {
                std::vector<CycloRational> lam(part.eigen.begin() + i * (P + 1), part.eigen.begin() + (i + 1) * (P + 1));
                read_component(w, i, lam);
            }
            out.push_back({w, static_cast<int>(part.basis[0].size()), m.level[members[0]]});
        }
    }
    return out;
}

QCharacter qchar_from_module(const GradedModule& m, int max_m) {
    DrinfeldData d = drinfeld_generators(m, max_m);
    int n = m.dim();
    std::vector<char> valid(n, 1);
    for (const auto& node : d.phi)
        for (const auto& op : node)
            for (int v = 0; v < n; ++v) valid[v] = valid[v] && op.exact[v];
    int window = m.bound;
    for (int v = 0; v < n; ++v)
        if (!valid[v]) window = std::min(window, m.level[v] - 1);
    if (window < 0) throw RepError("truncation bound too small for any complete weight block");
    auto spaces = lweight_spaces(m, d);
    auto top = std::find_if(spaces.begin(), spaces.end(), [](const LWeightSpace& s) { return s.level == 0; });
    if (top == spaces.end() || top->dim != 1) throw RepError("no one-dimensional top weight space");
    QCharacter chi(module_frame(m), varpi(top->weight), window);
    for (const auto& s : spaces)
        if (s.level <= window) chi.insert(s.weight, s.dim);
    return chi;
}

LWeight highest_lweight(const GradedModule& m, int max_m) {
    DrinfeldData d = drinfeld_generators(m, max_m);
    for (const auto& s : lweight_spaces(m, d))
        if (s.level == 0) return s.weight;
    throw RepError("no top weight space inside the window");
}

Report verify_phi_vanishing(const GradedModule& m, SpectralParam a, int max_p) {
    LWeight top = highest_lweight(m);
    std::vector<int> nodes;
    for (int i = 0; i < top.slots(); ++i)
        for (auto& [root, mult] : top.roots[i]) {
            if (mult < 0) throw RepError("highest l-weight of " + m.name + " is not polynomial");
            if (root == a) nodes.push_back(i);
        }
    if (nodes.empty()) throw RepError("(1 - a u) does not divide the highest l-weight");
    DrinfeldData d = drinfeld_generators(m, max_p);
    CycloRational ainv = a.inverse().value();
    Report r;
    r.relation = "phi_i(a^-1) v = 0 and phi_{i,p} v = 0 for large p, a = " + a.str(module_frame(m)->display_L());
    constexpr int kTrailing = 3;
    for (int v = 0; v < m.dim(); ++v) {
        bool ok = true;
        for (int i : nodes)
            for (const auto& op : d.phi[i]) ok = ok && op.exact[v];
        if (!ok) continue;
        ++r.vectors_checked;
        for (int i : nodes) {
            int last = -1;
            for (int p = 0; p <= max_p; ++p)
                if (!col_zero(d.phi[i][p].cols[v])) last = p;
            if (last > max_p - kTrailing) {
                r.fail("phi_{" + std::to_string(i) + ",p} does not vanish below p = " + std::to_string(max_p) + " on " + m.label_str(v));
                continue;
            }
            SparseCol sum;
            CycloRational pw(1);
            for (int p = 0; p <= last; ++p) {
                for (auto& [k, x] : d.phi[i][p].cols[v]) add_to(sum, k, pw * x);
                pw *= ainv;
            }
            if (!col_zero(sum)) r.fail("phi(a^-1) is nonzero on " + m.label_str(v));
        }
    }
    if (r.vectors_checked == 0) r.fail("no interior vectors");
    return r;
}

Report verify_coproduct_on_highest(const GradedModule& a, const GradedModule& b, int max_m) {
    int bound = std::min(a.bound, b.bound);
    GradedModule t = tensor_module(a, b, bound);
    DrinfeldData d = drinfeld_generators(t, max_m);
    Report r;
    r.relation = "coproduct on v0 (x) v0 of " + a.name + " and " + b.name;
    int v0 = 0;
    for (int i = 0; i < d.nodes; ++i)
        for (const auto& op : d.xplus[i]) {
            if (!op.exact[v0]) continue;
            ++r.vectors_checked;
            if (!col_zero(op.cols[v0])) r.fail("x^+ does not kill v0 (x) v0");
        }
    LWeight expect = highest_lweight(a, std::max(max_m, 6)) * highest_lweight(b, std::max(max_m, 6));
    for (int i = 0; i < d.nodes; ++i) {
        auto series = expect.series(i, max_m);
        for (int p = 0; p <= max_m; ++p) {
            const GradedOp& op = d.phi[i][p];
            if (!op.exact[v0]) {
                r.fail("phi mode " + std::to_string(p) + " not exact on v0 (x) v0; raise the bound");
                continue;
            }
            ++r.vectors_checked;
            SparseCol want;
            add_to(want, v0, series[p]);
            SparseCol diff = op.cols[v0];
            for (auto& [k, x] : want) add_to(diff, k, -x);
            if (!col_zero(diff)) r.fail("phi_{" + std::to_string(i) + "," + std::to_string(p) + "} eigenvalue mismatch on v0 (x) v0");
        }
    }
    return r;
}

}  // namespace qtw
