#include "qtw/root_data.hpp"

#include <numeric>
#include <regex>

namespace qtw {

IntMatrix finite_cartan(char family, int rank) {
    IntMatrix C(rank, std::vector<int>(rank, 0));
    auto edge = [&](int a, int b) { C[a - 1][b - 1] = C[b - 1][a - 1] = -1; };
    for (int i = 0; i < rank; ++i) C[i][i] = 2;
    switch (family) {
    case 'A':
        for (int i = 1; i < rank; ++i) edge(i, i + 1);
        break;
    case 'D':
        if (rank < 3) throw RootDataError("D_n needs n >= 3");
        for (int i = 1; i < rank - 2; ++i) edge(i, i + 1);
        edge(rank - 2, rank - 1);
        edge(rank - 2, rank);
        break;
    case 'E':
        if (rank != 6) throw RootDataError("only E6 carries a nontrivial diagram automorphism");
        edge(1, 3), edge(3, 4), edge(4, 5), edge(5, 6), edge(2, 4);
        break;
    default:
        throw RootDataError(std::string("unknown family ") + family);
    }
    return C;
}

int TwistedType::sigma_pow(int node, int r) const {
    r = ((r % M) + M) % M;
    for (int k = 0; k < r; ++k) node = sigma[node];
    return node;
}

int TwistedType::B(int i, int j) const {
    int s = 0;
    for (int r = 1; r <= M; ++r) s += C[rep[i]][sigma_pow(rep[j], r)];
    return s;
}

std::string TwistedType::orbit_label(int orbit) const {
    if (orbit == eps()) return "e";
    return std::to_string(rep[orbit] + 1);
}

int TwistedType::parse_orbit(const std::string& label) const {
    if (label == "e" || label == "eps") return eps();
    for (int k = 0; k < num_orbits(); ++k)
        if (orbit_label(k) == label) return k;
    // any node of the orbit names it
    try {
        int node = std::stoi(label) - 1;
        if (node >= 0 && node < rank) return orbit_of[node];
    } catch (const std::exception&) {
    }
    throw RootDataError("unknown orbit label '" + label + "' for " + name);
}

namespace {

// Left kernel vector x of C (x C = 0) with x_last = 1, by exact elimination.
std::vector<Rat> left_kernel(const IntMatrix& C) {
    int n = static_cast<int>(C.size());
    // unknowns x_0..x_{n-2}; equations sum_i x_i C_ij = -C_{n-1,j}
    std::vector<std::vector<Rat>> A(n, std::vector<Rat>(n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) A[j][i] = C[i][j];
        A[j][n - 1] = -C[n - 1][j];
    }
    int m = n - 1, row = 0;
    std::vector<int> pivcol;
    for (int col = 0; col < m && row < n; ++col) {
        int p = row;
        while (p < n && sgn(A[p][col]) == 0) ++p;
        if (p == n) continue;
        std::swap(A[p], A[row]);
        for (int r = 0; r < n; ++r) {
            if (r == row || sgn(A[r][col]) == 0) continue;
            Rat f = A[r][col] / A[row][col];
            for (int c = col; c < n; ++c) A[r][c] -= f * A[row][c];
        }
        pivcol.push_back(col);
        ++row;
    }
    if (static_cast<int>(pivcol.size()) != m) throw RootDataError("affine Cartan matrix has a degenerate kernel");
    for (int r = row; r < n; ++r)
        if (sgn(A[r][n - 1]) != 0) throw RootDataError("affine Cartan matrix has no null vector");
    std::vector<Rat> x(n);
    for (int r = 0; r < m; ++r) x[pivcol[r]] = A[r][n - 1] / A[r][pivcol[r]];
    x[n - 1] = 1;
    return x;
}

}  // namespace

TwistedType build_twisted(char family, int rank, const std::vector<int>& sigma) {
    TwistedType t;
    t.finite_family = family;
    t.rank = rank;
    t.C = finite_cartan(family, rank);
    if (static_cast<int>(sigma.size()) != rank) throw RootDataError("permutation has the wrong size");
    std::vector<int> seen(rank, 0);
    for (int v : sigma) {
        if (v < 0 || v >= rank || seen[v]++) throw RootDataError("sigma is not a permutation");
    }
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            if (t.C[sigma[i]][sigma[j]] != t.C[i][j]) throw RootDataError("sigma is not a diagram automorphism");
    t.sigma = sigma;
    t.M = 1;
    for (int i = 0; i < rank; ++i) {
        int len = 1;
        for (int j = sigma[i]; j != i; j = sigma[j]) ++len;
        t.M = std::lcm(t.M, len);
    }
    if (t.M == 1) throw RootDataError("sigma is the identity");

    t.orbit_of.assign(rank, -1);
    for (int i = 0; i < rank; ++i) {
        if (t.orbit_of[i] >= 0) continue;
        std::vector<int> orb{i};
        for (int j = sigma[i]; j != i; j = sigma[j]) orb.push_back(j);
        for (int j : orb) t.orbit_of[j] = t.num_orbits();
        t.orbits.push_back(orb);
        t.rep.push_back(i);
    }
    int r = t.num_orbits();
    t.N.resize(rank);
    for (int i = 0; i < rank; ++i) t.N[i] = sigma[i] == i ? t.M : 1;

    // literal per-family tables: d over I_sigma + {eps}, and the bonds of eps
    std::vector<HalfInt> d(r + 1, HalfInt(1));
    int attach = 0, c_ie = -1, c_ei = -1;
    switch (family) {
    case 'A':
        if (rank % 2 == 1) {
            t.family = TwistedFamily::A_odd;
            t.n = (rank + 1) / 2;
            d[t.n - 1] = HalfInt(2);
            if (t.n == 2) attach = 1, c_ie = -1, c_ei = -2;
            else attach = 1, c_ie = -1, c_ei = -1;
        } else {
            t.family = TwistedFamily::A_even;
            t.n = rank / 2;
            d[t.n - 1] = HalfInt::from_twice(1);
            d[r] = HalfInt(2);
            attach = 0, c_ie = t.n == 1 ? -4 : -2, c_ei = -1;
        }
        break;
    case 'D':
        if (rank == 4 && t.M == 3) {
            t.family = TwistedFamily::D4_triality;
            t.n = 3;
            d[1] = HalfInt(3);
            attach = 0, c_ie = -1, c_ei = -1;
        } else {
            if (sigma[rank - 2] != rank - 1) throw RootDataError("order-2 automorphism of D_n must swap the fork nodes n-1, n");
            t.family = TwistedFamily::D;
            t.n = rank - 1;
            for (int k = 0; k + 1 < t.n; ++k) d[k] = HalfInt(2);
            attach = 0, c_ie = -1, c_ei = -2;
        }
        break;
    case 'E':
        t.family = TwistedFamily::E6;
        t.n = 4;
        d[1] = HalfInt(2);
        d[3] = HalfInt(2);
        attach = 0, c_ie = -1, c_ei = -1;
        break;
    }
    t.d = d;

    t.C_sigma.assign(r + 1, std::vector<int>(r + 1, 0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            int b2 = 2 * t.B(i, j);
            if (b2 % d[i].twice() != 0) throw RootDataError("internal: non-integral twisted Cartan entry");
            t.C_sigma[i][j] = b2 / d[i].twice();
        }
    t.C_sigma[r][r] = 2;
    t.C_sigma[attach][r] = c_ie;
    t.C_sigma[r][attach] = c_ei;

    static const char* suffix[] = {"", "", "^2", "^3"};
    t.name = std::string(1, family) + std::to_string(rank) + suffix[t.M];

    IntMatrix DC(r + 1, std::vector<int>(r + 1));
    for (int i = 0; i <= r; ++i)
        for (int j = 0; j <= r; ++j) {
            int v = d[i].twice() * t.C_sigma[i][j];
            if (v % 2) throw RootDataError("internal: d C^sigma not integral");
            DC[i][j] = v / 2;
        }
    // move eps to the last slot is already the layout; solve sum_i a_i d_i C_ij = 0
    std::vector<Rat> x = left_kernel(DC);
    t.marks.resize(r + 1);
    for (int i = 0; i <= r; ++i) {
        if (x[i].get_den() != 1 || sgn(x[i]) <= 0) throw RootDataError("internal: marks are not positive integers");
        t.marks[i] = static_cast<int>(x[i].get_num().get_si());
    }
    return t;
}

TwistedType twisted_type(const std::string& name) {
    static const std::regex re(R"(^\s*([ADE])_?\{?(\d+)\}?\s*\^\s*\(?([23])\)?\s*$)");
    std::smatch m;
    if (!std::regex_match(name, m, re)) throw RootDataError("unknown twisted type '" + name + "'");
    char fam = m[1].str()[0];
    int rank = std::stoi(m[2]);
    int M = std::stoi(m[3]);
    std::vector<int> sigma(rank);
    std::iota(sigma.begin(), sigma.end(), 0);
    if (fam == 'A' && M == 2 && rank >= 2) {
        for (int i = 0; i < rank; ++i) sigma[i] = rank - 1 - i;
    } else if (fam == 'D' && M == 2 && rank >= 3) {
        std::swap(sigma[rank - 2], sigma[rank - 1]);
    } else if (fam == 'D' && M == 3 && rank == 4) {
        sigma = {2, 1, 3, 0};
    } else if (fam == 'E' && M == 2 && rank == 6) {
        sigma = {5, 1, 4, 3, 2, 0};
    } else {
        throw RootDataError("no twisted affine type " + name);
    }
    return build_twisted(fam, rank, sigma);
}

Matrix f_matrix(const TwistedType& t, long k) {
    if (k == 0) throw RootDataError("F(k) needs k != 0");
    int r = t.num_orbits();
    Matrix F(r, std::vector<CycloRational>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            CycloRational s;
            for (int p = 1; p <= t.M; ++p) {
                long c = t.C[t.rep[i]][t.sigma_pow(t.rep[j], p)];
                if (c == 0) continue;
                s += qbracket(HalfInt(k * c), t.d[i]) * CycloRational(CycloNum::root_of_unity(k * p, t.M));
            }
            F[i][j] = s;
        }
    return F;
}

CycloRational determinant(const Matrix& m) {
    std::size_t n = m.size();
    if (n == 0) return CycloRational(1);
    if (n == 1) return m[0][0];
    CycloRational det;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        Matrix minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<CycloRational> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        CycloRational term = m[0][c] * determinant(minor);
        if (c % 2) det -= term;
        else det += term;
    }
    return det;
}

CycloRational det_f(const TwistedType& t, long k) {
    if (k % t.M != 0) throw RootDataError("det F(k) is taken for M | k");
    return determinant(f_matrix(t, k));
}

CycloRational det_f_prime(const TwistedType& t, long k) {
    if (k % t.M == 0) throw RootDataError("det F'(k) is taken for M not dividing k");
    Matrix F = f_matrix(t, k), sub;
    for (int i = 0; i < t.num_orbits(); ++i) {
        if (t.fixed(i)) continue;
        std::vector<CycloRational> row;
        for (int j = 0; j < t.num_orbits(); ++j)
            if (!t.fixed(j)) row.push_back(F[i][j]);
        sub.push_back(std::move(row));
    }
    return determinant(sub);
}

namespace {
CycloRational qn(long m, long d) { return qnumber(m, HalfInt(d)); }
}  // namespace

CycloRational det_f_closed_form(const TwistedType& t, long K) {
    if (K % t.M != 0) throw RootDataError("D(Mk) needs M | k");
    long k = K / t.M;
    long n = t.n;
    switch (t.family) {
    case TwistedFamily::A_odd:
        return CycloRational(2) * qn(2, k).pow(n - 1) * qn(2, 2 * n * k) * qn(k, 1).pow(n - 1) * qn(k, 2);
    case TwistedFamily::D:
        return CycloRational(Int(Int(1) << (n - 1))) * qn(2, k) * qn(2, 2 * n * k) * qn(k, 1) * qn(k, 2).pow(n - 1);
    case TwistedFamily::E6:
        return CycloRational(4) * qn(2, k).pow(2) * qn(3, 4 * k) * qn(k, 1).pow(2) * qn(k, 2).pow(2);
    case TwistedFamily::D4_triality:
        return CycloRational(3) * qn(3, k) * qn(2, 9 * k) * qn(k, 1) * qn(k, 3) / qn(2, 3 * k);
    case TwistedFamily::A_even:
        break;
    }
    throw RootDataError("no closed form listed for " + t.name);
}

CycloRational det_f_prime_closed_form(const TwistedType& t, long k) {
    if (k % t.M == 0) throw RootDataError("D'(k) needs M not dividing k");
    long n = t.n;
    switch (t.family) {
    case TwistedFamily::A_odd:
        return qn(n, k) * qn(k, 1).pow(n - 1);
    case TwistedFamily::D:
    case TwistedFamily::D4_triality:
        return qn(2, k) * qn(k, 1);
    case TwistedFamily::E6:
        return qn(3, k) * qn(k, 1).pow(2);
    case TwistedFamily::A_even:
        break;
    }
    throw RootDataError("no closed form listed for " + t.name);
}

}  // namespace qtw
