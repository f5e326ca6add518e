#pragma once

#include "qtw/field.hpp"

#include <string>
#include <vector>

namespace qtw {

using IntMatrix = std::vector<std::vector<int>>;
using Matrix = std::vector<std::vector<CycloRational>>;

class RootDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TwistedFamily { A_odd, A_even, D, E6, D4_triality };

// Finite simply-laced diagram with a diagram automorphism, and the twisted affine Cartan data it determines.
// Nodes and orbits are 0-based internally; orbit k is the orbit whose minimal node is the k-th smallest
// representative, and the affine node epsilon is the last index of the twisted matrices.
struct TwistedType {
    std::string name;  // "A2^2", "D4^3", ...
    TwistedFamily family;
    char finite_family;
    int rank;  // |I|
    int n;     // family parameter: A_{2n-1}, A_{2n}, D_{n+1}
    int M;
    IntMatrix C;                          // finite Cartan matrix over I
    std::vector<int> sigma;               // node -> node
    std::vector<std::vector<int>> orbits; // orbit -> nodes, representative first
    std::vector<int> orbit_of;            // node -> orbit
    std::vector<int> rep;                 // orbit -> representative node
    IntMatrix C_sigma;                    // over I_sigma + {epsilon}
    std::vector<HalfInt> d;               // over I_sigma + {epsilon}
    std::vector<int> N;                   // node -> 1 or M
    std::vector<int> marks;               // over I_sigma + {epsilon}

    int num_orbits() const { return static_cast<int>(orbits.size()); }
    int eps() const { return num_orbits(); }
    bool fixed(int orbit) const { return orbits[orbit].size() == 1; }
    int sigma_pow(int node, int r) const;
    // d_i C^sigma_ij = sum_r C_{i, sigma^r(j)} at representatives; symmetric and integral.
    int B(int i, int j) const;
    std::string orbit_label(int orbit) const;  // "1", "2", ... ; "e" for epsilon
    int parse_orbit(const std::string& label) const;
};

IntMatrix finite_cartan(char family, int rank);
TwistedType build_twisted(char family, int rank, const std::vector<int>& sigma);
// Accepts "A2^2", "A3^2", "D3^2", "D4^2", "E6^2", "D4^3" and the other members of the families.
TwistedType twisted_type(const std::string& name);

// F(k)_{ij} = sum_{r=1}^M [k C_{i, sigma^r(j)} / d_i]_{q^{d_i}} omega^{kr}
Matrix f_matrix(const TwistedType& t, long k);
CycloRational determinant(const Matrix& m);
CycloRational det_f(const TwistedType& t, long k);        // requires M | k
CycloRational det_f_prime(const TwistedType& t, long k);  // requires M does not divide k
// Closed forms of det F(k) (M | k) and det F'(k); only for the families other than A_{2n}.
CycloRational det_f_closed_form(const TwistedType& t, long k);
CycloRational det_f_prime_closed_form(const TwistedType& t, long k);

}  // namespace qtw
