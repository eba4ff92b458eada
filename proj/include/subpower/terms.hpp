#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subpower/circuit.hpp"

namespace subpower {

std::size_t binomial(int n, int k);
// k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> lex_subsets(int n, int k);
// Position of a sorted k-subset of {0..n-1} in lex_subsets(n, k).
std::size_t lex_rank(const std::vector<int>& subset, int n);

struct IdentityFailure {
    std::string algebra;
    int row = -1;                 // 0-based row of the identity block, -1 otherwise
    std::vector<Elem> assignment; // values for the identity's variables
};

std::optional<IdentityFailure> check_identity(const Algebra& a, const Circuit& lhs, const Circuit& rhs,
                                              std::size_t cap = 10'000'000);

// Rows of the (m,n)-parallelogram identities over variables x, y, z.
std::optional<IdentityFailure> check_parallelogram(const std::vector<AlgebraPtr>& algs,
                                                   const Circuit& P, int m, int n);
bool verify_parallelogram(const std::vector<AlgebraPtr>& algs, const Circuit& P, int m, int n);

// Circuits over the single symbol kPSym for a (1,d-1)-parallelogram term.
Circuit s_circuit(int d);
Circuit p_circuit(int d);
Circuit xy_circuit(int d);
Circuit s_pow_circuit(int d, int l);

struct Auxiliary {
    Circuit s, p, xy;  // over the basic signature
};

// Derives s, p and x^y from P and checks the identities they must satisfy.
Auxiliary derive_auxiliary(const std::vector<AlgebraPtr>& algs, const Circuit& P, int d);

// Table of a ternary term on one algebra: index (x*m + y)*m + z.
std::vector<Elem> ternary_table(const Algebra& a, const Circuit& c);

int find_fork_exponent(const std::vector<AlgebraPtr>& algs, const Circuit& xy);

// t_n(x, y, z, w_I...) with w_I in lex order of the (d-1)-subsets of [n].
Circuit build_tn(int n, int d, int e);
// Inputs: (z^(m), zhat^(m)) for m = d..n, then w_I in lex order. z^(m) is the
// fork witness ending in gamma and zhat^(m) the one ending in beta^(gamma^e).
Circuit build_Tn(int n, int d, int e);
// Same inputs plus a final input b; outputs T_n followed by p(T_{m-1}, b, b)
// for m = d..n.
Circuit build_Tn_plus(int n, int d, int e);

// Copies the table-level P and p of a verified P onto a fresh algebra object.
AlgebraPtr attach_terms(const Algebra& a, const Circuit& P, int d);

struct TermSearchResult {
    bool found = false;
    bool exhausted = false;  // closure completed without the target
    Circuit term;
    std::size_t explored = 0;
};

TermSearchResult search_parallelogram_term(const Algebra& a, int d, std::size_t cap = 2'000'000);

}  // namespace subpower
