#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subpower/algebra.hpp"
#include "subpower/catalog.hpp"
#include "subpower/circuit.hpp"

namespace subpower {

Partition generated_congruence(const Algebra& a, const std::vector<std::pair<int, int>>& pairs,
                               const Partition* start = nullptr);
Partition principal_congruence(const Algebra& a, int x, int y);

Partition meet(const Partition& p, const Partition& q);
Partition join(const Partition& p, const Partition& q);
bool leq(const Partition& p, const Partition& q);
bool is_identity(const Partition& p);
bool is_full(const Partition& p);
std::vector<std::pair<int, int>> partition_pairs(const Partition& p);  // x < y, related
std::string partition_string(const Partition& p);                     // e.g. "02|13"

struct CongruenceLattice {
    std::vector<Partition> elems;  // sorted by decreasing block count; [0] is 0, back() is 1
    int bottom() const { return 0; }
    int top() const { return static_cast<int>(elems.size()) - 1; }
    int find(const Partition& p) const;
    // Hasse diagram edges (lower, upper).
    std::vector<std::pair<int, int>> covers() const;
};

CongruenceLattice congruence_lattice(const Algebra& a);

struct IrrEntry {
    int sigma;  // indices into the lattice
    int cover;
};
std::vector<IrrEntry> meet_irreducibles(const CongruenceLattice& lat);

// Term-condition commutator.
Partition commutator(const Algebra& a, const Partition& alpha, const Partition& beta);
bool is_abelian(const Algebra& a, const Partition& alpha);
Partition centralizer(const Algebra& a, const CongruenceLattice& lat, const Partition& alpha);

struct SIProfile {
    bool si = false;
    Partition mu;
    bool mu_abelian = false;
    Partition rho;
    bool rho_abelian = false;
};

struct Analysis {
    CongruenceLattice lattice;
    std::vector<IrrEntry> irr;
    SIProfile si;
};

Analysis analyze_algebra(const Algebra& a);

bool check_similarity(const Catalog& cat, const Algebra& b, const Algebra& c, std::size_t cap = 200000);

struct ResidualSmallness {
    bool small = true;
    std::string offender;
};
ResidualSmallness check_residual_smallness(const Catalog& cat);

Circuit find_difference_term(const Catalog& cat, std::size_t cap = 2'000'000);

struct InducedGroup {
    std::vector<int> block;          // elements of o/alpha, sorted
    std::vector<int> pos;            // element -> index in block or -1
    std::vector<std::vector<int>> add;  // block indices
    std::vector<int> neg;
    int zero = 0;
};

InducedGroup induced_abelian_group(const Algebra& a, const Partition& alpha, int o, const Circuit& d);

}  // namespace subpower
