#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "subpower/catalog.hpp"
#include "subpower/congruence.hpp"
#include "subpower/rep.hpp"

namespace subpower {

struct SmpInstance {
    std::vector<std::string> factors;
    std::vector<Tuple> generators;
    Tuple target;
};

enum class Method { Auto, Brute, Compact, Reduction, Rs };
Method parse_method(const std::string& s);
std::string method_name(Method m);

struct SmpAnswer {
    bool yes = false;
    std::string method;
    std::optional<Circuit> witness;
    std::string note;             // why a requested witness is missing, if it is
    long long micros = 0;
    std::size_t closure_size = 0; // brute force only
    std::size_t rep_size = 0;     // tuples in the compact representation
};

struct GroupTable {
    std::vector<std::vector<int>> add;
    std::vector<int> neg;
    int zero = 0;
    int size() const { return static_cast<int>(neg.size()); }
};
GroupTable group_table(const InducedGroup& g);

// Membership of b in the subgroup of G_1 x ... x G_n generated by H, by
// echelon sifting over the coordinates. Entries are group element indices.
bool abelian_sift(const std::vector<GroupTable>& groups, const std::vector<std::vector<int>>& H,
                  const std::vector<int>& b);

struct Coherence {
    bool ok = false;
    int failed = 0;  // 1-based condition of the definition, 0 when ok
};

// One element (j, sigma) of W: the subdirectly irreducible quotient B_j/sigma.
struct WEntry {
    int coord = -1;  // position among the original coordinates
    int sigma = -1;  // index into the congruence lattice of B_j
    HSMember member; // algebra B_j/sigma with its provenance over the base catalog
    std::vector<int> map;  // element of the factor -> element of B_j/sigma, -1 outside B_j
    Partition mu, rho;
    bool mu_le_rho = false;
};

struct StructureData {
    std::vector<int> kept;       // nontrivial coordinates
    std::vector<WEntry> W;
    std::vector<std::vector<int>> classes;  // blocks of ~ as indices into W
};

class Solver {
public:
    explicit Solver(const Catalog& cat);

    const Catalog& catalog() const { return cat_; }
    int d() const { return cat_.d(); }

    SmpAnswer solve(const SmpInstance& inst, Method m, bool want_witness = false);

    bool brute(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b, std::size_t* size = nullptr,
               std::optional<Circuit>* witness = nullptr);
    bool compact(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b,
                 std::optional<Circuit>* witness = nullptr, std::string* note = nullptr,
                 std::size_t* rep_size = nullptr);
    Rep compact_rep(const Context& ctx, const std::vector<Tuple>& gens, CompactStats* stats = nullptr);
    bool reduction(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b);
    bool rs(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b);

    // Reduction to factors in K for factors in HS(K), with SMP(K) answered by the compact path.
    bool reduce_hs(const std::vector<HSMember>& factors, const std::vector<Tuple>& gens, const Tuple& b);
    Coherence check_d_coherent(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b);
    // Residually small solver on a d-coherent input.
    bool solve_smpd_rs(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b);

    // W, the hat map and the blocks of ~ for the subalgebra generated by gens.
    StructureData structure(const Context& ctx, const std::vector<Tuple>& gens);
    // The structural membership condition over W and ~ as a predicate on tuples;
    // the projections it needs are closed once, by brute force.
    std::function<bool(const Tuple&)> structure_condition(const Context& ctx, const std::vector<Tuple>& gens,
                                                          const StructureData& sd);

    bool residually_small();
    std::size_t brute_cap = 2'000'000;
    double brute_work_cap = 1e8;  // operation applications in one brute-force closure
    CompactOptions compact_options;  // fallback filled in by the solver when residually small
    bool oracle_fallback = true;     // set false to keep NeedForkWitnesses exhaustive

private:
    using SmpdSolver = bool (Solver::*)(const std::vector<HSMember>&, const std::vector<Tuple>&, const Tuple&);
    bool reduce_to_d_coherent(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b, SmpdSolver smpd);
    bool smpd_rs_members(const std::vector<HSMember>& f, const std::vector<Tuple>& gens, const Tuple& b);
    HSMember factor_info(const Algebra& a) const;
    const Analysis& analysis_of(const AlgebraPtr& a);
    bool similar(const AlgebraPtr& a, const AlgebraPtr& b);
    const Circuit& difference_term();

    struct SubEntry {
        AlgebraPtr sub;
        std::vector<int> index;  // element of the factor -> index in sub or -1
    };
    const SubEntry& subalgebra(const AlgebraPtr& a, const std::vector<int>& universe);
    const Quotient& quotient_of(const AlgebraPtr& sub, int sigma);

    const Catalog& cat_;
    std::optional<bool> rs_small_;
    std::optional<Circuit> diff_;
    std::map<const Algebra*, std::shared_ptr<const Analysis>> analyses_;
    std::map<std::pair<const Algebra*, const Algebra*>, bool> similar_;
    std::map<std::pair<const Algebra*, std::vector<int>>, SubEntry> subs_;
    std::map<std::pair<const Algebra*, int>, Quotient> quots_;
};

}  // namespace subpower
