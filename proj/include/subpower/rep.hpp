#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "subpower/algebra.hpp"
#include "subpower/circuit.hpp"

namespace subpower {

// How a tuple was obtained from the generators. Level nodes are one
// application of t_m; their args are b^(m-1), uhat, u and then the local
// witnesses w_I for the (d-1)-subsets I of the first m coordinates in lex order.
struct Recipe;
using RecipePtr = std::shared_ptr<const Recipe>;

struct Recipe {
    enum class Kind { Gen, Op, PTerm, Level, Opaque };
    Kind kind = Kind::Opaque;
    int index = -1;  // generator, symbol or level m
    std::vector<RecipePtr> args;
};

RecipePtr recipe_gen(int j);
RecipePtr recipe_op(int sym, std::vector<RecipePtr> args);
RecipePtr recipe_p(RecipePtr x, RecipePtr u, RecipePtr y);
RecipePtr recipe_opaque();
bool has_provenance(const RecipePtr& r);

// Cached t_m circuits (e = 1) over the P symbol, with and without P inlined.
class TermCache {
public:
    explicit TermCache(int d) : d_(d) {}
    int d() const { return d_; }
    const Circuit& t(int m);
    const Circuit& t_inlined(int m, const Circuit& P);

private:
    int d_;
    std::map<int, Circuit> t_;
    std::map<int, Circuit> ti_;
};

struct ForkPair {
    int u = -1;
    int uhat = -1;
    bool present() const { return u >= 0; }
};

class Rep {
public:
    Rep(Context ctx, int d);

    const Context& context() const { return ctx_; }
    int n() const { return ctx_.n(); }
    int d() const { return d_; }
    int size() const { return static_cast<int>(tuples_.size()); }
    const Tuple& tuple(int id) const { return tuples_[id]; }
    const RecipePtr& recipe(int id) const { return recipes_[id]; }
    const std::vector<Tuple>& tuples() const { return tuples_; }

    // Adds the tuple unless already present; returns its id.
    int add(const Tuple& t, RecipePtr r);
    int find(const Tuple& t) const;

    const std::vector<std::vector<int>>& subsets() const { return subsets_; }
    std::uint64_t code(int I, const Tuple& t) const;
    int local(int I, const Tuple& t) const;
    int local_by_code(int I, std::uint64_t c) const;
    bool designate_local(int I, std::uint64_t c, int id);
    const std::unordered_map<std::uint64_t, int>& local_map(int I) const { return local_[I]; }
    std::vector<Elem> decode(int I, std::uint64_t c) const;

    ForkPair fork(int coord, int gamma, int delta) const;
    bool designate_fork(int coord, int gamma, int delta, int u, int uhat);
    std::size_t fork_count() const;

    TermCache& terms() const { return *terms_; }

private:
    Context ctx_;
    int d_;
    std::vector<Tuple> tuples_;
    std::vector<RecipePtr> recipes_;
    TupleSet index_;
    std::vector<std::vector<int>> subsets_;
    std::vector<std::unordered_map<std::uint64_t, int>> local_;
    std::vector<std::vector<ForkPair>> forks_;  // per coordinate, gamma * |A| + delta
    std::shared_ptr<TermCache> terms_;
};

// Pairs (gamma, delta) with one witness pair each, least pair in input order.
std::map<std::pair<int, int>, std::pair<int, int>> forks(const std::vector<Tuple>& S, int coord);
// Image of the forks under (gamma, delta) -> (gamma, delta^(gamma^e)).
std::map<std::pair<int, int>, std::pair<int, int>> derived_forks(const Context& ctx, const std::vector<Tuple>& S,
                                                                 int coord, int e);

std::pair<Tuple, Tuple> weak_transitivity_witness(const Context& ctx, const Tuple& v, const Tuple& vhat,
                                                  const Tuple& u, const Tuple& uhat, int coord);

struct ForkAddition {
    int coord;
    int gamma;
    int delta;
    Tuple u, uhat;
    RecipePtr ru, ruhat;
};

struct RepresentResult {
    bool yes = false;                  // S' is empty
    std::vector<ForkAddition> s_prime;
    std::vector<ForkAddition> s;
    Tuple reconstructed;               // b^(n)
    RecipePtr recipe;                  // provenance of b^(n)
    bool complete() const { return yes && s.empty(); }
};

// Representability of b with sifting. Requires designated local witnesses for every b|_I. With
// full_eval every coordinate of each b^(m) is computed and the prefix
// agreement is checked; otherwise only the unknown suffix is evaluated.
RepresentResult is_representable(const Rep& R, const Tuple& b, const RecipePtr& rb, bool full_eval = false);
bool has_local_witnesses(const Rep& R, const Tuple& b);
void absorb(Rep& R, const RepresentResult& res);

// Local representation: witnesses for every projection to fewer than d
// coordinates. theta holds one partition per coordinate (empty for all zero).
Rep local_rep(const Context& ctx, const std::vector<Tuple>& gens, int d,
              const std::vector<Partition>& theta = {});

using SmpOracle = std::function<bool(const Context&, const std::vector<Tuple>&, const Tuple&)>;

struct CompactOptions {
    std::size_t rep_cap = 4096;  // largest Rep(R) enumerated exhaustively
    SmpOracle fallback;          // used once Rep(R) exceeds the cap
    // With a fallback the cap also keeps |Rep(R)|^arity, the cost of the
    // closure check, below this many operation applications.
    double work_cap = 1e6;
};

struct CompactStats {
    int need_fork_calls = 0;
    int oracle_queries = 0;
    bool used_fallback = false;
    std::size_t rep_size = 0;
};

// One call of the exhaustive NeedForkWitnesses oracle; on YES, R is replaced
// by R u S' u S. The state carries the semi-naive closure position across calls.
struct NeedForkState {
    std::vector<Tuple> list;
    std::vector<RecipePtr> recipes;  // filled on demand
    TupleSet members;
    std::size_t pos = 0;
    bool nullary_done = false;
    explicit NeedForkState(int n) : members(n) {}
};
enum class NeedForkAnswer { Yes, No, CapExceeded };
NeedForkAnswer need_fork_witnesses(Rep& R, NeedForkState& st, std::size_t cap);

// All completely representable tuples, or nullopt once more than cap are found.
std::optional<std::vector<Tuple>> completely_representable(const Rep& R, std::size_t cap);

void close_weak_transitivity(Rep& R);

// Compact representation by repeated fork search (exhaustive, with the
// fallback of CompactOptions at scale).
Rep compact_rep_direct(const Context& ctx, const std::vector<Tuple>& gens, int d,
                       const CompactOptions& opt = {}, CompactStats* stats = nullptr);
// Compact representation from an SMP oracle on prefixes.
Rep compact_rep_via_smp(const Context& ctx, const std::vector<Tuple>& gens, int d, const SmpOracle& oracle,
                        CompactStats* stats = nullptr);

// Adds derived-fork witnesses found through oracle queries, skipping forks
// that already have designated witnesses.
void complete_forks_with_oracle(Rep& R, const std::vector<Tuple>& gens, const SmpOracle& oracle,
                                CompactStats* stats = nullptr);

// SMP answered from a standardized representation.
bool smp_via_compact_rep(const Rep& R, const Tuple& b, RepresentResult* trace = nullptr);

// G u Lambda u Phi for the saturation B[theta].
std::vector<Tuple> saturation_generators(const Context& ctx, const std::vector<Tuple>& gens, int d,
                                         const std::vector<Partition>& theta);

// F-circuit over the k generators computing the tuple described by r.
Circuit materialize(const RecipePtr& r, int k, const Signature& sig, const Circuit& P, TermCache& terms);

std::size_t compact_bound(int n, int d, int a);

}  // namespace subpower
