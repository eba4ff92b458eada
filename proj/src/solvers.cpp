#include "subpower/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <set>

#include "subpower/terms.hpp"

namespace subpower {

Method parse_method(const std::string& s) {
    if (s == "auto") return Method::Auto;
    if (s == "brute") return Method::Brute;
    if (s == "compact") return Method::Compact;
    if (s == "reduction") return Method::Reduction;
    if (s == "rs") return Method::Rs;
    throw Error("unknown method " + s + " (expected auto, brute, compact, reduction or rs)");
}

std::string method_name(Method m) {
    switch (m) {
    case Method::Auto: return "auto";
    case Method::Brute: return "brute";
    case Method::Compact: return "compact";
    case Method::Reduction: return "reduction";
    case Method::Rs: return "rs";
    }
    return "?";
}

// ------------------------------------------------------------ abelian sift

GroupTable group_table(const InducedGroup& g) {
    GroupTable t;
    t.add = g.add;
    t.neg = g.neg;
    t.zero = g.zero;
    return t;
}

namespace {

void check_group(const GroupTable& g) {
    const int s = g.size();
    if (s == 0 || static_cast<int>(g.add.size()) != s || g.zero < 0 || g.zero >= s) throw Error("malformed group table");
    for (int x = 0; x < s; ++x) {
        if (static_cast<int>(g.add[x].size()) != s) throw Error("malformed group table");
        if (g.add[g.zero][x] != x || g.add[x][g.neg[x]] != g.zero) throw Error("group table: identity or inverse fails");
        for (int y = 0; y < s; ++y)
            if (g.add[x][y] != g.add[y][x]) throw Error("group table is not abelian");
    }
    // associativity on all triples for small groups, a fixed stride otherwise
    const long long total = 1LL * s * s * s;
    const long long step = total <= 200000 ? 1 : total / 200000 + 1;
    for (long long i = 0; i < total; i += step) {
        int x = static_cast<int>(i / (1LL * s * s)), y = static_cast<int>(i / s % s), z = static_cast<int>(i % s);
        if (g.add[g.add[x][y]][z] != g.add[x][g.add[y][z]]) throw Error("group table is not associative");
    }
}

}  // namespace

bool abelian_sift(const std::vector<GroupTable>& groups, const std::vector<std::vector<int>>& H,
                  const std::vector<int>& b) {
    const int n = static_cast<int>(groups.size());
    for (const auto& g : groups) check_group(g);
    if (static_cast<int>(b.size()) != n) throw Error("sift target has the wrong length");
    using V = std::vector<int>;
    auto add = [&](const V& x, const V& y) {
        V r(n);
        for (int j = 0; j < n; ++j) r[j] = groups[j].add[x[j]][y[j]];
        return r;
    };
    auto sub = [&](const V& x, const V& y) {
        V r(n);
        for (int j = 0; j < n; ++j) r[j] = groups[j].add[x[j]][groups[j].neg[y[j]]];
        return r;
    };
    // level j: representatives of the projection onto j of the subgroup vanishing before j
    std::vector<std::vector<int>> rep_of(n);
    std::vector<std::vector<V>> reps(n);
    for (int j = 0; j < n; ++j) {
        rep_of[j].assign(groups[j].size(), -1);
        rep_of[j][groups[j].zero] = 0;
        reps[j].push_back(V());
        for (int q = 0; q < n; ++q) reps[j][0].push_back(groups[q].zero);
    }
    std::vector<V> work;
    for (const auto& h : H) {
        if (static_cast<int>(h.size()) != n) throw Error("sift generator has the wrong length");
        work.push_back(h);
        while (!work.empty()) {
            V x = std::move(work.back());
            work.pop_back();
            int j = 0;
            while (j < n) {
                if (x[j] == groups[j].zero) {
                    ++j;
                    continue;
                }
                int r = rep_of[j][x[j]];
                if (r >= 0) {
                    x = sub(x, reps[j][r]);
                    ++j;
                    continue;
                }
                break;
            }
            if (j == n) continue;
            // extend level j by x
            std::vector<int> old;
            for (int e = 0; e < groups[j].size(); ++e)
                if (rep_of[j][e] >= 0) old.push_back(e);
            V mult = x;
            while (rep_of[j][mult[j]] < 0) {
                for (int e : old) {
                    int v = groups[j].add[e][mult[j]];
                    if (rep_of[j][v] >= 0) continue;
                    rep_of[j][v] = static_cast<int>(reps[j].size());
                    reps[j].push_back(add(reps[j][rep_of[j][e]], mult));
                }
                mult = add(mult, x);
            }
            // the first multiple landing in the old subgroup yields a relation for deeper levels
            work.push_back(sub(mult, reps[j][rep_of[j][mult[j]]]));
        }
    }
    V x = b;
    for (int j = 0; j < n; ++j) {
        if (x[j] == groups[j].zero) continue;
        int r = rep_of[j][x[j]];
        if (r < 0) return false;
        x = sub(x, reps[j][r]);
    }
    return true;
}

// ------------------------------------------------------------ helpers

namespace {

Closure close(const Context& ctx, const std::vector<Tuple>& gens, std::size_t cap) {
    ClosureOptions opt;
    opt.cap = cap;
    return subalgebra_closure(ctx, gens, opt);
}

std::vector<Tuple> project_all(const std::vector<Tuple>& ts, const std::vector<int>& coords) {
    std::vector<Tuple> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(project(t, coords));
    return out;
}

std::vector<int> coordinate_universe(const Context& ctx, const std::vector<Tuple>& gens, int j) {
    Closure cl = close(ctx.project({j}), project_all(gens, {j}), 10'000'000);
    std::vector<int> u;
    for (std::size_t i = 0; i < cl.set.size(); ++i) u.push_back(cl.set.at(i)[0]);
    std::sort(u.begin(), u.end());
    return u;
}

// Is the relation {(x/rho_a, y/rho_b)} given by pairs the graph of a bijection between all classes?
bool bijective_on_classes(const std::set<std::pair<int, int>>& rel, const Partition& ra, const Partition& rb) {
    std::map<int, int> fwd, bwd;
    for (auto [x, y] : rel) {
        if (!fwd.emplace(x, y).second && fwd[x] != y) return false;
        if (!bwd.emplace(y, x).second && bwd[y] != x) return false;
    }
    return static_cast<int>(fwd.size()) == block_count(ra) && static_cast<int>(bwd.size()) == block_count(rb);
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

Solver::Solver(const Catalog& cat) : cat_(cat) {
    if (!cat.configured()) throw Error("catalog has no parallelogram term configured");
}

bool Solver::residually_small() {
    if (!rs_small_) rs_small_ = check_residual_smallness(cat_).small;
    return *rs_small_;
}

const Circuit& Solver::difference_term() {
    if (!diff_) diff_ = find_difference_term(cat_);
    return *diff_;
}

const Analysis& Solver::analysis_of(const AlgebraPtr& a) {
    auto it = analyses_.find(a.get());
    if (it == analyses_.end()) it = analyses_.emplace(a.get(), cat_.analysis(*a)).first;
    return *it->second;
}

bool Solver::similar(const AlgebraPtr& a, const AlgebraPtr& b) {
    if (a.get() == b.get()) return true;
    auto key = a.get() < b.get() ? std::make_pair(a.get(), b.get()) : std::make_pair(b.get(), a.get());
    auto it = similar_.find(key);
    if (it != similar_.end()) return it->second;
    bool v = check_similarity(cat_, *a, *b);
    similar_[key] = v;
    return v;
}

const Solver::SubEntry& Solver::subalgebra(const AlgebraPtr& a, const std::vector<int>& universe) {
    auto key = std::make_pair(a.get(), universe);
    auto it = subs_.find(key);
    if (it != subs_.end()) return it->second;
    SubEntry e;
    if (static_cast<int>(universe.size()) == a->size()) {
        e.sub = a;
    } else {
        std::string nm = a->name() + "[";
        for (std::size_t i = 0; i < universe.size(); ++i) nm += (i ? "," : "") + std::to_string(universe[i]);
        e.sub = make_subalgebra(*a, universe, nm + "]");
    }
    e.index.assign(a->size(), -1);
    for (std::size_t i = 0; i < universe.size(); ++i) e.index[universe[i]] = static_cast<int>(i);
    return subs_.emplace(key, std::move(e)).first->second;
}

const Quotient& Solver::quotient_of(const AlgebraPtr& sub, int sigma) {
    auto key = std::make_pair(sub.get(), sigma);
    auto it = quots_.find(key);
    if (it != quots_.end()) return it->second;
    const Partition& p = analysis_of(sub).lattice.elems[sigma];
    Quotient q = quotient(*sub, p, sub->name() + "/" + partition_string(p));
    return quots_.emplace(key, std::move(q)).first->second;
}

HSMember Solver::factor_info(const Algebra& a) const {
    int bi = cat_.base_index(a.name());
    if (bi >= 0) {
        HSMember h;
        h.algebra = cat_.algebras()[bi];
        h.base = bi;
        const int m = h.algebra->size();
        h.universe.resize(m);
        std::iota(h.universe.begin(), h.universe.end(), 0);
        h.block_of = h.universe;
        h.rep = h.universe;
        return h;
    }
    if (const HSMember* h = cat_.hs_member(a.name())) return *h;
    throw Error("factor " + a.name() + " lacks provenance over the catalog");
}

// ------------------------------------------------------------ brute force and compact

bool Solver::brute(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b, std::size_t* size,
                   std::optional<Circuit>* witness) {
    ClosureOptions opt;
    opt.cap = brute_cap;
    opt.work_cap = brute_work_cap;
    opt.provenance = witness != nullptr;
    long hit = -1;
    if (witness) {
        opt.on_new = [&](const TupleSet& s, std::size_t i) {
            if (std::equal(b.begin(), b.end(), s.at(i))) {
                hit = static_cast<long>(i);
                return true;
            }
            return false;
        };
    }
    Closure cl = subalgebra_closure(ctx, gens, opt);
    if (size) *size = cl.set.size();
    bool yes = witness ? hit >= 0 : cl.set.contains(b);
    if (yes && witness) *witness = derivation_circuit(cl, cat_.signature(), static_cast<int>(gens.size()), hit);
    return yes;
}

Rep Solver::compact_rep(const Context& ctx, const std::vector<Tuple>& gens, CompactStats* stats) {
    CompactOptions opt = compact_options;
    if (!opt.fallback && oracle_fallback && residually_small())
        opt.fallback = [this](const Context& c, const std::vector<Tuple>& g, const Tuple& t) { return rs(c, g, t); };
    return compact_rep_direct(ctx, gens, d(), opt, stats);
}

bool Solver::compact(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b,
                     std::optional<Circuit>* witness, std::string* note, std::size_t* rep_size) {
    if (ctx.n() < d()) return brute(ctx, gens, b, nullptr, witness);
    Rep R = compact_rep(ctx, gens);
    if (rep_size) *rep_size = R.size();
    RepresentResult trace;
    bool yes = smp_via_compact_rep(R, b, &trace);
    if (yes && witness) {
        if (has_provenance(trace.recipe)) {
            Circuit w = materialize(trace.recipe, static_cast<int>(gens.size()), cat_.signature(), cat_.P(), R.terms());
            if (w.eval(ctx, gens) != b) throw Error("witness circuit does not evaluate to the target");
            *witness = std::move(w);
        } else if (note) {
            *note = "witness unavailable: some fork witnesses were found through SMP oracle queries";
        }
    }
    return yes;
}

// ------------------------------------------------------------ HS(K) to K

bool Solver::reduce_hs(const std::vector<HSMember>& factors, const std::vector<Tuple>& gens, const Tuple& b) {
    const int n = static_cast<int>(factors.size());
    Context qctx;
    for (const auto& f : factors) qctx.factors.push_back(f.algebra);
    if (n < d()) return brute(qctx, gens, b);
    Context kctx;
    std::vector<Partition> theta(n);
    for (int i = 0; i < n; ++i) {
        const HSMember& f = factors[i];
        if (f.base < 0 || f.rep.empty()) throw Error("factor " + f.algebra->name() + " lacks provenance");
        AlgebraPtr A = cat_.algebras()[f.base];
        kctx.factors.push_back(A);
        theta[i].resize(A->size());
        for (int x = 0; x < A->size(); ++x) theta[i][x] = f.block_of[x] >= 0 ? f.rep[f.block_of[x]] : x;
    }
    auto lift = [&](const Tuple& c) {
        Tuple a(n);
        for (int i = 0; i < n; ++i) a[i] = static_cast<Elem>(factors[i].rep[c[i]]);
        return a;
    };
    std::vector<Tuple> G;
    for (const auto& c : gens) G.push_back(lift(c));
    std::vector<Tuple> sat = saturation_generators(kctx, G, d(), theta);
    return compact(kctx, sat, lift(b));
}

// ------------------------------------------------------------ structure data

StructureData Solver::structure(const Context& ctx, const std::vector<Tuple>& gens) {
    const int n = ctx.n();
    StructureData sd;
    for (int j = 0; j < n; ++j) {
        std::vector<int> U = coordinate_universe(ctx, gens, j);
        if (U.size() <= 1) continue;
        sd.kept.push_back(j);
        const SubEntry& se = subalgebra(ctx.factors[j], U);
        HSMember f = factor_info(ctx[j]);
        const Analysis& an = analysis_of(se.sub);
        for (const auto& e : an.irr) {
            const Quotient& q = quotient_of(se.sub, e.sigma);
            WEntry w;
            w.coord = j;
            w.sigma = e.sigma;
            w.map.assign(ctx[j].size(), -1);
            for (int y = 0; y < ctx[j].size(); ++y)
                if (se.index[y] >= 0) w.map[y] = q.map[se.index[y]];
            HSMember& m = w.member;
            m.algebra = q.algebra;
            m.base = f.base;
            const int bs = cat_.algebras()[f.base]->size();
            m.block_of.assign(bs, -1);
            m.rep.assign(q.algebra->size(), -1);
            for (int x = 0; x < bs; ++x) {
                int y = f.block_of[x];
                if (y < 0 || w.map[y] < 0) continue;
                m.block_of[x] = w.map[y];
                m.universe.push_back(x);
                if (m.rep[w.map[y]] < 0) m.rep[w.map[y]] = x;
            }
            const Analysis& qa = analysis_of(q.algebra);
            if (!qa.si.si) throw Error("quotient by a meet irreducible congruence is not subdirectly irreducible");
            w.mu = qa.si.mu;
            w.rho = qa.si.rho;
            w.mu_le_rho = leq(w.mu, w.rho);
            sd.W.push_back(std::move(w));
        }
    }
    const int Wn = static_cast<int>(sd.W.size());
    UnionFind uf(Wn);
    for (int v = 0; v < Wn; ++v)
        for (int w = v + 1; w < Wn; ++w) {
            const WEntry& a = sd.W[v];
            const WEntry& b = sd.W[w];
            if (!a.mu_le_rho || !b.mu_le_rho) continue;
            if (!similar(a.member.algebra, b.member.algebra)) continue;
            Context pc{{a.member.algebra, b.member.algebra}};
            std::vector<Tuple> pg;
            for (const auto& g : gens)
                pg.push_back({static_cast<Elem>(a.map[g[a.coord]]), static_cast<Elem>(b.map[g[b.coord]])});
            Closure cl = close(pc, pg, 10'000'000);
            std::set<std::pair<int, int>> rel;
            for (std::size_t i = 0; i < cl.set.size(); ++i) rel.emplace(a.rho[cl.set.at(i)[0]], b.rho[cl.set.at(i)[1]]);
            if (bijective_on_classes(rel, a.rho, b.rho)) uf.unite(v, w);
        }
    std::map<int, int> cls;
    for (int v = 0; v < Wn; ++v) {
        int r = uf.find(v);
        auto it = cls.find(r);
        if (it == cls.end()) {
            it = cls.emplace(r, static_cast<int>(sd.classes.size())).first;
            sd.classes.emplace_back();
        }
        sd.classes[it->second].push_back(v);
    }
    return sd;
}

std::function<bool(const Tuple&)> Solver::structure_condition(const Context& ctx, const std::vector<Tuple>& gens,
                                                              const StructureData& sd) {
    const int n = ctx.n();
    const int lim = std::max(d(), 3);
    struct Check {
        std::vector<int> coords;      // original coordinates (small subsets)
        std::vector<int> block;       // W indices (hat blocks)
        std::shared_ptr<TupleSet> set;
    };
    std::vector<Check> checks;
    for (int s = 1; s < lim && s <= n; ++s)
        for (const auto& I : lex_subsets(n, s)) {
            Closure cl = close(ctx.project(I), project_all(gens, I), brute_cap);
            checks.push_back({I, {}, std::make_shared<TupleSet>(std::move(cl.set))});
        }
    for (const auto& U : sd.classes) {
        if (static_cast<int>(U.size()) < lim) continue;
        Context uc;
        for (int w : U) uc.factors.push_back(sd.W[w].member.algebra);
        std::vector<Tuple> hg;
        for (const auto& g : gens) {
            Tuple h;
            for (int w : U) h.push_back(static_cast<Elem>(sd.W[w].map[g[sd.W[w].coord]]));
            hg.push_back(h);
        }
        Closure cl = close(uc, hg, brute_cap);
        checks.push_back({{}, U, std::make_shared<TupleSet>(std::move(cl.set))});
    }
    std::vector<WEntry> W = sd.W;
    return [checks = std::move(checks), W = std::move(W)](const Tuple& c) {
        Tuple h;
        for (const auto& ch : checks) {
            h.clear();
            if (ch.block.empty()) {
                for (int i : ch.coords) h.push_back(c[i]);
            } else {
                for (int w : ch.block) {
                    int x = W[w].map[c[W[w].coord]];
                    if (x < 0) return false;
                    h.push_back(static_cast<Elem>(x));
                }
            }
            if (!ch.set->contains(h)) return false;
        }
        return true;
    };
}

// ------------------------------------------------------------ d-coherent reduction

bool Solver::reduce_to_d_coherent(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b,
                                  SmpdSolver smpd) {
    const int n = ctx.n();
    if (n < d()) return brute(ctx, gens, b);
    const int dm = std::max(d() - 1, 2);
    for (const auto& I : lex_subsets(n, dm)) {
        Closure cl = close(ctx.project(I), project_all(gens, I), brute_cap);
        if (!cl.set.contains(project(b, I))) return false;
    }
    StructureData sd = structure(ctx, gens);
    if (static_cast<int>(sd.kept.size()) <= dm) return true;
    for (const auto& E : sd.classes) {
        if (static_cast<int>(E.size()) <= dm) continue;
        std::vector<HSMember> factors;
        for (int w : E) factors.push_back(sd.W[w].member);
        auto hat = [&](const Tuple& t) {
            Tuple h;
            for (int w : E) h.push_back(static_cast<Elem>(sd.W[w].map[t[sd.W[w].coord]]));
            return h;
        };
        std::vector<Tuple> hg;
        for (const auto& g : gens) hg.push_back(hat(g));
        if (!(this->*smpd)(factors, hg, hat(b))) return false;
    }
    return true;
}

bool Solver::reduction(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b) {
    return reduce_to_d_coherent(ctx, gens, b, &Solver::reduce_hs);
}

bool Solver::rs(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b) {
    if (!residually_small())
        throw Error("method rs: catalog is not residually small (offender " + check_residual_smallness(cat_).offender + ")");
    return reduce_to_d_coherent(ctx, gens, b, &Solver::smpd_rs_members);
}

bool Solver::smpd_rs_members(const std::vector<HSMember>& f, const std::vector<Tuple>& gens, const Tuple& b) {
    Context ctx;
    for (const auto& m : f) ctx.factors.push_back(m.algebra);
    return solve_smpd_rs(ctx, gens, b);
}

// ------------------------------------------------------------ d-coherence

Coherence Solver::check_d_coherent(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b) {
    const int n = ctx.n();
    const int lim = std::max(d(), 3);
    if (n < lim) return {false, 1};
    for (int j = 0; j < n; ++j)
        if (static_cast<int>(coordinate_universe(ctx, gens, j).size()) != ctx[j].size()) return {false, 2};
    for (int j = 0; j < n; ++j) {
        const Analysis& an = analysis_of(ctx.factors[j]);
        if (!an.si.si || !an.si.mu_abelian) return {false, 3};
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!similar(ctx.factors[i], ctx.factors[j])) return {false, 3};
    for (int s = 1; s < lim; ++s)
        for (const auto& I : lex_subsets(n, s)) {
            Closure cl = close(ctx.project(I), project_all(gens, I), brute_cap);
            if (!cl.set.contains(project(b, I))) return {false, 4};
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Partition& ri = analysis_of(ctx.factors[i]).si.rho;
            const Partition& rj = analysis_of(ctx.factors[j]).si.rho;
            Closure cl = close(ctx.project({i, j}), project_all(gens, {i, j}), brute_cap);
            std::set<std::pair<int, int>> rel;
            for (std::size_t q = 0; q < cl.set.size(); ++q) rel.emplace(ri[cl.set.at(q)[0]], rj[cl.set.at(q)[1]]);
            if (!bijective_on_classes(rel, ri, rj)) return {false, 5};
        }
    return {true, 0};
}

// ------------------------------------------------------------ residually small solver

bool Solver::solve_smpd_rs(const Context& ctx, const std::vector<Tuple>& gens, const Tuple& b) {
    if (!residually_small())
        throw Error("method rs: catalog is not residually small (offender " + check_residual_smallness(cat_).offender + ")");
    const int n = ctx.n();
    const Signature& sig = cat_.signature();
    std::vector<const Partition*> rho(n);
    for (int j = 0; j < n; ++j) {
        const Analysis& an = analysis_of(ctx.factors[j]);
        if (!an.si.si) throw Error("input is not d-coherent: factor " + ctx[j].name() + " is not subdirectly irreducible");
        rho[j] = &an.si.rho;
    }
    // transversal O of the rho-classes of B, driven by the first coordinate
    const Partition& r1 = *rho[0];
    std::vector<Tuple> O;
    std::set<int> seen;
    for (const auto& a : gens)
        if (seen.insert(r1[a[0]]).second) O.push_back(a);
    for (bool grown = true; grown;) {
        grown = false;
        for (int s = 0; s < sig.size() && !grown; ++s) {
            const int ar = sig.symbols[s].arity;
            std::vector<int> idx(ar, 0);
            const int size = static_cast<int>(O.size());
            while (!grown) {
                std::vector<const Tuple*> args;
                for (int q = 0; q < ar; ++q) args.push_back(&O[idx[q]]);
                Tuple t = apply_op(ctx, s, args);
                if (seen.insert(r1[t[0]]).second) {
                    O.push_back(t);
                    grown = true;
                    break;
                }
                int q = ar - 1;
                for (; q >= 0; --q) {
                    if (++idx[q] < size) break;
                    idx[q] = 0;
                }
                if (q < 0) break;
            }
        }
    }
    // coordinates with the same algebra and the same O-column are interchangeable
    std::map<std::pair<const Algebra*, std::vector<int>>, int> cls;
    std::vector<int> tof(n);
    std::vector<int> T;
    for (int j = 0; j < n; ++j) {
        std::vector<int> col;
        for (const auto& o : O) col.push_back(o[j]);
        auto key = std::make_pair(ctx.factors[j].get(), col);
        auto it = cls.find(key);
        if (it == cls.end()) {
            it = cls.emplace(key, static_cast<int>(T.size())).first;
            T.push_back(j);
        }
        tof[j] = it->second;
    }
    // unary polynomials of A_T generated by the identity and the constants from O
    Context pctx;
    std::vector<int> offset;
    for (int t : T) {
        offset.push_back(pctx.n());
        for (int x = 0; x < ctx[t].size(); ++x) pctx.factors.push_back(ctx.factors[t]);
    }
    std::vector<Tuple> pgen;
    Tuple id;
    for (int t : T)
        for (int x = 0; x < ctx[t].size(); ++x) id.push_back(static_cast<Elem>(x));
    pgen.push_back(id);
    for (const auto& o : O) {
        Tuple c;
        for (int t : T)
            for (int x = 0; x < ctx[t].size(); ++x) c.push_back(o[t]);
        pgen.push_back(c);
    }
    Closure P = close(pctx, pgen, brute_cap);
    // the transversal element in the rho-class of b
    const Tuple* o = nullptr;
    for (const auto& cand : O) {
        bool in = true;
        for (int j = 0; j < n && in; ++j) in = (*rho[j])[cand[j]] == (*rho[j])[b[j]];
        if (in) {
            o = &cand;
            break;
        }
    }
    if (!o) return false;
    std::vector<GroupTable> groups;
    std::vector<InducedGroup> ig;
    const Circuit& dterm = difference_term();
    for (int j = 0; j < n; ++j) {
        ig.push_back(induced_abelian_group(ctx[j], *rho[j], (*o)[j], dterm));
        groups.push_back(group_table(ig.back()));
    }
    TupleSet H(n);
    std::vector<std::vector<int>> Hg;
    Tuple dv(n);
    for (std::size_t pi = 0; pi < P.set.size(); ++pi) {
        const Elem* p = P.set.at(pi);
        for (const auto& c : gens) {
            bool in = true;
            for (int j = 0; j < n; ++j) {
                dv[j] = p[offset[tof[j]] + c[j]];
                if ((*rho[j])[dv[j]] != (*rho[j])[(*o)[j]]) {
                    in = false;
                    break;
                }
            }
            if (!in || !H.insert(dv).second) continue;
            std::vector<int> g(n);
            for (int j = 0; j < n; ++j) g[j] = ig[j].pos[dv[j]];
            Hg.push_back(std::move(g));
        }
    }
    std::vector<int> bg(n);
    for (int j = 0; j < n; ++j) bg[j] = ig[j].pos[b[j]];
    return abelian_sift(groups, Hg, bg);
}

// ------------------------------------------------------------ dispatcher

SmpAnswer Solver::solve(const SmpInstance& inst, Method m, bool want_witness) {
    if (inst.factors.empty()) throw Error("instance has no factors");
    if (inst.generators.empty()) throw Error("empty generator set");
    Context ctx = cat_.context(inst.factors);
    for (const auto& g : inst.generators) ctx.check(g);
    ctx.check(inst.target);
    auto t0 = std::chrono::steady_clock::now();
    SmpAnswer ans;
    std::optional<Circuit>* wp = want_witness ? &ans.witness : nullptr;
    const bool small = ctx.n() < d();
    if (m == Method::Brute || small) {
        ans.method = "brute";
        ans.yes = brute(ctx, inst.generators, inst.target, &ans.closure_size, wp);
    } else if (m == Method::Auto || m == Method::Compact) {
        ans.method = "compact";
        ans.yes = compact(ctx, inst.generators, inst.target, wp, &ans.note, &ans.rep_size);
    } else if (m == Method::Reduction) {
        ans.method = "reduction";
        ans.yes = reduction(ctx, inst.generators, inst.target);
    } else {
        ans.method = "rs";
        ans.yes = rs(ctx, inst.generators, inst.target);
    }
    if (want_witness && ans.yes && !ans.witness && ans.note.empty())
        ans.note = "witness circuits come from the compact and brute methods only";
    ans.micros = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count();
    return ans;
}

}  // namespace subpower
