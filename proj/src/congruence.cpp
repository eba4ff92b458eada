#include "subpower/congruence.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "subpower/terms.hpp"

namespace subpower {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a), b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[b] = a;
        return true;
    }
    Partition partition() {
        Partition p(parent.size());
        for (std::size_t i = 0; i < parent.size(); ++i) p[i] = find(static_cast<int>(i));
        return canonical_partition(p);
    }
};

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

// Distinct non-constant basic translations of an algebra.
std::vector<std::vector<int>> translations(const Algebra& a) {
    const int m = a.size();
    const Signature& sig = a.signature();
    std::unordered_set<std::vector<int>, VecHash> seen;
    std::vector<std::vector<int>> out;
    for (int s = 0; s < sig.size(); ++s) {
        const int ar = sig.symbols[s].arity;
        if (ar == 0) continue;
        std::size_t cnt = 1;
        for (int j = 1; j < ar; ++j) cnt *= m;
        std::vector<int> args(ar);
        for (int slot = 0; slot < ar; ++slot)
            for (std::size_t c = 0; c < cnt; ++c) {
                std::size_t r = c;
                for (int j = 0; j < ar; ++j) {
                    if (j == slot) continue;
                    args[j] = static_cast<int>(r % m);
                    r /= m;
                }
                std::vector<int> f(m);
                bool constant = true;
                for (int x = 0; x < m; ++x) {
                    args[slot] = x;
                    f[x] = a.apply(s, args.data());
                    if (f[x] != f[0]) constant = false;
                }
                if (constant) continue;
                if (seen.insert(f).second) out.push_back(std::move(f));
            }
    }
    return out;
}

Partition cg_with(const std::vector<std::vector<int>>& trans, int m,
                  const std::vector<std::pair<int, int>>& pairs, const Partition* start) {
    UnionFind uf(m);
    std::vector<std::pair<int, int>> work;
    if (start)
        for (int x = 0; x < m; ++x)
            if ((*start)[x] != x) {
                uf.unite(x, (*start)[x]);
                work.emplace_back((*start)[x], x);
            }
    for (auto [x, y] : pairs)
        if (uf.unite(x, y)) work.emplace_back(x, y);
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        for (const auto& f : trans)
            if (uf.unite(f[x], f[y])) work.emplace_back(f[x], f[y]);
    }
    return uf.partition();
}

CongruenceLattice lattice_with(const std::vector<std::vector<int>>& trans, int m) {
    std::set<Partition> all;
    std::vector<Partition> principals;
    all.insert(identity_partition(m));
    for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y) {
            Partition p = cg_with(trans, m, {{x, y}}, nullptr);
            if (all.insert(p).second) principals.push_back(p);
        }
    std::vector<Partition> frontier(principals);
    while (!frontier.empty()) {
        std::vector<Partition> next;
        for (const auto& f : frontier)
            for (const auto& p : principals) {
                Partition j = join(f, p);
                if (all.insert(j).second) next.push_back(j);
            }
        frontier.swap(next);
    }
    CongruenceLattice lat;
    lat.elems.assign(all.begin(), all.end());
    std::stable_sort(lat.elems.begin(), lat.elems.end(), [](const Partition& a, const Partition& b) {
        int ca = block_count(a), cb = block_count(b);
        if (ca != cb) return ca > cb;
        return a < b;
    });
    return lat;
}

}  // namespace

Partition generated_congruence(const Algebra& a, const std::vector<std::pair<int, int>>& pairs,
                               const Partition* start) {
    return cg_with(translations(a), a.size(), pairs, start);
}

Partition principal_congruence(const Algebra& a, int x, int y) { return generated_congruence(a, {{x, y}}); }

Partition meet(const Partition& p, const Partition& q) {
    std::vector<int> key(p.size());
    std::map<std::pair<int, int>, int> ids;
    for (std::size_t i = 0; i < p.size(); ++i)
        key[i] = ids.emplace(std::make_pair(p[i], q[i]), static_cast<int>(ids.size())).first->second;
    return canonical_partition(key);
}

Partition join(const Partition& p, const Partition& q) {
    UnionFind uf(static_cast<int>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        uf.unite(static_cast<int>(i), p[i]);
        uf.unite(static_cast<int>(i), q[i]);
    }
    return uf.partition();
}

bool leq(const Partition& p, const Partition& q) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (q[i] != q[p[i]]) return false;
    return true;
}

bool is_identity(const Partition& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) return false;
    return true;
}

bool is_full(const Partition& p) {
    for (int v : p)
        if (v != 0) return false;
    return true;
}

std::vector<std::pair<int, int>> partition_pairs(const Partition& p) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = x + 1; y < p.size(); ++y)
            if (p[x] == p[y]) out.emplace_back(static_cast<int>(x), static_cast<int>(y));
    return out;
}

std::string partition_string(const Partition& p) {
    std::string s;
    for (std::size_t b = 0; b < p.size(); ++b) {
        if (p[b] != static_cast<int>(b)) continue;
        if (!s.empty()) s += "|";
        bool first = true;
        for (std::size_t x = 0; x < p.size(); ++x)
            if (p[x] == static_cast<int>(b)) {
                if (!first && p.size() > 10) s += ",";
                s += std::to_string(x);
                first = false;
            }
    }
    return s;
}

int CongruenceLattice::find(const Partition& p) const {
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (elems[i] == p) return static_cast<int>(i);
    return -1;
}

std::vector<std::pair<int, int>> CongruenceLattice::covers() const {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(elems.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !leq(elems[i], elems[j])) continue;
            bool cover = true;
            for (int k = 0; k < n && cover; ++k)
                if (k != i && k != j && leq(elems[i], elems[k]) && leq(elems[k], elems[j])) cover = false;
            if (cover) out.emplace_back(i, j);
        }
    return out;
}

CongruenceLattice congruence_lattice(const Algebra& a) { return lattice_with(translations(a), a.size()); }

std::vector<IrrEntry> meet_irreducibles(const CongruenceLattice& lat) {
    std::vector<IrrEntry> out;
    const int n = static_cast<int>(lat.elems.size());
    for (int i = 0; i < n; ++i) {
        if (i == lat.top()) continue;
        const Partition& s = lat.elems[i];
        Partition m = full_partition(static_cast<int>(s.size()));
        for (int j = 0; j < n; ++j)
            if (j != i && leq(s, lat.elems[j])) m = meet(m, lat.elems[j]);
        if (m != s) out.push_back({i, lat.find(m)});
    }
    return out;
}

Partition commutator(const Algebra& a, const Partition& alpha, const Partition& beta) {
    const int m = a.size();
    Partition delta = identity_partition(m);
    const auto trans = translations(a);
    while (true) {
        Quotient q = quotient(a, delta, a.name() + "/delta");
        Context ctx;
        ctx.factors.assign(4, q.algebra);
        std::set<Tuple> gens;
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y) {
                Elem qx = static_cast<Elem>(q.map[x]), qy = static_cast<Elem>(q.map[y]);
                if (alpha[x] == alpha[y]) gens.insert(Tuple{qx, qx, qy, qy});
                if (beta[x] == beta[y]) gens.insert(Tuple{qx, qy, qx, qy});
            }
        int bad_x = -1, bad_y = -1;
        ClosureOptions opt;
        opt.on_new = [&](const TupleSet& s, std::size_t i) {
            const Elem* r = s.at(i);
            if (r[0] == r[1] && r[2] != r[3]) {
                bad_x = q.rep[r[2]];
                bad_y = q.rep[r[3]];
                return true;
            }
            return false;
        };
        Closure cl = subalgebra_closure(ctx, std::vector<Tuple>(gens.begin(), gens.end()), opt);
        if (!cl.stopped) return delta;
        delta = cg_with(trans, m, {{bad_x, bad_y}}, &delta);
    }
}

bool is_abelian(const Algebra& a, const Partition& alpha) {
    return is_identity(commutator(a, alpha, alpha));
}

Partition centralizer(const Algebra& a, const CongruenceLattice& lat, const Partition& alpha) {
    Partition c = identity_partition(a.size());
    for (const auto& g : lat.elems)
        if (!leq(g, c) && is_identity(commutator(a, alpha, g))) c = join(c, g);
    if (!is_identity(commutator(a, alpha, c)))
        throw Error("centralizer join fails to centralize in " + a.name() + "; catalog is not congruence modular");
    return c;
}

Analysis analyze_algebra(const Algebra& a) {
    Analysis an;
    an.lattice = congruence_lattice(a);
    an.irr = meet_irreducibles(an.lattice);
    for (const auto& e : an.irr)
        if (e.sigma == an.lattice.bottom() && a.size() > 1) {
            an.si.si = true;
            an.si.mu = an.lattice.elems[e.cover];
        }
    if (an.si.si) {
        an.si.mu_abelian = is_abelian(a, an.si.mu);
        an.si.rho = centralizer(a, an.lattice, an.si.mu);
        an.si.rho_abelian = is_abelian(a, an.si.rho);
    }
    return an;
}

bool check_similarity(const Catalog& cat, const Algebra& b, const Algebra& c, std::size_t cap) {
    std::pair<std::string, std::string> key{b.key(), c.key()};
    if (key.first > key.second) std::swap(key.first, key.second);
    auto it = cat.similarity_cache.find(key);
    if (it != cat.similarity_cache.end()) return it->second;
    auto remember = [&](bool v) {
        cat.similarity_cache[key] = v;
        return v;
    };
    if (!cat.analysis(b)->si.si || !cat.analysis(c)->si.si) throw Error("similarity needs subdirectly irreducible algebras");
    if (isomorphic(b, c)) return remember(true);
    auto bp = std::shared_ptr<const Algebra>(&b, [](const Algebra*) {});
    auto cp = std::shared_ptr<const Algebra>(&c, [](const Algebra*) {});
    AlgebraPtr prod = make_product({bp, cp}, "BxC");
    const int nc = c.size();
    std::vector<std::vector<int>> subs;
    try {
        subs = all_subuniverses(*prod, cap);
    } catch (const Error&) {
        throw Error("similarity undecided for " + b.name() + " and " + c.name());
    }
    for (const auto& u : subs) {
        std::vector<char> hb(b.size(), 0), hc(nc, 0);
        for (int x : u) hb[x / nc] = 1, hc[x % nc] = 1;
        if (std::count(hb.begin(), hb.end(), 1) != b.size() || std::count(hc.begin(), hc.end(), 1) != nc) continue;
        AlgebraPtr E = make_subalgebra(*prod, u, "E");
        const int k = E->size();
        std::vector<int> kb(k), kc(k);
        for (int i = 0; i < k; ++i) kb[i] = u[i] / nc, kc[i] = u[i] % nc;
        Partition beta = canonical_partition(kb), gamma = canonical_partition(kc);
        CongruenceLattice lat = congruence_lattice(*E);
        auto cover = [&](const Partition& s) {
            Partition m = full_partition(k);
            for (const auto& t : lat.elems)
                if (t != s && leq(s, t)) m = meet(m, t);
            return m;
        };
        Partition bplus = cover(beta), gplus = cover(gamma);
        for (const auto& eps : lat.elems) {
            Partition delta = meet(beta, eps);
            if (join(beta, eps) == bplus && meet(eps, gamma) == delta && join(eps, gamma) == gplus)
                return remember(true);
        }
    }
    return remember(false);
}

ResidualSmallness check_residual_smallness(const Catalog& cat) {
    for (const auto& h : cat.hs()) {
        auto an = cat.analysis(*h.algebra);
        if (an->si.si && an->si.mu_abelian && !an->si.rho_abelian) return {false, h.algebra->name()};
    }
    return {true, ""};
}

namespace {

struct DiffConstraint {
    int coord;
    Elem value;
};

// Coordinates (algebra, x, y, z) with the values d must take there.
void difference_constraints(const Catalog& cat, std::vector<AlgebraPtr>& factors, std::vector<Tuple>& proj,
                            std::vector<DiffConstraint>& cons) {
    proj.assign(3, Tuple());
    for (const auto& h : cat.hs()) {
        const Algebra& a = *h.algebra;
        const int m = a.size();
        auto an = cat.analysis(a);
        std::vector<Partition> abel;
        for (const auto& c : an->lattice.elems)
            if (!is_identity(c) && is_abelian(a, c)) abel.push_back(c);
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                for (int z = 0; z < m; ++z) {
                    int coord = static_cast<int>(factors.size());
                    bool keep = false;
                    if (x == y) {
                        cons.push_back({coord, static_cast<Elem>(z)});
                        keep = true;
                    } else if (y == z) {
                        for (const auto& c : abel)
                            if (c[x] == c[y]) {
                                cons.push_back({coord, static_cast<Elem>(x)});
                                keep = true;
                                break;
                            }
                    }
                    if (!keep) continue;
                    factors.push_back(h.algebra);
                    proj[0].push_back(static_cast<Elem>(x));
                    proj[1].push_back(static_cast<Elem>(y));
                    proj[2].push_back(static_cast<Elem>(z));
                }
    }
}

}  // namespace

Circuit find_difference_term(const Catalog& cat, std::size_t cap) {
    if (cat.difference_cache) return *cat.difference_cache;
    std::vector<AlgebraPtr> factors;
    std::vector<Tuple> proj;
    std::vector<DiffConstraint> cons;
    difference_constraints(cat, factors, proj, cons);
    Context ctx{factors};
    auto satisfies = [&](const Circuit& c) {
        Tuple v = c.eval(ctx, proj);
        for (const auto& k : cons)
            if (v[k.coord] != k.value) return false;
        return true;
    };
    if (cat.difference_term_override()) {
        if (!satisfies(*cat.difference_term_override()))
            throw Error("supplied difference term fails its identities");
        cat.difference_cache = *cat.difference_term_override();
        return *cat.difference_cache;
    }
    if (cat.configured() && satisfies(cat.p())) {
        cat.difference_cache = cat.p();
        return *cat.difference_cache;
    }
    ClosureOptions opt;
    opt.cap = cap;
    opt.provenance = true;
    std::size_t hit = 0;
    opt.on_new = [&](const TupleSet& s, std::size_t i) {
        const Elem* v = s.at(i);
        for (const auto& k : cons)
            if (v[k.coord] != k.value) return false;
        hit = i;
        return true;
    };
    try {
        Closure cl = subalgebra_closure(ctx, proj, opt);
        if (cl.stopped) {
            cat.difference_cache = derivation_circuit(cl, cat.signature(), 3, hit);
            return *cat.difference_cache;
        }
    } catch (const Error&) {
    }
    throw Error("no difference term found; supply one as \"difference_term\" in the algebra file");
}

InducedGroup induced_abelian_group(const Algebra& a, const Partition& alpha, int o, const Circuit& d) {
    InducedGroup g;
    const int m = a.size();
    g.pos.assign(m, -1);
    for (int x = 0; x < m; ++x)
        if (alpha[x] == alpha[o]) {
            g.pos[x] = static_cast<int>(g.block.size());
            g.block.push_back(x);
        }
    const int k = static_cast<int>(g.block.size());
    auto ev = [&](int x, int y, int z) {
        return static_cast<int>(d.eval(a, {static_cast<Elem>(x), static_cast<Elem>(y), static_cast<Elem>(z)}));
    };
    g.zero = g.pos[o];
    g.add.assign(k, std::vector<int>(k));
    g.neg.assign(k, 0);
    for (int i = 0; i < k; ++i) {
        int nv = g.pos[ev(o, g.block[i], o)];
        if (nv < 0) throw Error("induced group: negation leaves the block");
        g.neg[i] = nv;
        for (int j = 0; j < k; ++j) {
            int v = g.pos[ev(g.block[i], o, g.block[j])];
            if (v < 0) throw Error("induced group: sum leaves the block");
            g.add[i][j] = v;
        }
    }
    for (int i = 0; i < k; ++i) {
        if (g.add[i][g.zero] != i || g.add[i][g.neg[i]] != g.zero) throw Error("induced group: axiom failure");
        for (int j = 0; j < k; ++j) {
            if (g.add[i][j] != g.add[j][i]) throw Error("induced group: not commutative");
            for (int l = 0; l < k; ++l)
                if (g.add[g.add[i][j]][l] != g.add[i][g.add[j][l]]) throw Error("induced group: not associative");
        }
    }
    return g;
}

}  // namespace subpower
