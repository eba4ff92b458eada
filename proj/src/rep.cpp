#include "subpower/rep.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "subpower/terms.hpp"

namespace subpower {

RecipePtr recipe_gen(int j) {
    auto r = std::make_shared<Recipe>();
    r->kind = Recipe::Kind::Gen;
    r->index = j;
    return r;
}

RecipePtr recipe_op(int sym, std::vector<RecipePtr> args) {
    auto r = std::make_shared<Recipe>();
    r->kind = Recipe::Kind::Op;
    r->index = sym;
    r->args = std::move(args);
    return r;
}

RecipePtr recipe_p(RecipePtr x, RecipePtr u, RecipePtr y) {
    auto r = std::make_shared<Recipe>();
    r->kind = Recipe::Kind::PTerm;
    r->args = {std::move(x), std::move(u), std::move(y)};
    return r;
}

RecipePtr recipe_opaque() {
    static const RecipePtr r = std::make_shared<Recipe>();
    return r;
}

namespace {

RecipePtr recipe_level(int m, std::vector<RecipePtr> args) {
    auto r = std::make_shared<Recipe>();
    r->kind = Recipe::Kind::Level;
    r->index = m;
    r->args = std::move(args);
    return r;
}

}  // namespace

bool has_provenance(const RecipePtr& r) {
    std::vector<const Recipe*> stack{r.get()};
    std::unordered_map<const Recipe*, bool> seen;
    while (!stack.empty()) {
        const Recipe* x = stack.back();
        stack.pop_back();
        if (!x || x->kind == Recipe::Kind::Opaque) return false;
        if (!seen.emplace(x, true).second) continue;
        for (const auto& a : x->args) stack.push_back(a.get());
    }
    return true;
}

const Circuit& TermCache::t(int m) {
    auto it = t_.find(m);
    if (it == t_.end()) it = t_.emplace(m, build_tn(m, d_, 1)).first;
    return it->second;
}

const Circuit& TermCache::t_inlined(int m, const Circuit& P) {
    auto it = ti_.find(m);
    if (it == ti_.end()) it = ti_.emplace(m, t(m).inline_P(P)).first;
    return it->second;
}

// ------------------------------------------------------------------- Rep

Rep::Rep(Context ctx, int d) : ctx_(std::move(ctx)), d_(d), index_(ctx_.n()) {
    const int n = ctx_.n();
    if (n >= d - 1) subsets_ = lex_subsets(n, d - 1);
    local_.resize(subsets_.size());
    forks_.resize(n);
    for (int c = 0; c < n; ++c) {
        const int a = ctx_[c].size();
        forks_[c].assign(static_cast<std::size_t>(a) * a, ForkPair{});
    }
    terms_ = std::make_shared<TermCache>(d);
}

int Rep::add(const Tuple& t, RecipePtr r) {
    auto [idx, fresh] = index_.insert(t);
    if (fresh) {
        tuples_.push_back(t);
        recipes_.push_back(r ? std::move(r) : recipe_opaque());
    } else if (!has_provenance(recipes_[idx]) && r && has_provenance(r)) {
        recipes_[idx] = std::move(r);
    }
    return static_cast<int>(idx);
}

int Rep::find(const Tuple& t) const { return static_cast<int>(index_.find(t)); }

std::uint64_t Rep::code(int I, const Tuple& t) const {
    std::uint64_t c = 0;
    const auto& s = subsets_[I];
    for (std::size_t j = 0; j < s.size(); ++j) c |= static_cast<std::uint64_t>(t[s[j]]) << (8 * j);
    return c;
}

std::vector<Elem> Rep::decode(int I, std::uint64_t c) const {
    std::vector<Elem> v(subsets_[I].size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = static_cast<Elem>((c >> (8 * j)) & 0xff);
    return v;
}

int Rep::local_by_code(int I, std::uint64_t c) const {
    auto it = local_[I].find(c);
    return it == local_[I].end() ? -1 : it->second;
}

int Rep::local(int I, const Tuple& t) const { return local_by_code(I, code(I, t)); }

bool Rep::designate_local(int I, std::uint64_t c, int id) { return local_[I].emplace(c, id).second; }

ForkPair Rep::fork(int coord, int gamma, int delta) const {
    return forks_[coord][static_cast<std::size_t>(gamma) * ctx_[coord].size() + delta];
}

bool Rep::designate_fork(int coord, int gamma, int delta, int u, int uhat) {
    auto& f = forks_[coord][static_cast<std::size_t>(gamma) * ctx_[coord].size() + delta];
    if (f.present()) return false;
    f = {u, uhat};
    return true;
}

std::size_t Rep::fork_count() const {
    std::size_t c = 0;
    for (const auto& v : forks_)
        for (const auto& f : v) c += f.present();
    return c;
}

// ------------------------------------------------------------ fork sets

std::map<std::pair<int, int>, std::pair<int, int>> forks(const std::vector<Tuple>& S, int coord) {
    std::map<std::pair<int, int>, std::pair<int, int>> out;
    for (std::size_t x = 0; x < S.size(); ++x)
        for (std::size_t y = 0; y < S.size(); ++y) {
            if (!std::equal(S[x].begin(), S[x].begin() + coord, S[y].begin())) continue;
            out.emplace(std::make_pair(S[x][coord], S[y][coord]),
                        std::make_pair(static_cast<int>(x), static_cast<int>(y)));
        }
    return out;
}

std::map<std::pair<int, int>, std::pair<int, int>> derived_forks(const Context& ctx, const std::vector<Tuple>& S,
                                                                 int coord, int e) {
    const Algebra& a = ctx[coord];
    std::map<std::pair<int, int>, std::pair<int, int>> out;
    for (const auto& [key, w] : forks(S, coord)) {
        auto [g, dl] = key;
        int ge = g;  // gamma^e, powers taken in the first argument
        for (int j = 1; j < e; ++j) ge = a.p(static_cast<Elem>(ge), static_cast<Elem>(g), static_cast<Elem>(g));
        int v = a.p(static_cast<Elem>(dl), static_cast<Elem>(ge), static_cast<Elem>(ge));
        out.emplace(std::make_pair(g, v), w);
    }
    return out;
}

std::pair<Tuple, Tuple> weak_transitivity_witness(const Context& ctx, const Tuple& v, const Tuple& vhat,
                                                  const Tuple& u, const Tuple& uhat, int coord) {
    auto agree = [&](const Tuple& x, const Tuple& y) { return std::equal(x.begin(), x.begin() + coord, y.begin()); };
    if (!agree(v, vhat) || !agree(u, uhat) || vhat[coord] != uhat[coord])
        throw Error("weak transitivity: inputs are not fork witnesses for a common delta");
    Tuple first = apply_p(ctx, apply_p(ctx, v, vhat, uhat), apply_p(ctx, v, vhat, vhat), v);
    Tuple second = apply_p(ctx, u, v, v);
    const Algebra& a = ctx[coord];
    if (!agree(first, second) || first[coord] != v[coord] ||
        second[coord] != a.p(u[coord], v[coord], v[coord]))
        throw Error("weak transitivity: output is not a witness pair");
    return {first, second};
}

// ------------------------------------------------------------ representability

namespace {

// Subsets indices (into R.subsets()) of the (d-1)-subsets of [m] in lex order.
const std::vector<int>& level_subsets(const Rep& R, int m) {
    thread_local std::map<std::pair<int, int>, std::vector<int>> cache;
    auto key = std::make_pair(R.n() * 64 + R.d(), m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<int> v;
    for (const auto& s : lex_subsets(m, R.d() - 1)) v.push_back(static_cast<int>(lex_rank(s, R.n())));
    return cache.emplace(key, std::move(v)).first->second;
}

// Evaluates a circuit over P coordinatewise on coordinates [from, n).
void eval_columns(const Circuit& c, const Context& ctx, const std::vector<const Tuple*>& in, int from,
                  Tuple& out, std::vector<Elem>& vals) {
    vals.resize(c.size());
    Elem buf[64];
    const int n = ctx.n();
    for (int j = from; j < n; ++j) {
        const Algebra& a = ctx[j];
        for (int g = 0; g < c.inputs(); ++g) vals[g] = (*in[g])[j];
        for (int g = c.inputs(); g < c.size(); ++g) {
            const Gate& gt = c.gate(g);
            const int ar = static_cast<int>(gt.args.size());
            for (int q = 0; q < ar; ++q) buf[q] = vals[gt.args[q]];
            if (gt.sym == kPSym) {
                vals[g] = a.P(buf);
            } else {
                std::size_t k = 0;
                for (int q = 0; q < ar; ++q) k = k * a.size() + buf[q];
                vals[g] = a.table(gt.sym)[k];
            }
        }
        out[j] = vals[c.output()];
    }
}

struct Pending {
    int coord, gamma, delta;
    bool prime;
    std::size_t pos;
};

}  // namespace

bool has_local_witnesses(const Rep& R, const Tuple& b) {
    for (int I = 0; I < static_cast<int>(R.subsets().size()); ++I)
        if (R.local(I, b) < 0) return false;
    return true;
}

RepresentResult is_representable(const Rep& R, const Tuple& b, const RecipePtr& rb, bool full_eval) {
    const Context& ctx = R.context();
    const int n = R.n(), d = R.d();
    if (n < d) throw Error("is_representable needs n >= d");
    if (static_cast<int>(b.size()) != n) throw Error("tuple length does not match the context");
    for (int I = 0; I < static_cast<int>(R.subsets().size()); ++I)
        if (R.local(I, b) < 0) throw Error("missing designated local witness for a projection of the input");

    RepresentResult res;
    int id0 = R.local(0, b);
    Tuple prev = R.tuple(id0);
    RecipePtr rprev = R.recipe(id0);
    RecipePtr rbb = rb ? rb : recipe_opaque();
    std::vector<Pending> overlay;
    auto lookup = [&](int c, int g, int dl, Tuple& u, Tuple& uh, RecipePtr& ru, RecipePtr& ruh) {
        ForkPair f = R.fork(c, g, dl);
        if (f.present()) {
            u = R.tuple(f.u);
            uh = R.tuple(f.uhat);
            ru = R.recipe(f.u);
            ruh = R.recipe(f.uhat);
            return true;
        }
        for (const auto& p : overlay) {
            if (p.coord != c || p.gamma != g || p.delta != dl) continue;
            const ForkAddition& fa = p.prime ? res.s_prime[p.pos] : res.s[p.pos];
            u = fa.u;
            uh = fa.uhat;
            ru = fa.ru;
            ruh = fa.ruhat;
            return true;
        }
        return false;
    };

    std::vector<Elem> scratch;
    Tuple u, uh;
    RecipePtr ru, ruh;
    for (int c = d - 1; c < n; ++c) {
        overlay.clear();
        const Algebra& a = ctx[c];
        const int beta = prev[c], gamma = b[c];
        const int bg = a.p(static_cast<Elem>(beta), static_cast<Elem>(gamma), static_cast<Elem>(gamma));
        if (!lookup(c, gamma, bg, u, uh, ru, ruh)) {
            Tuple ct = apply_p(ctx, prev, b, b);
            res.s_prime.push_back({c, gamma, bg, b, ct, rbb, recipe_p(rprev, rbb, rbb)});
            overlay.push_back({c, gamma, bg, true, res.s_prime.size() - 1});
            u = b;
            uh = ct;
            ru = rbb;
            ruh = res.s_prime.back().ruhat;
        }
        {
            Tuple u2, uh2;
            RecipePtr r1, r2;
            if (!lookup(c, gamma, beta, u2, uh2, r1, r2)) {
                res.s.push_back({c, gamma, beta, b, prev, rbb, rprev});
                overlay.push_back({c, gamma, beta, false, res.s.size() - 1});
            }
        }
        const int m = c + 1;
        const Circuit& t = R.terms().t(m);
        const auto& subs = level_subsets(R, m);
        std::vector<const Tuple*> in{&prev, &uh, &u};
        std::vector<RecipePtr> rargs{rprev, ruh, ru};
        for (int I : subs) {
            int w = R.local(I, b);
            in.push_back(&R.tuple(w));
            rargs.push_back(R.recipe(w));
        }
        Tuple next(n);
        if (full_eval) {
            eval_columns(t, ctx, in, 0, next, scratch);
            if (!std::equal(next.begin(), next.begin() + m, b.begin()))
                throw Error("is_representable: reconstruction left the target prefix");
        } else {
            std::copy(b.begin(), b.begin() + m, next.begin());
            eval_columns(t, ctx, in, m, next, scratch);
        }
        prev = std::move(next);
        rprev = recipe_level(m, std::move(rargs));
    }
    res.yes = res.s_prime.empty();
    res.reconstructed = prev;
    res.recipe = rprev;
    return res;
}

void absorb(Rep& R, const RepresentResult& res) {
    auto put = [&](const ForkAddition& f) {
        if (R.fork(f.coord, f.gamma, f.delta).present()) return;
        int u = R.add(f.u, f.ru);
        int uh = R.add(f.uhat, f.ruhat);
        R.designate_fork(f.coord, f.gamma, f.delta, u, uh);
    };
    for (const auto& f : res.s_prime) put(f);
    for (const auto& f : res.s) put(f);
}

// ------------------------------------------------------------ local representations

Rep local_rep(const Context& ctx, const std::vector<Tuple>& gens, int d, const std::vector<Partition>& theta) {
    const int n = ctx.n();
    if (n < d) throw Error("local_rep needs n >= d");
    if (gens.empty()) throw Error("empty generator set");
    if (!theta.empty() && static_cast<int>(theta.size()) != n) throw Error("theta needs one partition per coordinate");
    Rep R(ctx, d);
    const Signature& sig = ctx[0].signature();
    ClosureOptions opt;
    opt.provenance = true;
    Tuple shifted;
    for (int I = 0; I < static_cast<int>(R.subsets().size()); ++I) {
        const auto& sub = R.subsets()[I];
        Context pc = ctx.project(sub);
        std::vector<Tuple> pg;
        for (const auto& g : gens) pg.push_back(project(g, sub));
        Closure cl = subalgebra_closure(pc, pg, opt);
        std::vector<Tuple> full(cl.set.size());
        std::vector<RecipePtr> rec(cl.set.size());
        for (std::size_t i = 0; i < cl.set.size(); ++i) {
            int op = cl.op[i];
            if (op < 0) {
                full[i] = gens[cl.gen_index[i]];
                rec[i] = recipe_gen(cl.gen_index[i]);
            } else {
                auto args = cl.arguments(i, sig.symbols[op].arity);
                std::vector<const Tuple*> fa;
                std::vector<RecipePtr> ra;
                for (int x : args) {
                    fa.push_back(&full[x]);
                    ra.push_back(rec[x]);
                }
                full[i] = apply_op(ctx, op, fa);
                rec[i] = recipe_op(op, std::move(ra));
            }
            std::uint64_t c = R.code(I, full[i]);
            if (R.local_by_code(I, c) >= 0) continue;
            int id = R.add(full[i], rec[i]);
            R.designate_local(I, c, id);
            if (theta.empty()) continue;
            // every dbar theta-related to the new bbar, other coordinates copied
            const int k = static_cast<int>(sub.size());
            std::vector<std::vector<int>> cls(k);
            for (int j = 0; j < k; ++j) {
                const int coord = sub[j];
                const Partition& th = theta[coord];
                for (int x = 0; x < ctx[coord].size(); ++x)
                    if (th[x] == th[full[i][coord]]) cls[j].push_back(x);
            }
            std::vector<int> pos(k, 0);
            while (true) {
                shifted = full[i];
                for (int j = 0; j < k; ++j) shifted[sub[j]] = static_cast<Elem>(cls[j][pos[j]]);
                std::uint64_t sc = R.code(I, shifted);
                if (sc != c && R.local_by_code(I, sc) < 0) R.designate_local(I, sc, R.add(shifted, recipe_opaque()));
                int j = k - 1;
                for (; j >= 0; --j) {
                    if (++pos[j] < static_cast<int>(cls[j].size())) break;
                    pos[j] = 0;
                }
                if (j < 0) break;
            }
        }
    }
    return R;
}

// ------------------------------------------------------------ Rep(R)

std::optional<std::vector<Tuple>> completely_representable(const Rep& R, std::size_t cap) {
    const Context& ctx = R.context();
    const int n = R.n(), d = R.d();
    std::vector<Tuple> out;
    // subsets whose largest coordinate is c
    std::vector<std::vector<int>> by_max(n);
    for (int I = 0; I < static_cast<int>(R.subsets().size()); ++I) by_max[R.subsets()[I].back()].push_back(I);
    Tuple cur(n);
    std::vector<Elem> scratch;
    bool over = false;

    std::function<void(int, const Tuple&)> rec = [&](int c, const Tuple& prev) {
        if (over) return;
        if (c == n) {
            if (out.size() >= cap) {
                over = true;
                return;
            }
            out.push_back(cur);
            return;
        }
        const Algebra& a = ctx[c];
        const int beta = prev[c];
        for (int g = 0; g < a.size(); ++g) {
            const int bg = a.p(static_cast<Elem>(beta), static_cast<Elem>(g), static_cast<Elem>(g));
            ForkPair f = R.fork(c, g, bg);
            if (!f.present() || !R.fork(c, g, beta).present()) continue;
            cur[c] = static_cast<Elem>(g);
            bool ok = true;
            for (int I : by_max[c])
                if (R.local(I, cur) < 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            const int m = c + 1;
            const Circuit& t = R.terms().t(m);
            std::vector<const Tuple*> in{&prev, &R.tuple(f.uhat), &R.tuple(f.u)};
            for (int I : level_subsets(R, m)) in.push_back(&R.tuple(R.local(I, cur)));
            Tuple next(n);
            std::copy(cur.begin(), cur.begin() + m, next.begin());
            eval_columns(t, ctx, in, m, next, scratch);
            rec(m, next);
            if (over) return;
        }
    };

    std::vector<std::uint64_t> keys;
    for (const auto& [c, id] : R.local_map(0)) keys.push_back(c);
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t k : keys) {
        auto v = R.decode(0, k);
        for (int j = 0; j < d - 1; ++j) cur[j] = v[j];
        rec(d - 1, R.tuple(R.local_by_code(0, k)));
        if (over) return std::nullopt;
    }
    return out;
}

// ------------------------------------------------------------ NeedForkWitnesses

NeedForkAnswer need_fork_witnesses(Rep& R, NeedForkState& st, std::size_t cap) {
    auto rep = completely_representable(R, cap);
    if (!rep) return NeedForkAnswer::CapExceeded;
    for (const auto& t : *rep)
        if (st.members.insert(t).second) st.list.push_back(t);
    st.recipes.resize(st.list.size());
    const Context& ctx = R.context();
    const Signature& sig = ctx[0].signature();

    auto recipe_of = [&](std::size_t i) {
        if (!st.recipes[i]) st.recipes[i] = is_representable(R, st.list[i], nullptr).recipe;
        return st.recipes[i];
    };
    auto found = [&](const Tuple& img, RecipePtr r) {
        RepresentResult res = is_representable(R, img, r);
        if (res.s_prime.empty() && res.s.empty())
            throw Error("need_fork_witnesses: image outside Rep(R) is completely representable");
        absorb(R, res);
        return NeedForkAnswer::Yes;
    };

    if (!st.nullary_done) {
        for (int s = 0; s < sig.size(); ++s) {
            if (sig.symbols[s].arity != 0) continue;
            Tuple img = apply_op(ctx, s, {});
            if (!st.members.contains(img)) return found(img, recipe_op(s, {}));
        }
        st.nullary_done = true;
    }
    std::vector<int> idx(16);
    std::vector<const Tuple*> args;
    while (st.pos < st.list.size()) {
        const int i = static_cast<int>(st.pos);
        for (int s = 0; s < sig.size(); ++s) {
            const int ar = sig.symbols[s].arity;
            if (ar == 0) continue;
            for (int q = 0; q < ar; ++q) {
                if (i == 0 && q > 0) break;
                for (int j = 0; j < ar; ++j) idx[j] = 0;
                idx[q] = i;
                while (true) {
                    args.clear();
                    for (int j = 0; j < ar; ++j) args.push_back(&st.list[idx[j]]);
                    Tuple img = apply_op(ctx, s, args);
                    if (!st.members.contains(img)) {
                        std::vector<RecipePtr> ra;
                        for (int j = 0; j < ar; ++j) ra.push_back(recipe_of(idx[j]));
                        return found(img, recipe_op(s, std::move(ra)));
                    }
                    int j = ar - 1;
                    for (; j >= 0; --j) {
                        if (j == q) continue;
                        int lim = j < q ? i - 1 : i;
                        if (idx[j] < lim) {
                            ++idx[j];
                            break;
                        }
                        idx[j] = 0;
                    }
                    if (j < 0) break;
                }
            }
        }
        ++st.pos;
    }
    return NeedForkAnswer::No;
}

void close_weak_transitivity(Rep& R) {
    const Context& ctx = R.context();
    for (int c = R.d() - 1; c < R.n(); ++c) {
        const Algebra& a = ctx[c];
        const int A = a.size();
        std::vector<std::vector<int>> by_delta(A);
        for (int g = 0; g < A; ++g)
            for (int dl = 0; dl < A; ++dl)
                if (R.fork(c, g, dl).present()) by_delta[dl].push_back(g);
        for (int dl = 0; dl < A; ++dl)
            for (int g : by_delta[dl])
                for (int be : by_delta[dl]) {
                    const int bg = a.p(static_cast<Elem>(be), static_cast<Elem>(g), static_cast<Elem>(g));
                    if (R.fork(c, g, bg).present()) continue;
                    ForkPair v = R.fork(c, g, dl), u = R.fork(c, be, dl);
                    auto [x, y] = weak_transitivity_witness(ctx, R.tuple(v.u), R.tuple(v.uhat), R.tuple(u.u),
                                                            R.tuple(u.uhat), c);
                    RecipePtr rv = R.recipe(v.u), rvh = R.recipe(v.uhat), ru = R.recipe(u.u), ruh = R.recipe(u.uhat);
                    RecipePtr rx = recipe_p(recipe_p(rv, rvh, ruh), recipe_p(rv, rvh, rvh), rv);
                    RecipePtr ry = recipe_p(ru, rv, rv);
                    int ix = R.add(x, rx);
                    int iy = R.add(y, ry);
                    R.designate_fork(c, g, bg, ix, iy);
                }
    }
}

// ------------------------------------------------------------ compact representations

void complete_forks_with_oracle(Rep& R, const std::vector<Tuple>& gens, const SmpOracle& oracle,
                                CompactStats* stats) {
    const Context& ctx = R.context();
    const int n = R.n(), d = R.d();
    std::vector<std::vector<int>> values(n);
    for (int c = 0; c < n; ++c) {
        for (int I = 0; I < static_cast<int>(R.subsets().size()); ++I) {
            const auto& sub = R.subsets()[I];
            auto it = std::find(sub.begin(), sub.end(), c);
            if (it == sub.end()) continue;
            std::size_t j = it - sub.begin();
            std::vector<char> seen(ctx[c].size(), 0);
            for (const auto& [code, id] : R.local_map(I)) seen[(code >> (8 * j)) & 0xff] = 1;
            for (int v = 0; v < ctx[c].size(); ++v)
                if (seen[v]) values[c].push_back(v);
            break;
        }
    }
    std::vector<Context> pctx(n);
    std::vector<std::vector<Tuple>> pgens(n);
    auto prefix_ctx = [&](int j) -> std::pair<const Context&, const std::vector<Tuple>&> {
        if (pctx[j].factors.empty()) {
            std::vector<int> coords(j + 1);
            for (int q = 0; q <= j; ++q) coords[q] = q;
            pctx[j] = ctx.project(coords);
            for (const auto& g : gens) pgens[j].push_back(project(g, coords));
        }
        return {pctx[j], pgens[j]};
    };
    auto ask = [&](int j, const Tuple& t) {
        auto [pc, pg] = prefix_ctx(j);
        if (stats) ++stats->oracle_queries;
        return oracle(pc, pg, Tuple(t.begin(), t.begin() + j + 1));
    };

    for (int i = d - 1; i < n; ++i) {
        const Algebra& a = ctx[i];
        for (int g : values[i]) {
            int bid = -1;
            for (int id = 0; id < R.size() && bid < 0; ++id)
                if (R.tuple(id)[i] == g && has_provenance(R.recipe(id))) bid = id;
            for (int id = 0; id < R.size() && bid < 0; ++id)
                if (R.tuple(id)[i] == g) bid = id;
            if (bid < 0) throw Error("no local witness for a coordinate value");
            for (int be : values[i]) {
                const int dl = a.p(static_cast<Elem>(be), static_cast<Elem>(g), static_cast<Elem>(g));
                if (R.fork(i, g, dl).present()) continue;
                if (dl == g) {
                    R.designate_fork(i, g, dl, bid, bid);
                    continue;
                }
                Tuple c = R.tuple(bid);
                c[i] = static_cast<Elem>(dl);
                if (!ask(i, c)) continue;
                for (int j = i + 1; j < n; ++j) {
                    // try the value of the known element first; the last candidate needs no query
                    std::vector<int> cand{c[j]};
                    for (int v : values[j])
                        if (v != c[j]) cand.push_back(v);
                    bool placed = false;
                    for (std::size_t q = 0; q < cand.size(); ++q) {
                        c[j] = static_cast<Elem>(cand[q]);
                        if (q + 1 == cand.size() || ask(j, c)) {
                            placed = true;
                            break;
                        }
                    }
                    if (!placed) throw Error("oracle answers are inconsistent");
                }
                int cid = R.add(c, recipe_opaque());
                R.designate_fork(i, g, dl, bid, cid);
            }
        }
    }
}

Rep compact_rep_direct(const Context& ctx, const std::vector<Tuple>& gens, int d, const CompactOptions& opt,
                       CompactStats* stats) {
    Rep R = local_rep(ctx, gens, d);
    for (std::size_t j = 0; j < gens.size(); ++j) absorb(R, is_representable(R, gens[j], recipe_gen(static_cast<int>(j))));
    NeedForkState st(ctx.n());
    std::size_t cap = opt.rep_cap;
    if (opt.fallback) {
        int ar = 1;
        for (const auto& sym : ctx[0].signature().symbols) ar = std::max(ar, sym.arity);
        cap = std::min(cap, static_cast<std::size_t>(std::pow(opt.work_cap, 1.0 / ar)));
    }
    while (true) {
        NeedForkAnswer ans = need_fork_witnesses(R, st, cap);
        if (stats) ++stats->need_fork_calls;
        if (ans == NeedForkAnswer::Yes) continue;
        if (ans == NeedForkAnswer::No) break;
        if (!opt.fallback)
            throw Error("rep cap exceeded: more than " + std::to_string(opt.rep_cap) +
                        " completely representable tuples and no SMP oracle for this catalog");
        close_weak_transitivity(R);
        complete_forks_with_oracle(R, gens, opt.fallback, stats);
        if (stats) stats->used_fallback = true;
        return R;
    }
    close_weak_transitivity(R);
    if (stats) stats->rep_size = st.list.size();
    return R;
}

Rep compact_rep_via_smp(const Context& ctx, const std::vector<Tuple>& gens, int d, const SmpOracle& oracle,
                        CompactStats* stats) {
    Rep R = local_rep(ctx, gens, d);
    complete_forks_with_oracle(R, gens, oracle, stats);
    return R;
}

bool smp_via_compact_rep(const Rep& R, const Tuple& b, RepresentResult* trace) {
    if (!has_local_witnesses(R, b)) return false;
    RepresentResult res = is_representable(R, b, nullptr);
    bool yes = res.yes;
    if (trace) *trace = std::move(res);
    return yes;
}

// ------------------------------------------------------------ saturation

std::vector<Tuple> saturation_generators(const Context& ctx, const std::vector<Tuple>& gens, int d,
                                         const std::vector<Partition>& theta) {
    const int n = ctx.n();
    if (static_cast<int>(theta.size()) != n) throw Error("theta needs one partition per coordinate");
    Rep L = local_rep(ctx, gens, d, theta);
    std::vector<Tuple> out = gens;
    TupleSet seen(n);
    for (const auto& g : gens) seen.insert(g);
    for (const auto& t : L.tuples())
        if (seen.insert(t).second) out.push_back(t);
    const Signature& sig = ctx[0].signature();
    ClosureOptions opt;
    opt.provenance = true;
    for (int i = 0; i < n; ++i) {
        Context pc = ctx.project({i});
        std::vector<Tuple> pg;
        for (const auto& g : gens) pg.push_back(Tuple{g[i]});
        Closure cl = subalgebra_closure(pc, pg, opt);
        std::vector<Tuple> full(cl.set.size());
        for (std::size_t x = 0; x < cl.set.size(); ++x) {
            int op = cl.op[x];
            if (op < 0) {
                full[x] = gens[cl.gen_index[x]];
            } else {
                std::vector<const Tuple*> fa;
                for (int y : cl.arguments(x, sig.symbols[op].arity)) fa.push_back(&full[y]);
                full[x] = apply_op(ctx, op, fa);
            }
            const int beta = full[x][i];
            for (int g = 0; g < ctx[i].size(); ++g) {
                if (theta[i][g] != theta[i][beta]) continue;
                Tuple c = full[x];
                c[i] = static_cast<Elem>(g);
                if (seen.insert(c).second) out.push_back(c);
            }
        }
    }
    return out;
}

// ------------------------------------------------------------ witness circuits

Circuit materialize(const RecipePtr& root, int k, const Signature& sig, const Circuit& P, TermCache& terms) {
    Circuit out(k);
    std::unordered_map<const Recipe*, int> gate;
    std::vector<std::pair<const Recipe*, bool>> stack{{root.get(), false}};
    const int dd = terms.d();
    while (!stack.empty()) {
        auto [r, expanded] = stack.back();
        stack.pop_back();
        if (!r || r->kind == Recipe::Kind::Opaque) throw Error("provenance missing");
        if (gate.count(r)) continue;
        if (!expanded) {
            stack.push_back({r, true});
            for (auto it = r->args.rbegin(); it != r->args.rend(); ++it)
                if (!gate.count(it->get())) stack.push_back({it->get(), false});
            continue;
        }
        std::vector<int> a;
        for (const auto& x : r->args) a.push_back(gate.at(x.get()));
        int g = -1;
        switch (r->kind) {
        case Recipe::Kind::Gen:
            if (r->index >= k) throw Error("generator index out of range in provenance");
            g = out.input(r->index);
            break;
        case Recipe::Kind::Op:
            if (static_cast<int>(a.size()) != sig.symbols[r->index].arity) throw Error("arity mismatch in provenance");
            g = out.apply(r->index, std::move(a));
            break;
        case Recipe::Kind::PTerm: {
            std::vector<int> in(dd + 3, a[2]);
            in[0] = a[0];
            in[1] = a[1];
            in[3] = a[0];
            g = out.embed(P, P.output(), in);
            break;
        }
        case Recipe::Kind::Level: {
            const Circuit& t = terms.t_inlined(r->index, P);
            g = out.embed(t, t.output(), a);
            break;
        }
        case Recipe::Kind::Opaque:
            break;
        }
        gate[r] = g;
    }
    out.set_output(gate.at(root.get()));
    return out.pruned();
}

std::size_t compact_bound(int n, int d, int a) {
    std::size_t p = 1;
    for (int j = 0; j < d - 1; ++j) p *= a;
    return binomial(n, d - 1) * p + 2 * static_cast<std::size_t>(n) * a * a;
}

}  // namespace subpower
