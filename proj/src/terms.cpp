#include "subpower/terms.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace subpower {

std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

std::vector<std::vector<int>> lex_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::size_t lex_rank(const std::vector<int>& subset, int n) {
    const int k = static_cast<int>(subset.size());
    std::size_t r = 0;
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        for (int v = prev + 1; v < subset[i]; ++v) r += binomial(n - v - 1, k - i - 1);
        prev = subset[i];
    }
    return r;
}

std::optional<IdentityFailure> check_identity(const Algebra& a, const Circuit& lhs, const Circuit& rhs,
                                              std::size_t cap) {
    if (lhs.inputs() != rhs.inputs()) throw Error("identity sides differ in variable count");
    const int v = lhs.inputs();
    const int m = a.size();
    std::size_t total = 1;
    for (int i = 0; i < v; ++i) {
        total *= m;
        if (total > cap) throw Error("identity check exceeds cap");
    }
    std::vector<Elem> args(v, 0);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t r = c;
        for (int i = v - 1; i >= 0; --i) {
            args[i] = static_cast<Elem>(r % m);
            r /= m;
        }
        if (lhs.eval(a, args) != rhs.eval(a, args)) return IdentityFailure{a.name(), -1, args};
    }
    return std::nullopt;
}

std::optional<IdentityFailure> check_parallelogram(const std::vector<AlgebraPtr>& algs,
                                                   const Circuit& P, int m, int n) {
    if (m < 1 || n < 1) throw Error("parallelogram rows must be positive");
    const int d = m + n;
    if (P.inputs() != d + 3) throw Error("parallelogram term needs " + std::to_string(d + 3) + " inputs");
    for (const auto& a : algs) {
        const int sz = a->size();
        std::vector<Elem> args(d + 3);
        for (int row = 0; row < d; ++row)
            for (int x = 0; x < sz; ++x)
                for (int y = 0; y < sz; ++y)
                    for (int z = 0; z < sz; ++z) {
                        if (row < m) {
                            args[0] = x, args[1] = x, args[2] = y;
                        } else {
                            args[0] = y, args[1] = x, args[2] = x;
                        }
                        for (int c = 0; c < d; ++c) args[3 + c] = static_cast<Elem>(c == row ? z : y);
                        if (P.eval(*a, args) != y)
                            return IdentityFailure{a->name(), row,
                                                   {static_cast<Elem>(x), static_cast<Elem>(y),
                                                    static_cast<Elem>(z)}};
                    }
    }
    return std::nullopt;
}

bool verify_parallelogram(const std::vector<AlgebraPtr>& algs, const Circuit& P, int m, int n) {
    return !check_parallelogram(algs, P, m, n).has_value();
}

namespace {

int P_gate(Circuit& c, std::vector<int> args) { return c.apply(kPSym, std::move(args)); }

int s_gate(Circuit& c, int x, const std::vector<int>& ys) {
    std::vector<int> a{x, ys[0], ys[0], x};
    a.insert(a.end(), ys.begin(), ys.end());
    return P_gate(c, std::move(a));
}

int p_gate(Circuit& c, int d, int x, int u, int y) {
    std::vector<int> a{x, u, y, x};
    for (int i = 1; i < d; ++i) a.push_back(y);
    return P_gate(c, std::move(a));
}

}  // namespace

Circuit s_circuit(int d) {
    Circuit c(d);
    std::vector<int> ys;
    for (int i = 1; i < d; ++i) ys.push_back(i);
    c.set_output(s_gate(c, 0, ys));
    return c;
}

Circuit p_circuit(int d) {
    Circuit c(3);
    c.set_output(p_gate(c, d, 0, 1, 2));
    return c;
}

Circuit xy_circuit(int d) {
    Circuit c(2);
    c.set_output(p_gate(c, d, 0, 1, 1));
    return c;
}

Circuit s_pow_circuit(int d, int l) {
    Circuit c(d);
    std::vector<int> ys;
    for (int i = 1; i < d; ++i) ys.push_back(i);
    int cur = 0;
    for (int i = 0; i < l; ++i) cur = s_gate(c, cur, ys);
    c.set_output(cur);
    return c;
}

Auxiliary derive_auxiliary(const std::vector<AlgebraPtr>& algs, const Circuit& P, int d) {
    if (P.inputs() != d + 3) throw Error("P has the wrong number of inputs");
    Auxiliary aux{s_circuit(d).inline_P(P), p_circuit(d).inline_P(P), xy_circuit(d).inline_P(P)};
    for (const auto& a : algs) {
        const int m = a->size();
        std::vector<Elem> s_args(d);
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y) {
                Elem ex = static_cast<Elem>(x), ey = static_cast<Elem>(y);
                if (aux.p.eval(*a, {ex, ex, ey}) != ey)
                    throw Error("identity p(x,x,y)=y fails in " + a->name());
                for (int i = 0; i < d; ++i) s_args[i] = i == 0 ? ex : ey;
                if (aux.p.eval(*a, {ex, ey, ey}) != aux.s.eval(*a, s_args))
                    throw Error("identity p(x,y,y)=s(x,y,...,y) fails in " + a->name());
                for (int j = 1; j < d; ++j) {
                    for (int i = 0; i < d; ++i) s_args[i] = i == j ? ex : ey;
                    if (aux.s.eval(*a, s_args) != ey)
                        throw Error("identity s(y,..,x,..,y)=y fails in " + a->name());
                }
            }
    }
    return aux;
}

std::vector<Elem> ternary_table(const Algebra& a, const Circuit& c) {
    const int m = a.size();
    std::vector<Elem> t(static_cast<std::size_t>(m) * m * m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            for (int z = 0; z < m; ++z)
                t[(static_cast<std::size_t>(x) * m + y) * m + z] =
                    c.eval(a, {static_cast<Elem>(x), static_cast<Elem>(y), static_cast<Elem>(z)});
    return t;
}

int find_fork_exponent(const std::vector<AlgebraPtr>& algs, const Circuit& xy) {
    int cap = 1;
    for (const auto& a : algs) cap = std::max(cap, a->size() * a->size());
    for (int e = 1; e <= cap; ++e) {
        bool ok = true;
        for (const auto& a : algs) {
            const int m = a->size();
            std::vector<Elem> t(static_cast<std::size_t>(m) * m);
            for (int x = 0; x < m; ++x)
                for (int y = 0; y < m; ++y)
                    t[x * m + y] = xy.eval(*a, {static_cast<Elem>(x), static_cast<Elem>(y)});
            auto pw = [&](int x, int y) {
                for (int i = 0; i < e; ++i) x = t[x * m + y];
                return x;
            };
            for (int x = 0; x < m && ok; ++x)
                for (int y = 0; y < m && ok; ++y) {
                    int v = pw(x, y);
                    if (pw(v, y) != v) ok = false;
                }
            if (!ok) break;
        }
        if (ok) return e;
    }
    throw Error("no fork exponent found");
}

Circuit build_tn(int n, int d, int e) {
    if (d < 2 || e < 1) throw Error("build_tn needs d >= 2 and e >= 1");
    if (n < d) throw Error("build_tn needs n >= d");
    const int k = d - 1;
    Circuit c(3 + static_cast<int>(binomial(n, k)));
    const int x = 0, y = 1, z = 2;
    std::map<std::vector<int>, int> memo;
    // V has size k and lies in {0..l-1}; l counts coordinates already fixed.
    std::function<int(int, const std::vector<int>&)> rec = [&](int l, const std::vector<int>& V) -> int {
        if (l == n) return 3 + static_cast<int>(lex_rank(V, n));
        std::vector<int> key{l};
        key.insert(key.end(), V.begin(), V.end());
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<int> ts;
        for (int j = 0; j < k; ++j) {
            std::vector<int> Vj;
            for (int i = 0; i < k; ++i)
                if (i != j) Vj.push_back(V[i]);
            Vj.push_back(l);
            ts.push_back(rec(l + 1, Vj));
        }
        int sp = x;
        for (int i = 0; i < e + 1; ++i) sp = s_gate(c, sp, ts);
        int pp = p_gate(c, d, y, z, ts[0]);
        std::vector<int> args{sp, pp, ts[0], x};
        args.insert(args.end(), ts.begin(), ts.end());
        int g = P_gate(c, std::move(args));
        memo.emplace(std::move(key), g);
        return g;
    };
    std::vector<int> V0(k);
    for (int i = 0; i < k; ++i) V0[i] = i;
    c.set_output(rec(k, V0));
    return c;
}

namespace {

Circuit build_Tn_impl(int n, int d, int e, bool plus) {
    if (n < d) throw Error("build_Tn needs n >= d");
    const int k = d - 1;
    const int levels = n - d + 1;
    const int nw = static_cast<int>(binomial(n, k));
    Circuit c(2 * levels + nw + (plus ? 1 : 0));
    auto w = [&](const std::vector<int>& I) { return 2 * levels + static_cast<int>(lex_rank(I, n)); };
    std::vector<int> first(k);
    for (int i = 0; i < k; ++i) first[i] = i;
    int cur = w(first);
    std::vector<int> extra;
    const int b = plus ? c.inputs() - 1 : -1;
    for (int m = d; m <= n; ++m) {
        if (plus) extra.push_back(p_gate(c, d, cur, b, b));
        Circuit tm = build_tn(m, d, e);
        std::vector<int> in{cur, 2 * (m - d) + 1, 2 * (m - d)};
        for (const auto& I : lex_subsets(m, k)) in.push_back(w(I));
        cur = c.embed(tm, tm.output(), in);
    }
    std::vector<int> outs{cur};
    outs.insert(outs.end(), extra.begin(), extra.end());
    c.set_outputs(outs);
    return c;
}

}  // namespace

Circuit build_Tn(int n, int d, int e) { return build_Tn_impl(n, d, e, false); }
Circuit build_Tn_plus(int n, int d, int e) { return build_Tn_impl(n, d, e, true); }

AlgebraPtr attach_terms(const Algebra& a, const Circuit& P, int d) {
    const int m = a.size();
    const int ar = d + 3;
    std::size_t total = 1;
    for (int i = 0; i < ar; ++i) {
        total *= m;
        if (total > (1u << 26)) throw Error("P table too large for " + a.name());
    }
    auto out = std::make_shared<Algebra>(a.name(), m, a.signature_ptr(), a.tables());
    out->P_arity = ar;
    out->P_table.resize(total);
    std::vector<Elem> args(ar, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        out->P_table[idx] = P.eval(a, args);
        for (int j = ar - 1; j >= 0; --j) {
            if (++args[j] < m) break;
            args[j] = 0;
        }
    }
    out->p_table.resize(static_cast<std::size_t>(m) * m * m);
    std::vector<Elem> pa(ar);
    for (int x = 0; x < m; ++x)
        for (int u = 0; u < m; ++u)
            for (int y = 0; y < m; ++y) {
                pa[0] = x, pa[1] = u, pa[2] = y, pa[3] = x;
                for (int j = 4; j < ar; ++j) pa[j] = y;
                out->p_table[(static_cast<std::size_t>(x) * m + u) * m + y] = out->P(pa.data());
            }
    return out;
}

TermSearchResult search_parallelogram_term(const Algebra& a, int d, std::size_t cap) {
    if (d < 2) throw Error("d must be at least 2");
    const int m = a.size();
    const int cube = m * m * m;
    const int N = d * cube;
    auto self = std::shared_ptr<const Algebra>(&a, [](const Algebra*) {});
    Context ctx;
    ctx.factors.assign(N, self);
    std::vector<Tuple> gens(d + 3, Tuple(N));
    Tuple target(N);
    for (int row = 0; row < d; ++row)
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                for (int z = 0; z < m; ++z) {
                    int c = row * cube + (x * m + y) * m + z;
                    Elem v[3] = {static_cast<Elem>(row == 0 ? x : y), static_cast<Elem>(x),
                                 static_cast<Elem>(row == 0 ? y : x)};
                    for (int j = 0; j < 3; ++j) gens[j][c] = v[j];
                    for (int j = 0; j < d; ++j) gens[3 + j][c] = static_cast<Elem>(j == row ? z : y);
                    target[c] = static_cast<Elem>(y);
                }
    TermSearchResult res;
    ClosureOptions opt;
    opt.cap = cap;
    opt.provenance = true;
    std::size_t hit = 0;
    opt.on_new = [&](const TupleSet& s, std::size_t i) {
        if (std::equal(target.begin(), target.end(), s.at(i))) {
            hit = i;
            return true;
        }
        return false;
    };
    try {
        Closure cl = subalgebra_closure(ctx, gens, opt);
        res.explored = cl.set.size();
        if (cl.stopped) {
            res.found = true;
            res.term = derivation_circuit(cl, a.signature(), d + 3, hit);
        } else {
            res.exhausted = true;
        }
    } catch (const Error&) {
        res.explored = cap;
    }
    return res;
}

}  // namespace subpower
