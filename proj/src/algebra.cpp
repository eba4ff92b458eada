#include "subpower/algebra.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <set>
#include <sstream>

namespace subpower {

int Signature::find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (symbols[i].name == name) return i;
    return -1;
}

bool Signature::operator==(const Signature& o) const {
    if (symbols.size() != o.symbols.size()) return false;
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i].name != o.symbols[i].name || symbols[i].arity != o.symbols[i].arity)
            return false;
    return true;
}

static std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

Algebra::Algebra(std::string name, int size, std::shared_ptr<const Signature> sig,
                 std::vector<std::vector<Elem>> tables)
    : name_(std::move(name)), size_(size), sig_(std::move(sig)), tables_(std::move(tables)) {
    if (size_ < 1 || size_ > 255) throw Error("algebra " + name_ + ": size out of range");
    if (static_cast<int>(tables_.size()) != sig_->size())
        throw Error("algebra " + name_ + ": missing operation tables");
    for (int s = 0; s < sig_->size(); ++s) {
        int ar = sig_->symbols[s].arity;
        if (tables_[s].size() != ipow(size_, ar))
            throw Error("algebra " + name_ + ": table length for " + sig_->symbols[s].name);
        for (Elem v : tables_[s])
            if (v >= size_)
                throw Error("algebra " + name_ + ": entry out of range in " + sig_->symbols[s].name);
    }
}

std::size_t Algebra::index(const int* args, int arity) const {
    std::size_t idx = 0;
    for (int i = 0; i < arity; ++i) idx = idx * size_ + static_cast<std::size_t>(args[i]);
    return idx;
}

Elem Algebra::apply(int sym, const int* args) const {
    return tables_[sym][index(args, sig_->symbols[sym].arity)];
}

Elem Algebra::apply(int sym, std::initializer_list<int> args) const {
    return apply(sym, args.begin());
}

Elem Algebra::P(const Elem* args) const {
    std::size_t idx = 0;
    for (int i = 0; i < P_arity; ++i) idx = idx * size_ + args[i];
    return P_table[idx];
}

std::string Algebra::key() const {
    std::string k = std::to_string(size_) + ":";
    for (const auto& t : tables_) {
        k.append(reinterpret_cast<const char*>(t.data()), t.size());
        k.push_back('|');
    }
    return k;
}

void Context::check(const Tuple& t) const {
    if (static_cast<int>(t.size()) != n()) throw Error("tuple length mismatch");
    for (int i = 0; i < n(); ++i)
        if (t[i] >= factors[i]->size()) throw Error("tuple entry out of range");
}

Context Context::project(const std::vector<int>& coords) const {
    Context c;
    for (int i : coords) c.factors.push_back(factors[i]);
    return c;
}

Tuple project(const Tuple& t, const std::vector<int>& coords) {
    Tuple r(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) r[i] = t[coords[i]];
    return r;
}

Tuple apply_op(const Context& ctx, int sym, const std::vector<const Tuple*>& args) {
    int n = ctx.n();
    Tuple out(n);
    int ar = static_cast<int>(args.size());
    std::vector<int> a(ar);
    for (int c = 0; c < n; ++c) {
        for (int j = 0; j < ar; ++j) a[j] = (*args[j])[c];
        out[c] = ctx[c].apply(sym, a.data());
    }
    return out;
}

Tuple apply_P(const Context& ctx, const std::vector<const Tuple*>& args) {
    int n = ctx.n();
    Tuple out(n);
    Elem a[32];
    for (int c = 0; c < n; ++c) {
        for (std::size_t j = 0; j < args.size(); ++j) a[j] = (*args[j])[c];
        out[c] = ctx[c].P(a);
    }
    return out;
}

Tuple apply_p(const Context& ctx, const Tuple& x, const Tuple& u, const Tuple& y) {
    int n = ctx.n();
    Tuple out(n);
    for (int c = 0; c < n; ++c) out[c] = ctx[c].p(x[c], u[c], y[c]);
    return out;
}

// ---------------------------------------------------------------- TupleSet

std::uint64_t TupleSet::hash(const Elem* t) const {
    std::uint64_t h = 1469598103934665603ull;
    int i = 0;
    for (; i + 8 <= n_; i += 8) {
        std::uint64_t w;
        std::memcpy(&w, t + i, 8);
        h = (h ^ w) * 0x9E3779B97F4A7C15ull;
        h ^= h >> 29;
    }
    for (; i < n_; ++i) h = (h ^ t[i]) * 1099511628211ull;
    h ^= h >> 32;
    return h;
}

long TupleSet::find(const Elem* t) const {
    if (slots_.empty()) return -1;
    std::size_t mask = slots_.size() - 1;
    std::size_t pos = hash(t) & mask;
    while (true) {
        std::int64_t s = slots_[pos];
        if (s < 0) return -1;
        if (std::memcmp(at(static_cast<std::size_t>(s)), t, n_) == 0) return static_cast<long>(s);
        pos = (pos + 1) & mask;
    }
}

void TupleSet::grow() {
    std::size_t cap = slots_.empty() ? 64 : slots_.size() * 2;
    slots_.assign(cap, -1);
    std::size_t mask = cap - 1;
    for (std::size_t i = 0; i < count_; ++i) {
        std::size_t pos = hash(at(i)) & mask;
        while (slots_[pos] >= 0) pos = (pos + 1) & mask;
        slots_[pos] = static_cast<std::int64_t>(i);
    }
}

std::pair<std::size_t, bool> TupleSet::insert(const Elem* t) {
    if ((count_ + 1) * 2 > slots_.size()) grow();
    std::size_t mask = slots_.size() - 1;
    std::size_t pos = hash(t) & mask;
    while (true) {
        std::int64_t s = slots_[pos];
        if (s < 0) break;
        if (std::memcmp(at(static_cast<std::size_t>(s)), t, n_) == 0)
            return {static_cast<std::size_t>(s), false};
        pos = (pos + 1) & mask;
    }
    slots_[pos] = static_cast<std::int64_t>(count_);
    data_.insert(data_.end(), t, t + n_);
    return {count_++, true};
}

std::vector<Tuple> TupleSet::to_vector() const {
    std::vector<Tuple> v;
    v.reserve(count_);
    for (std::size_t i = 0; i < count_; ++i) v.push_back(get(i));
    return v;
}

// ----------------------------------------------------------------- closure

std::vector<int> Closure::arguments(std::size_t i, int arity) const {
    std::vector<int> r(arity);
    for (int j = 0; j < arity; ++j) r[j] = args[arg_offset[i] + j];
    return r;
}

namespace {

struct CoordOps {
    const Elem* table;
    int size;
};

}  // namespace

Closure subalgebra_closure(const Context& ctx, const std::vector<Tuple>& gens,
                           const ClosureOptions& opt) {
    if (gens.empty()) throw Error("empty generator set");
    const int n = ctx.n();
    const Signature& sig = ctx.n() ? ctx[0].signature() : Signature{};
    Closure cl;
    cl.set = TupleSet(n);
    auto record = [&](std::size_t idx, int op, int gen, const int* args, int ar) {
        if (!opt.provenance) return;
        if (cl.op.size() <= idx) {
            cl.op.push_back(op);
            cl.gen_index.push_back(gen);
            cl.arg_offset.push_back(cl.args.size());
            for (int j = 0; j < ar; ++j) cl.args.push_back(args[j]);
        }
    };
    auto add = [&](const Elem* t, int op, int gen, const int* args, int ar) -> bool {
        auto [idx, fresh] = cl.set.insert(t);
        if (!fresh) return false;
        if (cl.set.size() > opt.cap) throw CapExceeded("closure cap of " + std::to_string(opt.cap) + " tuples exceeded");
        record(idx, op, gen, args, ar);
        if (opt.on_new && opt.on_new(cl.set, idx)) {
            cl.stopped = true;
            return true;
        }
        return false;
    };
    for (std::size_t g = 0; g < gens.size(); ++g) {
        ctx.check(gens[g]);
        if (add(gens[g].data(), -1, static_cast<int>(g), nullptr, 0)) return cl;
    }
    const int nsym = sig.size();
    std::vector<std::vector<CoordOps>> tabs(nsym, std::vector<CoordOps>(n));
    for (int s = 0; s < nsym; ++s)
        for (int c = 0; c < n; ++c) tabs[s][c] = {ctx[c].table(s).data(), ctx[c].size()};
    Tuple buf(n);
    for (int s = 0; s < nsym; ++s) {
        if (sig.symbols[s].arity != 0) continue;
        for (int c = 0; c < n; ++c) buf[c] = tabs[s][c].table[0];
        if (add(buf.data(), s, -1, nullptr, 0)) return cl;
    }
    std::vector<int> idx(16);
    double work = 0;
    for (std::size_t i = 0; i < cl.set.size(); ++i) {
        for (int s = 0; s < nsym; ++s) {
            const int ar = sig.symbols[s].arity;
            if (ar == 0) continue;
            const auto& tb = tabs[s];
            // all argument vectors over [0..i] in which i occurs, split by first occurrence q
            for (int q = 0; q < ar; ++q) {
                for (int j = 0; j < ar; ++j) idx[j] = 0;
                idx[q] = static_cast<int>(i);
                if (i == 0 && q > 0) break;
                while (true) {
                    for (int c = 0; c < n; ++c) {
                        std::size_t k = 0;
                        const std::size_t m = static_cast<std::size_t>(tb[c].size);
                        for (int j = 0; j < ar; ++j) k = k * m + cl.set.at(idx[j])[c];
                        buf[c] = tb[c].table[k];
                    }
                    if (add(buf.data(), s, -1, idx.data(), ar)) return cl;
                    if (++work > opt.work_cap) throw CapExceeded("closure work cap exceeded");
                    // advance odometer over positions != q
                    int j = ar - 1;
                    for (; j >= 0; --j) {
                        if (j == q) continue;
                        int lim = j < q ? static_cast<int>(i) - 1 : static_cast<int>(i);
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
    }
    return cl;
}

bool is_closed(const Context& ctx, const TupleSet& s) {
    const Signature& sig = ctx[0].signature();
    std::size_t N = s.size();
    std::vector<const Tuple*> args;
    std::vector<Tuple> all = s.to_vector();
    for (int sym = 0; sym < sig.size(); ++sym) {
        int ar = sig.symbols[sym].arity;
        std::vector<std::size_t> idx(ar, 0);
        if (ar > 0 && N == 0) continue;
        while (true) {
            args.clear();
            for (int j = 0; j < ar; ++j) args.push_back(&all[idx[j]]);
            if (!s.contains(apply_op(ctx, sym, args))) return false;
            int j = ar - 1;
            for (; j >= 0; --j) {
                if (++idx[j] < N) break;
                idx[j] = 0;
            }
            if (j < 0) break;
        }
    }
    return true;
}

// ------------------------------------------------------ single algebra parts

std::vector<int> subuniverse(const Algebra& a, const std::vector<int>& gens) {
    Context ctx{{std::shared_ptr<const Algebra>(&a, [](const Algebra*) {})}};
    std::vector<Tuple> g;
    for (int x : gens) g.push_back(Tuple{static_cast<Elem>(x)});
    std::vector<int> out;
    if (g.empty()) {
        // only nullary operations can produce elements
        for (int s = 0; s < a.signature().size(); ++s)
            if (a.signature().symbols[s].arity == 0) g.push_back(Tuple{a.table(s)[0]});
        if (g.empty()) return out;
    }
    Closure cl = subalgebra_closure(ctx, g);
    for (std::size_t i = 0; i < cl.set.size(); ++i) out.push_back(cl.set.at(i)[0]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> all_subuniverses(const Algebra& a, std::size_t cap) {
    const int m = a.size();
    std::vector<std::vector<int>> result;
    std::set<std::vector<int>> seen;
    auto add = [&](std::vector<int> u) {
        if (u.empty() || !seen.insert(u).second) return;
        result.push_back(std::move(u));
        if (result.size() > cap) throw Error("subuniverse cap");
    };
    add(subuniverse(a, {}));
    for (int x = 0; x < m; ++x) add(subuniverse(a, {x}));
    for (std::size_t i = 0; i < result.size(); ++i) {
        std::vector<bool> in(m, false);
        for (int x : result[i]) in[x] = true;
        for (int x = 0; x < m; ++x) {
            if (in[x]) continue;
            std::vector<int> g = result[i];
            g.push_back(x);
            add(subuniverse(a, g));
        }
    }
    return result;
}

AlgebraPtr make_subalgebra(const Algebra& a, const std::vector<int>& universe,
                           const std::string& name) {
    const int k = static_cast<int>(universe.size());
    std::vector<int> pos(a.size(), -1);
    for (int i = 0; i < k; ++i) pos[universe[i]] = i;
    const Signature& sig = a.signature();
    std::vector<std::vector<Elem>> tabs(sig.size());
    for (int s = 0; s < sig.size(); ++s) {
        int ar = sig.symbols[s].arity;
        std::size_t len = ipow(k, ar);
        tabs[s].resize(len);
        std::vector<int> args(ar);
        for (std::size_t idx = 0; idx < len; ++idx) {
            std::size_t r = idx;
            for (int j = ar - 1; j >= 0; --j) {
                args[j] = universe[r % k];
                r /= k;
            }
            int v = pos[a.apply(s, args.data())];
            if (v < 0) throw Error("not a subuniverse");
            tabs[s][idx] = static_cast<Elem>(v);
        }
    }
    return std::make_shared<Algebra>(name, k, a.signature_ptr(), std::move(tabs));
}

AlgebraPtr make_product(const std::vector<AlgebraPtr>& fs, const std::string& name) {
    std::size_t total = 1;
    for (const auto& f : fs) total *= f->size();
    if (total > 255) throw Error("product too large");
    const Signature& sig = fs[0]->signature();
    int K = static_cast<int>(total);
    auto decode = [&](int x) {
        std::vector<int> c(fs.size());
        for (int i = static_cast<int>(fs.size()) - 1; i >= 0; --i) {
            c[i] = x % fs[i]->size();
            x /= fs[i]->size();
        }
        return c;
    };
    std::vector<std::vector<Elem>> tabs(sig.size());
    for (int s = 0; s < sig.size(); ++s) {
        int ar = sig.symbols[s].arity;
        std::size_t len = ipow(K, ar);
        tabs[s].resize(len);
        std::vector<std::vector<int>> dec(ar);
        std::vector<int> a(ar);
        for (std::size_t idx = 0; idx < len; ++idx) {
            std::size_t r = idx;
            for (int j = ar - 1; j >= 0; --j) {
                dec[j] = decode(static_cast<int>(r % K));
                r /= K;
            }
            int out = 0;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                for (int j = 0; j < ar; ++j) a[j] = dec[j][i];
                out = out * fs[i]->size() + fs[i]->apply(s, a.data());
            }
            tabs[s][idx] = static_cast<Elem>(out);
        }
    }
    return std::make_shared<Algebra>(name, K, fs[0]->signature_ptr(), std::move(tabs));
}

// ------------------------------------------------------------- isomorphism

namespace {

struct IsoSearch {
    const Algebra& a;
    const Algebra& b;
    std::vector<int> f, finv;
    std::vector<int> order;

    bool consistent(int x) {
        // check every table entry whose arguments are all mapped and involve x
        const Signature& sig = a.signature();
        const int m = a.size();
        for (int s = 0; s < sig.size(); ++s) {
            int ar = sig.symbols[s].arity;
            if (ar == 0) {
                if (f[a.table(s)[0]] >= 0 && f[a.table(s)[0]] != b.table(s)[0]) return false;
                continue;
            }
            std::vector<int> mapped;
            for (int y = 0; y < m; ++y)
                if (f[y] >= 0) mapped.push_back(y);
            std::vector<int> args(ar), bargs(ar);
            std::vector<std::size_t> idx(ar, 0);
            const std::size_t M = mapped.size();
            while (true) {
                bool has_x = false;
                for (int j = 0; j < ar; ++j) {
                    args[j] = mapped[idx[j]];
                    bargs[j] = f[args[j]];
                    has_x |= args[j] == x;
                }
                if (has_x) {
                    int v = a.apply(s, args.data());
                    int w = b.apply(s, bargs.data());
                    if (f[v] >= 0 && f[v] != w) return false;
                    if (f[v] < 0 && finv[w] >= 0) return false;
                }
                int j = ar - 1;
                for (; j >= 0; --j) {
                    if (++idx[j] < M) break;
                    idx[j] = 0;
                }
                if (j < 0) break;
            }
        }
        return true;
    }

    bool run(std::size_t k) {
        if (k == order.size()) return true;
        int x = order[k];
        for (int y = 0; y < b.size(); ++y) {
            if (finv[y] >= 0) continue;
            f[x] = y;
            finv[y] = x;
            if (consistent(x) && run(k + 1)) return true;
            f[x] = -1;
            finv[y] = -1;
        }
        return false;
    }
};

}  // namespace

std::vector<int> find_isomorphism(const Algebra& a, const Algebra& b) {
    if (a.size() != b.size() || !(a.signature() == b.signature())) return {};
    if (a.key() == b.key()) {
        std::vector<int> id(a.size());
        std::iota(id.begin(), id.end(), 0);
        return id;
    }
    IsoSearch s{a, b, std::vector<int>(a.size(), -1), std::vector<int>(b.size(), -1), {}};
    for (int x = 0; x < a.size(); ++x) s.order.push_back(x);
    if (!s.run(0)) return {};
    return s.f;
}

bool isomorphic(const Algebra& a, const Algebra& b) {
    return a.size() == b.size() && !find_isomorphism(a, b).empty();
}

}  // namespace subpower

namespace subpower {

Partition identity_partition(int m) {
    Partition p(m);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Partition full_partition(int m) { return Partition(m, 0); }

Partition canonical_partition(const std::vector<int>& block_id) {
    Partition p(block_id.size());
    std::vector<int> first;
    int mx = 0;
    for (int b : block_id) mx = std::max(mx, b);
    first.assign(mx + 1, -1);
    for (std::size_t i = 0; i < block_id.size(); ++i) {
        if (first[block_id[i]] < 0) first[block_id[i]] = static_cast<int>(i);
        p[i] = first[block_id[i]];
    }
    return p;
}

int block_count(const Partition& p) {
    int c = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] == static_cast<int>(i)) ++c;
    return c;
}

bool is_congruence(const Algebra& a, const Partition& p) {
    const int m = a.size();
    if (static_cast<int>(p.size()) != m) return false;
    for (int x = 0; x < m; ++x)
        if (p[x] > x || p[p[x]] != p[x]) return false;
    // a partition is a congruence iff it is preserved by basic translations
    const Signature& sig = a.signature();
    for (int s = 0; s < sig.size(); ++s) {
        int ar = sig.symbols[s].arity;
        if (ar == 0) continue;
        std::vector<int> args(ar, 0);
        std::size_t cnt = 1;
        for (int j = 1; j < ar; ++j) cnt *= m;
        for (int slot = 0; slot < ar; ++slot) {
            for (std::size_t c = 0; c < cnt; ++c) {
                std::size_t r = c;
                for (int j = 0; j < ar; ++j) {
                    if (j == slot) continue;
                    args[j] = static_cast<int>(r % m);
                    r /= m;
                }
                for (int x = 0; x < m; ++x) {
                    if (p[x] == x) continue;
                    args[slot] = x;
                    int u = a.apply(s, args.data());
                    args[slot] = p[x];
                    int v = a.apply(s, args.data());
                    if (p[u] != p[v]) return false;
                }
            }
        }
    }
    return true;
}

Quotient quotient(const Algebra& a, const Partition& theta, const std::string& name) {
    if (!is_congruence(a, theta)) throw Error("not a congruence of " + a.name());
    const int m = a.size();
    Quotient q;
    q.map.assign(m, -1);
    for (int x = 0; x < m; ++x) {
        if (theta[x] == x) {
            q.map[x] = static_cast<int>(q.rep.size());
            q.rep.push_back(x);
        } else {
            q.map[x] = q.map[theta[x]];
        }
    }
    const int k = static_cast<int>(q.rep.size());
    const Signature& sig = a.signature();
    std::vector<std::vector<Elem>> tabs(sig.size());
    for (int s = 0; s < sig.size(); ++s) {
        int ar = sig.symbols[s].arity;
        std::size_t len = ipow(k, ar);
        tabs[s].resize(len);
        std::vector<int> args(ar);
        for (std::size_t idx = 0; idx < len; ++idx) {
            std::size_t r = idx;
            for (int j = ar - 1; j >= 0; --j) {
                args[j] = q.rep[r % k];
                r /= k;
            }
            tabs[s][idx] = static_cast<Elem>(q.map[a.apply(s, args.data())]);
        }
    }
    q.algebra = std::make_shared<Algebra>(name, k, a.signature_ptr(), std::move(tabs));
    return q;
}

}  // namespace subpower
