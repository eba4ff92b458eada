#pragma once
// Brute-force oracles for the tests. They read operation tables directly and
// share no code with the library's closure, congruence or solver routines.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <unordered_set>
#include <vector>

#include "subpower/algebra.hpp"

namespace oracle {

using subpower::Algebra;
using subpower::AlgebraPtr;
using subpower::Elem;
using subpower::Tuple;

inline int op_value(const Algebra& a, int sym, const std::vector<int>& args) {
    std::size_t k = 0;
    for (int x : args) k = k * static_cast<std::size_t>(a.size()) + static_cast<std::size_t>(x);
    return a.table(sym)[k];
}

// Worklist closure; every new tuple is combined with everything found so far.
// Returns an empty set once more than cap tuples are found.
inline std::set<Tuple> closure(const std::vector<AlgebraPtr>& f, const std::vector<Tuple>& gens,
                               std::size_t cap = 200000) {
    const int n = static_cast<int>(f.size());
    const auto& sig = f.empty() ? nullptr : &f[0]->signature();
    // tuples of up to 8 coordinates pack into one word
    const bool packed = n <= 8;
    std::unordered_set<std::uint64_t> keys;
    std::set<Tuple> seen;
    std::vector<Tuple> list;
    auto push = [&](const Tuple& t) {
        bool fresh;
        if (packed) {
            std::uint64_t k = 0;
            for (Elem e : t) k = k << 8 | e;
            fresh = keys.insert(k).second;
        } else {
            fresh = seen.insert(t).second;
        }
        if (fresh) list.push_back(t);
        return list.size() <= cap;
    };
    auto result = [&]() { return std::set<Tuple>(list.begin(), list.end()); };
    for (const auto& g : gens)
        if (!push(g)) return {};
    if (!sig) return result();
    Tuple t(n);
    std::vector<int> args;
    for (int s = 0; s < sig->size(); ++s)
        if (sig->symbols[s].arity == 0) {
            for (int i = 0; i < n; ++i) t[i] = static_cast<Elem>(op_value(*f[i], s, {}));
            if (!push(t)) return {};
        }
    for (std::size_t i = 0; i < list.size(); ++i) {
        for (int s = 0; s < sig->size(); ++s) {
            const int ar = sig->symbols[s].arity;
            if (ar == 0) continue;
            args.assign(ar, 0);
            // argument vectors over list[0..i] that use index i at least once
            std::vector<std::size_t> idx(ar, 0);
            while (true) {
                if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
                    for (int c = 0; c < n; ++c) {
                        for (int q = 0; q < ar; ++q) args[q] = list[idx[q]][c];
                        t[c] = static_cast<Elem>(op_value(*f[c], s, args));
                    }
                    if (!push(t)) return {};
                }
                int q = ar - 1;
                for (; q >= 0; --q) {
                    if (++idx[q] <= i) break;
                    idx[q] = 0;
                }
                if (q < 0) break;
            }
        }
    }
    return result();
}

inline std::vector<Tuple> product(const std::vector<AlgebraPtr>& f) {
    std::vector<Tuple> out{Tuple()};
    for (const auto& a : f) {
        std::vector<Tuple> next;
        for (const auto& t : out)
            for (int x = 0; x < a->size(); ++x) {
                Tuple u = t;
                u.push_back(static_cast<Elem>(x));
                next.push_back(u);
            }
        out = std::move(next);
    }
    return out;
}

// All partitions of [m] as block labels (restricted growth strings).
inline std::vector<std::vector<int>> partitions(int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> p(m, 0);
    std::function<void(int, int)> rec = [&](int i, int mx) {
        if (i == m) {
            out.push_back(p);
            return;
        }
        for (int b = 0; b <= mx + 1; ++b) {
            p[i] = b;
            rec(i + 1, std::max(mx, b));
        }
    };
    if (m == 0) return {{}};
    p[0] = 0;
    rec(1, 0);
    return out;
}

inline bool compatible(const Algebra& a, const std::vector<int>& p) {
    const auto& sig = a.signature();
    const int m = a.size();
    for (int s = 0; s < sig.size(); ++s) {
        const int ar = sig.symbols[s].arity;
        // change one argument at a time within a block
        std::vector<int> args(ar, 0);
        while (true) {
            int base = op_value(a, s, args);
            for (int q = 0; q < ar; ++q) {
                int keep = args[q];
                for (int y = 0; y < m; ++y) {
                    if (p[y] != p[keep]) continue;
                    args[q] = y;
                    if (p[op_value(a, s, args)] != p[base]) return false;
                }
                args[q] = keep;
            }
            int q = ar - 1;
            for (; q >= 0; --q) {
                if (++args[q] < m) break;
                args[q] = 0;
            }
            if (q < 0) break;
        }
    }
    return true;
}

inline std::vector<std::vector<int>> congruences(const Algebra& a) {
    std::vector<std::vector<int>> out;
    for (const auto& p : partitions(a.size()))
        if (compatible(a, p)) out.push_back(p);
    return out;
}

// B[theta]: every tuple theta-related to a member of B.
inline std::set<Tuple> saturate(const std::set<Tuple>& B, const std::vector<std::vector<int>>& theta,
                                const std::vector<AlgebraPtr>& f) {
    std::set<Tuple> out;
    for (const auto& t : product(f)) {
        for (const auto& b : B) {
            bool rel = true;
            for (std::size_t i = 0; i < t.size() && rel; ++i) rel = theta[i][t[i]] == theta[i][b[i]];
            if (rel) {
                out.insert(t);
                break;
            }
        }
    }
    return out;
}

}  // namespace oracle
