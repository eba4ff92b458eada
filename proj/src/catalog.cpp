#include "subpower/catalog.hpp"

#include <algorithm>

#include "subpower/congruence.hpp"
#include "subpower/terms.hpp"

namespace subpower {

void Catalog::add(AlgebraPtr a) {
    if (!signature_) signature_ = a->signature_ptr();
    if (!(a->signature() == *signature_)) throw Error("algebra " + a->name() + " has a different signature");
    for (const auto& b : algebras_)
        if (b->name() == a->name()) throw Error("duplicate algebra name " + a->name());
    algebras_.push_back(prepare(a));
    hs_built_ = false;
}

AlgebraPtr Catalog::prepare(const AlgebraPtr& a) const {
    if (!configured() || a->P_arity == d_ + 3) return a;
    return attach_terms(*a, P_, d_);
}

int Catalog::base_index(const std::string& name) const {
    for (std::size_t i = 0; i < algebras_.size(); ++i)
        if (algebras_[i]->name() == name) return static_cast<int>(i);
    return -1;
}

AlgebraPtr Catalog::find(const std::string& name) const {
    int i = base_index(name);
    if (i >= 0) return algebras_[i];
    if (const HSMember* h = hs_member(name)) return h->algebra;
    return nullptr;
}

AlgebraPtr Catalog::get(const std::string& name) const {
    AlgebraPtr a = find(name);
    if (!a) throw Error("unknown algebra " + name);
    return a;
}

Context Catalog::context(const std::vector<std::string>& names) const {
    Context ctx;
    for (const auto& n : names) ctx.factors.push_back(get(n));
    return ctx;
}

void Catalog::configure(const Circuit& P, int d) {
    if (d < 2) throw Error("cube parameter d must be at least 2");
    if (P.uses_P()) throw Error("parallelogram term must be over the basic signature");
    if (auto f = check_parallelogram(algebras_, P, 1, d - 1))
        throw Error("P is not a (1," + std::to_string(d - 1) + ")-parallelogram term: row " +
                    std::to_string(f->row + 1) + " fails in " + f->algebra);
    Auxiliary aux = derive_auxiliary(algebras_, P, d);
    P_ = P;
    s_ = aux.s;
    p_ = aux.p;
    xy_ = aux.xy;
    e_ = find_fork_exponent(algebras_, xy_);
    d_ = d;
    for (auto& a : algebras_) a = attach_terms(*a, P_, d_);
    hs_built_ = false;
    hs_.clear();
    difference_cache.reset();
}

const std::vector<HSMember>& Catalog::hs() const {
    if (hs_built_) return hs_;
    hs_.clear();
    for (std::size_t bi = 0; bi < algebras_.size(); ++bi) {
        const AlgebraPtr& A = algebras_[bi];
        auto subs = all_subuniverses(*A);
        std::stable_sort(subs.begin(), subs.end(), [](const auto& x, const auto& y) {
            if (x.size() != y.size()) return x.size() > y.size();
            return x < y;
        });
        for (const auto& u : subs) {
            const bool full = static_cast<int>(u.size()) == A->size();
            std::string sname = A->name();
            if (!full) {
                sname += "[";
                for (std::size_t i = 0; i < u.size(); ++i) sname += (i ? "," : "") + std::to_string(u[i]);
                sname += "]";
            }
            AlgebraPtr S = full ? A : make_subalgebra(*A, u, sname);
            CongruenceLattice lat = analysis(*S)->lattice;
            for (const auto& theta : lat.elems) {
                const bool ident = is_identity(theta);
                std::string qname = ident ? sname : sname + "/" + partition_string(theta);
                Quotient q = quotient(*S, theta, qname);
                // base algebras are always kept so that they carry provenance
                bool dup = false;
                if (!(full && ident))
                    for (const auto& h : hs_)
                        if (h.algebra->size() == q.algebra->size() && isomorphic(*h.algebra, *q.algebra)) {
                            dup = true;
                            break;
                        }
                if (dup) continue;
                HSMember m;
                m.algebra = (full && ident) ? A : prepare(q.algebra);
                m.base = static_cast<int>(bi);
                m.universe = u;
                m.block_of.assign(A->size(), -1);
                for (std::size_t i = 0; i < u.size(); ++i) m.block_of[u[i]] = q.map[i];
                for (int r : q.rep) m.rep.push_back(u[r]);
                hs_.push_back(std::move(m));
            }
        }
    }
    hs_built_ = true;
    return hs_;
}

const HSMember* Catalog::hs_member(const std::string& name) const {
    for (const auto& h : hs())
        if (h.algebra->name() == name) return &h;
    return nullptr;
}

std::shared_ptr<const Analysis> Catalog::analysis(const Algebra& a) const {
    std::string k = a.key();
    auto it = analysis_.find(k);
    if (it != analysis_.end()) return it->second;
    auto an = std::make_shared<const Analysis>(analyze_algebra(a));
    analysis_.emplace(std::move(k), an);
    return an;
}

}  // namespace subpower
