#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "subpower/algebra.hpp"
#include "subpower/circuit.hpp"

namespace subpower {

// A member of HS(K): the quotient of a subalgebra of a base algebra.
struct HSMember {
    AlgebraPtr algebra;
    int base = -1;
    std::vector<int> universe;  // sorted subuniverse of the base algebra
    std::vector<int> block_of;  // base element -> element of `algebra`, -1 outside the universe
    std::vector<int> rep;       // element of `algebra` -> least base element of its block
};

struct Analysis;

class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::shared_ptr<const Signature> sig) : signature_(std::move(sig)) {}

    const Signature& signature() const { return *signature_; }
    std::shared_ptr<const Signature> signature_ptr() const { return signature_; }
    const std::vector<AlgebraPtr>& algebras() const { return algebras_; }

    void add(AlgebraPtr a);
    // Looks among the base algebras first, then among the HS members.
    AlgebraPtr find(const std::string& name) const;
    AlgebraPtr get(const std::string& name) const;
    Context context(const std::vector<std::string>& names) const;
    int base_index(const std::string& name) const;

    // Verifies P as a (1,d-1)-parallelogram term on every algebra, derives
    // s, p, x^y and the fork exponent, and attaches P and p tables.
    void configure(const Circuit& P, int d);
    bool configured() const { return d_ > 0; }
    int d() const { return d_; }
    int e() const { return e_; }
    const Circuit& P() const { return P_; }
    const Circuit& s() const { return s_; }
    const Circuit& p() const { return p_; }
    const Circuit& xy() const { return xy_; }

    void set_difference_term(const Circuit& c) { diff_ = c; }
    const std::optional<Circuit>& difference_term_override() const { return diff_; }

    // HS(K) up to isomorphism, base algebras first.
    const std::vector<HSMember>& hs() const;
    const HSMember* hs_member(const std::string& name) const;

    // Analysis of the algebra with the same tables, computed once.
    std::shared_ptr<const Analysis> analysis(const Algebra& a) const;

    // Memo for similarity and the difference term, keyed by table fingerprints.
    mutable std::map<std::pair<std::string, std::string>, bool> similarity_cache;
    mutable std::optional<Circuit> difference_cache;

private:
    AlgebraPtr prepare(const AlgebraPtr& a) const;

    std::shared_ptr<const Signature> signature_;
    std::vector<AlgebraPtr> algebras_;
    int d_ = 0;
    int e_ = 0;
    Circuit P_, s_, p_, xy_;
    std::optional<Circuit> diff_;
    mutable std::vector<HSMember> hs_;
    mutable bool hs_built_ = false;
    mutable std::map<std::string, std::shared_ptr<const Analysis>> analysis_;
};

}  // namespace subpower
