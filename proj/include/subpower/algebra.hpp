#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace subpower {

using Elem = std::uint8_t;
using Tuple = std::vector<Elem>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A closure ran past its size or work cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

struct Symbol {
    std::string name;
    int arity = 0;
};

struct Signature {
    std::vector<Symbol> symbols;
    int arity_cap = 8;

    int find(const std::string& name) const;
    int size() const { return static_cast<int>(symbols.size()); }
    bool operator==(const Signature& o) const;
};

class Algebra {
public:
    Algebra(std::string name, int size, std::shared_ptr<const Signature> sig,
            std::vector<std::vector<Elem>> tables);

    const std::string& name() const { return name_; }
    int size() const { return size_; }
    const Signature& signature() const { return *sig_; }
    std::shared_ptr<const Signature> signature_ptr() const { return sig_; }
    const std::vector<Elem>& table(int sym) const { return tables_[sym]; }
    const std::vector<std::vector<Elem>>& tables() const { return tables_; }

    // first argument is most significant
    std::size_t index(const int* args, int arity) const;
    Elem apply(int sym, const int* args) const;
    Elem apply(int sym, std::initializer_list<int> args) const;

    // Tables of the derived P and p terms, filled by Catalog::attach.
    int P_arity = 0;
    std::vector<Elem> P_table;
    std::vector<Elem> p_table;
    Elem P(const Elem* args) const;
    Elem p(Elem x, Elem u, Elem y) const {
        return p_table[(static_cast<std::size_t>(x) * size_ + u) * size_ + y];
    }

    std::string key() const;  // structural fingerprint of the tables

private:
    std::string name_;
    int size_;
    std::shared_ptr<const Signature> sig_;
    std::vector<std::vector<Elem>> tables_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

struct Context {
    std::vector<AlgebraPtr> factors;
    int n() const { return static_cast<int>(factors.size()); }
    const Algebra& operator[](int i) const { return *factors[i]; }
    void check(const Tuple& t) const;
    Context project(const std::vector<int>& coords) const;
};

Tuple project(const Tuple& t, const std::vector<int>& coords);

// Coordinatewise application of a basic operation.
Tuple apply_op(const Context& ctx, int sym, const std::vector<const Tuple*>& args);
Tuple apply_P(const Context& ctx, const std::vector<const Tuple*>& args);
Tuple apply_p(const Context& ctx, const Tuple& x, const Tuple& u, const Tuple& y);

// Open-addressing hash set of fixed-length tuples with stable indices.
class TupleSet {
public:
    explicit TupleSet(int n = 0) : n_(n) {}
    int n() const { return n_; }
    std::size_t size() const { return count_; }
    const Elem* at(std::size_t i) const { return data_.data() + i * static_cast<std::size_t>(n_); }
    Tuple get(std::size_t i) const { return Tuple(at(i), at(i) + n_); }
    long find(const Elem* t) const;
    long find(const Tuple& t) const { return find(t.data()); }
    bool contains(const Tuple& t) const { return find(t) >= 0; }
    std::pair<std::size_t, bool> insert(const Elem* t);
    std::pair<std::size_t, bool> insert(const Tuple& t) { return insert(t.data()); }
    std::vector<Tuple> to_vector() const;

private:
    std::uint64_t hash(const Elem* t) const;
    void grow();

    int n_;
    std::size_t count_ = 0;
    std::vector<Elem> data_;
    std::vector<std::int64_t> slots_;
};

struct ClosureOptions {
    std::size_t cap = 10'000'000;
    double work_cap = 1e18;  // operation applications
    bool provenance = false;
    // Called for every new element; returning true stops the closure early.
    std::function<bool(const TupleSet&, std::size_t)> on_new;
};

struct Closure {
    TupleSet set;
    bool stopped = false;
    // provenance: op[i] = -1 for generator gen_index, else symbol
    std::vector<int> op;
    std::vector<int> gen_index;
    std::vector<std::size_t> arg_offset;
    std::vector<int> args;
    std::vector<int> arguments(std::size_t i, int arity) const;
};

// Subalgebra generated by gens, built in generation order (generators first).
Closure subalgebra_closure(const Context& ctx, const std::vector<Tuple>& gens,
                           const ClosureOptions& opt = {});

bool is_closed(const Context& ctx, const TupleSet& s);

// Subuniverse of a single algebra generated by a set of elements.
std::vector<int> subuniverse(const Algebra& a, const std::vector<int>& gens);
// All nonempty subuniverses, each sorted.
std::vector<std::vector<int>> all_subuniverses(const Algebra& a, std::size_t cap = 200000);

AlgebraPtr make_subalgebra(const Algebra& a, const std::vector<int>& universe,
                           const std::string& name);
AlgebraPtr make_product(const std::vector<AlgebraPtr>& fs, const std::string& name);

// Partition of 0..m-1 with each element labeled by the least member of its block.
using Partition = std::vector<int>;

Partition identity_partition(int m);
Partition full_partition(int m);
Partition canonical_partition(const std::vector<int>& block_id);
bool is_congruence(const Algebra& a, const Partition& p);
int block_count(const Partition& p);

struct Quotient {
    AlgebraPtr algebra;
    std::vector<int> map;  // natural projection
    std::vector<int> rep;  // least representative of each block
};

Quotient quotient(const Algebra& a, const Partition& theta, const std::string& name);

// Isomorphism search by backtracking; returns the bijection or empty.
std::vector<int> find_isomorphism(const Algebra& a, const Algebra& b);
bool isomorphic(const Algebra& a, const Algebra& b);

}  // namespace subpower
