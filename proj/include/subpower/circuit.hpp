#pragma once

#include <unordered_map>
#include <vector>

#include "subpower/algebra.hpp"

namespace subpower {

// Gate symbols: >= 0 are signature symbols, kInput marks an input node and
// kPSym applies the catalog's parallelogram term.
constexpr int kInput = -1;
constexpr int kPSym = -2;

struct Gate {
    int sym = kInput;
    int var = -1;
    std::vector<int> args;
};

class Circuit {
public:
    explicit Circuit(int inputs = 0);

    int inputs() const { return inputs_; }
    int size() const { return static_cast<int>(gates_.size()); }
    int gate_count() const { return size() - inputs_; }
    const Gate& gate(int id) const { return gates_[id]; }
    const std::vector<Gate>& gates() const { return gates_; }

    int input(int i) const;
    int apply(int sym, std::vector<int> args);

    int output() const { return outputs_.empty() ? -1 : outputs_[0]; }
    const std::vector<int>& outputs() const { return outputs_; }
    void set_output(int id) { outputs_ = {id}; }
    void set_outputs(std::vector<int> ids) { outputs_ = std::move(ids); }

    // Copies the cone of src's output `out` into this circuit, with src input i
    // mapped to gate in_map[i]. When P is given, kPSym gates are expanded to it.
    int embed(const Circuit& src, int out, const std::vector<int>& in_map,
              const Circuit* P = nullptr);

    // Copy keeping only gates reachable from the outputs.
    Circuit pruned() const;
    Circuit inline_P(const Circuit& P) const;
    bool uses_P() const;

    // kPSym gates read the algebra's attached P table.
    Elem eval(const Algebra& a, const std::vector<Elem>& args) const;
    std::vector<Elem> eval_all(const Algebra& a, const std::vector<Elem>& args) const;
    Tuple eval(const Context& ctx, const std::vector<Tuple>& args) const;

    static Circuit projection(int inputs, int var);

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<int>& k) const;
    };
    int inputs_;
    std::vector<Gate> gates_;
    std::vector<int> outputs_;
    std::unordered_map<std::vector<int>, int, KeyHash> cons_;
};

// Circuit over the generators computing element idx of a closure built with provenance.
Circuit derivation_circuit(const Closure& cl, const Signature& sig, int gens, std::size_t idx);

}  // namespace subpower
