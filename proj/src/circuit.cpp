#include "subpower/circuit.hpp"

namespace subpower {

std::size_t Circuit::KeyHash::operator()(const std::vector<int>& k) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int v : k) h = (h ^ static_cast<std::size_t>(v + 7)) * 0x100000001b3ull;
    return h;
}

Circuit::Circuit(int inputs) : inputs_(inputs) {
    for (int i = 0; i < inputs; ++i) {
        Gate g;
        g.var = i;
        gates_.push_back(g);
    }
}

int Circuit::input(int i) const {
    if (i < 0 || i >= inputs_) throw Error("circuit input out of range");
    return i;
}

int Circuit::apply(int sym, std::vector<int> args) {
    for (int a : args)
        if (a < 0 || a >= size()) throw Error("gate operand out of range");
    std::vector<int> key;
    key.reserve(args.size() + 1);
    key.push_back(sym);
    key.insert(key.end(), args.begin(), args.end());
    auto it = cons_.find(key);
    if (it != cons_.end()) return it->second;
    Gate g;
    g.sym = sym;
    g.args = std::move(args);
    gates_.push_back(std::move(g));
    int id = size() - 1;
    cons_.emplace(std::move(key), id);
    return id;
}

int Circuit::embed(const Circuit& src, int out, const std::vector<int>& in_map, const Circuit* P) {
    if (static_cast<int>(in_map.size()) != src.inputs()) throw Error("embed: input count mismatch");
    std::vector<char> need(src.size(), 0);
    need[out] = 1;
    for (int g = out; g >= 0; --g)
        if (need[g])
            for (int a : src.gates_[g].args) need[a] = 1;
    std::vector<int> map(src.size(), -1);
    for (int g = 0; g <= out; ++g) {
        if (!need[g]) continue;
        const Gate& gt = src.gates_[g];
        if (gt.sym == kInput) {
            map[g] = in_map[gt.var];
            continue;
        }
        std::vector<int> args;
        args.reserve(gt.args.size());
        for (int a : gt.args) args.push_back(map[a]);
        if (gt.sym == kPSym && P) {
            map[g] = embed(*P, P->output(), args, nullptr);
        } else {
            map[g] = apply(gt.sym, std::move(args));
        }
    }
    return map[out];
}

Circuit Circuit::pruned() const {
    Circuit c(inputs_);
    std::vector<int> in_map(inputs_);
    for (int i = 0; i < inputs_; ++i) in_map[i] = i;
    std::vector<int> outs;
    for (int o : outputs_) outs.push_back(c.embed(*this, o, in_map));
    c.outputs_ = outs;
    return c;
}

Circuit Circuit::inline_P(const Circuit& P) const {
    if (P.uses_P()) throw Error("P circuit must be over the basic signature");
    Circuit c(inputs_);
    std::vector<int> in_map(inputs_);
    for (int i = 0; i < inputs_; ++i) in_map[i] = i;
    std::vector<int> outs;
    for (int o : outputs_) outs.push_back(c.embed(*this, o, in_map, &P));
    c.outputs_ = outs;
    return c;
}

bool Circuit::uses_P() const {
    for (const Gate& g : gates_)
        if (g.sym == kPSym) return true;
    return false;
}

std::vector<Elem> Circuit::eval_all(const Algebra& a, const std::vector<Elem>& args) const {
    if (static_cast<int>(args.size()) != inputs_) throw Error("circuit arity mismatch");
    std::vector<Elem> val(gates_.size());
    int buf[64];
    Elem pbuf[64];
    for (std::size_t g = 0; g < gates_.size(); ++g) {
        const Gate& gt = gates_[g];
        if (gt.sym == kInput) {
            val[g] = args[gt.var];
        } else if (gt.sym == kPSym) {
            for (std::size_t j = 0; j < gt.args.size(); ++j) pbuf[j] = val[gt.args[j]];
            val[g] = a.P(pbuf);
        } else {
            for (std::size_t j = 0; j < gt.args.size(); ++j) buf[j] = val[gt.args[j]];
            val[g] = a.apply(gt.sym, buf);
        }
    }
    return val;
}

Elem Circuit::eval(const Algebra& a, const std::vector<Elem>& args) const {
    if (output() < 0) throw Error("circuit has no output");
    return eval_all(a, args)[output()];
}

Tuple Circuit::eval(const Context& ctx, const std::vector<Tuple>& args) const {
    if (static_cast<int>(args.size()) != inputs_) throw Error("circuit arity mismatch");
    const int n = ctx.n();
    for (const Tuple& t : args)
        if (static_cast<int>(t.size()) != n) throw Error("tuple length mismatch");
    Tuple out(n);
    std::vector<Elem> col(inputs_);
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < inputs_; ++i) col[i] = args[i][c];
        out[c] = eval(ctx[c], col);
    }
    return out;
}

Circuit Circuit::projection(int inputs, int var) {
    Circuit c(inputs);
    c.set_output(c.input(var));
    return c;
}

}  // namespace subpower

namespace subpower {

Circuit derivation_circuit(const Closure& cl, const Signature& sig, int gens, std::size_t idx) {
    if (cl.op.size() <= idx) throw Error("provenance missing");
    Circuit c(gens);
    std::vector<char> need(idx + 1, 0);
    need[idx] = 1;
    for (std::size_t i = idx + 1; i-- > 0;) {
        if (!need[i] || cl.op[i] < 0) continue;
        for (int a : cl.arguments(i, sig.symbols[cl.op[i]].arity)) need[a] = 1;
    }
    std::vector<int> gate(idx + 1, -1);
    for (std::size_t i = 0; i <= idx; ++i) {
        if (!need[i]) continue;
        if (cl.op[i] < 0) {
            gate[i] = c.input(cl.gen_index[i]);
        } else {
            std::vector<int> args;
            for (int a : cl.arguments(i, sig.symbols[cl.op[i]].arity)) args.push_back(gate[a]);
            gate[i] = c.apply(cl.op[i], std::move(args));
        }
    }
    c.set_output(gate[idx]);
    return c;
}

}  // namespace subpower
