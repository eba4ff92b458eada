#include "subpower/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "subpower/terms.hpp"

namespace subpower {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error("malformed JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(1) << "\n";
}

Catalog catalog_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("signature") || !j.contains("algebras"))
            throw Error("malformed JSON: algebra file needs \"signature\" and \"algebras\"");
        auto sig = std::make_shared<Signature>();
        std::set<std::string> names;
        for (const auto& s : j.at("signature")) {
            Symbol sym{s.at("symbol").get<std::string>(), s.at("arity").get<int>()};
            if (sym.arity < 0 || sym.arity > sig->arity_cap)
                throw Error("arity of " + sym.name + " exceeds the cap " + std::to_string(sig->arity_cap));
            if (!names.insert(sym.name).second) throw Error("duplicate symbol " + sym.name);
            sig->symbols.push_back(sym);
        }
        Catalog cat(sig);
        for (const auto& a : j.at("algebras")) {
            std::string name = a.at("name").get<std::string>();
            int size = a.at("size").get<int>();
            std::vector<std::vector<Elem>> tabs;
            for (const auto& s : sig->symbols) {
                if (!a.at("ops").contains(s.name)) throw Error("algebra " + name + " lacks the table for " + s.name);
                std::vector<Elem> t;
                for (const auto& v : a.at("ops").at(s.name)) {
                    int x = v.get<int>();
                    if (x < 0 || x >= size)
                        throw Error("algebra " + name + ": entry out of range in " + s.name);
                    t.push_back(static_cast<Elem>(x));
                }
                tabs.push_back(std::move(t));
            }
            cat.add(std::make_shared<Algebra>(name, size, sig, std::move(tabs)));
        }
        if (j.contains("parallelogram")) {
            const auto& p = j.at("parallelogram");
            cat.configure(circuit_from_json(p.at("term"), *sig), p.at("d").get<int>());
        }
        if (j.contains("difference_term")) cat.set_difference_term(circuit_from_json(j.at("difference_term"), *sig));
        return cat;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed JSON: ") + e.what());
    }
}

Catalog load_catalog(const std::string& path) {
    Catalog cat = catalog_from_json(read_json_file(path));
    if (!cat.configured()) configure_by_search(cat);
    return cat;
}

void configure_by_search(Catalog& cat, int max_d) {
    if (cat.algebras().empty()) throw Error("catalog has no algebras");
    AlgebraPtr prod = cat.algebras().size() == 1 ? cat.algebras()[0] : make_product(cat.algebras(), "K");
    for (int d = 2; d <= max_d; ++d) {
        TermSearchResult r = search_parallelogram_term(*prod, d);
        if (r.found) {
            cat.configure(r.term, d);
            return;
        }
    }
    throw Error("no parallelogram term found for d <= " + std::to_string(max_d) +
                "; give one under \"parallelogram\" in the algebra file");
}

json catalog_to_json(const Catalog& cat) {
    json j;
    j["signature"] = json::array();
    for (const auto& s : cat.signature().symbols) j["signature"].push_back({{"symbol", s.name}, {"arity", s.arity}});
    j["algebras"] = json::array();
    for (const auto& a : cat.algebras()) {
        json ops = json::object();
        for (int s = 0; s < cat.signature().size(); ++s) {
            json t = json::array();
            for (Elem v : a->table(s)) t.push_back(static_cast<int>(v));
            ops[cat.signature().symbols[s].name] = t;
        }
        j["algebras"].push_back({{"name", a->name()}, {"size", a->size()}, {"ops", ops}});
    }
    if (cat.configured()) j["parallelogram"] = {{"d", cat.d()}, {"term", circuit_to_json(cat.P(), cat.signature())}};
    if (cat.difference_term_override())
        j["difference_term"] = circuit_to_json(*cat.difference_term_override(), cat.signature());
    return j;
}

Circuit circuit_from_json(const json& j, const Signature& sig) {
    try {
        Circuit c(j.at("inputs").get<int>());
        std::vector<int> id(c.inputs());
        for (int i = 0; i < c.inputs(); ++i) id[i] = i;
        for (const auto& g : j.at("gates")) {
            std::string op = g.at("op").get<std::string>();
            int sym = op == "P" && sig.find("P") < 0 ? kPSym : sig.find(op);
            if (sym == -1) throw Error("unknown operation " + op + " in term");
            std::vector<int> args;
            for (const auto& a : g.at("args")) {
                int x = a.get<int>();
                if (x < 0 || x >= static_cast<int>(id.size())) throw Error("gate argument out of range in term");
                args.push_back(id[x]);
            }
            if (sym >= 0 && static_cast<int>(args.size()) != sig.symbols[sym].arity)
                throw Error("arity mismatch for " + op + " in term");
            id.push_back(c.apply(sym, std::move(args)));
        }
        int out = j.at("output").get<int>();
        if (out < 0 || out >= static_cast<int>(id.size())) throw Error("term output out of range");
        c.set_output(id[out]);
        return c;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed JSON in term: ") + e.what());
    }
}

json circuit_to_json(const Circuit& c, const Signature& sig) {
    json j;
    j["inputs"] = c.inputs();
    j["gates"] = json::array();
    for (int g = c.inputs(); g < c.size(); ++g) {
        const Gate& gt = c.gate(g);
        j["gates"].push_back({{"op", gt.sym == kPSym ? std::string("P") : sig.symbols[gt.sym].name}, {"args", gt.args}});
    }
    j["output"] = c.output();
    return j;
}

namespace {

std::vector<Tuple> tuples_from_json(const json& j, const char* what) {
    std::vector<Tuple> out;
    for (const auto& t : j) {
        Tuple x;
        for (const auto& v : t) {
            int e = v.get<int>();
            if (e < 0 || e > 255) throw Error(std::string("entry out of range in ") + what);
            x.push_back(static_cast<Elem>(e));
        }
        out.push_back(std::move(x));
    }
    return out;
}

json tuple_json(const Tuple& t) {
    json a = json::array();
    for (Elem e : t) a.push_back(static_cast<int>(e));
    return a;
}

}  // namespace

SmpInstance instance_from_json(const json& j) {
    try {
        SmpInstance inst;
        inst.factors = j.at("factors").get<std::vector<std::string>>();
        inst.generators = tuples_from_json(j.at("generators"), "generators");
        inst.target = tuples_from_json(json::array({j.at("target")}), "target")[0];
        return inst;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed instance: ") + e.what());
    }
}

json instance_to_json(const SmpInstance& inst) {
    json g = json::array();
    for (const auto& t : inst.generators) g.push_back(tuple_json(t));
    return {{"factors", inst.factors}, {"generators", g}, {"target", tuple_json(inst.target)}};
}

json answer_to_json(const SmpAnswer& a, const std::string& witness_file) {
    json j = {{"verdict", a.yes ? "YES" : "NO"}, {"method", a.method}, {"micros", a.micros}};
    if (!witness_file.empty()) j["witness_file"] = witness_file;
    if (!a.note.empty()) j["note"] = a.note;
    return j;
}

json rep_to_json(const Rep& R) {
    json j;
    j["tuples"] = json::array();
    for (const auto& t : R.tuples()) j["tuples"].push_back(tuple_json(t));
    j["local"] = json::array();
    for (int I = 0; I < static_cast<int>(R.subsets().size()); ++I) {
        std::vector<std::pair<std::vector<Elem>, int>> rows;
        for (const auto& [c, id] : R.local_map(I)) rows.emplace_back(R.decode(I, c), id);
        std::sort(rows.begin(), rows.end());
        for (const auto& [v, id] : rows) {
            std::vector<int> proj(v.begin(), v.end());
            j["local"].push_back({{"I", R.subsets()[I]}, {"proj", proj}, {"tuple", id}});
        }
    }
    j["forks"] = json::array();
    for (int c = 0; c < R.n(); ++c) {
        const int A = R.context()[c].size();
        for (int g = 0; g < A; ++g)
            for (int dl = 0; dl < A; ++dl) {
                ForkPair f = R.fork(c, g, dl);
                if (f.present()) j["forks"].push_back({{"m", c}, {"gamma", g}, {"delta", dl}, {"pair", {f.u, f.uhat}}});
            }
    }
    return j;
}

void validate_rep_json(const json& j) {
    auto fail = [](const std::string& m) { throw Error("rep file: " + m); };
    if (!j.is_object() || !j.contains("tuples") || !j.contains("local") || !j.contains("forks"))
        fail("needs tuples, local and forks");
    const auto& ts = j.at("tuples");
    if (!ts.is_array()) fail("tuples must be an array");
    std::size_t n = ts.empty() ? 0 : ts[0].size();
    for (const auto& t : ts) {
        if (!t.is_array() || t.size() != n) fail("tuples must be arrays of one length");
        for (const auto& v : t)
            if (!v.is_number_integer() || v.get<int>() < 0) fail("tuple entries must be nonnegative integers");
    }
    const int count = static_cast<int>(ts.size());
    auto id_ok = [&](const json& v) { return v.is_number_integer() && v.get<int>() >= 0 && v.get<int>() < count; };
    for (const auto& l : j.at("local")) {
        if (!l.contains("I") || !l.contains("proj") || !l.contains("tuple")) fail("local entries need I, proj, tuple");
        if (l.at("I").size() != l.at("proj").size()) fail("I and proj differ in length");
        if (!id_ok(l.at("tuple"))) fail("local tuple id out of range");
        const auto& t = ts[l.at("tuple").get<int>()];
        for (std::size_t q = 0; q < l.at("I").size(); ++q) {
            int c = l.at("I")[q].get<int>();
            if (c < 0 || c >= static_cast<int>(n)) fail("coordinate out of range");
            if (t[c] != l.at("proj")[q]) fail("local witness does not project to proj");
        }
    }
    for (const auto& f : j.at("forks")) {
        if (!f.contains("m") || !f.contains("gamma") || !f.contains("delta") || !f.contains("pair"))
            fail("fork entries need m, gamma, delta, pair");
        const auto& p = f.at("pair");
        if (!p.is_array() || p.size() != 2 || !id_ok(p[0]) || !id_ok(p[1])) fail("fork pair ids out of range");
        int m = f.at("m").get<int>();
        if (m < 0 || m >= static_cast<int>(n)) fail("fork coordinate out of range");
        const auto& u = ts[p[0].get<int>()];
        const auto& uh = ts[p[1].get<int>()];
        for (int c = 0; c < m; ++c)
            if (u[c] != uh[c]) fail("fork pair differs before its coordinate");
        if (u[m] != f.at("gamma") || uh[m] != f.at("delta")) fail("fork pair does not end in (gamma, delta)");
    }
}

}  // namespace subpower
