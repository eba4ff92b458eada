// Command-line driver. Exit codes: 0 YES / pass, 1 NO / fail, 2 error.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "subpower/congruence.hpp"
#include "subpower/io.hpp"
#include "subpower/solvers.hpp"
#include "subpower/terms.hpp"

using namespace subpower;

namespace {

json partition_json(const Partition& p) { return partition_string(p); }

json analyze_one(const Catalog& cat, const Algebra& a) {
    auto an = cat.analysis(a);
    json j;
    j["name"] = a.name();
    j["size"] = a.size();
    j["congruences"] = an->lattice.elems.size();
    j["lattice"] = json::array();
    for (const auto& p : an->lattice.elems) j["lattice"].push_back(partition_json(p));
    j["edges"] = json::array();
    for (auto [lo, hi] : an->lattice.covers()) j["edges"].push_back({lo, hi});
    j["irr"] = json::array();
    for (const auto& e : an->irr) j["irr"].push_back({{"sigma", e.sigma}, {"cover", e.cover}});
    json si = {{"si", an->si.si}};
    if (an->si.si) {
        si["monolith"] = partition_json(an->si.mu);
        si["monolith_abelian"] = an->si.mu_abelian;
        si["centralizer"] = partition_json(an->si.rho);
        si["centralizer_abelian"] = an->si.rho_abelian;
    }
    j["si_profile"] = si;
    return j;
}

int cmd_analyze(const std::string& file, const std::string& only) {
    Catalog cat = load_catalog(file);
    json out;
    out["d"] = cat.d();
    out["algebras"] = json::array();
    bool hit = false;
    for (const auto& a : cat.algebras()) {
        if (!only.empty() && a->name() != only) continue;
        hit = true;
        out["algebras"].push_back(analyze_one(cat, *a));
    }
    if (!hit) throw Error("no algebra named " + only);
    std::vector<AlgebraPtr> sis;
    for (const auto& h : cat.hs()) {
        if (!only.empty() && cat.algebras()[h.base]->name() != only) continue;
        if (cat.analysis(*h.algebra)->si.si) sis.push_back(h.algebra);
    }
    json names = json::array();
    json matrix = json::array();
    for (const auto& x : sis) {
        names.push_back(x->name());
        json row = json::array();
        for (const auto& y : sis) row.push_back(check_similarity(cat, *x, *y));
        matrix.push_back(row);
    }
    out["similarity"] = {{"algebras", names}, {"matrix", matrix}};
    ResidualSmallness rs = check_residual_smallness(cat);
    out["residually_small"] = rs.small;
    if (!rs.small) out["offender"] = rs.offender;
    std::cout << out.dump(1) << "\n";
    return 0;
}

int cmd_verify_term(const std::string& file, const std::string& term, const std::string& role, int m, int n) {
    if (role != "parallelogram") throw Error("unknown term role " + role);
    if (m < 1 || n < 1) throw Error("row counts must be positive");
    Catalog cat = catalog_from_json(read_json_file(file));
    Circuit P = circuit_from_json(read_json_file(term), cat.signature());
    auto fail = check_parallelogram(cat.algebras(), P, m, n);
    if (!fail) {
        std::cout << "pass\n";
        return 0;
    }
    std::cout << "fail: algebra " << fail->algebra << " row " << fail->row << " assignment";
    for (Elem e : fail->assignment) std::cout << " " << static_cast<int>(e);
    std::cout << "\n";
    return 1;
}

int cmd_smp(const std::string& file, const std::string& instance, const std::string& method,
            const std::string& witness_out) {
    Catalog cat = load_catalog(file);
    SmpInstance inst = instance_from_json(read_json_file(instance));
    Solver solver(cat);
    SmpAnswer ans = solver.solve(inst, parse_method(method), !witness_out.empty());
    std::string wf;
    if (ans.yes && ans.witness) {
        write_json_file(witness_out, circuit_to_json(*ans.witness, cat.signature()));
        wf = witness_out;
    }
    std::cout << answer_to_json(ans, wf).dump() << "\n";
    return ans.yes ? 0 : 1;
}

int cmd_compact_rep(const std::string& file, const std::string& instance, const std::string& method,
                    const std::string& out) {
    Catalog cat = load_catalog(file);
    SmpInstance inst = instance_from_json(read_json_file(instance));
    Context ctx = cat.context(inst.factors);
    for (const auto& g : inst.generators) ctx.check(g);
    if (inst.generators.empty()) throw Error("empty generator set");
    if (ctx.n() < cat.d())
        throw Error("compact representations need n >= d (n = " + std::to_string(ctx.n()) +
                    ", d = " + std::to_string(cat.d()) + "); use smp, which answers by closure");
    Solver solver(cat);
    std::optional<Rep> R;
    if (method == "direct") {
        R.emplace(solver.compact_rep(ctx, inst.generators));
    } else if (method == "via-smp") {
        SmpOracle oracle;
        if (solver.residually_small())
            oracle = [&](const Context& c, const std::vector<Tuple>& g, const Tuple& t) { return solver.rs(c, g, t); };
        else
            oracle = [&](const Context& c, const std::vector<Tuple>& g, const Tuple& t) { return solver.compact(c, g, t); };
        R.emplace(compact_rep_via_smp(ctx, inst.generators, cat.d(), oracle));
    } else {
        throw Error("unknown compact-rep method " + method + " (expected direct or via-smp)");
    }
    json j = rep_to_json(*R);
    if (out.empty())
        std::cout << j.dump() << "\n";
    else
        write_json_file(out, j);
    return 0;
}

struct BenchRow {
    int n;
    std::string method, verdict, size;
    long long micros;
};

int cmd_bench(const std::string& file, const std::string& family, int n_max, unsigned seed, bool omit_timing,
              int brute_max) {
    Catalog cat = load_catalog(file);
    if (family != "coset" && family != "random") throw Error("unknown family " + family + " (expected coset or random)");
    if (n_max < 1) throw Error("--n-max must be positive");
    Solver solver(cat);
    std::mt19937 rng(seed);
    AlgebraPtr base;
    for (const auto& a : cat.algebras())
        if (a->size() >= 2) {
            base = a;
            break;
        }
    if (!base) throw Error("the coset family needs an algebra with at least two elements");
    std::cout << "n,method,verdict,micros,closure_size_or_dash\n";
    bool brute_capped = false;
    auto emit = [&](const BenchRow& r) {
        std::cout << r.n << ',' << r.method << ',' << r.verdict << ',';
        if (omit_timing)
            std::cout << '-';
        else
            std::cout << r.micros;
        std::cout << ',' << r.size << '\n';
    };
    for (int n = 1; n <= n_max; ++n) {
        SmpInstance inst;
        if (family == "coset") {
            // generators e_1..e_n; the target has two ones, so it lies outside the odd coset
            inst.factors.assign(n, base->name());
            for (int i = 0; i < n; ++i) {
                Tuple e(n, 0);
                e[i] = 1;
                inst.generators.push_back(e);
            }
            inst.target.assign(n, 0);
            for (int i = 0; i < std::min(n, 2); ++i) inst.target[i] = 1;
            if (n == 1) inst.target[0] = 0;
        } else {
            const auto& algs = cat.algebras();
            for (int i = 0; i < n; ++i) inst.factors.push_back(algs[rng() % algs.size()]->name());
            Context ctx = cat.context(inst.factors);
            const int k = 1 + static_cast<int>(rng() % 3);
            for (int g = 0; g < k; ++g) {
                Tuple t(n);
                for (int i = 0; i < n; ++i) t[i] = static_cast<Elem>(rng() % ctx[i].size());
                inst.generators.push_back(t);
            }
            inst.target.resize(n);
            for (int i = 0; i < n; ++i) inst.target[i] = static_cast<Elem>(rng() % ctx[i].size());
        }
        if (n >= cat.d()) {
            SmpAnswer a = solver.solve(inst, Method::Compact);
            emit({n, a.method, a.yes ? "YES" : "NO", "-", a.micros});
        }
        BenchRow br{n, "brute", "cap", "-", 0};
        if (!brute_capped && n <= brute_max) {
            try {
                SmpAnswer a = solver.solve(inst, Method::Brute);
                br = {n, "brute", a.yes ? "YES" : "NO", std::to_string(a.closure_size), a.micros};
            } catch (const CapExceeded&) {
                // the coset closures grow with n, so later sizes are capped as well
                if (family == "coset") brute_capped = true;
            }
        }
        emit(br);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subpower membership tools"};
    app.require_subcommand(1);
    std::string algebras, instance, method, rep_method, witness, term, role = "parallelogram", only, out, family;
    int rows_upper = 1, rows_lower = 1, n_max = 10, brute_max = 1 << 20;
    unsigned seed = 1;
    bool omit_timing = false;

    auto* an = app.add_subcommand("analyze", "congruence and similarity report as JSON");
    an->add_option("--algebras", algebras, "algebra file")->required();
    an->add_option("--algebra", only, "restrict to one algebra");

    auto* vt = app.add_subcommand("verify-term", "check a term against identities");
    vt->add_option("--algebras", algebras)->required();
    vt->add_option("--term", term)->required();
    vt->add_option("--role", role);
    vt->add_option("--rows-upper", rows_upper);
    vt->add_option("--rows-lower", rows_lower);

    auto* smp = app.add_subcommand("smp", "subpower membership");
    smp->add_option("--algebras", algebras)->required();
    smp->add_option("--instance", instance)->required();
    smp->add_option("--method", method, "auto, brute, compact, reduction or rs")->default_val("auto");
    smp->add_option("--witness", witness, "write a witness circuit here on YES");

    auto* cr = app.add_subcommand("compact-rep", "compact representation as JSON");
    cr->add_option("--algebras", algebras)->required();
    cr->add_option("--instance", instance)->required();
    cr->add_option("--method", rep_method, "direct or via-smp")->default_val("direct");
    cr->add_option("--out", out, "output file (stdout otherwise)");

    auto* bench = app.add_subcommand("bench", "timing table as CSV");
    bench->add_option("--algebras", algebras)->required();
    bench->add_option("--family", family, "coset or random")->default_val("coset");
    bench->add_option("--n-max", n_max);
    bench->add_option("--seed", seed);
    bench->add_option("--brute-max", brute_max, "skip brute force above this n");
    bench->add_flag("--omit-timing", omit_timing, "print '-' for micros so output is reproducible");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (*an) return cmd_analyze(algebras, only);
        if (*vt) return cmd_verify_term(algebras, term, role, rows_upper, rows_lower);
        if (*smp) return cmd_smp(algebras, instance, method, witness);
        if (*cr) return cmd_compact_rep(algebras, instance, rep_method, out);
        if (*bench) return cmd_bench(algebras, family, n_max, seed, omit_timing, brute_max);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
