#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "subpower/builtin.hpp"
#include "subpower/congruence.hpp"
#include "subpower/solvers.hpp"

using namespace subpower;

namespace {

GroupTable cyclic(int m) {
    GroupTable g;
    g.add.assign(m, std::vector<int>(m));
    g.neg.resize(m);
    for (int x = 0; x < m; ++x) {
        g.neg[x] = (m - x) % m;
        for (int y = 0; y < m; ++y) g.add[x][y] = (x + y) % m;
    }
    return g;
}

// subgroup generated by H, by closing under addition
std::set<std::vector<int>> subgroup(const std::vector<GroupTable>& gs, const std::vector<std::vector<int>>& H) {
    const std::size_t n = gs.size();
    std::vector<int> zero(n);
    for (std::size_t j = 0; j < n; ++j) zero[j] = gs[j].zero;
    std::set<std::vector<int>> S{zero};
    std::vector<std::vector<int>> work{zero};
    while (!work.empty()) {
        auto x = work.back();
        work.pop_back();
        for (const auto& h : H) {
            std::vector<int> y(n);
            for (std::size_t j = 0; j < n; ++j) y[j] = gs[j].add[x[j]][h[j]];
            if (S.insert(y).second) work.push_back(y);
        }
    }
    return S;
}

std::vector<Tuple> random_gens(std::mt19937& rng, const Context& ctx, int k) {
    std::vector<Tuple> g(k, Tuple(ctx.n()));
    for (auto& x : g)
        for (int i = 0; i < ctx.n(); ++i) x[i] = static_cast<Elem>(rng() % ctx[i].size());
    return g;
}

}  // namespace

TEST_CASE("abelian sift agrees with subgroup enumeration") {
    std::mt19937 rng(1);
    for (int t = 0; t < 200; ++t) {
        int n = 1 + rng() % 4;
        std::vector<GroupTable> gs;
        for (int j = 0; j < n; ++j) gs.push_back(cyclic(2 + rng() % 5));
        std::vector<std::vector<int>> H(rng() % 4, std::vector<int>(n));
        for (auto& h : H)
            for (int j = 0; j < n; ++j) h[j] = rng() % gs[j].size();
        auto S = subgroup(gs, H);
        std::vector<int> b(n);
        for (int rep = 0; rep < 8; ++rep) {
            for (int j = 0; j < n; ++j) b[j] = rng() % gs[j].size();
            CHECK(abelian_sift(gs, H, b) == (S.count(b) > 0));
        }
    }
}

TEST_CASE("abelian sift rejects bad tables") {
    GroupTable g = cyclic(3);
    g.add[1][2] = 1;
    CHECK_THROWS_AS(abelian_sift({g}, {}, {0}), Error);
    CHECK_THROWS_AS(abelian_sift({cyclic(2)}, {{1, 0}}, {0}), Error);
}

TEST_CASE("abelian sift on the trivial group") {
    CHECK(abelian_sift({cyclic(1), cyclic(1)}, {}, {0, 0}));
    CHECK(abelian_sift({cyclic(4)}, {}, {0}));
    CHECK_FALSE(abelian_sift({cyclic(4)}, {}, {1}));
}

TEST_CASE("every method agrees with the oracle") {
    std::mt19937 rng(21);
    for (const char* name : {"Z2", "Z3", "Z4", "Z2xZ2", "S3", "L2lat", "L2", "Z2,Z3"}) {
        Catalog cat = builtin_catalog(name);
        Solver solver(cat);
        const bool rs = solver.residually_small();
        for (int t = 0; t < 25; ++t) {
            int n = 1 + rng() % 4;
            std::vector<std::string> fs;
            for (int i = 0; i < n; ++i) fs.push_back(cat.algebras()[rng() % cat.algebras().size()]->name());
            Context ctx = cat.context(fs);
            auto g = random_gens(rng, ctx, 1 + rng() % 3);
            auto B = oracle::closure(ctx.factors, g);
            for (const auto& b : oracle::product(ctx.factors)) {
                const bool truth = B.count(b) > 0;
                CAPTURE(name);
                CHECK(solver.brute(ctx, g, b) == truth);
                CHECK(solver.compact(ctx, g, b) == truth);
                CHECK(solver.reduction(ctx, g, b) == truth);
                if (rs) CHECK(solver.rs(ctx, g, b) == truth);
            }
        }
    }
}

TEST_CASE("odd coset answers") {
    Catalog z2 = builtin_catalog("Z2");
    Solver solver(z2);
    SmpInstance in{{"Z2", "Z2", "Z2"}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {1, 1, 1}};
    for (Method m : {Method::Auto, Method::Brute, Method::Compact, Method::Reduction, Method::Rs}) {
        SmpAnswer a = solver.solve(in, m, true);
        CHECK(a.yes);
        CHECK(a.method == (m == Method::Auto ? "compact" : method_name(m)));
    }
    SmpAnswer w = solver.solve(in, Method::Compact, true);
    REQUIRE(w.witness.has_value());
    Context ctx = z2.context(in.factors);
    CHECK(w.witness->eval(ctx, in.generators) == in.target);
    in.target = {1, 1, 0};
    for (Method m : {Method::Brute, Method::Compact, Method::Reduction, Method::Rs}) CHECK_FALSE(solver.solve(in, m).yes);
}

TEST_CASE("small n goes to brute force") {
    Catalog lat = builtin_catalog("L2lat");
    Solver solver(lat);
    SmpInstance in{{"L2lat", "L2lat"}, {{0, 1}}, {0, 1}};
    SmpAnswer a = solver.solve(in, Method::Compact);
    CHECK(a.method == "brute");
    CHECK(a.yes);
    in.target = {1, 0};
    CHECK_FALSE(solver.solve(in, Method::Reduction).yes);
}

TEST_CASE("instance validation") {
    Catalog z2 = builtin_catalog("Z2");
    Solver solver(z2);
    CHECK_THROWS_AS(solver.solve({{"Z2", "Z9"}, {{0, 1}}, {0, 1}}, Method::Auto), Error);
    CHECK_THROWS_AS(solver.solve({{"Z2", "Z2"}, {}, {0, 1}}, Method::Auto), Error);
    CHECK_THROWS_AS(solver.solve({{"Z2", "Z2"}, {{0, 1, 1}}, {0, 1}}, Method::Auto), Error);
    CHECK_THROWS_AS(solver.solve({{"Z2", "Z2"}, {{0, 2}}, {0, 1}}, Method::Auto), Error);
    CHECK_THROWS_AS(parse_method("fast"), Error);
}

TEST_CASE("rs refuses catalogs that are not residually small") {
    Catalog q8 = builtin_catalog("Q8");
    Solver solver(q8);
    CHECK_FALSE(solver.residually_small());
    SmpInstance in{{"Q8", "Q8"}, {{1, 2}}, {1, 2}};
    CHECK_THROWS_WITH_AS(solver.solve(in, Method::Rs), doctest::Contains("Q8"), Error);
    // compact and reduction still work
    CHECK(solver.solve(in, Method::Compact).yes);
    CHECK(solver.solve(in, Method::Reduction).yes);
}

TEST_CASE("d-coherence") {
    Catalog z2 = builtin_catalog("Z2");
    Solver solver(z2);
    Context c3 = z2.context({"Z2", "Z2", "Z2"});
    std::vector<Tuple> coset{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(solver.check_d_coherent(c3, coset, {1, 1, 1}).ok);
    // a B that is not subdirect fails condition 2
    CHECK(solver.check_d_coherent(c3, {{0, 0, 0}}, {0, 0, 0}).failed == 2);
    CHECK(solver.check_d_coherent(z2.context({"Z2", "Z2"}), {{0, 0}}, {0, 0}).failed == 1);
    // the diagonal of Z2^3 with a target outside it fails on a pair
    CHECK(solver.check_d_coherent(c3, {{0, 0, 0}, {1, 1, 1}}, {0, 0, 1}).failed == 4);
    Catalog zz = builtin_catalog("Z2xZ2");
    Solver s2(zz);
    // Z2xZ2 is not subdirectly irreducible
    CHECK(s2.check_d_coherent(zz.context({"Z2xZ2", "Z2xZ2", "Z2xZ2"}), {{0, 1, 2}, {1, 2, 3}, {3, 0, 1}, {2, 3, 0}}, {0, 0, 0}).failed == 3);
    CHECK(solver.solve_smpd_rs(c3, coset, {1, 1, 1}));
    CHECK_FALSE(solver.solve_smpd_rs(c3, coset, {0, 1, 1}));
}

TEST_CASE("structure classes of the odd coset") {
    Catalog z2 = builtin_catalog("Z2");
    Solver solver(z2);
    Context c3 = z2.context({"Z2", "Z2", "Z2"});
    std::vector<Tuple> coset{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    StructureData sd = solver.structure(c3, coset);
    CHECK(sd.kept.size() == 3);
    CHECK(sd.W.size() == 3);
    REQUIRE(sd.classes.size() == 1);
    CHECK(sd.classes[0].size() == 3);
    auto cond = solver.structure_condition(c3, coset, sd);
    CHECK(cond({1, 1, 1}));
    CHECK_FALSE(cond({0, 1, 1}));
}
