#include <doctest.h>

#include <set>

#include "oracle.hpp"
#include "subpower/builtin.hpp"
#include "subpower/congruence.hpp"

using namespace subpower;

namespace {

std::vector<AlgebraPtr> catalog_algebras() {
    std::vector<AlgebraPtr> out;
    for (const char* n : {"Z2", "Z3", "Z4", "Z2xZ2", "S3", "Q8", "L2lat", "L2"}) {
        Catalog cat = builtin_catalog(n);
        for (const auto& a : cat.algebras()) out.push_back(a);
    }
    return out;
}

}  // namespace

TEST_CASE("congruence lattices match partition enumeration") {
    for (const auto& a : catalog_algebras()) {
        CAPTURE(a->name());
        auto lat = congruence_lattice(*a);
        std::set<Partition> mine(lat.elems.begin(), lat.elems.end());
        std::set<Partition> want;
        for (const auto& p : oracle::congruences(*a)) want.insert(canonical_partition(p));
        CHECK(mine == want);
        CHECK(is_identity(lat.elems[lat.bottom()]));
        CHECK(is_full(lat.elems[lat.top()]));
    }
}

TEST_CASE("frozen lattice sizes") {
    CHECK(congruence_lattice(*builtin_catalog("Z4").get("Z4")).elems.size() == 3);
    CHECK(congruence_lattice(*builtin_catalog("Z2xZ2").get("Z2xZ2")).elems.size() == 5);
    CHECK(congruence_lattice(*builtin_catalog("S3").get("S3")).elems.size() == 3);
    // normal subgroups of Q8: 1, Z(Q8), three of order 4, Q8
    CHECK(congruence_lattice(*builtin_catalog("Q8").get("Q8")).elems.size() == 6);
}

TEST_CASE("commutator is below the meet and detects centrality") {
    for (const char* name : {"Z4", "S3", "Q8", "Z2xZ2", "L2lat"}) {
        Catalog cat = builtin_catalog(name);
        const Algebra& a = *cat.algebras()[0];
        CAPTURE(a.name());
        auto lat = congruence_lattice(a);
        const Partition zero = lat.elems[0];
        for (const auto& al : lat.elems) {
            Partition c0 = centralizer(a, lat, al);
            for (const auto& be : lat.elems) {
                Partition c = commutator(a, al, be);
                CHECK(leq(c, meet(al, be)));
                CHECK(c == commutator(a, be, al));
                CHECK((c == zero) == leq(be, c0));
            }
        }
    }
}

TEST_CASE("commutator on groups is the group commutator") {
    Catalog s3 = builtin_catalog("S3");
    const Algebra& a = *s3.get("S3");
    auto lat = congruence_lattice(a);
    const Partition one = lat.elems.back();
    // [S3, S3] = A3, which has index 2
    CHECK(block_count(commutator(a, one, one)) == 2);
    Catalog q8 = builtin_catalog("Q8");
    const Algebra& q = *q8.get("Q8");
    auto ql = congruence_lattice(q);
    // [Q8, Q8] is the center, of order 2
    CHECK(block_count(commutator(q, ql.elems.back(), ql.elems.back())) == 4);
}

TEST_CASE("SI profiles") {
    Catalog z4 = builtin_catalog("Z4");
    auto an = z4.analysis(*z4.get("Z4"));
    CHECK(an->si.si);
    CHECK(an->si.mu_abelian);
    CHECK(is_full(an->si.rho));
    Catalog z2z2 = builtin_catalog("Z2xZ2");
    CHECK_FALSE(z2z2.analysis(*z2z2.get("Z2xZ2"))->si.si);
    Catalog s3 = builtin_catalog("S3");
    auto as = s3.analysis(*s3.get("S3"));
    CHECK(as->si.si);
    CHECK(as->si.mu_abelian);
    CHECK(as->si.rho == as->si.mu);
    CHECK(as->si.rho_abelian);
    Catalog q8 = builtin_catalog("Q8");
    auto aq = q8.analysis(*q8.get("Q8"));
    CHECK(aq->si.si);
    CHECK(aq->si.mu_abelian);
    CHECK_FALSE(aq->si.rho_abelian);
}

TEST_CASE("meet irreducibles have unique covers") {
    for (const auto& a : catalog_algebras()) {
        auto lat = congruence_lattice(*a);
        auto irr = meet_irreducibles(lat);
        for (const auto& e : irr) {
            int count = 0;
            for (auto [lo, hi] : lat.covers())
                if (lo == e.sigma) {
                    ++count;
                    CHECK(hi == e.cover);
                }
            CHECK(count == 1);
        }
    }
}

TEST_CASE("similarity is reflexive and symmetric on the SIs") {
    for (const char* name : {"Z4", "S3", "Z2,Z3"}) {
        Catalog cat = builtin_catalog(name);
        std::vector<AlgebraPtr> sis;
        for (const auto& h : cat.hs())
            if (cat.analysis(*h.algebra)->si.si) sis.push_back(h.algebra);
        for (const auto& x : sis) {
            CHECK(check_similarity(cat, *x, *x));
            for (const auto& y : sis) CHECK(check_similarity(cat, *x, *y) == check_similarity(cat, *y, *x));
        }
    }
    Catalog zz = builtin_catalog("Z2,Z3");
    CHECK_FALSE(check_similarity(zz, *zz.get("Z2"), *zz.get("Z3")));
    Catalog z4 = builtin_catalog("Z4");
    // Z4 and its quotient Z2 are similar
    for (const auto& h : z4.hs())
        if (h.algebra->size() == 2) CHECK(check_similarity(z4, *z4.get("Z4"), *h.algebra));
}

TEST_CASE("residual smallness") {
    for (const char* name : {"Z2", "Z3", "Z4", "S3", "L2lat"}) CHECK(check_residual_smallness(builtin_catalog(name)).small);
    auto q = check_residual_smallness(builtin_catalog("Q8"));
    CHECK_FALSE(q.small);
    CHECK(q.offender == "Q8");
}

TEST_CASE("induced abelian groups") {
    Catalog z4 = builtin_catalog("Z4");
    const Algebra& a = *z4.get("Z4");
    Circuit d = find_difference_term(z4);
    auto lat = congruence_lattice(a);
    InducedGroup g = induced_abelian_group(a, lat.elems.back(), 1, d);
    REQUIRE(g.block.size() == 4);
    CHECK(g.block[g.zero] == 1);
    // x + y = x - 1 + y, so (2 + 3) = 4 = 0
    CHECK(g.block[g.add[g.pos[2]][g.pos[3]]] == 0);
    InducedGroup t = induced_abelian_group(a, lat.elems.front(), 2, d);
    CHECK(t.block == std::vector<int>{2});
}

TEST_CASE("linearity of terms on abelian blocks") {
    // g(x) - g(o) is additive on the block of o for every basic operation
    Catalog cat = builtin_catalog("Z4");
    const Algebra& a = *cat.get("Z4");
    Circuit d = find_difference_term(cat);
    auto lat = congruence_lattice(a);
    for (const auto& alpha : lat.elems) {
        for (int o = 0; o < a.size(); ++o) {
            InducedGroup g = induced_abelian_group(a, alpha, o, d);
            const int s = static_cast<int>(g.block.size());
            for (int x = 0; x < s; ++x)
                for (int y = 0; y < s; ++y)
                    for (int z = 0; z < s; ++z) {
                        int m = a.table(0)[(g.block[x] * 4 + g.block[y]) * 4 + g.block[z]];
                        int lin = g.add[g.add[x][g.neg[y]]][z];
                        if (g.pos[m] >= 0) CHECK(g.pos[m] == lin);
                    }
        }
    }
}
