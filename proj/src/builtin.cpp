#include "subpower/builtin.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace subpower {

namespace {

std::shared_ptr<const Signature> make_sig(std::vector<Symbol> syms) {
    auto s = std::make_shared<Signature>();
    s->symbols = std::move(syms);
    return s;
}

std::vector<Elem> ternary(int m, const std::function<int(int, int, int)>& f) {
    std::vector<Elem> t;
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            for (int z = 0; z < m; ++z) t.push_back(static_cast<Elem>(f(x, y, z)));
    return t;
}

std::vector<Elem> binary(int m, const std::function<int(int, int)>& f) {
    std::vector<Elem> t;
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) t.push_back(static_cast<Elem>(f(x, y)));
    return t;
}

}  // namespace

std::shared_ptr<const Signature> maltsev_signature() {
    static auto s = make_sig({{"m", 3}});
    return s;
}

std::shared_ptr<const Signature> majority_signature() {
    static auto s = make_sig({{"maj", 3}});
    return s;
}

std::shared_ptr<const Signature> lattice_signature() {
    static auto s = make_sig({{"meet", 2}, {"join", 2}});
    return s;
}

std::shared_ptr<const Signature> semilattice_signature() {
    static auto s = make_sig({{"meet", 2}});
    return s;
}

AlgebraPtr affine_cyclic(int n, std::shared_ptr<const Signature> sig) {
    auto t = ternary(n, [n](int x, int y, int z) { return ((x - y + z) % n + n) % n; });
    return std::make_shared<Algebra>("Z" + std::to_string(n), n, std::move(sig), std::vector<std::vector<Elem>>{t});
}

AlgebraPtr group_algebra(const std::string& name, const std::vector<std::vector<int>>& mul,
                         std::shared_ptr<const Signature> sig) {
    const int m = static_cast<int>(mul.size());
    int e = -1;
    for (int x = 0; x < m && e < 0; ++x) {
        bool ok = true;
        for (int y = 0; y < m; ++y) ok &= mul[x][y] == y;
        if (ok) e = x;
    }
    if (e < 0) throw Error("group table without identity");
    std::vector<int> inv(m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (mul[x][y] == e) inv[x] = y;
    auto t = ternary(m, [&](int x, int y, int z) { return mul[mul[x][inv[y]]][z]; });
    return std::make_shared<Algebra>(name, m, std::move(sig), std::vector<std::vector<Elem>>{t});
}

AlgebraPtr symmetric3(std::shared_ptr<const Signature> sig) {
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::vector<std::vector<int>> mul(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            std::array<int, 3> c{};
            for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
            mul[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    return group_algebra("S3", mul, std::move(sig));
}

AlgebraPtr quaternion8(std::shared_ptr<const Signature> sig) {
    // element 2*u + s is (-1)^s times unit u in {1, i, j, k}
    static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::vector<std::vector<int>> mul(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            int ua = a / 2, ub = b / 2;
            int s = (a % 2) ^ (b % 2) ^ sign[ua][ub];
            mul[a][b] = 2 * unit[ua][ub] + s;
        }
    return group_algebra("Q8", mul, std::move(sig));
}

AlgebraPtr majority_chain(std::shared_ptr<const Signature> sig) {
    auto t = ternary(2, [](int x, int y, int z) { return (x & y) | (y & z) | (x & z); });
    return std::make_shared<Algebra>("L2", 2, std::move(sig), std::vector<std::vector<Elem>>{t});
}

AlgebraPtr two_element_lattice(std::shared_ptr<const Signature> sig) {
    return std::make_shared<Algebra>(
        "L2lat", 2, std::move(sig),
        std::vector<std::vector<Elem>>{binary(2, [](int x, int y) { return x & y; }),
                                       binary(2, [](int x, int y) { return x | y; })});
}

AlgebraPtr two_element_semilattice(std::shared_ptr<const Signature> sig) {
    return std::make_shared<Algebra>("SL2", 2, std::move(sig),
                                     std::vector<std::vector<Elem>>{binary(2, [](int x, int y) { return x & y; })});
}

Circuit maltsev_parallelogram(const Signature& sig) {
    Circuit c(5);
    c.set_output(c.apply(sig.find("m"), {0, 1, 2}));
    return c;
}

Circuit majority_parallelogram(const Signature& sig) {
    Circuit c(6);
    c.set_output(c.apply(sig.find("maj"), {3, 4, 5}));
    return c;
}

Circuit lattice_majority_parallelogram(const Signature& sig) {
    const int meet = sig.find("meet"), join = sig.find("join");
    Circuit c(6);
    int a = c.apply(meet, {3, 4}), b = c.apply(meet, {4, 5}), e = c.apply(meet, {3, 5});
    c.set_output(c.apply(join, {c.apply(join, {a, b}), e}));
    return c;
}

Catalog builtin_catalog(const std::string& names) {
    std::vector<std::string> parts;
    std::stringstream ss(names);
    for (std::string p; std::getline(ss, p, ',');)
        if (!p.empty()) parts.push_back(p);
    if (parts.empty()) throw Error("empty catalog");
    auto kind = [](const std::string& n) {
        if (n == "L2") return 1;
        if (n == "L2lat") return 2;
        return 0;
    };
    const int k = kind(parts[0]);
    for (const auto& p : parts)
        if (kind(p) != k) throw Error("builtin algebras " + names + " do not share a signature");
    if (k == 1) {
        Catalog c(majority_signature());
        c.add(majority_chain(majority_signature()));
        c.configure(majority_parallelogram(c.signature()), 3);
        return c;
    }
    if (k == 2) {
        Catalog c(lattice_signature());
        c.add(two_element_lattice(lattice_signature()));
        c.configure(lattice_majority_parallelogram(c.signature()), 3);
        return c;
    }
    auto sig = maltsev_signature();
    Catalog c(sig);
    for (const auto& p : parts) {
        if (p == "S3") {
            c.add(symmetric3(sig));
        } else if (p == "Q8") {
            c.add(quaternion8(sig));
        } else if (p == "Z2xZ2") {
            auto z2 = affine_cyclic(2, sig);
            c.add(make_product({z2, z2}, "Z2xZ2"));
        } else if (p.size() == 2 && p[0] == 'Z' && p[1] >= '1' && p[1] <= '9') {
            c.add(affine_cyclic(p[1] - '0', sig));
        } else {
            throw Error("unknown builtin algebra " + p);
        }
    }
    c.configure(maltsev_parallelogram(*sig), 2);
    return c;
}

}  // namespace subpower
