#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tih/errors.hpp"
#include "tih/ic_engine.hpp"
#include "tih/triangulate.hpp"

using namespace tih;

namespace {

HalfSpace hs(std::vector<int> normal, const Rat& offset) {
    HalfSpace h;
    h.normal.assign(normal.begin(), normal.end());
    h.offset = offset;
    return h;
}

HPolyhedron ray2d(int dx, int dy) {
    std::vector<HalfSpace> eqs = {hs({dy, -dx}, Rat(0))};
    std::vector<HalfSpace> in;
    if (dx != 0)
        in.push_back(hs({-dx, 0}, Rat(0)));
    else
        in.push_back(hs({0, -dy}, Rat(0)));
    return HPolyhedron::make(2, {}, in, eqs, false);
}

HPolyhedron seg2d(std::pair<int, int> a, std::pair<int, int> b) {
    int dx = b.first - a.first, dy = b.second - a.second;
    std::vector<HalfSpace> eqs = {hs({dy, -dx}, Rat(dy * a.first - dx * a.second))};
    Rat lo = Rat(dx * a.first + dy * a.second);
    Rat hi = Rat(dx * b.first + dy * b.second);
    std::vector<HalfSpace> in = {hs({-dx, -dy}, -lo), hs({dx, dy}, hi)};
    return HPolyhedron::make(2, {}, in, eqs, false);
}

FaceComplex u31() { return FaceComplex::build(2, {ray2d(1, 0), ray2d(0, 1), ray2d(-1, -1)}); }

FaceComplex segment01() {
    auto seg = HPolyhedron::make(1, {}, {hs({-1}, Rat(0)), hs({1}, Rat(1))}, {}, false);
    return FaceComplex::build(1, {seg});
}

FaceComplex triangle_boundary() {
    return FaceComplex::build(2, {seg2d({0, 0}, {1, 0}), seg2d({1, 0}, {0, 1}), seg2d({0, 1}, {0, 0})});
}

FaceComplex line_fan() {
    return FaceComplex::build(1, {HPolyhedron::make(1, {}, {hs({1}, Rat(0))}, {}, false),
                                  HPolyhedron::make(1, {}, {hs({-1}, Rat(0))}, {}, false)});
}

int vertex_cell(const FaceComplex& c) {
    for (int i = 0; i < c.size(); ++i)
        if (c.cell(i).dim() == 0) return i;
    return -1;
}

Perversity const_perv(const std::vector<Stratum>& s, int m) {
    Perversity p;
    for (const auto& st : s)
        if (!st.regular) p.values[st.id] = m;
    return p;
}

HomologyGroup freeg(long r) { return HomologyGroup{r, {}}; }

// Classical (p = 0, constant Z coefficients) intersection homology computed
// directly from the triangulation; independent of the engine's coefficient
// and lattice assembly path.
std::vector<HomologyGroup> classical_ih(const Engine& e, int level, Variant variant, Coeff k) {
    const auto& t = e.triangulation(level);
    const auto& f = e.filtration();
    const int n = f.formal_dim;
    std::set<int> sigma_cells;
    if (n >= 1)
        for (int id : f.levels[n - 1]) sigma_cells.insert(id);

    const int top = t.dim();
    std::vector<std::vector<int>> keep(top + 1);   // generator simplex indices
    std::vector<std::vector<int>> pos(top + 1);    // simplex -> generator position
    std::vector<std::vector<char>> ok(top + 1);    // allowability
    for (int q = 0; q <= top; ++q) {
        pos[q].assign(t.count(q), -1);
        ok[q].assign(t.count(q), 0);
        for (int i = 0; i < t.count(q); ++i) ok[q][i] = e.is_allowable(t, q, i) ? 1 : 0;
        for (int i = 0; i < t.count(q); ++i) {
            if (variant == Variant::NONGM && sigma_cells.count(t.carriers[q][i])) continue;
            pos[q][i] = static_cast<int>(keep[q].size());
            keep[q].push_back(i);
        }
    }
    // boundary over the full (kept) simplex spaces
    auto full_boundary = [&](int q) {
        IntMatrix b(static_cast<int>(keep[q - 1].size()), static_cast<int>(keep[q].size()));
        for (size_t col = 0; col < keep[q].size(); ++col) {
            const auto& tuple = t.simplices[q][keep[q][col]];
            for (size_t drop = 0; drop < tuple.size(); ++drop) {
                std::vector<int> face;
                for (size_t kk = 0; kk < tuple.size(); ++kk)
                    if (kk != drop) face.push_back(tuple[kk]);
                int fi = t.index_of(q - 1, face);
                if (pos[q - 1][fi] < 0) continue;
                b.add_to(pos[q - 1][fi], static_cast<int>(col), (drop % 2 == 0) ? 1 : -1);
            }
        }
        return b;
    };
    // IC_q: allowable chains with allowable boundary
    std::vector<IntMatrix> ic(top + 1);
    std::vector<IntMatrix> bc(top + 1);
    std::vector<std::vector<int>> allowed(top + 1);
    for (int q = 0; q <= top; ++q)
        for (size_t i = 0; i < keep[q].size(); ++i)
            if (ok[q][keep[q][i]]) allowed[q].push_back(static_cast<int>(i));
    for (int q = 0; q <= top; ++q) {
        if (q == 0) {
            ic[0] = IntMatrix::identity(static_cast<int>(allowed[0].size()));
            continue;
        }
        IntMatrix b = full_boundary(q);
        IntMatrix constraint(0, static_cast<int>(allowed[q].size()));
        for (size_t row = 0; row < keep[q - 1].size(); ++row) {
            if (ok[q - 1][keep[q - 1][row]]) continue;
            std::vector<Int> r;
            for (int col : allowed[q]) r.push_back(b.get(static_cast<int>(row), col));
            constraint.push_row(r);
        }
        ic[q] = kernel_lattice(constraint).basis;
    }
    for (int q = 0; q <= top; ++q) {
        if (q == 0) {
            bc[0] = IntMatrix(0, ic[0].rows());
            continue;
        }
        IntMatrix b = full_boundary(q);
        bc[q] = IntMatrix(ic[q - 1].rows(), ic[q].rows());
        for (int col = 0; col < ic[q].rows(); ++col) {
            std::vector<Int> chain(keep[q].size(), 0);
            for (const auto& [ac, val] : ic[q].row(col)) chain[allowed[q][ac]] = val;
            std::vector<Int> img(keep[q - 1].size(), 0);
            for (size_t j = 0; j < chain.size(); ++j) {
                if (chain[j] == 0) continue;
                for (int r = 0; r < b.rows(); ++r) {
                    Int v = b.get(r, static_cast<int>(j));
                    if (v != 0) img[r] += chain[j] * v;
                }
            }
            std::vector<Int> restricted;
            for (int a : allowed[q - 1]) restricted.push_back(img[keep[q - 1][a] >= 0 ? a : a]);
            // restrict to allowed positions
            restricted.clear();
            for (int a : allowed[q - 1]) restricted.push_back(img[a]);
            auto sol = solve_in_lattice(ic[q - 1], restricted);
            REQUIRE(sol.has_value());
            for (int r = 0; r < ic[q - 1].rows(); ++r)
                if ((*sol)[r] != 0) bc[q].set(r, col, (*sol)[r]);
        }
    }
    return homology_of_complex(bc, k);
}

}  // namespace

TEST_CASE("allowability") {
    auto c = u31();
    auto f = trop_filtration(c);
    Perversity pv;
    Engine e(c, f, pv);
    const auto& t = e.triangulation(2);
    int origin = vertex_cell(c);
    int origin_vertex = -1;
    for (int i = 0; i < t.count(0); ++i)
        if (t.carriers[0][i] == origin) origin_vertex = i;
    REQUIRE(origin_vertex >= 0);
    SUBCASE("0-simplex at the cone point fails 0 <= -1") {
        CHECK(!e.is_allowable(t, 0, origin_vertex));
    }
    SUBCASE("1-simplex with one vertex at the cone point passes") {
        for (int i = 0; i < t.count(1); ++i) {
            const auto& tup = t.simplices[1][i];
            if (tup[0] == origin_vertex || tup[1] == origin_vertex) CHECK(e.is_allowable(t, 1, i));
        }
    }
    SUBCASE("regular-carrier simplices are always allowable") {
        for (int q = 0; q <= t.dim(); ++q)
            for (int i = 0; i < t.count(q); ++i)
                if (t.carriers[q][i] != origin) CHECK(e.is_allowable(t, q, i));
    }
}

TEST_CASE("segment homology per the 1-dimensional classification") {
    auto c = segment01();
    auto f = trop_filtration(c);
    SUBCASE("zero perversity: a=1, b=0") {
        Engine e(c, f, {});
        auto h = e.homology(Variant::NONGM, Coeff::Q, 0, 2);
        CHECK(h.at(0, 1) == freeg(1));
        CHECK(h.at(1, 1) == freeg(1));
        CHECK(h.groups.size() == 2);
    }
    SUBCASE("negative perversity at both ends: a=0, b=1") {
        auto s = strata(c, f);
        Engine e(c, f, const_perv(s, -1));
        auto h = e.homology(Variant::NONGM, Coeff::Q, 0, 2);
        CHECK(h.at(0, 0) == freeg(1));
        CHECK(h.at(1, 0) == freeg(1));
        CHECK(h.groups.size() == 2);
    }
    SUBCASE("over Z the groups are torsion-free with the same ranks") {
        Engine e(c, f, {});
        auto h = e.homology(Variant::NONGM, Coeff::Z, 0, 2);
        CHECK(h.at(0, 1) == HomologyGroup{1, {}});
        CHECK(h.at(1, 1) == HomologyGroup{1, {}});
    }
}

TEST_CASE("U_3^1 groups from the paper") {
    auto c = u31();
    auto f = trop_filtration(c);
    Perversity pv;  // zero at the vertex
    EngineOptions opt;
    opt.conical = true;
    Engine e(c, f, pv, opt);
    SUBCASE("non-GM homology vanishes everywhere") {
        auto h = e.homology(Variant::NONGM, Coeff::Q, 0, 2);
        CHECK(h.groups.empty());
    }
    SUBCASE("GM homology: Q at (0,0), Q^2 at (1,0)") {
        auto h = e.homology(Variant::GM, Coeff::Q, 0, 2);
        CHECK(h.at(0, 0) == freeg(1));
        CHECK(h.at(1, 0) == freeg(2));
        CHECK(h.groups.size() == 2);
    }
    SUBCASE("GM cohomology matches Hom over a field") {
        auto h = e.cohomology(Variant::GM, Coeff::Q, 0, 2);
        CHECK(h.at(0, 0) == freeg(1));
        CHECK(h.at(1, 0) == freeg(2));
    }
    SUBCASE("GM BM homology with the dual perversity vanishes") {
        auto s = e.strata_list();
        Perversity dp = dual_perversity(f, s, pv);
        Engine e2(c, f, dp, opt);
        CHECK(e2.bm_homology(Variant::GM, Coeff::Q, 0, 2).groups.empty());
        CHECK(e2.bm_homology(Variant::NONGM, Coeff::Q, 0, 2).groups.empty());
    }
    SUBCASE("relative to the punctured fan: Q^3 at (p, 1) for p = 0, 1") {
        int v = vertex_cell(c);
        auto h = e.relative_homology(Variant::NONGM, Coeff::Q, 0, 2, {v});
        // Prop 3.9 route: IH_{p,1}(F, F minus v) = IH_{p,0}(3 punctured rays) = Q^3
        CHECK(h.at(0, 1) == freeg(3));
        CHECK(h.at(1, 1) == freeg(3));
        CHECK(h.groups.size() == 2);
    }
}

TEST_CASE("relative homology degenerate cases") {
    auto c = segment01();
    auto f = trop_filtration(c);
    Engine e(c, f, {});
    std::set<int> all;
    for (int i = 0; i < c.size(); ++i) all.insert(i);
    SUBCASE("U = X kills everything") {
        auto h = e.relative_homology(Variant::NONGM, Coeff::Q, 0, 1, {});
        // z_u = empty set means U = X; quotient by the full complex is zero
        CHECK(h.groups.empty());
    }
    SUBCASE("U = empty set reproduces absolute homology") {
        auto h = e.relative_homology(Variant::NONGM, Coeff::Q, 0, 1, all);
        auto a = e.homology(Variant::NONGM, Coeff::Q, 0, 1);
        CHECK(h.groups == a.groups);
    }
}

TEST_CASE("relative model mismatch is rejected") {
    auto c = segment01();
    Engine e(c, trop_filtration(c), {});
    // z_x not contained in z_u: U would not be a sub-model of X
    CHECK_THROWS_AS(e.relative_homology(Variant::NONGM, Coeff::Q, 0, 1, {}, {0}), ModelMismatch);
}

TEST_CASE("delete and subdivide commute") {
    auto c = u31();
    int origin = vertex_cell(c);
    auto t2 = barycentric_subdivide(barycentric_subdivide(stratified_triangulation(c, Rat(1))));
    auto a = barycentric_subdivide(delete_closed(t2, {origin}));
    auto b = delete_closed(barycentric_subdivide(t2), {origin});
    REQUIRE(a.dim() == b.dim());
    for (int q = 0; q <= a.dim(); ++q) {
        REQUIRE(a.count(q) == b.count(q));
        int alive_a = 0, alive_b = 0;
        for (int i = 0; i < a.count(q); ++i) {
            if (a.alive(q, i)) alive_a++;
            if (b.alive(q, i)) alive_b++;
        }
        CHECK(alive_a == alive_b);
    }
}

TEST_CASE("Borel-Moore homology") {
    SUBCASE("compact spaces: BM equals ordinary") {
        auto c = triangle_boundary();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto h = e.homology(Variant::NONGM, Coeff::Q, 0, 1);
        auto b = e.bm_homology(Variant::NONGM, Coeff::Q, 0, 1);
        CHECK(h.groups == b.groups);
    }
    SUBCASE("line with the regular filtration: Q at q=1") {
        auto c = line_fan();
        auto f = trop_filtration(c);  // no singular strata: the subdivision point is regular
        EngineOptions opt;
        opt.conical = true;
        Engine e(c, f, {}, opt);
        auto b = e.bm_homology(Variant::NONGM, Coeff::Q, 0, 1);
        CHECK(b.at(0, 1) == freeg(1));
        CHECK(b.at(1, 1) == freeg(1));
        CHECK(b.groups.size() == 2);
    }
    SUBCASE("non-compact inputs without the conical flag are rejected") {
        auto c = u31();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        CHECK_THROWS_AS(e.bm_homology(Variant::NONGM, Coeff::Q, 0, 1), ConicalStructureRequired);
    }
}

TEST_CASE("cohomology") {
    SUBCASE("segment non-GM: Q at (p, 1)") {
        auto c = segment01();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto h = e.cohomology(Variant::NONGM, Coeff::Q, 0, 1);
        CHECK(h.at(0, 1) == freeg(1));
        CHECK(h.at(1, 1) == freeg(1));
    }
    SUBCASE("field cohomology ranks equal homology ranks degreewise") {
        auto c = triangle_boundary();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto h = e.homology(Variant::NONGM, Coeff::Q, 0, 1);
        auto ch = e.cohomology(Variant::NONGM, Coeff::Q, 0, 1);
        CHECK(h.groups == ch.groups);
    }
    SUBCASE("compactly supported cohomology equals cohomology on compact spaces") {
        auto c = triangle_boundary();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto a = e.cohomology(Variant::NONGM, Coeff::Q, 0, 1, false);
        auto b = e.cohomology(Variant::NONGM, Coeff::Q, 0, 1, true);
        CHECK(a.groups == b.groups);
    }
}

TEST_CASE("tropical homology") {
    SUBCASE("U_3^1: F_1 of the vertex in degree zero") {
        auto c = u31();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto h = e.tropical_homology(Coeff::Q, 0, 2);
        CHECK(h.at(0, 0) == freeg(1));
        CHECK(h.at(1, 0) == freeg(2));
        CHECK(h.groups.size() == 2);
    }
    SUBCASE("point") {
        auto c = FaceComplex::build(1, {HPolyhedron::make(1, {}, {}, {hs({1}, Rat(0))}, false)});
        auto f = face_filtration(c);
        Engine e(c, f, {});
        auto h = e.tropical_homology(Coeff::Q, 0, 1);
        CHECK(h.at(0, 0) == freeg(1));
        CHECK(h.groups.size() == 1);
    }
    SUBCASE("circle: classical simplicial values at p=0") {
        auto c = triangle_boundary();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto h = e.tropical_homology(Coeff::Q, 0, 1);
        CHECK(h.at(0, 0) == freeg(1));
        CHECK(h.at(0, 1) == freeg(1));
        // p = 1: corners pair independent directions, so no (1,1)-cycle closes
        CHECK(h.at(1, 1) == freeg(0));
    }
}

TEST_CASE("perversity extremes collapse the variants") {
    std::vector<FaceComplex> instances;
    instances.push_back(segment01());
    instances.push_back(u31());
    instances.push_back(triangle_boundary());
    for (auto& c : instances) {
        auto f = trop_filtration(c);
        auto s = strata(c, f);
        SUBCASE("perversity >= codim: GM equals tropical homology") {
            Perversity big;
            for (const auto& st : s)
                if (!st.regular) big.values[st.id] = st.codim(f.formal_dim);
            Engine e(c, f, big);
            auto gm = e.homology(Variant::GM, Coeff::Q, 0, 2);
            auto tr = e.tropical_homology(Coeff::Q, 0, 2);
            CHECK(gm.groups == tr.groups);
        }
        SUBCASE("perversity <= codim - 2: GM equals non-GM") {
            Perversity low;
            for (const auto& st : s)
                if (!st.regular) low.values[st.id] = st.codim(f.formal_dim) - 2;
            Engine e(c, f, low);
            auto gm = e.homology(Variant::GM, Coeff::Q, 0, 2);
            auto ng = e.homology(Variant::NONGM, Coeff::Q, 0, 2);
            CHECK(gm.groups == ng.groups);
        }
    }
}

TEST_CASE("p = 0 equals the classical intersection homology reference") {
    std::vector<std::pair<FaceComplex, int>> instances;
    instances.emplace_back(segment01(), 0);
    instances.emplace_back(u31(), 0);
    instances.emplace_back(triangle_boundary(), -1);
    for (auto& [c, pval] : instances) {
        auto f = trop_filtration(c);
        auto s = strata(c, f);
        Engine e(c, f, const_perv(s, pval));
        for (Variant v : {Variant::NONGM, Variant::GM}) {
            auto ic = e.build_ic_complex(2, 0, v);
            auto engine_h = homology_of_complex(ic.boundary, Coeff::Z);
            auto classical = classical_ih(e, 2, v, Coeff::Z);
            REQUIRE(engine_h.size() == classical.size());
            for (size_t q = 0; q < engine_h.size(); ++q) CHECK(engine_h[q] == classical[q]);
        }
    }
}

TEST_CASE("IC lattices are saturated") {
    auto c = u31();
    auto f = trop_filtration(c);
    Engine e(c, f, {});
    e.triangulation(2);
    for (Variant v : {Variant::NONGM, Variant::GM}) {
        for (int p = 0; p <= 1; ++p) {
            auto ic = e.build_ic_complex(2, p, v);
            for (int q = 0; q <= ic.top; ++q)
                for (const auto& d : snf_invariants(ic.ic_basis[q])) CHECK(d == 1);
        }
    }
}

TEST_CASE("stabilization failure surfaces as an error") {
    // sanity: well-behaved instances stabilize already at the base level
    auto c = segment01();
    auto f = trop_filtration(c);
    EngineOptions opt;
    opt.base_level = 2;
    opt.max_level = 3;
    Engine e(c, f, {}, opt);
    CHECK_NOTHROW(e.homology(Variant::NONGM, Coeff::Q, 0, 1));
}
