#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tih/errors.hpp"
#include "tih/oracles.hpp"

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
FaceComplex line_fan() {
    return FaceComplex::build(1, {HPolyhedron::make(1, {}, {hs({1}, Rat(0))}, {}, false),
                                  HPolyhedron::make(1, {}, {hs({-1}, Rat(0))}, {}, false)});
}
FaceComplex quadrant_fan() {
    return FaceComplex::build(2, {HPolyhedron::make(2, {}, {hs({-1, 0}, Rat(0)), hs({0, -1}, Rat(0))}, {}, false)});
}
FaceComplex four_quadrant_fan() {
    std::vector<HPolyhedron> cells;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            cells.push_back(HPolyhedron::make(2, {}, {hs({-sx, 0}, Rat(0)), hs({0, -sy}, Rat(0))}, {}, false));
    return FaceComplex::build(2, cells);
}
FaceComplex segment01() {
    auto seg = HPolyhedron::make(1, {}, {hs({-1}, Rat(0)), hs({1}, Rat(1))}, {}, false);
    return FaceComplex::build(1, {seg});
}
FaceComplex triangle_boundary() {
    return FaceComplex::build(2, {seg2d({0, 0}, {1, 0}), seg2d({1, 0}, {0, 1}), seg2d({0, 1}, {0, 0})});
}

int vertex_cell(const FaceComplex& c) {
    for (int i = 0; i < c.size(); ++i)
        if (c.cell(i).dim() == 0) return i;
    return -1;
}

Perversity vertex_perv(const FaceComplex& c, const Filtration& f, int m) {
    auto s = strata(c, f);
    Perversity p;
    for (const auto& st : s)
        if (!st.regular) p.values[st.id] = m;
    return p;
}

Engine fan_engine(const FaceComplex& c, int pverv) {
    Filtration f = face_filtration(c);
    EngineOptions opt;
    opt.conical = true;
    return Engine(c, f, vertex_perv(c, f, pverv), opt);
}

// engine computation matching a cone-formula flavor
HomologyResult engine_groups(Engine& e, ConeFlavor flavor, Coeff k, int p_hi) {
    switch (flavor) {
        case ConeFlavor::GM: return e.homology(Variant::GM, k, 0, p_hi);
        case ConeFlavor::NONGM: return e.homology(Variant::NONGM, k, 0, p_hi);
        case ConeFlavor::NONGM_BM: return e.bm_homology(Variant::NONGM, k, 0, p_hi);
        case ConeFlavor::NONGM_COHOM: return e.cohomology(Variant::NONGM, k, 0, p_hi);
    }
    return {};
}

HomologyGroup freeg(long r) { return HomologyGroup{r, {}}; }

}  // namespace

TEST_CASE("cone formula case selection on U_3^1") {
    SUBCASE("non-GM with zero perversity vanishes in every degree") {
        auto c = u31();
        Engine e = fan_engine(c, 0);
        auto pred = cone_formula(e, 0, 2, ConeFlavor::NONGM, Coeff::Q);
        CHECK(pred.groups.groups.empty());
        for (const auto& [pq, cc] : pred.cases) CHECK(cc == ConeCase::VANISH);
    }
    SUBCASE("GM at q=0 picks the allowable sum of rank 2") {
        auto c = u31();
        Engine e = fan_engine(c, 0);
        auto pred = cone_formula(e, 0, 2, ConeFlavor::GM, Coeff::Q);
        CHECK(pred.cases.at({1, 0}) == ConeCase::ALLOWABLE_SUM);
        CHECK(pred.groups.at(1, 0) == freeg(2));
        CHECK(pred.groups.at(0, 0) == freeg(1));
    }
    SUBCASE("non-GM BM with the dual perversity vanishes") {
        auto c = u31();
        Filtration f = face_filtration(c);
        auto s = strata(c, f);
        Perversity zero;
        Perversity dp = dual_perversity(f, s, zero);  // -1 at the vertex
        EngineOptions opt;
        opt.conical = true;
        Engine e(c, f, dp, opt);
        auto pred = cone_formula(e, 1, 1, ConeFlavor::NONGM_BM, Coeff::Q);
        CHECK(pred.groups.groups.empty());
    }
    SUBCASE("non-fans are rejected") {
        auto c = segment01();
        Engine e(c, trop_filtration(c), {});
        CHECK_THROWS_AS(cone_formula(e, 0, 1, ConeFlavor::NONGM, Coeff::Q), NotAFan);
    }
}

TEST_CASE("cone formulas match the engine on the fan corpus") {
    struct Inst {
        FaceComplex c;
        int pv;
    };
    std::vector<Inst> corpus;
    for (int pv : {-2, -1, 0, 1, 2}) corpus.push_back({u31(), pv});
    corpus.push_back({line_fan(), 0});
    corpus.push_back({quadrant_fan(), 0});
    corpus.push_back({four_quadrant_fan(), 0});

    for (auto& [c, pv] : corpus) {
        CAPTURE(pv);
        CAPTURE(c.size());
        Engine e = fan_engine(c, pv);
        const int p_hi = 2;
        for (ConeFlavor flavor :
             {ConeFlavor::GM, ConeFlavor::NONGM, ConeFlavor::NONGM_BM, ConeFlavor::NONGM_COHOM}) {
            for (Coeff k : {Coeff::Q, Coeff::Z}) {
                auto pred = cone_formula(e, 0, p_hi, flavor, k);
                auto got = engine_groups(e, flavor, k, p_hi);
                CHECK(pred.groups.groups == got.groups);
            }
        }
    }
}

TEST_CASE("1-dimensional non-GM classification") {
    SUBCASE("segment with zero perversity: a=1, b=0") {
        auto c = segment01();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto pred = onedim_nongm(e, 0, 2, Coeff::Q);
        CHECK(pred.at(0, 1) == freeg(1));
        CHECK(pred.at(1, 1) == freeg(1));
        CHECK(pred.groups.size() == 2);
        CHECK(e.homology(Variant::NONGM, Coeff::Q, 0, 2).groups == pred.groups);
    }
    SUBCASE("segment with negative perversity: a=0, b=1") {
        auto c = segment01();
        auto f = trop_filtration(c);
        Engine e(c, f, vertex_perv(c, f, -1));
        auto pred = onedim_nongm(e, 0, 2, Coeff::Q);
        CHECK(pred.at(0, 0) == freeg(1));
        CHECK(pred.at(1, 0) == freeg(1));
        CHECK(e.homology(Variant::NONGM, Coeff::Q, 0, 2).groups == pred.groups);
    }
    SUBCASE("triangle boundary: three A-edges") {
        auto c = triangle_boundary();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto pred = onedim_nongm(e, 0, 1, Coeff::Q);
        CHECK(pred.at(0, 1) == freeg(3));
        CHECK(pred.at(1, 1) == freeg(3));
        CHECK(e.homology(Variant::NONGM, Coeff::Q, 0, 1).groups == pred.groups);
    }
    SUBCASE("2-dimensional input is rejected") {
        auto c = quadrant_fan();
        Engine e(c, trop_filtration(c), {});
        CHECK_THROWS_AS(onedim_nongm(e, 0, 1, Coeff::Q), NotOneDimensional);
    }
}

TEST_CASE("1-dimensional GM classification") {
    SUBCASE("nonnegative perversity keeps the whole space") {
        auto c = triangle_boundary();
        auto f = trop_filtration(c);
        Engine e(c, f, {});
        auto pred = onedim_gm(e, 0, 1, Coeff::Q);
        auto trop = e.tropical_homology(Coeff::Q, 0, 1);
        CHECK(pred.groups == trop.groups);
        CHECK(e.homology(Variant::GM, Coeff::Q, 0, 1).groups == pred.groups);
    }
    SUBCASE("segment with negative ends deletes both vertices") {
        auto c = segment01();
        auto f = trop_filtration(c);
        Engine e(c, f, vertex_perv(c, f, -1));
        auto pred = onedim_gm(e, 0, 1, Coeff::Q);
        CHECK(pred.at(0, 0) == freeg(1));
        CHECK(pred.at(1, 0) == freeg(1));
        CHECK(e.homology(Variant::GM, Coeff::Q, 0, 1).groups == pred.groups);
    }
    SUBCASE("U_3^1 with negative vertex gives three open rays") {
        auto c = u31();
        auto f = trop_filtration(c);
        Engine e(c, f, vertex_perv(c, f, -1));
        auto pred = onedim_gm(e, 0, 1, Coeff::Q);
        CHECK(pred.at(0, 0) == freeg(3));
        CHECK(pred.at(1, 0) == freeg(3));
        CHECK(e.homology(Variant::GM, Coeff::Q, 0, 1).groups == pred.groups);
    }
}

TEST_CASE("tropical manifold with singularities") {
    // X = triangle boundary, U = complement of the three corners
    auto c = triangle_boundary();
    std::set<int> u;
    for (int i = 0; i < c.size(); ++i)
        if (c.cell(i).dim() == 1) u.insert(i);
    auto build = [&](int m) {
        Filtration f = pair_filtration(c, u);
        EngineOptions opt;
        opt.condition_c = true;
        return Engine(c, f, vertex_perv(c, f, m), opt);
    };
    SUBCASE("m = -1 gives the homology of U") {
        Engine e = build(-1);
        auto pred = tms_oracle(e, u, -1, 0, 1, Coeff::Q);
        CHECK(pred.at(0, 0) == freeg(3));
        CHECK(pred.at(1, 0) == freeg(3));
        CHECK(e.homology(Variant::NONGM, Coeff::Q, 0, 1).groups == pred.groups);
    }
    SUBCASE("m = 0 gives BM homology of U") {
        Engine e = build(0);
        auto pred = tms_oracle(e, u, 0, 0, 1, Coeff::Q);
        CHECK(pred.at(0, 1) == freeg(3));
        CHECK(pred.at(1, 1) == freeg(3));
        CHECK(e.homology(Variant::NONGM, Coeff::Q, 0, 1).groups == pred.groups);
    }
    SUBCASE("U = X: ordinary and BM agree on a compact space") {
        std::set<int> all;
        for (int i = 0; i < c.size(); ++i) all.insert(i);
        Filtration f = pair_filtration(c, all);
        EngineOptions opt;
        opt.condition_c = true;
        Engine e(c, f, {}, opt);
        auto h = tms_oracle(e, all, -1, 0, 1, Coeff::Q);
        auto b = tms_oracle(e, all, 0, 0, 1, Coeff::Q);
        CHECK(h.groups == b.groups);
    }
}

TEST_CASE("tms rejects bad pairs") {
    // non-compact input
    auto c = u31();
    Engine e(c, trop_filtration(c), {});
    std::set<int> u;
    for (int i = 0; i < c.size(); ++i)
        if (c.cell(i).dim() == 1) u.insert(i);
    CHECK_THROWS_AS(tms_oracle(e, u, 0, 0, 1, Coeff::Q), BadPair);
    // complement not closed: U = one vertex, so the complement keeps edges
    // while dropping one of their endpoints
    auto tri = triangle_boundary();
    Engine e2(tri, trop_filtration(tri), {});
    std::set<int> u_one_vertex;
    for (int i = 0; i < tri.size(); ++i)
        if (tri.cell(i).dim() == 0) {
            u_one_vertex.insert(i);
            break;
        }
    CHECK_THROWS_AS(tms_oracle(e2, u_one_vertex, 0, 0, 1, Coeff::Q), BadPair);
}

TEST_CASE("duality check") {
    SUBCASE("compact 1-dim pair filtration passes in non-GM") {
        auto c = triangle_boundary();
        std::set<int> u;
        for (int i = 0; i < c.size(); ++i)
            if (c.cell(i).dim() == 1) u.insert(i);
        Filtration f = pair_filtration(c, u);
        EngineOptions opt;
        opt.condition_c = true;
        for (int m : {-1, 0, 1}) {
            Engine e(c, f, vertex_perv(c, f, m), opt);
            auto rep = duality_check(e, Variant::NONGM, Coeff::Q);
            CHECK(rep.all_equal);
        }
    }
    SUBCASE("U_3^1 GM mode fails exactly at (1,1)") {
        auto c = u31();
        Filtration f = face_filtration(c);
        EngineOptions opt;
        opt.conical = true;
        opt.condition_c = true;
        Engine e(c, f, vertex_perv(c, f, 0), opt);
        auto rep = duality_check(e, Variant::GM, Coeff::Q);
        CHECK(!rep.all_equal);
        bool found = false;
        for (auto& [p, q, lhs, rhs] : rep.mismatches)
            if (p == 1 && q == 1 && lhs == 1 && rhs == 0) found = true;
        CHECK(found);
        // and the non-GM check on the same instance passes
        auto rep2 = duality_check(e, Variant::NONGM, Coeff::Q);
        CHECK(rep2.all_equal);
    }
    SUBCASE("field coefficients are required") {
        auto c = segment01();
        EngineOptions opt;
        opt.condition_c = true;
        Engine e(c, trop_filtration(c), {}, opt);
        CHECK_THROWS_AS(duality_check(e, Variant::NONGM, Coeff::Z), FieldRequired);
    }
    SUBCASE("condition (C) must be asserted") {
        auto c = segment01();
        Engine e(c, trop_filtration(c), {});
        CHECK_THROWS_AS(duality_check(e, Variant::NONGM, Coeff::Q), ConditionCNotAsserted);
    }
    SUBCASE("empty complex is vacuously self-dual") {
        auto c = FaceComplex::build(1, {});
        Filtration f;
        f.formal_dim = 0;
        f.levels = {{}};
        EngineOptions opt;
        opt.condition_c = true;
        Engine e(c, f, {}, opt);
        auto rep = duality_check(e, Variant::NONGM, Coeff::Q);
        CHECK(rep.all_equal);
    }
}
