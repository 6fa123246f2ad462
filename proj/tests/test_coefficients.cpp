#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tih/coefficients.hpp"
#include "tih/errors.hpp"

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

FaceComplex u31() { return FaceComplex::build(2, {ray2d(1, 0), ray2d(0, 1), ray2d(-1, -1)}); }

int find_cell(const FaceComplex& c, const HPolyhedron& p) {
    auto id = c.cell_by_key(p.key());
    REQUIRE(id.has_value());
    return *id;
}

}  // namespace

TEST_CASE("multitangent ranks on the U_3^1 fan") {
    auto c = u31();
    int origin = -1;
    for (int i = 0; i < c.size(); ++i)
        if (c.cell(i).dim() == 0) origin = i;
    REQUIRE(origin >= 0);
    SUBCASE("origin, p=1: the three ray directions saturate to Z^2") {
        auto mt = multitangent(c, origin, 1);
        CHECK(mt.rank() == 2);
        CHECK(mt.wedge_dim() == 2);
        CHECK(lattice_contains(mt.lattice.basis, {Int(1), Int(0)}));
        CHECK(lattice_contains(mt.lattice.basis, {Int(0), Int(1)}));
    }
    SUBCASE("ray, p=1: rank 1") {
        int ray = find_cell(c, ray2d(1, 0));
        auto mt = multitangent(c, ray, 1);
        CHECK(mt.rank() == 1);
    }
    SUBCASE("p=0 is Z everywhere") {
        for (int i = 0; i < c.size(); ++i) {
            auto mt = multitangent(c, i, 0);
            CHECK(mt.rank() == 1);
            CHECK(mt.wedge_dim() == 1);
        }
    }
    SUBCASE("rank 0 above the coface dimension") {
        CHECK(multitangent(c, origin, 2).rank() == 0);
        CHECK(multitangent(c, find_cell(c, ray2d(0, 1)), 2).rank() == 0);
    }
    SUBCASE("unknown cell") { CHECK_THROWS_AS(multitangent(c, 99, 1), CellNotFound); }
}

TEST_CASE("restriction maps") {
    auto c = u31();
    int origin = -1;
    for (int i = 0; i < c.size(); ++i)
        if (c.cell(i).dim() == 0) origin = i;
    int ray_x = find_cell(c, ray2d(1, 0));

    SUBCASE("ray e1 -> origin at p=1 lands on the first basis vector") {
        IntMatrix m = restriction(c, ray_x, origin, 1);
        REQUIRE(m.rows() == 2);
        REQUIRE(m.cols() == 1);
        // F_1(origin) basis is the HNF basis {(1,0),(0,1)}; e1 has coordinates (1,0)
        CHECK(m.get(0, 0) == 1);
        CHECK(m.get(1, 0) == 0);
    }
    SUBCASE("identity on sigma = tau") {
        IntMatrix m = restriction(c, ray_x, ray_x, 1);
        CHECK(m == IntMatrix::identity(1));
    }
    SUBCASE("p=0 is always the 1x1 identity") {
        CHECK(restriction(c, ray_x, origin, 0) == IntMatrix::identity(1));
    }
    SUBCASE("non-faces are rejected") {
        int ray_y = find_cell(c, ray2d(0, 1));
        CHECK_THROWS_AS(restriction(c, ray_x, ray_y, 1), NotAFace);
    }
}

TEST_CASE("functoriality on a 2-dimensional fan") {
    // single quadrant: origin < rays < quadrant
    auto quad = HPolyhedron::make(2, {}, {hs({-1, 0}, Rat(0)), hs({0, -1}, Rat(0))}, {}, false);
    auto c = FaceComplex::build(2, {quad});
    int top = -1, ray = -1, origin = -1;
    for (int i = 0; i < c.size(); ++i) {
        if (c.cell(i).dim() == 2) top = i;
        if (c.cell(i).dim() == 0) origin = i;
    }
    ray = find_cell(c, ray2d(1, 0));
    for (int p = 0; p <= 2; ++p) {
        IntMatrix a = restriction(c, top, ray, p);
        IntMatrix b = restriction(c, ray, origin, p);
        IntMatrix direct = restriction(c, top, origin, p);
        CHECK(b * a == direct);
    }
}

TEST_CASE("containment of multitangents along faces at equal sedentarity") {
    auto quad = HPolyhedron::make(2, {}, {hs({-1, 0}, Rat(0)), hs({0, -1}, Rat(0))}, {}, false);
    auto c = FaceComplex::build(2, {quad});
    for (int p = 0; p <= 2; ++p) {
        for (int sigma = 0; sigma < c.size(); ++sigma) {
            auto ms = multitangent(c, sigma, p);
            for (int tau : c.faces_of(sigma)) {
                if (c.cell(tau).sed() != c.cell(sigma).sed()) continue;
                auto mt = multitangent(c, tau, p);
                for (int i = 0; i < ms.rank(); ++i)
                    CHECK(lattice_contains(mt.lattice.basis, ms.lattice.basis.dense_row(i)));
            }
        }
    }
}

TEST_CASE("sedentarity-changing restriction is the coordinate projection") {
    // closure of the halfplane {x <= 0} in T^2; its face at x = -infinity is a line
    auto half = HPolyhedron::make(2, {}, {hs({1, 0}, Rat(0))}, {}, true);
    auto c = FaceComplex::build(2, {half});
    int hp = find_cell(c, half);
    int line = -1;
    for (int i = 0; i < c.size(); ++i)
        if (c.cell(i).sed() == std::set<int>{0} && c.cell(i).dim() == 1) line = i;
    REQUIRE(line >= 0);
    auto m_half = multitangent(c, hp, 1);
    auto m_line = multitangent(c, line, 1);
    CHECK(m_half.rank() == 2);
    CHECK(m_line.rank() == 1);
    IntMatrix m = restriction(c, hp, line, 1);
    REQUIRE(m.rows() == 1);
    REQUIRE(m.cols() == 2);
    // e_x dies, e_y survives
    CHECK((m.get(0, 0) == 0));
    CHECK((m.get(0, 1) == 1 || m.get(0, 1) == -1));
}

TEST_CASE("cache returns identical values") {
    auto c = u31();
    MultiTangentCache cache(c);
    for (int i = 0; i < c.size(); ++i)
        for (int p = 0; p <= 2; ++p) {
            const auto& a = cache.get(i, p);
            auto b = multitangent(c, i, p);
            CHECK(a.lattice.basis == b.lattice.basis);
        }
}
