#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tih/errors.hpp"
#include "tih/face_complex.hpp"
#include "tih/polyhedron.hpp"

using namespace tih;

namespace {

HalfSpace hs(std::vector<int> normal, const Rat& offset) {
    HalfSpace h;
    h.normal.assign(normal.begin(), normal.end());
    h.offset = offset;
    return h;
}

// [lo, hi] inside R^1
HPolyhedron segment1d(const Rat& lo, const Rat& hi) {
    return HPolyhedron::make(1, {}, {hs({-1}, -lo), hs({1}, hi)}, {});
}

// { t*(dx,dy) : t >= 0 } in R^2 or T^2
HPolyhedron ray2d(int dx, int dy, bool tropical = true) {
    std::vector<HalfSpace> eqs = {hs({dy, -dx}, Rat(0))};
    std::vector<HalfSpace> in;
    if (dx != 0)
        in.push_back(hs({-dx, 0}, Rat(0)));
    else
        in.push_back(hs({0, -dy}, Rat(0)));
    return HPolyhedron::make(2, {}, in, eqs, tropical);
}

HPolyhedron origin2d(bool tropical = true) {
    return HPolyhedron::make(2, {}, {}, {hs({1, 0}, Rat(0)), hs({0, 1}, Rat(0))}, tropical);
}

ExtendedPoint pt1(const Rat& x) { return ExtendedPoint::finite({x}); }
ExtendedPoint pt2(const Rat& x, const Rat& y) { return ExtendedPoint::finite({x, y}); }

// the Bergman fan of U_3^1, a complex in ambient R^2
FaceComplex u31() {
    return FaceComplex::build(2, {ray2d(1, 0, false), ray2d(0, 1, false), ray2d(-1, -1, false)});
}

}  // namespace

TEST_CASE("sedentarity of extended points") {
    ExtendedPoint a(2, {Rat(3), std::nullopt});
    CHECK(sedentarity(a) == std::set<int>{1});
    CHECK(sedentarity(pt2(0, 0)).empty());
    ExtendedPoint c(2, {std::nullopt, std::nullopt});
    CHECK(sedentarity(c) == std::set<int>{0, 1});
}

TEST_CASE("face enumeration") {
    SUBCASE("segment") {
        auto f = segment1d(0, 1).faces();
        CHECK(f.size() == 3);
        int points = 0, segments = 0;
        for (const auto& p : f) (p.dim() == 0 ? points : segments)++;
        CHECK(points == 2);
        CHECK(segments == 1);
    }
    SUBCASE("ray") {
        auto f = ray2d(1, 0).faces();
        REQUIRE(f.size() == 2);
        bool has_origin = false, has_self = false;
        for (const auto& p : f) {
            if (p == origin2d()) has_origin = true;
            if (p == ray2d(1, 0)) has_self = true;
        }
        CHECK(has_origin);
        CHECK(has_self);
    }
    SUBCASE("T^1 closure of R") {
        HPolyhedron t1 = HPolyhedron::make(1, {}, {}, {});
        auto f = t1.faces();
        REQUIRE(f.size() == 2);
        // hand listing: the whole line plus the point at -infinity
        bool has_line = false, has_bottom = false;
        for (const auto& p : f) {
            if (p.sed().empty() && p.dim() == 1) has_line = true;
            if (p.sed() == std::set<int>{0} && p.dim() == 0) has_bottom = true;
        }
        CHECK(has_line);
        CHECK(has_bottom);
    }
    SUBCASE("diagonal ray reaches corner at infinity") {
        // closure of {t(-1,-1)} contains the point (-inf,-inf) but nothing at
        // mixed sedentarity
        auto f = ray2d(-1, -1).faces();
        REQUIRE(f.size() == 3);
        int bottom_corner = 0, mixed = 0;
        for (const auto& p : f) {
            if (p.sed().size() == 2) bottom_corner++;
            if (p.sed().size() == 1) mixed++;
        }
        CHECK(bottom_corner == 1);
        CHECK(mixed == 0);
    }
    SUBCASE("faces of faces are faces, with strictly smaller dimension") {
        HPolyhedron quad = HPolyhedron::make(2, {}, {hs({-1, 0}, Rat(0)), hs({0, -1}, Rat(0))}, {});
        auto faces = quad.faces();
        CHECK(faces.size() == 4);  // quadrant, 2 rays, origin
        for (const auto& f : faces) {
            for (const auto& g : f.faces()) {
                bool found = false;
                for (const auto& h : faces)
                    if (h == g) found = true;
                CHECK(found);
                if (!(g == f)) CHECK(g.dim() < f.dim());
            }
        }
    }
}

TEST_CASE("relint membership") {
    auto seg = segment1d(0, 1);
    CHECK(seg.relint_contains(pt1(Rat(1, 2))));
    CHECK(!seg.relint_contains(pt1(0)));
    CHECK(!seg.relint_contains(pt1(2)));
    CHECK(ray2d(1, 0).relint_contains(pt2(1, 0)));
    CHECK(!ray2d(1, 0).relint_contains(pt2(0, 0)));
    CHECK(!ray2d(1, 0).relint_contains(pt2(1, 1)));
    CHECK_THROWS_AS(seg.relint_contains(pt2(0, 0)), DimensionMismatch);
}

TEST_CASE("closure membership across sedentarity") {
    HPolyhedron t1 = HPolyhedron::make(1, {}, {hs({1}, Rat(0))}, {});  // closure of (-inf, 0]
    ExtendedPoint bottom(1, {std::nullopt});
    CHECK(t1.closure_contains(bottom));
    CHECK(t1.closure_contains(pt1(-5)));
    CHECK(!t1.closure_contains(pt1(1)));
    // positive ray does not reach -infinity
    HPolyhedron pos = HPolyhedron::make(1, {}, {hs({-1}, Rat(0))}, {});
    CHECK(!pos.closure_contains(bottom));
}

TEST_CASE("tangent lattices") {
    SUBCASE("diagonal ray has primitive direction (1,1)") {
        auto l = ray2d(-1, -1).tangent_lattice();
        REQUIRE(l.rank() == 1);
        CHECK(lattice_contains(l.basis, {Int(1), Int(1)}));
        CHECK(!lattice_contains(l.basis, {Int(1), Int(0)}));
    }
    SUBCASE("origin has rank 0") { CHECK(origin2d().tangent_lattice().rank() == 0); }
    SUBCASE("full quadrant has Z^2") {
        HPolyhedron quad = HPolyhedron::make(2, {}, {hs({-1, 0}, Rat(0)), hs({0, -1}, Rat(0))}, {});
        auto l = quad.tangent_lattice();
        CHECK(l.rank() == 2);
        CHECK(lattice_contains(l.basis, {Int(1), Int(0)}));
        CHECK(lattice_contains(l.basis, {Int(0), Int(1)}));
    }
    SUBCASE("tangent of a face is a sublattice (same sedentarity)") {
        HPolyhedron quad = HPolyhedron::make(2, {}, {hs({-1, 0}, Rat(0)), hs({0, -1}, Rat(0))}, {});
        auto lq = quad.tangent_lattice();
        for (const auto& f : quad.faces()) {
            if (f.sed() != quad.sed()) continue;
            auto lf = f.tangent_lattice();
            for (int i = 0; i < lf.rank(); ++i) CHECK(lattice_contains(lq.basis, lf.basis.dense_row(i)));
        }
    }
}

TEST_CASE("interior points land in the relative interior") {
    for (const auto& p : {segment1d(-3, 7), ray2d(1, 0), ray2d(-1, -1), origin2d()}) {
        ExtendedPoint x = p.interior_point();
        CHECK(p.relint_contains(x));
    }
}

TEST_CASE("complex construction and validation") {
    SUBCASE("U_3^1 fan is valid") {
        auto c = u31();
        CHECK(c.size() == 4);  // origin + 3 rays
        CHECK(c.max_dim() == 1);
        auto rep = validate_complex(c);
        CHECK(rep.valid());
        // origin is a face of every ray
        auto origin_id = c.cell_by_key(origin2d(false).key());
        REQUIRE(origin_id.has_value());
        CHECK(c.cofaces_of(*origin_id).size() == 3);
    }
    SUBCASE("crossing segments are invalid") {
        auto seg_h = HPolyhedron::make(2, {}, {hs({-1, 0}, Rat(1)), hs({1, 0}, Rat(1))}, {hs({0, 1}, Rat(0))});
        auto seg_v = HPolyhedron::make(2, {}, {hs({0, -1}, Rat(1)), hs({0, 1}, Rat(1))}, {hs({1, 0}, Rat(0))});
        // build() adds faces but not the crossing point, so validation fails
        auto c = FaceComplex::build(2, {seg_h, seg_v});
        auto rep = validate_complex(c);
        CHECK(!rep.valid());
    }
    SUBCASE("empty complex is valid") {
        auto c = FaceComplex::build(2, {});
        CHECK(c.size() == 0);
        CHECK(validate_complex(c).valid());
    }
    SUBCASE("carrier lookup") {
        auto c = u31();
        CHECK(c.cell(c.carrier_of_point(pt2(2, 0))) == ray2d(1, 0, false));
        CHECK(c.cell(c.carrier_of_point(pt2(0, 0))) == origin2d(false));
        CHECK(c.carrier_of_point(pt2(1, 2)) == -1);
    }
}

TEST_CASE("bounded check") {
    CHECK(segment1d(0, 1).is_bounded());
    CHECK(!ray2d(1, 0).is_bounded());
    CHECK(origin2d().is_bounded());
}
