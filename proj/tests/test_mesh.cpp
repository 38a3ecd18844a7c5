#include "doctest.h"

#include "sandwich/mesh.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

using namespace sandwich;

namespace {

void check_mesh_invariants(const Mesh& m) {
    for (std::size_t t = 0; t < m.triangles.size(); ++t) REQUIRE(m.triangle_area(t) > 0);
    CHECK(m.area() == doctest::Approx(m.domain.area()).epsilon(1e-6));
    // Boundary tags are exactly the vertices on the polygon boundary.
    const auto mask = m.boundary_mask();
    const auto v = m.domain.vertices();
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        double d = 1e9;
        for (std::size_t e = 0; e < v.size(); ++e) {
            const Point2 a = v[e], b = v[(e + 1) % v.size()];
            d = std::min(d, std::abs(cross(b - a, m.vertices[i] - a)) / norm(b - a));
        }
        CHECK(static_cast<bool>(mask[i]) == (d < 1e-9));
    }
    // Every interior edge is shared by exactly two triangles, boundary edges by one.
    std::multiset<std::pair<int, int>> edges;
    for (const auto& t : m.triangles)
        for (int k = 0; k < 3; ++k) edges.insert({std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])});
    for (const auto& e : edges) {
        const auto c = edges.count(e);
        CHECK((c == 1 || c == 2));
        if (c == 1) CHECK((mask[static_cast<std::size_t>(e.first)] && mask[static_cast<std::size_t>(e.second)]));
    }
}

std::shared_ptr<const Mesh> square_mesh(double h) {
    return std::make_shared<const Mesh>(triangulate(Polygon::rectangle(0, 0, 1, 1), h, 1));
}

} // namespace

TEST_CASE("triangulate unit square") {
    const Mesh m = triangulate(Polygon::rectangle(0, 0, 1, 1), 0.5, 1);
    CHECK(m.vertices.size() >= 9);
    CHECK(m.vertices.size() <= 25);
    CHECK(m.area() == doctest::Approx(1.0));
    check_mesh_invariants(m);
}

TEST_CASE("triangulate thin rectangle keeps angles") {
    const Mesh m = triangulate(Polygon::rectangle(0, 0, std::sqrt(2.0), 0.05), 0.02, 3);
    CHECK(min_angle_deg(m) >= 15.0);
    check_mesh_invariants(m);
}

TEST_CASE("triangulate assorted polygons") {
    const std::vector<Polygon> polys{
        Polygon::regular(256, 1.0), Polygon::regular(5, 2.0), Polygon({{0, 0}, {1, 0}, {1, 1}}),
        Polygon::rectangle(0, 0, 4, 0.1), Polygon({{0, 0}, {3, 0.2}, {2.5, 1.4}, {0.4, 1.1}})};
    for (const auto& p : polys) {
        for (double h : {0.3, 0.07}) {
            const Mesh m = triangulate(p, h, 7);
            check_mesh_invariants(m);
            CHECK(m.min_angle_deg >= 15.0 - 1e-9);
            const Mesh r = refine(m);
            CHECK(r.area() == doctest::Approx(p.area()).epsilon(1e-6));
        }
    }
}

TEST_CASE("triangulate is deterministic and seed-dependent") {
    const Polygon p = Polygon::regular(7, 1.0);
    const Mesh a = triangulate(p, 0.1, 5), b = triangulate(p, 0.1, 5), c = triangulate(p, 0.1, 6);
    CHECK(a.vertices == b.vertices);
    CHECK(a.triangles == b.triangles);
    CHECK(a.vertices != c.vertices);
}

TEST_CASE("coarse h is reduced automatically") {
    const Mesh m = triangulate(Polygon::rectangle(0, 0, 1, 1), 5.0, 1);
    CHECK(m.h_reductions > 0);
    CHECK(m.h < 5.0);
    check_mesh_invariants(m);
    CHECK_THROWS(triangulate(Polygon::rectangle(0, 0, 1, 1), 0.0, 1));
}

TEST_CASE("refine") {
    const Mesh m = triangulate(Polygon::regular(6, 1.0), 0.25, 2);
    const Mesh r = refine(m);
    CHECK(r.triangles.size() == 4 * m.triangles.size());
    CHECK(r.area() == doctest::Approx(m.area()).epsilon(1e-14));
    CHECK(r.h == doctest::Approx(m.h / 2));
    const auto mask = r.boundary_mask();
    for (int v : m.boundary_vertices) CHECK(mask[static_cast<std::size_t>(v)]);
    check_mesh_invariants(r);
    for (std::size_t t = 0; t < r.triangles.size(); ++t) CHECK(r.triangle_area(t) > 0);
}

TEST_CASE("field integrals") {
    const auto m = square_mesh(0.1);
    const P1Field one = P1Field::interpolate(m, [](Point2) { return 1.0; });
    CHECK(integrate(one) == doctest::Approx(1.0));
    const P1Field x = P1Field::interpolate(m, [](Point2 p) { return p.x; });
    CHECK(positive_measure(x + -0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gradient_l1(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate(x) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dirichlet_energy(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l2_norm_squared(x) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(l1_norm(x + -0.5) == doctest::Approx(0.25).epsilon(1e-12));
    const auto pp = positive_part_integrals(x + -0.5);
    CHECK(pp.square == doctest::Approx(1.0 / 24).epsilon(1e-12));
    CHECK(pp.gradient_l1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pp.gradient_l2sq == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS(P1Field(m, std::vector<double>(3, 0.0)));
}

TEST_CASE("field properties") {
    const auto m = square_mesh(0.08);
    auto wave = [](double a, double b, double c) {
        return [=](Point2 p) { return std::sin(a * p.x + b) * std::cos(c * p.y) - 0.1; };
    };
    for (int s = 0; s < 10; ++s) {
        const P1Field f = P1Field::interpolate(m, wave(1 + s, 0.3 * s, 2 + 0.5 * s));
        const P1Field g = P1Field::interpolate(m, wave(3 - 0.2 * s, 1.0, 1 + s));
        CHECK(positive_measure(f) + positive_measure(-f) - zero_measure(f) == doctest::Approx(1.0).epsilon(1e-9));
        // Linearity and homogeneity.
        std::vector<double> sum(f.values.size());
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = 2 * f.values[i] + g.values[i];
        CHECK(integrate(P1Field(m, sum)) == doctest::Approx(2 * integrate(f) + integrate(g)).epsilon(1e-12));
        CHECK(gradient_l1(-3.0 * f) == doctest::Approx(3 * gradient_l1(f)).epsilon(1e-12));
        // Invariance under refinement of the interpolated field.
        const auto fine = std::make_shared<const Mesh>(refine(*m));
        const P1Field ff(fine, prolongate(*m, f.values));
        CHECK(integrate(ff) == doctest::Approx(integrate(f)).epsilon(1e-12));
        CHECK(positive_measure(ff) == doctest::Approx(positive_measure(f)).epsilon(1e-12));
        // f = f_+ - f_-.
        const auto p = positive_part_integrals(f), n = positive_part_integrals(-f);
        CHECK(p.square + n.square == doctest::Approx(l2_norm_squared(f)).epsilon(1e-12));
        CHECK(p.gradient_l1 + n.gradient_l1 == doctest::Approx(gradient_l1(f)).epsilon(1e-12));
    }
    const P1Field zero = P1Field::interpolate(m, [](Point2) { return 0.0; });
    CHECK(zero_measure(zero) == doctest::Approx(1.0));
}

TEST_CASE("mesh dump format") {
    const Mesh m = triangulate(Polygon::rectangle(0, 0, 1, 1), 0.5, 1);
    std::ostringstream out;
    write_mesh(out, m);
    std::istringstream in(out.str());
    std::string tag;
    std::size_t n = 0;
    in >> tag >> n;
    CHECK(tag == "VERTICES");
    CHECK(n == m.vertices.size());
    double x, y;
    for (std::size_t i = 0; i < n; ++i) in >> x >> y;
    in >> tag >> n;
    CHECK(tag == "TRIANGLES");
    CHECK(n == m.triangles.size());
    int a, b, c;
    for (std::size_t i = 0; i < n; ++i) {
        in >> a >> b >> c;
        CHECK(a >= 0);
    }
    in >> tag >> n;
    CHECK(tag == "BOUNDARY");
    CHECK(n == m.boundary_vertices.size());
}
