#include "doctest.h"

#include "sandwich/geometry.hpp"
#include "sandwich/rng.hpp"

#include <cmath>
#include <sstream>

using namespace sandwich;

namespace {

Polygon unit_square() { return Polygon::rectangle(0, 0, 1, 1); }

Polygon triangle345() { return Polygon({{0, 0}, {3, 0}, {0, 4}}); }

// Convex hull of seeded random points, by gift wrapping (independent of the
// library's canonicalization).
Polygon random_hull(std::uint64_t seed, int count) {
    CounterRng rng(seed, 99);
    std::vector<Point2> pts(static_cast<std::size_t>(count));
    for (auto& p : pts) p = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::size_t start = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].x < pts[start].x) start = i;
    std::vector<Point2> hull;
    std::size_t cur = start;
    do {
        hull.push_back(pts[cur]);
        std::size_t next = (cur + 1) % pts.size();
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (cross(pts[next] - pts[cur], pts[i] - pts[cur]) < 0) next = i;
        cur = next;
    } while (cur != start);
    return Polygon(hull);
}

double brute_diameter(const Polygon& p) {
    double best = 0;
    for (auto a : p.vertices())
        for (auto b : p.vertices()) best = std::max(best, distance(a, b));
    return best;
}

} // namespace

TEST_CASE("volume") {
    CHECK(volume(unit_square()) == doctest::Approx(1.0));
    CHECK(volume(triangle345()) == doctest::Approx(6.0));
    Box b{{0, 0}, {2, 3}};
    CHECK(volume(b) == doctest::Approx(6.0));
    CHECK(volume(Disk{{0, 0}, 1.0}) == doctest::Approx(M_PI));
}

TEST_CASE("diameter") {
    CHECK(diameter(unit_square()) == doctest::Approx(std::sqrt(2.0)));
    CHECK(diameter(Disk{{0, 0}, 1.0}) == doctest::Approx(2.0));
    CHECK(diameter(triangle345()) == doctest::Approx(5.0));
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const Polygon p = random_hull(s, 15);
        CHECK(diameter(p) == doctest::Approx(brute_diameter(p)).epsilon(1e-14));
        for (double r : {0.5, 2.0, 3.0})
            CHECK(diameter(scale(p, r)) == doctest::Approx(r * diameter(p)).epsilon(1e-12));
    }
}

TEST_CASE("inradius") {
    CHECK(inradius(unit_square()) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(inradius(triangle345()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(inradius(Disk{{0, 0}, 1.0}) == doctest::Approx(1.0));
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const Polygon p = random_hull(s, 12);
        CHECK(inradius(p) <= diameter(p) / 2);
        // Triangles: r = area / semiperimeter.
    }
    const Polygon t({{0, 0}, {5, 1}, {2, 3}});
    double perim = 0;
    for (std::size_t i = 0; i < 3; ++i) perim += distance(t[i], t[(i + 1) % 3]);
    CHECK(inradius(t) == doctest::Approx(t.area() / (perim / 2)).epsilon(1e-9));
}

TEST_CASE("scale and reflect") {
    const Polygon s2 = scale(unit_square(), 2.0);
    CHECK(volume(s2) == doctest::Approx(4.0));
    CHECK(diameter(s2) == doctest::Approx(2 * std::sqrt(2.0)));
    const ConvexBody d = scale(ConvexBody(Disk{{0, 0}, 1.0}), 3.0);
    CHECK(d.disk().radius == doctest::Approx(3.0));
    CHECK_THROWS(scale(unit_square(), 0.0));
    CHECK_THROWS(scale(unit_square(), -1.0));

    const Polygon sym = Polygon::rectangle(-1, -1, 1, 1);
    CHECK(contains(reflect(sym), sym));
    CHECK(contains(sym, reflect(sym)));
    const Polygon r = reflect(Polygon({{0, 0}, {1, 0}, {0, 1}}));
    CHECK(contains(r, Point2{-0.2, -0.2}));
    CHECK(volume(r) == doctest::Approx(0.5));

    for (std::uint64_t s = 1; s <= 20; ++s) {
        const Polygon p = random_hull(s, 10);
        CHECK(volume(reflect(p)) == doctest::Approx(volume(p)).epsilon(1e-13));
        for (double k : {0.5, 2.0, 3.0}) CHECK(volume(scale(p, k)) == doctest::Approx(k * k * volume(p)));
    }
}

TEST_CASE("polygon canonicalization") {
    // Clockwise input with a collinear vertex.
    const Polygon p({{0, 0}, {0, 1}, {1, 1}, {1, 0.5}, {1, 0}});
    CHECK(p.size() == 4);
    CHECK(p.area() > 0);
    CHECK_THROWS(Polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}));
    CHECK_FALSE(Polygon::try_make({{0, 0}, {1, 0}, {2, 0}}).has_value());
}

TEST_CASE("clip_halfplane") {
    auto half = clip_halfplane(unit_square(), {{1, 0}, 0.5});
    REQUIRE(half);
    CHECK(half->area() == doctest::Approx(0.5));
    auto same = clip_halfplane(unit_square(), {{1, 0}, 2.0});
    REQUIRE(same);
    CHECK(same->area() == doctest::Approx(1.0));
    CHECK_FALSE(clip_halfplane(unit_square(), {{1, 0}, -1.0}));
}

TEST_CASE("intersect") {
    auto self = intersect(unit_square(), unit_square());
    REQUIRE(self);
    CHECK(self->area() == doctest::Approx(1.0));
    auto half = intersect(unit_square(), Polygon::rectangle(0.5, 0, 1.5, 1));
    REQUIRE(half);
    CHECK(half->area() == doctest::Approx(0.5));
    for (std::uint64_t s = 1; s <= 30; ++s) {
        const Polygon a = random_hull(s, 9);
        const Polygon b = translate(random_hull(s + 100, 9), {0.3, -0.2});
        auto c = intersect(a, b);
        if (!c) continue;
        CHECK(c->area() <= std::min(a.area(), b.area()) * (1 + 1e-12));
        CHECK(contains(a, *c));
        CHECK(contains(b, *c));
    }
}

TEST_CASE("distances and chords") {
    const Polygon sq = unit_square();
    CHECK(distance(sq, Point2{0.5, 0.5}) == 0.0);
    CHECK(distance(sq, Point2{2, 1}) == doctest::Approx(1.0));
    CHECK(distance(sq, Point2{2, 2}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(distance(sq, Polygon::rectangle(3, 0, 4, 1)) == doctest::Approx(2.0));
    CHECK(distance(sq, Polygon::rectangle(0.5, 0.5, 4, 1)) == 0.0);
    CHECK(chord_length(sq, {{1, 0}, 0.3}) == doctest::Approx(1.0));
    CHECK(chord_length(sq, {{1, 1}, 1.0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(chord_length(sq, {{1, 0}, 3.0}) == 0.0);
}

TEST_CASE("disk_intersection_area") {
    const Polygon big = Polygon::rectangle(-5, -5, 5, 5);
    CHECK(disk_intersection_area(big, {0, 0}, 1.0) == doctest::Approx(M_PI).epsilon(1e-12));
    // Half disk.
    CHECK(disk_intersection_area(Polygon::rectangle(0, -5, 5, 5), {0, 0}, 1.0) ==
          doctest::Approx(M_PI / 2).epsilon(1e-12));
    // Quarter disk at a square corner.
    CHECK(disk_intersection_area(Polygon::rectangle(0, 0, 1, 1), {0, 0}, 0.5) ==
          doctest::Approx(M_PI / 16).epsilon(1e-12));
    // Disk containing the polygon.
    CHECK(disk_intersection_area(Polygon::rectangle(0, 0, 1, 1), {0.5, 0.5}, 2.0) == doctest::Approx(1.0));
    // Circular segment: area of unit disk with x >= 0.5 is acos(0.5) - 0.5*sqrt(0.75).
    CHECK(disk_intersection_area(Polygon::rectangle(0.5, -2, 2, 2), {0, 0}, 1.0) ==
          doctest::Approx(std::acos(0.5) - 0.5 * std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("central symmetry") {
    CHECK(is_centrally_symmetric(Polygon::rectangle(-1, -2, 1, 2)));
    CHECK_FALSE(is_centrally_symmetric(Polygon::rectangle(0, 0, 1, 1)));
    CHECK(is_centrally_symmetric(Polygon::regular(6, 1.0)));
    CHECK_FALSE(is_centrally_symmetric(Polygon::regular(5, 1.0)));
    CHECK(is_centrally_symmetric(Disk{{0, 0}, 2.0}));
}

TEST_CASE("greedy_net") {
    const ConvexBody sq(unit_square());
    SUBCASE("radius beyond diameter gives one site") {
        CHECK(greedy_net(sq, 2.0, 1).points.size() == 1);
    }
    SUBCASE("unit square r = 0.6") {
        const SiteSet net = greedy_net(sq, 0.6, 3);
        CHECK(net.sample_count >= 10000);
        for (std::size_t i = 0; i < net.points.size(); ++i) {
            CHECK(sq.contains(net.points[i], 1e-12));
            for (std::size_t j = i + 1; j < net.points.size(); ++j)
                CHECK(distance(net.points[i], net.points[j]) >= 0.6 - 1e-12);
        }
        // Cover: dense independent grid, every point within r.
        double worst = 0;
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j <= 200; ++j) {
                const Point2 p{i / 200.0, j / 200.0};
                double best = 1e9;
                for (auto s : net.points) best = std::min(best, distance(p, s));
                worst = std::max(worst, best);
            }
        CHECK(worst <= 0.6 + 1e-9);
        CHECK(net.cover_radius <= 0.6 + 1e-12);
    }
    SUBCASE("segment-like rectangle") {
        const SiteSet net = greedy_net(ConvexBody(Polygon::rectangle(0, 0, 10, 0.1)), 1.0, 5);
        CHECK(net.points.size() >= 6);
        CHECK(net.points.size() <= 11);
    }
    SUBCASE("deterministic") {
        const SiteSet a = greedy_net(sq, 0.3, 11);
        const SiteSet b = greedy_net(sq, 0.3, 11);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
    }
}

TEST_CASE("voronoi_partition") {
    const ConvexBody sq(unit_square());
    const std::vector<Point2> two{{0.25, 0.5}, {0.75, 0.5}};
    const PartitionPieces parts = voronoi_partition(sq, two);
    REQUIRE(parts.pieces.size() == 2);
    CHECK(parts.pieces[0].area() == doctest::Approx(0.5));
    CHECK(parts.pieces[1].area() == doctest::Approx(0.5));
    CHECK(contains(Polygon::rectangle(0, 0, 0.5, 1), parts.pieces[0]));
    CHECK(is_partition(parts));

    const std::vector<Point2> one{{0.3, 0.3}};
    const PartitionPieces whole = voronoi_partition(sq, one);
    REQUIRE(whole.pieces.size() == 1);
    CHECK(whole.pieces[0].area() == doctest::Approx(1.0));

    const std::vector<Point2> dup{{0.3, 0.3}, {0.3, 0.3}};
    CHECK_THROWS(voronoi_partition(sq, dup));

    for (std::uint64_t s = 1; s <= 8; ++s) {
        const Polygon p = random_hull(s, 14);
        const double r = 0.15 + 0.05 * static_cast<double>(s % 4);
        const SiteSet net = greedy_net(ConvexBody(p), r, s);
        const PartitionPieces cells = voronoi_partition(ConvexBody(p), net.points);
        CHECK(is_partition(cells));
        double total = 0;
        for (const auto& c : cells.pieces) total += c.area();
        CHECK(total == doctest::Approx(p.area()).epsilon(1e-9));
        for (double d : cells.diameters) CHECK(d <= 2 * r + 1e-9);
    }
}

TEST_CASE("polygon file format") {
    std::istringstream in("4\n0 0\n1 0\n1 1\n0 1\n");
    const Polygon p = read_polygon(in);
    CHECK(p.area() == doctest::Approx(1.0));
    std::ostringstream out;
    write_polygon(out, p);
    std::istringstream back(out.str());
    CHECK(read_polygon(back).area() == doctest::Approx(1.0));
    std::istringstream bad("4\n0 0\n2 0\n1 0.2\n1 2\n");
    CHECK_THROWS(read_polygon(bad));
    std::istringstream repeated("4\n0 0\n1 0\n1 0\n0 1\n");
    CHECK_THROWS(read_polygon(repeated));
    std::istringstream truncated("4\n0 0\n1 0\n");
    CHECK_THROWS(read_polygon(truncated));
}
