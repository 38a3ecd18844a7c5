#include "doctest.h"

#include "sandwich/analytic.hpp"
#include "sandwich/cheeger.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace sandwich;
using sandwich::testing::random_hull;

namespace {

const Polygon unit_square = Polygon::rectangle(0, 0, 1, 1);
const Polygon rect21 = Polygon::rectangle(0, 0, 2, 1);

std::shared_ptr<const Mesh> mesh_of(const Polygon& p, double h) {
    return std::make_shared<const Mesh>(triangulate(p, h, 1));
}

// Area of {dot(u, x) <= s} by Simpson integration of chord lengths.
double cavalieri_area(const Polygon& p, Point2 u, double s) {
    double lo = 1e300;
    for (auto v : p.vertices()) lo = std::min(lo, dot(u, v));
    const int n = 2000;
    const double step = (s - lo) / n;
    double sum = 0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        sum += w * chord_length(p, {u, lo + i * step});
    }
    return sum * step / 3;
}

} // namespace

TEST_CASE("cheeger_lower") {
    CHECK(cheeger_lower(unit_square) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(cheeger_lower(Disk{{0, 0}, 1}) == doctest::Approx(0.5));
    CHECK(cheeger_lower(rect21) == doctest::Approx(1 / std::sqrt(5.0)));
}

TEST_CASE("cheeger_upper examples") {
    const auto sq = cheeger_upper(unit_square);
    CHECK(sq.upper <= 2 + 1e-6);
    CHECK(sq.lower == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(sq.lower_source == "inverse-diameter");
    const auto r = cheeger_upper(rect21);
    CHECK(r.upper <= 1 + 1e-6);
    CHECK(r.upper_witness.score == r.upper);
    CHECK(r.upper_witness.score == std::max(r.upper_witness.ratio0, r.upper_witness.ratio1));
}

TEST_CASE("cheeger_upper witness and ordering on random hulls") {
    const SweepOptions coarse{36, 40};
    for (std::uint64_t s = 0; s < 15; ++s) {
        const Polygon p = random_hull(s, 8 + static_cast<int>(s));
        const auto b = cheeger_upper(p, coarse);
        CHECK(b.lower <= b.upper);
        const auto serial = cheeger_upper_serial(p, coarse);
        CHECK(serial.upper == b.upper);
        CHECK(serial.upper_witness.offset == b.upper_witness.offset);
        // Recompute the witness ratios from chord integrals.
        const CutCandidate& w = b.upper_witness;
        const Point2 u{std::cos(w.direction), std::sin(w.direction)};
        const double a0 = cavalieri_area(p, u, w.offset);
        const double chord = chord_length(p, {u, w.offset});
        CHECK(w.ratio0 == doctest::Approx(chord / a0).epsilon(1e-6));
        CHECK(w.ratio1 == doctest::Approx(chord / (p.area() - a0)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(cheeger_upper(unit_square, {0, 10}), std::invalid_argument);
}

TEST_CASE("median") {
    const auto sq = mesh_of(unit_square, 0.1);
    CHECK(median(P1Field::interpolate(sq, [](Point2) { return 3.5; })) == 3.5);
    CHECK(median(P1Field::interpolate(sq, [](Point2 p) { return p.x; })) == doctest::Approx(0.5).epsilon(1e-9));
    const auto tri = mesh_of(Polygon({{0, 0}, {1, 0}, {1, 1}}), 0.05);
    // area{x <= m} = m^2 / 2 on this triangle, so m = sqrt(1/2) halves it.
    CHECK(median(P1Field::interpolate(tri, [](Point2 p) { return p.x; })) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));

    for (std::uint64_t s = 0; s < 10; ++s) {
        CounterRng rng(s, 3);
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        const auto f = P1Field::interpolate(sq, [&](Point2 p) { return std::sin(a * p.x) + std::cos(b * p.y * p.x); });
        const double m = median(f);
        const double area = sq->area();
        CHECK(positive_measure(f + (-m)) >= 0.5 * area - 1e-9);
        CHECK(positive_measure(-f + m) >= 0.5 * area - 1e-9);
    }
}

TEST_CASE("poincare_check") {
    const auto sq = mesh_of(unit_square, 0.05);
    const auto c = poincare_check(P1Field::interpolate(sq, [](Point2) { return 1.0; }), 1 / std::sqrt(2.0));
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
    CHECK(c.pass);
    const auto x = poincare_check(P1Field::interpolate(sq, [](Point2 p) { return p.x; }), 1 / std::sqrt(2.0));
    CHECK(x.lhs == doctest::Approx(0.25 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(x.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x.pass);

    for (std::uint64_t s = 0; s < 4; ++s) {
        const Polygon p = random_hull(s, 12);
        const auto m = mesh_of(p, 0.15);
        for (int t = 0; t < 25; ++t) {
            CounterRng rng(s * 100 + static_cast<std::uint64_t>(t), 4);
            double a[6];
            for (double& v : a) v = rng.uniform(-4, 4);
            const auto f = P1Field::interpolate(m, [&](Point2 q) {
                return a[0] * std::cos(a[1] * q.x + a[2] * q.y) + a[3] * std::sin(a[4] * q.x * q.y + a[5]);
            });
            CHECK(poincare_check(f, cheeger_lower(p)).pass);
        }
    }
}

TEST_CASE("sep_lower") {
    const ConvexBody rect{rect21};
    SUBCASE("end slabs") {
        const auto w = sep_lower(rect, {0.25, 0.25}, 1);
        CHECK(w.min_distance >= 0.5);
        CHECK(w.masses[0] >= 0.25 * (1 - 1e-9));
        CHECK(w.masses[1] >= 0.25 * (1 - 1e-9));
    }
    SUBCASE("tiling masses give distance zero") {
        CHECK(sep_lower(rect, {0.5, 0.5}, 1).min_distance == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(sep_lower(ConvexBody(unit_square), {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1).min_distance ==
              doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("witness validity is independent of the search") {
        const ConvexBody body{random_hull(7, 14)};
        const std::vector<double> kappas{0.1, 0.2, 0.15};
        const auto w = sep_lower(body, kappas, 3);
        REQUIRE(w.sets.size() == 3);
        const double area = volume(body);
        double mind = 1e300;
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(contains(body.polygon(), w.sets[i], 1e-9));
            CHECK(w.sets[i].area() / area >= kappas[i] * (1 - 1e-9));
            for (std::size_t j = i + 1; j < 3; ++j) {
                const auto both = intersect(w.sets[i], w.sets[j]);
                CHECK((!both || both->area() <= 1e-9 * area));
                mind = std::min(mind, distance(w.sets[i], w.sets[j]));
            }
        }
        CHECK(w.min_distance == doctest::Approx(mind).epsilon(1e-9));
        CHECK(w.min_distance > 0);
    }
    SUBCASE("monotone in the masses") {
        for (std::uint64_t s = 0; s < 4; ++s) {
            const ConvexBody body{random_hull(s + 20, 10)};
            CounterRng rng(s, 6);
            std::vector<double> kappas{rng.uniform(0.05, 0.2), rng.uniform(0.05, 0.2), rng.uniform(0.05, 0.2)};
            const double before = sep_lower(body, kappas, 5).min_distance;
            kappas[s % 3] *= 1.5;
            CHECK(sep_lower(body, kappas, 5).min_distance <= before + 1e-12);
        }
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(sep_lower(rect, {0.6, 0.5}, 1), std::invalid_argument);
        CHECK_THROWS_AS(sep_lower(rect, {0.6}, 1), std::invalid_argument);
        CHECK_THROWS_AS(sep_lower(rect, {0.0, 0.5}, 1), std::invalid_argument);
    }
    SUBCASE("two-slab witness at the inverse Cheeger scale") {
        // (1 - 2 kappa) / h_upper is at most the true separation; end slabs reach it on rectangles.
        const double kappa = 0.2;
        const double target = (1 - 2 * kappa) / cheeger_upper(rect21).upper;
        CHECK(sep_lower(rect, {kappa, 0.5}, 1).min_distance >= target - 1e-9);
    }
}

TEST_CASE("reduction_consistency") {
    const ConvexBody sq{unit_square};
    const auto eig = spectrum(sq, BoundaryCondition::Neumann, 2, 0.125, 1);
    const auto a = reduction_consistency(sq, 1, 1, {0.25, 0.25}, eig, 1);
    CHECK(a.c_emp > 0);
    CHECK(std::isfinite(a.c_emp));
    CHECK(a.max_log == doctest::Approx(std::log(16.0)));
    CHECK(a.lambda_k == eig.spectrum.values[1]);
    const auto b = reduction_consistency(sq, 1, 1, {0.25, 0.25}, eig, 1);
    CHECK(a.c_emp == b.c_emp);
    CHECK_THROWS_AS(reduction_consistency(sq, 1, 2, {0.25, 0.25, 0.25}, eig, 1), std::invalid_argument);
    CHECK_THROWS_AS(reduction_consistency(sq, 2, 1, {0.25}, eig, 1), std::invalid_argument);
}

TEST_CASE("milman_consistency") {
    const ConvexBody sq{unit_square};
    const auto same = milman_consistency(sq, sq);
    CHECK(same.v == doctest::Approx(1.0));
    CHECK(same.pass);
    const auto nested = milman_consistency(sq, ConvexBody(Polygon::rectangle(0, 0, 2, 2)));
    CHECK(nested.v == doctest::Approx(0.25));
    CHECK(nested.rhs == doctest::Approx(1.0 / 16 / std::sqrt(2.0)));
    CHECK(nested.pass);
    CHECK_THROWS_AS(milman_consistency(ConvexBody(Polygon::rectangle(0.5, 0.5, 1.5, 1.5)), sq),
                    std::invalid_argument);
    const SweepOptions coarse{30, 30};
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Polygon outer = random_hull(s, 10);
        CounterRng rng(s, 12);
        const Point2 g = outer.centroid();
        const Polygon shrunk = translate(scale(translate(outer, -1.0 * g), rng.uniform(0.2, 0.95)), g);
        const Point2 n{rng.normal(), rng.normal()};
        const Polygon inner = *clip_halfplane(shrunk, {n, dot(n, g) + rng.uniform(0.0, 0.2) * norm(n)});
        CHECK(milman_consistency(ConvexBody(inner), ConvexBody(outer), coarse).pass);
    }
}

TEST_CASE("diam_eigen_check") {
    const double lengths[] = {1.0, 1.0};
    const auto spec = box_spectrum(lengths, BoundaryCondition::Neumann, 4);
    const auto d = diam_eigen_check(ConvexBody(unit_square), 1, spec);
    CHECK(d.c_emp == doctest::Approx(std::sqrt(2.0) * std::numbers::pi / 2));
    CHECK(d.pass);
    const double scaled_lengths[] = {3.0, 3.0};
    const auto big = diam_eigen_check(ConvexBody(scale(unit_square, 3.0)), 1,
                                      box_spectrum(scaled_lengths, BoundaryCondition::Neumann, 4));
    CHECK(big.c_emp == doctest::Approx(d.c_emp).epsilon(1e-12));
    CHECK_THROWS_AS(diam_eigen_check(ConvexBody(unit_square), 9, spec), std::invalid_argument);
}
