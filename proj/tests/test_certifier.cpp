#include "doctest.h"

#include "sandwich/analytic.hpp"
#include "sandwich/certifier.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace sandwich;

namespace {

const double pi2 = std::numbers::pi * std::numbers::pi;
const Polygon square = Polygon::rectangle(0, 0, 1, 1);

PartitionPieces split(const Polygon& body, const std::vector<Polygon>& parts) {
    PartitionPieces p(body);
    for (const Polygon& q : parts) p.add(q);
    return p;
}

PartitionPieces vertical_halves() {
    return split(square, {Polygon::rectangle(0, 0, 0.5, 1), Polygon::rectangle(0.5, 0, 1, 1)});
}

PartitionPieces horizontal_halves() {
    return split(square, {Polygon::rectangle(0, 0, 1, 0.5), Polygon::rectangle(0, 0.5, 1, 1)});
}

const EigenResult& square_modes() {
    static const EigenResult e = spectrum(square, BoundaryCondition::Neumann, 4, 0.05, 3);
    return e;
}

CertConfig quick_config() {
    CertConfig c;
    c.cache = std::make_shared<FemCache>();
    return c;
}

} // namespace

TEST_CASE("certify_lower examples") {
    const auto two = certify_lower(square, vertical_halves());
    CHECK(two.l == 2);
    CHECK(two.multiplicity == 1);
    CHECK(two.h_min_lower == doctest::Approx(1.0 / std::sqrt(1.25)).epsilon(1e-12));
    CHECK(two.lambda_lower == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(two.lambda_lower == two.h_min_lower * two.h_min_lower / 4.0);
    CHECK(two.lambda_lower <= square_modes().spectrum.values[2]);

    const auto one = certify_lower(square, split(square, {square}));
    CHECK(one.l == 1);
    CHECK(one.lambda_lower == doctest::Approx(0.125).epsilon(1e-12));

    // Missing piece and overlapping pieces are both rejected.
    CHECK_THROWS_AS(certify_lower(square, split(square, {Polygon::rectangle(0, 0, 0.5, 1)})), std::invalid_argument);
    CHECK_THROWS_AS(certify_lower(square, split(square, {Polygon::rectangle(0, 0, 0.6, 1), Polygon::rectangle(0.4, 0, 1, 1)})),
                    std::invalid_argument);
}

TEST_CASE("multiplicity") {
    std::vector<ConvexBody> halves{ConvexBody(Polygon::rectangle(0, 0, 0.5, 1)), ConvexBody(Polygon::rectangle(0.5, 0, 1, 1))};
    CHECK(multiplicity(halves, square, 20'000, 1) == 1);
    std::vector<ConvexBody> overlapping{ConvexBody(Polygon::rectangle(0, 0, 0.6, 1)),
                                        ConvexBody(Polygon::rectangle(0.4, 0, 1, 1))};
    CHECK(multiplicity(overlapping, square, 20'000, 1) == 2);
    std::vector<ConvexBody> short_cover{ConvexBody(Polygon::rectangle(0, 0, 0.5, 1))};
    CHECK_THROWS_AS(multiplicity(short_cover, square, 20'000, 1), std::domain_error);

    const auto parts = net_partition(ConvexBody(testing::random_hull(3, 12)), 5, 2);
    std::vector<ConvexBody> cells(parts.pieces.begin(), parts.pieces.end());
    CHECK(multiplicity(cells, parts.parent, 20'000, 4) == 1);
}

TEST_CASE("net_partition") {
    for (std::size_t l = 1; l <= 8; ++l) {
        const auto parts = net_partition(square, l, 1);
        CHECK(parts.pieces.size() == l);
        CHECK(is_partition(parts));
    }
}

TEST_CASE("gram determinant") {
    const EigenResult& e = square_modes();
    CHECK(gram_determinant(e, 3) == doctest::Approx(1.0).epsilon(1e-6));

    EigenResult dup = e;
    dup.vectors[2] = dup.vectors[1];
    CHECK(gram_determinant(dup, 2) < 1e-10);
    CHECK_THROWS_AS(bisect_combination(dup, vertical_halves(), 1), std::invalid_argument);
}

TEST_CASE("bisection defects are exact") {
    const auto mesh = square_modes().mesh;
    // f = x - 0.3 splits the left half 0.4 / 0.6 and the right half 1 / 0.
    const auto f = P1Field::interpolate(mesh, [](Point2 p) { return p.x - 0.3; });
    const auto d = bisection_defects(f, vertical_halves());
    CHECK(d[0] == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(d[1] == doctest::Approx(0.5).epsilon(1e-9));
    // Pieces that do not follow mesh edges are clipped exactly.
    const auto tilted = split(square, {Polygon({{0, 0}, {1, 0}, {0, 1}}), Polygon({{1, 0}, {1, 1}, {0, 1}})});
    const auto g = P1Field::interpolate(mesh, [](Point2 p) { return p.y - p.x; });
    for (double v : bisection_defects(g, tilted)) CHECK(v == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("bisect_combination on the unit square") {
    const EigenResult& e = square_modes();
    SUBCASE("l = 1 needs no constant") {
        const auto r = bisect_combination(e, split(square, {square}), 5);
        CHECK(r.converged);
        CHECK(r.max_defect <= 1e-3);
        CHECK(std::abs(r.coefficients[0]) < 0.05);
    }
    for (std::size_t l = 1; l <= 3; ++l) {
        CAPTURE(l);
        const PartitionPieces parts = l == 2 ? vertical_halves() : net_partition(square, l, 1);
        const auto cert = certify_lower(square, parts);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto r = bisect_combination(e, parts, seed);
            CHECK(r.converged);
            CHECK(r.max_defect <= 1e-3);
            double n2 = 0;
            for (double c : r.coefficients) n2 += c * c;
            CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
            const P1Field f = combination(e, r.coefficients);
            const auto exact = bisection_defects(f, parts);
            CHECK(*std::max_element(exact.begin(), exact.end()) == doctest::Approx(r.max_defect).epsilon(1e-9));
            const auto chain = rayleigh_chain_verify(f, parts, cert);
            CHECK(chain.plus.pass);
            CHECK(chain.minus.pass);
        }
    }
}

TEST_CASE("rayleigh_chain_verify examples") {
    const auto mesh = square_modes().mesh;
    const auto parts = horizontal_halves();
    const auto cert = certify_lower(square, parts);
    const auto f = P1Field::interpolate(mesh, [](Point2 p) { return p.x - 0.5; });
    const auto chain = rayleigh_chain_verify(f, parts, cert);
    CHECK(chain.plus.lhs == doctest::Approx(1.0 / 24.0).epsilon(1e-9));
    CHECK(chain.minus.lhs == doctest::Approx(1.0 / 24.0).epsilon(1e-9));
    // 4 M^2 / h^2 = 5 and the gradient energy of each part is 1/2.
    CHECK(chain.plus.rhs == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(chain.pass);

    const auto constant = P1Field::interpolate(mesh, [](Point2) { return 1.0; });
    CHECK_THROWS_AS(rayleigh_chain_verify(constant, parts, cert), std::invalid_argument);
}

TEST_CASE("mthm1_run") {
    const CertConfig cfg = quick_config();
    SUBCASE("unit square, k = 2") {
        const auto rep = mthm1_run(square, square, 2, cfg);
        CHECK(rep.net_ok);
        CHECK(rep.sites == 1);
        CHECK(rep.certificate->l == 1);
        CHECK(rep.diameters_ok);
        CHECK(rep.theorem_bound == doctest::Approx(1.0 / (4 * 64 * rep.R * rep.R)));
        CHECK(rep.certificate->lambda_lower <= pi2);
        CHECK(rep.sound);
        CHECK(rep.fem_lambda_target == doctest::Approx(pi2).epsilon(0.02));
    }
    SUBCASE("diagonal needle") {
        const double w = 0.05, L = std::sqrt(2.0) - w;
        const Point2 u{std::sqrt(0.5), std::sqrt(0.5)}, nrm{-std::sqrt(0.5), std::sqrt(0.5)};
        const Point2 a = Point2{0.5, 0.5} + (-L / 2) * u, b = Point2{0.5, 0.5} + (L / 2) * u;
        const Polygon needle({a + (-w / 2) * nrm, b + (-w / 2) * nrm, b + (w / 2) * nrm, a + (w / 2) * nrm});
        const auto rep = mthm1_run(needle, square, 2, cfg);
        CHECK(rep.sound);
        CHECK(rep.diameters_ok);
        // lambda_2(square) / lambda_1(needle) ~ pi^2 / (pi^2 / L^2).
        const double ratio = rep.lambda_k_source / rep.fem_lambda_target;
        CHECK(ratio == doctest::Approx(L * L).epsilon(0.1));
        CHECK(std::isfinite(rep.empirical_constant));
    }
    SUBCASE("scaling invariance") {
        const Polygon in = testing::random_hull(5, 12);
        const Polygon out = scale(in, 1.0);
        const auto a = mthm1_run(in, out, 4, cfg);
        const auto b = mthm1_run(scale(in, 3.0), scale(out, 3.0), 4, cfg);
        CHECK(b.R == doctest::Approx(3.0 * a.R).epsilon(1e-6));
        CHECK(b.sites == a.sites);
        CHECK(b.empirical_constant == doctest::Approx(a.empirical_constant).epsilon(1e-6));
        CHECK(a.sound);
        CHECK(b.sound);
    }
    CHECK_THROWS_AS(mthm1_run(Polygon::rectangle(0, 0, 2, 1), square, 2, cfg), std::invalid_argument);
    CHECK_THROWS_AS(mthm1_run(square, square, 1, cfg), std::invalid_argument);
}

TEST_CASE("lem_mthm2_run") {
    const CertConfig cfg = quick_config();
    SUBCASE("inner = outer") {
        const auto rep = lem_mthm2_run(square, square, 3, cfg);
        CHECK(rep.hausdorff == 0.0);
        CHECK(rep.claim_holds);
        CHECK(rep.sound);
    }
    SUBCASE("shrunken square, k = 3") {
        // (1 - 2 eps)^2 >= 1 - 1/9.
        const double eps = 0.5 * (1.0 - std::sqrt(8.0 / 9.0)) * 0.99;
        const Polygon in = Polygon::rectangle(eps, eps, 1 - eps, 1 - eps);
        const auto rep = lem_mthm2_run(in, square, 3, cfg);
        CHECK(rep.hausdorff == doctest::Approx(eps * std::sqrt(2.0)).epsilon(1e-12));
        CHECK(rep.hausdorff_sampled <= rep.hausdorff + 1e-12);
        CHECK(rep.hausdorff_sampled >= rep.hausdorff - 1e-12); // corners are sampled
        CHECK(rep.claim_holds);
        CHECK(rep.diameters_ok);
        CHECK(rep.sound);
        CHECK(rep.certificate->lambda_lower <= rep.fem_lambda_l * (1 + cfg.slack));
    }
    CHECK_THROWS_AS(lem_mthm2_run(Polygon::rectangle(0.2, 0.2, 0.8, 0.8), square, 3, cfg), std::invalid_argument);
}

TEST_CASE("mthm2_scale") {
    CHECK(mthm2_scale(1.0, 2, 3) == 2.0);
    CHECK(mthm2_scale(1.0 - 1e-300, 2, 3) == 2.0);
    CHECK(mthm2_scale(0.64 / 4, 2, 3) == doctest::Approx(2 * 2 * std::log(3.0) / -std::log(1 - 0.16)));
    CHECK(mthm2_scale(0.25, 2, 3) > mthm2_scale(0.5, 2, 3));
    CHECK_THROWS_AS(mthm2_scale(0.0, 2, 3), std::invalid_argument);
}

TEST_CASE("mthm2_run") {
    const CertConfig cfg = quick_config();
    SUBCASE("symmetric square pair") {
        const auto rep = mthm2_run(Polygon::rectangle(-0.4, -0.4, 0.4, 0.4), Polygon::rectangle(-1, -1, 1, 1), 3, cfg);
        CHECK(rep.symmetric);
        CHECK(rep.v == doctest::Approx(0.16));
        CHECK(rep.r == doctest::Approx(mthm2_scale(0.16, 2, 3)));
        CHECK(rep.measure_ok);
        CHECK(rep.outside_measure == doctest::Approx(0.0));
        CHECK(rep.scaling_ratio == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.step1.sound);
        CHECK(rep.step2.sound);
        CHECK(rep.sound);
        CHECK(rep.empirical_constant > 0);
    }
    SUBCASE("general triangle") {
        const Polygon tri({{-0.5, -0.3}, {0.4, -0.2}, {0.0, 0.5}});
        const auto rep = mthm2_run(tri, Polygon::rectangle(-1, -1, 1, 1), 3, cfg);
        CHECK_FALSE(rep.symmetric);
        CHECK(rep.overlap_ratio >= 0.25);
        CHECK(rep.v_effective == doctest::Approx(rep.v / 4));
        CHECK(rep.measure_ok);
        CHECK(rep.sound);
    }
    CHECK_THROWS_AS(mthm2_run(square, square, 2, cfg), std::invalid_argument);
}

TEST_CASE("fem cache") {
    auto cache = std::make_shared<FemCache>();
    const auto a = cache->get(square, BoundaryCondition::Neumann, 2, 0.2, 1);
    const auto b = cache->get(square, BoundaryCondition::Neumann, 2, 0.2, 1);
    CHECK(a.get() == b.get());
    CHECK(cache->size() == 1);
    cache->get(square, BoundaryCondition::Neumann, 2, 0.2, 2);
    CHECK(cache->size() == 2);
}
