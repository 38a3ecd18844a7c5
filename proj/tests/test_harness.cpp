#include "doctest.h"

#include "sandwich/harness.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace sandwich;
namespace hs = sandwich::harness;

namespace {
const double pi2 = std::numbers::pi * std::numbers::pi;
}

TEST_CASE("builtin domains") {
    CHECK(volume(hs::parse_builtin("square")) == doctest::Approx(1.0));
    const ConvexBody box = hs::parse_builtin("box:2x0.5");
    CHECK(box.is_box());
    CHECK(volume(box) == doctest::Approx(1.0));
    CHECK(hs::parse_builtin("disk:0.5").disk().radius == 0.5);
    const ConvexBody needle = hs::parse_builtin("needle:1.4142:0.05");
    CHECK(diameter(needle) == doctest::Approx(std::hypot(1.4142, 0.05)));
    CHECK(hs::parse_builtin("lp2d:1.5").is_polygon());
    for (const char* bad : {"box:2", "box:2x", "disk:-1", "needle:1", "lp2d:0.5", "circle", "square:1", "disk:1e"})
        CHECK_THROWS_AS(hs::parse_builtin(bad), std::invalid_argument);
}

TEST_CASE("l_p balls") {
    CHECK(hs::lp_ball(1.0).area() == doctest::Approx(2.0));
    const int n = 128;
    CHECK(hs::lp_ball(2.0, n).area() == doctest::Approx(0.5 * n * std::sin(2 * std::numbers::pi / n)));
    double prev = 0;
    for (double p : {1.0, 1.25, 1.5, 1.75, 2.0}) {
        const double a = hs::lp_ball(p).area();
        CHECK(a > prev);
        prev = a;
        CHECK(is_centrally_symmetric(ConvexBody(hs::lp_ball(p))));
    }
}

TEST_CASE("corpus and nested pairs") {
    const auto& c = hs::corpus();
    CHECK(c.size() >= 10);
    double max_aspect = 0;
    for (const auto& d : c) {
        const auto [lo, hi] = ConvexBody(d.polygon).bounds();
        max_aspect = std::max(max_aspect, (hi.x - lo.x) / (hi.y - lo.y));
    }
    CHECK(max_aspect == doctest::Approx(40.0));
    for (const auto& p : hs::nested_pairs()) {
        CAPTURE(p.id);
        CHECK(contains(ConvexBody(p.outer), ConvexBody(p.inner)));
        CHECK(p.inner.area() < p.outer.area());
    }
    const Polygon s = hs::seeded_symmetric_hull(3, 7);
    CHECK(is_centrally_symmetric(ConvexBody(s)));
    CHECK(hs::seeded_hull(3, 12).area() == hs::seeded_hull(3, 12).area());
}

TEST_CASE("spectrum command examples") {
    const auto square = hs::parse_builtin("square");
    const auto n = spectrum(square, BoundaryCondition::Neumann, 3, pipeline_mesh_size(square, 0.1), 1);
    CHECK(n.spectrum.values[1] == doctest::Approx(pi2).epsilon(0.01));
    CHECK(n.spectrum.values[2] == doctest::Approx(pi2).epsilon(0.01));
    CHECK(n.spectrum.values[3] == doctest::Approx(2 * pi2).epsilon(0.01));
    const auto needle = hs::parse_builtin("needle:1.4142:0.05");
    const auto e = spectrum(needle, BoundaryCondition::Neumann, 1, pipeline_mesh_size(needle, 0.1), 1);
    CHECK(e.spectrum.values[1] == doctest::Approx(pi2 / 2).epsilon(0.01));
    const auto box = hs::parse_builtin("box:1x1");
    const auto d = spectrum(box, BoundaryCondition::Dirichlet, 1, pipeline_mesh_size(box, 0.1), 1);
    CHECK(d.spectrum.values[0] == doctest::Approx(2 * pi2).epsilon(0.01));
}

TEST_CASE("csv and baseline plumbing") {
    hs::ExperimentReport r;
    r.suite = "demo";
    r.instances = hs::json::array({{{"a", 1}, {"b", "x,y"}, {"nested", {1, 2}}}, {{"a", 2.5}, {"c", true}}});
    CHECK(hs::to_csv(r) == "a,b,c\n1,\"x,y\",\n2.5,,true\n");

    const hs::Baseline base{{"s.x", 1.0}, {"s.y", 2.0}, {"s.z", 3.0}};
    const hs::Baseline now{{"s.x", 1.09}, {"s.y", 2.3}};
    const auto d = hs::compare_baseline(base, now);
    REQUIRE(d.size() == 3);
    CHECK(d[0].within);
    CHECK_FALSE(d[1].within);
    CHECK_FALSE(d[2].within);
}

TEST_CASE("report json") {
    const Polygon sq = Polygon::rectangle(0, 0, 1, 1);
    PartitionPieces parts(sq);
    parts.add(sq);
    PartitionCertificate cert = certify_lower(sq, parts);
    cert.domain_id = "square";
    cert.seeds = {4};
    const auto j = hs::certificate_json(cert, pi2, CertConfig{}, 2.0);
    for (const char* key : {"domain_id", "l", "M", "h_min_lower", "lambda_lower", "fem_lambda", "slack", "c_sep_final",
                            "seeds", "piece_diameters"})
        CHECK(j.contains(key));
    CHECK(j["lambda_lower"].get<double>() == doctest::Approx(0.125));

    hs::RunOptions opt;
    opt.seed = 3;
    const auto needle = hs::run_experiment("needle", opt);
    CHECK(needle.summary["monotone_trend"].get<bool>());
    CHECK(needle.to_json(false).dump() == hs::run_experiment("needle", opt).to_json(false).dump());
    CHECK_FALSE(needle.to_json(false).contains("timestamp"));
    CHECK(needle.to_json(true).contains("timestamp"));
    for (const auto& inst : needle.instances) {
        CHECK(inst.contains("seed"));
        CHECK(inst.contains("h"));
    }
    CHECK_THROWS_AS(hs::run_suite("nope", opt), std::invalid_argument);
}
