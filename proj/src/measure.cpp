#include "sandwich/measure.hpp"

#include "sandwich/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sandwich {

namespace {

struct Sampler {
    Point2 lo, span;
    const ConvexBody* body;
};

Sampler make_sampler(const ConvexBody& ambient, std::size_t samples) {
    if (samples < 1000) throw std::invalid_argument("mc_measure: at least 1000 samples required");
    const auto [lo, hi] = ambient.bounds();
    const Point2 span = hi - lo;
    const double efficiency = volume(ambient) / (span.x * span.y);
    if (!(efficiency >= 0.01))
        throw std::domain_error("mc_measure: rejection efficiency " + std::to_string(efficiency) +
                                " is below 1% of the bounding box");
    return {lo, span, &ambient};
}

// Counts of accepted points inside each region for one chunk.
void run_chunk(const Sampler& s, std::span<const Region> regions, std::uint64_t seed, std::size_t chunk,
               std::size_t want, std::size_t* counts) {
    const CounterRng rng(seed, chunk);
    const std::uint64_t cap = 200 * static_cast<std::uint64_t>(want) + 1000;
    std::size_t accepted = 0;
    for (std::uint64_t j = 0; accepted < want; ++j) {
        if (j == cap) throw std::domain_error("mc_measure: rejection sampling stalled");
        const Point2 p{s.lo.x + s.span.x * rng.uniform_at(2 * j), s.lo.y + s.span.y * rng.uniform_at(2 * j + 1)};
        if (!s.body->contains(p, 0.0)) continue;
        ++accepted;
        for (std::size_t r = 0; r < regions.size(); ++r)
            if (regions[r](p)) ++counts[r];
    }
}

std::vector<McEstimate> finish(const std::vector<std::size_t>& counts, std::size_t regions, std::size_t chunks,
                               std::size_t samples, std::uint64_t seed) {
    std::vector<McEstimate> out(regions);
    for (std::size_t r = 0; r < regions; ++r) {
        std::size_t hits = 0;
        for (std::size_t c = 0; c < chunks; ++c) hits += counts[c * regions + r];
        const double v = static_cast<double>(hits) / static_cast<double>(samples);
        out[r] = {v, std::sqrt(v * (1.0 - v) / static_cast<double>(samples)), samples, seed};
    }
    return out;
}

std::vector<McEstimate> measure(std::span<const Region> regions, const ConvexBody& ambient, std::size_t samples,
                                std::uint64_t seed, bool parallel) {
    const Sampler s = make_sampler(ambient, samples);
    const std::size_t chunks = (samples + kMcChunk - 1) / kMcChunk;
    const std::size_t nr = regions.size();
    std::vector<std::size_t> counts(chunks * nr, 0);
    auto want = [&](std::size_t c) { return std::min(kMcChunk, samples - c * kMcChunk); };
    if (parallel) {
        bool failed = false;
        const auto n = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t c = 0; c < n; ++c) {
            const auto cc = static_cast<std::size_t>(c);
            try {
                run_chunk(s, regions, seed, cc, want(cc), counts.data() + cc * nr);
            } catch (const std::domain_error&) {
#pragma omp atomic write
                failed = true;
            }
        }
        if (failed) throw std::domain_error("mc_measure: rejection sampling stalled");
    } else {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(s, regions, seed, c, want(c), counts.data() + c * nr);
    }
    return finish(counts, nr, chunks, samples, seed);
}

double polygon_fraction(const Polygon& part, const Polygon& whole) {
    const auto both = intersect(part, whole);
    return both ? both->area() / whole.area() : 0.0;
}

} // namespace

McEstimate mc_measure(const Region& region, const ConvexBody& ambient, std::size_t samples, std::uint64_t seed) {
    return measure(std::span(&region, 1), ambient, samples, seed, true).front();
}

McEstimate mc_measure_serial(const Region& region, const ConvexBody& ambient, std::size_t samples,
                             std::uint64_t seed) {
    return measure(std::span(&region, 1), ambient, samples, seed, false).front();
}

std::vector<McEstimate> mc_measure_many(std::span<const Region> regions, const ConvexBody& ambient,
                                        std::size_t samples, std::uint64_t seed) {
    return measure(regions, ambient, samples, seed, true);
}

CheckResult guedon_check(const ConvexBody& inner, const ConvexBody& outer, double r, std::size_t samples,
                         std::uint64_t seed) {
    if (!(r >= 1.0)) throw std::invalid_argument("guedon_check: r must be >= 1");
    if (!is_centrally_symmetric(inner)) throw std::invalid_argument("guedon_check: inner body is not symmetric");
    if (!contains(outer, inner)) throw std::invalid_argument("guedon_check: inner body is not inside outer");
    const double exponent = 0.5 * (r + 1.0);
    CheckResult res;
    res.seed = seed;
    if (!inner.is_disk() && !outer.is_disk()) {
        const Polygon in = as_polygon(inner), out = as_polygon(outer);
        const double mu = polygon_fraction(in, out);
        res.lhs = std::max(0.0, 1.0 - polygon_fraction(scale(in, r), out));
        res.rhs = std::pow(1.0 - mu, exponent);
        res.pass = res.lhs <= res.rhs + 1e-12;
        return res;
    }
    const ConvexBody grown = scale(inner, r);
    const Region regions[] = {[&](Point2 p) { return !grown.contains(p, 0.0); },
                              [&](Point2 p) { return inner.contains(p, 0.0); }};
    const auto est = mc_measure_many(regions, outer, samples, seed);
    res.lhs = est[0].value;
    const double base = 1.0 - est[1].value;
    res.rhs = std::pow(base, exponent);
    // Delta-method error of the right side, combined with the left.
    const double drhs = exponent * std::pow(base, exponent - 1.0) * est[1].std_error;
    res.std_error = std::hypot(est[0].std_error, drhs);
    res.pass = res.lhs <= res.rhs + 3.0 * res.std_error;
    return res;
}

SteinCenter stein_center(const Polygon& poly, int grid, int refinements) {
    if (grid < 1 || refinements < 0) throw std::invalid_argument("stein_center: bad search parameters");
    const double total = poly.area();
    auto overlap = [&](Point2 c) {
        if (!contains(poly, c, 0.0)) return 0.0;
        const auto both = intersect(poly, translate(reflect(poly), 2.0 * c));
        return both ? both->area() : 0.0;
    };
    const ConvexBody body(poly);
    const auto [lo, hi] = body.bounds();
    SteinCenter best{poly.centroid(), 0.0};
    double best_area = overlap(best.center);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Point2 c{lo.x + (hi.x - lo.x) * (i + 0.5) / grid, lo.y + (hi.y - lo.y) * (j + 0.5) / grid};
            const double a = overlap(c);
            if (a > best_area) {
                best_area = a;
                best.center = c;
            }
        }
    double step = std::max(hi.x - lo.x, hi.y - lo.y) / grid;
    for (int round = 0; round < refinements; ++round) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (Point2 d : {Point2{1, 0}, Point2{-1, 0}, Point2{0, 1}, Point2{0, -1}}) {
                const Point2 c = best.center + step * d;
                const double a = overlap(c);
                if (a > best_area) {
                    best_area = a;
                    best.center = c;
                    moved = true;
                }
            }
        }
        step *= 0.5;
    }
    best.overlap_ratio = best_area / total;
    return best;
}

CheckResult bishop_gromov_check(const ConvexBody& body, Point2 x, double R, std::size_t samples,
                                std::uint64_t seed) {
    if (!(R > 0.0)) throw std::invalid_argument("bishop_gromov_check: R must be positive");
    if (!body.contains(x)) throw std::invalid_argument("bishop_gromov_check: center outside the body");
    const auto est = mc_measure([&](Point2 p) { return distance(p, x) <= R; }, body, samples, seed);
    CheckResult res;
    res.lhs = est.value;
    res.std_error = est.std_error;
    res.rhs = std::min(1.0, std::pow(R / diameter(body), static_cast<double>(body.dimension())));
    res.pass = res.lhs >= res.rhs - 3.0 * res.std_error;
    res.seed = seed;
    return res;
}

} // namespace sandwich
