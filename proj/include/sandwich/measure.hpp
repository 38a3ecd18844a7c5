#pragma once

#include "sandwich/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sandwich {

/// Fraction of the ambient body's normalized measure, with its binomial
/// standard error sqrt(value (1 - value) / samples).
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Membership test; called concurrently, so it must be pure.
using Region = std::function<bool(Point2)>;

/// Samples are drawn in chunks of this many accepted points; chunk c uses
/// stream c of the seed, so estimates do not depend on the thread count.
inline constexpr std::size_t kMcChunk = 4096;

/// Uniform samples of `ambient` by rejection from its bounding box; returns
/// the fraction that lands in `region`. Throws std::domain_error when the
/// ambient body fills less than 1% of its bounding box, and
/// std::invalid_argument for fewer than 1000 samples.
McEstimate mc_measure(const Region& region, const ConvexBody& ambient, std::size_t samples, std::uint64_t seed);
McEstimate mc_measure_serial(const Region& region, const ConvexBody& ambient, std::size_t samples,
                             std::uint64_t seed);

/// Several regions evaluated on the same sample points (parallel).
std::vector<McEstimate> mc_measure_many(std::span<const Region> regions, const ConvexBody& ambient,
                                        std::size_t samples, std::uint64_t seed);

/// Outcome of one inequality audit lhs <= rhs (or >=, per check).
struct CheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double std_error = 0.0; // zero for exact evaluations
    bool pass = false;
    std::uint64_t seed = 0;
};

/// mu(outer \ r inner) <= (1 - mu(inner))^((r + 1) / 2), mu normalized on
/// outer. Polygon pairs are evaluated exactly; disks use Monte Carlo with
/// both sides measured on one sample set. Passes when lhs <= rhs + 3 sigma.
/// Throws for a non-symmetric inner, inner not inside outer, or r < 1.
CheckResult guedon_check(const ConvexBody& inner, const ConvexBody& outer, double r, std::size_t samples,
                         std::uint64_t seed);

struct SteinCenter {
    Point2 center;
    double overlap_ratio = 0.0; // area(P ∩ (2c - P)) / area(P)
};

/// Center maximizing the area of (P - c) ∩ -(P - c): a grid x grid search over
/// the bounding box, then `refinements` rounds of compass search with halving
/// steps.
SteinCenter stein_center(const Polygon& poly, int grid = 21, int refinements = 40);

/// mu(B(x, R) ∩ body) >= min(1, (R / diam)^n), mu normalized on the body.
CheckResult bishop_gromov_check(const ConvexBody& body, Point2 x, double R, std::size_t samples,
                                std::uint64_t seed);

} // namespace sandwich
