#pragma once

#include "sandwich/fem.hpp"
#include "sandwich/geometry.hpp"
#include "sandwich/mesh.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sandwich {

/// Straight cut {dot(u, x) = offset} with u = (cos direction, sin direction).
/// Side 0 is dot(u, x) <= offset. ratio_i = chord / area(side_i).
struct CutCandidate {
    double direction = 0.0;
    double offset = 0.0;
    double ratio0 = 0.0;
    double ratio1 = 0.0;
    double score = 0.0; // max(ratio0, ratio1)
};

struct CheegerBounds {
    double lower = 0.0; // 1 / diameter
    double upper = 0.0; // best half-plane cut
    std::string lower_source = "inverse-diameter";
    CutCandidate upper_witness;
};

/// Certified lower bound 1/diam for the Cheeger constant of a convex body.
double cheeger_lower(const ConvexBody& body);

struct SweepOptions {
    int directions = 180;
    int offsets = 200;
};

/// Sweeps directions i*pi/directions and offsets at the interior fractions
/// j/offsets of the projected width; the smallest score is an upper bound
/// for h. Cuts leaving a side below 1e-9 of the area are skipped. Ties go to
/// the lowest (direction, offset) index.
CheegerBounds cheeger_upper(const Polygon& poly, const SweepOptions& options = {});
CheegerBounds cheeger_upper_serial(const Polygon& poly, const SweepOptions& options = {});

/// A value m with area{f >= m} >= A/2 and area{f <= m} >= A/2, by bisection.
double median(const P1Field& field);

struct PoincareResult {
    double lhs = 0.0; // h_lower * ||f - m||_1 / A
    double rhs = 0.0; // ||grad f||_1 / A
    double median = 0.0;
    bool pass = false;
};

/// (1,1)-Poincare inequality with a certified lower bound for h.
PoincareResult poincare_check(const P1Field& field, double h_lower);

/// Pairwise-disjoint subsets of a body with prescribed normalized masses.
struct SeparationWitness {
    std::vector<double> kappas;
    std::vector<Polygon> sets;
    std::vector<double> masses; // area(set) / area(body)
    double min_distance = 0.0;
    std::string family;         // "slabs" or "balls"
    std::uint64_t seed = 0;
};

struct SeparationOptions {
    int directions = 360;  // slab sweep over [0, 2 pi)
    int iterations = 500;  // ball-site perturbation steps
    int ball_sides = 64;   // polygonal balls
    int evaluate_every = 10;
};

/// Lower-bound witness for the separation distance sep(body; kappas). Two
/// families are tried: parallel slabs with equal gaps (for every direction)
/// and polygonal balls around sites that are spread apart by a seeded random
/// perturbation chain independent of the kappas. The best candidate is
/// re-verified exactly. Since each candidate distance only shrinks as a kappa
/// grows, the result is monotone in the kappas for a fixed seed.
/// Throws std::invalid_argument for fewer than two kappas, nonpositive kappas
/// or a total above 1; std::domain_error when no candidate is feasible.
SeparationWitness sep_lower(const ConvexBody& body, const std::vector<double>& kappas, std::uint64_t seed,
                            const SeparationOptions& options = {});

struct ReductionReport {
    double sep_lower = 0.0;
    double lambda_k = 0.0;
    double max_log = 0.0; // max over i != j of log(1 / (kappa_i kappa_j))
    double c_emp = 0.0;   // (sep sqrt(lambda_k) / max_log)^(1 / (k - l + 1))
};

/// Empirical constant in sep(body; kappa_0..kappa_l) <= c^(k-l+1) max log / sqrt(lambda_k).
/// `kappas` has l + 1 entries and `eigen` must hold Neumann values up to k.
ReductionReport reduction_consistency(const ConvexBody& body, std::size_t k, std::size_t l,
                                      const std::vector<double>& kappas, const EigenResult& eigen,
                                      std::uint64_t seed);

struct MilmanResult {
    double v = 0.0;          // area(inner) / area(outer)
    double lhs = 0.0;        // cheeger_upper(outer)
    double rhs = 0.0;        // v^2 cheeger_lower(inner)
    bool pass = false;
};

/// h_upper(outer) >= v^2 h_lower(inner). Throws unless inner ⊆ outer.
MilmanResult milman_consistency(const ConvexBody& inner, const ConvexBody& outer,
                                const SweepOptions& options = {});

struct DiamEigenResult {
    double diameter = 0.0;
    double lambda_k = 0.0;
    double c_emp = 0.0;         // diam sqrt(lambda_k) / (n k)
    double inverse_upper = 0.0; // 1 / cheeger_upper
    bool pass = false;          // diam >= 1 / h_upper
};

DiamEigenResult diam_eigen_check(const ConvexBody& body, std::size_t k, const Spectrum& spectrum,
                                 const SweepOptions& options = {});

} // namespace sandwich
