#include "sandwich/cheeger.hpp"

#include "sandwich/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sandwich {

double cheeger_lower(const ConvexBody& body) { return 1.0 / diameter(body); }

// --- cut sweep -------------------------------------------------------------

namespace {

struct Projection {
    double lo, hi;
};

Projection project(const Polygon& poly, Point2 u) {
    Projection p{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Point2& v : poly.vertices()) {
        p.lo = std::min(p.lo, dot(u, v));
        p.hi = std::max(p.hi, dot(u, v));
    }
    return p;
}

double side_area(const Polygon& poly, const Halfplane& h) {
    const auto part = clip_halfplane(poly, h);
    return part ? part->area() : 0.0;
}

// Best cut for direction index i; score is infinite when every cut is degenerate.
CutCandidate best_cut(const Polygon& poly, double area, int i, const SweepOptions& o) {
    const double theta = std::numbers::pi * i / o.directions;
    const Point2 u{std::cos(theta), std::sin(theta)};
    const Projection pr = project(poly, u);
    CutCandidate best;
    best.score = std::numeric_limits<double>::infinity();
    for (int j = 1; j < o.offsets; ++j) {
        const double s = pr.lo + (pr.hi - pr.lo) * j / o.offsets;
        const Halfplane h{u, s};
        const double a0 = side_area(poly, h);
        const double a1 = area - a0;
        if (a0 < 1e-9 * area || a1 < 1e-9 * area) continue;
        const double chord = chord_length(poly, h);
        const CutCandidate c{theta, s, chord / a0, chord / a1, std::max(chord / a0, chord / a1)};
        if (c.score < best.score) best = c;
    }
    return best;
}

CheegerBounds finish(const Polygon& poly, const std::vector<CutCandidate>& per_direction) {
    CheegerBounds b;
    b.lower = 1.0 / diameter(poly);
    b.upper = std::numeric_limits<double>::infinity();
    for (const CutCandidate& c : per_direction)
        if (c.score < b.upper) {
            b.upper = c.score;
            b.upper_witness = c;
        }
    if (!std::isfinite(b.upper)) throw std::domain_error("cheeger_upper: every cut is degenerate");
    return b;
}

void check_sweep(const SweepOptions& o) {
    if (o.directions < 1 || o.offsets < 2) throw std::invalid_argument("cheeger_upper: sweep too coarse");
}

} // namespace

CheegerBounds cheeger_upper(const Polygon& poly, const SweepOptions& options) {
    check_sweep(options);
    const double area = poly.area();
    std::vector<CutCandidate> per_direction(static_cast<std::size_t>(options.directions));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < options.directions; ++i)
        per_direction[static_cast<std::size_t>(i)] = best_cut(poly, area, i, options);
    return finish(poly, per_direction);
}

CheegerBounds cheeger_upper_serial(const Polygon& poly, const SweepOptions& options) {
    check_sweep(options);
    const double area = poly.area();
    std::vector<CutCandidate> per_direction(static_cast<std::size_t>(options.directions));
    for (int i = 0; i < options.directions; ++i)
        per_direction[static_cast<std::size_t>(i)] = best_cut(poly, area, i, options);
    return finish(poly, per_direction);
}

// --- median and Poincare -----------------------------------------------------

double median(const P1Field& field) {
    const auto [mn, mx] = std::minmax_element(field.values.begin(), field.values.end());
    double lo = *mn, hi = *mx;
    if (lo == hi) return lo;
    const double half = 0.5 * field.mesh->area();
    // Invariant: area{f >= lo} >= A/2 > area{f >= hi}.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (positive_measure(field + (-mid)) >= half)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

PoincareResult poincare_check(const P1Field& field, double h_lower) {
    PoincareResult r;
    const double area = field.mesh->area();
    r.median = median(field);
    r.lhs = h_lower * l1_norm(field + (-r.median)) / area;
    r.rhs = gradient_l1(field) / area;
    r.pass = r.lhs <= r.rhs * (1.0 + 1e-9);
    return r;
}

// --- separation witnesses --------------------------------------------------

namespace {

struct SepCandidate {
    std::vector<Polygon> sets;
    double distance = -1.0; // negative: infeasible
    std::string family;
};

// Smallest value in [lo, hi] (up to bisection resolution) where mass(x) >= target.
template <class Mass>
double bisect_up(Mass&& mass, double lo, double hi, double target) {
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mass(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double min_pair_distance(const std::vector<Polygon>& sets, double area) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            const auto both = intersect(sets[i], sets[j]);
            if (both && both->area() > 1e-9 * area) return -1.0;
            best = std::min(best, both ? 0.0 : distance(sets[i], sets[j]));
        }
    return best;
}

// Slabs with fixed mass-quantile anchors i/m, each grown symmetrically in mass.
SepCandidate slab_candidate(const Polygon& poly, double area, double theta, const std::vector<double>& kappas) {
    const Point2 u{std::cos(theta), std::sin(theta)};
    const Projection pr = project(poly, u);
    auto below = [&](double t) { return side_area(poly, {u, t}) / area; };
    auto level = [&](double m) {
        if (m <= 0.0) return pr.lo;
        if (m >= 1.0) return pr.hi;
        return bisect_up(below, pr.lo, pr.hi, m);
    };
    const std::size_t m = kappas.size() - 1;
    SepCandidate c;
    c.family = "slabs";
    for (std::size_t i = 0; i <= m; ++i) {
        const double q = static_cast<double>(i) / static_cast<double>(m);
        const double lo = std::clamp(q - 0.5 * kappas[i], 0.0, 1.0 - kappas[i]);
        const double t0 = level(lo), t1 = level(lo + kappas[i]);
        auto piece = clip_halfplane(poly, {u, t1});
        if (piece && t0 > pr.lo) piece = clip_halfplane(*piece, {-1.0 * u, -t0});
        if (!piece) return c;
        c.sets.push_back(*piece);
    }
    c.distance = min_pair_distance(c.sets, area);
    return c;
}

Polygon ball_piece(const Polygon& poly, Point2 x, double r, int sides) {
    const auto p = intersect(Polygon::regular(sides, r, x), poly);
    if (!p) throw std::logic_error("ball_piece: empty");
    return *p;
}

SepCandidate ball_candidate(const Polygon& poly, double area, double diam, const std::vector<Point2>& sites,
                            const std::vector<double>& kappas, int sides) {
    SepCandidate c;
    c.family = "balls";
    for (std::size_t i = 0; i < sites.size(); ++i) {
        auto mass = [&](double r) {
            if (r <= 0.0) return 0.0;
            const auto p = intersect(Polygon::regular(sides, r, sites[i]), poly);
            return p ? p->area() / area : 0.0;
        };
        const double r = bisect_up(mass, 0.0, 1.01 * diam, kappas[i]);
        c.sets.push_back(ball_piece(poly, sites[i], r, sides));
    }
    c.distance = min_pair_distance(c.sets, area);
    return c;
}

double min_site_gap(const std::vector<Point2>& s) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) best = std::min(best, distance(s[i], s[j]));
    return best;
}

// Farthest-point initial sites from the vertices pulled toward the centroid.
std::vector<Point2> initial_sites(const Polygon& poly, std::size_t count, CounterRng& rng) {
    const Point2 g = poly.centroid();
    std::vector<Point2> pool;
    for (const Point2& v : poly.vertices()) pool.push_back(g + 0.9 * (v - g));
    const auto [lo, hi] = ConvexBody(poly).bounds();
    while (pool.size() < count + 8) {
        const Point2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (contains(poly, p, 0.0)) pool.push_back(p);
    }
    std::vector<Point2> sites{pool.front()};
    while (sites.size() < count) {
        std::size_t pick = 0;
        double far = -1.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (const Point2& s : sites) d = std::min(d, distance(pool[i], s));
            if (d > far) {
                far = d;
                pick = i;
            }
        }
        sites.push_back(pool[pick]);
    }
    return sites;
}

} // namespace

SeparationWitness sep_lower(const ConvexBody& body, const std::vector<double>& kappas, std::uint64_t seed,
                            const SeparationOptions& options) {
    if (kappas.size() < 2) throw std::invalid_argument("sep_lower: need at least two masses");
    double total = 0.0;
    for (double k : kappas) {
        if (!(k > 0.0)) throw std::invalid_argument("sep_lower: masses must be positive");
        total += k;
    }
    if (total > 1.0 + 1e-12) throw std::invalid_argument("sep_lower: masses sum above 1");
    const Polygon poly = as_polygon(body);
    const double area = poly.area();
    const double diam = diameter(poly);

    SepCandidate best;
    auto consider = [&best](SepCandidate c) {
        if (c.distance > best.distance) best = std::move(c);
    };
    for (int i = 0; i < options.directions; ++i)
        consider(slab_candidate(poly, area, 2.0 * std::numbers::pi * i / options.directions, kappas));

    CounterRng rng(seed, 0x736570);
    std::vector<Point2> sites = initial_sites(poly, kappas.size(), rng);
    double gap = min_site_gap(sites);
    const double step0 = diam / (4.0 * static_cast<double>(kappas.size()));
    for (int it = 0; it <= options.iterations; ++it) {
        if (it % options.evaluate_every == 0)
            consider(ball_candidate(poly, area, diam, sites, kappas, options.ball_sides));
        const std::size_t i = rng.next() % sites.size();
        const double step = step0 * std::pow(0.99, it);
        const Point2 moved = sites[i] + step * Point2{rng.normal(), rng.normal()};
        if (!contains(poly, moved, 0.0)) continue;
        const Point2 old = sites[i];
        sites[i] = moved;
        const double g = min_site_gap(sites);
        if (g > gap)
            gap = g;
        else
            sites[i] = old;
    }
    if (best.distance < 0.0) throw std::domain_error("sep_lower: no feasible disjoint family found");

    SeparationWitness w;
    w.kappas = kappas;
    w.family = best.family;
    w.seed = seed;
    for (const Polygon& s : best.sets) w.masses.push_back(s.area() / area);
    w.min_distance = min_pair_distance(best.sets, area);
    w.sets = std::move(best.sets);
    for (std::size_t i = 0; i < kappas.size(); ++i)
        if (w.masses[i] < kappas[i] * (1.0 - 1e-9) || w.min_distance < 0.0)
            throw std::logic_error("sep_lower: witness failed verification");
    return w;
}

// --- consistency reports -----------------------------------------------------

ReductionReport reduction_consistency(const ConvexBody& body, std::size_t k, std::size_t l,
                                      const std::vector<double>& kappas, const EigenResult& eigen,
                                      std::uint64_t seed) {
    if (l > k || l < 1) throw std::invalid_argument("reduction_consistency: need 1 <= l <= k");
    if (kappas.size() != l + 1) throw std::invalid_argument("reduction_consistency: expected l + 1 masses");
    if (eigen.spectrum.bc != BoundaryCondition::Neumann || eigen.spectrum.values.size() <= k)
        throw std::invalid_argument("reduction_consistency: Neumann eigenvalue k missing");
    ReductionReport r;
    r.sep_lower = sep_lower(body, kappas, seed).min_distance;
    r.lambda_k = eigen.spectrum.values[k];
    for (std::size_t i = 0; i < kappas.size(); ++i)
        for (std::size_t j = 0; j < kappas.size(); ++j)
            if (i != j) r.max_log = std::max(r.max_log, std::log(1.0 / (kappas[i] * kappas[j])));
    r.c_emp = std::pow(r.sep_lower * std::sqrt(r.lambda_k) / r.max_log, 1.0 / static_cast<double>(k - l + 1));
    return r;
}

MilmanResult milman_consistency(const ConvexBody& inner, const ConvexBody& outer, const SweepOptions& options) {
    if (!contains(outer, inner)) throw std::invalid_argument("milman_consistency: bodies are not nested");
    MilmanResult m;
    m.v = volume(inner) / volume(outer);
    m.lhs = cheeger_upper(as_polygon(outer), options).upper;
    m.rhs = m.v * m.v * cheeger_lower(inner);
    m.pass = m.lhs >= m.rhs;
    return m;
}

DiamEigenResult diam_eigen_check(const ConvexBody& body, std::size_t k, const Spectrum& spectrum,
                                 const SweepOptions& options) {
    if (k < 1 || spectrum.values.size() <= k) throw std::invalid_argument("diam_eigen_check: lambda_k missing");
    DiamEigenResult d;
    d.diameter = diameter(body);
    d.lambda_k = spectrum.values[k];
    d.c_emp = d.diameter * std::sqrt(d.lambda_k) / (static_cast<double>(body.dimension()) * static_cast<double>(k));
    if (body.dimension() == 2) {
        d.inverse_upper = 1.0 / cheeger_upper(as_polygon(body), options).upper;
        d.pass = d.diameter >= d.inverse_upper;
    } else {
        d.pass = true; // the cut sweep is planar only
    }
    return d;
}

} // namespace sandwich
