#include "sandwich/geometry.hpp"

#include "sandwich/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sandwich {

namespace {

constexpr double kRelTol = 1e-12;

double extent(std::span<const Point2> v) {
    double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
    for (const Point2& p : v) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::max(xmax - xmin, ymax - ymin);
}

double signed_area(std::span<const Point2> v) {
    double a = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) a += cross(v[i], v[(i + 1) % n]);
    return 0.5 * a;
}

double segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 d = b - a;
    const double len2 = dot(d, d);
    double t = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * d);
}

// Sutherland-Hodgman step on a raw vertex list, keeping dot(n, x) <= offset.
std::vector<Point2> clip_raw(std::span<const Point2> in, const Halfplane& h) {
    std::vector<Point2> out;
    const std::size_t n = in.size();
    out.reserve(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = in[i];
        const Point2 b = in[(i + 1) % n];
        const double da = dot(h.normal, a) - h.offset;
        const double db = dot(h.normal, b) - h.offset;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

Halfplane edge_halfplane(Point2 a, Point2 b) {
    const Point2 d = b - a;
    const Point2 n{d.y, -d.x};
    return {n, dot(n, a)};
}

} // namespace

double norm(Point2 a) { return std::hypot(a.x, a.y); }
double distance(Point2 a, Point2 b) { return norm(a - b); }

// --- Polygon -------------------------------------------------------------

std::optional<Polygon> Polygon::try_make(std::vector<Point2> v) {
    if (v.size() < 3) return std::nullopt;
    for (const Point2& p : v)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("polygon vertex is not finite");
    const double scale = extent(v);
    if (!(scale > 0.0)) return std::nullopt;
    const double eps_len = kRelTol * scale;
    const double eps_cross = kRelTol * scale * scale;

    if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());

    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::size_t n = v.size();
            const Point2 prev = v[(i + n - 1) % n];
            const Point2 next = v[(i + 1) % n];
            if (distance(prev, v[i]) <= eps_len) {
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
            const double c = cross(v[i] - prev, next - v[i]);
            if (c < -eps_cross) throw std::invalid_argument("polygon is not convex");
            if (c <= eps_cross) {
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    if (v.size() < 3 || signed_area(v) <= eps_cross) return std::nullopt;

    // Local left turns everywhere still admit self-overlapping stars.
    double turning = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 e0 = v[i] - v[(i + n - 1) % n];
        const Point2 e1 = v[(i + 1) % n] - v[i];
        turning += std::atan2(cross(e0, e1), dot(e0, e1));
    }
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6)
        throw std::invalid_argument("polygon is self-overlapping");

    Polygon p;
    p.vertices_ = std::move(v);
    return p;
}

Polygon::Polygon(std::vector<Point2> vertices) {
    auto p = try_make(std::move(vertices));
    if (!p) throw std::invalid_argument("degenerate polygon");
    *this = std::move(*p);
}

Polygon Polygon::rectangle(double x0, double y0, double x1, double y1) {
    if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("empty rectangle");
    return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Polygon Polygon::regular(int sides, double radius, Point2 center) {
    if (sides < 3 || !(radius > 0.0)) throw std::invalid_argument("bad regular polygon");
    std::vector<Point2> v(static_cast<std::size_t>(sides));
    for (int i = 0; i < sides; ++i) {
        const double t = 2.0 * std::numbers::pi * i / sides;
        v[static_cast<std::size_t>(i)] = {center.x + radius * std::cos(t),
                                          center.y + radius * std::sin(t)};
    }
    return Polygon(std::move(v));
}

double Polygon::area() const { return signed_area(vertices_); }

Point2 Polygon::centroid() const {
    double a = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = vertices_[i];
        const Point2 q = vertices_[(i + 1) % n];
        const double c = cross(p, q);
        a += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    return {cx / (3.0 * a), cy / (3.0 * a)};
}

// --- Box / ConvexBody ----------------------------------------------------

Box Box::unit(std::size_t dim) {
    return Box{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

Box Box::centered(std::vector<double> lengths) {
    Box b;
    b.lower.resize(lengths.size());
    for (std::size_t i = 0; i < lengths.size(); ++i) b.lower[i] = -0.5 * lengths[i];
    b.lengths = std::move(lengths);
    return b;
}

ConvexBody::ConvexBody(Polygon p) : shape_(std::move(p)) {}

namespace {
Box checked(Box b) {
    if (b.lengths.empty() || b.lower.size() != b.lengths.size())
        throw std::invalid_argument("box needs matching lower corner and side lengths");
    for (double l : b.lengths)
        if (!(l > 0.0)) throw std::invalid_argument("box side lengths must be positive");
    return b;
}

Disk checked(Disk d) {
    if (!(d.radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    return d;
}
} // namespace

ConvexBody::ConvexBody(Box b) : shape_(checked(std::move(b))) {}

ConvexBody::ConvexBody(Disk d) : shape_(checked(d)) {}

std::size_t ConvexBody::dimension() const {
    if (is_box()) return box().lengths.size();
    return 2;
}

bool ConvexBody::contains(Point2 p, double tol) const {
    if (is_polygon()) return sandwich::contains(polygon(), p, tol);
    if (is_disk()) {
        const Disk& d = disk();
        return distance(p, d.center) <= d.radius * (1.0 + tol);
    }
    const Box& b = box();
    if (b.lengths.size() != 2) throw std::invalid_argument("planar query on a non-planar box");
    const double s = std::max(b.lengths[0], b.lengths[1]) * tol;
    return p.x >= b.lower[0] - s && p.x <= b.lower[0] + b.lengths[0] + s &&
           p.y >= b.lower[1] - s && p.y <= b.lower[1] + b.lengths[1] + s;
}

std::pair<Point2, Point2> ConvexBody::bounds() const {
    if (is_disk()) {
        const Disk& d = disk();
        return {{d.center.x - d.radius, d.center.y - d.radius},
                {d.center.x + d.radius, d.center.y + d.radius}};
    }
    if (is_box()) {
        const Box& b = box();
        if (b.lengths.size() != 2) throw std::invalid_argument("planar query on a non-planar box");
        return {{b.lower[0], b.lower[1]},
                {b.lower[0] + b.lengths[0], b.lower[1] + b.lengths[1]}};
    }
    const auto v = polygon().vertices();
    Point2 lo = v[0], hi = v[0];
    for (const Point2& p : v) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    return {lo, hi};
}

Polygon as_polygon(const ConvexBody& body, int disk_sides) {
    if (body.is_polygon()) return body.polygon();
    if (body.is_disk()) return Polygon::regular(disk_sides, body.disk().radius, body.disk().center);
    const auto [lo, hi] = body.bounds();
    return Polygon::rectangle(lo.x, lo.y, hi.x, hi.y);
}

// --- measurements --------------------------------------------------------

double volume(const ConvexBody& body) {
    if (body.is_polygon()) return body.polygon().area();
    if (body.is_disk()) return std::numbers::pi * body.disk().radius * body.disk().radius;
    double v = 1.0;
    for (double l : body.box().lengths) v *= l;
    return v;
}

double diameter(const Polygon& poly) {
    const auto v = poly.vertices();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, distance(v[i], v[j]));
    return best;
}

double diameter(const ConvexBody& body) {
    if (body.is_polygon()) return diameter(body.polygon());
    if (body.is_disk()) return 2.0 * body.disk().radius;
    double s = 0.0;
    for (double l : body.box().lengths) s += l * l;
    return std::sqrt(s);
}

double inradius(const Polygon& poly) {
    // Largest r for which the inward offsets of all edge half-planes still
    // intersect. Feasibility is monotone in r, so bisection converges to the
    // optimum of the (center, r) linear program.
    const auto v = poly.vertices();
    const std::size_t n = v.size();
    std::vector<Halfplane> planes(n);
    for (std::size_t i = 0; i < n; ++i) {
        Halfplane h = edge_halfplane(v[i], v[(i + 1) % n]);
        const double len = norm(h.normal);
        planes[i] = {{h.normal.x / len, h.normal.y / len}, h.offset / len};
    }
    auto feasible = [&](double r) {
        std::vector<Point2> region(v.begin(), v.end());
        for (const Halfplane& h : planes) {
            region = clip_raw(region, {h.normal, h.offset - r});
            if (region.empty()) return false;
        }
        return true;
    };
    double lo = 0.0, hi = 0.5 * diameter(poly);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

double inradius(const ConvexBody& body) {
    if (body.is_polygon()) return inradius(body.polygon());
    if (body.is_disk()) return body.disk().radius;
    const auto& l = body.box().lengths;
    return 0.5 * *std::min_element(l.begin(), l.end());
}

// --- transforms ----------------------------------------------------------

Polygon scale(const Polygon& poly, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("scale factor must be positive");
    std::vector<Point2> v(poly.vertices().begin(), poly.vertices().end());
    for (Point2& p : v) p = r * p;
    return Polygon(std::move(v));
}

ConvexBody scale(const ConvexBody& body, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("scale factor must be positive");
    if (body.is_polygon()) return scale(body.polygon(), r);
    if (body.is_disk()) return Disk{r * body.disk().center, r * body.disk().radius};
    Box b = body.box();
    for (double& x : b.lower) x *= r;
    for (double& l : b.lengths) l *= r;
    return b;
}

Polygon reflect(const Polygon& poly) {
    std::vector<Point2> v(poly.vertices().begin(), poly.vertices().end());
    for (Point2& p : v) p = {-p.x, -p.y};
    return Polygon(std::move(v));
}

ConvexBody reflect(const ConvexBody& body) {
    if (body.is_polygon()) return reflect(body.polygon());
    if (body.is_disk()) return Disk{-1.0 * body.disk().center, body.disk().radius};
    Box b = body.box();
    for (std::size_t i = 0; i < b.lower.size(); ++i) b.lower[i] = -(b.lower[i] + b.lengths[i]);
    return b;
}

Polygon translate(const Polygon& poly, Point2 shift) {
    std::vector<Point2> v(poly.vertices().begin(), poly.vertices().end());
    for (Point2& p : v) p = p + shift;
    return Polygon(std::move(v));
}

// --- clipping and distances ----------------------------------------------

std::optional<Polygon> clip_halfplane(const Polygon& poly, const Halfplane& plane) {
    if (!(norm(plane.normal) > 0.0)) throw std::invalid_argument("half-plane normal is zero");
    const auto v = poly.vertices();
    bool inside = true;
    for (const Point2& p : v)
        if (dot(plane.normal, p) - plane.offset > 0.0) {
            inside = false;
            break;
        }
    if (inside) return poly;
    auto out = Polygon::try_make(clip_raw(v, plane));
    if (out && out->area() <= 1e-14 * poly.area()) return std::nullopt;
    return out;
}

std::optional<Polygon> intersect(const Polygon& a, const Polygon& b) {
    std::optional<Polygon> cur = a;
    const auto v = b.vertices();
    for (std::size_t i = 0; i < v.size() && cur; ++i)
        cur = clip_halfplane(*cur, edge_halfplane(v[i], v[(i + 1) % v.size()]));
    if (cur && cur->area() <= 1e-14 * std::min(a.area(), b.area())) return std::nullopt;
    return cur;
}

bool contains(const Polygon& poly, Point2 p, double tol) {
    const auto v = poly.vertices();
    const double slack = tol * extent(v);
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 a = v[i];
        const Point2 d = v[(i + 1) % n] - a;
        if (cross(d, p - a) < -slack * norm(d)) return false;
    }
    return true;
}

bool contains(const Polygon& outer, const Polygon& inner, double rel_tol) {
    for (const Point2& p : inner.vertices())
        if (!contains(outer, p, rel_tol)) return false;
    return true;
}

bool contains(const ConvexBody& outer, const ConvexBody& inner, double rel_tol) {
    if (!inner.is_disk()) {
        const Polygon poly = as_polygon(inner);
        for (const Point2& p : poly.vertices())
            if (!outer.contains(p, rel_tol)) return false;
        return true;
    }
    const Disk& d = inner.disk();
    if (outer.is_disk()) {
        const Disk& o = outer.disk();
        return distance(d.center, o.center) + d.radius <= o.radius * (1.0 + rel_tol);
    }
    const Polygon poly = as_polygon(outer);
    if (!contains(poly, d.center, 0.0)) return false;
    const auto v = poly.vertices();
    const double slack = rel_tol * extent(v);
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 e = v[(i + 1) % n] - v[i];
        if (cross(e, d.center - v[i]) / norm(e) < d.radius - slack) return false;
    }
    return true;
}

double distance(const Polygon& poly, Point2 p) {
    if (contains(poly, p, 0.0)) return 0.0;
    const auto v = poly.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        best = std::min(best, segment_distance(p, v[i], v[(i + 1) % n]));
    return best;
}

double distance(const Polygon& a, const Polygon& b) {
    if (intersect(a, b)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    auto sweep = [&best](const Polygon& from, const Polygon& to) {
        const auto w = to.vertices();
        for (const Point2& p : from.vertices())
            for (std::size_t i = 0, n = w.size(); i < n; ++i)
                best = std::min(best, segment_distance(p, w[i], w[(i + 1) % n]));
    };
    sweep(a, b);
    sweep(b, a);
    return best;
}

double chord_length(const Polygon& poly, const Halfplane& line) {
    const auto v = poly.vertices();
    const std::size_t n = v.size();
    const double len = norm(line.normal);
    const double zero = kRelTol * extent(v);
    std::vector<Point2> hits;
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (dot(line.normal, v[i]) - line.offset) / len;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        if (std::abs(d[i]) <= zero) hits.push_back(v[i]);
        if ((d[i] < -zero && d[j] > zero) || (d[i] > zero && d[j] < -zero)) {
            const double t = d[i] / (d[i] - d[j]);
            hits.push_back(v[i] + t * (v[j] - v[i]));
        }
    }
    double best = 0.0;
    for (std::size_t i = 0; i < hits.size(); ++i)
        for (std::size_t j = i + 1; j < hits.size(); ++j) best = std::max(best, distance(hits[i], hits[j]));
    return best;
}

double disk_intersection_area(const Polygon& poly, Point2 center, double radius) {
    // Signed sum over edges of |disk ∩ triangle(center, a, b)|.
    const double r2 = radius * radius;
    auto wedge = [&](Point2 a, Point2 b) {
        const Point2 d = b - a;
        const double qa = dot(d, d);
        const double qb = 2.0 * dot(a, d);
        const double qc = dot(a, a) - r2;
        Point2 pts[4];
        int count = 0;
        pts[count++] = a;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (qa > 0.0 && disc > 0.0) {
            const double s = std::sqrt(disc);
            for (double t : {(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)})
                if (t > 0.0 && t < 1.0) pts[count++] = a + t * d;
        }
        pts[count++] = b;
        double area = 0.0;
        for (int i = 0; i + 1 < count; ++i) {
            const Point2 p = pts[i], q = pts[i + 1];
            const Point2 m = 0.5 * (p + q);
            if (dot(m, m) <= r2)
                area += 0.5 * cross(p, q);
            else
                area += 0.5 * r2 * std::atan2(cross(p, q), dot(p, q));
        }
        return area;
    };
    const auto v = poly.vertices();
    double total = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        total += wedge(v[i] - center, v[(i + 1) % n] - center);
    return std::max(0.0, total);
}

bool is_centrally_symmetric(const ConvexBody& body, double rel_tol) {
    if (body.is_disk()) return norm(body.disk().center) <= rel_tol * body.disk().radius;
    if (body.is_box()) {
        const Box& b = body.box();
        for (std::size_t i = 0; i < b.lengths.size(); ++i)
            if (std::abs(b.lower[i] + 0.5 * b.lengths[i]) > rel_tol * b.lengths[i]) return false;
        return true;
    }
    const Polygon& p = body.polygon();
    const auto both = intersect(p, reflect(p));
    return both && both->area() >= (1.0 - rel_tol) * p.area();
}

// --- nets and partitions -------------------------------------------------

void PartitionPieces::add(Polygon piece) {
    diameters.push_back(diameter(piece));
    pieces.push_back(std::move(piece));
}

PartitionPieces voronoi_partition(const ConvexBody& body, std::span<const Point2> sites) {
    const Polygon domain = as_polygon(body);
    if (sites.empty()) throw std::invalid_argument("voronoi partition needs at least one site");
    const double scale = diameter(domain);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (!contains(domain, sites[i], 1e-9))
            throw std::invalid_argument("voronoi site lies outside the body");
        for (std::size_t j = i + 1; j < sites.size(); ++j)
            if (distance(sites[i], sites[j]) <= kRelTol * scale)
                throw std::invalid_argument("duplicate voronoi sites");
    }
    PartitionPieces parts(domain);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        std::optional<Polygon> cell = domain;
        for (std::size_t j = 0; j < sites.size() && cell; ++j) {
            if (j == i) continue;
            const Point2 n = sites[j] - sites[i];
            cell = clip_halfplane(*cell, {n, dot(n, 0.5 * (sites[i] + sites[j]))});
        }
        if (!cell) throw std::runtime_error("voronoi cell vanished for an interior site");
        parts.add(std::move(*cell));
    }
    return parts;
}

bool is_partition(const PartitionPieces& parts, double rel_tol) {
    const double total = parts.parent.area();
    double sum = 0.0;
    for (const Polygon& p : parts.pieces) {
        if (!contains(parts.parent, p, 1e-9)) return false;
        sum += p.area();
    }
    if (std::abs(sum - total) > rel_tol * total) return false;
    for (std::size_t i = 0; i < parts.pieces.size(); ++i)
        for (std::size_t j = i + 1; j < parts.pieces.size(); ++j)
            if (auto both = intersect(parts.pieces[i], parts.pieces[j]);
                both && both->area() > rel_tol * total)
                return false;
    return true;
}

SiteSet greedy_net(const ConvexBody& body, double r, std::uint64_t seed, const NetOptions& options) {
    if (!(r > 0.0)) throw std::invalid_argument("net radius must be positive");
    const Polygon domain = as_polygon(body);
    const auto [lo, hi] = ConvexBody(domain).bounds();
    const double area = domain.area();
    const auto target = static_cast<std::size_t>(
        std::ceil(static_cast<double>(options.samples) * std::max(1.0, area)));

    // Halton (2, 3) points with a seeded Cranley-Patterson rotation.
    CounterRng rng(seed, 0x6e6574);
    const double sx = rng.uniform(), sy = rng.uniform();
    std::vector<Point2> samples;
    samples.reserve(target);
    const std::uint64_t max_draws = 1000 * static_cast<std::uint64_t>(target) + 1000;
    for (std::uint64_t i = 1; samples.size() < target && i < max_draws; ++i) {
        const double u = std::fmod(radical_inverse(i, 2) + sx, 1.0);
        const double w = std::fmod(radical_inverse(i, 3) + sy, 1.0);
        const Point2 p{lo.x + u * (hi.x - lo.x), lo.y + w * (hi.y - lo.y)};
        if (contains(domain, p, 0.0)) samples.push_back(p);
    }
    if (samples.empty()) throw std::runtime_error("no interior samples for the net");

    SiteSet net;
    net.radius = r;
    net.sample_count = samples.size();

    const Point2 c = domain.centroid();
    std::size_t first = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (distance(samples[i], c) < distance(samples[first], c)) first = i;
    net.points.push_back(samples[first]);

    std::vector<double> gap(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) gap[i] = distance(samples[i], samples[first]);
    for (;;) {
        const auto far = std::max_element(gap.begin(), gap.end());
        if (*far < r) break;
        const Point2 site = samples[static_cast<std::size_t>(far - gap.begin())];
        net.points.push_back(site);
        for (std::size_t i = 0; i < samples.size(); ++i)
            gap[i] = std::min(gap[i], distance(samples[i], site));
    }
    net.cover_radius = *std::max_element(gap.begin(), gap.end());

    if (options.continuum_cover) {
        // Each cell is convex, so its farthest point from the site is a vertex.
        for (;;) {
            const PartitionPieces cells = voronoi_partition(domain, net.points);
            double worst = 0.0;
            Point2 worst_vertex;
            for (std::size_t i = 0; i < cells.pieces.size(); ++i)
                for (const Point2& q : cells.pieces[i].vertices())
                    if (const double d = distance(q, net.points[i]); d > worst) {
                        worst = d;
                        worst_vertex = q;
                    }
            net.cover_radius = worst;
            if (worst < r) break;
            net.points.push_back(worst_vertex);
        }
    }

    net.separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.points.size(); ++i)
        for (std::size_t j = i + 1; j < net.points.size(); ++j)
            net.separation = std::min(net.separation, distance(net.points[i], net.points[j]));
    return net;
}

// --- file format ---------------------------------------------------------

Polygon read_polygon(std::istream& in) {
    long long count = 0;
    if (!(in >> count) || count < 3) throw std::invalid_argument("polygon file: bad vertex count");
    std::vector<Point2> v(static_cast<std::size_t>(count));
    for (Point2& p : v)
        if (!(in >> p.x >> p.y)) throw std::invalid_argument("polygon file: truncated vertex list");
    const double scale = extent(v);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (distance(v[i], v[j]) <= kRelTol * scale)
                throw std::invalid_argument("polygon file: repeated vertex");
    return Polygon(std::move(v));
}

Polygon read_polygon_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open polygon file: " + path);
    return read_polygon(in);
}

void write_polygon(std::ostream& out, const Polygon& poly) {
    const auto old = out.precision(17);
    out << poly.size() << '\n';
    for (const Point2& p : poly.vertices()) out << p.x << ' ' << p.y << '\n';
    out.precision(old);
}

} // namespace sandwich
