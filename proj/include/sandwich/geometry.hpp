#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sandwich {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 a);
double distance(Point2 a, Point2 b);

/// Closed half-plane {x : dot(normal, x) <= offset}.
struct Halfplane {
    Point2 normal;
    double offset = 0.0;
};

/// Convex polygon with counterclockwise vertices.
///
/// Construction canonicalizes the input: orientation is made counterclockwise,
/// repeated vertices and collinear vertices are merged, and the result must be
/// strictly convex. Tolerances are relative to the squared bounding-box extent
/// (1e-12) so that clipped pieces with near-collinear vertices are accepted.
class Polygon {
public:
    explicit Polygon(std::vector<Point2> vertices);

    /// Same canonicalization, but returns nullopt instead of throwing when the
    /// vertex list is degenerate (fewer than three distinct non-collinear points
    /// or zero area). Non-convex input still throws.
    static std::optional<Polygon> try_make(std::vector<Point2> vertices);

    static Polygon rectangle(double x0, double y0, double x1, double y1);
    static Polygon regular(int sides, double radius, Point2 center = {});

    std::span<const Point2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    Point2 operator[](std::size_t i) const { return vertices_[i]; }

    double area() const;
    Point2 centroid() const;

private:
    Polygon() = default;
    std::vector<Point2> vertices_;
};

/// Axis-aligned box [lower_i, lower_i + lengths_i] in any dimension.
struct Box {
    std::vector<double> lower;
    std::vector<double> lengths;

    static Box unit(std::size_t dim);
    static Box centered(std::vector<double> lengths);
};

struct Disk {
    Point2 center;
    double radius = 1.0;
};

/// Bounded convex domain: a 2D polygon, an n-dimensional box, or a disk.
class ConvexBody {
public:
    ConvexBody(Polygon p);
    ConvexBody(Box b);
    ConvexBody(Disk d);

    std::size_t dimension() const;

    bool is_polygon() const { return std::holds_alternative<Polygon>(shape_); }
    bool is_box() const { return std::holds_alternative<Box>(shape_); }
    bool is_disk() const { return std::holds_alternative<Disk>(shape_); }

    const Polygon& polygon() const { return std::get<Polygon>(shape_); }
    const Box& box() const { return std::get<Box>(shape_); }
    const Disk& disk() const { return std::get<Disk>(shape_); }

    /// Membership for planar bodies (boxes must be 2D).
    bool contains(Point2 p, double tol = 1e-12) const;

    /// Planar bounding box as (min, max).
    std::pair<Point2, Point2> bounds() const;

private:
    std::variant<Polygon, Box, Disk> shape_;
};

/// Number of vertices used when a disk must be represented as a polygon.
inline constexpr int kDiskPolygonSides = 256;

/// Polygon representation of a planar body. Disks become inscribed regular
/// polygons with `disk_sides` vertices; 2D boxes become rectangles.
Polygon as_polygon(const ConvexBody& body, int disk_sides = kDiskPolygonSides);

double volume(const ConvexBody& body);
double diameter(const ConvexBody& body);
double diameter(const Polygon& poly);
double inradius(const ConvexBody& body);
double inradius(const Polygon& poly);

/// Pointwise scaling x -> r x about the origin.
ConvexBody scale(const ConvexBody& body, double r);
Polygon scale(const Polygon& poly, double r);
/// Point reflection x -> -x.
ConvexBody reflect(const ConvexBody& body);
Polygon reflect(const Polygon& poly);
Polygon translate(const Polygon& poly, Point2 shift);

/// Intersection with a half-plane; nullopt when the result has zero area.
std::optional<Polygon> clip_halfplane(const Polygon& poly, const Halfplane& plane);
/// Convex intersection; nullopt when the result has zero area.
std::optional<Polygon> intersect(const Polygon& a, const Polygon& b);

bool contains(const Polygon& poly, Point2 p, double tol = 1e-12);
/// Inclusion a ⊆ b up to a tolerance relative to b's size.
bool contains(const Polygon& outer, const Polygon& inner, double rel_tol = 1e-9);
/// Planar inclusion inner ⊆ outer for any mix of polygons, 2D boxes and disks.
bool contains(const ConvexBody& outer, const ConvexBody& inner, double rel_tol = 1e-9);
/// Euclidean distance from p to the polygon (zero inside).
double distance(const Polygon& poly, Point2 p);
/// Minimum distance between two convex polygons (zero when they meet).
double distance(const Polygon& a, const Polygon& b);
/// Length of the intersection of the line {dot(normal, x) = offset} with poly.
double chord_length(const Polygon& poly, const Halfplane& line);
/// Exact area of disk ∩ polygon.
double disk_intersection_area(const Polygon& poly, Point2 center, double radius);
/// True when the polygon equals its point reflection within rel_tol of its area.
bool is_centrally_symmetric(const ConvexBody& body, double rel_tol = 1e-9);

struct SiteSet {
    std::vector<Point2> points;
    double separation = 0.0;   // min pairwise distance (infinity for one site)
    double radius = 0.0;       // requested net radius r
    double cover_radius = 0.0; // max distance from the body to the nearest site
    std::size_t sample_count = 0;
};

struct NetOptions {
    /// Quasi-random interior samples per unit area (at least this many total).
    std::size_t samples = 10000;
    /// Promote Voronoi-cell vertices farther than r from their site to sites,
    /// so the r-cover holds on the continuum body and not only on the sample.
    bool continuum_cover = true;
};

/// Farthest-point r-net: sites are pairwise >= r apart and every sample point
/// lies within r of a site.
SiteSet greedy_net(const ConvexBody& body, double r, std::uint64_t seed,
                   const NetOptions& options = {});

struct PartitionPieces {
    std::vector<Polygon> pieces;
    Polygon parent;
    std::vector<double> diameters;

    explicit PartitionPieces(Polygon parent_body) : parent(std::move(parent_body)) {}
    void add(Polygon piece);
};

/// Voronoi cells of `sites` inside the body, computed by bisector clipping.
/// Cell i always corresponds to site i.
PartitionPieces voronoi_partition(const ConvexBody& body, std::span<const Point2> sites);

/// Checks pairwise interior-disjointness, convexity and area coverage.
bool is_partition(const PartitionPieces& parts, double rel_tol = 1e-9);

/// Plain-text polygon format: vertex count, then one "x y" line per vertex.
Polygon read_polygon(std::istream& in);
Polygon read_polygon_file(const std::string& path);
void write_polygon(std::ostream& out, const Polygon& poly);

} // namespace sandwich
