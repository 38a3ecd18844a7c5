#include "sandwich/mesh.hpp"

#include "linear_triangle.hpp"
#include "sandwich/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sandwich {

namespace {

double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

// > 0 when d lies strictly inside the circumcircle of counterclockwise (a, b, c),
// beyond a relative error bound so cocircular lattices do not flip-flop.
bool in_circle(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double bc = bdx * cdy - cdx * bdy;
    const double ca = cdx * ady - adx * cdy;
    const double ab = adx * bdy - bdx * ady;
    const double det = alift * bc + blift * ca + clift * ab;
    const double perm = alift * (std::abs(bdx * cdy) + std::abs(cdx * bdy)) +
                        blift * (std::abs(cdx * ady) + std::abs(adx * cdy)) +
                        clift * (std::abs(adx * bdy) + std::abs(bdx * ady));
    return det > 1e-12 * perm;
}

struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> n{-1, -1, -1}; // n[i] is across the edge opposite v[i]
    bool alive = true;
};

class DelaunayBuilder {
public:
    explicit DelaunayBuilder(std::vector<Point2> pts) : pts_(std::move(pts)) {}

    // Star around `center` over the closed boundary loop 0..nb-1, then made
    // Delaunay.
    void start_star(int center, int nb) {
        boundary_.assign(pts_.size(), 0);
        for (int i = 0; i < nb; ++i) {
            boundary_[static_cast<std::size_t>(i)] = 1;
            Tri t;
            t.v = {center, i, (i + 1) % nb};
            t.n = {-1, (i + 1) % nb, (i + nb - 1) % nb};
            tris_.push_back(t);
        }
        legalize_all();
    }

    void insert(int vi) { insert_from(vi, locate(P(vi))); }

    void legalize_all() {
        std::vector<std::pair<int, int>> stack;
        for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
            if (tris_[static_cast<std::size_t>(t)].alive)
                for (int e = 0; e < 3; ++e) stack.emplace_back(t, e);
        std::size_t budget = 200 * tris_.size() + 1000;
        while (!stack.empty() && budget-- > 0) {
            const auto [t, e] = stack.back();
            stack.pop_back();
            if (!tris_[static_cast<std::size_t>(t)].alive) continue;
            if (flip_if_illegal(t, e)) {
                const int u = last_flip_partner_;
                for (int k = 0; k < 3; ++k) {
                    stack.emplace_back(t, k);
                    stack.emplace_back(u, k);
                }
            }
        }
    }

    // Delaunay refinement: circumcenters of triangles with a corner below
    // `floor_deg` are inserted, unless they encroach a boundary edge, which is
    // split at its midpoint instead. Returns false if the point budget runs out.
    bool improve(double floor_deg, std::size_t max_points) {
        const double floor_rad = floor_deg * std::numbers::pi / 180.0;
        for (int round = 0; round < 200; ++round) {
            bool changed = false;
            for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
                if (pts_.size() > max_points) return false;
                const Tri& s = tris_[static_cast<std::size_t>(t)];
                if (!s.alive) continue;
                for (int e = 0; e < 3; ++e)
                    if (s.n[static_cast<std::size_t>(e)] < 0 && encroached(t, e)) {
                        split_boundary(t, e);
                        changed = true;
                        break;
                    }
                if (changed) break;
            }
            if (changed) {
                --round;
                continue;
            }
            for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
                if (pts_.size() > max_points) return false;
                const Tri& s = tris_[static_cast<std::size_t>(t)];
                if (!s.alive || smallest_angle(s) >= floor_rad) continue;
                const Point2 c = circumcenter(s);
                const auto [bt, be] = encroached_by(c);
                if (bt >= 0) {
                    split_boundary(bt, be);
                } else {
                    const int start = locate_or_fail(c);
                    if (start < 0) continue;
                    pts_.push_back(c);
                    boundary_.push_back(0);
                    insert_from(static_cast<int>(pts_.size()) - 1, start);
                }
                changed = true;
            }
            if (!changed) return true;
        }
        return false;
    }

    std::vector<Triangle> triangles() const {
        std::vector<Triangle> out;
        for (const Tri& t : tris_)
            if (t.alive) out.push_back({t.v[0], t.v[1], t.v[2]});
        return out;
    }

    const std::vector<Point2>& points() const { return pts_; }
    const std::vector<char>& boundary() const { return boundary_; }

private:
    Point2 P(int i) const { return pts_[static_cast<std::size_t>(i)]; }

    double smallest_angle(const Tri& t) const {
        double best = std::numbers::pi;
        for (int k = 0; k < 3; ++k) {
            const Point2 p = P(t.v[static_cast<std::size_t>(k)]);
            const Point2 a = P(t.v[static_cast<std::size_t>((k + 1) % 3)]) - p;
            const Point2 b = P(t.v[static_cast<std::size_t>((k + 2) % 3)]) - p;
            best = std::min(best, std::atan2(std::abs(cross(a, b)), dot(a, b)));
        }
        return best;
    }

    Point2 circumcenter(const Tri& t) const {
        const Point2 a = P(t.v[0]);
        const Point2 b = P(t.v[1]) - a, c = P(t.v[2]) - a;
        const double d = 2.0 * cross(b, c);
        const double bb = dot(b, b), cc = dot(c, c);
        return a + Point2{(c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d};
    }

    // Boundary edge opposite v[e] of triangle t is encroached by its own
    // opposite vertex (closed diametral circle, minus a hair).
    bool encroached(int t, int e) const {
        const Tri& s = tris_[static_cast<std::size_t>(t)];
        const Point2 a = P(s.v[static_cast<std::size_t>((e + 1) % 3)]);
        const Point2 b = P(s.v[static_cast<std::size_t>((e + 2) % 3)]);
        const Point2 p = P(s.v[static_cast<std::size_t>(e)]);
        return dot(a - p, b - p) < -1e-12 * dot(b - a, b - a);
    }

    std::pair<int, int> encroached_by(Point2 c) const {
        for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
            const Tri& s = tris_[static_cast<std::size_t>(t)];
            if (!s.alive) continue;
            for (int e = 0; e < 3; ++e) {
                if (s.n[static_cast<std::size_t>(e)] >= 0) continue;
                const Point2 a = P(s.v[static_cast<std::size_t>((e + 1) % 3)]);
                const Point2 b = P(s.v[static_cast<std::size_t>((e + 2) % 3)]);
                if (dot(a - c, b - c) <= 0.0) return {t, e};
            }
        }
        return {-1, -1};
    }

    void split_boundary(int t, int e) {
        const Tri& s = tris_[static_cast<std::size_t>(t)];
        const Point2 a = P(s.v[static_cast<std::size_t>((e + 1) % 3)]);
        const Point2 b = P(s.v[static_cast<std::size_t>((e + 2) % 3)]);
        pts_.push_back(0.5 * (a + b));
        boundary_.push_back(1);
        insert_from(static_cast<int>(pts_.size()) - 1, t);
    }

    void insert_from(int vi, int start) {
        const Point2 p = P(vi);
        ++stamp_;
        mark_.resize(tris_.size(), 0);
        std::vector<int> bad{start};
        mark_[static_cast<std::size_t>(start)] = stamp_;
        for (std::size_t k = 0; k < bad.size(); ++k) {
            const Tri& s = tris_[static_cast<std::size_t>(bad[k])];
            for (int e = 0; e < 3; ++e) {
                const int u = s.n[static_cast<std::size_t>(e)];
                if (u < 0 || mark_[static_cast<std::size_t>(u)] == stamp_) continue;
                const Tri& t = tris_[static_cast<std::size_t>(u)];
                if (in_circle(P(t.v[0]), P(t.v[1]), P(t.v[2]), p)) {
                    mark_[static_cast<std::size_t>(u)] = stamp_;
                    bad.push_back(u);
                }
            }
        }

        struct Edge {
            int a, b, outside, from;
        };
        std::vector<Edge> rim;
        // The cavity must be star-shaped from p; grow it across any interior
        // rim edge that p does not strictly see. Hull edges through p (a split
        // boundary edge) are dropped.
        for (bool grew = true; grew;) {
            grew = false;
            rim.clear();
            for (std::size_t k = 0; k < bad.size(); ++k) {
                const int s_idx = bad[k];
                const Tri& s = tris_[static_cast<std::size_t>(s_idx)];
                for (int e = 0; e < 3; ++e) {
                    const int u = s.n[static_cast<std::size_t>(e)];
                    if (u >= 0 && mark_[static_cast<std::size_t>(u)] == stamp_) continue;
                    const int a = s.v[static_cast<std::size_t>((e + 1) % 3)];
                    const int b = s.v[static_cast<std::size_t>((e + 2) % 3)];
                    const double o = orient(P(a), P(b), p);
                    const double len2 = dot(P(b) - P(a), P(b) - P(a));
                    if (o <= 1e-12 * len2) {
                        if (u >= 0) {
                            mark_[static_cast<std::size_t>(u)] = stamp_;
                            bad.push_back(u);
                            grew = true;
                        }
                        continue;
                    }
                    rim.push_back({a, b, u, s_idx});
                }
            }
        }

        std::vector<int> slots = bad;
        while (slots.size() < rim.size()) {
            slots.push_back(static_cast<int>(tris_.size()));
            tris_.emplace_back();
        }
        for (std::size_t k = rim.size(); k < slots.size(); ++k) tris_[static_cast<std::size_t>(slots[k])].alive = false;

        starts_.resize(pts_.size(), -1);
        ends_.resize(pts_.size(), -1);
        for (const Edge& e : rim) {
            starts_[static_cast<std::size_t>(e.a)] = -1;
            ends_[static_cast<std::size_t>(e.b)] = -1;
            starts_[static_cast<std::size_t>(e.b)] = -1;
            ends_[static_cast<std::size_t>(e.a)] = -1;
        }
        for (std::size_t k = 0; k < rim.size(); ++k) {
            const Edge& e = rim[k];
            const int id = slots[k];
            Tri& t = tris_[static_cast<std::size_t>(id)];
            t.alive = true;
            t.v = {e.a, e.b, vi};
            t.n = {-1, -1, e.outside};
            if (e.outside >= 0) {
                Tri& o = tris_[static_cast<std::size_t>(e.outside)];
                for (int j = 0; j < 3; ++j)
                    if (o.n[static_cast<std::size_t>(j)] == e.from) o.n[static_cast<std::size_t>(j)] = id;
            }
            starts_[static_cast<std::size_t>(e.a)] = id;
            ends_[static_cast<std::size_t>(e.b)] = id;
        }
        for (std::size_t k = 0; k < rim.size(); ++k) {
            Tri& t = tris_[static_cast<std::size_t>(slots[k])];
            t.n[0] = starts_[static_cast<std::size_t>(t.v[1])]; // edge (b, p)
            t.n[1] = ends_[static_cast<std::size_t>(t.v[0])];   // edge (p, a)
        }
        last_ = slots[0];
        mark_.resize(tris_.size(), 0);
    }

    int locate_or_fail(Point2 p) {
        try {
            return locate(p);
        } catch (const std::runtime_error&) {
            return -1;
        }
    }

    int locate(Point2 p) {
        int t = last_;
        if (t < 0 || !tris_[static_cast<std::size_t>(t)].alive)
            for (t = 0; !tris_[static_cast<std::size_t>(t)].alive; ++t) {
            }
        std::uint64_t rot = 0;
        for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
            const Tri& s = tris_[static_cast<std::size_t>(t)];
            bool moved = false;
            const int r = static_cast<int>(mix64(rot++) % 3);
            for (int k = 0; k < 3; ++k) {
                const int e = (k + r) % 3;
                const int a = s.v[static_cast<std::size_t>((e + 1) % 3)];
                const int b = s.v[static_cast<std::size_t>((e + 2) % 3)];
                if (orient(P(a), P(b), p) < 0.0) {
                    const int u = s.n[static_cast<std::size_t>(e)];
                    if (u < 0) throw std::runtime_error("triangulate: point outside the hull");
                    t = u;
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        throw std::runtime_error("triangulate: point location did not terminate");
    }

    bool flip_if_illegal(int t, int i) {
        Tri& T = tris_[static_cast<std::size_t>(t)];
        const int u = T.n[static_cast<std::size_t>(i)];
        if (u < 0) return false;
        Tri& U = tris_[static_cast<std::size_t>(u)];
        int j = 0;
        while (j < 3 && U.n[static_cast<std::size_t>(j)] != t) ++j;
        if (j == 3) throw std::logic_error("triangulate: broken adjacency");
        const int a = T.v[static_cast<std::size_t>(i)];
        const int b = T.v[static_cast<std::size_t>((i + 1) % 3)];
        const int c = T.v[static_cast<std::size_t>((i + 2) % 3)];
        const int d = U.v[static_cast<std::size_t>(j)];
        if (!in_circle(P(a), P(b), P(c), P(d))) return false;
        if (orient(P(a), P(b), P(d)) <= 0.0 || orient(P(a), P(d), P(c)) <= 0.0) return false;

        const int n_ca = T.n[static_cast<std::size_t>((i + 1) % 3)];
        const int n_ab = T.n[static_cast<std::size_t>((i + 2) % 3)];
        const int n_bd = U.n[static_cast<std::size_t>((j + 1) % 3)];
        const int n_dc = U.n[static_cast<std::size_t>((j + 2) % 3)];
        T.v = {a, b, d};
        T.n = {n_bd, u, n_ab};
        U.v = {a, d, c};
        U.n = {n_dc, n_ca, t};
        relink(n_bd, u, t);
        relink(n_ca, t, u);
        last_flip_partner_ = u;
        return true;
    }

    void relink(int tri, int from, int to) {
        if (tri < 0) return;
        for (int& x : tris_[static_cast<std::size_t>(tri)].n)
            if (x == from) x = to;
    }

    std::vector<Point2> pts_;
    std::vector<char> boundary_;
    std::vector<Tri> tris_;
    std::vector<int> mark_;
    std::vector<int> starts_, ends_;
    int stamp_ = 0;
    int last_ = -1;
    int last_flip_partner_ = -1;
};

double min_corner_angle_deg(const Polygon& poly) {
    const auto v = poly.vertices();
    double best = 180.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 a = v[(i + n - 1) % n] - v[i];
        const Point2 b = v[(i + 1) % n] - v[i];
        best = std::min(best, std::atan2(std::abs(cross(a, b)), dot(a, b)) * 180.0 / std::numbers::pi);
    }
    return best;
}

double boundary_distance(const Polygon& poly, Point2 p) {
    const auto v = poly.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 d = v[(i + 1) % n] - v[i];
        best = std::min(best, cross(d, p - v[i]) / norm(d));
    }
    return best;
}

Mesh build_mesh(const Polygon& poly, double h, std::uint64_t seed, const MeshOptions& options, double floor_deg) {
    std::vector<Point2> pts;
    const auto corners = poly.vertices();
    for (std::size_t i = 0, n = corners.size(); i < n; ++i) {
        const Point2 a = corners[i];
        const Point2 b = corners[(i + 1) % n];
        const int m = std::max(1, static_cast<int>(std::ceil(distance(a, b) / h - 1e-9)));
        for (int j = 0; j < m; ++j) pts.push_back(a + (static_cast<double>(j) / m) * (b - a));
    }
    const int nb = static_cast<int>(pts.size());

    CounterRng rng(seed, 0x6d657368);
    const auto [lo, hi] = ConvexBody(poly).bounds();
    const Point2 c = poly.centroid();
    const double dy = h * std::sqrt(3.0) / 2.0;
    const int j0 = static_cast<int>(std::floor((lo.y - c.y) / dy)) - 1;
    const int j1 = static_cast<int>(std::ceil((hi.y - c.y) / dy)) + 1;
    const int i0 = static_cast<int>(std::floor((lo.x - c.x) / h)) - 1;
    const int i1 = static_cast<int>(std::ceil((hi.x - c.x) / h)) + 1;
    const double clearance = options.boundary_clearance * h;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            const double shift = (j & 1) ? 0.5 : 0.0;
            const double jx = rng.uniform(-0.1, 0.1) * h;
            const double jy = rng.uniform(-0.1, 0.1) * h;
            const Point2 p{c.x + (i + shift) * h + jx, c.y + j * dy + jy};
            if (boundary_distance(poly, p) >= clearance) pts.push_back(p);
        }
    }
    if (static_cast<int>(pts.size()) == nb) throw std::domain_error("no interior points");

    int center = nb;
    for (int k = nb; k < static_cast<int>(pts.size()); ++k)
        if (distance(pts[static_cast<std::size_t>(k)], c) < distance(pts[static_cast<std::size_t>(center)], c))
            center = k;
    // Lattice order keeps successive insertions adjacent; the star center goes
    // first.
    std::swap(pts[static_cast<std::size_t>(nb)], pts[static_cast<std::size_t>(center)]);

    const std::size_t lattice_count = pts.size();
    DelaunayBuilder builder(std::move(pts));
    builder.start_star(nb, nb);
    for (int k = nb + 1; k < static_cast<int>(lattice_count); ++k) builder.insert(k);
    builder.legalize_all();
    builder.improve(floor_deg, 4 * lattice_count + 1000);

    Mesh mesh(poly);
    mesh.vertices = builder.points();
    mesh.triangles = builder.triangles();
    mesh.h = h;
    mesh.seed = seed;
    const auto& on_boundary = builder.boundary();
    for (std::size_t k = 0; k < on_boundary.size(); ++k)
        if (on_boundary[k]) mesh.boundary_vertices.push_back(static_cast<int>(k));
    mesh.min_angle_deg = min_angle_deg(mesh);
    return mesh;
}

} // namespace

double Mesh::triangle_area(std::size_t t) const {
    const Triangle& tri = triangles[t];
    return detail::signed_area(vertices[static_cast<std::size_t>(tri[0])],
                               vertices[static_cast<std::size_t>(tri[1])],
                               vertices[static_cast<std::size_t>(tri[2])]);
}

double Mesh::area() const {
    double a = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
    return a;
}

std::vector<char> Mesh::boundary_mask() const {
    std::vector<char> mask(vertices.size(), 0);
    for (int v : boundary_vertices) mask[static_cast<std::size_t>(v)] = 1;
    return mask;
}

double min_angle_deg(const Mesh& mesh) {
    double best = 180.0;
    for (const Triangle& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            const Point2 p = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
            const Point2 a = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])] - p;
            const Point2 b = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 2) % 3)])] - p;
            best = std::min(best, std::atan2(std::abs(cross(a, b)), dot(a, b)) * 180.0 / std::numbers::pi);
        }
    }
    return best;
}

Mesh triangulate(const Polygon& poly, double h, std::uint64_t seed, const MeshOptions& options) {
    if (!(h > 0.0)) throw std::invalid_argument("mesh size h must be positive");
    int reductions = 0;
    // Too coarse to place a single interior point: shrink h until one fits.
    for (;; ++reductions, h *= 0.5) {
        if (reductions > 60) throw std::runtime_error("triangulate: cannot place interior points");
        try {
            const double floor_deg = std::min(options.min_angle_deg, min_corner_angle_deg(poly) - 1e-9);
            Mesh probe = build_mesh(poly, h, seed, options, floor_deg);
            if (probe.min_angle_deg < floor_deg) {
                h *= 0.5;
                ++reductions;
                probe = build_mesh(poly, h, seed, options, floor_deg);
                if (probe.min_angle_deg < floor_deg)
                    throw std::runtime_error("triangulate: minimum angle below floor after halving h");
            }
            probe.h_reductions = reductions;
            return probe;
        } catch (const std::domain_error&) {
        }
    }
}

Mesh refine(const Mesh& mesh) {
    Mesh out(mesh.domain);
    out.vertices = mesh.vertices;
    out.h = 0.5 * mesh.h;
    out.seed = mesh.seed;
    out.h_reductions = mesh.h_reductions;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        const auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int id = static_cast<int>(out.vertices.size());
        out.vertices.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(a)] +
                                      mesh.vertices[static_cast<std::size_t>(b)]));
        midpoint.emplace(key, id);
        return id;
    };
    out.triangles.reserve(4 * mesh.triangles.size());
    for (const Triangle& t : mesh.triangles) {
        const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({ab, t[1], bc});
        out.triangles.push_back({ca, bc, t[2]});
        out.triangles.push_back({ab, bc, ca});
    }
    const std::vector<char> was_boundary = mesh.boundary_mask();
    const double tol = 1e-9 * diameter(mesh.domain);
    out.boundary_vertices = mesh.boundary_vertices;
    for (const auto& [key, id] : midpoint) {
        if (!was_boundary[static_cast<std::size_t>(key.first)] || !was_boundary[static_cast<std::size_t>(key.second)])
            continue;
        if (-distance(mesh.domain, out.vertices[static_cast<std::size_t>(id)]) > -tol &&
            std::abs(boundary_distance(mesh.domain, out.vertices[static_cast<std::size_t>(id)])) < tol)
            out.boundary_vertices.push_back(id);
    }
    std::sort(out.boundary_vertices.begin(), out.boundary_vertices.end());
    out.min_angle_deg = mesh.min_angle_deg;
    return out;
}

std::vector<double> prolongate(const Mesh& coarse, std::span<const double> values) {
    if (values.size() != coarse.vertices.size()) throw std::invalid_argument("prolongate: size mismatch");
    std::vector<double> out(values.begin(), values.end());
    std::map<std::pair<int, int>, int> seen;
    // Same midpoint numbering as refine(): first-visit order over triangles.
    auto mid = [&](int a, int b) {
        const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        if (seen.contains(key)) return;
        seen.emplace(key, static_cast<int>(out.size()));
        out.push_back(0.5 * (values[static_cast<std::size_t>(a)] + values[static_cast<std::size_t>(b)]));
    };
    for (const Triangle& t : coarse.triangles) {
        mid(t[0], t[1]);
        mid(t[1], t[2]);
        mid(t[2], t[0]);
    }
    return out;
}

// --- P1 fields -----------------------------------------------------------

P1Field::P1Field(std::shared_ptr<const Mesh> m, std::vector<double> v) : mesh(std::move(m)), values(std::move(v)) {
    if (!mesh) throw std::invalid_argument("P1Field needs a mesh");
    if (values.size() != mesh->vertices.size()) throw std::invalid_argument("P1Field: one value per vertex");
    for (double x : values)
        if (!std::isfinite(x)) throw std::invalid_argument("P1Field: non-finite value");
}

P1Field operator-(const P1Field& f) { return -1.0 * f; }

P1Field operator+(const P1Field& f, double c) {
    std::vector<double> v = f.values;
    for (double& x : v) x += c;
    return P1Field(f.mesh, std::move(v));
}

P1Field operator*(double s, const P1Field& f) {
    std::vector<double> v = f.values;
    for (double& x : v) x *= s;
    return P1Field(f.mesh, std::move(v));
}

namespace {

template <class PerTriangle>
double accumulate(const P1Field& f, PerTriangle&& body) {
    const Mesh& m = *f.mesh;
    double total = 0.0;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        const Triangle& tri = m.triangles[t];
        const std::array<Point2, 3> p{m.vertices[static_cast<std::size_t>(tri[0])],
                                      m.vertices[static_cast<std::size_t>(tri[1])],
                                      m.vertices[static_cast<std::size_t>(tri[2])]};
        const std::array<double, 3> v{f.values[static_cast<std::size_t>(tri[0])],
                                      f.values[static_cast<std::size_t>(tri[1])],
                                      f.values[static_cast<std::size_t>(tri[2])]};
        total += body(p, v, m.triangle_area(t));
    }
    return total;
}

double gradient_norm(const std::array<Point2, 3>& p, const std::array<double, 3>& v) {
    return norm(detail::linear_gradient(p[0], p[1], p[2], v[0], v[1], v[2]));
}

} // namespace

double integrate(const P1Field& f) {
    return accumulate(f, [](const auto&, const auto& v, double a) { return a * (v[0] + v[1] + v[2]) / 3.0; });
}

double gradient_l1(const P1Field& f) {
    return accumulate(f, [](const auto& p, const auto& v, double a) { return a * gradient_norm(p, v); });
}

double dirichlet_energy(const P1Field& f) {
    return accumulate(f, [](const auto& p, const auto& v, double a) {
        const double g = gradient_norm(p, v);
        return a * g * g;
    });
}

double positive_measure(const P1Field& f) {
    return accumulate(f, [](const auto&, const auto& v, double a) {
        return a * detail::positive_fraction(v[0], v[1], v[2]);
    });
}

double zero_measure(const P1Field& f) {
    return accumulate(f, [](const auto&, const auto& v, double a) {
        return (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0) ? a : 0.0;
    });
}

double l1_norm(const P1Field& f) {
    return accumulate(f, [](const auto&, const auto& v, double a) {
        return a * (detail::positive_mean(v[0], v[1], v[2]) + detail::positive_mean(-v[0], -v[1], -v[2]));
    });
}

double l2_norm_squared(const P1Field& f) {
    return accumulate(f, [](const auto&, const auto& v, double a) { return a * detail::square_mean(v[0], v[1], v[2]); });
}

PositivePartIntegrals positive_part_integrals(const P1Field& f) {
    PositivePartIntegrals out;
    out.square = accumulate(f, [](const auto&, const auto& v, double a) {
        return a * detail::positive_square_mean(v[0], v[1], v[2]);
    });
    // grad f_+ equals grad f on {f > 0} and vanishes elsewhere.
    auto positive_area = [](const std::array<double, 3>& v, double a) {
        return a * (1.0 - detail::positive_fraction(-v[0], -v[1], -v[2]));
    };
    out.gradient_l1 = accumulate(f, [&](const auto& p, const auto& v, double a) {
        return gradient_norm(p, v) * positive_area(v, a);
    });
    out.gradient_l2sq = accumulate(f, [&](const auto& p, const auto& v, double a) {
        const double g = gradient_norm(p, v);
        return g * g * positive_area(v, a);
    });
    return out;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    const auto old = out.precision(17);
    out << "VERTICES " << mesh.vertices.size() << '\n';
    for (const Point2& p : mesh.vertices) out << p.x << ' ' << p.y << '\n';
    out << "TRIANGLES " << mesh.triangles.size() << '\n';
    for (const Triangle& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "BOUNDARY " << mesh.boundary_vertices.size() << '\n';
    for (int v : mesh.boundary_vertices) out << v << '\n';
    out.precision(old);
}

} // namespace sandwich
