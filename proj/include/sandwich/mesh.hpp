#pragma once

#include "sandwich/geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace sandwich {

using Triangle = std::array<int, 3>;

/// Triangulation of a convex polygon. Triangles are counterclockwise.
struct Mesh {
    explicit Mesh(Polygon domain_polygon) : domain(std::move(domain_polygon)) {}

    Polygon domain;
    std::vector<Point2> vertices;
    std::vector<Triangle> triangles;
    std::vector<int> boundary_vertices; // ascending vertex indices on the domain boundary
    double h = 0.0;                     // target edge length actually used
    std::uint64_t seed = 0;
    int h_reductions = 0;               // automatic halvings of the requested h
    double min_angle_deg = 0.0;

    double triangle_area(std::size_t t) const;
    double area() const;
    std::vector<char> boundary_mask() const;
};

struct MeshOptions {
    double min_angle_deg = 15.0;
    /// Interior lattice points closer than this fraction of h to the boundary
    /// are dropped before triangulation.
    double boundary_clearance = 0.5;
};

/// Boundary points at spacing <= h, a jittered triangular interior lattice at
/// spacing h, Delaunay-triangulated by Bowyer-Watson insertion and cleaned with
/// Lawson flips. Triangles still below the angle floor get their circumcenters
/// inserted (boundary edges they encroach are split instead); this grades the
/// mesh where polygon edges are much shorter than h. If the minimum angle is
/// still below the floor, h is halved once;
/// a second failure throws. The floor is lowered to the smallest polygon
/// corner angle when that is sharper, since no mesh can beat it.
Mesh triangulate(const Polygon& poly, double h, std::uint64_t seed, const MeshOptions& options = {});

/// Uniform 1-to-4 refinement through edge midpoints.
Mesh refine(const Mesh& mesh);

/// Mid-edge prolongation matching refine(): values at new midpoints are the
/// averages of the edge endpoints.
std::vector<double> prolongate(const Mesh& coarse, std::span<const double> values);

double min_angle_deg(const Mesh& mesh);

/// Nodal values of a piecewise-linear function on a mesh.
struct P1Field {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> values;

    P1Field(std::shared_ptr<const Mesh> m, std::vector<double> v);

    template <class F>
    static P1Field interpolate(std::shared_ptr<const Mesh> m, F&& f) {
        std::vector<double> v(m->vertices.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(m->vertices[i]);
        return P1Field(std::move(m), std::move(v));
    }
};

P1Field operator-(const P1Field& f);
P1Field operator+(const P1Field& f, double c);
P1Field operator*(double s, const P1Field& f);

double integrate(const P1Field& f);
/// Integral of |grad f|.
double gradient_l1(const P1Field& f);
/// Integral of |grad f|^2.
double dirichlet_energy(const P1Field& f);
/// Area of {f >= 0}, exact per triangle.
double positive_measure(const P1Field& f);
/// Area of {f == 0} (only whole triangles with three zero vertices count).
double zero_measure(const P1Field& f);
/// Integral of |f|.
double l1_norm(const P1Field& f);
/// Integral of f^2.
double l2_norm_squared(const P1Field& f);

/// Integrals of the positive part f_+ = max(f, 0).
struct PositivePartIntegrals {
    double square = 0.0;        // integral of f_+^2
    double gradient_l1 = 0.0;   // integral of |grad f_+|
    double gradient_l2sq = 0.0; // integral of |grad f_+|^2
};
PositivePartIntegrals positive_part_integrals(const P1Field& f);

/// Text dump with VERTICES / TRIANGLES / BOUNDARY sections, 0-based indices.
void write_mesh(std::ostream& out, const Mesh& mesh);

} // namespace sandwich
