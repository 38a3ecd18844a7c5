#pragma once

#include "sandwich/analytic.hpp"
#include "sandwich/geometry.hpp"
#include "sandwich/mesh.hpp"
#include "sandwich/sparse.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace sandwich {

struct FemSystem {
    SparseSym stiffness; // P1 cotangent Laplacian
    SparseSym mass;      // consistent P1 mass
};

/// Element matrices are computed in parallel over triangles; each global
/// entry is then summed in ascending triangle order, so the result is
/// bit-identical to assemble_serial().
FemSystem assemble(const Mesh& mesh);
FemSystem assemble_serial(const Mesh& mesh);

struct SolverOptions {
    double tol = 1e-8;
    int max_iterations = 2000;
    /// Extra block columns beyond the requested count.
    int guard_vectors = 5;
    std::uint64_t seed = 0;
};

/// Smallest eigenpairs of K u = lambda M u.
struct EigenResult {
    Spectrum spectrum;
    std::shared_ptr<const Mesh> mesh;
    /// Nodal values per eigenpair, M-orthonormal; Dirichlet vectors carry
    /// zeros on boundary vertices.
    std::vector<std::vector<double>> vectors;
    /// Every Ritz vector of the final block (requested pairs plus guard
    /// vectors, constant mode excluded), used to warm-start other solves.
    std::vector<std::vector<double>> block;
    /// ||K u - lambda M u||_2 / ||u||_M per pair.
    std::vector<double> residuals;
    /// Relative two-level estimate per eigenvalue (empty if not computed).
    std::vector<double> error_estimates;
    double h = 0.0;
    std::uint64_t seed = 0;
    int iterations = 0;
    bool converged = false;

    P1Field eigenfunction(std::size_t i) const { return P1Field(mesh, vectors.at(i)); }
};

/// The k smallest eigenpairs. Neumann: the constant mode is deflated and
/// reported as lambda_0 = 0 in front of lambda_1..lambda_k (k + 1 values).
/// Dirichlet: boundary rows and columns are eliminated (k values).
/// `initial` optionally seeds the block with full nodal vectors.
EigenResult solve_smallest(const std::shared_ptr<const Mesh>& mesh, const FemSystem& system, std::size_t k,
                           BoundaryCondition bc, const SolverOptions& options = {},
                           const std::vector<std::vector<double>>& initial = {});

/// triangulate, assemble and solve at h, then again on the uniform refinement
/// (h/2) started from the prolongated coarse vectors. The fine-level values
/// are returned with error_estimates |lambda_h - lambda_{h/2}| / lambda_{h/2}.
EigenResult spectrum(const ConvexBody& body, BoundaryCondition bc, std::size_t k, double h, std::uint64_t seed,
                     const SolverOptions& options = {});

} // namespace sandwich
