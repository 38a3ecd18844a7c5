#pragma once

#include "sandwich/fem.hpp"
#include "sandwich/geometry.hpp"
#include "sandwich/measure.hpp"
#include "sandwich/mesh.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace sandwich {

/// Memoized Neumann/Dirichlet FEM spectra keyed by (polygon, bc, k, h, seed).
/// Safe to share between threads; a given key always yields the same result.
class FemCache {
public:
    std::shared_ptr<const EigenResult> get(const ConvexBody& body, BoundaryCondition bc, std::size_t k, double h,
                                           std::uint64_t seed, const SolverOptions& options = {});
    std::size_t size() const;

private:
    using Key = std::tuple<std::vector<double>, int, std::size_t, double, std::uint64_t>;
    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const EigenResult>> entries_;
};

struct CertConfig {
    double c_sep = 1.0;      // stand-in for the unknown absolute constant
    double slack = 0.05;     // relative tolerance of FEM comparisons
    double mesh_h = 0.1;     // FEM mesh size, see pipeline_mesh_size
    int max_doublings = 6;
    std::uint64_t seed = 1;
    std::shared_ptr<FemCache> cache; // optional

    void validate() const;
};

/// Absolute FEM mesh size mesh_h * min(diam, 4 inradius), so thin bodies
/// still get several elements across.
double pipeline_mesh_size(const ConvexBody& body, double mesh_h);

/// Eigenvalue lower bound from a convex partition: lambda_l >= h^2 / (4 M^2)
/// with h = min over pieces of 1/diam.
struct PartitionCertificate {
    explicit PartitionCertificate(PartitionPieces parts) : pieces(std::move(parts)) {}

    PartitionPieces pieces;
    int multiplicity = 1;
    double h_min_lower = 0.0;
    double lambda_lower = 0.0;
    std::size_t l = 0;
    std::string domain_id;
    std::vector<std::uint64_t> seeds;
};

/// Maximum number of covering sets containing a seeded sample point of the
/// domain. Throws std::domain_error when a sample is uncovered.
int multiplicity(const std::vector<ConvexBody>& cover, const ConvexBody& domain, std::size_t samples,
                 std::uint64_t seed);

/// Voronoi partition of the first l farthest-point sites (greedy order from
/// the site nearest the centroid).
PartitionPieces net_partition(const ConvexBody& domain, std::size_t l, std::uint64_t seed);

/// Throws std::invalid_argument unless `pieces` partition the domain.
PartitionCertificate certify_lower(const ConvexBody& domain, const PartitionPieces& pieces);

struct BisectionResult {
    std::vector<double> coefficients; // c_0 (constant) .. c_l, unit norm
    std::vector<double> defects;      // |area(A_i ∩ {f >= 0}) - area(A_i)/2| / area(A_i)
    double max_defect = 0.0;
    bool converged = false;
    int restarts_used = 0;
};

struct BisectOptions {
    double tol = 1e-3;
    int restarts = 32;
    int max_iterations = 60;
};

/// Normalized Gram determinant of {1, f_1, .., f_l} (1 for an orthogonal set).
double gram_determinant(const EigenResult& eigen, std::size_t l);

/// Coefficients c on the unit sphere with f = c_0 + sum c_i f_i splitting
/// every piece in half (Borsuk-Ulam guarantees a zero). Damped Gauss-Newton
/// on the signed defects, whose exact Jacobian is the integral of basis
/// functions over the zero line divided by |grad f|, restarted from seeded
/// random points. Needs Neumann eigenvectors 1..l for l pieces; throws
/// std::invalid_argument when the Gram determinant is at most 1e-10.
BisectionResult bisect_combination(const EigenResult& eigen, const PartitionPieces& pieces, std::uint64_t seed,
                                   const BisectOptions& options = {});

/// f = c_0 + sum c_i f_i as a field on the eigenvector mesh.
P1Field combination(const EigenResult& eigen, const std::vector<double>& coefficients);

/// Absolute bisection defects of a field on each piece, evaluated exactly.
std::vector<double> bisection_defects(const P1Field& field, const PartitionPieces& pieces);

struct ChainSide {
    double lhs = 0.0; // integral of f_pm^2
    double rhs = 0.0; // (4 M^2 / h^2) integral of |grad f_pm|^2
    bool pass = false;
};

struct ChainReport {
    ChainSide plus, minus;
    double max_defect = 0.0;
    bool pass = false;
};

/// Evaluates both sides of the Rayleigh chain for f_+ and f_-. Throws
/// std::invalid_argument when the field does not bisect every piece within tol.
ChainReport rayleigh_chain_verify(const P1Field& field, const PartitionPieces& pieces,
                                  const PartitionCertificate& certificate, double tol = 1e-3);

/// Common fields of the proof pipelines.
struct PipelineReport {
    std::size_t k = 0;
    std::size_t n = 2;
    double c_sep_final = 0.0;
    int doublings = 0;
    bool net_ok = false;          // site count <= k - 1 reached
    double R = 0.0;
    std::size_t sites = 0;
    double max_piece_diameter = 0.0;
    double diameter_bound = 0.0;  // 8R or 10R
    bool diameters_ok = false;
    double theorem_bound = 0.0;   // 1 / (4 (8R)^2) or 1 / (20R)^2
    double lambda_k_source = 0.0; // FEM lambda_k of the body that fixes R
    double fem_lambda_target = 0.0; // FEM lambda_{k-1} of the certified body
    double fem_lambda_l = 0.0;
    double fem_error = 0.0;
    bool sound = false;           // certificate and theorem bound below FEM (with slack)
    double empirical_constant = 0.0;
    std::vector<double> piece_diameters;
    std::shared_ptr<PartitionCertificate> certificate;
};

/// Proof of the upper bound lambda_k(outer) <~ (n log k)^2 lambda_{k-1}(inner).
/// empirical_constant = lambda_k(outer) / ((n log k)^2 lambda_{k-1}(inner)).
PipelineReport mthm1_run(const ConvexBody& inner, const ConvexBody& outer, std::size_t k, const CertConfig& config);

struct LemmaReport : PipelineReport {
    double hausdorff = 0.0;         // max distance from outer to inner (vertex-exact)
    double hausdorff_sampled = 0.0; // same on 1000 boundary samples
    bool claim_holds = false;       // hausdorff <= R
};

/// Lemma pipeline: R from lambda_k(inner), net on inner, Voronoi on outer.
/// Throws std::invalid_argument unless area(inner) >= (1 - k^-n) area(outer).
/// empirical_constant = lambda_k(inner) / ((n^2 log k)^2 lambda_{k-1}(outer)).
LemmaReport lem_mthm2_run(const ConvexBody& inner, const ConvexBody& outer, std::size_t k, const CertConfig& config);

struct Mthm2Report {
    bool symmetric = false;
    Point2 center;             // recentering shift (general branch)
    double overlap_ratio = 1.0;
    double v = 0.0;
    double v_effective = 0.0;  // v or 2^-n v
    double r = 0.0;
    double outside_measure = 0.0; // mu(outer \ tilde)
    bool measure_ok = false;      // outside_measure < k^-n
    double scaling_ratio = 0.0;   // r^2 lambda_k(r inner) / lambda_k(inner) (should be 1)
    PipelineReport step1;         // inner -> tilde via r inner
    LemmaReport step2;            // tilde -> outer
    double lambda_k_inner = 0.0;
    double lambda_k2_outer = 0.0;
    double envelope = 0.0;        // min{...} factor of the statement
    double empirical_constant = 0.0; // lambda_k(inner) envelope / lambda_{k-2}(outer)
    bool sound = false;
};

/// Chained proof of lambda_{k-2}(outer) >~ min{...} lambda_k(inner).
Mthm2Report mthm2_run(const ConvexBody& inner, const ConvexBody& outer, std::size_t k, const CertConfig& config);

/// r = 2 max{n log k / -log(1 - v), 1}; v = 1 gives 2.
double mthm2_scale(double v, std::size_t n, std::size_t k);

} // namespace sandwich
