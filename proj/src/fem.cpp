#include "sandwich/fem.hpp"

#include "sandwich/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sandwich {

namespace {

using Local = std::array<double, 9>;

struct Incidence {
    std::vector<std::size_t> offsets; // per vertex, into triangles
    std::vector<int> triangles;       // ascending triangle ids per vertex
};

Incidence vertex_triangles(const Mesh& mesh) {
    Incidence inc;
    inc.offsets.assign(mesh.vertices.size() + 1, 0);
    for (const Triangle& t : mesh.triangles)
        for (int v : t) ++inc.offsets[static_cast<std::size_t>(v) + 1];
    for (std::size_t i = 1; i < inc.offsets.size(); ++i) inc.offsets[i] += inc.offsets[i - 1];
    inc.triangles.resize(inc.offsets.back());
    std::vector<std::size_t> fill(inc.offsets.begin(), inc.offsets.end() - 1);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        for (int v : mesh.triangles[t]) inc.triangles[fill[static_cast<std::size_t>(v)]++] = static_cast<int>(t);
    return inc;
}

SparseSym pattern(const Mesh& mesh, const Incidence& inc) {
    SparseSym a;
    a.dimension = mesh.vertices.size();
    a.row_offsets.assign(1, 0);
    std::vector<int> row;
    for (std::size_t i = 0; i < a.dimension; ++i) {
        row.clear();
        for (std::size_t p = inc.offsets[i]; p < inc.offsets[i + 1]; ++p)
            for (int v : mesh.triangles[static_cast<std::size_t>(inc.triangles[p])]) row.push_back(v);
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        a.columns.insert(a.columns.end(), row.begin(), row.end());
        a.row_offsets.push_back(a.columns.size());
    }
    a.values.assign(a.columns.size(), 0.0);
    return a;
}

void element_matrices(const Mesh& mesh, std::size_t t, Local& k, Local& m) {
    const Triangle& tri = mesh.triangles[t];
    std::array<Point2, 3> p;
    for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])];
    const double twice_area = cross(p[1] - p[0], p[2] - p[0]);
    if (!(0.5 * twice_area >= 1e-14)) throw std::runtime_error("assemble: degenerate triangle");
    k.fill(0.0);
    for (int c = 0; c < 3; ++c) {
        const auto i = static_cast<std::size_t>((c + 1) % 3), j = static_cast<std::size_t>((c + 2) % 3);
        const Point2 a = p[i] - p[static_cast<std::size_t>(c)], b = p[j] - p[static_cast<std::size_t>(c)];
        const double half_cot = 0.5 * dot(a, b) / twice_area;
        k[i * 3 + j] = k[j * 3 + i] = -half_cot;
    }
    for (std::size_t i = 0; i < 3; ++i) k[i * 3 + i] = -(k[i * 3 + (i + 1) % 3] + k[i * 3 + (i + 2) % 3]);
    const double w = twice_area / 24.0; // area / 12
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m[i * 3 + j] = (i == j ? 2.0 : 1.0) * w;
}

std::size_t slot(const SparseSym& a, std::size_t row, int col) {
    const auto first = a.columns.begin() + static_cast<std::ptrdiff_t>(a.row_offsets[row]);
    const auto last = a.columns.begin() + static_cast<std::ptrdiff_t>(a.row_offsets[row + 1]);
    return static_cast<std::size_t>(std::lower_bound(first, last, col) - a.columns.begin());
}

} // namespace

FemSystem assemble(const Mesh& mesh) {
    const Incidence inc = vertex_triangles(mesh);
    FemSystem sys{pattern(mesh, inc), {}};
    sys.mass = sys.stiffness;

    const auto nt = static_cast<std::ptrdiff_t>(mesh.triangles.size());
    std::vector<Local> ks(mesh.triangles.size()), ms(mesh.triangles.size());
    bool degenerate = false;
#pragma omp parallel for schedule(static) reduction(|| : degenerate)
    for (std::ptrdiff_t t = 0; t < nt; ++t) {
        try {
            element_matrices(mesh, static_cast<std::size_t>(t), ks[static_cast<std::size_t>(t)], ms[static_cast<std::size_t>(t)]);
        } catch (const std::runtime_error&) {
            degenerate = true;
        }
    }
    if (degenerate) throw std::runtime_error("assemble: degenerate triangle");

    const auto nv = static_cast<std::ptrdiff_t>(mesh.vertices.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t iv = 0; iv < nv; ++iv) {
        const auto i = static_cast<std::size_t>(iv);
        for (std::size_t p = inc.offsets[i]; p < inc.offsets[i + 1]; ++p) {
            const auto t = static_cast<std::size_t>(inc.triangles[p]);
            const Triangle& tri = mesh.triangles[t];
            std::size_t a = 0;
            while (tri[a] != static_cast<int>(i)) ++a;
            for (std::size_t b = 0; b < 3; ++b) {
                const std::size_t s = slot(sys.stiffness, i, tri[b]);
                sys.stiffness.values[s] += ks[t][a * 3 + b];
                sys.mass.values[s] += ms[t][a * 3 + b];
            }
        }
    }
    return sys;
}

FemSystem assemble_serial(const Mesh& mesh) {
    const Incidence inc = vertex_triangles(mesh);
    FemSystem sys{pattern(mesh, inc), {}};
    sys.mass = sys.stiffness;
    Local k, m;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        element_matrices(mesh, t, k, m);
        const Triangle& tri = mesh.triangles[t];
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) {
                const std::size_t s = slot(sys.stiffness, static_cast<std::size_t>(tri[a]), tri[b]);
                sys.stiffness.values[s] += k[a * 3 + b];
                sys.mass.values[s] += m[a * 3 + b];
            }
    }
    return sys;
}

// --- LOBPCG ----------------------------------------------------------------

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

void apply(const SparseSym& a, const Mat& x, Mat& y) {
    y.resize(x.rows(), x.cols());
    const auto n = static_cast<std::size_t>(x.rows());
    for (Eigen::Index c = 0; c < x.cols(); ++c)
        a.multiply(std::span<const double>(x.col(c).data(), n), std::span<double>(y.col(c).data(), n));
}

struct Problem {
    const SparseSym* k = nullptr;
    const SparseSym* m = nullptr;
    Vec precond;
    Vec deflate;   // M-normalized vector removed from the search space (or empty)
    Vec m_deflate; // M * deflate

    void project(Mat& x) const {
        if (deflate.size() == 0) return;
        const Eigen::RowVectorXd coef = m_deflate.transpose() * x;
        x -= deflate * coef;
    }
};

/// Basis transform Z with Z^T G Z = I on the well-conditioned part of the
/// Gram matrix G (scaled eigen-decomposition).
Mat svqb(const Mat& gram, double drop) {
    const Vec d = gram.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    const Mat scaled = d.asDiagonal() * gram * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (scaled + scaled.transpose()));
    const Vec& s = eig.eigenvalues();
    const double top = s.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > drop * top) keep.push_back(i);
    Mat z(gram.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        z.col(static_cast<Eigen::Index>(c)) = d.asDiagonal() * eig.eigenvectors().col(keep[c]) / std::sqrt(s(keep[c]));
    return z;
}

struct BlockResult {
    Vec values;
    Mat vectors;
    Vec residuals;
    int iterations = 0;
    bool converged = false;
};

BlockResult lobpcg(const Problem& pb, Mat x, std::size_t want, const SolverOptions& opt) {
    const Eigen::Index n = x.rows();
    const Eigen::Index m = x.cols();
    pb.project(x);
    Mat kx, mx;
    apply(*pb.m, x, mx);
    {
        const Mat z = svqb(x.transpose() * mx, 1e-14);
        x = x * z;
    }
    if (x.cols() < m) {
        // Rank-deficient start: top up with seeded noise.
        CounterRng rng(opt.seed, 0x6c6f62);
        Mat extra(n, m - x.cols());
        for (Eigen::Index j = 0; j < extra.cols(); ++j)
            for (Eigen::Index i = 0; i < n; ++i) extra(i, j) = rng.uniform(-1.0, 1.0);
        Mat joined(n, m);
        joined << x, extra;
        x = joined;
        pb.project(x);
        apply(*pb.m, x, mx);
        x = x * svqb(x.transpose() * mx, 1e-14);
    }
    apply(*pb.k, x, kx);
    apply(*pb.m, x, mx);
    Vec lambda;
    {
        const Mat a = x.transpose() * kx;
        Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (a + a.transpose()));
        x = x * eig.eigenvectors();
        kx = kx * eig.eigenvectors();
        mx = mx * eig.eigenvectors();
        lambda = eig.eigenvalues();
    }

    Mat p, kp, mp;
    std::vector<char> has_p(static_cast<std::size_t>(m), 0);
    BlockResult out;
    Vec res(m);
    for (int it = 0;; ++it) {
        if (it % 25 == 24) {
            // Refresh products and orthonormality against drift.
            pb.project(x);
            apply(*pb.m, x, mx);
            const Mat z = svqb(x.transpose() * mx, 1e-14);
            x = x * z;
            apply(*pb.k, x, kx);
            apply(*pb.m, x, mx);
        }
        const Mat r = kx - mx * lambda.asDiagonal();
        for (Eigen::Index j = 0; j < m; ++j) res(j) = r.col(j).norm();
        bool done = true;
        for (std::size_t j = 0; j < want; ++j) done = done && res(static_cast<Eigen::Index>(j)) <= opt.tol;
        out.iterations = it;
        if (done || it >= opt.max_iterations) {
            out.converged = done;
            break;
        }

        std::vector<Eigen::Index> active;
        for (Eigen::Index j = 0; j < m; ++j)
            if (res(j) > opt.tol) active.push_back(j);
        const auto na = static_cast<Eigen::Index>(active.size());
        Mat w(n, na);
        for (Eigen::Index c = 0; c < na; ++c) w.col(c) = pb.precond.cwiseProduct(r.col(active[static_cast<std::size_t>(c)]));
        pb.project(w);
        std::vector<Eigen::Index> pcols;
        for (Eigen::Index j : active)
            if (has_p[static_cast<std::size_t>(j)]) pcols.push_back(j);
        const auto np = static_cast<Eigen::Index>(pcols.size());
        Mat pa(n, np), kpa(n, np), mpa(n, np);
        for (Eigen::Index c = 0; c < np; ++c) {
            pa.col(c) = p.col(pcols[static_cast<std::size_t>(c)]);
            kpa.col(c) = kp.col(pcols[static_cast<std::size_t>(c)]);
            mpa.col(c) = mp.col(pcols[static_cast<std::size_t>(c)]);
        }
        Mat kw, mw;
        apply(*pb.k, w, kw);
        apply(*pb.m, w, mw);

        const Eigen::Index s = m + na + np;
        Mat sb(n, s), ksb(n, s), msb(n, s);
        sb << x, w, pa;
        ksb << kx, kw, kpa;
        msb << mx, mw, mpa;
        const Mat gm = sb.transpose() * msb;
        const Mat gk = sb.transpose() * ksb;
        const Mat z = svqb(0.5 * (gm + gm.transpose()), 1e-13);
        const Mat a = z.transpose() * (0.5 * (gk + gk.transpose())) * z;
        Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (a + a.transpose()));
        if (eig.eigenvalues().size() < m) throw std::runtime_error("eigensolver: search space collapsed");
        const Mat c = z * eig.eigenvectors().leftCols(m);
        lambda = eig.eigenvalues().head(m);

        // Search direction: the W and P components of the new iterate.
        Mat cwp = c;
        cwp.topRows(m).setZero();
        p = sb * cwp;
        kp = ksb * cwp;
        mp = msb * cwp;
        std::fill(has_p.begin(), has_p.end(), 1);
        x = sb * c;
        kx = ksb * c;
        mx = msb * c;
    }
    out.values = lambda;
    out.vectors = x;
    out.residuals = res;
    return out;
}

// Low-frequency trial functions on the bounding box: cosines for Neumann,
// sines for Dirichlet, ordered by their box eigenvalue.
std::vector<double> trial_function(const Mesh& mesh, BoundaryCondition bc, int a, int b) {
    const auto [lo, hi] = ConvexBody(mesh.domain).bounds();
    const double lx = hi.x - lo.x, ly = hi.y - lo.y;
    std::vector<double> v(mesh.vertices.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double u = std::numbers::pi * (mesh.vertices[i].x - lo.x) / lx;
        const double w = std::numbers::pi * (mesh.vertices[i].y - lo.y) / ly;
        v[i] = bc == BoundaryCondition::Neumann ? std::cos(a * u) * std::cos(b * w) : std::sin(a * u) * std::sin(b * w);
    }
    return v;
}

std::vector<std::pair<int, int>> trial_modes(const Mesh& mesh, BoundaryCondition bc, std::size_t count) {
    const auto [lo, hi] = ConvexBody(mesh.domain).bounds();
    const double lx = hi.x - lo.x, ly = hi.y - lo.y;
    const int first = bc == BoundaryCondition::Neumann ? 0 : 1;
    std::vector<std::pair<double, std::pair<int, int>>> modes;
    const int top = static_cast<int>(count) + 2;
    for (int a = first; a <= top; ++a)
        for (int b = first; b <= top; ++b) {
            if (a == 0 && b == 0) continue;
            modes.push_back({(a / lx) * (a / lx) + (b / ly) * (b / ly), {a, b}});
        }
    std::sort(modes.begin(), modes.end());
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < count && i < modes.size(); ++i) out.push_back(modes[i].second);
    return out;
}

} // namespace

EigenResult solve_smallest(const std::shared_ptr<const Mesh>& mesh, const FemSystem& system, std::size_t k,
                           BoundaryCondition bc, const SolverOptions& options,
                           const std::vector<std::vector<double>>& initial) {
    if (!mesh) throw std::invalid_argument("solve_smallest: mesh required");
    if (k == 0) throw std::invalid_argument("solve_smallest: k must be at least 1");
    const std::size_t nv = mesh->vertices.size();
    if (system.stiffness.dimension != nv) throw std::invalid_argument("solve_smallest: system does not match mesh");

    const bool neumann = bc == BoundaryCondition::Neumann;
    std::vector<int> free;
    SparseSym kr, mr;
    const SparseSym* kp = &system.stiffness;
    const SparseSym* mp = &system.mass;
    if (!neumann) {
        const auto mask = mesh->boundary_mask();
        for (std::size_t i = 0; i < nv; ++i)
            if (!mask[i]) free.push_back(static_cast<int>(i));
        kr = system.stiffness.principal_submatrix(free);
        mr = system.mass.principal_submatrix(free);
        kp = &kr;
        mp = &mr;
    } else {
        free.resize(nv);
        for (std::size_t i = 0; i < nv; ++i) free[i] = static_cast<int>(i);
    }
    const auto n = static_cast<Eigen::Index>(free.size());
    const std::size_t block = k + static_cast<std::size_t>(std::max(0, options.guard_vectors));
    const std::size_t space = free.size() - (neumann ? 1 : 0);
    if (block > space) throw std::invalid_argument("solve_smallest: block size exceeds problem dimension");

    Problem pb;
    pb.k = kp;
    pb.m = mp;
    const std::vector<double> diag = kp->diagonal();
    pb.precond.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) pb.precond(i) = 1.0 / diag[static_cast<std::size_t>(i)];
    Vec ones = Vec::Ones(n);
    if (neumann) {
        Vec mo(n);
        mp->multiply(std::span<const double>(ones.data(), static_cast<std::size_t>(n)),
                     std::span<double>(mo.data(), static_cast<std::size_t>(n)));
        const double scale = 1.0 / std::sqrt(ones.dot(mo));
        pb.deflate = scale * ones;
        pb.m_deflate = scale * mo;
    }

    Mat x(n, static_cast<Eigen::Index>(block));
    std::size_t col = 0;
    for (const auto& v : initial) {
        if (col >= block) break;
        if (v.size() != nv) throw std::invalid_argument("solve_smallest: initial vector size mismatch");
        for (Eigen::Index i = 0; i < n; ++i) x(i, static_cast<Eigen::Index>(col)) = v[static_cast<std::size_t>(free[static_cast<std::size_t>(i)])];
        ++col;
    }
    const auto modes = trial_modes(*mesh, bc, block);
    CounterRng rng(options.seed, 0x696e6974);
    for (std::size_t j = 0; col < block; ++col, ++j) {
        const auto [a, b] = j < modes.size() ? modes[j] : std::pair<int, int>{1, 1};
        const std::vector<double> v = trial_function(*mesh, bc, a, b);
        for (Eigen::Index i = 0; i < n; ++i)
            x(i, static_cast<Eigen::Index>(col)) = v[static_cast<std::size_t>(free[static_cast<std::size_t>(i)])] + 1e-3 * rng.uniform(-1.0, 1.0);
    }

    const BlockResult br = lobpcg(pb, std::move(x), k, options);

    EigenResult out;
    out.mesh = mesh;
    out.h = mesh->h;
    out.seed = options.seed;
    out.iterations = br.iterations;
    out.converged = br.converged;
    out.spectrum.bc = bc;
    out.spectrum.source = SpectrumSource::Fem;
    auto expand = [&](const Vec& v) {
        std::vector<double> full(nv, 0.0);
        for (Eigen::Index i = 0; i < n; ++i) full[static_cast<std::size_t>(free[static_cast<std::size_t>(i)])] = v(i);
        return full;
    };
    auto residual = [&](const Vec& v, double lambda) {
        Vec kv(n), mv(n);
        kp->multiply(std::span<const double>(v.data(), static_cast<std::size_t>(n)), std::span<double>(kv.data(), static_cast<std::size_t>(n)));
        mp->multiply(std::span<const double>(v.data(), static_cast<std::size_t>(n)), std::span<double>(mv.data(), static_cast<std::size_t>(n)));
        return (kv - lambda * mv).norm() / std::sqrt(v.dot(mv));
    };
    if (neumann) {
        out.spectrum.values.push_back(0.0);
        out.vectors.push_back(expand(pb.deflate));
        out.residuals.push_back(residual(pb.deflate, 0.0));
    }
    for (Eigen::Index c = 0; c < br.vectors.cols(); ++c) out.block.push_back(expand(br.vectors.col(c)));
    for (std::size_t j = 0; j < k; ++j) {
        const auto c = static_cast<Eigen::Index>(j);
        Vec v = br.vectors.col(c);
        // Sign convention: largest-magnitude entry positive.
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        out.spectrum.values.push_back(std::max(0.0, br.values(c)));
        out.vectors.push_back(expand(v));
        out.residuals.push_back(residual(v, br.values(c)));
    }
    return out;
}

EigenResult spectrum(const ConvexBody& body, BoundaryCondition bc, std::size_t k, double h, std::uint64_t seed,
                     const SolverOptions& options) {
    if (body.dimension() != 2) throw std::invalid_argument("spectrum: finite elements need a planar body");
    SolverOptions opt = options;
    opt.seed = seed;
    // The coarse level only feeds the error estimate and the fine start, so a
    // looser residual suffices there (eigenvalue error ~ residual^2).
    SolverOptions coarse_opt = opt;
    coarse_opt.tol = std::max(opt.tol, 1e-6);
    const auto coarse_mesh = std::make_shared<const Mesh>(triangulate(as_polygon(body), h, seed));
    const EigenResult coarse = solve_smallest(coarse_mesh, assemble(*coarse_mesh), k, bc, coarse_opt);

    const auto fine_mesh = std::make_shared<const Mesh>(refine(*coarse_mesh));
    std::vector<std::vector<double>> start;
    for (const auto& v : coarse.block) start.push_back(prolongate(*coarse_mesh, v));
    EigenResult fine = solve_smallest(fine_mesh, assemble(*fine_mesh), k, bc, opt, start);

    fine.error_estimates.resize(fine.spectrum.values.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < fine.spectrum.values.size(); ++j) {
        const double lf = fine.spectrum.values[j], lc = coarse.spectrum.values[j];
        fine.error_estimates[j] = lf > 0.0 ? std::abs(lc - lf) / lf : 0.0;
        worst = std::max(worst, fine.error_estimates[j]);
    }
    fine.spectrum.error_estimate = worst;
    fine.h = coarse_mesh->h;
    fine.iterations += coarse.iterations;
    fine.converged = fine.converged && coarse.converged;
    return fine;
}

} // namespace sandwich
