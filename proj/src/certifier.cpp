#include "sandwich/certifier.hpp"

#include "linear_triangle.hpp"
#include "sandwich/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sandwich {

// --- FEM cache -----------------------------------------------------------------

std::shared_ptr<const EigenResult> FemCache::get(const ConvexBody& body, BoundaryCondition bc, std::size_t k,
                                                 double h, std::uint64_t seed, const SolverOptions& options) {
    std::vector<double> shape;
    const Polygon poly = as_polygon(body);
    for (const Point2& p : poly.vertices()) {
        shape.push_back(p.x);
        shape.push_back(p.y);
    }
    Key key{std::move(shape), static_cast<int>(bc), k, h, seed};
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto result = std::make_shared<const EigenResult>(spectrum(body, bc, k, h, seed, options));
    std::lock_guard lock(mutex_);
    return entries_.emplace(std::move(key), std::move(result)).first->second;
}

std::size_t FemCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void CertConfig::validate() const {
    if (!(c_sep > 0.0)) throw std::invalid_argument("c_sep must be positive");
    if (!(slack > 0.0 && slack < 0.5)) throw std::invalid_argument("slack must lie in (0, 0.5)");
    if (!(mesh_h > 0.0)) throw std::invalid_argument("mesh_h must be positive");
}

double pipeline_mesh_size(const ConvexBody& body, double mesh_h) {
    return mesh_h * std::min(diameter(body), 4.0 * inradius(body));
}

namespace {

std::shared_ptr<const EigenResult> neumann(const CertConfig& cfg, const ConvexBody& body, std::size_t k) {
    const double h = pipeline_mesh_size(body, cfg.mesh_h);
    if (cfg.cache) return cfg.cache->get(body, BoundaryCondition::Neumann, k, h, cfg.seed);
    return std::make_shared<const EigenResult>(spectrum(body, BoundaryCondition::Neumann, k, h, cfg.seed));
}

SiteSet net_of(const ConvexBody& body, double r, std::uint64_t seed) {
    NetOptions opt;
    opt.samples = static_cast<std::size_t>(std::ceil(10000.0 / std::max(1.0, volume(body))));
    return greedy_net(body, r, seed, opt);
}

} // namespace

// --- coverings and certificates -----------------------------------------------

int multiplicity(const std::vector<ConvexBody>& cover, const ConvexBody& domain, std::size_t samples,
                 std::uint64_t seed) {
    if (cover.empty()) throw std::invalid_argument("multiplicity: empty cover");
    const auto [lo, hi] = domain.bounds();
    const CounterRng rng(seed, 0x6d756c74);
    int best = 0;
    std::size_t taken = 0;
    for (std::uint64_t j = 0; taken < samples; ++j) {
        if (j > 1000 * samples + 1000) throw std::domain_error("multiplicity: domain sampling stalled");
        const Point2 p{lo.x + (hi.x - lo.x) * rng.uniform_at(2 * j), lo.y + (hi.y - lo.y) * rng.uniform_at(2 * j + 1)};
        if (!domain.contains(p, 0.0)) continue;
        ++taken;
        int count = 0;
        for (const ConvexBody& c : cover) count += c.contains(p, 0.0);
        if (count == 0) {
            const bool near = std::any_of(cover.begin(), cover.end(), [&](const ConvexBody& c) { return c.contains(p, 1e-9); });
            if (!near) throw std::domain_error("multiplicity: cover misses a domain point");
            count = 1;
        }
        best = std::max(best, count);
    }
    return best;
}

PartitionPieces net_partition(const ConvexBody& domain, std::size_t l, std::uint64_t seed) {
    if (l == 0) throw std::invalid_argument("net_partition: need at least one piece");
    NetOptions opt;
    opt.continuum_cover = false;
    double r = diameter(domain) / (3.0 * static_cast<double>(l));
    SiteSet net = greedy_net(domain, r, seed, opt);
    while (net.points.size() < l) {
        r *= 0.5;
        net = greedy_net(domain, r, seed, opt);
    }
    net.points.resize(l);
    return voronoi_partition(domain, net.points);
}

PartitionCertificate certify_lower(const ConvexBody& domain, const PartitionPieces& pieces) {
    const Polygon poly = as_polygon(domain);
    if (pieces.pieces.empty() || !is_partition(pieces) ||
        std::abs(pieces.parent.area() - poly.area()) > 1e-9 * poly.area())
        throw std::invalid_argument("certify_lower: pieces do not partition the domain");
    PartitionCertificate cert(pieces);
    cert.multiplicity = 1;
    cert.l = pieces.pieces.size();
    double worst = 0.0;
    for (const Polygon& p : pieces.pieces) worst = std::max(worst, diameter(p));
    cert.h_min_lower = 1.0 / worst;
    cert.lambda_lower = cert.h_min_lower * cert.h_min_lower / (4.0 * cert.multiplicity * cert.multiplicity);
    return cert;
}

// --- exact bisection machinery ------------------------------------------------

namespace {

// Piece ∩ triangle fragments, fan-triangulated; each corner keeps its
// barycentric weights in the parent triangle.
struct Sub {
    std::array<Point2, 3> p;
    std::array<std::array<double, 3>, 3> bary;
    std::size_t tri;
    double area;
};

struct Fragments {
    std::vector<std::vector<Sub>> pieces;
    std::vector<double> piece_area;
};

std::array<double, 3> barycentric(const std::array<Point2, 3>& t, Point2 q) {
    const double d = cross(t[1] - t[0], t[2] - t[0]);
    const double b = cross(q - t[0], t[2] - t[0]) / d;
    const double c = cross(t[1] - t[0], q - t[0]) / d;
    return {1.0 - b - c, b, c};
}

Fragments fragment(const Mesh& mesh, const PartitionPieces& parts) {
    Fragments fr;
    fr.pieces.resize(parts.pieces.size());
    for (std::size_t i = 0; i < parts.pieces.size(); ++i) {
        const Polygon& piece = parts.pieces[i];
        const auto [plo, phi] = ConvexBody(piece).bounds();
        fr.piece_area.push_back(piece.area());
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            std::array<Point2, 3> tp;
            for (int m = 0; m < 3; ++m) tp[static_cast<std::size_t>(m)] = mesh.vertices[static_cast<std::size_t>(mesh.triangles[t][static_cast<std::size_t>(m)])];
            const double xmin = std::min({tp[0].x, tp[1].x, tp[2].x}), xmax = std::max({tp[0].x, tp[1].x, tp[2].x});
            const double ymin = std::min({tp[0].y, tp[1].y, tp[2].y}), ymax = std::max({tp[0].y, tp[1].y, tp[2].y});
            if (xmax < plo.x || xmin > phi.x || ymax < plo.y || ymin > phi.y) continue;
            std::vector<Point2> corners;
            if (contains(piece, tp[0], 0.0) && contains(piece, tp[1], 0.0) && contains(piece, tp[2], 0.0)) {
                corners.assign(tp.begin(), tp.end());
            } else {
                const auto tri = Polygon::try_make({tp[0], tp[1], tp[2]});
                if (!tri) continue;
                const auto cut = intersect(*tri, piece);
                if (!cut) continue;
                corners.assign(cut->vertices().begin(), cut->vertices().end());
            }
            for (std::size_t j = 1; j + 1 < corners.size(); ++j) {
                Sub s;
                s.p = {corners[0], corners[j], corners[j + 1]};
                s.area = detail::signed_area(s.p[0], s.p[1], s.p[2]);
                if (s.area <= 0.0) continue;
                for (int m = 0; m < 3; ++m) s.bary[static_cast<std::size_t>(m)] = barycentric(tp, s.p[static_cast<std::size_t>(m)]);
                s.tri = t;
                fr.pieces[i].push_back(s);
            }
        }
    }
    return fr;
}

double corner_value(const Mesh& mesh, const Sub& s, int corner, const std::vector<double>& nodal) {
    const Triangle& t = mesh.triangles[s.tri];
    const auto& w = s.bary[static_cast<std::size_t>(corner)];
    return w[0] * nodal[static_cast<std::size_t>(t[0])] + w[1] * nodal[static_cast<std::size_t>(t[1])] +
           w[2] * nodal[static_cast<std::size_t>(t[2])];
}

// Signed defects and their Jacobian for f = sum_j c_j basis_j.
struct Evaluation {
    Eigen::VectorXd defect;
    Eigen::MatrixXd jacobian;
};

class BisectionProblem {
public:
    BisectionProblem(const Mesh& mesh, const Fragments& fr, const std::vector<std::vector<double>>& basis)
        : fr_(fr), dims_(basis.size()) {
        // Basis values at every sub-triangle corner: [piece][sub][corner * dims + j].
        values_.resize(fr.pieces.size());
        for (std::size_t i = 0; i < fr.pieces.size(); ++i) {
            values_[i].resize(fr.pieces[i].size() * 3 * dims_);
            for (std::size_t s = 0; s < fr.pieces[i].size(); ++s)
                for (int m = 0; m < 3; ++m)
                    for (std::size_t j = 0; j < dims_; ++j)
                        values_[i][(s * 3 + static_cast<std::size_t>(m)) * dims_ + j] =
                            corner_value(mesh, fr.pieces[i][s], m, basis[j]);
        }
    }

    Evaluation evaluate(const Eigen::VectorXd& c, bool with_jacobian) const {
        const auto l = static_cast<Eigen::Index>(fr_.pieces.size());
        Evaluation e{Eigen::VectorXd::Zero(l), Eigen::MatrixXd::Zero(l, static_cast<Eigen::Index>(dims_))};
        for (std::size_t i = 0; i < fr_.pieces.size(); ++i) {
            double positive = 0.0;
            for (std::size_t s = 0; s < fr_.pieces[i].size(); ++s) {
                const Sub& sub = fr_.pieces[i][s];
                const double* v = values_[i].data() + s * 3 * dims_;
                std::array<double, 3> f{};
                for (std::size_t m = 0; m < 3; ++m)
                    for (std::size_t j = 0; j < dims_; ++j) f[m] += c(static_cast<Eigen::Index>(j)) * v[m * dims_ + j];
                positive += sub.area * detail::positive_fraction(f[0], f[1], f[2]);
                if (!with_jacobian) continue;
                const detail::ZeroSegment z = detail::zero_segment(sub.p, f);
                if (!z.present) continue;
                const double g = norm(detail::linear_gradient(sub.p[0], sub.p[1], sub.p[2], f[0], f[1], f[2]));
                if (!(g > 0.0)) continue;
                const double weight = 0.5 * distance(z.e0, z.e1) / g;
                for (std::size_t j = 0; j < dims_; ++j) {
                    double phi0 = 0.0, phi1 = 0.0;
                    for (std::size_t m = 0; m < 3; ++m) {
                        phi0 += z.w0[m] * v[m * dims_ + j];
                        phi1 += z.w1[m] * v[m * dims_ + j];
                    }
                    e.jacobian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += weight * (phi0 + phi1);
                }
            }
            e.defect(static_cast<Eigen::Index>(i)) = positive / fr_.piece_area[i] - 0.5;
            e.jacobian.row(static_cast<Eigen::Index>(i)) /= fr_.piece_area[i];
        }
        return e;
    }

private:
    const Fragments& fr_;
    std::size_t dims_;
    std::vector<std::vector<double>> values_;
};

void require_neumann_basis(const EigenResult& eigen, std::size_t l) {
    if (eigen.spectrum.bc != BoundaryCondition::Neumann) throw std::invalid_argument("bisection needs Neumann eigenfunctions");
    if (eigen.vectors.size() < l + 1) throw std::invalid_argument("bisection needs eigenfunctions 1..l");
}

} // namespace

double gram_determinant(const EigenResult& eigen, std::size_t l) {
    require_neumann_basis(eigen, l);
    const Mesh& mesh = *eigen.mesh;
    const auto dim = static_cast<Eigen::Index>(l + 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
    const std::vector<double> ones(mesh.vertices.size(), 1.0);
    auto basis = [&](Eigen::Index a) -> const std::vector<double>& {
        return a == 0 ? ones : eigen.vectors[static_cast<std::size_t>(a)];
    };
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Triangle& tri = mesh.triangles[t];
        const double w = mesh.triangle_area(t) / 12.0;
        for (Eigen::Index a = 0; a < dim; ++a)
            for (Eigen::Index b = a; b < dim; ++b) {
                const auto& u = basis(a);
                const auto& v = basis(b);
                double su = 0.0, sv = 0.0, suv = 0.0;
                for (int vi : tri) {
                    const auto q = static_cast<std::size_t>(vi);
                    su += u[q];
                    sv += v[q];
                    suv += u[q] * v[q];
                }
                g(a, b) += w * (suv + su * sv);
            }
    }
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < a; ++b) g(a, b) = g(b, a);
    const Eigen::VectorXd s = g.diagonal().cwiseSqrt().cwiseInverse();
    return (s.asDiagonal() * g * s.asDiagonal()).determinant();
}

P1Field combination(const EigenResult& eigen, const std::vector<double>& coefficients) {
    if (coefficients.empty()) throw std::invalid_argument("combination: no coefficients");
    require_neumann_basis(eigen, coefficients.size() - 1);
    std::vector<double> v(eigen.mesh->vertices.size(), coefficients[0]);
    for (std::size_t j = 1; j < coefficients.size(); ++j)
        for (std::size_t q = 0; q < v.size(); ++q) v[q] += coefficients[j] * eigen.vectors[j][q];
    return P1Field(eigen.mesh, std::move(v));
}

BisectionResult bisect_combination(const EigenResult& eigen, const PartitionPieces& pieces, std::uint64_t seed,
                                   const BisectOptions& options) {
    const std::size_t l = pieces.pieces.size();
    require_neumann_basis(eigen, l);
    if (gram_determinant(eigen, l) <= 1e-10)
        throw std::invalid_argument("bisect_combination: eigenfunctions are linearly dependent");
    const Mesh& mesh = *eigen.mesh;
    std::vector<std::vector<double>> basis{std::vector<double>(mesh.vertices.size(), 1.0)};
    for (std::size_t j = 1; j <= l; ++j) basis.push_back(eigen.vectors[j]);
    const Fragments fr = fragment(mesh, pieces);
    const BisectionProblem problem(mesh, fr, basis);
    const auto dim = static_cast<Eigen::Index>(l + 1);

    BisectionResult best;
    best.max_defect = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < options.restarts; ++restart) {
        CounterRng rng(seed, 0x62697365ull + static_cast<std::uint64_t>(restart));
        Eigen::VectorXd c(dim);
        c(0) = 0.0; // eigenfunctions have mean zero, so f changes sign on the domain
        for (Eigen::Index j = 1; j < dim; ++j) c(j) = rng.normal();
        c.normalize();
        Evaluation e = problem.evaluate(c, true);
        double mu = 1e-3 * std::max(1e-12, (e.jacobian * e.jacobian.transpose()).diagonal().maxCoeff());
        for (int it = 0; it < options.max_iterations && e.defect.cwiseAbs().maxCoeff() > options.tol; ++it) {
            bool improved = false;
            for (int tries = 0; tries < 12 && !improved; ++tries) {
                const Eigen::MatrixXd jjt = e.jacobian * e.jacobian.transpose() +
                                            mu * Eigen::MatrixXd::Identity(e.jacobian.rows(), e.jacobian.rows());
                Eigen::VectorXd step = -e.jacobian.transpose() * jjt.ldlt().solve(e.defect);
                step -= step.dot(c) * c;
                Eigen::VectorXd trial = (c + step).normalized();
                Evaluation te = problem.evaluate(trial, true);
                if (te.defect.squaredNorm() < e.defect.squaredNorm()) {
                    c = trial;
                    e = std::move(te);
                    mu = std::max(mu / 3.0, 1e-15);
                    improved = true;
                } else {
                    mu *= 4.0;
                }
            }
            if (!improved) break;
        }
        const double md = e.defect.cwiseAbs().maxCoeff();
        if (md < best.max_defect) {
            best.max_defect = md;
            best.coefficients.assign(c.data(), c.data() + c.size());
            best.defects.clear();
            for (Eigen::Index i = 0; i < e.defect.size(); ++i) best.defects.push_back(std::abs(e.defect(i)));
        }
        best.restarts_used = restart + 1;
        if (md <= options.tol) break;
    }
    best.converged = best.max_defect <= options.tol;
    return best;
}

std::vector<double> bisection_defects(const P1Field& field, const PartitionPieces& pieces) {
    const Fragments fr = fragment(*field.mesh, pieces);
    const BisectionProblem problem(*field.mesh, fr, {field.values});
    const Evaluation e = problem.evaluate(Eigen::VectorXd::Ones(1), false);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < e.defect.size(); ++i) out.push_back(std::abs(e.defect(i)));
    return out;
}

ChainReport rayleigh_chain_verify(const P1Field& field, const PartitionPieces& pieces,
                                  const PartitionCertificate& certificate, double tol) {
    ChainReport r;
    const auto defects = bisection_defects(field, pieces);
    r.max_defect = *std::max_element(defects.begin(), defects.end());
    if (r.max_defect > tol) throw std::invalid_argument("rayleigh_chain_verify: field does not bisect every piece");
    const double m = certificate.multiplicity;
    const double factor = 4.0 * m * m / (certificate.h_min_lower * certificate.h_min_lower);
    auto side = [&](const P1Field& f) {
        const PositivePartIntegrals pp = positive_part_integrals(f);
        ChainSide s{pp.square, factor * pp.gradient_l2sq, false};
        s.pass = s.lhs <= s.rhs * (1.0 + 1e-9);
        return s;
    };
    r.plus = side(field);
    r.minus = side(-field);
    r.pass = r.plus.pass && r.minus.pass;
    return r;
}

// --- proof pipelines ------------------------------------------------------------

namespace {

struct NetChoice {
    SiteSet net;
    double c = 0.0;
    double R = 0.0;
    int doublings = 0;
    bool ok = false;
};

// Doubles c until the 4R-net has at most k - 1 sites.
NetChoice choose_net(const ConvexBody& body, std::size_t k, double lambda, double n_factor, const CertConfig& cfg) {
    NetChoice ch;
    ch.c = cfg.c_sep;
    for (;;) {
        ch.R = ch.c * n_factor * std::log(static_cast<double>(k)) / std::sqrt(lambda);
        ch.net = net_of(body, 4.0 * ch.R, cfg.seed);
        ch.ok = ch.net.points.size() <= k - 1;
        if (ch.ok || ch.doublings >= cfg.max_doublings) return ch;
        ch.c *= 2.0;
        ++ch.doublings;
    }
}

void finish_pipeline(PipelineReport& rep, const ConvexBody& target, const PartitionPieces& pieces, double bound_mult,
                     const CertConfig& cfg) {
    rep.piece_diameters = pieces.diameters;
    rep.max_piece_diameter = *std::max_element(pieces.diameters.begin(), pieces.diameters.end());
    rep.diameter_bound = bound_mult * rep.R;
    rep.diameters_ok = rep.max_piece_diameter <= rep.diameter_bound * (1.0 + 1e-9);
    rep.theorem_bound = 1.0 / (4.0 * rep.diameter_bound * rep.diameter_bound);
    auto cert = std::make_shared<PartitionCertificate>(certify_lower(target, pieces));
    cert->seeds = {cfg.seed};
    rep.certificate = cert;
    const std::size_t need = std::max(rep.k - 1, cert->l);
    const auto eig = neumann(cfg, target, need);
    rep.fem_lambda_target = eig->spectrum.values[rep.k - 1];
    rep.fem_lambda_l = eig->spectrum.values[cert->l];
    rep.fem_error = eig->spectrum.error_estimate;
    const double allowance = 1.0 + cfg.slack + rep.fem_error;
    rep.sound = cert->lambda_lower <= rep.fem_lambda_l * allowance &&
                (!rep.net_ok || rep.theorem_bound <= rep.fem_lambda_target * allowance);
}

void check_nested(const ConvexBody& inner, const ConvexBody& outer, std::size_t k, std::size_t min_k) {
    if (k < min_k) throw std::invalid_argument("pipeline: k too small");
    if (inner.dimension() != 2 || outer.dimension() != 2) throw std::invalid_argument("pipeline: planar bodies only");
    if (!contains(outer, inner)) throw std::invalid_argument("pipeline: inner body is not inside outer");
}

} // namespace

PipelineReport mthm1_run(const ConvexBody& inner, const ConvexBody& outer, std::size_t k, const CertConfig& config) {
    config.validate();
    check_nested(inner, outer, k, 2);
    PipelineReport rep;
    rep.k = k;
    rep.n = outer.dimension();
    const double nd = static_cast<double>(rep.n);
    rep.lambda_k_source = neumann(config, outer, k)->spectrum.values[k];
    const NetChoice ch = choose_net(outer, k, rep.lambda_k_source, nd, config);
    rep.c_sep_final = ch.c;
    rep.doublings = ch.doublings;
    rep.net_ok = ch.ok;
    rep.R = ch.R;
    rep.sites = ch.net.points.size();

    const Polygon target = as_polygon(inner);
    PartitionPieces pieces(target);
    for (const Polygon& cell : voronoi_partition(outer, ch.net.points).pieces)
        if (auto part = intersect(cell, target)) pieces.add(*part);
    finish_pipeline(rep, inner, pieces, 8.0, config);
    const double lk = std::log(static_cast<double>(k));
    rep.empirical_constant = rep.lambda_k_source / (nd * nd * lk * lk * rep.fem_lambda_target);
    return rep;
}

LemmaReport lem_mthm2_run(const ConvexBody& inner, const ConvexBody& outer, std::size_t k, const CertConfig& config) {
    config.validate();
    check_nested(inner, outer, k, 2);
    const double nd = static_cast<double>(outer.dimension());
    if (volume(inner) < (1.0 - std::pow(static_cast<double>(k), -nd)) * volume(outer) * (1.0 - 1e-12))
        throw std::invalid_argument("lem_mthm2_run: inner body is too small");
    LemmaReport rep;
    rep.k = k;
    rep.n = outer.dimension();
    rep.lambda_k_source = neumann(config, inner, k)->spectrum.values[k];
    const NetChoice ch = choose_net(inner, k, rep.lambda_k_source, nd * nd, config);
    rep.c_sep_final = ch.c;
    rep.doublings = ch.doublings;
    rep.net_ok = ch.ok;
    rep.R = ch.R;
    rep.sites = ch.net.points.size();

    // Distance to a convex set is convex, so its maximum over the outer
    // polygon sits at a vertex.
    const Polygon in = as_polygon(inner), out = as_polygon(outer);
    for (const Point2& v : out.vertices()) rep.hausdorff = std::max(rep.hausdorff, distance(in, v));
    const auto ov = out.vertices();
    double perimeter = 0.0;
    for (std::size_t i = 0; i < ov.size(); ++i) perimeter += distance(ov[i], ov[(i + 1) % ov.size()]);
    std::size_t edge = 0;
    double start = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const double at = perimeter * s / 1000.0;
        double len = distance(ov[edge], ov[(edge + 1) % ov.size()]);
        while (at > start + len && edge + 1 < ov.size()) {
            start += len;
            ++edge;
            len = distance(ov[edge], ov[(edge + 1) % ov.size()]);
        }
        const double t = std::clamp((at - start) / len, 0.0, 1.0);
        const Point2 p = ov[edge] + t * (ov[(edge + 1) % ov.size()] - ov[edge]);
        rep.hausdorff_sampled = std::max(rep.hausdorff_sampled, distance(in, p));
    }
    rep.claim_holds = rep.hausdorff <= rep.R;

    finish_pipeline(rep, outer, voronoi_partition(outer, ch.net.points), 10.0, config);
    const double lk = std::log(static_cast<double>(k));
    rep.empirical_constant = rep.lambda_k_source / (std::pow(nd * nd * lk, 2.0) * rep.fem_lambda_target);
    return rep;
}

double mthm2_scale(double v, std::size_t n, std::size_t k) {
    if (!(v > 0.0)) throw std::invalid_argument("mthm2_scale: v must be positive");
    if (v >= 1.0) return 2.0;
    const double t = static_cast<double>(n) * std::log(static_cast<double>(k)) / -std::log1p(-v);
    return 2.0 * std::max(t, 1.0);
}

Mthm2Report mthm2_run(const ConvexBody& inner, const ConvexBody& outer, std::size_t k, const CertConfig& config) {
    config.validate();
    check_nested(inner, outer, k, 3);
    Mthm2Report rep;
    const auto n = outer.dimension();
    const double nd = static_cast<double>(n);
    rep.v = volume(inner) / volume(outer);
    rep.symmetric = is_centrally_symmetric(inner);
    Polygon in = as_polygon(inner), out = as_polygon(outer);
    if (rep.symmetric) {
        rep.v_effective = rep.v;
    } else {
        const SteinCenter sc = stein_center(in);
        rep.center = sc.center;
        rep.overlap_ratio = sc.overlap_ratio;
        in = translate(in, -1.0 * sc.center);
        out = translate(out, -1.0 * sc.center);
        rep.v_effective = std::pow(2.0, -nd) * rep.v;
    }
    rep.r = mthm2_scale(rep.v_effective, n, k);
    const Polygon grown = scale(in, rep.r);
    const Polygon tilde = *intersect(grown, out);
    rep.outside_measure = std::max(0.0, 1.0 - tilde.area() / out.area());
    rep.measure_ok = rep.outside_measure < std::pow(static_cast<double>(k), -nd);

    const auto eig_inner = neumann(config, in, k);
    rep.lambda_k_inner = eig_inner->spectrum.values[k];
    rep.scaling_ratio = rep.r * rep.r * neumann(config, grown, k)->spectrum.values[k] / rep.lambda_k_inner;
    const auto eig_outer = neumann(config, out, k - 2);
    rep.lambda_k2_outer = eig_outer->spectrum.values[k - 2];

    rep.step1 = mthm1_run(tilde, grown, k, config);
    if (rep.measure_ok) rep.step2 = lem_mthm2_run(tilde, out, k - 1, config);

    const double lk = std::log(static_cast<double>(k));
    const double first = rep.v_effective >= 1.0
                             ? std::numeric_limits<double>::infinity()
                             : std::pow(std::log1p(-rep.v_effective), 2.0) / (std::pow(nd, 8.0) * std::pow(lk, 6.0));
    rep.envelope = std::min(first, 1.0 / (std::pow(nd, 6.0) * std::pow(lk, 4.0)));
    rep.empirical_constant = rep.envelope * rep.lambda_k_inner / rep.lambda_k2_outer;
    rep.sound = rep.step1.sound && (!rep.measure_ok || rep.step2.sound);
    return rep;
}

} // namespace sandwich
