#include "sandwich/sparse.hpp"

#include "sandwich/rng.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sandwich {

namespace {
inline double row_dot(const SparseSym& a, std::size_t i, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p)
        s += a.values[p] * x[static_cast<std::size_t>(a.columns[p])];
    return s;
}

void check_sizes(const SparseSym& a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.dimension || y.size() != a.dimension) throw std::invalid_argument("multiply: size mismatch");
}
} // namespace

void SparseSym::multiply(std::span<const double> x, std::span<double> y) const {
    check_sizes(*this, x, y);
    const auto n = static_cast<std::ptrdiff_t>(dimension);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = row_dot(*this, static_cast<std::size_t>(i), x);
}

void SparseSym::multiply_serial(std::span<const double> x, std::span<double> y) const {
    check_sizes(*this, x, y);
    for (std::size_t i = 0; i < dimension; ++i) y[i] = row_dot(*this, i, x);
}

double SparseSym::entry(std::size_t i, std::size_t j) const {
    const auto first = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[i]);
    const auto last = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<int>(j));
    if (it == last || *it != static_cast<int>(j)) return 0.0;
    return values[static_cast<std::size_t>(it - columns.begin())];
}

std::vector<double> SparseSym::diagonal() const {
    std::vector<double> d(dimension);
    for (std::size_t i = 0; i < dimension; ++i) d[i] = entry(i, i);
    return d;
}

double SparseSym::sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

bool SparseSym::is_symmetric(std::size_t samples, std::uint64_t seed, double rel_tol) const {
    if (values.empty()) return true;
    CounterRng rng(seed, 0x73796d);
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t p = rng.next() % values.size();
        const auto row = static_cast<std::size_t>(
            std::upper_bound(row_offsets.begin(), row_offsets.end(), p) - row_offsets.begin() - 1);
        const auto col = static_cast<std::size_t>(columns[p]);
        if (std::abs(values[p] - entry(col, row)) > rel_tol * scale) return false;
    }
    return true;
}

bool SparseSym::is_positive_definite() const {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(values.size());
    for (std::size_t i = 0; i < dimension; ++i)
        for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p)
            triplets.emplace_back(static_cast<int>(i), columns[p], values[p]);
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(dimension));
    a.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(a);
    if (llt.info() != Eigen::Success) return false;
    const Eigen::VectorXd d = Eigen::SparseMatrix<double>(llt.matrixL()).diagonal();
    return (d.array() > 0.0).all();
}

SparseSym SparseSym::principal_submatrix(std::span<const int> keep) const {
    std::vector<int> new_index(dimension, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (i > 0 && keep[i] <= keep[i - 1]) throw std::invalid_argument("principal_submatrix: indices must ascend");
        new_index[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    }
    SparseSym out;
    out.dimension = keep.size();
    out.row_offsets.assign(1, 0);
    for (int old : keep) {
        const auto r = static_cast<std::size_t>(old);
        for (std::size_t p = row_offsets[r]; p < row_offsets[r + 1]; ++p) {
            const int c = new_index[static_cast<std::size_t>(columns[p])];
            if (c < 0) continue;
            out.columns.push_back(c);
            out.values.push_back(values[p]);
        }
        out.row_offsets.push_back(out.columns.size());
    }
    return out;
}

} // namespace sandwich
