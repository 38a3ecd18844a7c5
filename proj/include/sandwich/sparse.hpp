#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sandwich {

/// Symmetric matrix in compressed sparse row form (both triangles stored,
/// column indices ascending within each row).
struct SparseSym {
    std::size_t dimension = 0;
    std::vector<std::size_t> row_offsets; // size dimension + 1
    std::vector<int> columns;
    std::vector<double> values;

    std::size_t nonzeros() const { return values.size(); }

    /// y = A x. Rows are split across OpenMP threads; each row is summed in
    /// column order, so the result does not depend on the thread count.
    void multiply(std::span<const double> x, std::span<double> y) const;
    /// Single-threaded reference for multiply().
    void multiply_serial(std::span<const double> x, std::span<double> y) const;

    double entry(std::size_t i, std::size_t j) const;
    std::vector<double> diagonal() const;
    double sum() const;

    /// Symmetry checked on a seeded sample of stored entries.
    bool is_symmetric(std::size_t samples, std::uint64_t seed, double rel_tol = 1e-14) const;
    /// Sparse Cholesky succeeds with positive pivots.
    bool is_positive_definite() const;

    /// Principal submatrix on the ascending index list `keep`.
    SparseSym principal_submatrix(std::span<const int> keep) const;
};

} // namespace sandwich
