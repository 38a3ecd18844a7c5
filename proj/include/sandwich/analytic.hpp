#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sandwich {

enum class BoundaryCondition { Neumann, Dirichlet };
enum class SpectrumSource { Analytic, Fem };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& text);

/// Ascending Laplacian eigenvalues (units 1/length^2).
///
/// Indexing follows the usual convention for both conditions: values[0] is
/// the lowest eigenvalue, so for Neumann values[0] == 0 and values[k] is the
/// k-th nonzero-indexed eigenvalue.
struct Spectrum {
    BoundaryCondition bc = BoundaryCondition::Neumann;
    std::vector<double> values;
    SpectrumSource source = SpectrumSource::Analytic;
    double error_estimate = 0.0; // relative; 0 for closed forms
};

/// Smallest `count` eigenvalues of the box with the given side lengths,
/// pi^2 * sum (k_i / L_i)^2 over the integer lattice (k_i >= 0 for Neumann,
/// k_i >= 1 for Dirichlet), with multiplicity.
Spectrum box_spectrum(std::span<const double> lengths, BoundaryCondition bc, std::size_t count);

/// Smallest `count` (<= 30) eigenvalues of the disk, from tabulated Bessel zeros.
Spectrum disk_spectrum(double radius, BoundaryCondition bc, std::size_t count);

/// First Neumann eigenvalue pi^2 / n of a vanishing-width box whose length is
/// the diagonal sqrt(n) of the unit n-cube.
double needle_prediction(std::size_t dimension);

inline constexpr std::size_t kLatticeCap = 1'000'000;
inline constexpr std::size_t kDiskTableSize = 30;

} // namespace sandwich
