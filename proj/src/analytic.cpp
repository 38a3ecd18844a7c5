#include "sandwich/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sandwich {

namespace {
#include "bessel_zeros.inc"

// First zeros of order 11, the lowest values missing from the table.
constexpr double kFirstJZeroOrder11 = 15.589847884455486;
constexpr double kFirstJPrimeZeroOrder11 = 12.826491228033467;

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
} // namespace

std::string to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet";
}

BoundaryCondition parse_boundary_condition(const std::string& text) {
    if (text == "neumann" || text == "N") return BoundaryCondition::Neumann;
    if (text == "dirichlet" || text == "D") return BoundaryCondition::Dirichlet;
    throw std::invalid_argument("unknown boundary condition: " + text);
}

Spectrum box_spectrum(std::span<const double> lengths, BoundaryCondition bc, std::size_t count) {
    if (lengths.empty()) throw std::invalid_argument("box needs at least one side");
    if (count == 0) throw std::invalid_argument("count must be at least 1");
    for (double l : lengths)
        if (!(l > 0.0)) throw std::invalid_argument("box side lengths must be positive");

    const std::size_t dim = lengths.size();
    const std::size_t kmin = bc == BoundaryCondition::Neumann ? 0 : 1;

    // Start just above the lowest possible value and grow until enough lattice
    // points fall under the cap; everything <= cap is enumerated, so
    // multiplicities at the cutoff are exact.
    double cap = 0.0;
    for (double l : lengths) cap += 1.0 / (l * l);
    cap *= kPi2;

    std::vector<double> found;
    for (;;) {
        found.clear();
        const double budget = cap / kPi2;
        std::vector<std::size_t> k(dim, kmin);
        // Depth-first enumeration with partial-sum pruning.
        auto recurse = [&](auto&& self, std::size_t axis, double partial) -> void {
            if (found.size() > kLatticeCap)
                throw std::runtime_error("box spectrum: lattice enumeration cap exceeded");
            if (axis == dim) {
                found.push_back(kPi2 * partial);
                return;
            }
            const double inv = 1.0 / lengths[axis];
            double rest_min = 0.0;
            for (std::size_t a = axis + 1; a < dim; ++a) {
                const double q = static_cast<double>(kmin) / lengths[a];
                rest_min += q * q;
            }
            for (std::size_t ki = kmin;; ++ki) {
                const double q = static_cast<double>(ki) * inv;
                const double next = partial + q * q;
                if (next + rest_min > budget) break;
                self(self, axis + 1, next);
            }
        };
        recurse(recurse, 0, 0.0);
        if (found.size() >= count) break;
        cap *= 2.0;
    }
    std::sort(found.begin(), found.end());
    found.resize(count);
    return Spectrum{bc, std::move(found), SpectrumSource::Analytic, 0.0};
}

Spectrum disk_spectrum(double radius, BoundaryCondition bc, std::size_t count) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    if (count == 0) throw std::invalid_argument("count must be at least 1");
    if (count > kDiskTableSize) throw std::out_of_range("disk spectrum: count beyond table size");

    const auto& table = bc == BoundaryCondition::Neumann ? kBesselJPrimeZeros : kBesselJZeros;
    std::vector<std::pair<double, int>> zeros; // (zero, multiplicity)
    if (bc == BoundaryCondition::Neumann) zeros.emplace_back(0.0, 1);
    for (int m = 0; m < kBesselOrders; ++m)
        for (int s = 0; s < kBesselZerosPerOrder; ++s) zeros.emplace_back(table[m][s], m == 0 ? 1 : 2);
    std::sort(zeros.begin(), zeros.end());

    std::vector<double> values;
    for (const auto& [z, mult] : zeros)
        for (int i = 0; i < mult && values.size() < count; ++i) values.push_back(z);
    const double guard = bc == BoundaryCondition::Neumann ? kFirstJPrimeZeroOrder11 : kFirstJZeroOrder11;
    if (values.back() >= guard) throw std::out_of_range("disk spectrum: count beyond table size");

    for (double& v : values) v = v * v / (radius * radius);
    return Spectrum{bc, std::move(values), SpectrumSource::Analytic, 0.0};
}

double needle_prediction(std::size_t dimension) {
    if (dimension == 0) throw std::invalid_argument("dimension must be at least 1");
    return kPi2 / static_cast<double>(dimension);
}

} // namespace sandwich
