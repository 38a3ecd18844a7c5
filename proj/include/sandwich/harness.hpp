#pragma once

#include "sandwich/certifier.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sandwich::harness {

using nlohmann::json;

struct NamedDomain {
    std::string id;
    Polygon polygon;
};

struct NestedPair {
    std::string id;
    Polygon inner;
    Polygon outer;
};

/// square, box:LxW, disk:r, needle:L:eps, lp2d:p. Throws std::invalid_argument.
ConvexBody parse_builtin(const std::string& spec);

/// Boundary of the unit l_p ball in the plane, sampled at `vertices` angles.
Polygon lp_ball(double p, int vertices = 128);

/// Convex hull of `count` seeded points in [-1, 1]^2.
Polygon seeded_hull(std::uint64_t seed, int count);

/// Hull of `count` seeded points and their reflections through the origin.
Polygon seeded_symmetric_hull(std::uint64_t seed, int count);

/// Fixed verification corpus: squares, rectangles up to aspect 40, seeded
/// hulls, regular polygons and l_p balls.
const std::vector<NamedDomain>& corpus();

/// Nested pairs built from the corpus by shrinking and by half-plane clipping.
const std::vector<NestedPair>& nested_pairs();

struct RunOptions {
    std::uint64_t seed = 1;
    bool timestamp = true;
    CertConfig cert; // cert.cache is shared by every suite of one run
};

struct ExperimentReport {
    std::string suite;
    json instances = json::array();
    json summary = json::object();
    bool asserted = false; // constant-free suite: failures change the exit code
    bool pass = true;
    double wall_seconds = 0.0;

    json to_json(bool timestamp) const;
};

const std::vector<std::string>& suite_names();
const std::vector<std::string>& experiment_names();

/// Throws std::invalid_argument for an unknown name.
ExperimentReport run_suite(const std::string& name, const RunOptions& options);
ExperimentReport run_experiment(const std::string& name, const RunOptions& options);

/// Instance records flattened to CSV (union of scalar keys, sorted).
std::string to_csv(const ExperimentReport& report);

// Regression tracking of constant-bearing audits ("suite.metric" -> value).
using Baseline = std::map<std::string, double>;

Baseline tracked_metrics(const std::vector<ExperimentReport>& reports);
Baseline load_baseline(const std::string& path);
void save_baseline(const std::string& path, const Baseline& baseline);

struct Drift {
    std::string key;
    double baseline = 0.0;
    double value = 0.0;
    bool within = false;
};

/// One entry per baseline key; a key missing from `now` is out of band.
std::vector<Drift> compare_baseline(const Baseline& baseline, const Baseline& now, double band = 0.10);

json spectrum_json(const EigenResult& eigen);
json certificate_json(const PartitionCertificate& cert, double fem_lambda, const CertConfig& config,
                      double c_sep_final);

} // namespace sandwich::harness
