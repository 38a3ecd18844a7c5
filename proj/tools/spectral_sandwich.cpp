// spectral-sandwich: command-line front end for spectra, certificates,
// verification suites and experiments.

#include "sandwich/analytic.hpp"
#include "sandwich/certifier.hpp"
#include "sandwich/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

using namespace sandwich;
namespace hs = sandwich::harness;
using hs::json;

namespace {

struct Common {
    std::string builtin;
    std::string domain_file;
    std::string bc = "neumann";
    std::size_t k = 3;
    double h = -1.0; // unset
    std::uint64_t seed = 1;
    double c_sep = 1.0;
    double slack = 0.05;
    std::string out;
    std::string format = "json";
    bool no_timestamp = false;
};

ConvexBody load_domain(const Common& c, std::string& id) {
    if (!c.builtin.empty() && !c.domain_file.empty())
        throw std::invalid_argument("give either --builtin or --domain-file, not both");
    if (!c.builtin.empty()) {
        id = c.builtin;
        return hs::parse_builtin(c.builtin);
    }
    if (!c.domain_file.empty()) {
        id = c.domain_file;
        return read_polygon_file(c.domain_file);
    }
    throw std::invalid_argument("a domain is required (--builtin or --domain-file)");
}

std::string timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ts.str();
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit(const Common& c, json j) {
    if (!c.no_timestamp) j["timestamp"] = timestamp_now();
    Sink sink(c.out);
    sink.stream() << j.dump() << '\n';
}

CertConfig cert_config(const Common& c) {
    CertConfig cfg;
    cfg.c_sep = c.c_sep;
    cfg.slack = c.slack;
    if (c.h > 0) cfg.mesh_h = c.h;
    cfg.seed = c.seed;
    cfg.cache = std::make_shared<FemCache>();
    cfg.validate();
    return cfg;
}

void add_domain_flags(CLI::App* app, Common& c) {
    app->add_option("--builtin", c.builtin, "square, box:LxW, disk:r, needle:L:eps, lp2d:p");
    app->add_option("--domain-file", c.domain_file, "polygon file: vertex count, then x y per vertex");
}

void add_output_flags(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "seed for every random choice");
    app->add_option("--out", c.out, "output file (default stdout)");
    app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_flag("--no-timestamp", c.no_timestamp, "omit timestamps and wall times");
}

void add_cert_flags(CLI::App* app, Common& c) {
    app->add_option("--c-sep", c.c_sep, "stand-in for the absolute separation constant");
    app->add_option("--slack", c.slack, "relative slack of FEM comparisons");
    app->add_option("--h", c.h, "relative mesh size factor (default 0.1)");
}

int cmd_spectrum(const Common& c) {
    std::string id;
    const ConvexBody body = load_domain(c, id);
    const double h = c.h > 0 ? c.h : pipeline_mesh_size(body, 0.1);
    const EigenResult e = spectrum(body, parse_boundary_condition(c.bc), c.k, h, c.seed);
    json j = hs::spectrum_json(e);
    j["domain"] = id;
    j["k"] = c.k;
    j["requested_h"] = h;
    emit(c, j);
    return 0;
}

int cmd_certify(const Common& c) {
    std::string id;
    const ConvexBody body = load_domain(c, id);
    const CertConfig cfg = cert_config(c);
    const PipelineReport rep = mthm1_run(body, body, c.k, cfg);
    PartitionCertificate cert = *rep.certificate;
    cert.domain_id = id;
    json j = hs::certificate_json(cert, rep.fem_lambda_l, cfg, rep.c_sep_final);
    j["k"] = c.k;
    j["R"] = rep.R;
    j["net_ok"] = rep.net_ok;
    j["doublings"] = rep.doublings;
    j["fem_error"] = rep.fem_error;
    j["sound"] = rep.sound;
    emit(c, j);
    return rep.sound ? 0 : 3;
}

void write_report(std::ostream& os, const Common& c, const hs::ExperimentReport& r) {
    if (c.format == "csv") {
        os << "# " << r.suite << '\n' << hs::to_csv(r);
    } else {
        os << r.to_json(!c.no_timestamp).dump() << '\n';
    }
}

int cmd_verify(const Common& c, const std::vector<std::string>& suites, bool all, const std::string& write_baseline) {
    std::vector<std::string> names = all ? hs::suite_names() : suites;
    if (names.empty()) throw std::invalid_argument("give --suite NAME or --all");
    hs::RunOptions opt;
    opt.seed = c.seed;
    opt.timestamp = !c.no_timestamp;
    opt.cert = cert_config(c);
    Sink sink(c.out);
    std::vector<hs::ExperimentReport> reports;
    bool ok = true;
    for (const auto& name : names) {
        reports.push_back(hs::run_suite(name, opt));
        write_report(sink.stream(), c, reports.back());
        sink.stream().flush();
        if (reports.back().asserted && !reports.back().pass) ok = false;
    }
    const hs::Baseline now = hs::tracked_metrics(reports);
    if (!write_baseline.empty()) hs::save_baseline(write_baseline, now);
    if (const char* path = std::getenv("SANDWICH_BASELINE"); path && *path && c.format == "json") {
        json drifts = json::array();
        for (const auto& d : hs::compare_baseline(hs::load_baseline(path), now)) {
            if (!now.count(d.key)) continue; // suite not part of this run
            drifts.push_back({{"key", d.key}, {"baseline", d.baseline}, {"value", d.value}, {"within", d.within}});
        }
        sink.stream() << json{{"baseline", path}, {"band", 0.10}, {"drifts", drifts}}.dump() << '\n';
    }
    return ok ? 0 : 1;
}

int cmd_experiment(const Common& c, const std::string& name) {
    hs::RunOptions opt;
    opt.seed = c.seed;
    opt.timestamp = !c.no_timestamp;
    opt.cert = cert_config(c);
    Sink sink(c.out);
    write_report(sink.stream(), c, hs::run_experiment(name, opt));
    return 0;
}

int cmd_net(const Common& c, double r) {
    std::string id;
    const ConvexBody body = load_domain(c, id);
    const SiteSet net = greedy_net(body, r, c.seed);
    json sites = json::array();
    for (const Point2& p : net.points) sites.push_back({p.x, p.y});
    emit(c, {{"domain", id}, {"r", r}, {"seed", c.seed}, {"sites", sites}, {"separation", net.separation},
             {"cover_radius", net.cover_radius}, {"samples", net.sample_count}});
    return 0;
}

int cmd_partition(const Common& c) {
    std::string id;
    const ConvexBody body = load_domain(c, id);
    const PartitionPieces parts = net_partition(body, c.k, c.seed);
    json pieces = json::array();
    for (const Polygon& p : parts.pieces) {
        json verts = json::array();
        for (const Point2& v : p.vertices()) verts.push_back({v.x, v.y});
        pieces.push_back({{"vertices", verts}, {"area", p.area()}, {"diameter", diameter(p)}});
    }
    emit(c, {{"domain", id}, {"l", c.k}, {"seed", c.seed}, {"pieces", pieces}, {"is_partition", is_partition(parts)}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neumann eigenvalues of nested convex domains: spectra, certificates and audits"};
    app.set_help_flag("--help", "Print this help message and exit"); // --h is the mesh size
    app.require_subcommand(1);
    Common c;

    auto* spec = app.add_subcommand("spectrum", "FEM eigenvalues of a domain");
    add_domain_flags(spec, c);
    add_output_flags(spec, c);
    spec->add_option("--bc", c.bc, "neumann or dirichlet");
    spec->add_option("-k", c.k, "number of eigenvalues (Neumann adds lambda_0 = 0)");
    spec->add_option("--h", c.h, "absolute mesh size (default 0.1 min(diam, 4 inradius))");

    auto* cert = app.add_subcommand("certify", "partition certificate from the net pipeline");
    add_domain_flags(cert, c);
    add_output_flags(cert, c);
    add_cert_flags(cert, c);
    cert->add_option("-k", c.k, "eigenvalue index k (certifies lambda_{k-1})");

    std::vector<std::string> suites;
    bool all = false;
    std::string write_baseline;
    auto* ver = app.add_subcommand("verify", "run verification suites");
    add_output_flags(ver, c);
    add_cert_flags(ver, c);
    ver->add_option("--suite", suites, "suite name (repeatable)")->check(CLI::IsMember(hs::suite_names()));
    ver->add_flag("--all", all, "run every suite");
    ver->add_option("--write-baseline", write_baseline, "store tracked constants to this file");

    std::string experiment;
    auto* exp = app.add_subcommand("experiment", "parameter sweeps (JSON or CSV)");
    add_output_flags(exp, c);
    add_cert_flags(exp, c);
    exp->add_option("--name", experiment, "needle, lp2d or nested-scan")
        ->required()
        ->check(CLI::IsMember(hs::experiment_names()));

    double radius = 0.25;
    auto* net = app.add_subcommand("net", "greedy r-net of a domain");
    add_domain_flags(net, c);
    add_output_flags(net, c);
    net->add_option("--r", radius, "net radius")->check(CLI::PositiveNumber);

    auto* part = app.add_subcommand("partition", "Voronoi partition from l net sites");
    add_domain_flags(part, c);
    add_output_flags(part, c);
    part->add_option("-k", c.k, "number of pieces");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*spec) return cmd_spectrum(c);
        if (*cert) return cmd_certify(c);
        if (*ver) return cmd_verify(c, suites, all, write_baseline);
        if (*exp) return cmd_experiment(c, experiment);
        if (*net) return cmd_net(c, radius);
        if (*part) return cmd_partition(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
