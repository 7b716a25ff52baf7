// expanderlab: command-line front end for the self-expander laboratory.
//
// One subcommand per experiment; every run writes its artifacts (CSV/JSON
// tables, SVG plots) plus a `<stem>_manifest.json` listing the files, the
// effective configuration, and pass/fail for each certified property.
// Exit codes: 0 success, 1 numerical failure, 2 usage error.

#include "expanderlab/density.hpp"
#include "expanderlab/disk_solver.hpp"
#include "expanderlab/errors.hpp"
#include "expanderlab/expander_ode.hpp"
#include "expanderlab/flow.hpp"
#include "expanderlab/io.hpp"
#include "expanderlab/latitude_band.hpp"
#include "expanderlab/radial_profile.hpp"
#include "expanderlab/spectral.hpp"
#include "expanderlab/translator.hpp"
#include "expanderlab/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace el = expanderlab;
using nlohmann::json;

namespace {

std::string slug(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "minf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s;
    for (const char* c = buf; *c; ++c) {
        if (*c == '.')
            s += 'p';
        else if (*c == '-')
            s += 'm';
        else if (*c != '+')
            s += *c;
    }
    return s;
}

std::string slug(int v) { return slug(static_cast<double>(v)); }

// Collects artifacts and certified-property results for one run, then
// writes the manifest. `formats` filters which table/plot variants are
// materialized; the manifest itself is always written.
class Emitter {
public:
    Emitter(std::filesystem::path dir, std::vector<std::string> formats)
        : dir_(std::move(dir)), formats_(formats.begin(), formats.end()) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_))
            throw std::invalid_argument("output directory is not writable: " + dir_.string());
    }

    bool wants(const std::string& format) const { return formats_.count(format) > 0; }

    void table(const std::string& stem, const el::io::CsvTable& t) {
        if (wants("csv")) {
            el::io::write_csv(dir_ / (stem + ".csv"), t);
            files_.push_back(stem + ".csv");
        }
        if (wants("json")) {
            el::io::write_json_rows(dir_ / (stem + ".json"), t);
            files_.push_back(stem + ".json");
        }
    }

    void plot(const std::string& stem, const el::io::LinePlot& p) {
        if (!wants("svg")) return;
        el::io::write_svg(dir_ / (stem + ".svg"), p);
        files_.push_back(stem + ".svg");
    }

    void contour(const std::string& stem, const el::graph::GraphField& field) {
        if (!wants("svg")) return;
        el::io::write_graph_field_contour_svg(dir_ / (stem + ".svg"), field);
        files_.push_back(stem + ".svg");
    }

    void check(const std::string& name, bool passed, const std::string& detail) {
        checks_.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
        all_passed_ = all_passed_ && passed;
        std::printf("[%s] %s: %s\n", passed ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    }

    // Writes `<stem>_manifest.json`; returns the process exit code.
    int finish(const std::string& stem, const std::string& command, const json& parameters) {
        json manifest;
        manifest["command"] = command;
        manifest["config"] = {{"command", command},
                              {"parameters", parameters},
                              {"output_dir", dir_.string()},
                              {"formats", json(std::vector<std::string>(formats_.begin(),
                                                                        formats_.end()))}};
        manifest["files"] = files_;
        manifest["checks"] = checks_;
        manifest["all_passed"] = all_passed_;
        const auto path = dir_ / (stem + "_manifest.json");
        std::ofstream out(path, std::ios::binary);
        out << manifest.dump(2) << "\n";
        if (!out) throw std::runtime_error("failed to write " + path.string());
        std::printf("manifest: %s\n", path.string().c_str());
        return all_passed_ ? 0 : 1;
    }

private:
    std::filesystem::path dir_;
    std::set<std::string> formats_;
    std::vector<std::string> files_;
    json checks_ = json::array();
    bool all_passed_ = true;
};

std::string num(double v) { return el::io::format_real_brief(v); }

double interior_residual_sup(const el::ode::RadialProfile& p) {
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
        sup = std::max(sup, std::abs(el::ode::radial_expander_residual(p, i)));
    return sup;
}

// Random 1-homogeneous boundary data |x| g(theta) with a low-order angular
// profile g > 0; used by `dirichlet --boundary fourier`.
struct AngularProfile {
    std::vector<double> coefficients;

    static AngularProfile random(std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_real_distribution<double> sym(-1.0, 1.0);
        AngularProfile g;
        g.coefficients = {0.0, 0.0, 0.0, 0.0};
        double spread = 0.0;
        for (std::size_t k = 1; k <= 3; ++k) {
            g.coefficients[k] = 0.3 * sym(rng) / static_cast<double>(k);
            spread += std::abs(g.coefficients[k]);
        }
        g.coefficients[0] = spread + 0.3 + 0.7 * unit(rng);
        return g;
    }

    double value(double theta) const {
        double g = coefficients[0];
        for (std::size_t k = 1; k < coefficients.size(); ++k)
            g += coefficients[k] * std::cos(k * theta + static_cast<double>(k));
        return g;
    }
    double slope(double theta) const {
        double gp = 0.0;
        for (std::size_t k = 1; k < coefficients.size(); ++k)
            gp -= coefficients[k] * static_cast<double>(k) *
                  std::sin(k * theta + static_cast<double>(k));
        return gp;
    }
    double lipschitz() const {
        double sup = 0.0;
        for (int s = 0; s < 4096; ++s) {
            const double theta = 2.0 * std::numbers::pi * s / 4096.0;
            sup = std::max(sup, std::hypot(value(theta), slope(theta)));
        }
        return sup * (1.0 + 1e-9);
    }
    el::graph::BoundaryData boundary() const {
        const AngularProfile g = *this;
        return [g](double x, double y) { return std::hypot(x, y) * g.value(std::atan2(y, x)); };
    }
};

int env_thread_cap() {
    const char* raw = std::getenv("EXPANDERLAB_THREADS");
    if (raw == nullptr || *raw == '\0') {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
    const std::string text(raw);
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || value <= 0)
        throw std::invalid_argument("EXPANDERLAB_THREADS must be a positive integer, got \"" +
                                    text + "\"");
    return value;
}

// ---------------------------------------------------------------- commands

struct CommonOpts {
    std::string output_dir = ".";
    std::string formats_raw = "csv,svg";

    std::vector<std::string> formats() const {
        std::vector<std::string> parsed;
        std::string token;
        for (char ch : formats_raw + ",") {
            if (ch != ',') {
                token += ch;
                continue;
            }
            if (token.empty()) continue;
            if (token != "csv" && token != "json" && token != "svg")
                throw std::invalid_argument("unknown format \"" + token +
                                            "\" (expected csv, json, svg)");
            parsed.push_back(token);
            token.clear();
        }
        if (parsed.empty()) throw std::invalid_argument("--formats must not be empty");
        return parsed;
    }
};

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::string token;
    for (char ch : text + ",") {
        if (ch != ',') {
            token += ch;
            continue;
        }
        if (token.empty()) continue;
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size())
            throw std::invalid_argument(flag + ": \"" + token + "\" is not a number");
        values.push_back(value);
        token.clear();
    }
    return values;
}

struct RotationalOpts {
    int n = 3;
    double kappa = 1.0;
    double R = 20.0;
    std::size_t resolution = 4001;
    double tolerance = 1e-9;
};

int run_solve_rotational(const RotationalOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    el::ode::RadialSolveOptions options;
    options.residual_tolerance = o.tolerance;
    const auto p = el::ode::solve_radial_expander(o.n, o.kappa, o.R, o.resolution, options);

    const std::string stem = "rotational_n" + slug(o.n) + "_kappa" + slug(o.kappa) + "_R" +
                             slug(o.R) + "_res" + slug(static_cast<double>(o.resolution));
    out.table(stem, el::io::profile_table(p));
    out.plot(stem, el::io::profile_plot(p));

    const double residual = interior_residual_sup(p);
    out.check("equation-residual", residual <= 1e-8,
              "sup interior residual " + num(residual) + " (<= 1e-8)");

    const double K = el::ode::BarrierSpec{o.n, o.kappa}.upper_constant();
    double worst_barrier = -1.0;
    double worst_monotone = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.grid[i];
        worst_barrier = std::max(worst_barrier, o.kappa * r - p.values[i]);
        if (r >= 1.0)
            worst_barrier = std::max(worst_barrier, p.values[i] - (o.kappa * r + K / r));
        if (i > 0) worst_monotone = std::max(worst_monotone, p.values[i - 1] - p.values[i]);
    }
    out.check("barrier-sandwich", worst_barrier <= 1e-9,
              "worst violation of kappa r <= u <= kappa r + K/r: " + num(worst_barrier) +
                  " (K = " + num(K) + ")");
    out.check("monotone-profile", worst_monotone <= 1e-10,
              "worst decrease between neighbors " + num(worst_monotone));

    if (o.n >= 3 && o.R >= 20.0) {
        const double fitted = el::ode::asymptotic_constant(p);
        const double target = (o.n - 1) * o.kappa;
        const double rel = std::abs(fitted - target) / target;
        out.check("asymptotic-constant", rel <= 0.05,
                  "fitted " + num(fitted) + " vs (n-1) kappa = " + num(target) +
                      ", relative error " + num(rel) + " (<= 0.05)");
    }

    const json parameters = {{"n", o.n},
                             {"kappa", o.kappa},
                             {"R", o.R},
                             {"resolution", o.resolution},
                             {"tolerance", o.tolerance}};
    return out.finish(stem, "solve-rotational", parameters);
}

struct OneDOpts {
    double kappa = 1.0;
    double R = 10.0;
    std::size_t resolution = 2001;
    double tolerance = 1e-9;
};

int run_solve_1d(const OneDOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    el::ode::RadialSolveOptions options;
    options.residual_tolerance = o.tolerance;
    const auto p = el::ode::solve_expander_line(o.kappa, o.R, o.resolution, options);

    const std::string stem = "line_kappa" + slug(o.kappa) + "_R" + slug(o.R) + "_res" +
                             slug(static_cast<double>(o.resolution));
    out.table(stem, el::io::profile_table(p));
    out.plot(stem, el::io::profile_plot(p));

    const double residual = interior_residual_sup(p);
    out.check("equation-residual", residual <= 1e-8,
              "sup interior residual " + num(residual) + " (<= 1e-8)");

    const double tau = el::ode::BarrierSpec{1, o.kappa}.line_constant();
    double worst = -1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double y = p.grid[i];
        worst = std::max(worst, o.kappa * y - p.values[i]);
        if (y < 1.0) continue;
        const double envelope =
            std::min(tau / y * std::exp(-0.25 * y * y), 3.0 * o.kappa + 2.0);
        worst = std::max(worst, p.values[i] - (o.kappa * y + envelope));
    }
    out.check("barrier-sandwich", worst <= 1e-9,
              "worst violation of kappa y <= u <= kappa y + min((tau/y) exp(-y^2/4), "
              "3 kappa + 2): " +
                  num(worst) + " (tau = " + num(tau) + ")");

    const json parameters = {{"kappa", o.kappa},
                             {"R", o.R},
                             {"resolution", o.resolution},
                             {"tolerance", o.tolerance}};
    return out.finish(stem, "solve-1d", parameters);
}

struct DirichletOpts {
    std::string boundary = "cone";  // cone | halfcone | fourier
    double kappa = 1.0;
    double R = 4.0;
    std::size_t resolution = 161;  // nodes per side
    double tolerance = 1e-8;
    std::uint64_t seed = 7;
    int minimality_bumps = 0;
};

int run_dirichlet(const DirichletOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());

    el::graph::BoundaryData data;
    double lipschitz = 0.0;
    if (o.boundary == "cone") {
        const double k = o.kappa;
        data = [k](double x, double y) { return k * std::hypot(x, y); };
        lipschitz = o.kappa;
    } else if (o.boundary == "halfcone") {
        const double k = o.kappa;
        data = [k](double x, double y) { return k * std::max(x, 0.5 * std::hypot(x, y)); };
        lipschitz = o.kappa;
    } else if (o.boundary == "fourier") {
        const auto profile = AngularProfile::random(o.seed);
        data = profile.boundary();
        lipschitz = profile.lipschitz();
    } else {
        throw std::invalid_argument("unknown boundary \"" + o.boundary +
                                    "\" (expected cone, halfcone, or fourier)");
    }

    el::graph::DiskSolveOptions options;
    options.residual_tolerance = o.tolerance;
    const auto field = el::graph::solve_dirichlet_disk(data, lipschitz, o.R, o.resolution,
                                                       options);

    const std::string stem = "disk_" + o.boundary + "_kappa" + slug(o.kappa) + "_R" +
                             slug(o.R) + "_side" + slug(static_cast<double>(o.resolution));
    out.table(stem, el::io::graph_field_table(field));
    out.contour(stem, field);

    const double residual = el::graph::disk_residual_sup(field, data);
    out.check("equation-residual", residual <= o.tolerance,
              "sup interior residual " + num(residual) + " (<= " + num(o.tolerance) + ")");

    if (o.R >= 6.0) {
        const auto unique = el::graph::uniqueness_estimate_check(field, data);
        out.check("tail-decay-certificate", unique.certified,
                  "weighted gap " + num(unique.worst_weighted_gap) + " at radius " +
                      num(unique.worst_radius) + " vs bound " + num(unique.bound) +
                      " with 10% slack");
    }
    if (o.minimality_bumps > 0) {
        const auto report = el::graph::minimality_check(field, o.minimality_bumps);
        out.check("weighted-area-minimality", report.minimal,
                  "worst area change over " + std::to_string(report.bump_count) +
                      " bumps: " + num(report.worst_drop) + " (>= -1e-9 relative)");
    }

    const json parameters = {{"boundary", o.boundary}, {"kappa", o.kappa},
                             {"R", o.R},               {"resolution", o.resolution},
                             {"tolerance", o.tolerance}, {"seed", o.seed},
                             {"minimality_bumps", o.minimality_bumps}};
    return out.finish(stem, "dirichlet", parameters);
}

struct LatitudeOpts {
    double epsilon = 1.0;  // inf accepted
    double theta1 = 1.3;
    double theta2 = 1.7;
    int n = 2;
    std::size_t resolution = 2001;
    double tolerance = 1e-8;
};

int run_latitude(const LatitudeOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    el::graph::LatitudeSolveOptions options;
    options.residual_tolerance = o.tolerance;
    const auto field = el::graph::solve_latitude_band(o.epsilon, o.theta1, o.theta2, o.n,
                                                      o.resolution, options);

    const std::string stem = "latitude_eps" + slug(o.epsilon) + "_n" + slug(o.n) + "_band" +
                             slug(o.theta1) + "_" + slug(o.theta2);
    out.table(stem, el::io::latitude_table(field));
    out.plot(stem, el::io::latitude_plot(field));

    const double residual = el::graph::latitude_band_residual(field);
    out.check("equation-residual", residual <= o.tolerance,
              "sup interior residual " + num(residual) + " (<= " + num(o.tolerance) + ")");
    const double worst_sign = *std::max_element(field.values.begin(), field.values.end());
    out.check("nonpositive-values", worst_sign <= 0.0,
              "max value " + num(worst_sign) + " (<= 0)");
    const double edge = std::max(std::abs(field.values.front()), std::abs(field.values.back()));
    out.check("zero-boundary", edge == 0.0, "boundary values " + num(edge));

    const json parameters = {{"epsilon", o.epsilon}, {"theta1", o.theta1},
                             {"theta2", o.theta2},   {"n", o.n},
                             {"resolution", o.resolution}, {"tolerance", o.tolerance}};
    return out.finish(stem, "latitude", parameters);
}

struct FlowOpts {
    int n = 3;
    double kappa = 1.0;
    double R = 12.0;
    std::size_t resolution = 601;
    double dt = 1e-3;
    double T = 0.2;
    double s = 0.5;
    std::string scheme = "semi-implicit";  // semi-implicit | explicit
    std::string s_mode = "full";           // full | horizontal
    std::string initial = "cone-smooth";   // cone-smooth | expander | flat
    int snapshots = 11;
    double drift_tolerance = 1e-3;
};

int run_flow(const FlowOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    if (o.snapshots < 2) throw std::invalid_argument("snapshots must be at least 2");

    el::ode::RadialProfile initial;
    initial.dimension = o.n;
    initial.cone_slope = o.kappa;
    if (o.initial == "expander") {
        initial = el::ode::solve_radial_expander(o.n, o.kappa, o.R, o.resolution);
    } else if (o.initial == "cone-smooth" || o.initial == "flat") {
        initial.grid = el::num::Grid1D::uniform(0.0, o.R, o.resolution);
        initial.values.resize(o.resolution);
        for (std::size_t i = 0; i < o.resolution; ++i) {
            const double r = initial.grid[i];
            initial.values[i] = o.initial == "flat"
                                    ? 0.0
                                    : std::sqrt(1.0 + o.kappa * o.kappa * r * r);
        }
        if (o.initial == "flat") initial.cone_slope = 0.0;
    } else {
        throw std::invalid_argument("unknown initial \"" + o.initial +
                                    "\" (expected cone-smooth, expander, or flat)");
    }

    el::flow::FlowOptions options;
    options.s = o.s;
    options.dt = o.dt;
    if (o.scheme == "semi-implicit")
        options.scheme = el::flow::TimeScheme::semi_implicit;
    else if (o.scheme == "explicit")
        options.scheme = el::flow::TimeScheme::explicit_euler;
    else
        throw std::invalid_argument("unknown scheme \"" + o.scheme +
                                    "\" (expected semi-implicit or explicit)");
    if (o.s_mode == "full")
        options.s_mode = el::flow::SMode::full_position;
    else if (o.s_mode == "horizontal")
        options.s_mode = el::flow::SMode::horizontal;
    else
        throw std::invalid_argument("unknown s-mode \"" + o.s_mode +
                                    "\" (expected full or horizontal)");

    const double steps = std::max(1.0, std::round(o.T / o.dt));
    const std::size_t stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::round(
                                     steps / static_cast<double>(o.snapshots - 1))));
    const auto trajectory = el::flow::run_radial_flow(initial, options, {}, o.T, 0.0, stride);

    const std::string stem = "flow_" + o.initial + "_n" + slug(o.n) + "_kappa" +
                             slug(o.kappa) + "_s" + slug(o.s) + "_T" + slug(o.T);
    std::vector<std::string> snapshot_files;
    for (std::size_t k = 0; k < trajectory.profiles.size(); ++k) {
        char tag[16];
        std::snprintf(tag, sizeof tag, "%03zu", k);
        const std::string snap_stem = stem + "_snap" + tag;
        out.table(snap_stem, el::io::profile_table(trajectory.profiles[k]));
        snapshot_files.push_back(snap_stem + ".csv");
    }
    out.table(stem + "_index", el::io::trajectory_index_table(trajectory, snapshot_files));
    out.plot(stem, el::io::trajectory_plot(trajectory));

    bool finite = true;
    for (const auto& profile : trajectory.profiles)
        for (double v : profile.values) finite = finite && std::isfinite(v);
    out.check("finite-profiles", finite,
              std::to_string(trajectory.profiles.size()) + " stored profiles up to t = " +
                  num(trajectory.times.back()));
    double boundary_drift = 0.0;
    for (const auto& profile : trajectory.profiles)
        boundary_drift = std::max(boundary_drift, std::abs(profile.values.back() -
                                                           initial.values.back()));
    out.check("fixed-boundary", boundary_drift <= 1e-12,
              "sup boundary movement " + num(boundary_drift) + " (<= 1e-12)");
    if (o.initial == "expander" && o.s == 0.5 && o.s_mode == "full") {
        double drift = 0.0;
        const auto& final_profile = trajectory.profiles.back();
        for (std::size_t i = 0; i < final_profile.size(); ++i)
            drift = std::max(drift, std::abs(final_profile.values[i] - initial.values[i]));
        out.check("expander-fixed-point", drift <= o.drift_tolerance,
                  "sup drift from the solved expander " + num(drift) + " (<= " +
                      num(o.drift_tolerance) + ")");
    }

    const json parameters = {{"n", o.n},
                             {"kappa", o.kappa},
                             {"R", o.R},
                             {"resolution", o.resolution},
                             {"dt", o.dt},
                             {"T", o.T},
                             {"s", o.s},
                             {"scheme", o.scheme},
                             {"s_mode", o.s_mode},
                             {"initial", o.initial},
                             {"snapshots", o.snapshots},
                             {"drift_tolerance", o.drift_tolerance}};
    return out.finish(stem, "flow", parameters);
}

struct ReparamOpts {
    int n = 2;
    double kappa = 1.0;
    double s = 0.5;
    double T = 0.5;
    double R = 12.0;
    double window = 4.0;
    std::size_t resolution = 241;
    double dt = 1e-3;
    double tolerance = 1e-3;
};

int run_reparam(const ReparamOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    const auto report = el::flow::reparametrization_check(o.n, o.kappa, o.s, o.T, o.R,
                                                          o.window, o.resolution, o.dt);

    const std::string stem = "reparam_n" + slug(o.n) + "_s" + slug(o.s) + "_T" + slug(o.T) +
                             "_res" + slug(static_cast<double>(o.resolution));
    el::io::CsvTable table;
    table.header = {"discrepancy", "scale", "mcf_duration", "window_radius"};
    table.rows = {{el::io::format_real(report.discrepancy), el::io::format_real(report.scale),
                   el::io::format_real(report.mcf_duration),
                   el::io::format_real(report.window_radius)}};
    out.table(stem, table);

    out.check("reparametrization-agreement", report.discrepancy <= o.tolerance,
              "rescaled-flow vs direct-flow discrepancy " + num(report.discrepancy) +
                  " on |r| <= " + num(report.window_radius) + " (<= " + num(o.tolerance) +
                  "); scale " + num(report.scale) + ", plain-flow duration " +
                  num(report.mcf_duration));

    const json parameters = {{"n", o.n},     {"kappa", o.kappa},
                             {"s", o.s},     {"T", o.T},
                             {"R", o.R},     {"window", o.window},
                             {"resolution", o.resolution}, {"dt", o.dt},
                             {"tolerance", o.tolerance}};
    return out.finish(stem, "reparam", parameters);
}

struct TranslatorOpts {
    int n = 3;
    double epsilon = 1.0;  // inf accepted
    double lambda = 1.0;
    double R = 4.0;
    std::size_t resolution = 2001;
    double tolerance = 1e-9;
    std::string lambda_ladder_raw;
};

int run_translator(const TranslatorOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    el::flow::TranslatorParams params;
    params.base_dimension = o.n;
    params.epsilon = o.epsilon;
    params.lambda = o.lambda;
    params.domain_radius = o.R;
    el::flow::TranslatorSolveOptions options;
    options.residual_tolerance = o.tolerance;
    const auto phi = el::flow::solve_translator(params, o.resolution, options);

    const std::string stem = "translator_d" + slug(o.n) + "_eps" + slug(o.epsilon) +
                             "_lambda" + slug(o.lambda) + "_R" + slug(o.R);
    out.table(stem, el::io::profile_table(phi));
    out.plot(stem, el::io::profile_plot(phi));

    const double residual = el::flow::translator_residual(phi, params);
    out.check("equation-residual", residual <= 1e-8,
              "sup residual " + num(residual) + " (<= 1e-8)");
    const double identity = el::flow::smean_identity_residual(phi, params);
    out.check("translation-identity", identity <= 1e-7,
              "sup violation of H - s<x,nu> + lambda <E,nu> = 0: " + num(identity) +
                  " (<= 1e-7)");
    if (o.lambda > 0.0) {
        const double hs_max = el::flow::smean_curvature_max(phi, params);
        out.check("negative-drift-curvature", hs_max < 0.0,
                  "max H - s<x,nu> = " + num(hs_max) + " (< 0)");
    }

    const std::vector<double> lambda_ladder =
        parse_number_list(o.lambda_ladder_raw, "--lambda-ladder");
    if (!lambda_ladder.empty()) {
        if (std::isinf(o.epsilon))
            throw std::invalid_argument("--lambda-ladder needs finite epsilon");
        if (lambda_ladder.size() < 3)
            throw std::invalid_argument("--lambda-ladder needs at least 3 values");
        const auto ladder = el::flow::arrival_time_limit(params, lambda_ladder,
                                                         o.resolution);
        el::io::CsvTable table;
        table.header = {"lambda", "equation_residual"};
        for (std::size_t i = 0; i < ladder.lambdas.size(); ++i)
            table.rows.push_back({el::io::format_real(ladder.lambdas[i]),
                                  el::io::format_real(ladder.equation_residuals[i])});
        out.table(stem + "_arrival", table);
        std::string differences;
        for (double d : ladder.sup_differences) {
            if (!differences.empty()) differences += " -> ";
            differences += num(d);
        }
        out.check("arrival-time-cauchy", ladder.cauchy,
                  "sup differences of phi/lambda: " + differences);
        out.check("arrival-residuals-decreasing", ladder.residuals_decreasing,
                  "arrival-equation residuals decreasing along the ladder; closed-form gap " +
                      num(ladder.closed_form_gap));
    }

    json parameters = {{"n", o.n},
                       {"epsilon", o.epsilon},
                       {"lambda", o.lambda},
                       {"R", o.R},
                       {"resolution", o.resolution},
                       {"tolerance", o.tolerance}};
    if (!lambda_ladder.empty()) parameters["lambda_ladder"] = lambda_ladder;
    if (std::isinf(o.epsilon)) parameters["epsilon"] = "inf";
    return out.finish(stem, "translator", parameters);
}

struct SpectralOpts {
    int k_max = 5;
    double epsilon = 1e-3;
    double inner_cutoff = 1e-3;
    double outer_cutoff = 30.0;
    std::optional<int> n;
    std::optional<double> lambda1;
};

int run_spectral(const SpectralOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    if (o.n.has_value() != o.lambda1.has_value())
        throw std::invalid_argument("--n and --lambda1 must be given together");

    std::vector<el::spectral::ConeEigendata> rows;
    for (int k = 1; k <= o.k_max; ++k)
        rows.push_back(el::spectral::product_sphere_eigendata(k, k));
    if (o.n) rows.push_back({*o.n, *o.lambda1, 0.0});

    el::io::CsvTable table;
    table.header = {"n", "lambda1", "epsilon", "I0_closed_form", "I0_quadrature",
                    "classification"};
    double worst_estimate = 0.0;
    bool all_finite = true;
    for (const auto& row : rows) {
        el::spectral::StabilityParams params;
        params.dimension = row.dimension;
        params.lambda1 = row.lambda1;
        params.exponent = o.epsilon;
        params.inner_cutoff = o.inner_cutoff;
        params.outer_cutoff = o.outer_cutoff;
        const double closed =
            el::spectral::stability_closed_form(row.dimension, row.lambda1, o.epsilon);
        const auto quadrature = el::spectral::stability_family_quadrature(params);
        const bool stable =
            el::spectral::classify_cone(row) == el::spectral::ConeStability::stable;
        table.rows.push_back({el::io::format_real(row.dimension),
                              el::io::format_real(row.lambda1),
                              el::io::format_real(o.epsilon), el::io::format_real(closed),
                              el::io::format_real(quadrature.value),
                              stable ? "stable" : "unstable"});
        worst_estimate = std::max(worst_estimate, quadrature.error_estimate);
        all_finite = all_finite && std::isfinite(closed) && std::isfinite(quadrature.value);
    }

    const std::string stem = "spectral_kmax" + slug(o.k_max) + "_eps" + slug(o.epsilon);
    out.table(stem, table);

    out.check("values-finite", all_finite,
              std::to_string(table.rows.size()) + " rows, all closed-form and quadrature "
                                                  "values finite");
    out.check("quadrature-error-estimate", worst_estimate <= 1e-6,
              "worst adaptive error estimate " + num(worst_estimate) + " (<= 1e-6); the "
              "closed form is the vanishing-cutoff limit, so the two columns drift apart "
              "as cutoff^(2 epsilon)");

    json parameters = {{"k_max", o.k_max},
                       {"epsilon", o.epsilon},
                       {"inner_cutoff", o.inner_cutoff},
                       {"outer_cutoff", o.outer_cutoff}};
    if (o.n) {
        parameters["n"] = *o.n;
        parameters["lambda1"] = *o.lambda1;
    }
    return out.finish(stem, "spectral", parameters);
}

struct DensityOpts {
    int k_max = 10;
};

int run_density_table(const DensityOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    const auto table = el::density::sqrt2_comparison_table(o.k_max);

    el::io::CsvTable csv;
    csv.header = {"k", "simons_density", "shrinker_entropy", "entropy_gap", "density_gap"};
    for (const auto& row : table.rows)
        csv.rows.push_back({el::io::format_real(row.k),
                            el::io::format_real(row.simons_density),
                            el::io::format_real(row.shrinker_entropy),
                            el::io::format_real(row.entropy_gap),
                            el::io::format_real(row.density_gap)});
    const std::string stem = "density_kmax" + slug(o.k_max);
    out.table(stem, csv);

    out.check("densities-exceed-sqrt2", table.densities_exceed_sqrt2,
              "all product-cone densities stay above sqrt(2)");
    out.check("entropies-strictly-decreasing", table.entropies_strictly_decreasing,
              "sphere entropies d_k decrease strictly in k");
    out.check("densities-strictly-decreasing", table.densities_strictly_decreasing,
              "product-cone densities decrease strictly in k");

    const json parameters = {{"k_max", o.k_max}};
    return out.finish(stem, "density-table", parameters);
}

struct VerifyOpts {
    bool quick = false;
};

int run_verify_all(const VerifyOpts& o, const CommonOpts& c) {
    Emitter out(c.output_dir, c.formats());
    el::verify::SuiteOptions options;
    options.quick = o.quick;
    options.max_threads = env_thread_cap();
    const auto results = el::verify::run_acceptance_suite(options);

    el::io::CsvTable table;
    table.header = {"criterion", "name", "passed", "measured", "tolerance", "seconds",
                    "detail"};
    for (const auto& r : results)
        table.rows.push_back({el::io::format_real(r.criterion), r.name,
                              r.passed ? "true" : "false", el::io::format_real(r.measured),
                              el::io::format_real(r.tolerance),
                              el::io::format_real(r.seconds), r.detail});
    const std::string stem = o.quick ? "verify_quick" : "verify_full";
    out.table(stem + "_summary", table);

    for (const auto& r : results) {
        char tag[8];
        std::snprintf(tag, sizeof tag, "%02d", r.criterion);
        out.check("criterion-" + std::string(tag) + "-" + r.name, r.passed,
                  "measured " + num(r.measured) + " vs tolerance " + num(r.tolerance) +
                      " in " + num(r.seconds) + "s; " + r.detail);
    }

    const json parameters = {{"quick", o.quick}, {"threads", options.max_threads}};
    return out.finish(stem, "verify-all", parameters);
}

// ------------------------------------------------------------ config file

// Pre-scan for --config, load the JSON experiment description, and synthesize
// the argument list `[command, config flags..., user flags...]`. Later flags
// win (every option uses TakeLast), so explicit command-line flags override
// the file.
std::vector<std::string> assemble_args(const std::vector<std::string>& raw) {
    std::vector<std::string> user;
    std::string config_path;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string& a = raw[i];
        if (a == "--config") {
            if (i + 1 >= raw.size()) throw std::invalid_argument("--config needs a file path");
            config_path = raw[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
        } else {
            user.push_back(a);
        }
    }
    if (config_path.empty()) return user;

    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file " + config_path);
    json config;
    try {
        in >> config;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config file " + config_path + " is not valid JSON: " +
                                    e.what());
    }
    if (!config.is_object())
        throw std::invalid_argument("config file must hold a JSON object");

    std::string command;
    if (config.contains("command")) {
        if (!config["command"].is_string())
            throw std::invalid_argument("config \"command\" must be a string");
        command = config["command"].get<std::string>();
    }
    std::string user_command;
    if (!user.empty() && user[0].rfind("-", 0) != 0) {
        user_command = user[0];
        user.erase(user.begin());
    }
    if (!command.empty() && !user_command.empty() && command != user_command)
        throw std::invalid_argument("config command \"" + command +
                                    "\" conflicts with command-line command \"" +
                                    user_command + "\"");
    if (command.empty()) command = user_command;
    if (command.empty())
        throw std::invalid_argument("no command given (config or command line)");

    std::vector<std::string> args = {command};
    const auto flag_name = [](std::string key) {
        std::replace(key.begin(), key.end(), '_', '-');
        return "--" + key;
    };
    const auto scalar_text = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) return el::io::format_real(v.get<double>());
        throw std::invalid_argument("unsupported parameter value type in config: " + v.dump());
    };
    if (config.contains("parameters")) {
        const json& parameters = config["parameters"];
        if (!parameters.is_object())
            throw std::invalid_argument("config \"parameters\" must be an object");
        for (const auto& [key, value] : parameters.items()) {
            if (value.is_boolean()) {
                if (value.get<bool>()) args.push_back(flag_name(key));
            } else if (value.is_array()) {
                std::string joined;
                for (const auto& item : value) {
                    if (!joined.empty()) joined += ",";
                    joined += scalar_text(item);
                }
                args.push_back(flag_name(key));
                args.push_back(joined);
            } else {
                args.push_back(flag_name(key));
                args.push_back(scalar_text(value));
            }
        }
    }
    if (config.contains("output_dir")) {
        args.push_back("--output-dir");
        args.push_back(config["output_dir"].get<std::string>());
    }
    if (config.contains("formats")) {
        std::string joined;
        for (const auto& f : config["formats"]) {
            if (!joined.empty()) joined += ",";
            joined += f.get<std::string>();
        }
        args.push_back("--formats");
        args.push_back(joined);
    }
    args.insert(args.end(), user.begin(), user.end());
    return args;
}

// ------------------------------------------------------------------- main

int run(std::vector<std::string> args) {
    CLI::App app{"Numerical laboratory for self-expanders of mean curvature flow, "
                 "minimal-cone densities, and shrinker entropies"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Print help for every command");

    CommonOpts common;
    RotationalOpts rotational;
    OneDOpts one_d;
    DirichletOpts dirichlet;
    LatitudeOpts latitude;
    FlowOpts flow;
    ReparamOpts reparam;
    TranslatorOpts translator;
    SpectralOpts spectral;
    DensityOpts density;
    VerifyOpts verify;
    int spectral_n = 0;
    double spectral_lambda1 = 0.0;

    const auto last = [](CLI::Option* opt) {
        return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    };
    const auto add_common = [&](CLI::App* sub) {
        last(sub->add_option("--output-dir", common.output_dir,
                             "Directory for artifacts (created if missing)"));
        last(sub->add_option("--formats", common.formats_raw,
                             "Comma-separated subset of csv,json,svg"));
        sub->add_option("--config", "JSON experiment description (handled before parsing)")
            ->expected(1);
    };

    auto* cmd_rotational = app.add_subcommand(
        "solve-rotational", "Rotationally symmetric self-expander over a cone");
    last(cmd_rotational->add_option("--n", rotational.n, "Hypersurface dimension (>= 2)")
             ->check(CLI::Range(2, 64)));
    last(cmd_rotational->add_option("--kappa", rotational.kappa, "Asymptotic cone slope (> 0)")
             ->check(CLI::PositiveNumber));
    last(cmd_rotational->add_option("--R", rotational.R, "Outer radius (>= 1)"));
    last(cmd_rotational->add_option("--resolution", rotational.resolution, "Node count"));
    last(cmd_rotational->add_option("--tolerance", rotational.tolerance,
                                    "Solver residual tolerance"));
    add_common(cmd_rotational);

    auto* cmd_1d = app.add_subcommand("solve-1d", "Single-variable self-expander over a line");
    last(cmd_1d->add_option("--kappa", one_d.kappa, "Asymptotic slope (> 0)")
             ->check(CLI::PositiveNumber));
    last(cmd_1d->add_option("--R", one_d.R, "Outer radius (>= 2)"));
    last(cmd_1d->add_option("--resolution", one_d.resolution, "Node count"));
    last(cmd_1d->add_option("--tolerance", one_d.tolerance, "Solver residual tolerance"));
    add_common(cmd_1d);

    auto* cmd_disk = app.add_subcommand(
        "dirichlet", "Graphic self-expander Dirichlet problem on a 2-D disk");
    last(cmd_disk->add_option("--boundary", dirichlet.boundary,
                              "Boundary data: cone, halfcone, or fourier"));
    last(cmd_disk->add_option("--kappa", dirichlet.kappa,
                              "Scale of the cone/halfcone data (> 0)")
             ->check(CLI::PositiveNumber));
    last(cmd_disk->add_option("--R", dirichlet.R, "Disk radius"));
    last(cmd_disk->add_option("--resolution", dirichlet.resolution, "Nodes per side"));
    last(cmd_disk->add_option("--tolerance", dirichlet.tolerance,
                              "Solver residual tolerance"));
    last(cmd_disk->add_option("--seed", dirichlet.seed, "Seed for the fourier boundary"));
    last(cmd_disk->add_option("--minimality-bumps", dirichlet.minimality_bumps,
                              "Also certify weighted-area minimality against this many "
                              "random bumps (0 = skip)"));
    add_common(cmd_disk);

    auto* cmd_latitude = app.add_subcommand(
        "latitude", "Log-radial graph over a latitude band of the unit sphere");
    last(cmd_latitude->add_option("--epsilon", latitude.epsilon,
                                  "Weight parameter (inf drops the weight)"));
    last(cmd_latitude->add_option("--theta1", latitude.theta1, "Band start in (0, pi)"));
    last(cmd_latitude->add_option("--theta2", latitude.theta2, "Band end in (0, pi)"));
    last(cmd_latitude->add_option("--n", latitude.n, "Sphere dimension (>= 2)")
             ->check(CLI::Range(2, 64)));
    last(cmd_latitude->add_option("--resolution", latitude.resolution, "Node count"));
    last(cmd_latitude->add_option("--tolerance", latitude.tolerance,
                                  "Solver residual tolerance"));
    add_common(cmd_latitude);

    auto* cmd_flow = app.add_subcommand(
        "flow", "Rotational graph flow dX/dt = H - s X with snapshot export");
    last(cmd_flow->add_option("--n", flow.n, "Hypersurface dimension (>= 2)")
             ->check(CLI::Range(2, 64)));
    last(cmd_flow->add_option("--kappa", flow.kappa, "Cone slope of the initial graph"));
    last(cmd_flow->add_option("--R", flow.R, "Domain radius"));
    last(cmd_flow->add_option("--resolution", flow.resolution, "Node count"));
    last(cmd_flow->add_option("--dt", flow.dt, "Time step"));
    last(cmd_flow->add_option("--T", flow.T, "Final time"));
    last(cmd_flow->add_option("--s", flow.s, "Flow constant (0 = plain mean curvature flow)"));
    last(cmd_flow->add_option("--scheme", flow.scheme, "semi-implicit or explicit"));
    last(cmd_flow->add_option("--s-mode", flow.s_mode,
                              "Position term: full or horizontal"));
    last(cmd_flow->add_option("--initial", flow.initial,
                              "Initial graph: cone-smooth, expander, or flat"));
    last(cmd_flow->add_option("--snapshots", flow.snapshots, "Stored profiles (>= 2)"));
    last(cmd_flow->add_option("--drift-tolerance", flow.drift_tolerance,
                              "Fixed-point drift bound for --initial expander"));
    add_common(cmd_flow);

    auto* cmd_reparam = app.add_subcommand(
        "reparam", "Check the rescaled flow against the reparametrized plain flow");
    last(cmd_reparam->add_option("--n", reparam.n, "Hypersurface dimension (>= 2)")
             ->check(CLI::Range(2, 64)));
    last(cmd_reparam->add_option("--kappa", reparam.kappa, "Cone slope of the initial graph"));
    last(cmd_reparam->add_option("--s", reparam.s, "Flow constant (> 0)")
             ->check(CLI::PositiveNumber));
    last(cmd_reparam->add_option("--T", reparam.T, "Final rescaled time"));
    last(cmd_reparam->add_option("--R", reparam.R, "Domain radius"));
    last(cmd_reparam->add_option("--window", reparam.window, "Comparison window radius"));
    last(cmd_reparam->add_option("--resolution", reparam.resolution, "Node count"));
    last(cmd_reparam->add_option("--dt", reparam.dt, "Time step"));
    last(cmd_reparam->add_option("--tolerance", reparam.tolerance, "Discrepancy bound"));
    add_common(cmd_reparam);

    auto* cmd_translator = app.add_subcommand(
        "translator", "Radial translator of the drift flow, with arrival-time limit");
    last(cmd_translator->add_option("--n", translator.n, "Base dimension (>= 2)")
             ->check(CLI::Range(2, 64)));
    last(cmd_translator->add_option("--epsilon", translator.epsilon,
                                    "Drift parameter (inf drops the drift)"));
    last(cmd_translator->add_option("--lambda", translator.lambda,
                                    "Vertical translation speed (>= 0)"));
    last(cmd_translator->add_option("--R", translator.R, "Domain radius"));
    last(cmd_translator->add_option("--resolution", translator.resolution, "Node count"));
    last(cmd_translator->add_option("--tolerance", translator.tolerance,
                                    "Solver residual tolerance"));
    last(cmd_translator->add_option("--lambda-ladder", translator.lambda_ladder_raw,
                                    "Comma-separated ascending lambda values (>= 3) for "
                                    "the arrival-time limit check"));
    add_common(cmd_translator);

    auto* cmd_spectral = app.add_subcommand(
        "spectral", "Stability integrals of minimal cones: closed form vs quadrature");
    last(cmd_spectral->add_option("--k-max", spectral.k_max,
                                  "Product-sphere family rows k = 1..k_max")
             ->check(CLI::Range(1, 64)));
    last(cmd_spectral->add_option("--epsilon", spectral.epsilon,
                                  "Test-family exponent (> 0)")
             ->check(CLI::PositiveNumber));
    last(cmd_spectral->add_option("--inner-cutoff", spectral.inner_cutoff,
                                  "Inner ramp cutoff in (0, 1)"));
    last(cmd_spectral->add_option("--outer-cutoff", spectral.outer_cutoff,
                                  "Outer support cutoff (> 1)"));
    auto* opt_n = last(cmd_spectral->add_option("--n", spectral_n,
                                                "Extra row: cone dimension (>= 3)"));
    auto* opt_l1 = last(cmd_spectral->add_option("--lambda1", spectral_lambda1,
                                                 "Extra row: first eigenvalue"));
    add_common(cmd_spectral);

    auto* cmd_density = app.add_subcommand(
        "density-table", "Minimal-cone densities vs sphere shrinker entropies");
    last(cmd_density->add_option("--k-max", density.k_max, "Rows k = 1..k_max (>= 3)")
             ->check(CLI::Range(3, 400)));
    add_common(cmd_density);

    auto* cmd_verify = app.add_subcommand(
        "verify-all", "Run the full acceptance suite and write a summary table");
    cmd_verify->add_flag("--quick", verify.quick,
                         "Reduced resolutions and relaxed tolerances");
    add_common(cmd_verify);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto subcommands = app.get_subcommands();
    CLI::App* sub = subcommands.front();
    if (sub == cmd_rotational) return run_solve_rotational(rotational, common);
    if (sub == cmd_1d) return run_solve_1d(one_d, common);
    if (sub == cmd_disk) return run_dirichlet(dirichlet, common);
    if (sub == cmd_latitude) return run_latitude(latitude, common);
    if (sub == cmd_flow) return run_flow(flow, common);
    if (sub == cmd_reparam) return run_reparam(reparam, common);
    if (sub == cmd_translator) return run_translator(translator, common);
    if (sub == cmd_spectral) {
        if (opt_n->count() > 0) spectral.n = spectral_n;
        if (opt_l1->count() > 0) spectral.lambda1 = spectral_lambda1;
        return run_spectral(spectral, common);
    }
    if (sub == cmd_density) return run_density_table(density, common);
    if (sub == cmd_verify) return run_verify_all(verify, common);
    throw std::logic_error("unreachable: unknown subcommand");
}

} // namespace

int main(int argc, char** argv) {
    try {
        std::vector<std::string> raw(argv + 1, argv + argc);
        // Validate the concurrency cap up front so a malformed environment
        // fails as a usage error regardless of the command.
        if (std::getenv("EXPANDERLAB_THREADS") != nullptr) env_thread_cap();
        const auto args = assemble_args(raw);
        return run(args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}
