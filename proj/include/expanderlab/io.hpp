#pragma once

#include "expanderlab/disk_solver.hpp"
#include "expanderlab/flow.hpp"
#include "expanderlab/latitude_band.hpp"
#include "expanderlab/radial_profile.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace expanderlab::io {

/// 17 significant digits, '.' decimal separator, locale-free (std::to_chars).
/// Round-trips any finite double; infinities and NaN spell out as inf/-inf/nan.
std::string format_real(double x);

/// Shorter variant for axis labels and slugs (6 significant digits).
std::string format_real_brief(double x);

/// RFC 4180 escaping: fields containing a comma, quote, CR or LF are quoted
/// and embedded quotes doubled; everything else passes through unchanged.
std::string csv_escape(std::string_view field);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Serialized table with a header row and CRLF line endings. Every row must
/// match the header width.
std::string to_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Generic JSON twin of a CSV table: an array of objects keyed by the header.
/// Numeric-looking fields are emitted as JSON numbers, the rest as strings.
std::string to_json_rows(const CsvTable& table);
void write_json_rows(const std::filesystem::path& path, const CsvTable& table);

/// Radial profile r, u, u', H, |A|^2 (derivatives and curvatures from the
/// profile's second-order stencils).
CsvTable profile_table(const ode::RadialProfile& profile);

/// Disk field x1, x2, u over every grid node of the closed disk (interior
/// unknowns plus the near-boundary nodes that carry the boundary data).
CsvTable graph_field_table(const graph::GraphField& field);

/// Latitude band theta, u.
CsvTable latitude_table(const graph::LatitudeField& field);

/// Snapshot times of a trajectory next to the per-snapshot file names
/// (columns time, file).
CsvTable trajectory_index_table(const flow::FlowTrajectory& trajectory,
                                const std::vector<std::string>& file_names);

struct Curve {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
    double stroke_width = 1.2;
};

struct LinePlot {
    std::string x_label;
    std::string y_label;
    std::vector<Curve> curves;
    int width = 720;
    int height = 480;
};

/// Minimal deterministic SVG: frame, ticks, axis labels, one polyline per
/// curve. No text shaping or external resources, so bytes depend only on the
/// data.
std::string to_svg(const LinePlot& plot);
void write_svg(const std::filesystem::path& path, const LinePlot& plot);

LinePlot profile_plot(const ode::RadialProfile& profile);
LinePlot latitude_plot(const graph::LatitudeField& field);

/// Trajectory snapshots on one set of axes, early times dark, late times
/// light.
LinePlot trajectory_plot(const flow::FlowTrajectory& trajectory);

/// Marching-squares iso-lines of the disk solution at level_count evenly
/// spaced interior levels, plus the domain circle. Cells are contoured only
/// when all four corners lie in the closed disk.
std::string graph_field_contour_svg(const graph::GraphField& field, int level_count = 12,
                                    int size = 640);
void write_graph_field_contour_svg(const std::filesystem::path& path,
                                   const graph::GraphField& field, int level_count = 12,
                                   int size = 640);

} // namespace expanderlab::io
