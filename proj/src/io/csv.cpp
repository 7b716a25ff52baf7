#include "expanderlab/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace expanderlab::io {

namespace {

std::string format_with_digits(double x, int digits) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, digits);
    return std::string(buf.data(), res.ptr);
}

// to_chars round-trips JSON numbers, so a field parses as a number exactly
// when from_chars consumes it whole.
bool is_numeric_field(std::string_view s) {
    if (s.empty()) return false;
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(value);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    constexpr char hex[] = "0123456789abcdef";
                    out += "\\u00";
                    out += hex[(c >> 4) & 0xf];
                    out += hex[c & 0xf];
                } else {
                    out += c;
                }
        }
    }
    return out;
}

} // namespace

std::string format_real(double x) { return format_with_digits(x, 17); }

std::string format_real_brief(double x) { return format_with_digits(x, 6); }

std::string csv_escape(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    const auto emit_row = [&out, &table](const std::vector<std::string>& row) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("csv row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(row[i]);
        }
        out += "\r\n";
    };
    emit_row(table.header);
    for (const auto& row : table.rows) emit_row(row);
    return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    write_text_file(path, to_csv(table));
}

std::string to_json_rows(const CsvTable& table) {
    std::string out = "[\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size())
            throw std::invalid_argument("json row width does not match the header");
        out += "  {";
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ", ";
            out += '"';
            out += json_escape(table.header[i]);
            out += "\": ";
            if (is_numeric_field(row[i])) {
                out += row[i];
            } else {
                out += '"';
                out += json_escape(row[i]);
                out += '"';
            }
        }
        out += r + 1 < table.rows.size() ? "},\n" : "}\n";
    }
    out += "]\n";
    return out;
}

void write_json_rows(const std::filesystem::path& path, const CsvTable& table) {
    write_text_file(path, to_json_rows(table));
}

CsvTable profile_table(const ode::RadialProfile& profile) {
    CsvTable table;
    table.header = {"r", "u", "u_prime", "H", "shape_norm_sq"};
    table.rows.reserve(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        table.rows.push_back({format_real(profile.grid[i]), format_real(profile.values[i]),
                              format_real(profile_derivative(profile, i)),
                              format_real(profile_mean_curvature(profile, i)),
                              format_real(profile_shape_norm_sq(profile, i))});
    }
    return table;
}

CsvTable graph_field_table(const graph::GraphField& field) {
    CsvTable table;
    table.header = {"x1", "x2", "u"};
    const double limit = field.R * (1.0 + 1e-12);
    for (std::size_t j = 0; j < field.side; ++j) {
        for (std::size_t i = 0; i < field.side; ++i) {
            const double x1 = field.coords[i];
            const double x2 = field.coords[j];
            if (std::hypot(x1, x2) > limit) continue;
            table.rows.push_back(
                {format_real(x1), format_real(x2), format_real(field.values[field.index(i, j)])});
        }
    }
    return table;
}

CsvTable latitude_table(const graph::LatitudeField& field) {
    CsvTable table;
    table.header = {"theta", "u"};
    table.rows.reserve(field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i)
        table.rows.push_back({format_real(field.theta_grid[i]), format_real(field.values[i])});
    return table;
}

CsvTable trajectory_index_table(const flow::FlowTrajectory& trajectory,
                                const std::vector<std::string>& file_names) {
    if (file_names.size() != trajectory.times.size())
        throw std::invalid_argument("trajectory index needs one file name per stored time");
    CsvTable table;
    table.header = {"time", "file"};
    for (std::size_t i = 0; i < trajectory.times.size(); ++i)
        table.rows.push_back({format_real(trajectory.times[i]), file_names[i]});
    return table;
}

} // namespace expanderlab::io
