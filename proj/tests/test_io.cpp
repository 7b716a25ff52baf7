#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/expander_ode.hpp"
#include "expanderlab/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

using namespace expanderlab;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("real formatting round-trips and never uses a locale separator") {
    for (const double x : {0.1, 1.0 / 3.0, std::numbers::pi, -2.5e-308, 1e300, 42.0,
                           1.5203469010662807, -0.0}) {
        const std::string s = io::format_real(x);
        CHECK(std::stod(s) == x);
        CHECK(s.find(',') == std::string::npos);
    }
    CHECK(io::format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::format_real(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(io::format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(io::format_real_brief(1.5203469010662807) == "1.52035");
    CHECK(io::format_real_brief(3.0) == "3");
}

TEST_CASE("csv escaping follows the quoting rules") {
    CHECK(io::csv_escape("plain") == "plain");
    CHECK(io::csv_escape("a,b") == "\"a,b\"");
    CHECK(io::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(io::csv_escape("line\nbreak") == "\"line\nbreak\"");
    CHECK(io::csv_escape("") == "");
}

TEST_CASE("csv serialization uses CRLF rows and enforces the header width") {
    io::CsvTable table;
    table.header = {"a", "b"};
    table.rows = {{"1", "x,y"}};
    CHECK(io::to_csv(table) == "a,b\r\n1,\"x,y\"\r\n");
    table.rows.push_back({"only-one"});
    CHECK_THROWS_AS((void)io::to_csv(table), std::invalid_argument);
}

TEST_CASE("json rows sniff numbers and escape strings") {
    io::CsvTable table;
    table.header = {"k", "name", "weird"};
    table.rows = {{"3", "a\"b", "inf"}, {"-2.5e-3", "plain", "7"}};
    const auto parsed = nlohmann::json::parse(io::to_json_rows(table));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0]["k"].is_number());
    CHECK(parsed[0]["k"].get<double>() == 3.0);
    CHECK(parsed[0]["name"].get<std::string>() == "a\"b");
    // non-finite fields stay strings so the document remains valid JSON
    CHECK(parsed[0]["weird"].is_string());
    CHECK(parsed[1]["k"].get<double>() == -2.5e-3);
    CHECK(parsed[1]["weird"].get<double>() == 7.0);
}

TEST_CASE("profile table carries the geometry columns") {
    const auto profile = ode::solve_radial_expander(3, 1.0, 6.0, 201);
    const auto table = io::profile_table(profile);
    REQUIRE(table.header ==
            std::vector<std::string>{"r", "u", "u_prime", "H", "shape_norm_sq"});
    REQUIRE(table.rows.size() == profile.size());
    CHECK(std::stod(table.rows.front()[0]) == 0.0);
    CHECK(std::stod(table.rows.back()[0]) == 6.0);
    CHECK(std::stod(table.rows.back()[1]) == profile.values.back());
}

TEST_CASE("svg plots are deterministic and well formed") {
    const auto profile = ode::solve_radial_expander(2, 1.0, 4.0, 101);
    const auto plot = io::profile_plot(profile);
    const std::string svg = io::to_svg(plot);
    CHECK(svg == io::to_svg(plot));
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") != std::string::npos);
}

TEST_CASE("contour svg draws the domain circle and iso-lines") {
    const graph::BoundaryData cone = [](double x, double y) { return std::hypot(x, y); };
    const auto field = graph::solve_dirichlet_disk(cone, 1.0, 2.0, 41);
    const std::string svg = io::graph_field_contour_svg(field);
    CHECK(svg == io::graph_field_contour_svg(field));
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);
}

TEST_CASE("written files are byte-stable across reruns") {
    const auto dir = std::filesystem::temp_directory_path() / "expanderlab_io_test";
    std::filesystem::create_directories(dir);
    const auto profile = ode::solve_radial_expander(2, 1.0, 4.0, 101);
    const auto table = io::profile_table(profile);
    io::write_csv(dir / "a.csv", table);
    io::write_csv(dir / "b.csv", table);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv") == io::to_csv(table));
    io::write_json_rows(dir / "a.json", table);
    CHECK(slurp(dir / "a.json") == io::to_json_rows(table));
    std::filesystem::remove_all(dir);
}

TEST_CASE("trajectory index requires one file name per stored time") {
    flow::FlowTrajectory trajectory;
    trajectory.times = {0.0, 0.1};
    CHECK_THROWS_AS((void)io::trajectory_index_table(trajectory, {"only.csv"}),
                    std::invalid_argument);
    const auto table = io::trajectory_index_table(trajectory, {"t0.csv", "t1.csv"});
    REQUIRE(table.header == std::vector<std::string>{"time", "file"});
    CHECK(table.rows[1][1] == "t1.csv");
}
