// Copyright 2026 The spinlsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spinlsv/cli.hpp"

using namespace spinlsv::cli;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Invocation {
    int code = -1;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    Invocation result;
    result.code = run_cli(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::vector<std::string> split(const std::string& text, char delimiter) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream stream(text);
    while (std::getline(stream, part, delimiter)) {
        parts.push_back(part);
    }
    return parts;
}

/// Rows of a CSV document, each split into fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& line : split(text, '\n')) {
        rows.push_back(split(line, ','));
    }
    return rows;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "spinlsv_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("format_number uses 12 significant digits", "[cli]") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(2.0 / 3.0 * 1e-7) == "6.66666666667e-08");
    CHECK(format_number(12.0) == "12");
}

TEST_CASE("bounds examples", "[cli]") {
    const auto ghz = invoke({"bounds", "--spin-f", "1", "--n", "10", "--family", "ghz"});
    REQUIRE(ghz.code == kExitSuccess);
    auto rows = parse_csv(ghz.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"F", "N", "family", "M1", "M2", "delta_kappa"});
    CHECK(rows[1][2] == "ghz");
    CHECK_THAT(std::stod(rows[1][3]), WithinAbs(0.5, 1e-12));
    CHECK_THAT(std::stod(rows[1][4]), WithinAbs(0.5, 1e-12));
    CHECK_THAT(std::stod(rows[1][5]), WithinRel(0.1, 1e-11));

    const auto product = invoke({"bounds", "--spin-f", "1", "--n", "10"});
    REQUIRE(product.code == kExitSuccess);
    CHECK_THAT(std::stod(parse_csv(product.out)[1][5]), WithinRel(1.0 / std::sqrt(10.0), 1e-11));

    const auto uniform = invoke({"bounds", "--spin-f", "1", "--n", "10", "--family", "uniform"});
    REQUIRE(uniform.code == kExitSuccess);
    CHECK_THAT(std::stod(parse_csv(uniform.out)[1][5]), WithinRel(std::sqrt(9.0 / 80.0), 1e-11));

    const auto custom = invoke({"bounds", "--spin-f", "1", "--n-list", "4,16", "--dist", "0.4,0.2,0.4"});
    REQUIRE(custom.code == kExitSuccess);
    rows = parse_csv(custom.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][1] == "4");
    CHECK(rows[2][1] == "16");
    CHECK_THAT(std::stod(rows[2][5]), WithinRel(1.0 / std::sqrt(4.0 * 16.0 * 0.16), 1e-11));
}

TEST_CASE("usage errors exit with 2", "[cli]") {
    CHECK(invoke({"bounds", "--spin-f", "0"}).code == kExitUsage);
    CHECK(invoke({"bounds", "--spin-f", "0.7"}).code == kExitUsage);
    CHECK(invoke({"bounds", "--family", "squeezed"}).code == kExitUsage);
    CHECK(invoke({"bounds", "--family", "uniform", "--dist", "1,0,0"}).code == kExitUsage);
    CHECK(invoke({"bounds", "--dist", "1,0"}).code == kExitUsage);
    CHECK(invoke({"bounds", "--dist", "1,0,0"}).code == kExitUsage);
    CHECK(invoke({"figure", "fig9"}).code == kExitUsage);
    CHECK(invoke({"figure"}).code == kExitUsage);
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"frobnicate"}).code == kExitUsage);
    CHECK(invoke({"smd", "--n", "7"}).code == kExitUsage);
    CHECK(invoke({"smd", "--n", "10", "--n-list", "10,20"}).code == kExitUsage);
    CHECK(invoke({"smd", "--n", "ten"}).code == kExitUsage);
    CHECK(invoke({"qpt", "--n", "4", "--c2", "1"}).code == kExitUsage);
    CHECK(invoke({"qpt", "--n", "4", "--beta", "0"}).code == kExitUsage);
    CHECK(invoke({"noise", "--n", "4", "--sigma", "-1"}).code == kExitUsage);
    CHECK(invoke({"smd", "--n", "4", "--big-t", "0"}).code == kExitUsage);
    CHECK(invoke({"smd", "--n", "4", "--kappa-points", "1"}).code == kExitUsage);
    CHECK(invoke({"convert", "--kappa", "1", "--delta-e", "0"}).code == kExitUsage);
    CHECK(invoke({"smd", "--config", "/nonexistent/spinlsv.toml"}).code == kExitUsage);
    const auto bad = invoke({"figure", "fig9"});
    CHECK_THAT(bad.err, ContainsSubstring("fig9"));
}

TEST_CASE("help exits with 0", "[cli]") {
    const auto help = invoke({"--help"});
    CHECK(help.code == kExitSuccess);
    CHECK_THAT(help.out, ContainsSubstring("--n-list"));
}

TEST_CASE("convert examples", "[cli]") {
    const auto zero = invoke({"convert", "--kappa", "0"});
    REQUIRE(zero.code == kExitSuccess);
    auto rows = parse_csv(zero.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"kappa", "delta_e_over_hc_hz", "delta_jz2", "c02"});
    CHECK(std::stod(rows[1][3]) == 0.0);

    const auto one = invoke({"convert", "--kappa", format_number(2.0 * std::numbers::pi * 8.6e15)});
    REQUIRE(one.code == kExitSuccess);
    CHECK_THAT(std::stod(parse_csv(one.out)[1][3]), WithinRel(1.0, 1e-11));
}

TEST_CASE("CSV format", "[cli]") {
    const auto run = invoke({"smd", "--n-list", "4,6,8", "--t-points", "20", "--kappa-points", "11"});
    REQUIRE(run.code == kExitSuccess);
    CHECK(run.out.find('\r') == std::string::npos);
    REQUIRE(!run.out.empty());
    CHECK(run.out.back() == '\n');
    const auto rows = parse_csv(run.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"N", "delta_kappa_min", "t_opt", "kappa_opt"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 4);
        CHECK(rows[i][1] == format_number(std::stod(rows[i][1])));
    }
    CHECK_THAT(run.err, ContainsSubstring("fit:"));
}

TEST_CASE("flags override the config file", "[cli]") {
    const auto dir = scratch_dir();
    const auto config = dir / "bounds.toml";
    {
        std::ofstream file(config);
        file << "spin-f = 2\nn = 12\nfamily = \"ghz\"\n";
    }
    const auto from_file = invoke({"bounds", "--config", config.string()});
    REQUIRE(from_file.code == kExitSuccess);
    auto rows = parse_csv(from_file.out);
    CHECK(rows[1][0] == "2");
    CHECK(rows[1][1] == "12");
    CHECK(rows[1][2] == "ghz");

    const auto overridden = invoke({"bounds", "--config", config.string(), "--n", "5", "--family", "product"});
    REQUIRE(overridden.code == kExitSuccess);
    rows = parse_csv(overridden.out);
    CHECK(rows[1][0] == "2");
    CHECK(rows[1][1] == "5");
    CHECK(rows[1][2] == "product");

    const auto list = invoke({"bounds", "--config", config.string(), "--n-list", "3,4"});
    REQUIRE(list.code == kExitSuccess);
    CHECK(parse_csv(list.out).size() == 3);

    const auto defaults = invoke({"bounds"});
    REQUIRE(defaults.code == kExitSuccess);
    rows = parse_csv(defaults.out);
    CHECK(rows[1][0] == "1");
    CHECK(rows[1][1] == "10");
    CHECK(rows[1][2] == "product");
}

TEST_CASE("identical arguments give byte-identical output", "[cli]") {
    const std::vector<std::string> args = {"superposition", "--n-list", "6,10,14", "--t-points", "25",
                                           "--kappa-points", "21"};
    const auto first = invoke(args);
    const auto second = invoke(args);
    REQUIRE(first.code == kExitSuccess);
    CHECK(first.out == second.out);
    CHECK(first.err == second.err);

    const std::vector<std::string> qpt = {"qpt", "--n", "4", "--beta", "0.5", "--kappa-points", "11"};
    const auto q1 = invoke(qpt);
    REQUIRE(q1.code == kExitSuccess);
    CHECK(q1.out == invoke(qpt).out);
    CHECK(parse_csv(q1.out)[0] == std::vector<std::string>{"N", "beta", "delta_kappa_min", "kappa_opt", "sql"});
}

TEST_CASE("--out writes the CSV to a file", "[cli]") {
    const auto path = scratch_dir() / "bounds.csv";
    std::filesystem::remove(path);
    const auto run = invoke({"bounds", "--n", "10", "--out", path.string()});
    REQUIRE(run.code == kExitSuccess);
    CHECK(run.out.find("delta_kappa") == std::string::npos);
    CHECK(slurp(path) == invoke({"bounds", "--n", "10"}).out);

    const auto missing = invoke({"bounds", "--out", "/nonexistent-dir/x/bounds.csv"});
    CHECK(missing.code == kExitComputation);
}

TEST_CASE("noise command", "[cli]") {
    const auto run = invoke({"noise", "--n", "4", "--beta", "0.5", "--sigma", "0,0.5,1", "--kappa-points", "11"});
    REQUIRE(run.code == kExitSuccess);
    const auto rows = parse_csv(run.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"N", "sigma", "delta_kappa_min", "sql"});
    double previous = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double value = std::stod(rows[i][2]);
        CHECK(value >= previous);
        previous = value;
        CHECK_THAT(std::stod(rows[i][3]), WithinRel(0.5, 1e-11));
    }
}
