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

#pragma once

#include <optional>
#include <stdexcept>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace spinlsv::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Every parameter a command can consume. Optional fields fall back to the
/// defaults of the selected command or figure when neither a flag nor the
/// config file sets them.
struct RunConfig {
    std::string command;
    std::string figure;

    std::optional<int> atoms;
    std::optional<std::vector<int>> atom_list;
    double chi = 1.0;
    double c2 = -1.0;
    double q0 = 3.0;
    double qf = 3.0;
    std::optional<std::vector<double>> beta;
    std::optional<std::vector<double>> sigma;
    std::string start = "ground";
    int t_points = 200;
    int kappa_points = 101;
    double eta = 1.0;
    double big_t = 1.0;
    std::string out;

    double spin_f = 1.0;
    std::string family = "product";
    std::optional<std::vector<double>> dist;

    double kappa = 0.0;
    double delta_e = 8.6e15;
    double delta_jz2 = 1.0;
};

/// Thrown for malformed command lines and invalid parameter values.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parses arguments (without the program name). Flags override values
/// read through --config, which override the built-in defaults. Returns
/// std::nullopt after printing help to `out`.
std::optional<RunConfig> parse_arguments(std::span<const std::string> args, std::ostream& out);

/// Runs one command. CSV goes to `out` unless --out names a file; fit
/// summaries go to `out` when the CSV went to a file and to `err` otherwise.
/// Returns kExitSuccess, kExitUsage or kExitComputation.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_arguments followed by run, with errors reported on `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Formats a value with 12 significant digits.
std::string format_number(double value);

} // namespace spinlsv::cli
