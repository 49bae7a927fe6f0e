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

#include "spinlsv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "spinlsv/bounds.hpp"
#include "spinlsv/protocols.hpp"

namespace spinlsv::cli {

namespace {

const std::vector<std::string> kFigures = {"fig4a", "fig4b", "fig5a", "fig5b", "fig6", "fig7"};

/// Noise widths of the Fig. 7 analog, in units of sqrt(N).
const std::vector<double> kSigmaFractions = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};

std::vector<int> even_range(int first, int last, int step) {
    std::vector<int> values;
    for (int n = first; n <= last; n += step) {
        values.push_back(n);
    }
    return values;
}

class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& stream) const {
        write_line(stream, header_);
        for (const auto& row : rows_) {
            write_line(stream, row);
        }
    }

  private:
    static void write_line(std::ostream& stream, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            stream << (i == 0 ? "" : ",") << cells[i];
        }
        stream << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Routes the CSV either to stdout or to the --out file.
class Output {
  public:
    Output(const RunConfig& config, std::ostream& out, std::ostream& err) : path_(config.out), out_(out), err_(err) {}

    void emit(const CsvTable& table) const {
        if (path_.empty()) {
            table.write(out_);
            return;
        }
        std::ofstream file(path_, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw std::runtime_error("cannot open output file " + path_);
        }
        table.write(file);
        if (!file) {
            throw std::runtime_error("failed writing output file " + path_);
        }
    }

    [[nodiscard]] std::ostream& summary() const { return path_.empty() ? err_ : out_; }

  private:
    std::string path_;
    std::ostream& out_;
    std::ostream& err_;
};

std::string format_int(long long value) { return std::to_string(value); }

void usage_check(bool condition, const std::string& message) {
    if (!condition) {
        throw UsageError(message);
    }
}

std::vector<int> resolve_atoms(const RunConfig& config, std::vector<int> fallback) {
    usage_check(!(config.atoms && config.atom_list), "--n and --n-list are mutually exclusive");
    std::vector<int> atoms = config.atoms ? std::vector<int>{*config.atoms}
                                          : config.atom_list.value_or(std::move(fallback));
    usage_check(!atoms.empty(), "the atom-number list is empty");
    return atoms;
}

std::vector<double> resolve_beta(const RunConfig& config, std::vector<double> fallback) {
    auto beta = config.beta.value_or(std::move(fallback));
    usage_check(!beta.empty(), "the beta list is empty");
    return beta;
}

double single_beta(const RunConfig& config, double fallback) {
    const auto beta = resolve_beta(config, {fallback});
    usage_check(beta.size() == 1, "this command takes a single --beta value");
    return beta.front();
}

void check_common(const RunConfig& config) {
    usage_check(config.t_points >= 1, "--t-points must be at least 1");
    usage_check(config.kappa_points >= 2, "--kappa-points must be at least 2");
    usage_check(config.eta > 0.0 && std::isfinite(config.eta), "--eta must be positive");
    usage_check(config.big_t > 0.0 && std::isfinite(config.big_t), "--big-t must be positive");
    if (config.sigma) {
        for (double s : *config.sigma) {
            usage_check(s >= 0.0 && std::isfinite(s), "--sigma values must be non-negative");
        }
    }
}

/// Runs a module validator and reports its complaint as a usage error.
void validate_or_usage(const std::function<void()>& validate) {
    try {
        validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void print_fit(const Output& output, std::span<const ScalingPoint> points, double big_t) {
    if (points.size() < 3) {
        return;
    }
    const FitResult fit = fit_scaling(points, big_t);
    output.summary() << "fit: ln(delta_kappa_min T) = " << format_number(fit.slope) << " ln(N) + "
                     << format_number(fit.intercept) << "  (rss " << format_number(fit.residual) << ", "
                     << fit.points << " points)\n";
}

int cmd_bounds(const RunConfig& config, const Output& output) {
    usage_check(config.spin_f >= 0.5, "--spin-f must be at least 1/2");
    const double twice = 2.0 * config.spin_f;
    usage_check(std::abs(twice - std::round(twice)) < 1e-12, "--spin-f must be a multiple of 1/2");
    usage_check(config.family == "product" || config.family == "ghz" || config.family == "uniform",
                "--family must be product, ghz or uniform");
    usage_check(!(config.family == "uniform" && config.dist), "--dist cannot be combined with --family uniform");
    usage_check(!(config.family == "uniform" && config.spin_f < 1.0), "the uniform bound requires --spin-f >= 1");
    const auto atoms = resolve_atoms(config, {10});
    for (int n : atoms) {
        usage_check(n >= 1, "atom numbers must be at least 1");
    }

    std::optional<SpinDistribution> dist;
    try {
        if (config.family == "uniform") {
            dist = SpinDistribution::uniform(config.spin_f);
        } else if (config.dist) {
            dist = SpinDistribution::from_weights(config.spin_f, *config.dist);
        } else {
            dist = optimal_distribution(config.spin_f);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("invalid distribution: ") + e.what());
    }

    const MomentPair m = moments(*dist);
    CsvTable table({"F", "N", "family", "M1", "M2", "delta_kappa"});
    for (int n : atoms) {
        double delta = 0.0;
        try {
            if (config.family == "uniform") {
                delta = qcrb_uniform(config.spin_f, n, config.big_t, config.eta);
            } else if (config.family == "ghz") {
                delta = qcrb_ghz(*dist, n, config.big_t, config.eta);
            } else {
                delta = qcrb_product(*dist, n, config.big_t, config.eta);
            }
        } catch (const std::domain_error& e) {
            throw UsageError(std::string("invalid distribution: ") + e.what());
        }
        table.add_row({format_number(config.spin_f), format_int(n), config.family, format_number(m.m1),
                       format_number(m.m2), format_number(delta)});
    }
    output.emit(table);
    return kExitSuccess;
}

int cmd_smd_family(const RunConfig& config, const Output& output, bool superposition) {
    const auto atoms = resolve_atoms(config, superposition ? even_range(10, 58, 8) : even_range(10, 60, 10));
    for (int n : atoms) {
        SmdConfig probe{n, config.chi, 2.0 * std::numbers::pi, 0.0, config.big_t};
        validate_or_usage([&] { probe.validate(); });
    }
    const auto t_grid = default_t_grid(config.t_points);
    const auto kappa_grid = default_kappa_grid(config.kappa_points, config.big_t);

    CsvTable table({"N", "delta_kappa_min", "t_opt", "kappa_opt"});
    std::vector<ScalingPoint> points;
    for (int n : atoms) {
        const Protocol protocol = superposition ? Protocol{SuperpositionProtocol{n, config.chi, config.big_t}}
                                                : Protocol{SmdEchoProtocol{n, config.chi, config.big_t}};
        const ScanResult scan = scan_optimal_precision(protocol, t_grid, kappa_grid);
        table.add_row({format_int(n), format_number(scan.delta_kappa_min), format_number(scan.t_opt),
                       format_number(scan.kappa_opt)});
        points.push_back({n, scan.delta_kappa_min});
    }
    output.emit(table);
    print_fit(output, points, config.big_t);
    return kExitSuccess;
}

QptConfig qpt_config(const RunConfig& config, int atoms, double beta) {
    QptConfig qpt;
    qpt.atoms = atoms;
    qpt.c2 = config.c2;
    qpt.q0 = config.q0;
    qpt.qf = config.qf;
    qpt.beta = beta;
    qpt.big_t = config.big_t;
    usage_check(config.start == "ground" || config.start == "fock", "--start must be ground or fock");
    qpt.start = config.start == "fock" ? QptStart::Fock : QptStart::GroundState;
    validate_or_usage([&] { qpt.validate(); });
    return qpt;
}

int cmd_qpt(const RunConfig& config, const Output& output, std::vector<int> default_atoms,
            std::vector<double> default_beta) {
    const auto atoms = resolve_atoms(config, std::move(default_atoms));
    const auto betas = resolve_beta(config, std::move(default_beta));
    std::vector<QptConfig> runs;
    for (double beta : betas) {
        for (int n : atoms) {
            runs.push_back(qpt_config(config, n, beta));
        }
    }
    const auto kappa_grid = default_kappa_grid(config.kappa_points, config.big_t);
    const NoiseModel noiseless[] = {NoiseModel{}};

    CsvTable table({"N", "beta", "delta_kappa_min", "kappa_opt", "sql"});
    std::vector<ScalingPoint> points;
    for (const auto& run : runs) {
        const QptPipeline pipeline(run);
        const ScanResult scan = scan_qpt_pipeline(pipeline, kappa_grid, noiseless).front();
        table.add_row({format_int(run.atoms), format_number(run.beta), format_number(scan.delta_kappa_min),
                       format_number(scan.kappa_opt), format_number(1.0 / std::sqrt(run.atoms))});
        points.push_back({run.atoms, scan.delta_kappa_min});
    }
    output.emit(table);
    if (betas.size() == 1) {
        print_fit(output, points, config.big_t);
    }
    return kExitSuccess;
}

int cmd_landscape(const RunConfig& config, const Output& output) {
    const auto atoms = resolve_atoms(config, {20});
    usage_check(atoms.size() == 1, "fig5b takes a single atom number");
    const QptConfig run = qpt_config(config, atoms.front(), single_beta(config, 0.01));
    const auto kappa_grid = default_kappa_grid(config.kappa_points, config.big_t);
    const NoiseModel noiseless[] = {NoiseModel{}};
    const QptPipeline pipeline(run);
    const ScanResult scan = scan_qpt_pipeline(pipeline, kappa_grid, noiseless).front();

    CsvTable table({"kappa", "delta_kappa"});
    for (std::size_t c = 0; c < kappa_grid.size(); ++c) {
        table.add_row({format_number(kappa_grid[c]), format_number(scan.surface(0, static_cast<Eigen::Index>(c)))});
    }
    output.emit(table);
    output.summary() << "minimum: delta_kappa " << format_number(scan.delta_kappa_min) << " at kappa T "
                     << format_number(scan.kappa_opt * config.big_t) << "\n";
    return kExitSuccess;
}

int cmd_noise(const RunConfig& config, const Output& output) {
    const auto atoms = resolve_atoms(config, {10, 20, 30, 40});
    const double beta = single_beta(config, 0.05);
    std::vector<QptConfig> runs;
    for (int n : atoms) {
        runs.push_back(qpt_config(config, n, beta));
    }
    const auto kappa_grid = default_kappa_grid(config.kappa_points, config.big_t);

    CsvTable table({"N", "sigma", "delta_kappa_min", "sql"});
    for (const auto& run : runs) {
        std::vector<NoiseModel> noises;
        if (config.sigma) {
            for (double s : *config.sigma) {
                noises.push_back({s});
            }
        } else {
            for (double f : kSigmaFractions) {
                noises.push_back({f * std::sqrt(run.atoms)});
            }
        }
        usage_check(!noises.empty(), "the sigma list is empty");
        const QptPipeline pipeline(run);
        const auto scans = scan_qpt_pipeline(pipeline, kappa_grid, noises);
        for (std::size_t k = 0; k < noises.size(); ++k) {
            table.add_row({format_int(run.atoms), format_number(noises[k].sigma),
                           format_number(scans[k].delta_kappa_min), format_number(1.0 / std::sqrt(run.atoms))});
        }
    }
    output.emit(table);
    return kExitSuccess;
}

int cmd_convert(const RunConfig& config, const Output& output) {
    usage_check(std::isfinite(config.kappa), "--kappa must be finite");
    double c02 = 0.0;
    try {
        c02 = kappa_to_c02(config.kappa, config.delta_e, config.delta_jz2);
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    CsvTable table({"kappa", "delta_e_over_hc_hz", "delta_jz2", "c02"});
    table.add_row({format_number(config.kappa), format_number(config.delta_e), format_number(config.delta_jz2),
                   format_number(c02)});
    output.emit(table);
    return kExitSuccess;
}

int cmd_figure(const RunConfig& config, const Output& output) {
    const auto& name = config.figure;
    if (name == "fig4a") {
        return cmd_smd_family(config, output, false);
    }
    if (name == "fig4b") {
        return cmd_smd_family(config, output, true);
    }
    if (name == "fig5a") {
        return cmd_qpt(config, output, {10, 20, 30, 40}, {0.01});
    }
    if (name == "fig5b") {
        return cmd_landscape(config, output);
    }
    if (name == "fig6") {
        return cmd_qpt(config, output, {10}, {0.01, 0.05, 0.1});
    }
    if (name == "fig7") {
        return cmd_noise(config, output);
    }
    throw UsageError("unknown figure '" + name + "'");
}

} // namespace

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

std::optional<RunConfig> parse_arguments(std::span<const std::string> args, std::ostream& out) {
    RunConfig config;
    CLI::App app{"Lorentz-symmetry-violation interferometry with spin-1 condensates", "spinlsv"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "Read key=value defaults from a file (flags take precedence)");

    int atoms = 0;
    std::vector<int> atom_list;
    std::vector<double> beta;
    std::vector<double> sigma;
    std::vector<double> dist;
    auto* n_opt = app.add_option("--n", atoms, "Atom number");
    auto* n_list_opt = app.add_option("--n-list", atom_list, "Comma-separated atom numbers")->delimiter(',');
    app.add_option("--chi", config.chi, "Spin-mixing strength chi");
    app.add_option("--c2", config.c2, "Spin-dependent interaction c2 (negative)");
    app.add_option("--q0", config.q0, "Initial quadratic Zeeman shift of the forward ramp");
    app.add_option("--qf", config.qf, "Final quadratic Zeeman shift of the reverse ramp");
    auto* beta_opt = app.add_option("--beta", beta, "Ramp rate(s), comma-separated")->delimiter(',');
    auto* sigma_opt = app.add_option("--sigma", sigma, "Detection-noise width(s) in atoms, comma-separated")
                          ->delimiter(',');
    app.add_option("--start", config.start, "Forward-ramp start: ground (q0 ground state) or fock (|0,N,0>)");
    app.add_option("--t-points", config.t_points, "Points of the t grid in (0, 2 pi]");
    app.add_option("--kappa-points", config.kappa_points, "Points of the kappa T grid in [-0.1 pi, 0.1 pi]");
    app.add_option("--eta", config.eta, "Number of repetitions eta");
    app.add_option("--big-t", config.big_t, "Interrogation time T");
    app.add_option("--out", config.out, "Write the CSV to this path instead of stdout");
    app.add_option("--spin-f", config.spin_f, "Single-atom spin length F (bounds)");
    app.add_option("--family", config.family, "product, ghz or uniform (bounds)");
    auto* dist_opt = app.add_option("--dist", dist, "Sublevel weights for m = -F..F, comma-separated (bounds)")
                         ->delimiter(',');
    app.add_option("--kappa", config.kappa, "LSV parameter kappa in rad/s (convert)");
    app.add_option("--delta-e", config.delta_e, "Delta E / (h C0^(2)) in Hz (convert)");
    app.add_option("--delta-jz2", config.delta_jz2, "Delta(j_z^2) (convert)");

    app.add_subcommand("bounds", "Quantum Cramer-Rao bounds for spin-F ensembles");
    app.add_subcommand("smd", "Spin-mixing echo scan over N");
    app.add_subcommand("superposition", "Superposition-input scan over N");
    app.add_subcommand("qpt", "Quantum-phase-transition ramp protocol over N and beta");
    app.add_subcommand("noise", "QPT protocol with Gaussian detection noise");
    app.add_subcommand("convert", "Convert kappa to the SME coefficient C0^(2)");
    auto* figure = app.add_subcommand("figure", "Run a preset figure scan with its default parameters");
    figure->add_option("name", config.figure, "fig4a | fig4b | fig5a | fig5b | fig6 | fig7")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (const auto* sub : app.get_subcommands()) {
        config.command = sub->get_name();
    }
    // A command-line --n or --n-list replaces the other one when it came from the config file.
    const auto on_command_line = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    const bool n_flag = on_command_line("--n");
    const bool n_list_flag = on_command_line("--n-list");
    if (n_opt->count() > 0 && !(n_list_flag && !n_flag)) {
        config.atoms = atoms;
    }
    if (n_list_opt->count() > 0 && !(n_flag && !n_list_flag)) {
        config.atom_list = atom_list;
    }
    if (beta_opt->count() > 0) {
        config.beta = beta;
    }
    if (sigma_opt->count() > 0) {
        config.sigma = sigma;
    }
    if (dist_opt->count() > 0) {
        config.dist = dist;
    }
    if (config.command == "figure" &&
        std::find(kFigures.begin(), kFigures.end(), config.figure) == kFigures.end()) {
        throw UsageError("unknown figure '" + config.figure + "'; expected fig4a, fig4b, fig5a, fig5b, fig6 or fig7");
    }
    return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const Output output(config, out, err);
    check_common(config);
    if (config.command == "bounds") {
        return cmd_bounds(config, output);
    }
    if (config.command == "smd") {
        return cmd_smd_family(config, output, false);
    }
    if (config.command == "superposition") {
        return cmd_smd_family(config, output, true);
    }
    if (config.command == "qpt") {
        return cmd_qpt(config, output, {10, 20, 30, 40}, {0.01});
    }
    if (config.command == "noise") {
        return cmd_noise(config, output);
    }
    if (config.command == "convert") {
        return cmd_convert(config, output);
    }
    if (config.command == "figure") {
        return cmd_figure(config, output);
    }
    throw UsageError("unknown command '" + config.command + "'");
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    try {
        const auto config = parse_arguments(args, out);
        if (!config) {
            return kExitSuccess;
        }
        return run(*config, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitComputation;
    }
}

} // namespace spinlsv::cli
