//! Command-line front end: sample simulation, pointwise adaptive estimation,
//! oracle bandwidth profiles, bandwidth grids and Monte Carlo risk tables.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ikde/kv.hpp"
#include "ikde/lepski.hpp"
#include "ikde/models.hpp"
#include "ikde/oracle_bandwidth.hpp"
#include "ikde/risk_bench.hpp"

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

//! Opens `path` for writing when non-empty, otherwise hands back std::cout.
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

struct SimulateArgs {
    std::string model;
    std::int64_t n = 1000;
    std::uint64_t seed = 1;
    std::string output;
};

int run_simulate(const SimulateArgs& args) {
    if (args.n < 1) throw std::invalid_argument("simulate: n must be >= 1");
    const ikde::DensityModel& model = ikde::make_model(args.model);
    OutputTarget out(args.output);
    ikde::Rng rng(args.seed);
    for (std::int64_t i = 0; i < args.n; ++i) {
        out.stream() << fmt(model.draw(rng)) << '\n';
    }
    std::cerr << "model = " << model.name << ", n = " << args.n << ", seed = " << args.seed
              << "\n";
    std::cerr << "irregularities =";
    for (double s : model.irregularities) std::cerr << ' ' << fmt(s);
    std::cerr << "\ni0 = " << fmt(model.default_i0.lo) << ", " << fmt(model.default_i0.hi)
              << "\n";
    return 0;
}

struct EstimateArgs {
    std::string sample_path;
    std::optional<double> from;
    std::optional<double> to;
    std::size_t points = 512;
    std::vector<double> at; // explicit evaluation points override the grid
    double a = 2.0;
    double d1 = 1.0;
    double d2 = 0.4;
    std::string sup_mode = "plug_in";
    double sup_bound = 0.0;
    std::string kernel = "order4";
    std::string output;
    bool trace = false;
};

int run_estimate(const EstimateArgs& args) {
    const ikde::Sample sample = ikde::Sample::from_file(args.sample_path);
    ikde::SelectorConfig config;
    config.kernel = ikde::kernel_by_name(args.kernel);
    config.d1 = args.d1;
    config.d2 = args.d2;
    if (args.sup_mode == "plug_in") {
        config.sup_mode = ikde::SupNormMode::plug_in;
    } else if (args.sup_mode == "known_bound") {
        config.sup_mode = ikde::SupNormMode::known_bound;
    } else {
        throw std::invalid_argument("estimate: --sup-mode must be plug_in or known_bound");
    }
    config.sup_bound = args.sup_bound;
    const ikde::BandwidthGrid grid =
        ikde::BandwidthGrid::build(static_cast<std::int64_t>(sample.size()), args.a);
    const ikde::LepskiSelector selector(sample, config, grid);

    std::vector<double> xs = args.at;
    if (xs.empty()) {
        const double lo = args.from.value_or(sample.min());
        const double hi = args.to.value_or(sample.max());
        xs = ikde::EvaluationGrid::uniform(lo, hi, args.points).points;
    }

    OutputTarget out(args.output);
    out.stream() << "# sample = " << args.sample_path << ", n = " << sample.size() << "\n";
    out.stream() << "# kernel = " << args.kernel << ", a = " << fmt(args.a) << ", d1 = "
                 << fmt(args.d1) << ", d2 = " << fmt(args.d2) << ", J = " << grid.J << "\n";
    out.stream() << "# sup_norm = " << fmt(selector.sup_norm()) << " ("
                 << (config.sup_mode == ikde::SupNormMode::plug_in ? "plug_in" : "known_bound")
                 << ")\n";
    out.stream() << "x,fhat,h_selected,fallback\n";
    for (double x : xs) {
        ikde::SelectionTrace tr;
        double h = 0.0;
        const double fhat = selector.estimate_at(x, &h, &tr);
        out.stream() << fmt(x) << ',' << fmt(fhat) << ',' << fmt(h) << ','
                     << (tr.fallback ? 1 : 0) << '\n';
        if (args.trace) std::cerr << tr.to_line() << "\n";
    }
    return 0;
}

struct OracleArgs {
    std::string spec_path;
    std::int64_t n = 0;
    std::string kernel = "order4";
    std::optional<double> from;
    std::optional<double> to;
    std::size_t points = 512;
    std::vector<double> at;
    std::string output;
};

int run_oracle(const OracleArgs& args) {
    const ikde::SmoothnessSpec spec = ikde::SmoothnessSpec::from_kv(
        ikde::parse_kv_file(args.spec_path));
    spec.validate();
    if (args.n < 2) throw std::invalid_argument("oracle: --n must be >= 2");
    const ikde::Kernel& kernel = ikde::kernel_by_name(args.kernel);

    std::vector<double> xs = args.at;
    if (xs.empty()) {
        if (!args.from || !args.to) {
            throw std::invalid_argument("oracle: need --from/--to or explicit --x points");
        }
        xs = ikde::EvaluationGrid::uniform(*args.from, *args.to, args.points).points;
    }

    OutputTarget out(args.output);
    out.stream() << "# spec = " << args.spec_path << ", kind = " << ikde::to_string(spec.kind)
                 << ", n = " << args.n << "\n";
    if (spec.kind != ikde::SmoothnessKind::unbounded_density) {
        out.stream() << "# kernel = " << args.kernel << ", kappa = "
                     << fmt(ikde::kappa(spec, kernel)) << "\n";
    }
    out.stream() << "x,h0\n";
    for (double x : xs) {
        out.stream() << fmt(x) << ',' << fmt(ikde::oracle_bandwidth(x, spec, kernel, args.n))
                     << '\n';
    }
    return 0;
}

struct GridArgs {
    std::int64_t n = 0;
    double a = 2.0;
};

int run_grid(const GridArgs& args) {
    const ikde::BandwidthGrid grid = ikde::BandwidthGrid::build(args.n, args.a);
    const double ln3 = std::pow(std::log(static_cast<double>(args.n)), 3.0);
    std::cout << "# n = " << args.n << ", a = " << fmt(args.a) << ", J = " << grid.J
              << ", ln^3(n) = " << fmt(ln3) << "\n";
    std::cout << "j,h\n";
    for (int j = 0; j <= grid.J; ++j) {
        std::cout << j << ',' << fmt(grid.values[static_cast<std::size_t>(j)]) << '\n';
    }
    return 0;
}

struct BenchArgs {
    std::string config_path;
    std::string csv_path;
    std::string json_path;
    int threads = -1; // -1 = keep the config file's value
    bool timing = false;
};

int run_bench(const BenchArgs& args) {
    ikde::BenchConfig config = ikde::BenchConfig::from_file(args.config_path);
    if (args.threads >= 0) config.threads = args.threads;
    if (args.timing) config.timing = true;

    ikde::RiskReport report = ikde::run_benchmark(config);
    // Provenance names only computation-defining inputs, so byte-identical
    // reruns stay byte-identical whatever --threads was.
    report.invocation = "ikde bench --config " + args.config_path;

    std::cout << report.table();
    if (!args.csv_path.empty()) {
        std::ofstream csv(args.csv_path);
        if (!csv) throw std::runtime_error("cannot open output file '" + args.csv_path + "'");
        report.write_csv(csv);
    }
    if (!args.json_path.empty()) {
        std::ofstream json(args.json_path);
        if (!json) throw std::runtime_error("cannot open output file '" + args.json_path + "'");
        report.write_json(json);
    }
    return report.any_batch_failed() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel density estimation with pointwise adaptive bandwidths"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Draw a sample from a built-in model");
    simulate->add_option("--model", sim.model, "model name")->required();
    simulate->add_option("--n", sim.n, "sample size")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--output", sim.output, "output file (default stdout)");

    EstimateArgs est;
    CLI::App* estimate =
        app.add_subcommand("estimate", "Adaptive density estimate over a point grid");
    estimate->add_option("--sample", est.sample_path, "sample file, one value per line")
        ->required();
    estimate->add_option("--from", est.from, "grid start (default sample minimum)");
    estimate->add_option("--to", est.to, "grid end (default sample maximum)");
    estimate->add_option("--points", est.points, "grid size (default 512)");
    estimate->add_option("--x", est.at, "explicit evaluation points (overrides the grid)");
    estimate->add_option("--a", est.a, "bandwidth grid ratio (default 2)");
    estimate->add_option("--d1", est.d1, "threshold constant D1 (default 1)");
    estimate->add_option("--d2", est.d2, "log factor constant D2 (default 0.4)");
    estimate->add_option("--sup-mode", est.sup_mode, "plug_in or known_bound");
    estimate->add_option("--sup-bound", est.sup_bound, "density sup-norm when known");
    estimate->add_option("--kernel", est.kernel, "kernel name (default order4)");
    estimate->add_option("--output", est.output, "output file (default stdout)");
    estimate->add_flag("--trace", est.trace, "print per-point selection traces to stderr");

    OracleArgs ora;
    CLI::App* oracle = app.add_subcommand("oracle", "Oracle bandwidth profile from a spec file");
    oracle->add_option("--spec", ora.spec_path, "smoothness spec file (key = value)")
        ->required();
    oracle->add_option("--n", ora.n, "sample size")->required();
    oracle->add_option("--kernel", ora.kernel, "kernel name (default order4)");
    oracle->add_option("--from", ora.from, "grid start");
    oracle->add_option("--to", ora.to, "grid end");
    oracle->add_option("--points", ora.points, "grid size (default 512)");
    oracle->add_option("--x", ora.at, "explicit evaluation points (overrides the grid)");
    oracle->add_option("--output", ora.output, "output file (default stdout)");

    GridArgs grd;
    CLI::App* grid = app.add_subcommand("grid", "Print the geometric bandwidth grid");
    grid->add_option("--n", grd.n, "sample size")->required();
    grid->add_option("--a", grd.a, "grid ratio (default 2)");

    BenchArgs ben;
    CLI::App* bench = app.add_subcommand("bench", "Monte Carlo risk study from a config file");
    bench->add_option("--config", ben.config_path, "bench config file (key = value)")
        ->required();
    bench->add_option("--csv", ben.csv_path, "write the risk table as CSV");
    bench->add_option("--json", ben.json_path, "write the full report as JSON");
    bench->add_option("--threads", ben.threads, "worker threads (overrides the config)");
    bench->add_flag("--timing", ben.timing, "include measured runtimes in CSV/JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*estimate) return run_estimate(est);
        if (*oracle) return run_oracle(ora);
        if (*grid) return run_grid(grd);
        if (*bench) return run_bench(ben);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
