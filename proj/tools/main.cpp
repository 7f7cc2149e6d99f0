// lti-ident: kernel-based LTI impulse-response identification CLI.
//
//   experiment --out <dir> [--config <file>]   reproduce the benchmark study
//   identify   --input <csv> --data <csv> --kernel <spec> ...   one-off fit
//   diagnose   --kernel <spec> [--horizons ...]   stability / degree report
//
// Exit codes: 0 success, 1 numerical failure, 2 usage or file error.

#include <CLI11.hpp>
#include <filesystem>
#include <iomanip>
#include <iostream>

#include "lti/diagnostics.hpp"
#include "lti/experiment.hpp"
#include "lti/io.hpp"
#include "lti/mkl.hpp"
#include "lti/solver.hpp"

namespace fs = std::filesystem;
using namespace lti;

namespace {

struct IdentifyArgs {
    std::string input_path, data_path, kernel_text, out_dir;
    double lambda = 0.0;
    bool use_gcv = false;
    bool use_mkl = false;
    bool dump_gram = false;
    double grid_min = 0.0, grid_max = 1.0;
    int grid_count = 201;
};

std::vector<double> linear_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return g;
}

int run_experiment_cmd(const std::string& config_path,
                       const std::string& out_dir) {
    ExperimentConfig cfg;
    if (!config_path.empty())
        cfg = ExperimentConfig::parse(read_config_file(config_path), config_path);
    fs::create_directories(out_dir);
    ExperimentReport report = run_experiment(cfg, &std::cerr);
    write_report_csv((fs::path(out_dir) / "report.csv").string(), report);
    write_summary_csv((fs::path(out_dir) / "summary.csv").string(), report);
    int failures = 0;
    for (int r : cfg.r_values) failures += report.excluded(r);
    if (failures > 0)
        std::cerr << failures << " run(s) failed and were excluded\n";
    std::cout << "wrote " << out_dir << "/report.csv and summary.csv\n";
    return failures == static_cast<int>(report.runs.size()) ? 1 : 0;
}

int run_identify_cmd(const IdentifyArgs& args) {
    PiecewiseConstantSignal u = read_signal_csv(args.input_path);
    Dataset data = read_dataset_csv(args.data_path);
    KernelSpec spec = KernelSpec::parse(args.kernel_text);
    std::vector<double> times;
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.samples.size()));
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        times.push_back(data.samples[i].first);
        y(static_cast<Eigen::Index>(i)) = data.samples[i].second;
    }

    fs::create_directories(args.out_dir);
    QuadratureConfig quad;
    IdentifiedModel model;
    model.u = u;
    model.times = times;
    model.quad = quad;

    if (args.use_mkl) {
        // treat each atom of the spec as one dictionary element
        KernelDictionary dict;
        for (const auto& atom : spec.atoms) {
            KernelSpec basis = spec;
            basis.atoms = {{1.0, atom.omega}};
            dict.basis.push_back(basis);
            dict.grams.push_back(assemble_gram(basis, u, times, quad));
        }
        normalize_dictionary(dict);
        GramMatrix uniform;
        uniform.times = times;
        uniform.entries = Eigen::MatrixXd::Zero(y.size(), y.size());
        for (const auto& g : dict.grams) uniform.entries += g.entries;
        uniform.entries /= static_cast<double>(dict.grams.size());
        MklOptions opts;
        opts.lambda = args.use_gcv
                          ? select_lambda(uniform, y, log_lambda_grid()).selected
                          : args.lambda;
        MklModel mkl = fit_mkl(dict, y, opts);
        model.spec = mixture_spec(dict, mkl.d);
        model.c = mkl.c;
        model.lambda = mkl.lambda;
        std::vector<double> omegas;
        for (const auto& atom : spec.atoms) omegas.push_back(atom.omega);
        write_weights_csv((fs::path(args.out_dir) / "weights.csv").string(),
                          omegas, mkl.d);
        if (args.dump_gram)
            write_gram_csv((fs::path(args.out_dir) / "gram.csv").string(),
                           uniform);
    } else {
        GramMatrix K = assemble_gram(spec, u, times, quad);
        model.spec = spec;
        model.lambda = args.use_gcv
                           ? select_lambda(K, y, log_lambda_grid()).selected
                           : args.lambda;
        model.c = fit_rls(K, y, model.lambda);
        if (args.dump_gram)
            write_gram_csv((fs::path(args.out_dir) / "gram.csv").string(), K);
    }

    write_model_csv((fs::path(args.out_dir) / "model.csv").string(),
                    model.spec.to_string(), model.lambda, times, model.c);
    std::vector<double> grid =
        linear_grid(args.grid_min, args.grid_max, args.grid_count);
    std::vector<double> h_curve, y_curve;
    for (double t : grid) {
        h_curve.push_back(eval_impulse_response(model, t));
        y_curve.push_back(predict_output(model, t));
    }
    write_curve_csv((fs::path(args.out_dir) / "impulse.csv").string(), "t,h",
                    grid, h_curve);
    write_curve_csv((fs::path(args.out_dir) / "output.csv").string(), "t,y",
                    grid, y_curve);
    std::cout << "wrote model.csv, impulse.csv, output.csv to " << args.out_dir
              << '\n';
    return 0;
}

int run_diagnose_cmd(const std::string& kernel_text,
                     std::vector<double> horizons, const std::string& csv_path) {
    KernelSpec spec = KernelSpec::parse(kernel_text);
    if (horizons.empty()) horizons = {5.0, 10.0, 20.0, 40.0};
    StabilityReport rep = stability_trend(spec, horizons);

    std::cout << "kernel: " << spec.to_string() << "\n\n";
    std::cout << std::left << std::setw(12) << "horizon" << std::setw(18)
              << "l1_mass" << std::setw(18) << "probe_h1" << '\n';
    for (std::size_t i = 0; i < rep.horizons.size(); ++i)
        std::cout << std::left << std::setw(12) << rep.horizons[i]
                  << std::setw(18) << rep.l1_values[i] << std::setw(18)
                  << rep.lemma2_values[i] << '\n';
    std::cout << "verdict: " << to_string(rep.verdict) << "\n\n";

    DegreeProbe probe = relative_degree_probe(spec, 1.0, 4, 1e-4);
    std::cout << std::left << std::setw(12) << "order" << std::setw(18)
              << "derivative" << '\n';
    for (std::size_t i = 0; i < probe.derivative_estimates.size(); ++i)
        std::cout << std::left << std::setw(12) << i << std::setw(18)
                  << probe.derivative_estimates[i] << '\n';
    if (probe.estimated_degree > 0)
        std::cout << "relative degree: " << probe.estimated_degree << '\n';
    else
        std::cout << "relative degree: undefined up to probe order\n";

    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw ParseError(csv_path, 0, "cannot open file for writing");
        out << "horizon,l1_mass,probe_h1,verdict\n";
        for (std::size_t i = 0; i < rep.horizons.size(); ++i)
            out << format_double(rep.horizons[i]) << ','
                << format_double(rep.l1_values[i]) << ','
                << format_double(rep.lemma2_values[i]) << ','
                << to_string(rep.verdict) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel-based LTI system identification"};
    app.require_subcommand(1);

    std::string exp_config, exp_out;
    auto* exp = app.add_subcommand("experiment", "Run the benchmark study");
    exp->add_option("--config", exp_config, "key = value config file");
    exp->add_option("--out", exp_out, "output directory")->required();

    IdentifyArgs id;
    auto* ident = app.add_subcommand("identify", "Fit one model from CSV data");
    ident->add_option("--input", id.input_path, "input signal CSV (t,level)")
        ->required();
    ident->add_option("--data", id.data_path, "dataset CSV (t,y)")->required();
    ident->add_option("--kernel", id.kernel_text, "kernel spec string")
        ->required();
    auto* lam = ident->add_option("--lambda", id.lambda, "regularization");
    auto* gcv = ident->add_flag("--gcv", id.use_gcv, "select lambda by GCV");
    lam->excludes(gcv);
    ident->add_flag("--mkl", id.use_mkl,
                    "learn per-atom weights by multiple kernel learning");
    ident->add_flag("--dump-gram", id.dump_gram, "also write gram.csv");
    ident->add_option("--grid-min", id.grid_min, "curve grid start");
    ident->add_option("--grid-max", id.grid_max, "curve grid end");
    ident->add_option("--grid-count", id.grid_count, "curve grid points")
        ->check(CLI::PositiveNumber);
    ident->add_option("--out", id.out_dir, "output directory")->required();

    std::string diag_kernel, diag_csv;
    std::vector<double> diag_horizons;
    auto* diag = app.add_subcommand("diagnose", "Kernel stability and degree");
    diag->add_option("--kernel", diag_kernel, "kernel spec string")->required();
    diag->add_option("--horizons", diag_horizons, "truncation times");
    diag->add_option("--csv", diag_csv, "also write a CSV report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (exp->parsed()) return run_experiment_cmd(exp_config, exp_out);
        if (ident->parsed()) {
            if (!id.use_gcv && !(id.lambda > 0.0)) {
                std::cerr << "identify: provide --lambda > 0 or --gcv\n";
                return 2;
            }
            return run_identify_cmd(id);
        }
        if (diag->parsed())
            return run_diagnose_cmd(diag_kernel, diag_horizons, diag_csv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
