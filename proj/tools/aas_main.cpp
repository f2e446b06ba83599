// Command-line front end: single runs, the sweep tables, the enrichment
// comparison, and a self-check against the dense verification oracle.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aas/experiment.hpp"

namespace {

using namespace aas;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string type;
  std::string variant;
  double threshold = -1;
  long long fixed = -1;
  long long n = -1;
  long long n_side = -1;
  std::string residuals_path;
  std::string summary_path;
  std::string spectra_path;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON configuration file");
  cmd->add_option("--out", opts.out_path, "output path (stdout if omitted)");
  cmd->add_option("--type", opts.type, "coarse space type")
      ->check(CLI::IsMember({"subd", "layer"}));
  cmd->add_option("--variant", opts.variant, "preconditioner variant")
      ->check(CLI::IsMember({"add", "mlt"}));
  cmd->add_option("--threshold", opts.threshold, "eigenvalue threshold for adaptive enrichment");
  cmd->add_option("--fixed", opts.fixed, "fixed enrichment count per subdomain");
  cmd->add_option("--n", opts.n, "fine subdivisions per side");
  cmd->add_option("--nside", opts.n_side, "subdomains per side");
}

ExperimentConfig make_config(const CommonOptions& opts) {
  ExperimentConfig config;
  if (!opts.config_path.empty()) config = config_from_json_file(opts.config_path);
  if (!opts.type.empty()) {
    config.type = opts.type == "subd" ? CoarseSpaceType::Subd : CoarseSpaceType::Layer;
  }
  if (!opts.variant.empty()) {
    config.variant = opts.variant == "add" ? PreconditionerVariant::Additive
                                           : PreconditionerVariant::Multiplicative;
  }
  if (opts.threshold >= 0 && opts.fixed >= 0) {
    throw CLI::ValidationError("give either --threshold or --fixed, not both");
  }
  if (opts.threshold >= 0) config.policy = EnrichmentPolicy::with_threshold(opts.threshold);
  if (opts.fixed >= 0) config.policy = EnrichmentPolicy::with_fixed(opts.fixed);
  if (opts.n > 0) config.n = opts.n;
  if (opts.n_side > 0) config.n_side = opts.n_side;
  return config;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output path '" + out_path + "'");
  out << content;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

int run_verify(const CommonOptions& opts) {
  // Oracle suite on desk-scale instances: dense spectrum vs iterative
  // estimate, operator bounds, and the splitting identity.
  ExperimentConfig config = make_config(opts);
  if (opts.n <= 0) config.n = 18;
  if (opts.n_side <= 0) config.n_side = 3;

  const PipelineState state = run_pipeline(config);
  const auto& preconditioner = *state.preconditioner;
  const auto spectrum = dense_preconditioned_spectrum(
      state.stiffness.matrix, [&](const Vector& r) { return preconditioner.apply(r); });

  const Real estimate = state.report.condition_estimate;
  const Real kappa_gap = std::abs(estimate - spectrum.kappa) / spectrum.kappa;

  Vector worst = spectrum.eigenvectors.col(0);
  const auto splitting =
      check_stable_splitting(state.partition, state.dofs, state.stiffness, state.spectra, worst);

  const bool additive = config.variant == PreconditionerVariant::Additive;
  const bool kappa_ok = kappa_gap <= 0.05;
  const bool upper_ok = !additive || spectrum.lambda_max <= 2 + 1e-8;
  const bool reconstruction_ok = splitting.reconstruction_error <= 1e-12;
  const bool lower_ok = spectrum.lambda_min >= 1 / splitting.energy_ratio - 1e-8;

  nlohmann::json report{
      {"config_hash", config_hash(config)},
      {"oracle_kappa", spectrum.kappa},
      {"lanczos_kappa", estimate},
      {"kappa_relative_gap", kappa_gap},
      {"lambda_min", spectrum.lambda_min},
      {"lambda_max", spectrum.lambda_max},
      {"splitting_ratio", splitting.energy_ratio},
      {"splitting_reconstruction_error", splitting.reconstruction_error},
      {"checks",
       {{"lanczos_within_5_percent", kappa_ok},
        {"additive_lambda_max_at_most_2", upper_ok},
        {"splitting_reconstruction_exact", reconstruction_ok},
        {"lambda_min_bounded_by_splitting", lower_ok}}}};
  emit(opts.out_path, report.dump(2) + "\n");

  const bool all_ok = kappa_ok && upper_ok && reconstruction_ok && lower_ok;
  std::cerr << (all_ok ? "verify: all checks passed\n" : "verify: CHECKS FAILED\n");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Additive average Schwarz solver with spectrally enriched coarse spaces"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto* run_cmd = app.add_subcommand("run", "solve one configuration and report the result row");
  auto* table1_cmd =
      app.add_subcommand("table1", "mesh-ratio and coefficient-jump sweep (CSV)");
  auto* table2_cmd = app.add_subcommand("table2", "fixed enrichment count sweep (CSV)");
  auto* enrichment_cmd = app.add_subcommand(
      "enrichment", "per-subdomain enrichment counts for both coarse space types");
  auto* verify_cmd =
      app.add_subcommand("verify", "run the dense verification oracle on a small instance");
  for (auto* cmd : {run_cmd, table1_cmd, table2_cmd, enrichment_cmd, verify_cmd}) {
    add_common_options(cmd, opts);
  }
  bool enrichment_as_json = false;
  enrichment_cmd->add_flag("--json", enrichment_as_json, "emit JSON instead of CSV");

  run_cmd->add_option("--residuals", opts.residuals_path,
                      "write the relative residual history as CSV");
  run_cmd->add_option("--summary", opts.summary_path,
                      "write the coarse-space summary as JSON");
  enrichment_cmd->add_option("--spectra", opts.spectra_path,
                             "write the full per-subdomain spectra of both types as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const auto config = make_config(opts);
      const auto start = std::chrono::steady_clock::now();
      const auto state = run_pipeline(config);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit(opts.out_path, rows_to_csv({summarize_run(config, state, seconds)}));
      if (!opts.residuals_path.empty()) {
        std::ofstream out(opts.residuals_path);
        write_residual_csv(out, state.report);
      }
      if (!opts.summary_path.empty()) {
        std::ofstream out(opts.summary_path);
        out << coarse_summary_json(state.preconditioner->coarse(), state.spectra) << "\n";
      }
    } else if (table1_cmd->parsed()) {
      emit(opts.out_path, rows_to_csv(run_table1(make_config(opts))));
    } else if (table2_cmd->parsed()) {
      emit(opts.out_path, rows_to_csv(run_table2(make_config(opts))));
    } else if (enrichment_cmd->parsed()) {
      const auto config = make_config(opts);
      const auto comparison = run_enrichment_comparison(config);
      if (enrichment_as_json) {
        emit(opts.out_path, enrichment_json(comparison) + "\n");
      } else {
        std::ostringstream out;
        write_enrichment_csv(out, comparison);
        emit(opts.out_path, out.str());
      }
      if (!opts.spectra_path.empty()) {
        const auto mesh = build_mesh(config.n);
        const auto partition = build_partition(mesh, config.n_side);
        const auto field = build_coefficient(mesh, partition, config.geometry);
        const auto extrema = coefficient_extrema(partition, field);
        auto spectra =
            solve_subdomain_spectra(mesh, partition, field, extrema, CoarseSpaceType::Subd,
                                    config.policy);
        const auto layer =
            solve_subdomain_spectra(mesh, partition, field, extrema, CoarseSpaceType::Layer,
                                    config.policy);
        std::ofstream out(opts.spectra_path);
        out << "# type=subd\n";
        write_spectra_csv(out, spectra);
        out << "# type=layer\n";
        write_spectra_csv(out, layer);
      }
    } else if (verify_cmd->parsed()) {
      return run_verify(opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
