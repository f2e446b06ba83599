#include "aas/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace aas {

namespace {

constexpr Real kPi = 3.14159265358979323846;

using nlohmann::json;

json geometry_to_json(const CoefficientGeometry& g) {
  return json{{"alpha_background", g.alpha_background},
              {"alpha_channel", g.alpha_channel},
              {"alpha_inclusion", g.alpha_inclusion},
              {"channel_width_fraction", g.channel_width_fraction},
              {"inclusion_side_fraction", g.inclusion_side_fraction},
              {"channels_continuous", g.channels_continuous}};
}

template <class T>
void read_key(const json& j, const char* key, T& value) {
  if (j.contains(key)) value = j.at(key).get<T>();
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    bool found = false;
    for (const char* key : known) {
      if (item.key() == key) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

CoefficientGeometry geometry_from_json(const json& j, const CoefficientGeometry& defaults) {
  reject_unknown_keys(j,
                      {"alpha_background", "alpha_channel", "alpha_inclusion",
                       "channel_width_fraction", "inclusion_side_fraction",
                       "channels_continuous"},
                      "geometry");
  CoefficientGeometry g = defaults;
  read_key(j, "alpha_background", g.alpha_background);
  read_key(j, "alpha_channel", g.alpha_channel);
  read_key(j, "alpha_inclusion", g.alpha_inclusion);
  read_key(j, "channel_width_fraction", g.channel_width_fraction);
  read_key(j, "inclusion_side_fraction", g.inclusion_side_fraction);
  read_key(j, "channels_continuous", g.channels_continuous);
  return g;
}

CoarseSpaceType type_from_string(const std::string& s) {
  if (s == "subd") return CoarseSpaceType::Subd;
  if (s == "layer") return CoarseSpaceType::Layer;
  throw std::invalid_argument("config: type must be 'subd' or 'layer', got '" + s + "'");
}

PreconditionerVariant variant_from_string(const std::string& s) {
  if (s == "add") return PreconditionerVariant::Additive;
  if (s == "mlt") return PreconditionerVariant::Multiplicative;
  throw std::invalid_argument("config: variant must be 'add' or 'mlt', got '" + s + "'");
}

void validate(const ExperimentConfig& config) {
  if (config.n < 2) throw std::invalid_argument("config: n must be at least 2");
  if (config.n_side < 1) throw std::invalid_argument("config: n_side must be at least 1");
  if (config.n % config.n_side != 0) {
    throw std::invalid_argument("config: n must be divisible by n_side");
  }
  if (config.n / config.n_side < 2) {
    throw std::invalid_argument("config: subdomains need interior nodes (n/n_side >= 2)");
  }
  if (!(config.tolerance > 0)) throw std::invalid_argument("config: tolerance must be positive");
  for (const auto& [n, n_side] : config.mesh_sweep) {
    if (n_side < 1 || n % n_side != 0) {
      throw std::invalid_argument("config: mesh_sweep pair (" + std::to_string(n) + ", " +
                                  std::to_string(n_side) + ") is not divisible");
    }
  }
}

Index sweep_thread_count() {
  const char* env = std::getenv("AAS_THREADS");
  if (!env) return 1;
  const long value = std::strtol(env, nullptr, 10);
  return value >= 1 ? static_cast<Index>(value) : 1;
}

// Runs one job per index on the requested number of threads; results land
// at their own index, so the output order is deterministic.
template <class Job>
void parallel_for(Index count, Job&& job) {
  const Index threads = std::min<Index>(sweep_thread_count(), count);
  if (threads <= 1) {
    for (Index i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (Index t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (Index i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
    });
  }
  for (auto& thread : pool) thread.join();
}

std::string policy_string(const EnrichmentPolicy& policy) {
  std::ostringstream out;
  if (policy.kind == EnrichmentPolicy::Kind::Threshold) {
    out << "threshold=" << policy.threshold;
  } else {
    out << "fixed=" << policy.fixed;
  }
  return out.str();
}

ResultRow row_from_state(const ExperimentConfig& config, const PipelineState& state,
                         double seconds) {
  ResultRow row;
  row.hash = config_hash(config);
  row.n = config.n;
  row.n_side = config.n_side;
  row.alpha_channel = config.geometry.alpha_channel;
  row.alpha_inclusion = config.geometry.alpha_inclusion;
  row.type = to_string(config.type);
  row.variant = to_string(config.variant);
  row.policy = policy_string(config.policy);
  row.iterations = state.report.iterations;
  row.condition = state.report.condition_estimate;
  row.converged = state.report.converged;
  row.coarse_dimension = state.report.coarse_dimension;
  row.enrichment_counts = state.report.enrichment_counts;
  row.enrichment_total =
      std::accumulate(row.enrichment_counts.begin(), row.enrichment_counts.end(), Index(0));
  row.seconds = seconds;
  return row;
}

ResultRow error_row(const ExperimentConfig& config, const std::string& message) {
  ResultRow row;
  row.hash = config_hash(config);
  row.n = config.n;
  row.n_side = config.n_side;
  row.alpha_channel = config.geometry.alpha_channel;
  row.alpha_inclusion = config.geometry.alpha_inclusion;
  row.type = to_string(config.type);
  row.variant = to_string(config.variant);
  row.policy = policy_string(config.policy);
  row.error = message;
  return row;
}

}  // namespace

Real default_load(Real x, Real y) {
  return 2 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y);
}

ExperimentConfig config_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  reject_unknown_keys(j,
                      {"n", "n_side", "geometry", "type", "variant", "threshold", "fixed",
                       "tolerance", "max_iterations", "residual_norm", "mesh_sweep", "jump_sweep",
                       "fixed_counts"},
                      "top level");
  ExperimentConfig config;
  read_key(j, "n", config.n);
  read_key(j, "n_side", config.n_side);
  if (j.contains("geometry")) {
    config.geometry = geometry_from_json(j.at("geometry"), config.geometry);
  }
  if (j.contains("type")) config.type = type_from_string(j.at("type").get<std::string>());
  if (j.contains("variant")) {
    config.variant = variant_from_string(j.at("variant").get<std::string>());
  }
  if (j.contains("threshold") && j.contains("fixed")) {
    throw std::invalid_argument("config: give either 'threshold' or 'fixed', not both");
  }
  if (j.contains("threshold")) {
    config.policy = EnrichmentPolicy::with_threshold(j.at("threshold").get<Real>());
  }
  if (j.contains("fixed")) {
    config.policy = EnrichmentPolicy::with_fixed(j.at("fixed").get<Index>());
  }
  read_key(j, "tolerance", config.tolerance);
  read_key(j, "max_iterations", config.max_iterations);
  if (j.contains("residual_norm")) {
    const auto s = j.at("residual_norm").get<std::string>();
    if (s == "unpreconditioned") {
      config.residual_norm = ResidualNorm::Unpreconditioned;
    } else if (s == "preconditioned") {
      config.residual_norm = ResidualNorm::Preconditioned;
    } else {
      throw std::invalid_argument("config: residual_norm must be 'unpreconditioned' or "
                                  "'preconditioned'");
    }
  }
  if (j.contains("mesh_sweep")) {
    config.mesh_sweep.clear();
    for (const auto& pair : j.at("mesh_sweep")) {
      config.mesh_sweep.emplace_back(pair.at(0).get<Index>(), pair.at(1).get<Index>());
    }
  }
  if (j.contains("jump_sweep")) {
    config.jump_sweep.clear();
    for (const auto& pair : j.at("jump_sweep")) {
      config.jump_sweep.emplace_back(pair.at(0).get<Real>(), pair.at(1).get<Real>());
    }
  }
  if (j.contains("fixed_counts")) {
    config.fixed_counts = j.at("fixed_counts").get<std::vector<Index>>();
  }
  validate(config);
  return config;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json_text(const ExperimentConfig& config) {
  json j{{"n", config.n},
         {"n_side", config.n_side},
         {"geometry", geometry_to_json(config.geometry)},
         {"type", to_string(config.type)},
         {"variant", to_string(config.variant)},
         {"tolerance", config.tolerance},
         {"max_iterations", config.max_iterations},
         {"residual_norm", config.residual_norm == ResidualNorm::Unpreconditioned
                               ? "unpreconditioned"
                               : "preconditioned"},
         {"mesh_sweep", config.mesh_sweep},
         {"jump_sweep", config.jump_sweep},
         {"fixed_counts", config.fixed_counts}};
  if (config.policy.kind == EnrichmentPolicy::Kind::Threshold) {
    j["threshold"] = config.policy.threshold;
  } else {
    j["fixed"] = config.policy.fixed;
  }
  return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string text = config_to_json_text(config);
  std::uint64_t hash = 1469598103934665603ull;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

PipelineState run_pipeline(const ExperimentConfig& config) {
  validate(config);
  PipelineState state;
  try {
    state.mesh = build_mesh(config.n);
    state.partition = build_partition(state.mesh, config.n_side);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("mesh: ") + e.what());
  }
  try {
    state.field = build_coefficient(state.mesh, state.partition, config.geometry);
    state.extrema = coefficient_extrema(state.partition, state.field);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("coefficient: ") + e.what());
  }
  try {
    state.dofs = build_dof_map(state.mesh, state.partition);
    state.stiffness = assemble_stiffness(state.mesh, state.field, state.dofs);
    state.rhs = assemble_load(state.mesh, state.dofs, default_load);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("assembly: ") + e.what());
  }
  try {
    state.spectra = solve_subdomain_spectra(state.mesh, state.partition, state.field,
                                            state.extrema, config.type, config.policy);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("spectral: ") + e.what());
  }
  try {
    CoarseSpace coarse =
        build_coarse_space(state.partition, state.dofs, state.stiffness, state.spectra);
    state.preconditioner.emplace(state.stiffness, state.partition, state.dofs, std::move(coarse),
                                 config.variant);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("coarse: ") + e.what());
  }
  try {
    const auto& preconditioner = *state.preconditioner;
    auto [solution, report] =
        pcg(state.stiffness.matrix, state.rhs,
            [&preconditioner](const Vector& r) { return preconditioner.apply(r); },
            config.tolerance, config.max_iterations, config.residual_norm);
    state.solution = std::move(solution);
    state.report = std::move(report);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("krylov: ") + e.what());
  }
  state.report.coarse_dimension = state.preconditioner->coarse().dim();
  state.report.enrichment_counts.clear();
  for (const auto& spectrum : state.spectra) {
    state.report.enrichment_counts.push_back(spectrum.selected);
  }
  return state;
}

ResultRow run_single(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const PipelineState state = run_pipeline(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row_from_state(config, state, seconds);
}

ResultRow summarize_run(const ExperimentConfig& config, const PipelineState& state,
                        double seconds) {
  return row_from_state(config, state, seconds);
}

std::vector<ResultRow> run_table1(const ExperimentConfig& config) {
  if (config.mesh_sweep.empty() || config.jump_sweep.empty()) {
    throw std::invalid_argument("run_table1: sweep lists must not be empty");
  }
  std::vector<ExperimentConfig> cells;
  for (const auto& [n, n_side] : config.mesh_sweep) {
    for (const auto& [alpha_channel, alpha_inclusion] : config.jump_sweep) {
      for (const auto variant :
           {PreconditionerVariant::Additive, PreconditionerVariant::Multiplicative}) {
        ExperimentConfig cell = config;
        cell.n = n;
        cell.n_side = n_side;
        cell.geometry.alpha_channel = alpha_channel;
        cell.geometry.alpha_inclusion = alpha_inclusion;
        cell.variant = variant;
        cells.push_back(std::move(cell));
      }
    }
  }

  std::vector<ResultRow> rows(cells.size());
  parallel_for(static_cast<Index>(cells.size()), [&](Index i) {
    try {
      rows[i] = run_single(cells[i]);
    } catch (const std::exception& e) {
      rows[i] = error_row(cells[i], e.what());
    }
  });
  return rows;
}

std::vector<ResultRow> run_table2(const ExperimentConfig& config) {
  if (config.fixed_counts.empty()) {
    throw std::invalid_argument("run_table2: fixed_counts must not be empty");
  }
  std::vector<ExperimentConfig> cells;
  for (const Index m : config.fixed_counts) {
    ExperimentConfig cell = config;
    cell.policy = EnrichmentPolicy::with_fixed(m);
    cells.push_back(std::move(cell));
  }
  std::vector<ResultRow> rows(cells.size());
  parallel_for(static_cast<Index>(cells.size()), [&](Index i) {
    try {
      rows[i] = run_single(cells[i]);
    } catch (const std::exception& e) {
      rows[i] = error_row(cells[i], e.what());
    }
  });
  return rows;
}

EnrichmentComparison run_enrichment_comparison(const ExperimentConfig& config) {
  if (config.policy.kind != EnrichmentPolicy::Kind::Threshold) {
    throw std::invalid_argument("run_enrichment_comparison: needs a threshold policy");
  }
  validate(config);
  const StructuredMesh mesh = build_mesh(config.n);
  const Partition partition = build_partition(mesh, config.n_side);
  const CoefficientField field = build_coefficient(mesh, partition, config.geometry);
  const CoefficientExtrema extrema = coefficient_extrema(partition, field);

  EnrichmentComparison comparison;
  for (const auto& spectrum : solve_subdomain_spectra(mesh, partition, field, extrema,
                                                      CoarseSpaceType::Subd, config.policy)) {
    comparison.subd.push_back(spectrum.selected);
    comparison.total_subd += spectrum.selected;
  }
  for (const auto& spectrum : solve_subdomain_spectra(mesh, partition, field, extrema,
                                                      CoarseSpaceType::Layer, config.policy)) {
    comparison.layer.push_back(spectrum.selected);
    comparison.total_layer += spectrum.selected;
  }
  return comparison;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "config_hash,n,n_side,alpha_channel,alpha_inclusion,type,variant,policy,"
         "iterations,condition,converged,coarse_dimension,enrichment_total,seconds,error\n";
  const auto precision = out.precision();
  out.precision(16);
  for (const auto& row : rows) {
    out << std::hex << row.hash << std::dec << "," << row.n << "," << row.n_side << ","
        << row.alpha_channel << "," << row.alpha_inclusion << "," << row.type << ","
        << row.variant << "," << row.policy << "," << row.iterations << "," << row.condition
        << "," << (row.converged ? 1 : 0) << "," << row.coarse_dimension << ","
        << row.enrichment_total << "," << row.seconds << "," << row.error << "\n";
  }
  out.precision(precision);
}

void write_enrichment_csv(std::ostream& out, const EnrichmentComparison& comparison) {
  out << "subdomain,selected_subd,selected_layer\n";
  for (std::size_t k = 0; k < comparison.subd.size(); ++k) {
    out << k << "," << comparison.subd[k] << "," << comparison.layer[k] << "\n";
  }
}

std::string enrichment_json(const EnrichmentComparison& comparison) {
  json j{{"subd", comparison.subd},
         {"layer", comparison.layer},
         {"total_subd", comparison.total_subd},
         {"total_layer", comparison.total_layer}};
  return j.dump(2);
}

std::string coarse_summary_json(const CoarseSpace& coarse,
                                const std::vector<LocalSpectrum>& spectra) {
  std::vector<Index> counts;
  counts.reserve(spectra.size());
  for (const auto& spectrum : spectra) counts.push_back(spectrum.selected);
  json j{{"dimension", coarse.dim()},
         {"interface_columns", coarse.interface_columns},
         {"enrichment_per_subdomain", counts}};
  return j.dump(2);
}

}  // namespace aas
