#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aas/coefficient.hpp"
#include "aas/pcg.hpp"
#include "aas/schwarz.hpp"
#include "aas/spectral.hpp"
#include "aas/types.hpp"
#include "aas/verify.hpp"

namespace aas {

/// One experiment: problem size, coefficient pattern, coarse space type,
/// preconditioner variant, enrichment policy and solver settings, plus the
/// sweep lists used by the batch runners.
struct ExperimentConfig {
  Index n = 36;
  Index n_side = 6;
  CoefficientGeometry geometry{1.0, 1e4, 1e6, 1.0 / 3.0, 1.0 / 2.0, true};
  CoarseSpaceType type = CoarseSpaceType::Layer;
  PreconditionerVariant variant = PreconditionerVariant::Additive;
  EnrichmentPolicy policy = EnrichmentPolicy::with_threshold(100.0);
  Real tolerance = 5e-6;
  Index max_iterations = -1;
  ResidualNorm residual_norm = ResidualNorm::Unpreconditioned;

  /// (n, n_side) pairs for the mesh-ratio sweep.
  std::vector<std::pair<Index, Index>> mesh_sweep = {{18, 3}, {36, 3}, {54, 3},
                                                     {36, 6}, {54, 6}, {54, 9}};
  /// (alpha_channel, alpha_inclusion) pairs for the jump sweep.
  std::vector<std::pair<Real, Real>> jump_sweep = {{1e2, 1e4}, {1e4, 1e6}};
  /// Fixed enrichment counts for the fixed-count sweep.
  std::vector<Index> fixed_counts = {0, 2, 4, 5, 6, 7};
};

/// Right-hand side used throughout: 2 pi^2 sin(pi x) sin(pi y), the load
/// whose exact solution is sin(pi x) sin(pi y) for unit coefficient.
Real default_load(Real x, Real y);

/// JSON (de)serialization with schema validation; unknown keys are
/// rejected, missing keys keep their defaults.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& config);

/// FNV-1a hash of the canonical JSON serialization, echoed into every
/// output row so results can be traced back to their configuration.
std::uint64_t config_hash(const ExperimentConfig& config);

/// Everything one pipeline run produces, kept for inspection.
struct PipelineState {
  StructuredMesh mesh;
  Partition partition;
  CoefficientField field;
  CoefficientExtrema extrema;
  DofMap dofs;
  SparseSymMatrix stiffness;
  Vector rhs;
  std::vector<LocalSpectrum> spectra;
  std::optional<SchwarzPreconditioner> preconditioner;
  Vector solution;
  SolveReport report;
};

/// mesh -> partition -> coefficient -> assembly -> spectra -> coarse ->
/// preconditioner -> solve.  Deterministic for identical configs.
PipelineState run_pipeline(const ExperimentConfig& config);

/// Flat result record for CSV output.
struct ResultRow {
  std::uint64_t hash = 0;
  Index n = 0;
  Index n_side = 0;
  Real alpha_channel = 0;
  Real alpha_inclusion = 0;
  std::string type;
  std::string variant;
  std::string policy;
  Index iterations = 0;
  Real condition = 0;
  bool converged = false;
  Index coarse_dimension = 0;
  Index enrichment_total = 0;
  std::vector<Index> enrichment_counts;
  double seconds = 0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

ResultRow run_single(const ExperimentConfig& config);

/// Row from an already-run pipeline (what run_single does internally).
ResultRow summarize_run(const ExperimentConfig& config, const PipelineState& state,
                        double seconds);

/// Mesh-ratio sweep crossed with the jump sweep and both variants.  Cell
/// failures are recorded in their row; the sweep continues.  Cells may run
/// in parallel (thread count from the AAS_THREADS environment variable).
std::vector<ResultRow> run_table1(const ExperimentConfig& config);

/// Fixed-enrichment sweep at the config's mesh and coefficient pattern.
std::vector<ResultRow> run_table2(const ExperimentConfig& config);

/// Per-subdomain enrichment counts of both coarse space types at the
/// config's threshold.
struct EnrichmentComparison {
  std::vector<Index> subd;
  std::vector<Index> layer;
  Index total_subd = 0;
  Index total_layer = 0;
};

EnrichmentComparison run_enrichment_comparison(const ExperimentConfig& config);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_enrichment_csv(std::ostream& out, const EnrichmentComparison& comparison);
std::string enrichment_json(const EnrichmentComparison& comparison);

/// Coarse-space summary (dimension and per-subdomain counts) as JSON.
std::string coarse_summary_json(const CoarseSpace& coarse,
                                const std::vector<LocalSpectrum>& spectra);

}  // namespace aas
