#include <doctest.h>

#include <random>

#include "aas/experiment.hpp"
#include "aas/verify.hpp"

using namespace aas;

namespace {

PipelineState make_state(Index n, Index n_side, Real alpha_channel, Real alpha_inclusion,
                         CoarseSpaceType type = CoarseSpaceType::Layer) {
  ExperimentConfig config;
  config.n = n;
  config.n_side = n_side;
  config.geometry = CoefficientGeometry{1.0, alpha_channel, alpha_inclusion, 1.0 / 3.0,
                                        1.0 / 2.0, true};
  config.type = type;
  return run_pipeline(config);
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("an exact inverse has a flat spectrum") {
  auto state = make_state(6, 2, 1.0, 1.0);
  Eigen::SimplicialLDLT<SparseMatrix> direct(state.stiffness.matrix);
  const auto report = dense_preconditioned_spectrum(
      state.stiffness.matrix, [&](const Vector& r) { return direct.solve(r).eval(); });
  CHECK((report.eigenvalues.array() - 1).abs().maxCoeff() <= 1e-10);
  CHECK(report.kappa == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("additive operator never exceeds two") {
  for (const auto& [alpha_channel, alpha_inclusion] : {std::pair{1.0, 1.0}, {1e2, 1e4}}) {
    auto state = make_state(12, 2, alpha_channel, alpha_inclusion);
    const auto& preconditioner = *state.preconditioner;
    const auto report = dense_preconditioned_spectrum(
        state.stiffness.matrix, [&](const Vector& r) { return preconditioner.apply(r); });
    CHECK(report.lambda_max <= 2 + 1e-8);
    CHECK(report.lambda_min > 0);
  }
}

TEST_CASE("dimension guard") {
  auto state = make_state(12, 2, 1.0, 1.0);
  CHECK_THROWS(dense_preconditioned_spectrum(
      state.stiffness.matrix, [](const Vector& r) { return r; }, 10));
}

TEST_CASE("iterative estimate is bounded by and close to the dense spectrum") {
  auto state = make_state(18, 3, 1e4, 1e6);
  const auto& preconditioner = *state.preconditioner;
  const auto report = dense_preconditioned_spectrum(
      state.stiffness.matrix, [&](const Vector& r) { return preconditioner.apply(r); });
  CHECK(state.report.condition_estimate <= report.kappa * (1 + 1e-8));
  CHECK(std::abs(state.report.condition_estimate - report.kappa) <= 0.05 * report.kappa);
}

TEST_CASE("splitting: reconstruction, coarse fixed point, and lower-bound mechanism") {
  auto state = make_state(12, 2, 1e2, 1e4);
  std::mt19937 rng(3);
  std::normal_distribution<Real> normal;

  // A function already of averaged form with nothing selected splits into
  // itself plus zero locals.
  auto plain = state.spectra;
  for (auto& spectrum : plain) spectrum.selected = 0;
  Vector seed(state.dofs.free_count());
  for (Index i = 0; i < seed.size(); ++i) seed[i] = normal(rng);
  const Vector coarse_u = average_interpolate(state.partition, state.dofs, seed);
  const auto fixed_point =
      check_stable_splitting(state.partition, state.dofs, state.stiffness, plain, coarse_u);
  CHECK(fixed_point.reconstruction_error <= 1e-12);
  CHECK(fixed_point.energy_ratio == doctest::Approx(1.0).epsilon(1e-10));

  // Random functions reconstruct exactly.
  for (int trial = 0; trial < 10; ++trial) {
    Vector u(state.dofs.free_count());
    for (Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
    const auto report =
        check_stable_splitting(state.partition, state.dofs, state.stiffness, state.spectra, u);
    CHECK(report.reconstruction_error <= 1e-12);
  }

  // The energy ratio at the worst eigenvector bounds the smallest
  // preconditioned eigenvalue from below.
  const auto& preconditioner = *state.preconditioner;
  const auto spectrum = dense_preconditioned_spectrum(
      state.stiffness.matrix, [&](const Vector& r) { return preconditioner.apply(r); });
  const Vector worst = spectrum.eigenvectors.col(0);
  const auto worst_split =
      check_stable_splitting(state.partition, state.dofs, state.stiffness, state.spectra, worst);
  CHECK(spectrum.lambda_min >= 1 / worst_split.energy_ratio - 1e-8);
}

TEST_CASE("splitting energy obeys the enrichment-scaled mesh-ratio bound") {
  // ratio <= C * max lambda_next * H/h with C tracked across refinement.
  std::mt19937 rng(17);
  std::normal_distribution<Real> normal;
  std::vector<Real> constants;
  for (const Index n : {12, 24}) {
    auto state = make_state(n, 2, 1e2, 1e4);
    Real lambda_next = 0;
    for (const auto& spectrum : state.spectra) {
      lambda_next = std::max(lambda_next, spectrum.lambda_next());
    }
    const Real scale = lambda_next * Real(state.partition.cells_per_side);
    Real worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
      Vector u(state.dofs.free_count());
      for (Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
      const auto report = check_stable_splitting(state.partition, state.dofs, state.stiffness,
                                                 state.spectra, u);
      worst = std::max(worst, report.energy_ratio / scale);
    }
    constants.push_back(worst);
  }
  CHECK(constants[0] > 0);
  CHECK(constants[1] <= constants[0] * 2.0);
}

TEST_CASE("constant coefficient: condition grows linearly with the mesh ratio") {
  std::vector<Real> ratio, kappa;
  for (const Index n : {6, 12, 24}) {
    auto state = make_state(n, 2, 1.0, 1.0);
    const auto& preconditioner = *state.preconditioner;
    const auto report = dense_preconditioned_spectrum(
        state.stiffness.matrix, [&](const Vector& r) { return preconditioner.apply(r); });
    ratio.push_back(Real(state.partition.cells_per_side));
    kappa.push_back(report.kappa);
  }
  // Least-squares line kappa = a + b * ratio; coefficient of determination.
  const Index m = static_cast<Index>(ratio.size());
  Real mean_x = 0, mean_y = 0;
  for (Index i = 0; i < m; ++i) {
    mean_x += ratio[i];
    mean_y += kappa[i];
  }
  mean_x /= m;
  mean_y /= m;
  Real sxy = 0, sxx = 0, ss_tot = 0;
  for (Index i = 0; i < m; ++i) {
    sxy += (ratio[i] - mean_x) * (kappa[i] - mean_y);
    sxx += (ratio[i] - mean_x) * (ratio[i] - mean_x);
    ss_tot += (kappa[i] - mean_y) * (kappa[i] - mean_y);
  }
  const Real slope = sxy / sxx;
  const Real intercept = mean_y - slope * mean_x;
  Real ss_res = 0;
  for (Index i = 0; i < m; ++i) {
    const Real fit = intercept + slope * ratio[i];
    ss_res += (kappa[i] - fit) * (kappa[i] - fit);
  }
  CHECK(1 - ss_res / ss_tot >= 0.95);
  CHECK(slope > 0);
}

}  // TEST_SUITE
