#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpctune/features.hpp"
#include "mpctune/gp.hpp"
#include "mpctune/search_space.hpp"

namespace mpctune {

enum class TuneMethod { hetero_bo, homo_bo, cma_es, random_search };

std::string method_name(TuneMethod m);
TuneMethod method_from_name(const std::string& name);

enum class RowKind { batch, start, iteration };

std::string row_kind_name(RowKind k);

struct TraceRow {
  RowKind kind = RowKind::iteration;
  int index = 0;          // batch: 0..B-1; start: 0; iteration: 1..budget
  Eigen::VectorXd x;      // raw (denormalized) coordinates
  double observed = 0.0;
  double best_so_far = 0.0;  // running max within the row's phase
  bool failed = false;
};

// Fitted-model record kept alongside the trace so runs can be re-plotted
// without re-fitting.
struct SurrogateInfo {
  bool present = false;
  KernelParams kernel;
  double noise_scale = 0.0;  // MLE scalar: z (hetero) or sigma_nu (homo)
  NoiseModel noise;
  RewardTrendModel trend;  // hetero only
  bool has_trend = false;
  double y_mean = 0.0;
  double y_std = 1.0;
  double log_marginal = 0.0;
  bool degraded = false;
};

struct TuningTrace {
  TuneMethod method = TuneMethod::random_search;
  std::vector<TraceRow> rows;
  SurrogateInfo surrogate;

  // Best over everything evaluated (batch included).
  double best_reward() const;
  Eigen::VectorXd best_point() const;
  // Final value of the iteration-phase curve (start row + iterations).
  double best_so_far_final() const;
};

// Objective: raw point plus a monotone evaluation index the caller may use to
// derive per-evaluation seeds.
using TuneObjective = std::function<double(const Eigen::VectorXd& raw_x, int eval_index)>;

struct BoSettings {
  int initial_batch = 150;
  double delta = 2.0;
  int degree = 10;
  int mle_restarts = 10;
  int acq_restarts = 10;
  int refit_every = 0;  // 0 = hyper-parameters frozen after the batch fit
  std::optional<NoiseModel> forced_noise;  // skip the two-stage fit (ablations)
};

double ucb(const Posterior& p, double delta);

// Multi-start bounded ascent on UCB(posterior) over the unit cube, starting
// from `restarts` uniform points plus the best observed point. Returns a unit
// point; ties broken by first-found.
Eigen::VectorXd maximize_acquisition(const SurrogateModel& model, const ObservationSet& data,
                                     double delta, int restarts, Rng& rng);

// n-by-d Latin hypercube sample in the unit cube.
Eigen::MatrixXd latin_hypercube(int n, int d, Rng& rng);

// Joint tuning loop. Phase 1: Latin-hypercube batch, trend + noise-model fit
// (heteroscedastic) or constant noise (homoscedastic), then one global MLE of
// the kernel hyper-parameters. Phase 2: UCB iterations with the factorization
// refreshed per observation. The iteration curve starts at the batch point
// with minimum observed reward. cma_es / random_search dispatch to the
// corresponding baselines.
TuningTrace tune(const TuneObjective& objective, const SearchSpace& space, int budget,
                 TuneMethod method, const BoSettings& settings, Rng& rng);

TuningTrace random_search(const TuneObjective& objective, const SearchSpace& space, int budget,
                          Rng& rng);

}  // namespace mpctune
