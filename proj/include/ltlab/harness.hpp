#pragma once

#include "ltlab/config.hpp"
#include "ltlab/io.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace ltlab {

/// Routing/precondition failure: the run never started. Carries the checker
/// report; the CLI maps it to the usage exit code.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raw replicate samples behind one (n, f, t, x) table cell.
struct SampleCell {
  Eigen::Index n = 0;
  std::string f_id;
  double t = 0.0;
  double x = 0.0;
  Eigen::ArrayXd statistic;  // length = replicates
  Eigen::ArrayXd reference;  // matched (∫f)·L̂ sample; empty for gap runs
};

/// One (n, ε) smoothing-gap entry.
struct GapCell {
  Eigen::Index n = 0;
  std::string f_id;
  double t = 0.0;
  double x = 0.0;
  double eps = 0.0;
  double value = 0.0;  // mean squared gap over replicates
};

struct ExperimentResult {
  std::string verb;        // t2 | t3i | t3ii | t4_5 | p6 | lemma12 | lemma13 | prop1 | estimate
  std::string experiment;  // config hash
  std::string comparison;  // "exact" | "shape" | "-"
  std::vector<SampleCell> samples;
  std::vector<GapCell> gaps;    // p6 only
  std::vector<ResultRow> rows;  // flat metric table, serialized to CSV
  bool verdict = false;
  bool verdict_t4 = true;  // split verdicts of the combined discrete/continuous run
  bool verdict_t5 = true;
  double presum_max = 0.0;  // discarded-head mass of the shifted-start variant
  std::vector<std::string> notes;
  double elapsed_seconds = 0.0;  // never serialized: result files stay byte-stable
};

/// Distributional convergence of the normalized partial-sum functional toward
/// (∫f)·L̂(t,−x) on matched target-process paths. KS/W1 per (n, f, t, x);
/// verdict = per-column non-increasing KS trend plus a final-n threshold.
/// Exact comparison for the pinned-scale Gaussian branch, otherwise shape
/// comparison after median/MAD rescaling of both samples.
ExperimentResult run_theorem2(const ExperimentConfig& cfg);

/// Same machinery under the alternate routing rules: variant 1 checks
/// bounded + integrable f with an absolutely continuous innovation law;
/// variant 2 admits unbounded f with f, f² integrable, starts the sum at
/// the convolution-smoothing index n₀ and certifies the discarded head.
ExperimentResult run_theorem3(const ExperimentConfig& cfg, int variant);

/// L² decay of the discrete and the time-rescaled continuous functional on
/// target-process paths against (∫f)·L̂ at the finest resolution. One master
/// path per replicate, subsampled per n.
ExperimentResult run_theorem4_5(const ExperimentConfig& cfg);

/// Smoothing-gap table E[(L_n − L_{n,ε})²] over the (n, ε) grid, the
/// z-integral evaluated by Gauss–Hermite quadrature.
ExperimentResult run_prop6_gap(const ExperimentConfig& cfg);

/// Persist a finished run under <out_dir>/<experiment>-<verb>/: canonical
/// config.json, summary.json and tables/<verb>.csv. Returns the run dir.
/// Identical config + verb produce byte-identical files.
std::string write_result(const ExperimentConfig& cfg, const ExperimentResult& result);

/// The target-process spec implied by the linear model: the partial-sum
/// limit's (alpha, H, skewness) with unit scale, discretized per cfg.lfsm.
LfsmSpec reference_spec(const ExperimentConfig& cfg);

/// Tap-count policy actually used by the harness: an "auto" policy under a
/// finite coefficient list drops to the exact finite memory.
TruncationPolicy effective_policy(const ExperimentConfig& cfg);

}  // namespace ltlab
