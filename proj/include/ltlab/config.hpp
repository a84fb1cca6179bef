#pragma once

#include "ltlab/functionals.hpp"
#include "ltlab/lfsm_sim.hpp"
#include "ltlab/linear_model.hpp"
#include "ltlab/path_engine.hpp"
#include "ltlab/stable_rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace ltlab {

struct EstimatorParams {
  double eta = 1.0 / 64;
  Eigen::ArrayXd eps_list;  // default {2^-1, 2^-2, 2^-4}
  double u_max = 200.0;
  int quad_n = 4096;
  double x_step = 1.0 / 64;
  int gh_n = 21;  // smoothing-integral quadrature nodes
};

struct DiagParams {
  std::vector<Eigen::Index> j_list;  // default {2^8, 2^10, 2^12, 2^14}
  double lambda = 1.0;
  double d = 0.5;
  double c = 1.9;
  double cap = 1e4;
  SStarWeights weights = SStarWeights::Simplified;
};

/// Full experiment description. Loads from a single JSON document with a
/// published schema (config_schema()); unknown keys are rejected with their
/// dotted path, parse errors carry line:column positions, and the canonical
/// serialization round-trips losslessly.
struct ExperimentConfig {
  CoefficientModel model =
      CoefficientModel::c2((Eigen::ArrayXd(1) << 1.0).finished(), 2.0, 1.0);
  InnovationSpec spec = InnovationSpec::exact_stable(2.0, 0.0, 1.0);
  NormSchedule norms{2.0, SlowlyVarying::constant(1.0)};
  LfsmSpec lfsm;
  std::vector<TestFunction> f_list;      // default {Indicator(-1, 1)}
  std::vector<Eigen::Index> n_list;      // default {2^10, 2^12, 2^14}
  double beta_exponent = 0.4;
  Eigen::ArrayXd t_list;                 // default {1}
  Eigen::ArrayXd x_list;                 // default {0}
  int replicates = 2000;
  std::uint64_t master_seed = 1;
  EstimatorParams estimator;
  TruncationPolicy truncation;
  DiagParams diag;
  int threads = 1;
  std::string out_dir = "results";

  void validate() const;
};

/// The compiled-in defaults with all list fields populated.
ExperimentConfig default_config();

ExperimentConfig load_config(const std::string& file);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical JSON form: every key explicit, fixed order, round-trips.
std::string config_to_json(const ExperimentConfig& cfg);

/// 16-hex-digit content hash of the canonical form; names the results dir.
std::string experiment_id(const ExperimentConfig& cfg);

struct SchemaEntry {
  const char* key;
  const char* type;
  const char* doc;
};
/// Every accepted config key; the CLI --help text and the validator share it.
const std::vector<SchemaEntry>& config_schema();

}  // namespace ltlab
