#pragma once

#include "ltlab/local_time.hpp"
#include "ltlab/path_engine.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ltlab {

/// Columns: j, c_j, g_j (coefficient and its prefix sum).
void write_coefficients_csv(const std::string& file, const Eigen::Ref<const Eigen::ArrayXd>& coeffs);

/// Columns: index, time, value.
void write_path_csv(const std::string& file, const SamplePath& path);

/// Columns: t, x, value, estimator, param.
void write_estimate_csv(const std::string& file, const LocalTimeEstimate& est);

struct StatisticRow {
  int replicate = 0;
  double n = 0.0;
  double t = 0.0;
  double x = 0.0;
  std::string f_id;
  double value = 0.0;
};
/// Columns: replicate, n, t, x, f_id, value.
void write_statistic_csv(const std::string& file, const std::vector<StatisticRow>& rows);

struct ResultRow {
  double n = 0.0;
  std::string f_id;
  double t = 0.0;
  double x = 0.0;
  std::string metric;
  double value = 0.0;
};
/// Leading "# <provenance>" comment, then columns: n, f_id, t, x, metric, value.
void write_result_csv(const std::string& file, const std::string& provenance,
                      const std::vector<ResultRow>& rows);

/// Compact binary path frame.
/// Layout (little-endian):
///   bytes 0-3   magic "LTPF"
///   u32         version (1)
///   u32         dtype   (1 = float64)
///   u64         n       (sample count)
///   f64         dt
///   f64 * n     values
/// The reader validates magic, version, dtype and payload length.
void write_path_frame(const std::string& file, const SamplePath& path);
SamplePath read_path_frame(const std::string& file);

}  // namespace ltlab
