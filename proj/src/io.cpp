#include "ltlab/io.hpp"

#include "ltlab/util.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ltlab {
namespace {

constexpr char kMagic[4] = {'L', 'T', 'P', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeF64 = 1;

std::ofstream open_out(const std::string& file, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(file, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  return out;
}

}  // namespace

void write_coefficients_csv(const std::string& file,
                            const Eigen::Ref<const Eigen::ArrayXd>& coeffs) {
  auto out = open_out(file);
  out << "j,c_j,g_j\n";
  CompensatedSum g;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
    g.add(coeffs[j]);
    out << j << ',' << format_double(coeffs[j]) << ',' << format_double(g.value()) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + file);
}

void write_path_csv(const std::string& file, const SamplePath& path) {
  auto out = open_out(file);
  out << "index,time,value\n";
  for (Eigen::Index k = 0; k < path.values.size(); ++k) {
    out << k << ',' << format_double(static_cast<double>(k + 1) * path.dt) << ','
        << format_double(path.values[k]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + file);
}

void write_estimate_csv(const std::string& file, const LocalTimeEstimate& est) {
  auto out = open_out(file);
  out << "t,x,value,estimator,param\n";
  for (Eigen::Index i = 0; i < est.t_list.size(); ++i)
    for (Eigen::Index j = 0; j < est.x_grid.size(); ++j)
      out << format_double(est.t_list[i]) << ',' << format_double(est.x_grid[j]) << ','
          << format_double(est.values(i, j)) << ',' << est.estimator << ','
          << format_double(est.param) << '\n';
  if (!out) throw std::runtime_error("write failed: " + file);
}

void write_statistic_csv(const std::string& file, const std::vector<StatisticRow>& rows) {
  auto out = open_out(file);
  out << "replicate,n,t,x,f_id,value\n";
  for (const auto& r : rows)
    out << r.replicate << ',' << format_double(r.n) << ',' << format_double(r.t) << ','
        << format_double(r.x) << ',' << r.f_id << ',' << format_double(r.value) << '\n';
  if (!out) throw std::runtime_error("write failed: " + file);
}

void write_result_csv(const std::string& file, const std::string& provenance,
                      const std::vector<ResultRow>& rows) {
  auto out = open_out(file);
  out << "# " << provenance << '\n';
  out << "n,f_id,t,x,metric,value\n";
  for (const auto& r : rows)
    out << format_double(r.n) << ',' << r.f_id << ',' << format_double(r.t) << ','
        << format_double(r.x) << ',' << r.metric << ',' << format_double(r.value) << '\n';
  if (!out) throw std::runtime_error("write failed: " + file);
}

void write_path_frame(const std::string& file, const SamplePath& path) {
  auto out = open_out(file, std::ios::out | std::ios::binary);
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  const std::uint32_t dtype = kDtypeF64;
  const auto n = static_cast<std::uint64_t>(path.values.size());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&dtype), sizeof dtype);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&path.dt), sizeof path.dt);
  out.write(reinterpret_cast<const char*>(path.values.data()),
            static_cast<std::streamsize>(sizeof(double) * path.values.size()));
  if (!out) throw std::runtime_error("write failed: " + file);
}

SamplePath read_path_frame(const std::string& file) {
  std::ifstream in(file, std::ios::in | std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + file);
  char magic[4] = {};
  std::uint32_t version = 0;
  std::uint32_t dtype = 0;
  std::uint64_t n = 0;
  double dt = 0.0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&dtype), sizeof dtype);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&dt), sizeof dt);
  if (!in) throw std::runtime_error("path frame truncated (header): " + file);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a path frame (bad magic): " + file);
  if (version != kVersion)
    throw std::runtime_error("unsupported path frame version: " + file);
  if (dtype != kDtypeF64) throw std::runtime_error("unsupported path frame dtype: " + file);
  if (n > (1ull << 31)) throw std::runtime_error("implausible path frame length: " + file);

  SamplePath path;
  path.dt = dt;
  path.values.resize(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(path.values.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(double) * n))
    throw std::runtime_error("path frame truncated (payload): " + file);
  return path;
}

}  // namespace ltlab
