#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <utility>

#include <unistd.h>

#include <Eigen/Dense>

#include "ramanpcr/error.hpp"
#include "ramanpcr/spectra.hpp"

namespace support {

using ramanpcr::ConcentrationSet;
using ramanpcr::Index;
using ramanpcr::SpectraSet;

inline Eigen::VectorXd test_axis(Index j = 120, double start = 400.0, double step = 5.0) {
  Eigen::VectorXd axis(j);
  for (Index k = 0; k < j; ++k) axis[k] = start + step * static_cast<double>(k);
  return axis;
}

inline Eigen::MatrixXd random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = g(rng);
  return m;
}

inline std::vector<std::string> labels(Index n, const std::string& prefix = "x") {
  std::vector<std::string> out;
  for (Index k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k + 1));
  return out;
}

// q x j basis spectra: a few random Lorentzian bands each.
inline Eigen::MatrixXd random_bases(Index q, const Eigen::VectorXd& axis, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> where(axis[0], axis[axis.size() - 1]);
  std::uniform_real_distribution<double> height(0.3, 1.0);
  Eigen::MatrixXd bases = Eigen::MatrixXd::Zero(q, axis.size());
  for (Index s = 0; s < q; ++s)
    for (int p = 0; p < 3; ++p) {
      const double c = where(rng), h = height(rng), w = 12.0;
      bases.row(s).array() += h / (1.0 + ((axis.array() - c) / w).square()).transpose();
    }
  return bases;
}

// Spectra exactly linear in the concentrations: S = C^T * bases.
inline std::pair<SpectraSet, ConcentrationSet> noiseless_mixture(Index q, Index i, std::uint64_t seed, Index j = 120) {
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd axis = test_axis(j);
  const Eigen::MatrixXd bases = random_bases(q, axis, rng);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::MatrixXd conc(q, i);
  for (Index c = 0; c < i; ++c)
    for (Index s = 0; s < q; ++s) conc(s, c) = u(rng);
  std::vector<std::string> species, units;
  for (Index s = 0; s < q; ++s) {
    species.push_back("a" + std::to_string(s + 1));
    units.push_back("mM");
  }
  const auto names = labels(i);
  SpectraSet set(axis, conc.transpose() * bases, names);
  return {std::move(set), ConcentrationSet(conc, species, units, names)};
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("ramanpcr_" + name + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace support
