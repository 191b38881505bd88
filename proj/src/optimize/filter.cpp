#include "cutopt/optimize/filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace cutopt {

FilterSpec build_filter(const std::vector<Vec2>& centroids, int n_design, double r_min, double gamma) {
  if (!(r_min > 0.0)) throw ConfigError("filter radius must be positive");
  FilterSpec f;
  f.r_min = r_min;
  f.gamma = gamma;
  f.n_design = n_design;
  f.n_total = static_cast<int>(centroids.size());

  // Bin all cells on a grid of spacing r_min.
  auto key = [&](const Vec2& p) {
    return std::make_pair(static_cast<long>(std::floor(p.x() / r_min)), static_cast<long>(std::floor(p.y() / r_min)));
  };
  struct Hash {
    std::size_t operator()(const std::pair<long, long>& k) const {
      return std::hash<long>()(k.first * 73856093L) ^ std::hash<long>()(k.second * 19349663L);
    }
  };
  std::unordered_map<std::pair<long, long>, std::vector<int>, Hash> bins;
  for (int c = 0; c < f.n_total; ++c) bins[key(centroids[c])].push_back(c);

  f.offsets.push_back(0);
  std::vector<std::pair<int, double>> row;
  for (int k = 0; k < n_design; ++k) {
    row.clear();
    const auto [bx, by] = key(centroids[k]);
    for (long dy = -1; dy <= 1; ++dy)
      for (long dx = -1; dx <= 1; ++dx) {
        auto it = bins.find({bx + dx, by + dy});
        if (it == bins.end()) continue;
        for (int j : it->second) {
          const double H = r_min - (centroids[j] - centroids[k]).norm();
          if (H > 0.0) row.emplace_back(j, H);
        }
      }
    std::sort(row.begin(), row.end());
    for (const auto& [j, H] : row) {
      f.neighbors.push_back(j);
      f.weights.push_back(H);
    }
    f.offsets.push_back(static_cast<int>(f.neighbors.size()));
  }
  return f;
}

Eigen::VectorXd filter_sensitivities(const Eigen::VectorXd& raw, const Eigen::VectorXd& rho,
                                     const Eigen::VectorXd& volumes, const FilterSpec& spec) {
  if (raw.size() != spec.n_total || volumes.size() != spec.n_total || rho.size() != spec.n_design)
    throw std::invalid_argument("filter input sizes do not match the filter neighborhoods");
  Eigen::VectorXd out(spec.n_design);
  for (int k = 0; k < spec.n_design; ++k) {
    double num = 0.0, den = 0.0;
    for (int e = spec.offsets[k]; e < spec.offsets[k + 1]; ++e) {
      const int j = spec.neighbors[e];
      const double rj = j < spec.n_design ? rho[j] : 1.0;
      num += spec.weights[e] * rj * raw[j] / std::max(volumes[j], spec.gamma);
      den += spec.weights[e];
    }
    out[k] = volumes[k] / std::max(rho[k], spec.gamma) * num / den;
  }
  return out;
}

}  // namespace cutopt
