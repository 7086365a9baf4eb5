#include "hmmaccel/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hmmaccel {

Distance parse_distance(std::string_view name) {
  if (name == "dtw") return Distance::kDtw;
  if (name == "euclidean") return Distance::kEuclidean;
  throw std::invalid_argument("unknown distance '" + std::string(name) +
                              "' (expected dtw or euclidean)");
}

std::string_view to_string(Distance d) {
  return d == Distance::kDtw ? "dtw" : "euclidean";
}

namespace {

void require_non_empty(const ObservationSequence& x,
                       const ObservationSequence& y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("empty sequence");
}

}  // namespace

Eigen::MatrixXd cost_matrix(const ObservationSequence& x,
                            const ObservationSequence& y) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(x.size()),
                    static_cast<Eigen::Index>(y.size()));
  for (Eigen::Index n = 0; n < c.rows(); ++n)
    for (Eigen::Index m = 0; m < c.cols(); ++m)
      c(n, m) = local_cost(x[static_cast<std::size_t>(n)],
                           y[static_cast<std::size_t>(m)]);
  return c;
}

DtwResult dtw(const ObservationSequence& x, const ObservationSequence& y) {
  require_non_empty(x, y);
  const Eigen::MatrixXd cost = cost_matrix(x, y);
  const Eigen::Index rows = cost.rows();
  const Eigen::Index cols = cost.cols();

  // Accumulated cost; out-of-range predecessors are +inf.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd acc(rows, cols);
  for (Eigen::Index n = 0; n < rows; ++n) {
    for (Eigen::Index m = 0; m < cols; ++m) {
      double best;
      if (n == 0 && m == 0) {
        best = 0.0;
      } else {
        const double diag = (n > 0 && m > 0) ? acc(n - 1, m - 1) : kInf;
        const double up = n > 0 ? acc(n - 1, m) : kInf;
        const double left = m > 0 ? acc(n, m - 1) : kInf;
        best = std::min({diag, up, left});
      }
      acc(n, m) = cost(n, m) + best;
    }
  }

  DtwResult result;
  result.distance = acc(rows - 1, cols - 1);
  Eigen::Index n = rows - 1;
  Eigen::Index m = cols - 1;
  result.path.emplace_back(static_cast<int>(n), static_cast<int>(m));
  while (n > 0 || m > 0) {
    if (n == 0) {
      --m;
    } else if (m == 0) {
      --n;
    } else {
      const double diag = acc(n - 1, m - 1);
      const double up = acc(n - 1, m);
      const double left = acc(n, m - 1);
      if (diag <= up && diag <= left) {
        --n;
        --m;
      } else if (up <= left) {
        --n;
      } else {
        --m;
      }
    }
    result.path.emplace_back(static_cast<int>(n), static_cast<int>(m));
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

double dtw_distance(const ObservationSequence& x, const ObservationSequence& y) {
  require_non_empty(x, y);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(y.size(), kInf);
  std::vector<double> curr(y.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::size_t m = 0; m < y.size(); ++m) {
      double best;
      if (n == 0 && m == 0) {
        best = 0.0;
      } else {
        const double diag = m > 0 ? prev[m - 1] : kInf;
        const double left = m > 0 ? curr[m - 1] : kInf;
        best = std::min({diag, prev[m], left});
      }
      curr[m] = local_cost(x[n], y[m]) + best;
    }
    std::swap(prev, curr);
  }
  return prev.back();
}

double euclidean_distance(const ObservationSequence& x,
                          const ObservationSequence& y) {
  if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
  double sum = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double d = static_cast<double>(x[t]) - static_cast<double>(y[t]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double distance(Distance kind, const ObservationSequence& x,
                const ObservationSequence& y) {
  return kind == Distance::kDtw ? dtw_distance(x, y) : euclidean_distance(x, y);
}

ObservationSequence run_length_collapse(const ObservationSequence& x) {
  ObservationSequence out;
  std::unique_copy(x.begin(), x.end(), std::back_inserter(out));
  return out;
}

double path_cost(const ObservationSequence& x, const ObservationSequence& y,
                 const WarpingPath& path) {
  double total = 0.0;
  for (const auto& [n, m] : path)
    total += local_cost(x.at(static_cast<std::size_t>(n)),
                        y.at(static_cast<std::size_t>(m)));
  return total;
}

bool is_valid_warping_path(const WarpingPath& path, int n, int m) {
  if (path.empty()) return false;
  if (path.front() != std::pair{0, 0}) return false;
  if (path.back() != std::pair{n - 1, m - 1}) return false;
  const auto len = static_cast<int>(path.size());
  if (len < std::max(n, m) || len > n + m - 1) return false;
  for (std::size_t l = 1; l < path.size(); ++l) {
    const int dn = path[l].first - path[l - 1].first;
    const int dm = path[l].second - path[l - 1].second;
    if (dn < 0 || dm < 0 || dn > 1 || dm > 1 || (dn == 0 && dm == 0))
      return false;
  }
  return true;
}

}  // namespace hmmaccel
