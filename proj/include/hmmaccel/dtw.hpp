#pragma once

#include "hmmaccel/model.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace hmmaccel {

enum class Distance { kDtw, kEuclidean };

Distance parse_distance(std::string_view name);
std::string_view to_string(Distance d);

/// 0-based (row, column) index pairs from (0, 0) to (len(x)-1, len(y)-1).
using WarpingPath = std::vector<std::pair<int, int>>;

struct DtwResult {
  double distance = 0.0;
  WarpingPath path;
};

/// Absolute index difference; zero iff the symbols are equal.
inline double local_cost(Symbol x, Symbol y) {
  return x > y ? static_cast<double>(x - y) : static_cast<double>(y - x);
}

/// Local-cost matrix with entry (n, m) = local_cost(x[n], y[m]).
Eigen::MatrixXd cost_matrix(const ObservationSequence& x,
                            const ObservationSequence& y);

/// Minimum-cost warping path through the local-cost matrix (steps (1,0),
/// (0,1), (1,1)). Ties during backtracking prefer the diagonal, then the
/// vertical step, then the horizontal one.
DtwResult dtw(const ObservationSequence& x, const ObservationSequence& y);

/// Distance only; O(len(y)) memory.
double dtw_distance(const ObservationSequence& x, const ObservationSequence& y);

/// sqrt(sum_t (x_t - y_t)^2). Throws std::invalid_argument("length mismatch")
/// when lengths differ.
double euclidean_distance(const ObservationSequence& x,
                          const ObservationSequence& y);

double distance(Distance kind, const ObservationSequence& x,
                const ObservationSequence& y);

/// Removes consecutive repeats: 1222234 -> 1234.
ObservationSequence run_length_collapse(const ObservationSequence& x);

/// Sum of local costs along a path.
double path_cost(const ObservationSequence& x, const ObservationSequence& y,
                 const WarpingPath& path);

/// Checks boundary, step and length conditions of a warping path.
bool is_valid_warping_path(const WarpingPath& path, int n, int m);

}  // namespace hmmaccel
