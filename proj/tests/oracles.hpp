#pragma once

// Brute-force reference computations. Everything here enumerates paths
// directly and shares no code with the library's recursions.

#include "hmmaccel/model.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using hmmaccel::HmmModel;
using hmmaccel::ObservationSequence;

/// Minimum summed |x - y| over every (1,0)/(0,1)/(1,1) path from (0,0) to
/// (n-1, m-1).
inline double dtw_by_enumeration(const ObservationSequence& x,
                                 const ObservationSequence& y) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(y.size());
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int, double)> walk = [&](int i, int j, double cost) {
    cost += std::abs(x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]);
    if (i == n - 1 && j == m - 1) {
      best = std::min(best, cost);
      return;
    }
    if (i + 1 < n) walk(i + 1, j, cost);
    if (j + 1 < m) walk(i, j + 1, cost);
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, cost);
  };
  walk(0, 0, 0.0);
  return best;
}

/// Calls f(path) for every state path of length T in lexicographic order.
inline void for_each_state_path(int n_states, std::size_t steps,
                                const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> path(steps, 0);
  while (true) {
    f(path);
    std::size_t k = steps;
    while (k > 0) {
      --k;
      if (++path[k] < n_states) break;
      path[k] = 0;
      if (k == 0) return;
    }
    if (steps == 0) return;
  }
}

template <typename Scalar>
long double joint_probability(const HmmModel<Scalar>& model, const ObservationSequence& seq,
                              const std::vector<int>& path) {
  long double p = static_cast<long double>(model.pi(path[0])) *
                  static_cast<long double>(model.b(path[0], seq[0]));
  for (std::size_t t = 1; t < seq.size(); ++t)
    p *= static_cast<long double>(model.a(path[t - 1], path[t])) *
         static_cast<long double>(model.b(path[t], seq[t]));
  return p;
}

/// P(O | model) by summing over all N^T state paths.
template <typename Scalar>
long double likelihood_by_enumeration(const HmmModel<Scalar>& model,
                                      const ObservationSequence& seq) {
  long double total = 0;
  for_each_state_path(static_cast<int>(model.n_states()), seq.size(),
                      [&](const std::vector<int>& path) {
                        total += joint_probability(model, seq, path);
                      });
  return total;
}

/// Most probable path. Among paths within 1e-10 relative of the maximum, the
/// one that is smallest when compared from the last state backwards wins
/// (lowest final state, then lowest predecessor, ...).
template <typename Scalar>
std::pair<std::vector<int>, long double> viterbi_by_enumeration(
    const HmmModel<Scalar>& model, const ObservationSequence& seq) {
  long double best = -1;
  for_each_state_path(static_cast<int>(model.n_states()), seq.size(),
                      [&](const std::vector<int>& path) {
                        best = std::max(best, joint_probability(model, seq, path));
                      });
  std::vector<int> best_path;
  for_each_state_path(static_cast<int>(model.n_states()), seq.size(),
                      [&](const std::vector<int>& path) {
                        if (joint_probability(model, seq, path) < best * (1 - 1e-10L)) return;
                        if (best_path.empty() ||
                            std::lexicographical_compare(path.rbegin(), path.rend(),
                                                         best_path.rbegin(), best_path.rend()))
                          best_path = path;
                      });
  return {best_path, best};
}

/// Stationary distribution of a row-stochastic matrix by power iteration.
inline Eigen::VectorXd stationary(const Eigen::MatrixXd& a, int iterations = 10000) {
  Eigen::RowVectorXd p = Eigen::RowVectorXd::Constant(a.rows(), 1.0 / a.rows());
  for (int i = 0; i < iterations; ++i) p = p * a;
  return p.transpose();
}

/// Random valid model with entries drawn uniformly and rows normalized.
inline HmmModel<double> random_model(int n, int m, hmmaccel::Rng& rng) {
  auto fill = [&rng](Eigen::MatrixXd& x) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index k = 0; k < x.cols(); ++k) x(i, k) = 0.05 + hmmaccel::uniform01(rng);
      x.row(i) /= x.row(i).sum();
    }
  };
  Eigen::MatrixXd pi(1, n), a(n, n), b(n, m);
  fill(pi);
  fill(a);
  fill(b);
  return {pi.row(0).transpose(), a, b};
}

inline ObservationSequence random_sequence(int length, int alphabet, hmmaccel::Rng& rng) {
  ObservationSequence s(static_cast<std::size_t>(length));
  for (auto& v : s)
    v = std::min(static_cast<int>(hmmaccel::uniform01(rng) * alphabet), alphabet - 1);
  return s;
}

/// Every sequence of length T over an alphabet of size M.
inline std::vector<ObservationSequence> all_sequences(int alphabet, int length) {
  std::vector<ObservationSequence> out;
  for_each_state_path(alphabet, static_cast<std::size_t>(length),
                      [&](const std::vector<int>& s) { out.push_back(s); });
  return out;
}

/// Baum-Welch re-estimation for a single sequence with gamma and xi taken
/// from explicit path enumeration.
inline HmmModel<double> reestimate_by_enumeration(const HmmModel<double>& model,
                                                  const ObservationSequence& seq) {
  const auto n = model.n_states();
  const auto steps = seq.size();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(steps), n);
  Eigen::MatrixXd xi_sum = Eigen::MatrixXd::Zero(n, n);
  long double total = 0;
  for_each_state_path(static_cast<int>(n), steps, [&](const std::vector<int>& path) {
    const long double p = joint_probability(model, seq, path);
    total += p;
    for (std::size_t t = 0; t < steps; ++t)
      gamma(static_cast<Eigen::Index>(t), path[t]) += static_cast<double>(p);
    for (std::size_t t = 0; t + 1 < steps; ++t) xi_sum(path[t], path[t + 1]) += static_cast<double>(p);
  });
  gamma /= static_cast<double>(total);
  xi_sum /= static_cast<double>(total);

  HmmModel<double> out = model;
  out.pi = gamma.row(0).transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double from_i = gamma.topRows(static_cast<Eigen::Index>(steps - 1)).col(i).sum();
    if (from_i > 0) out.a.row(i) = xi_sum.row(i) / from_i;
    const double occupancy = gamma.col(i).sum();
    for (Eigen::Index k = 0; k < model.n_symbols(); ++k) {
      double emitted = 0;
      for (std::size_t t = 0; t < steps; ++t)
        if (seq[t] == k) emitted += gamma(static_cast<Eigen::Index>(t), i);
      out.b(i, k) = emitted / occupancy;
    }
  }
  return out;
}

}  // namespace oracle
