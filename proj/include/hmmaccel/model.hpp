#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmmaccel {

/// Internal 0-based symbol index.
using Symbol = int;
using ObservationSequence = std::vector<Symbol>;

/// All training sequences of one category, in input order.
struct Dataset {
  int category_id = 0;
  std::vector<ObservationSequence> sequences;
};

/// Discrete-emission HMM parameters (pi, A, B).
///
/// pi has one entry per hidden state, a is N x N row-stochastic, and b is
/// N x M with row j holding the emission distribution of state j.
template <typename Scalar = double>
struct HmmModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector pi;
  Matrix a;
  Matrix b;

  Eigen::Index n_states() const { return pi.size(); }
  Eigen::Index n_symbols() const { return b.cols(); }

  template <typename Other>
  HmmModel<Other> cast() const {
    return {pi.template cast<Other>(), a.template cast<Other>(),
            b.template cast<Other>()};
  }
};

inline constexpr double kStochasticTolerance = 1e-9;

namespace detail {

template <typename Derived>
void check_distribution(const Eigen::DenseBase<Derived>& row,
                        const std::string& what, double tolerance,
                        std::vector<std::string>& out) {
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    const double v = static_cast<double>(row(k));
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      std::ostringstream msg;
      msg.precision(12);
      msg << what << " entry " << k << " out of [0, 1]: " << v;
      out.push_back(msg.str());
    }
  }
  const double sum = static_cast<double>(row.sum());
  if (!(std::abs(sum - 1.0) <= tolerance)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << what << " sums to " << sum;
    out.push_back(msg.str());
  }
}

}  // namespace detail

/// Returns every stochasticity or shape violation; empty means the model is
/// valid.
template <typename Scalar>
std::vector<std::string> validate_model(const HmmModel<Scalar>& model,
                                        double tolerance = kStochasticTolerance) {
  std::vector<std::string> violations;
  const auto n = model.n_states();
  if (n < 1) violations.emplace_back("n_states must be >= 1");
  if (model.b.cols() < 1) violations.emplace_back("n_symbols must be >= 1");
  if (model.a.rows() != n || model.a.cols() != n)
    violations.emplace_back("a must be n_states x n_states");
  if (model.b.rows() != n) violations.emplace_back("b must have n_states rows");
  if (!violations.empty()) return violations;

  detail::check_distribution(model.pi, "pi", tolerance, violations);
  for (Eigen::Index i = 0; i < n; ++i) {
    detail::check_distribution(model.a.row(i), "a row " + std::to_string(i),
                               tolerance, violations);
    detail::check_distribution(model.b.row(i), "b row " + std::to_string(i),
                               tolerance, violations);
  }
  return violations;
}

template <typename Scalar>
void require_valid(const HmmModel<Scalar>& model) {
  const auto violations = validate_model(model);
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& v : violations) msg += " " + v + ";";
  throw std::invalid_argument(msg);
}

/// Rescales pi and every row of a and b to sum to one. Rows summing to zero
/// are left untouched (validation will still reject them).
template <typename Scalar>
HmmModel<Scalar> renormalized(HmmModel<Scalar> model) {
  auto normalize_rows = [](auto& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Scalar s = m.row(i).sum();
      if (s > Scalar(0)) m.row(i) /= s;
    }
  };
  const Scalar s = model.pi.sum();
  if (s > Scalar(0)) model.pi /= s;
  normalize_rows(model.a);
  normalize_rows(model.b);
  return model;
}

// ---------------------------------------------------------------------------
// Randomness. Streams are std::mt19937_64 (fully specified by the standard);
// doubles and categorical draws are derived by hand so results do not depend
// on the standard library's distribution implementations.

using Rng = std::mt19937_64;

/// SplitMix64 finalizer, used to derive independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws an index from a probability row by inverse CDF. Zero-probability
/// entries are never returned.
template <typename Derived>
Eigen::Index sample_categorical(const Eigen::DenseBase<Derived>& probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  Eigen::Index last_positive = 0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    const double p = static_cast<double>(probs(k));
    if (p <= 0.0) continue;
    last_positive = k;
    acc += p;
    if (u < acc) return k;
  }
  return last_positive;
}

/// Samples `count` sequences of exactly `length` symbols from the model.
template <typename Scalar>
Dataset sample_sequences(const HmmModel<Scalar>& model, int count, int length,
                         std::uint64_t seed) {
  require_valid(model);
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (length < 1) throw std::invalid_argument("length must be >= 1");

  Rng rng(seed);
  Dataset data;
  data.sequences.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    ObservationSequence seq(static_cast<std::size_t>(length));
    auto state = sample_categorical(model.pi, rng);
    for (int t = 0; t < length; ++t) {
      seq[static_cast<std::size_t>(t)] =
          static_cast<Symbol>(sample_categorical(model.b.row(state), rng));
      if (t + 1 < length) state = sample_categorical(model.a.row(state), rng);
    }
    data.sequences.push_back(std::move(seq));
  }
  return data;
}

/// Throws std::out_of_range if any symbol is outside [0, n_symbols).
inline void check_symbols(const ObservationSequence& seq, Eigen::Index n_symbols) {
  if (seq.empty()) throw std::invalid_argument("empty sequence");
  for (std::size_t t = 0; t < seq.size(); ++t) {
    if (seq[t] < 0 || seq[t] >= n_symbols) {
      throw std::out_of_range("symbol " + std::to_string(seq[t]) +
                              " at position " + std::to_string(t) +
                              " outside [0, " + std::to_string(n_symbols) + ")");
    }
  }
}

}  // namespace hmmaccel
