#pragma once

#include "hmmaccel/clustering.hpp"
#include "hmmaccel/inference.hpp"
#include "hmmaccel/model.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hmmaccel {

enum class TrainingMode { kClassical, kWeighted };

template <typename Scalar = double>
struct TrainingConfig {
  int iterations = 50;
  std::uint64_t seed = 0;  // used only when the caller builds lambda^0 from it
  // Stop once the (weighted) log-likelihood improves by less than this.
  std::optional<double> ll_tolerance;
  TrainingMode mode = TrainingMode::kClassical;
  // E-step workers. The reduction order is fixed, so results do not depend
  // on this value.
  int threads = 1;
  // Called after every M-step with the 1-based iteration, the updated model
  // and the log-likelihood of the model it replaced.
  std::function<void(int, const HmmModel<Scalar>&, Scalar)> on_iteration;
};

template <typename Scalar = double>
struct TrainingTrace {
  // Entry t is the total (weight-multiplied) log-likelihood of lambda^(t-1),
  // computed during the E-step of iteration t.
  std::vector<Scalar> per_iteration_log_likelihood;
  std::vector<double> cumulative_seconds;
  HmmModel<Scalar> final_model;
  double wall_time_seconds = 0.0;
  std::vector<std::string> warnings;
};

/// Strictly positive random model, deterministic in the seed.
template <typename Scalar = double>
HmmModel<Scalar> initialize_model(int n_states, int n_symbols, std::uint64_t seed) {
  if (n_states < 1 || n_symbols < 1)
    throw std::invalid_argument("initialize_model: n_states and n_symbols must be >= 1");
  Rng rng(seed);
  auto fill_rows = [&rng](auto& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index k = 0; k < m.cols(); ++k)
        m(i, k) = static_cast<Scalar>(0.5 + uniform01(rng));
      m.row(i) /= m.row(i).sum();
    }
  };
  HmmModel<Scalar> model;
  typename HmmModel<Scalar>::Matrix pi(1, n_states);
  model.a.resize(n_states, n_states);
  model.b.resize(n_states, n_symbols);
  fill_rows(pi);
  fill_rows(model.a);
  fill_rows(model.b);
  model.pi = pi.row(0).transpose();
  return model;
}

namespace detail {

// Expected counts contributed by one sequence, before weighting.
template <typename Scalar>
struct SequenceCounts {
  typename HmmModel<Scalar>::Vector initial;
  typename HmmModel<Scalar>::Matrix transitions;
  typename HmmModel<Scalar>::Matrix emissions;
  Scalar log_likelihood = 0;
};

template <typename Scalar>
SequenceCounts<Scalar> expected_counts(const HmmModel<Scalar>& model,
                                       const ObservationSequence& seq) {
  const auto fb = forward_backward(model, seq);
  SequenceCounts<Scalar> c;
  c.log_likelihood = fb.log_likelihood;
  c.initial = fb.gamma.row(0).transpose();
  c.transitions.setZero(model.n_states(), model.n_states());
  for (const auto& x : fb.xi) c.transitions += x;
  c.emissions.setZero(model.n_states(), model.n_symbols());
  for (std::size_t t = 0; t < seq.size(); ++t)
    c.emissions.col(seq[t]) += fb.gamma.row(static_cast<Eigen::Index>(t)).transpose();
  return c;
}

template <typename Scalar>
struct Accumulator {
  typename HmmModel<Scalar>::Vector initial;
  typename HmmModel<Scalar>::Matrix transitions;
  typename HmmModel<Scalar>::Matrix emissions;
  Scalar total_weight = 0;
  Scalar log_likelihood = 0;

  Accumulator(Eigen::Index n, Eigen::Index m) {
    initial.setZero(n);
    transitions.setZero(n, n);
    emissions.setZero(n, m);
  }

  void add(const SequenceCounts<Scalar>& c, Scalar w) {
    initial += w * c.initial;
    transitions += w * c.transitions;
    emissions += w * c.emissions;
    total_weight += w;
    log_likelihood += w * c.log_likelihood;
  }
};

inline std::string impossible_message(std::size_t index, int iteration) {
  return "impossible sequence: sequence " + std::to_string(index + 1) +
         " has zero probability at iteration " + std::to_string(iteration);
}

// One E-step over all sequences. Counts are reduced in sequence order
// regardless of the worker count.
template <typename Scalar>
Accumulator<Scalar> e_step(const HmmModel<Scalar>& model,
                           std::span<const ObservationSequence> seqs,
                           std::span<const Scalar> weights, int threads,
                           int iteration) {
  Accumulator<Scalar> acc(model.n_states(), model.n_symbols());
  const std::size_t count = seqs.size();
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);

  if (workers <= 1) {
    for (std::size_t m = 0; m < count; ++m) {
      try {
        acc.add(expected_counts(model, seqs[m]), weights[m]);
      } catch (const ImpossibleSequence&) {
        throw ImpossibleSequence(impossible_message(m, iteration));
      }
    }
    return acc;
  }

  std::vector<SequenceCounts<Scalar>> counts(count);
  std::vector<std::size_t> failed(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t m = w; m < count; m += workers) {
        try {
          counts[m] = expected_counts(model, seqs[m]);
        } catch (const ImpossibleSequence&) {
          failed[w] = m;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  const std::size_t first_failed = *std::min_element(failed.begin(), failed.end());
  if (first_failed < count)
    throw ImpossibleSequence(impossible_message(first_failed, iteration));
  for (std::size_t m = 0; m < count; ++m) acc.add(counts[m], weights[m]);
  return acc;
}

template <typename Scalar, typename Rows>
void normalize_rows_or_keep(const Rows& numerator, typename HmmModel<Scalar>::Matrix& target,
                            const char* name, int iteration,
                            std::vector<std::string>& warnings) {
  for (Eigen::Index i = 0; i < numerator.rows(); ++i) {
    const Scalar s = numerator.row(i).sum();
    if (s > Scalar(0)) {
      target.row(i) = numerator.row(i) / s;
    } else {
      warnings.push_back(std::string("iteration ") + std::to_string(iteration) +
                         ": state " + std::to_string(i) +
                         " has zero expected occupancy; " + name + " row kept");
    }
  }
}

}  // namespace detail

/// Baum-Welch where sequence m contributes its expected counts multiplied by
/// weights[m]. Both em_train and weighted_em_train run through here.
template <typename Scalar>
TrainingTrace<Scalar> train_weighted_sequences(const HmmModel<Scalar>& init,
                                               std::span<const ObservationSequence> seqs,
                                               std::span<const Scalar> weights,
                                               const TrainingConfig<Scalar>& config) {
  require_valid(init);
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (config.ll_tolerance && *config.ll_tolerance < 0)
    throw std::invalid_argument("ll_tolerance must be >= 0");
  if (seqs.empty()) throw std::invalid_argument("no training sequences");
  if (seqs.size() != weights.size())
    throw std::invalid_argument("sequence and weight counts differ");
  for (const auto& s : seqs) check_symbols(s, init.n_symbols());

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  TrainingTrace<Scalar> trace;
  HmmModel<Scalar> model = init;
  for (int it = 1; it <= config.iterations; ++it) {
    auto acc = detail::e_step<Scalar>(model, seqs, weights, config.threads, it);
    const Scalar ll = acc.log_likelihood;
    const bool converged =
        config.ll_tolerance && !trace.per_iteration_log_likelihood.empty() &&
        static_cast<double>(ll - trace.per_iteration_log_likelihood.back()) <
            *config.ll_tolerance;
    trace.per_iteration_log_likelihood.push_back(ll);
    if (converged) {
      trace.cumulative_seconds.push_back(
          std::chrono::duration<double>(Clock::now() - start).count());
      break;
    }

    model.pi = acc.initial / acc.total_weight;
    detail::normalize_rows_or_keep<Scalar>(acc.transitions, model.a, "a", it,
                                           trace.warnings);
    detail::normalize_rows_or_keep<Scalar>(acc.emissions, model.b, "b", it,
                                           trace.warnings);
    trace.cumulative_seconds.push_back(
        std::chrono::duration<double>(Clock::now() - start).count());
    if (config.on_iteration) config.on_iteration(it, model, ll);
  }
  trace.final_model = std::move(model);
  trace.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return trace;
}

/// Classical multi-sequence Baum-Welch: every sequence has weight one.
template <typename Scalar>
TrainingTrace<Scalar> em_train(const HmmModel<Scalar>& init, const Dataset& data,
                               const TrainingConfig<Scalar>& config = {}) {
  const std::vector<Scalar> weights(data.sequences.size(), Scalar(1));
  return train_weighted_sequences<Scalar>(init, data.sequences, weights, config);
}

/// Baum-Welch over cluster representatives, each count scaled by the
/// cluster weight.
template <typename Scalar>
TrainingTrace<Scalar> weighted_em_train(const HmmModel<Scalar>& init,
                                        const ClusterTable& table,
                                        const TrainingConfig<Scalar>& config = {}) {
  if (table.entries.empty()) throw std::invalid_argument("empty cluster table");
  std::vector<ObservationSequence> seqs;
  std::vector<Scalar> weights;
  seqs.reserve(table.entries.size());
  weights.reserve(table.entries.size());
  for (const auto& e : table.entries) {
    if (e.weight < 1) throw std::invalid_argument("cluster weight must be >= 1");
    seqs.push_back(e.representative);
    weights.push_back(static_cast<Scalar>(e.weight));
  }
  return train_weighted_sequences<Scalar>(init, seqs, weights, config);
}

/// Largest absolute entry difference across pi, a and b.
template <typename Scalar>
Scalar max_parameter_difference(const HmmModel<Scalar>& x, const HmmModel<Scalar>& y) {
  if (x.pi.size() != y.pi.size() || x.b.cols() != y.b.cols())
    throw std::invalid_argument("model dimensions differ");
  return std::max({(x.pi - y.pi).cwiseAbs().maxCoeff(),
                   (x.a - y.a).cwiseAbs().maxCoeff(),
                   (x.b - y.b).cwiseAbs().maxCoeff()});
}

}  // namespace hmmaccel
