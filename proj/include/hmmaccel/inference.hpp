#pragma once

#include "hmmaccel/model.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmmaccel {

/// The sequence has probability exactly zero under the model.
class ImpossibleSequence : public std::runtime_error {
 public:
  ImpossibleSequence() : std::runtime_error("impossible sequence") {}
  explicit ImpossibleSequence(const std::string& what) : std::runtime_error(what) {}
};

template <typename Scalar = double>
struct ForwardBackwardResult {
  using Vector = typename HmmModel<Scalar>::Vector;
  using Matrix = typename HmmModel<Scalar>::Matrix;

  Scalar log_likelihood = 0;
  Matrix gamma;             // T x N state posteriors
  std::vector<Matrix> xi;   // T-1 slices, N x N transition posteriors
  Vector scaling;           // scaling(t) = 1 / sum_i alpha_t(i) before normalization
};

template <typename Scalar = double>
struct ViterbiResult {
  std::vector<int> path;
  Scalar log_probability = 0;
};

namespace detail {

// Scaled forward pass. Column t of `alpha` holds the normalized forward
// variables at time t.
template <typename Scalar>
void forward_scaled(const HmmModel<Scalar>& model, const ObservationSequence& seq,
                    typename HmmModel<Scalar>::Matrix& alpha,
                    typename HmmModel<Scalar>::Vector& scaling) {
  check_symbols(seq, model.n_symbols());
  const auto n = model.n_states();
  const auto steps = static_cast<Eigen::Index>(seq.size());
  alpha.resize(n, steps);
  scaling.resize(steps);

  for (Eigen::Index t = 0; t < steps; ++t) {
    const auto emit = model.b.col(seq[static_cast<std::size_t>(t)]);
    if (t == 0) {
      alpha.col(0) = model.pi.cwiseProduct(emit);
    } else {
      alpha.col(t) = (model.a.transpose() * alpha.col(t - 1)).cwiseProduct(emit);
    }
    const Scalar total = alpha.col(t).sum();
    if (total == Scalar(0)) {
      throw ImpossibleSequence("impossible sequence (zero probability at t=" +
                               std::to_string(t) + ")");
    }
    scaling(t) = Scalar(1) / total;
    alpha.col(t) *= scaling(t);
  }
}

template <typename Scalar>
Scalar log_likelihood_from_scaling(const typename HmmModel<Scalar>::Vector& scaling) {
  using std::log;
  Scalar ll = 0;
  for (Eigen::Index t = 0; t < scaling.size(); ++t) ll -= log(scaling(t));
  return ll;
}

}  // namespace detail

/// Scaled forward-backward: log P(O | model), state posteriors gamma and
/// transition posteriors xi. Throws ImpossibleSequence when the forward mass
/// vanishes, std::out_of_range for symbols outside the alphabet.
template <typename Scalar>
ForwardBackwardResult<Scalar> forward_backward(const HmmModel<Scalar>& model,
                                               const ObservationSequence& seq) {
  using Matrix = typename HmmModel<Scalar>::Matrix;
  using Vector = typename HmmModel<Scalar>::Vector;

  ForwardBackwardResult<Scalar> r;
  Matrix alpha;
  detail::forward_scaled(model, seq, alpha, r.scaling);
  r.log_likelihood = detail::log_likelihood_from_scaling<Scalar>(r.scaling);

  const auto n = model.n_states();
  const auto steps = static_cast<Eigen::Index>(seq.size());
  Matrix beta(n, steps);
  beta.col(steps - 1).setOnes();
  for (Eigen::Index t = steps - 2; t >= 0; --t) {
    const auto emit = model.b.col(seq[static_cast<std::size_t>(t + 1)]);
    beta.col(t) = (model.a * emit.cwiseProduct(beta.col(t + 1))) * r.scaling(t + 1);
  }

  r.gamma.resize(steps, n);
  for (Eigen::Index t = 0; t < steps; ++t) {
    Vector g = alpha.col(t).cwiseProduct(beta.col(t));
    r.gamma.row(t) = (g / g.sum()).transpose();
  }

  r.xi.reserve(static_cast<std::size_t>(steps > 0 ? steps - 1 : 0));
  for (Eigen::Index t = 0; t + 1 < steps; ++t) {
    const auto emit = model.b.col(seq[static_cast<std::size_t>(t + 1)]);
    Matrix x = (alpha.col(t) * emit.cwiseProduct(beta.col(t + 1)).transpose())
                   .cwiseProduct(model.a);
    x /= x.sum();
    r.xi.push_back(std::move(x));
  }
  return r;
}

/// log P(O | model); same arithmetic as forward_backward's likelihood.
template <typename Scalar>
Scalar likelihood(const HmmModel<Scalar>& model, const ObservationSequence& seq) {
  typename HmmModel<Scalar>::Matrix alpha;
  typename HmmModel<Scalar>::Vector scaling;
  detail::forward_scaled(model, seq, alpha, scaling);
  return detail::log_likelihood_from_scaling<Scalar>(scaling);
}

namespace detail {

// Candidate beats incumbent only by more than log-space rounding noise, so
// paths built from the same factors in a different order count as ties.
template <typename Scalar>
bool clearly_greater(Scalar candidate, Scalar incumbent) {
  using std::abs;
  if (incumbent == -std::numeric_limits<Scalar>::infinity())
    return candidate > incumbent;
  return candidate > incumbent + Scalar(1e-12) * (Scalar(1) + abs(incumbent));
}

}  // namespace detail

/// Most probable state path, in log space. Ties (equal up to 1e-12 relative
/// in probability) go to the lowest state index at every argmax.
template <typename Scalar>
ViterbiResult<Scalar> viterbi(const HmmModel<Scalar>& model,
                              const ObservationSequence& seq) {
  using std::log;
  using Matrix = typename HmmModel<Scalar>::Matrix;
  check_symbols(seq, model.n_symbols());
  const auto n = model.n_states();
  const auto steps = static_cast<Eigen::Index>(seq.size());
  constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();

  const Matrix log_a = model.a.array().log().matrix();
  const Matrix log_b = model.b.array().log().matrix();

  Matrix delta(n, steps);
  Eigen::MatrixXi back(n, steps);
  delta.col(0) = model.pi.array().log().matrix() + log_b.col(seq[0]);
  for (Eigen::Index t = 1; t < steps; ++t) {
    const auto o = seq[static_cast<std::size_t>(t)];
    for (Eigen::Index j = 0; j < n; ++j) {
      Scalar best = kNegInf;
      int arg = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar v = delta(i, t - 1) + log_a(i, j);
        if (detail::clearly_greater(v, best)) {
          best = v;
          arg = static_cast<int>(i);
        }
      }
      delta(j, t) = best + log_b(j, o);
      back(j, t) = arg;
    }
  }

  ViterbiResult<Scalar> r;
  r.log_probability = kNegInf;
  int last = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (detail::clearly_greater(delta(i, steps - 1), r.log_probability)) {
      r.log_probability = delta(i, steps - 1);
      last = static_cast<int>(i);
    }
  }
  if (r.log_probability == kNegInf) throw ImpossibleSequence();

  r.path.assign(static_cast<std::size_t>(steps), 0);
  r.path.back() = last;
  for (Eigen::Index t = steps - 1; t > 0; --t)
    r.path[static_cast<std::size_t>(t - 1)] =
        back(r.path[static_cast<std::size_t>(t)], t);
  return r;
}

}  // namespace hmmaccel
