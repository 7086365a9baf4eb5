#pragma once

#include "hmmaccel/clustering.hpp"
#include "hmmaccel/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hmmaccel {

struct BenchOptions {
  std::vector<int> sizes{100, 1000, 10000};
  int length = 5;
  int iterations = 50;
  int runs = 10;
  std::uint64_t seed = 1;
  int n_states = 3;                        // states of the trained model
  Distance distance = Distance::kEuclidean;  // clustering fed to weighted EM
  int threads = 1;
  // When > 0, corpora are drawn from a pool of at most this many distinct
  // model samples.
  int max_distinct = 0;
};

/// One row of the comparison; times are means over `runs`.
struct BenchReport {
  std::int64_t n_sequences = 0;
  std::int64_t n_clusters_euclidean = 0;
  std::int64_t n_clusters_dtw = 0;
  double t_cluster_euclidean_s = 0;
  double t_cluster_dtw_s = 0;
  double t_em_s = 0;
  double t_weighted_em_s = 0;
  double speedup = 0;        // t_em / t_weighted_em
  double speedup_total = 0;  // t_em / (t_cluster[distance] + t_weighted_em)
  Distance distance = Distance::kEuclidean;
  int runs = 0;
  int threads = 1;
  double max_parameter_gap = 0;  // classical vs weighted final models
};

/// Times both clusterings and both trainers on a fixed corpus. Classical and
/// weighted EM start from the same `init`.
BenchReport bench_corpus(const Dataset& corpus, const HmmModel<double>& init,
                         const BenchOptions& options);

/// Generates one corpus per size from `generator` and benchmarks it. All
/// randomness is derived from options.seed.
std::vector<BenchReport> run_bench(const HmmModel<double>& generator,
                                   const BenchOptions& options);

/// `count` draws (with replacement) from a pool of at most `max_distinct`
/// distinct sequences sampled from the model.
Dataset sample_pooled(const HmmModel<double>& model, int count, int length,
                      int max_distinct, std::uint64_t seed);

/// Corpus with warp redundancy: `n_patterns` distinct base patterns without
/// consecutive repeats, each emitted at `sequence_length` symbols by randomly
/// repeating pattern symbols in place. Every pattern occurs at least once when
/// count >= n_patterns. All sequences share one length so the Euclidean
/// distance applies.
Dataset stretched_pattern_corpus(int n_patterns, int pattern_length,
                                 int sequence_length, int count, int n_symbols,
                                 std::uint64_t seed);

void write_report_text(std::ostream& out, const std::vector<BenchReport>& rows);
void write_report_csv(std::ostream& out, const std::vector<BenchReport>& rows);

}  // namespace hmmaccel
