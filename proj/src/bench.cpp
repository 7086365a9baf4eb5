#include "hmmaccel/bench.hpp"

#include "hmmaccel/training.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>
#include <set>
#include <stdexcept>

namespace hmmaccel {

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_seconds(F&& f) {
  const auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BenchReport bench_corpus(const Dataset& corpus, const HmmModel<double>& init,
                         const BenchOptions& options) {
  if (options.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (corpus.sequences.empty()) throw std::invalid_argument("empty corpus");

  BenchReport r;
  r.n_sequences = static_cast<std::int64_t>(corpus.sequences.size());
  r.distance = options.distance;
  r.runs = options.runs;
  r.threads = options.threads;

  TrainingConfig<double> config;
  config.iterations = options.iterations;
  config.threads = options.threads;

  for (const auto& s : corpus.sequences)
    if (s.size() != corpus.sequences.front().size())
      throw std::invalid_argument("bench corpus must have equal-length sequences");

  for (int run = 0; run < options.runs; ++run) {
    ClusterTable euclid;
    ClusterTable warped;
    r.t_cluster_euclidean_s +=
        time_seconds([&] { euclid = build_clusters(corpus, Distance::kEuclidean); });
    r.t_cluster_dtw_s += time_seconds([&] { warped = build_clusters(corpus, Distance::kDtw); });

    TrainingTrace<double> classical;
    TrainingTrace<double> weighted;
    const ClusterTable& selected =
        options.distance == Distance::kDtw ? warped : euclid;
    r.t_em_s += time_seconds([&] { classical = em_train(init, corpus, config); });
    r.t_weighted_em_s +=
        time_seconds([&] { weighted = weighted_em_train(init, selected, config); });

    r.n_clusters_euclidean = static_cast<std::int64_t>(euclid.size());
    r.n_clusters_dtw = static_cast<std::int64_t>(warped.size());
    r.max_parameter_gap =
        std::max(r.max_parameter_gap,
                 max_parameter_difference(classical.final_model, weighted.final_model));
  }

  const double runs = options.runs;
  r.t_cluster_euclidean_s /= runs;
  r.t_cluster_dtw_s /= runs;
  r.t_em_s /= runs;
  r.t_weighted_em_s /= runs;
  const double t_cluster = options.distance == Distance::kDtw ? r.t_cluster_dtw_s
                                                              : r.t_cluster_euclidean_s;
  r.speedup = r.t_em_s / r.t_weighted_em_s;
  r.speedup_total = r.t_em_s / (t_cluster + r.t_weighted_em_s);
  return r;
}

std::vector<BenchReport> run_bench(const HmmModel<double>& generator,
                                   const BenchOptions& options) {
  require_valid(generator);
  if (options.sizes.empty()) throw std::invalid_argument("no bench sizes given");
  for (int size : options.sizes)
    if (size < 1) throw std::invalid_argument("bench sizes must be >= 1");

  const auto init = initialize_model<double>(
      options.n_states, static_cast<int>(generator.n_symbols()),
      derive_seed(options.seed, 0x696e6974));  // "init"

  std::vector<BenchReport> rows;
  for (int size : options.sizes) {
    const auto corpus_seed = derive_seed(options.seed, static_cast<std::uint64_t>(size));
    const Dataset corpus =
        options.max_distinct > 0
            ? sample_pooled(generator, size, options.length, options.max_distinct, corpus_seed)
            : sample_sequences(generator, size, options.length, corpus_seed);
    rows.push_back(bench_corpus(corpus, init, options));
  }
  return rows;
}

Dataset sample_pooled(const HmmModel<double>& model, int count, int length,
                      int max_distinct, std::uint64_t seed) {
  if (max_distinct < 1) throw std::invalid_argument("max_distinct must be >= 1");
  const int candidates = std::max(max_distinct * 20, 1000);
  const Dataset drawn = sample_sequences(model, candidates, length, derive_seed(seed, 1));

  std::vector<ObservationSequence> pool;
  std::set<ObservationSequence> seen;
  for (const auto& s : drawn.sequences) {
    if (static_cast<int>(pool.size()) == max_distinct) break;
    if (seen.insert(s).second) pool.push_back(s);
  }

  Rng rng(derive_seed(seed, 2));
  Dataset out;
  out.sequences.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(pool.size()));
    out.sequences.push_back(pool[std::min(k, pool.size() - 1)]);
  }
  return out;
}

Dataset stretched_pattern_corpus(int n_patterns, int pattern_length,
                                 int sequence_length, int count, int n_symbols,
                                 std::uint64_t seed) {
  if (n_patterns < 1 || pattern_length < 1 || count < 1 || n_symbols < 2)
    throw std::invalid_argument("stretched_pattern_corpus: bad arguments");
  if (sequence_length < pattern_length)
    throw std::invalid_argument("sequence_length must be >= pattern_length");

  Rng rng(seed);
  auto draw = [&rng](int bound) {
    return std::min(static_cast<int>(uniform01(rng) * bound), bound - 1);
  };

  std::vector<ObservationSequence> patterns;
  std::set<ObservationSequence> seen;
  for (int attempt = 0; static_cast<int>(patterns.size()) < n_patterns; ++attempt) {
    if (attempt > 1000 * n_patterns)
      throw std::invalid_argument("cannot draw enough distinct patterns");
    ObservationSequence p;
    while (static_cast<int>(p.size()) < pattern_length) {
      const Symbol s = draw(n_symbols);
      if (p.empty() || p.back() != s) p.push_back(s);
    }
    if (seen.insert(p).second) patterns.push_back(std::move(p));
  }

  Dataset out;
  out.sequences.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto& p = patterns[static_cast<std::size_t>(i < n_patterns ? i : draw(n_patterns))];
    std::vector<int> repeats(p.size(), 1);
    for (int extra = 0; extra < sequence_length - pattern_length; ++extra)
      ++repeats[static_cast<std::size_t>(draw(pattern_length))];
    ObservationSequence s;
    s.reserve(static_cast<std::size_t>(sequence_length));
    for (std::size_t k = 0; k < p.size(); ++k) s.insert(s.end(), repeats[k], p[k]);
    out.sequences.push_back(std::move(s));
  }
  return out;
}

void write_report_text(std::ostream& out, const std::vector<BenchReport>& rows) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(6);
  out << std::left << std::setw(10) << "sequences" << std::setw(10) << "k_euclid"
      << std::setw(8) << "k_dtw" << std::setw(14) << "t_clu_euclid" << std::setw(14)
      << "t_clu_dtw" << std::setw(14) << "t_em" << std::setw(14) << "t_weighted"
      << std::setw(12) << "speedup" << std::setw(14) << "speedup_total"
      << std::setw(10) << "distance" << std::setw(6) << "runs" << std::setw(8)
      << "threads" << "max_gap\n";
  for (const auto& r : rows) {
    out << std::setw(10) << r.n_sequences << std::setw(10) << r.n_clusters_euclidean
        << std::setw(8) << r.n_clusters_dtw << std::setw(14) << r.t_cluster_euclidean_s
        << std::setw(14) << r.t_cluster_dtw_s << std::setw(14) << r.t_em_s
        << std::setw(14) << r.t_weighted_em_s << std::setw(12) << r.speedup
        << std::setw(14) << r.speedup_total << std::setw(10) << to_string(r.distance)
        << std::setw(6) << r.runs << std::setw(8) << r.threads << r.max_parameter_gap
        << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void write_report_csv(std::ostream& out, const std::vector<BenchReport>& rows) {
  const auto precision = out.precision();
  out << std::setprecision(6);
  out << "n_sequences,n_clusters_euclidean,n_clusters_dtw,t_cluster_euclidean_s,"
         "t_cluster_dtw_s,t_em_s,t_weighted_em_s,speedup,speedup_total,distance,"
         "runs,threads,max_parameter_gap\n";
  for (const auto& r : rows) {
    out << r.n_sequences << ',' << r.n_clusters_euclidean << ',' << r.n_clusters_dtw
        << ',' << r.t_cluster_euclidean_s << ',' << r.t_cluster_dtw_s << ','
        << r.t_em_s << ',' << r.t_weighted_em_s << ',' << r.speedup << ','
        << r.speedup_total << ',' << to_string(r.distance) << ',' << r.runs << ','
        << r.threads << ',' << r.max_parameter_gap << '\n';
  }
  out.precision(precision);
}

}  // namespace hmmaccel
