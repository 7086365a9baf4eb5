#include "hmmaccel/bench.hpp"
#include "hmmaccel/training.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace hmmaccel;

TEST_CASE("a single-sequence corpus gives a speedup near one") {
  const Dataset corpus{0, {{0, 1, 2, 1, 0}}};
  BenchOptions options;
  options.runs = 20;
  options.iterations = 50;
  const auto r = bench_corpus(corpus, initialize_model(3, 3, 1), options);
  CHECK(r.n_sequences == 1);
  CHECK(r.n_clusters_euclidean == 1);
  CHECK(r.n_clusters_dtw == 1);
  CHECK(r.speedup > 0.25);
  CHECK(r.speedup < 4.0);
  CHECK(r.max_parameter_gap == 0.0);
}

TEST_CASE("no redundancy means clustering only costs time") {
  // 400 distinct sequences without consecutive repeats: nothing merges.
  Dataset corpus;
  std::set<ObservationSequence> seen;
  Rng rng(5);
  while (corpus.sequences.size() < 400) {
    ObservationSequence s;
    while (s.size() < 6) {
      const Symbol v = std::min(static_cast<int>(uniform01(rng) * 10), 9);
      if (s.empty() || s.back() != v) s.push_back(v);
    }
    if (seen.insert(s).second) corpus.sequences.push_back(s);
  }
  BenchOptions options;
  options.runs = 3;
  options.iterations = 2;
  options.distance = Distance::kDtw;
  const auto r = bench_corpus(corpus, initialize_model(3, 10, 1), options);
  CHECK(r.n_clusters_dtw == 400);
  CHECK(r.n_clusters_euclidean == 400);
  CHECK(r.speedup_total < 1.0);
}

TEST_CASE("run_bench rows satisfy the report invariants") {
  Rng rng(9);
  const auto generator = oracle::random_model(3, 4, rng);
  BenchOptions options;
  options.sizes = {50, 200};
  options.runs = 2;
  options.iterations = 5;
  const auto rows = run_bench(generator, options);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.n_clusters_dtw <= r.n_clusters_euclidean);
    CHECK(r.n_clusters_euclidean <= r.n_sequences);
    CHECK(r.t_em_s >= 0);
    CHECK(r.speedup > 0);
    CHECK(r.speedup_total > 0);
    CHECK(r.max_parameter_gap <= 1e-8);  // euclidean merges exact duplicates only
  }

  std::ostringstream csv, text;
  write_report_csv(csv, rows);
  write_report_text(text, rows);
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header.rfind("n_sequences,", 0) == 0);
  CHECK(first.rfind("50,", 0) == 0);
  CHECK(text.str().find("speedup_total") != std::string::npos);

  // Same seed, same corpora.
  const auto again = run_bench(generator, options);
  CHECK(again[1].n_clusters_euclidean == rows[1].n_clusters_euclidean);
  CHECK(again[1].n_clusters_dtw == rows[1].n_clusters_dtw);
}

TEST_CASE("pooled sampling bounds the distinct count") {
  Rng rng(10);
  const auto m = oracle::random_model(3, 10, rng);
  const auto d = sample_pooled(m, 5000, 5, 40, 3);
  CHECK(d.sequences.size() == 5000);
  std::set<ObservationSequence> distinct(d.sequences.begin(), d.sequences.end());
  CHECK(distinct.size() <= 40);
  CHECK(distinct.size() >= 30);
  CHECK(sample_pooled(m, 100, 5, 40, 3).sequences == sample_pooled(m, 100, 5, 40, 3).sequences);
}

TEST_CASE("stretched pattern corpus") {
  const auto d = stretched_pattern_corpus(25, 5, 9, 2000, 10, 4);
  REQUIRE(d.sequences.size() == 2000);
  std::set<ObservationSequence> collapsed;
  for (const auto& s : d.sequences) {
    CHECK(s.size() == 9);
    const auto c = run_length_collapse(s);
    CHECK(c.size() == 5);
    collapsed.insert(c);
  }
  CHECK(collapsed.size() == 25);
  CHECK_THROWS_AS(stretched_pattern_corpus(5, 6, 5, 10, 10, 1), std::invalid_argument);
}
