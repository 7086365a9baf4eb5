// hmmaccel: sequence generation, clustering, (weighted) Baum-Welch training,
// evaluation and the clustering-vs-classical training benchmark.

#include "hmmaccel/bench.hpp"
#include "hmmaccel/clustering.hpp"
#include "hmmaccel/dtw.hpp"
#include "hmmaccel/inference.hpp"
#include "hmmaccel/io.hpp"
#include "hmmaccel/training.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace hmmaccel;

int threads_from_env() {
  const char* v = std::getenv("HMMACCEL_THREADS");
  if (!v || !*v) return 1;
  try {
    return std::max(1, std::stoi(v));
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("HMMACCEL_THREADS must be an integer, got '") + v + "'");
  }
}

struct GenArgs {
  std::string model;
  int count = 0;
  int length = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool renormalize = false;
};

int run_gen(const GenArgs& args) {
  const auto model = io::load_model(args.model, args.renormalize);
  io::write_sequences(args.out, sample_sequences(model, args.count, args.length, args.seed));
  return 0;
}

struct ClusterArgs {
  std::string in;
  std::string out;
  std::string distance = "dtw";
  std::int64_t min_weight = 0;
  int category = 0;
  int symbol_base = 0;
};

int run_cluster(const ClusterArgs& args) {
  const auto data = io::read_sequences(args.in, args.category, args.symbol_base);
  if (data.sequences.empty())
    throw std::invalid_argument(args.in + ": no sequences");
  const auto start = std::chrono::steady_clock::now();
  auto table = build_clusters(data, parse_distance(args.distance));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (args.min_weight > 0) table = filter_low_weight(table, args.min_weight);
  io::save_clusters(args.out, table);
  std::cout << "clusters=" << table.size() << " total_weight=" << table.total_weight
            << " seconds=" << std::setprecision(6) << seconds << "\n";
  return 0;
}

struct TrainArgs {
  std::string in;
  std::string init_model;
  int states = 0;
  int symbols = 0;
  std::uint64_t seed = 0;
  int iterations = 50;
  double tolerance = -1;
  std::string out;
  std::string trace;
  int symbol_base = 0;
  bool renormalize = false;
};

int run_train(const TrainArgs& args) {
  const bool clustered = io::looks_like_json(args.in);
  ClusterTable table;
  Dataset data;
  if (clustered) {
    table = io::load_clusters(args.in);
  } else {
    data = io::read_sequences(args.in, 0, args.symbol_base);
    if (data.sequences.empty()) throw std::invalid_argument(args.in + ": no sequences");
  }

  Symbol max_symbol = 0;
  auto scan = [&max_symbol](const ObservationSequence& s) {
    max_symbol = std::max(max_symbol, *std::max_element(s.begin(), s.end()));
  };
  if (clustered) {
    for (const auto& e : table.entries) scan(e.representative);
  } else {
    for (const auto& s : data.sequences) scan(s);
  }

  HmmModel<double> init;
  if (!args.init_model.empty()) {
    init = io::load_model(args.init_model, args.renormalize);
  } else {
    if (args.states < 1) throw std::invalid_argument("--states is required without --init-model");
    const int symbols = args.symbols > 0 ? args.symbols : max_symbol + 1;
    init = initialize_model<double>(args.states, symbols, args.seed);
  }
  if (max_symbol >= init.n_symbols()) {
    throw std::invalid_argument("data uses symbol " + std::to_string(max_symbol) +
                                " but the initial model has only " +
                                std::to_string(init.n_symbols()) + " symbols");
  }

  TrainingConfig<double> config;
  config.iterations = args.iterations;
  config.seed = args.seed;
  config.threads = threads_from_env();
  if (args.tolerance >= 0) config.ll_tolerance = args.tolerance;
  config.mode = clustered ? TrainingMode::kWeighted : TrainingMode::kClassical;

  const auto trace = clustered ? weighted_em_train(init, table, config)
                               : em_train(init, data, config);
  io::save_model(args.out, trace.final_model);
  if (!args.trace.empty()) {
    std::ostringstream csv;
    io::write_trace_csv(csv, trace);
    io::write_file(args.trace, csv.str());
  }
  for (const auto& w : trace.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "mode=" << (clustered ? "weighted" : "classical")
            << " iterations=" << trace.per_iteration_log_likelihood.size()
            << " log_likelihood=" << std::setprecision(17)
            << trace.per_iteration_log_likelihood.back() << " seconds="
            << std::setprecision(6) << trace.wall_time_seconds << "\n";
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string seqs;
  int symbol_base = 0;
  bool renormalize = false;
};

int run_eval(const EvalArgs& args, bool decode) {
  const auto model = io::load_model(args.model, args.renormalize);
  const auto data = io::read_sequences(args.seqs, 0, args.symbol_base);
  std::cout << std::setprecision(17);
  for (const auto& seq : data.sequences) {
    try {
      if (decode) {
        const auto v = viterbi(model, seq);
        for (std::size_t t = 0; t < v.path.size(); ++t)
          std::cout << (t ? " " : "") << v.path[t];
        std::cout << "\t" << v.log_probability << "\n";
      } else {
        std::cout << likelihood(model, seq) << "\n";
      }
    } catch (const ImpossibleSequence&) {
      std::cout << "-inf\n";
    }
  }
  return 0;
}

struct DistArgs {
  std::string a;
  std::string b;
  std::string distance = "dtw";
  int symbol_base = 0;
};

int run_dist(const DistArgs& args) {
  const auto xs = io::read_sequences(args.a, 0, args.symbol_base);
  const auto ys = io::read_sequences(args.b, 0, args.symbol_base);
  const auto kind = parse_distance(args.distance);
  std::cout << std::setprecision(17);
  for (std::size_t i = 0; i < xs.sequences.size(); ++i) {
    for (std::size_t j = 0; j < ys.sequences.size(); ++j) {
      double d;
      try {
        d = distance(kind, xs.sequences[i], ys.sequences[j]);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(e.what()) + " between " + args.a +
                                    " sequence " + std::to_string(i + 1) + " and " +
                                    args.b + " sequence " + std::to_string(j + 1));
      }
      std::cout << (j ? " " : "") << d;
    }
    std::cout << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::string model = std::string(HMMACCEL_DATA_DIR) + "/model_3x10.json";
  std::vector<int> sizes{100, 1000, 10000};
  bool include_100k = false;
  int length = 5;
  int iterations = 50;
  int runs = 10;
  std::uint64_t seed = 1;
  int states = 0;
  int max_distinct = 0;
  std::string distance = "euclidean";
  std::string csv;
  bool renormalize = false;
};

int run_bench_cmd(const BenchArgs& args) {
  const auto generator = io::load_model(args.model, args.renormalize);
  BenchOptions options;
  options.sizes = args.sizes;
  if (args.include_100k &&
      std::find(options.sizes.begin(), options.sizes.end(), 100000) == options.sizes.end())
    options.sizes.push_back(100000);
  options.length = args.length;
  options.iterations = args.iterations;
  options.runs = args.runs;
  options.seed = args.seed;
  options.n_states = args.states > 0 ? args.states : static_cast<int>(generator.n_states());
  options.distance = parse_distance(args.distance);
  options.threads = threads_from_env();
  options.max_distinct = args.max_distinct;

  const auto rows = run_bench(generator, options);
  write_report_text(std::cout, rows);
  if (!args.csv.empty()) {
    std::ostringstream csv;
    write_report_csv(csv, rows);
    io::write_file(args.csv, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete HMM training accelerated by sequence clustering"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample sequences from a model");
  gen_cmd->add_option("--model", gen.model, "Model JSON")->required();
  gen_cmd->add_option("--count", gen.count, "Number of sequences")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--length", gen.length, "Symbols per sequence")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out, "Output sequence file")->required();
  gen_cmd->add_flag("--renormalize", gen.renormalize, "Renormalize model rows on load");

  ClusterArgs cl;
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a sequence file into weighted representatives");
  cluster_cmd->add_option("--in", cl.in, "Sequence file")->required();
  cluster_cmd->add_option("--out", cl.out, "Output cluster JSON")->required();
  cluster_cmd->add_option("--distance", cl.distance, "dtw or euclidean")
      ->check(CLI::IsMember({"dtw", "euclidean"}));
  cluster_cmd->add_option("--min-weight", cl.min_weight, "Drop clusters lighter than this")
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--category", cl.category, "Category id stored in the table");
  cluster_cmd->add_option("--symbol-base", cl.symbol_base, "Value subtracted from every symbol");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Baum-Welch on a sequence file or weighted on a cluster file");
  train_cmd->add_option("--in", tr.in, "Sequence file or cluster JSON")->required();
  auto* init_opt = train_cmd->add_option("--init-model", tr.init_model, "Initial model JSON");
  train_cmd->add_option("--states", tr.states, "States of a seeded initial model")
      ->excludes(init_opt)->check(CLI::PositiveNumber);
  train_cmd->add_option("--symbols", tr.symbols, "Symbols of a seeded initial model (default: max symbol + 1)")
      ->excludes(init_opt)->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", tr.seed, "Seed for the initial model");
  train_cmd->add_option("--iterations", tr.iterations, "EM iterations")->check(CLI::PositiveNumber);
  train_cmd->add_option("--tolerance", tr.tolerance, "Stop when log-likelihood gains less than this")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--out", tr.out, "Output model JSON")->required();
  train_cmd->add_option("--trace", tr.trace, "Output trace CSV");
  train_cmd->add_option("--symbol-base", tr.symbol_base, "Value subtracted from every symbol");
  train_cmd->add_flag("--renormalize", tr.renormalize, "Renormalize model rows on load");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Log-likelihood of every sequence");
  auto* decode_cmd = app.add_subcommand("decode", "Viterbi path of every sequence");
  for (auto* cmd : {eval_cmd, decode_cmd}) {
    cmd->add_option("--model", ev.model, "Model JSON")->required();
    cmd->add_option("--seqs", ev.seqs, "Sequence file")->required();
    cmd->add_option("--symbol-base", ev.symbol_base, "Value subtracted from every symbol");
    cmd->add_flag("--renormalize", ev.renormalize, "Renormalize model rows on load");
  }

  DistArgs di;
  auto* dist_cmd = app.add_subcommand("dist", "Pairwise distances between two sequence files");
  dist_cmd->add_option("--a", di.a, "First sequence file")->required();
  dist_cmd->add_option("--b", di.b, "Second sequence file")->required();
  dist_cmd->add_option("--distance", di.distance, "dtw or euclidean")
      ->check(CLI::IsMember({"dtw", "euclidean"}));
  dist_cmd->add_option("--symbol-base", di.symbol_base, "Value subtracted from every symbol");

  BenchArgs be;
  auto* bench_cmd = app.add_subcommand("bench", "Classical vs cluster-weighted training benchmark");
  bench_cmd->add_option("--model", be.model, "Generator model JSON");
  bench_cmd->add_option("--sizes", be.sizes, "Corpus sizes")->delimiter(',')->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--include-100k", be.include_100k, "Add the 100000-sequence row");
  bench_cmd->add_option("--length", be.length, "Sequence length")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--iterations", be.iterations, "EM iterations")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--runs", be.runs, "Timing runs averaged per row")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", be.seed, "Master seed");
  bench_cmd->add_option("--states", be.states, "States of the trained model (default: generator's)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-distinct", be.max_distinct, "Draw corpora from at most this many distinct sequences")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--distance", be.distance, "Clustering fed to weighted EM")
      ->check(CLI::IsMember({"dtw", "euclidean"}));
  bench_cmd->add_option("--csv", be.csv, "Write the report as CSV");
  bench_cmd->add_flag("--renormalize", be.renormalize, "Renormalize model rows on load");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (cluster_cmd->parsed()) return run_cluster(cl);
    if (train_cmd->parsed()) return run_train(tr);
    if (eval_cmd->parsed()) return run_eval(ev, false);
    if (decode_cmd->parsed()) return run_eval(ev, true);
    if (dist_cmd->parsed()) return run_dist(di);
    if (bench_cmd->parsed()) return run_bench_cmd(be);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
