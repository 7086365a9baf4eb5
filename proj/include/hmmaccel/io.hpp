#pragma once

#include "hmmaccel/clustering.hpp"
#include "hmmaccel/model.hpp"
#include "hmmaccel/training.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace hmmaccel::io {

// Model JSON: {"n_states", "n_symbols", "pi", "a", "b"}. With `renormalize`
// rows are rescaled before validation; otherwise any row off by more than
// 1e-9 is rejected.
HmmModel<double> model_from_json(const std::string& text, bool renormalize = false);
std::string model_to_json(const HmmModel<double>& model);
HmmModel<double> load_model(const std::filesystem::path& path, bool renormalize = false);
void save_model(const std::filesystem::path& path, const HmmModel<double>& model);

// Sequence text: one sequence per line, non-negative integers separated by
// single spaces, '#' lines and empty lines skipped. `symbol_base` is
// subtracted from every value at ingest.
Dataset parse_sequences(std::istream& in, int category_id = 0, int symbol_base = 0);
Dataset read_sequences(const std::filesystem::path& path, int category_id = 0,
                       int symbol_base = 0);
void write_sequences(std::ostream& out, const Dataset& data);
void write_sequences(const std::filesystem::path& path, const Dataset& data);

// Cluster table JSON:
// {"category_id": i, "total_weight": n,
//  "entries": [{"representative": [..], "weight": w}, ...]}
std::string clusters_to_json(const ClusterTable& table);
ClusterTable clusters_from_json(const std::string& text);
void save_clusters(const std::filesystem::path& path, const ClusterTable& table);
ClusterTable load_clusters(const std::filesystem::path& path);

// True if the file's first non-blank character is '{'.
bool looks_like_json(const std::filesystem::path& path);

// CSV "iteration,log_likelihood,cumulative_seconds".
void write_trace_csv(std::ostream& out, const TrainingTrace<double>& trace);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hmmaccel::io
