#include "hmmaccel/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hmmaccel::io {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                                 const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw std::invalid_argument(std::string(name) + " must have " +
                                std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument(std::string(name) + " row " + std::to_string(i) +
                                  " must have " + std::to_string(cols) + " entries");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number())
        throw std::invalid_argument(std::string(name) + " entries must be numbers");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

HmmModel<double> model_from_json(const std::string& text, bool renormalize) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
  for (const char* key : {"n_states", "n_symbols", "pi", "a", "b"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("model JSON: missing '") + key + "'");
  if (!j["n_states"].is_number_integer() || !j["n_symbols"].is_number_integer())
    throw std::invalid_argument("model JSON: n_states and n_symbols must be integers");
  const auto n = j["n_states"].get<Eigen::Index>();
  const auto m = j["n_symbols"].get<Eigen::Index>();
  if (n < 1 || m < 1) throw std::invalid_argument("model JSON: n_states and n_symbols must be >= 1");

  HmmModel<double> model;
  json pi_rows = json::array({j["pi"]});
  model.pi = matrix_from_json(pi_rows, 1, n, "pi").row(0).transpose();
  model.a = matrix_from_json(j["a"], n, n, "a");
  model.b = matrix_from_json(j["b"], n, m, "b");
  if (renormalize) model = renormalized(std::move(model));
  require_valid(model);
  return model;
}

std::string model_to_json(const HmmModel<double>& model) {
  json j;
  j["n_states"] = model.n_states();
  j["n_symbols"] = model.n_symbols();
  j["pi"] = matrix_to_json(model.pi.transpose())[0];
  j["a"] = matrix_to_json(model.a);
  j["b"] = matrix_to_json(model.b);
  return j.dump(2) + "\n";
}

HmmModel<double> load_model(const std::filesystem::path& path, bool renormalize) {
  try {
    return model_from_json(read_file(path), renormalize);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void save_model(const std::filesystem::path& path, const HmmModel<double>& model) {
  write_file(path, model_to_json(model));
}

Dataset parse_sequences(std::istream& in, int category_id, int symbol_base) {
  Dataset data;
  data.category_id = category_id;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + why);
    };
    ObservationSequence seq;
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
      long value = 0;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc() || next == p || *p == '-' || *p == '+')
        fail("expected a non-negative integer at column " + std::to_string(p - line.data() + 1));
      if (value > std::numeric_limits<Symbol>::max())
        fail("symbol " + std::to_string(value) + " too large");
      if (value - symbol_base < 0)
        fail("symbol " + std::to_string(value) + " below symbol base " + std::to_string(symbol_base));
      seq.push_back(static_cast<Symbol>(value - symbol_base));
      p = next;
      if (p == end) break;
      if (*p != ' ' || p + 1 == end)
        fail("symbols must be separated by single spaces (column " +
             std::to_string(p - line.data() + 1) + ")");
      ++p;
    }
    data.sequences.push_back(std::move(seq));
  }
  return data;
}

Dataset read_sequences(const std::filesystem::path& path, int category_id, int symbol_base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  try {
    return parse_sequences(in, category_id, symbol_base);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_sequences(std::ostream& out, const Dataset& data) {
  std::string line;
  for (const auto& seq : data.sequences) {
    line.clear();
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (t) line += ' ';
      line += std::to_string(seq[t]);
    }
    line += '\n';
    out << line;
  }
}

void write_sequences(const std::filesystem::path& path, const Dataset& data) {
  std::ostringstream ss;
  write_sequences(ss, data);
  write_file(path, ss.str());
}

std::string clusters_to_json(const ClusterTable& table) {
  json entries = json::array();
  for (const auto& e : table.entries)
    entries.push_back({{"representative", e.representative}, {"weight", e.weight}});
  json j;
  j["category_id"] = table.category_id;
  j["total_weight"] = table.total_weight;
  j["entries"] = std::move(entries);
  return j.dump() + "\n";
}

ClusterTable clusters_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("cluster JSON: ") + e.what());
  }
  ClusterTable table;
  try {
    table.category_id = j.at("category_id").get<int>();
    for (const auto& e : j.at("entries")) {
      ClusterEntry entry{e.at("representative").get<ObservationSequence>(),
                         e.at("weight").get<std::int64_t>()};
      if (entry.representative.empty())
        throw std::invalid_argument("cluster JSON: empty representative");
      if (entry.weight < 1) throw std::invalid_argument("cluster JSON: weight must be >= 1");
      table.total_weight += entry.weight;
      table.entries.push_back(std::move(entry));
    }
    if (j.at("total_weight").get<std::int64_t>() != table.total_weight)
      throw std::invalid_argument("cluster JSON: total_weight does not match the entry weights");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("cluster JSON: ") + e.what());
  }
  return table;
}

void save_clusters(const std::filesystem::path& path, const ClusterTable& table) {
  write_file(path, clusters_to_json(table));
}

ClusterTable load_clusters(const std::filesystem::path& path) {
  try {
    return clusters_from_json(read_file(path));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

bool looks_like_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  char c;
  while (in.get(c))
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
  return false;
}

void write_trace_csv(std::ostream& out, const TrainingTrace<double>& trace) {
  out << "iteration,log_likelihood,cumulative_seconds\n";
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  for (std::size_t i = 0; i < trace.per_iteration_log_likelihood.size(); ++i) {
    out << (i + 1) << ',' << std::setprecision(17)
        << trace.per_iteration_log_likelihood[i] << ',' << std::setprecision(6)
        << trace.cumulative_seconds[i] << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace hmmaccel::io
