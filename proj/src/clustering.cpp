#include "hmmaccel/clustering.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>

namespace hmmaccel {

namespace {

struct SequenceHash {
  std::size_t operator()(const ObservationSequence& s) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Symbol v : s) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h ^ s.size());
  }
};

}  // namespace

ClusterTable build_clusters(const Dataset& data, Distance distance,
                            const ClusterOptions& options) {
  if (data.sequences.empty()) throw std::invalid_argument("empty dataset");

  const std::size_t length = data.sequences.front().size();
  for (std::size_t i = 0; i < data.sequences.size(); ++i) {
    const auto& s = data.sequences[i];
    if (s.empty())
      throw std::invalid_argument("sequence " + std::to_string(i + 1) + " is empty");
    if (distance == Distance::kEuclidean && s.size() != length) {
      throw std::invalid_argument(
          "euclidean distance requires equal lengths: sequence " +
          std::to_string(i + 1) + " has length " + std::to_string(s.size()) +
          ", expected " + std::to_string(length));
    }
  }

  ClusterTable table;
  table.category_id = data.category_id;
  // Every sequence seen so far -> its cluster. Exact duplicates are at
  // distance zero from the same (unique) representative.
  std::unordered_map<ObservationSequence, std::size_t, SequenceHash> seen;

  for (const auto& seq : data.sequences) {
    ++table.total_weight;
    if (options.exact_prepass) {
      if (auto it = seen.find(seq); it != seen.end()) {
        ++table.entries[it->second].weight;
        continue;
      }
    }
    std::size_t target = table.entries.size();
    for (std::size_t k = 0; k < table.entries.size(); ++k) {
      if (hmmaccel::distance(distance, seq, table.entries[k].representative) == 0.0) {
        target = k;
        break;
      }
    }
    if (target == table.entries.size()) {
      table.entries.push_back({seq, 1});
    } else {
      ++table.entries[target].weight;
    }
    if (options.exact_prepass) seen.emplace(seq, target);
  }
  return table;
}

ClusterTable filter_low_weight(const ClusterTable& table, std::int64_t min_weight) {
  if (min_weight < 1) throw std::invalid_argument("min_weight must be >= 1");
  ClusterTable out;
  out.category_id = table.category_id;
  for (const auto& e : table.entries) {
    if (e.weight >= min_weight) {
      out.entries.push_back(e);
      out.total_weight += e.weight;
    }
  }
  if (out.entries.empty()) throw std::runtime_error("all clusters filtered");
  return out;
}

Dataset representatives(const ClusterTable& table) {
  Dataset d;
  d.category_id = table.category_id;
  d.sequences.reserve(table.entries.size());
  for (const auto& e : table.entries) d.sequences.push_back(e.representative);
  return d;
}

Dataset expand(const ClusterTable& table) {
  Dataset d;
  d.category_id = table.category_id;
  for (const auto& e : table.entries)
    for (std::int64_t w = 0; w < e.weight; ++w) d.sequences.push_back(e.representative);
  return d;
}

}  // namespace hmmaccel
