#pragma once

#include "hmmaccel/dtw.hpp"
#include "hmmaccel/model.hpp"

#include <cstdint>
#include <vector>

namespace hmmaccel {

struct ClusterEntry {
  ObservationSequence representative;  // first-seen member
  std::int64_t weight = 1;
};

struct ClusterTable {
  int category_id = 0;
  std::vector<ClusterEntry> entries;
  std::int64_t total_weight = 0;

  std::size_t size() const { return entries.size(); }
};

struct ClusterOptions {
  // Merge exact duplicates through a hash lookup before any distance scan.
  // Never changes the resulting table.
  bool exact_prepass = true;
};

/// Scans the sequences in order. Each one joins the first cluster whose
/// representative lies at distance exactly zero, otherwise it opens a new
/// cluster with weight 1.
///
/// Throws std::invalid_argument on an empty dataset, or under the Euclidean
/// distance when a sequence length differs from the first one (the message
/// names the 1-based sequence index).
ClusterTable build_clusters(const Dataset& data, Distance distance,
                            const ClusterOptions& options = {});

/// Keeps entries with weight >= min_weight. Throws std::runtime_error
/// ("all clusters filtered") if nothing survives.
ClusterTable filter_low_weight(const ClusterTable& table, std::int64_t min_weight);

/// Representatives in table order, as a dataset.
Dataset representatives(const ClusterTable& table);

/// Each representative repeated weight times, in table order.
Dataset expand(const ClusterTable& table);

}  // namespace hmmaccel
