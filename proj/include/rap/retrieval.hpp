#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rap/reference_store.hpp"

namespace rap {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// Retrieval depths that worked best downstream: shallow for trigger-oriented
// prompts, deeper for argument-oriented ones.
inline constexpr int kTriggerOrientedTopK = 2;
inline constexpr int kArgumentOrientedTopK = 8;

struct Posting {
  int64_t entry_id = 0;
  int term_freq = 0;

  bool operator==(const Posting &) const = default;
};

// Inverted index over store entry texts. Single-writer build; immutable
// afterwards, so concurrent queries need no synchronization.
struct RetrievalIndex {
  std::map<std::string, std::vector<Posting>> postings;
  std::vector<int> doc_lengths; // indexed by entry id
  std::vector<std::optional<int64_t>> origins; // origin_record per entry
  double avg_doc_length = 0.0;
  int64_t doc_count = 0;
  Bm25Params bm25;
};

struct RetrievalResult {
  // Non-increasing scores, ties broken by ascending entry id.
  std::vector<std::pair<int64_t, double>> hits;
  int k_requested = 0;
};

RetrievalIndex build_index(const ReferenceStore &store,
                           Bm25Params params = Bm25Params{});

// BM25 with IDF log((N - df + 0.5) / (df + 0.5) + 1); query terms carry
// their multiplicity and are accumulated in sorted term order, so the
// score is exactly symmetric under query-term reordering. Throws
// EntryNotFound when entry is outside the index.
double bm25_score(const RetrievalIndex &idx, const std::string &query,
                  int64_t entry);

// The k highest-scoring entries with score > 0. Entries whose
// origin_record equals exclude_record are skipped (self-retrieval guard).
// Throws InvalidK when k < 1.
RetrievalResult retrieve_topk(const RetrievalIndex &idx,
                              const std::string &query, int k,
                              std::optional<int64_t> exclude_record =
                                  std::nullopt);

// JSON snapshot of postings and statistics, for inspection only.
void save_index_snapshot(const RetrievalIndex &idx, const std::string &path);

} // namespace rap
