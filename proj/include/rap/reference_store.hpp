#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rap/dataset.hpp"
#include "rap/schema_graph.hpp"

namespace rap {

enum class EntrySource { gold, weak };

const char *entry_source_name(EntrySource source);
std::optional<EntrySource> parse_entry_source(const std::string &name);

// One reference-store record: context text, its (gold or weak) label set,
// and pointers into the companion schema graph.
struct StoreEntry {
  int64_t id = 0;
  std::string text;
  std::vector<std::string> labels;
  std::vector<std::string> pointers; // sorted, deduplicated node ids
  EntrySource source = EntrySource::gold;
  std::optional<int64_t> origin_record;

  bool operator==(const StoreEntry &) const = default;
};

// Append-only while building; immutable and shareable afterwards.
// Entry ids are dense from 0; schema_id ties the store to the graph it
// was built against.
struct ReferenceStore {
  std::vector<StoreEntry> entries;
  std::string schema_id;

  bool operator==(const ReferenceStore &) const = default;
};

// One gold entry per record. Pointers collect the schema nodes named by the
// record's gold structures: event/relation type nodes (UnknownLabel when
// absent from g), plus trigger-word, argument-role, and entity nodes when
// the named id is present in g. A gold record with no structures at all
// raises ValidationError.
ReferenceStore build_store(const std::vector<ExtractionRecord> &dataset,
                           const SchemaGraph &g);

struct RejectionReport {
  size_t accepted = 0;
  size_t rejected = 0;
  std::vector<std::string> reasons; // one per rejected entry
};

// Appends weak entries after the existing ones with continuing ids.
// Entries that violate the store invariants (unresolvable pointer, empty
// text, wrong source) are counted and reported, never fatal. Throws
// ValidationError when g does not match the store's schema_id.
std::pair<ReferenceStore, RejectionReport>
extend_store(const ReferenceStore &store, const std::vector<StoreEntry> &weak,
             const SchemaGraph &g);

struct StoreStats {
  size_t gold = 0;
  size_t weak = 0;
  std::map<std::string, size_t> per_label; // per pointed event/relation type
  size_t total_tokens = 0;
};

StoreStats store_stats(const ReferenceStore &store);

// Store file: first line {"schema_id": "<hex hash>"}, then one JSON object
// per entry: {"id", "text", "labels", "pointers", "source",
// "origin_record"}. Written atomically.
void save_store(const ReferenceStore &store, const std::string &path);
ReferenceStore load_store(const std::string &path);

} // namespace rap
