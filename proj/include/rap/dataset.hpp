#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rap {

enum class TaskMode { event, triple };

const char *task_mode_name(TaskMode mode);
std::optional<TaskMode> parse_task_mode(const std::string &name);

// Character span [start, end) within the record text.
struct SpanText {
  std::string text;
  size_t start = 0;
  size_t end = 0;

  bool operator==(const SpanText &) const = default;
};

struct Argument {
  std::string role;
  std::string text;
  size_t start = 0;
  size_t end = 0;

  bool operator==(const Argument &) const = default;
};

struct EventAnnotation {
  std::string type;
  SpanText trigger;
  std::vector<Argument> arguments;

  bool operator==(const EventAnnotation &) const = default;
};

struct Triple {
  std::string head;
  std::string relation;
  std::string tail;

  bool operator==(const Triple &) const = default;
};

// One task example: input text plus its gold structures. Exactly one of
// events/triples is populated, matching the task mode it was loaded under.
struct ExtractionRecord {
  int64_t id = 0;
  std::string text;
  std::optional<std::vector<EventAnnotation>> events;
  std::optional<std::vector<Triple>> triples;

  bool operator==(const ExtractionRecord &) const = default;
};

// One JSON object per line; ids must equal the 0-based file order.
// Event mode:  {"id", "text", "events": [{"type", "trigger": {"text",
//              "start", "end"}, "arguments": [{"role", "text", "start",
//              "end"}]}]}
// Triple mode: {"id", "text", "triples": [{"head", "relation", "tail"}]}
// Offsets are character offsets, end-exclusive. Unknown keys rejected.
std::vector<ExtractionRecord> parse_dataset(const std::vector<std::string> &lines,
                                            TaskMode mode);
std::vector<ExtractionRecord> load_dataset(const std::string &path,
                                           TaskMode mode);

nlohmann::ordered_json record_to_json(const ExtractionRecord &record);

// Writes records as a dataset file (atomically). Ids are written as stored;
// pass reassign_ids to renumber 0..n-1 so the output reloads cleanly.
void save_dataset(const std::vector<ExtractionRecord> &records,
                  const std::string &path, bool reassign_ids = false);

enum class SplitMode {
  // One seeded permutation shared by all fractions: subsets are nested
  // (1% of a dataset is a prefix of its 3%, and so on).
  nested,
  // Fraction-keyed permutations: independent draws per fraction.
  independent,
};

// Priority order of indices 0..n-1 under the seed. Per-index hashing makes
// the order of surviving indices stable when n grows: appending records
// never reshuffles the ranking of existing ones.
std::vector<size_t> split_order(size_t n, uint64_t seed);

// Uniform sample without replacement of max(1, round(fraction * n)) records,
// returned in original relative order. round() is half-away-from-zero.
// Selection depends only on (n, fraction, seed, mode), never on contents.
// Throws InvalidFraction unless 0 < fraction <= 1.
std::vector<ExtractionRecord>
sample_split(const std::vector<ExtractionRecord> &records, double fraction,
             uint64_t seed, SplitMode mode = SplitMode::nested);

// One augmented training line: the formatted model input, its prompt mask,
// the gold structure serialized verbatim, and the retrieved entry ids.
struct AugmentedRecord {
  int64_t id = 0;
  std::string input;
  std::vector<int> prompt_mask;
  nlohmann::json target;
  std::vector<int64_t> retrieved_ids;

  bool operator==(const AugmentedRecord &) const = default;
};

struct PromptBundle; // prompt.hpp

// Emits {"id", "input", "prompt_mask", "target", "retrieved_ids"} per
// record (atomically). Returns the number of lines written. Throws
// LengthMismatch when records and bundles differ in length.
size_t emit_augmented(const std::vector<ExtractionRecord> &records,
                      const std::vector<PromptBundle> &bundles,
                      const std::string &path);

std::vector<AugmentedRecord> load_augmented(const std::string &path);

} // namespace rap
