#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rap/retrieval.hpp"
#include "rap/schema_graph.hpp"

namespace rap {

// Format strings for the prompt pieces. A nullopt field keeps the built-in
// rendering. Recognized placeholders: {type}, {hypernym}, {definition},
// {triggers}, {role}, {head_type}, {relation}, {tail_type}.
struct PromptTemplates {
  std::optional<std::string> event_type;
  std::optional<std::string> trigger;
  std::optional<std::string> argument;
  std::optional<std::string> relation;
  std::optional<std::string> structure;
};

// Template override file: JSON map component name -> format string
// ("event_type", "trigger", "argument", "relation", "structure").
PromptTemplates load_templates(const std::string &path);

struct PromptComponent {
  std::string name; // "E", "T", "A", "I" / "R", "S", "I"
  std::vector<std::string> items;
};

struct PromptSpan {
  std::string name;
  size_t begin = 0; // character span within the prompt
  size_t end = 0;
};

// Per-type trigger material backing one T item, kept so truncation can
// re-render the sentence with fewer triggers.
struct TriggerItem {
  std::string type;
  std::vector<std::string> triggers;
};

// Assembled prompt Z with its structured pieces, plus the formatted model
// input and prompt mask once format_input has run. Spans tile the prompt
// exactly in component order (each span owns its trailing separator).
struct PromptBundle {
  std::vector<PromptComponent> components;
  std::vector<TriggerItem> trigger_items; // aligned with the T component
  PromptTemplates templates;

  std::string prompt;
  std::vector<PromptSpan> component_spans;
  std::vector<int64_t> retrieved_ids;
  bool empty_warning = false;

  std::string input;
  std::vector<int> mask; // 1 on tokens of X, 0 on separator and prompt
};

// Recomputes prompt and component_spans from the components.
void render_prompt(PromptBundle &bundle);

// Event prompt: E (type, its SubType hypernym, its definition), T ("Similar
// trigger such as ...", 3 trigger nodes sampled with the seeded RNG), A (one
// sentence per argument role), I (retrieved texts in rank order). Types are
// emitted in ascending schema-id order, deduplicated. Empty hits produce an
// empty prompt with empty_warning set. instance_labels appends each
// retrieved entry's label set to its text.
PromptBundle assemble_event_prompt(const RetrievalResult &hits,
                                   const ReferenceStore &store,
                                   const SchemaGraph &g, uint64_t seed,
                                   const PromptTemplates &templates = {},
                                   bool instance_labels = false);

// Relation prompt: R (potential relation types), S (structure triples
// "(<head type>, <relation>, <tail type>)"), I (retrieved texts).
PromptBundle assemble_relation_prompt(const RetrievalResult &hits,
                                      const ReferenceStore &store,
                                      const SchemaGraph &g,
                                      const PromptTemplates &templates = {},
                                      bool instance_labels = false);

// Input = x + " " + sep + " " + z; empty z means input = x with no
// separator. The mask is over whitespace tokens: 1 on x, 0 elsewhere.
PromptBundle format_input(const std::string &x, const std::string &z,
                          const std::string &sep);

// In-place variant for assembled bundles. When a token budget is set and
// exceeded, retrieved instances are dropped last-first, then triggers are
// trimmed from the T sentences; x is never touched.
void format_input(PromptBundle &bundle, const std::string &x,
                  const std::string &sep,
                  std::optional<size_t> budget = std::nullopt);

} // namespace rap
