#pragma once

#include <cstddef>
#include <vector>

#include "rap/dataset.hpp"

namespace rap {

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t num_gold = 0;
  size_t num_pred = 0;
  size_t num_correct = 0;
};

struct EvalOptions {
  // When set, an argument only counts if its event's trigger also matches
  // a gold trigger (offsets + type). Off by default: correctness keys on
  // event type alone.
  bool require_trigger_match = false;
};

// Trigger classification: a predicted trigger is correct iff its
// (record id, start, end, event type) matches an unmatched gold one.
// Matching is one-to-one; every score is micro-averaged over all records.
// Throws AlignmentError when gold and pred record ids do not line up.
EvalReport eval_trigger_classification(const std::vector<ExtractionRecord> &gold,
                                       const std::vector<ExtractionRecord> &pred);

// Argument classification: correctness key
// (record id, arg start, arg end, event type, role).
EvalReport eval_argument_classification(const std::vector<ExtractionRecord> &gold,
                                        const std::vector<ExtractionRecord> &pred,
                                        const EvalOptions &options = {});

// Relational triples: exact string match on (record id, head, relation, tail).
EvalReport eval_triples(const std::vector<ExtractionRecord> &gold,
                        const std::vector<ExtractionRecord> &pred);

} // namespace rap
