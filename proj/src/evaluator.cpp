#include "rap/evaluator.hpp"

#include <functional>
#include <map>
#include <tuple>

#include "rap/errors.hpp"

namespace rap {

namespace {

void check_alignment(const std::vector<ExtractionRecord> &gold,
                     const std::vector<ExtractionRecord> &pred) {
  if (gold.size() != pred.size())
    throw AlignmentError("gold has " + std::to_string(gold.size()) +
                         " records, pred has " + std::to_string(pred.size()));
  for (size_t i = 0; i < gold.size(); ++i)
    if (gold[i].id != pred[i].id)
      throw AlignmentError("record " + std::to_string(i) + ": gold id " +
                           std::to_string(gold[i].id) + " vs pred id " +
                           std::to_string(pred[i].id));
}

EvalReport from_counts(size_t num_gold, size_t num_pred, size_t num_correct) {
  EvalReport r;
  r.num_gold = num_gold;
  r.num_pred = num_pred;
  r.num_correct = num_correct;
  r.precision = num_pred > 0
                    ? static_cast<double>(num_correct) /
                          static_cast<double>(num_pred)
                    : 0.0;
  r.recall = num_gold > 0 ? static_cast<double>(num_correct) /
                                static_cast<double>(num_gold)
                          : 0.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

// One-to-one matching with exact keys reduces to multiset intersection.
template <typename Key>
EvalReport score_keyed(const std::vector<ExtractionRecord> &gold,
                       const std::vector<ExtractionRecord> &pred,
                       const std::function<void(const ExtractionRecord &,
                                                std::map<Key, size_t> &)>
                           &collect) {
  check_alignment(gold, pred);
  size_t num_gold = 0, num_pred = 0, num_correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    std::map<Key, size_t> gold_keys, pred_keys;
    collect(gold[i], gold_keys);
    collect(pred[i], pred_keys);
    for (const auto &[key, count] : gold_keys)
      num_gold += count;
    for (const auto &[key, count] : pred_keys) {
      num_pred += count;
      auto it = gold_keys.find(key);
      if (it != gold_keys.end())
        num_correct += std::min(count, it->second);
    }
  }
  return from_counts(num_gold, num_pred, num_correct);
}

} // namespace

EvalReport
eval_trigger_classification(const std::vector<ExtractionRecord> &gold,
                            const std::vector<ExtractionRecord> &pred) {
  using Key = std::tuple<size_t, size_t, std::string>;
  return score_keyed<Key>(
      gold, pred, [](const ExtractionRecord &rec, std::map<Key, size_t> &keys) {
        if (!rec.events)
          return;
        for (const EventAnnotation &ev : *rec.events)
          ++keys[Key{ev.trigger.start, ev.trigger.end, ev.type}];
      });
}

EvalReport
eval_argument_classification(const std::vector<ExtractionRecord> &gold,
                             const std::vector<ExtractionRecord> &pred,
                             const EvalOptions &options) {
  // Trigger offsets join the key only in the strict variant.
  using Key = std::tuple<size_t, size_t, std::string, std::string, size_t,
                         size_t>;
  bool strict = options.require_trigger_match;
  return score_keyed<Key>(
      gold, pred,
      [strict](const ExtractionRecord &rec, std::map<Key, size_t> &keys) {
        if (!rec.events)
          return;
        for (const EventAnnotation &ev : *rec.events)
          for (const Argument &a : ev.arguments)
            ++keys[Key{a.start, a.end, ev.type, a.role,
                       strict ? ev.trigger.start : 0,
                       strict ? ev.trigger.end : 0}];
      });
}

EvalReport eval_triples(const std::vector<ExtractionRecord> &gold,
                        const std::vector<ExtractionRecord> &pred) {
  using Key = std::tuple<std::string, std::string, std::string>;
  return score_keyed<Key>(
      gold, pred, [](const ExtractionRecord &rec, std::map<Key, size_t> &keys) {
        if (!rec.triples)
          return;
        for (const Triple &t : *rec.triples)
          ++keys[Key{t.head, t.relation, t.tail}];
      });
}

} // namespace rap
