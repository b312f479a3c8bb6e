#include "rap/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rap/errors.hpp"
#include "rap/io_util.hpp"
#include "rap/tokenize.hpp"

namespace rap {

namespace {

std::map<std::string, int> query_term_counts(const std::string &query) {
  std::map<std::string, int> counts;
  for (const std::string &term : term_tokens(query))
    ++counts[term];
  return counts;
}

double idf(int64_t doc_count, size_t df) {
  return std::log((static_cast<double>(doc_count) - static_cast<double>(df) +
                   0.5) /
                      (static_cast<double>(df) + 0.5) +
                  1.0);
}

double tf_component(int tf, int doc_length, double avg_doc_length,
                    const Bm25Params &p) {
  double norm = avg_doc_length > 0.0
                    ? static_cast<double>(doc_length) / avg_doc_length
                    : 0.0;
  double t = static_cast<double>(tf);
  return t * (p.k1 + 1.0) / (t + p.k1 * (1.0 - p.b + p.b * norm));
}

} // namespace

RetrievalIndex build_index(const ReferenceStore &store, Bm25Params params) {
  RetrievalIndex idx;
  idx.bm25 = params;
  idx.doc_count = static_cast<int64_t>(store.entries.size());
  idx.doc_lengths.reserve(store.entries.size());
  idx.origins.reserve(store.entries.size());

  size_t total_length = 0;
  for (const StoreEntry &entry : store.entries) {
    std::map<std::string, int> counts;
    std::vector<std::string> terms = term_tokens(entry.text);
    for (const std::string &term : terms)
      ++counts[term];
    for (const auto &[term, tf] : counts)
      idx.postings[term].push_back(Posting{entry.id, tf});
    idx.doc_lengths.push_back(static_cast<int>(terms.size()));
    idx.origins.push_back(entry.origin_record);
    total_length += terms.size();
  }
  idx.avg_doc_length =
      idx.doc_count > 0
          ? static_cast<double>(total_length) / static_cast<double>(idx.doc_count)
          : 0.0;
  return idx;
}

double bm25_score(const RetrievalIndex &idx, const std::string &query,
                  int64_t entry) {
  if (entry < 0 || entry >= idx.doc_count)
    throw EntryNotFound("entry " + std::to_string(entry) +
                        " is not in the index (doc_count " +
                        std::to_string(idx.doc_count) + ")");
  double score = 0.0;
  for (const auto &[term, qtf] : query_term_counts(query)) {
    auto it = idx.postings.find(term);
    if (it == idx.postings.end())
      continue;
    const std::vector<Posting> &plist = it->second;
    auto pit = std::lower_bound(plist.begin(), plist.end(), entry,
                                [](const Posting &p, int64_t id) {
                                  return p.entry_id < id;
                                });
    if (pit == plist.end() || pit->entry_id != entry)
      continue;
    score += qtf * idf(idx.doc_count, plist.size()) *
             tf_component(pit->term_freq,
                          idx.doc_lengths[static_cast<size_t>(entry)],
                          idx.avg_doc_length, idx.bm25);
  }
  return score;
}

RetrievalResult retrieve_topk(const RetrievalIndex &idx,
                              const std::string &query, int k,
                              std::optional<int64_t> exclude_record) {
  if (k < 1)
    throw InvalidK("k must be >= 1, got " + std::to_string(k));

  // Term-at-a-time accumulation in sorted term order: per-document addition
  // order matches bm25_score exactly, so both routes agree bit for bit.
  std::vector<double> scores(static_cast<size_t>(idx.doc_count), 0.0);
  for (const auto &[term, qtf] : query_term_counts(query)) {
    auto it = idx.postings.find(term);
    if (it == idx.postings.end())
      continue;
    double term_idf = idf(idx.doc_count, it->second.size());
    for (const Posting &p : it->second)
      scores[static_cast<size_t>(p.entry_id)] +=
          qtf * term_idf *
          tf_component(p.term_freq,
                       idx.doc_lengths[static_cast<size_t>(p.entry_id)],
                       idx.avg_doc_length, idx.bm25);
  }

  std::vector<std::pair<int64_t, double>> hits;
  for (int64_t id = 0; id < idx.doc_count; ++id) {
    if (scores[static_cast<size_t>(id)] <= 0.0)
      continue;
    if (exclude_record && idx.origins[static_cast<size_t>(id)] &&
        *idx.origins[static_cast<size_t>(id)] == *exclude_record)
      continue;
    hits.emplace_back(id, scores[static_cast<size_t>(id)]);
  }
  std::sort(hits.begin(), hits.end(), [](const auto &a, const auto &b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (hits.size() > static_cast<size_t>(k))
    hits.resize(static_cast<size_t>(k));

  return RetrievalResult{std::move(hits), k};
}

void save_index_snapshot(const RetrievalIndex &idx, const std::string &path) {
  nlohmann::ordered_json obj;
  obj["doc_count"] = idx.doc_count;
  obj["avg_doc_length"] = idx.avg_doc_length;
  obj["bm25"] = {{"k1", idx.bm25.k1}, {"b", idx.bm25.b}};
  obj["doc_lengths"] = idx.doc_lengths;
  nlohmann::ordered_json origins = nlohmann::ordered_json::array();
  for (const auto &origin : idx.origins)
    origins.push_back(origin ? nlohmann::ordered_json(*origin)
                             : nlohmann::ordered_json(nullptr));
  obj["origins"] = std::move(origins);
  nlohmann::ordered_json postings;
  for (const auto &[term, plist] : idx.postings) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Posting &p : plist)
      arr.push_back({p.entry_id, p.term_freq});
    postings[term] = std::move(arr);
  }
  obj["postings"] = std::move(postings);
  write_atomic(path, obj.dump(2) + "\n");
}

} // namespace rap
