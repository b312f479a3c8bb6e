#include "rap/reference_store.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "rap/errors.hpp"
#include "rap/io_util.hpp"
#include "rap/tokenize.hpp"

namespace rap {

const char *entry_source_name(EntrySource source) {
  return source == EntrySource::gold ? "gold" : "weak";
}

std::optional<EntrySource> parse_entry_source(const std::string &name) {
  if (name == "gold")
    return EntrySource::gold;
  if (name == "weak")
    return EntrySource::weak;
  return std::nullopt;
}

namespace {

void add_pointer_if_present(const SchemaGraph &g, const std::string &id,
                            std::set<std::string> &pointers) {
  if (!id.empty() && g.contains(id))
    pointers.insert(id);
}

} // namespace

ReferenceStore build_store(const std::vector<ExtractionRecord> &dataset,
                           const SchemaGraph &g) {
  ReferenceStore store;
  store.schema_id = schema_hash(g);
  store.entries.reserve(dataset.size());

  for (const ExtractionRecord &rec : dataset) {
    std::set<std::string> labels;
    std::set<std::string> pointers;

    if (rec.events) {
      for (const EventAnnotation &ev : *rec.events) {
        const SchemaNode *type = g.find(ev.type);
        if (!type || type->kind != NodeKind::event_type)
          throw UnknownLabel("record " + std::to_string(rec.id) +
                             ": event type '" + ev.type +
                             "' is not an event_type node");
        labels.insert(ev.type);
        pointers.insert(ev.type);
        add_pointer_if_present(g, to_lower(ev.trigger.text), pointers);
        add_pointer_if_present(g, ev.trigger.text, pointers);
        for (const Argument &a : ev.arguments)
          add_pointer_if_present(g, a.role, pointers);
      }
    }
    if (rec.triples) {
      for (const Triple &t : *rec.triples) {
        const SchemaNode *type = g.find(t.relation);
        if (!type || type->kind != NodeKind::relation_type)
          throw UnknownLabel("record " + std::to_string(rec.id) +
                             ": relation '" + t.relation +
                             "' is not a relation_type node");
        labels.insert(t.relation);
        pointers.insert(t.relation);
        add_pointer_if_present(g, t.head, pointers);
        add_pointer_if_present(g, t.tail, pointers);
      }
    }

    if (labels.empty())
      throw ValidationError("record " + std::to_string(rec.id) +
                            " has no gold structures to index");

    StoreEntry entry;
    entry.id = static_cast<int64_t>(store.entries.size());
    entry.text = rec.text;
    entry.labels.assign(labels.begin(), labels.end());
    entry.pointers.assign(pointers.begin(), pointers.end());
    entry.source = EntrySource::gold;
    entry.origin_record = rec.id;
    store.entries.push_back(std::move(entry));
  }
  return store;
}

std::pair<ReferenceStore, RejectionReport>
extend_store(const ReferenceStore &store, const std::vector<StoreEntry> &weak,
             const SchemaGraph &g) {
  if (store.schema_id != schema_hash(g))
    throw ValidationError("store schema_id " + store.schema_id +
                          " does not match the supplied graph");

  ReferenceStore out = store;
  RejectionReport report;
  for (const StoreEntry &w : weak) {
    std::string reason;
    if (w.source != EntrySource::weak)
      reason = "source is not weak";
    else if (w.text.empty())
      reason = "empty text";
    else
      for (const std::string &p : w.pointers)
        if (!g.contains(p)) {
          reason = "unresolvable pointer '" + p + "'";
          break;
        }
    if (!reason.empty()) {
      ++report.rejected;
      report.reasons.push_back(reason);
      continue;
    }
    StoreEntry entry = w;
    entry.id = static_cast<int64_t>(out.entries.size());
    std::sort(entry.pointers.begin(), entry.pointers.end());
    entry.pointers.erase(
        std::unique(entry.pointers.begin(), entry.pointers.end()),
        entry.pointers.end());
    out.entries.push_back(std::move(entry));
    ++report.accepted;
  }
  return {std::move(out), std::move(report)};
}

StoreStats store_stats(const ReferenceStore &store) {
  StoreStats stats;
  for (const StoreEntry &e : store.entries) {
    if (e.source == EntrySource::gold)
      ++stats.gold;
    else
      ++stats.weak;
    for (const std::string &label : e.labels)
      ++stats.per_label[label];
    stats.total_tokens += term_tokens(e.text).size();
  }
  return stats;
}

void save_store(const ReferenceStore &store, const std::string &path) {
  std::string out;
  {
    nlohmann::ordered_json header;
    header["schema_id"] = store.schema_id;
    out += header.dump();
    out += "\n";
  }
  for (const StoreEntry &e : store.entries) {
    nlohmann::ordered_json obj;
    obj["id"] = e.id;
    obj["text"] = e.text;
    obj["labels"] = e.labels;
    obj["pointers"] = e.pointers;
    obj["source"] = entry_source_name(e.source);
    if (e.origin_record)
      obj["origin_record"] = *e.origin_record;
    else
      obj["origin_record"] = nullptr;
    out += obj.dump();
    out += "\n";
  }
  write_atomic(path, out);
}

ReferenceStore load_store(const std::string &path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty())
    throw ParseError("store file is empty (missing schema_id header)");

  ReferenceStore store;
  size_t lineno = 0;
  for (const std::string &line : lines) {
    ++lineno;
    if (line.empty())
      continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (store.schema_id.empty() && obj.contains("schema_id")) {
      store.schema_id = obj.at("schema_id").get<std::string>();
      continue;
    }
    StoreEntry entry;
    entry.id = obj.at("id").get<int64_t>();
    entry.text = obj.at("text").get<std::string>();
    entry.labels = obj.at("labels").get<std::vector<std::string>>();
    entry.pointers = obj.at("pointers").get<std::vector<std::string>>();
    auto source = parse_entry_source(obj.at("source").get<std::string>());
    if (!source)
      throw ParseError("unknown source '" +
                           obj.at("source").get<std::string>() + "'",
                       lineno);
    entry.source = *source;
    if (obj.contains("origin_record") && !obj["origin_record"].is_null())
      entry.origin_record = obj["origin_record"].get<int64_t>();
    if (entry.id != static_cast<int64_t>(store.entries.size()))
      throw ParseError("entry id " + std::to_string(entry.id) +
                           " breaks the dense 0..n-1 ordering",
                       lineno);
    store.entries.push_back(std::move(entry));
  }
  if (store.schema_id.empty())
    throw ParseError("store file has no schema_id header");
  return store;
}

} // namespace rap
