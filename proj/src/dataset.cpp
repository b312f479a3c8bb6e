#include "rap/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "rap/errors.hpp"
#include "rap/io_util.hpp"
#include "rap/prompt.hpp"

namespace rap {

const char *task_mode_name(TaskMode mode) {
  return mode == TaskMode::event ? "event" : "triple";
}

std::optional<TaskMode> parse_task_mode(const std::string &name) {
  if (name == "event")
    return TaskMode::event;
  if (name == "triple")
    return TaskMode::triple;
  return std::nullopt;
}

namespace {

size_t codepoint_length(const std::string &text) {
  size_t n = 0;
  for (unsigned char c : text)
    if ((c & 0xC0) != 0x80)
      ++n;
  return n;
}

void check_span(const std::string &what, size_t start, size_t end,
                size_t text_len, int64_t record_id) {
  if (end < start)
    throw SpanError(what + " span has end < start (" + std::to_string(start) +
                    ", " + std::to_string(end) + ") in record " +
                    std::to_string(record_id));
  if (end > text_len)
    throw SpanError(what + " span end " + std::to_string(end) +
                    " exceeds text length " + std::to_string(text_len) +
                    " in record " + std::to_string(record_id));
}

void require_keys(const nlohmann::json &obj,
                  const std::vector<std::string> &allowed, size_t lineno,
                  const std::string &what) {
  for (const auto &[key, _] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError("unknown key '" + key + "' in " + what, lineno);
}

ExtractionRecord parse_record(const std::string &line, size_t lineno,
                              TaskMode mode) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
  }
  if (!obj.is_object())
    throw ParseError("expected a JSON object", lineno);

  const char *structures = mode == TaskMode::event ? "events" : "triples";
  require_keys(obj, {"id", "text", structures}, lineno, "record");
  if (!obj.contains("id") || !obj["id"].is_number_integer())
    throw ParseError("record requires an integer 'id'", lineno);
  if (!obj.contains("text") || !obj["text"].is_string())
    throw ParseError("record requires a string 'text'", lineno);
  if (!obj.contains(structures) || !obj[structures].is_array())
    throw ParseError(std::string("record requires an array '") + structures +
                     "'", lineno);

  ExtractionRecord rec;
  rec.id = obj["id"].get<int64_t>();
  rec.text = obj["text"].get<std::string>();
  size_t text_len = codepoint_length(rec.text);

  if (mode == TaskMode::event) {
    std::vector<EventAnnotation> events;
    for (const auto &ev : obj["events"]) {
      if (!ev.is_object())
        throw ParseError("event must be an object", lineno);
      require_keys(ev, {"type", "trigger", "arguments"}, lineno, "event");
      if (!ev.contains("type") || !ev["type"].is_string())
        throw ParseError("event requires a string 'type'", lineno);
      if (!ev.contains("trigger") || !ev["trigger"].is_object())
        throw ParseError("event requires a 'trigger' object", lineno);
      EventAnnotation ann;
      ann.type = ev["type"].get<std::string>();
      const auto &tr = ev["trigger"];
      require_keys(tr, {"text", "start", "end"}, lineno, "trigger");
      if (!tr.contains("text") || !tr["text"].is_string() ||
          !tr.contains("start") || !tr["start"].is_number_integer() ||
          !tr.contains("end") || !tr["end"].is_number_integer())
        throw ParseError("trigger requires text/start/end", lineno);
      if (tr["start"].get<int64_t>() < 0 || tr["end"].get<int64_t>() < 0)
        throw ParseError("trigger offsets must be non-negative", lineno);
      ann.trigger = SpanText{tr["text"].get<std::string>(),
                             tr["start"].get<size_t>(),
                             tr["end"].get<size_t>()};
      check_span("trigger", ann.trigger.start, ann.trigger.end, text_len,
                 rec.id);
      if (ev.contains("arguments")) {
        for (const auto &arg : ev["arguments"]) {
          if (!arg.is_object())
            throw ParseError("argument must be an object", lineno);
          require_keys(arg, {"role", "text", "start", "end"}, lineno,
                       "argument");
          if (!arg.contains("role") || !arg["role"].is_string() ||
              !arg.contains("text") || !arg["text"].is_string() ||
              !arg.contains("start") || !arg["start"].is_number_integer() ||
              !arg.contains("end") || !arg["end"].is_number_integer())
            throw ParseError("argument requires role/text/start/end", lineno);
          if (arg["start"].get<int64_t>() < 0 || arg["end"].get<int64_t>() < 0)
            throw ParseError("argument offsets must be non-negative", lineno);
          Argument a{arg["role"].get<std::string>(),
                     arg["text"].get<std::string>(), arg["start"].get<size_t>(),
                     arg["end"].get<size_t>()};
          check_span("argument", a.start, a.end, text_len, rec.id);
          ann.arguments.push_back(std::move(a));
        }
      }
      events.push_back(std::move(ann));
    }
    rec.events = std::move(events);
  } else {
    std::vector<Triple> triples;
    for (const auto &t : obj["triples"]) {
      if (!t.is_object())
        throw ParseError("triple must be an object", lineno);
      require_keys(t, {"head", "relation", "tail"}, lineno, "triple");
      if (!t.contains("head") || !t["head"].is_string() ||
          !t.contains("relation") || !t["relation"].is_string() ||
          !t.contains("tail") || !t["tail"].is_string())
        throw ParseError("triple requires head/relation/tail strings", lineno);
      triples.push_back(Triple{t["head"].get<std::string>(),
                               t["relation"].get<std::string>(),
                               t["tail"].get<std::string>()});
    }
    rec.triples = std::move(triples);
  }
  return rec;
}

} // namespace

std::vector<ExtractionRecord> parse_dataset(const std::vector<std::string> &lines,
                                            TaskMode mode) {
  std::vector<ExtractionRecord> records;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty())
      continue;
    ExtractionRecord rec = parse_record(lines[i], i + 1, mode);
    if (rec.id != static_cast<int64_t>(records.size()))
      throw ParseError("record id " + std::to_string(rec.id) +
                       " does not match file order (expected " +
                       std::to_string(records.size()) + ")",
                       i + 1);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ExtractionRecord> load_dataset(const std::string &path,
                                           TaskMode mode) {
  return parse_dataset(read_lines(path), mode);
}

nlohmann::ordered_json record_to_json(const ExtractionRecord &record) {
  nlohmann::ordered_json obj;
  obj["id"] = record.id;
  obj["text"] = record.text;
  if (record.events) {
    nlohmann::ordered_json events = nlohmann::ordered_json::array();
    for (const EventAnnotation &ev : *record.events) {
      nlohmann::ordered_json e;
      e["type"] = ev.type;
      e["trigger"] = {{"text", ev.trigger.text},
                      {"start", ev.trigger.start},
                      {"end", ev.trigger.end}};
      nlohmann::ordered_json args = nlohmann::ordered_json::array();
      for (const Argument &a : ev.arguments)
        args.push_back({{"role", a.role},
                        {"text", a.text},
                        {"start", a.start},
                        {"end", a.end}});
      e["arguments"] = std::move(args);
      events.push_back(std::move(e));
    }
    obj["events"] = std::move(events);
  }
  if (record.triples) {
    nlohmann::ordered_json triples = nlohmann::ordered_json::array();
    for (const Triple &t : *record.triples)
      triples.push_back(
          {{"head", t.head}, {"relation", t.relation}, {"tail", t.tail}});
    obj["triples"] = std::move(triples);
  }
  return obj;
}

void save_dataset(const std::vector<ExtractionRecord> &records,
                  const std::string &path, bool reassign_ids) {
  std::string out;
  for (size_t i = 0; i < records.size(); ++i) {
    nlohmann::ordered_json obj = record_to_json(records[i]);
    if (reassign_ids)
      obj["id"] = i;
    out += obj.dump();
    out += "\n";
  }
  write_atomic(path, out);
}

namespace {

uint64_t mix64(uint64_t x) {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t index_priority(uint64_t seed, size_t index) {
  return mix64(seed ^ mix64(static_cast<uint64_t>(index) + 1));
}

} // namespace

std::vector<size_t> split_order(size_t n, uint64_t seed) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [seed](size_t a, size_t b) {
    uint64_t pa = index_priority(seed, a);
    uint64_t pb = index_priority(seed, b);
    return pa != pb ? pa < pb : a < b;
  });
  return order;
}

std::vector<ExtractionRecord>
sample_split(const std::vector<ExtractionRecord> &records, double fraction,
             uint64_t seed, SplitMode mode) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw InvalidFraction("fraction must be in (0, 1], got " +
                          std::to_string(fraction));
  if (records.empty())
    throw Error("sample_split: records must be non-empty");

  size_t n = records.size();
  auto size = static_cast<size_t>(
      std::max<long long>(1, std::llround(fraction * static_cast<double>(n))));
  size = std::min(size, n);

  uint64_t effective_seed = seed;
  if (mode == SplitMode::independent)
    effective_seed = mix64(seed ^ mix64(std::bit_cast<uint64_t>(fraction)));

  std::vector<size_t> order = split_order(n, effective_seed);
  std::vector<size_t> chosen(order.begin(),
                             order.begin() + static_cast<long>(size));
  std::sort(chosen.begin(), chosen.end());

  std::vector<ExtractionRecord> out;
  out.reserve(size);
  for (size_t idx : chosen)
    out.push_back(records[idx]);
  return out;
}

size_t emit_augmented(const std::vector<ExtractionRecord> &records,
                      const std::vector<PromptBundle> &bundles,
                      const std::string &path) {
  if (records.size() != bundles.size())
    throw LengthMismatch("emit_augmented: " + std::to_string(records.size()) +
                         " records vs " + std::to_string(bundles.size()) +
                         " bundles");
  std::string out;
  for (size_t i = 0; i < records.size(); ++i) {
    nlohmann::ordered_json obj;
    obj["id"] = records[i].id;
    obj["input"] = bundles[i].input;
    obj["prompt_mask"] = bundles[i].mask;
    nlohmann::ordered_json record_json = record_to_json(records[i]);
    obj["target"] = records[i].events ? record_json["events"]
                                      : record_json["triples"];
    obj["retrieved_ids"] = bundles[i].retrieved_ids;
    out += obj.dump();
    out += "\n";
  }
  write_atomic(path, out);
  return records.size();
}

std::vector<AugmentedRecord> load_augmented(const std::string &path) {
  std::vector<std::string> lines = read_lines(path);
  std::vector<AugmentedRecord> out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty())
      continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), i + 1);
    }
    require_keys(obj, {"id", "input", "prompt_mask", "target", "retrieved_ids"},
                 i + 1, "augmented record");
    AugmentedRecord rec;
    rec.id = obj.at("id").get<int64_t>();
    rec.input = obj.at("input").get<std::string>();
    rec.prompt_mask = obj.at("prompt_mask").get<std::vector<int>>();
    rec.target = obj.at("target");
    rec.retrieved_ids = obj.at("retrieved_ids").get<std::vector<int64_t>>();
    out.push_back(std::move(rec));
  }
  return out;
}

} // namespace rap
