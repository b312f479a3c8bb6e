#include "rap/weak_supervision.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <nlohmann/json.hpp>

#include "rap/errors.hpp"
#include "rap/io_util.hpp"
#include "rap/log.hpp"
#include "rap/tokenize.hpp"

namespace rap {

const char *pos_name(Pos pos) {
  switch (pos) {
  case Pos::verb:
    return "verb";
  case Pos::noun:
    return "noun";
  case Pos::other:
    return "other";
  }
  return "?";
}

std::optional<Pos> parse_pos(const std::string &name) {
  if (name == "verb")
    return Pos::verb;
  if (name == "noun")
    return Pos::noun;
  if (name == "other")
    return Pos::other;
  return std::nullopt;
}

void SenseLexicon::add(const std::string &lemma, Pos pos,
                       std::vector<Sense> senses) {
  for (const Sense &s : senses)
    by_sense_id_.emplace(s.id, s);
  entries_[{lemma, pos}] = std::move(senses);
}

const std::vector<Sense> *SenseLexicon::find(const std::string &lemma,
                                             Pos pos) const {
  auto it = entries_.find({lemma, pos});
  return it == entries_.end() ? nullptr : &it->second;
}

const Sense *SenseLexicon::find_sense(const std::string &sense_id) const {
  auto it = by_sense_id_.find(sense_id);
  return it == by_sense_id_.end() ? nullptr : &it->second;
}

SenseLexicon parse_lexicon(const std::vector<std::string> &lines) {
  SenseLexicon lex;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty())
      continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), i + 1);
    }
    if (!obj.is_object() || !obj.contains("lemma") ||
        !obj["lemma"].is_string() || !obj.contains("pos") ||
        !obj["pos"].is_string() || !obj.contains("senses") ||
        !obj["senses"].is_array())
      throw ParseError("lexicon line requires lemma/pos/senses", i + 1);
    auto pos = parse_pos(obj["pos"].get<std::string>());
    if (!pos)
      throw ParseError("unknown pos '" + obj["pos"].get<std::string>() + "'",
                       i + 1);
    std::vector<Sense> senses;
    for (const auto &s : obj["senses"]) {
      if (!s.is_object() || !s.contains("id") || !s["id"].is_string() ||
          !s.contains("event") || !s["event"].is_boolean())
        throw ParseError("sense requires id/event", i + 1);
      Sense sense;
      sense.id = s["id"].get<std::string>();
      sense.event = s["event"].get<bool>();
      if (s.contains("types"))
        sense.types = s["types"].get<std::vector<std::string>>();
      senses.push_back(std::move(sense));
    }
    lex.add(obj["lemma"].get<std::string>(), *pos, std::move(senses));
  }
  return lex;
}

SenseLexicon load_lexicon(const std::string &path) {
  return parse_lexicon(read_lines(path));
}

namespace {

// Lemma candidates in lookup order: the surface form, then suffix strips.
std::vector<std::string> lemma_candidates(std::string_view token) {
  std::vector<std::string> out;
  out.emplace_back(token);
  static constexpr std::array<std::string_view, 4> suffixes = {"ed", "ing",
                                                               "s", "es"};
  for (std::string_view suffix : suffixes)
    if (token.size() > suffix.size() && token.ends_with(suffix))
      out.emplace_back(token.substr(0, token.size() - suffix.size()));
  return out;
}

} // namespace

SenseAssigner most_frequent_sense() {
  return [](std::string_view token,
            const SenseLexicon &lex) -> std::optional<std::pair<Pos, std::string>> {
    static constexpr std::array<Pos, 3> pos_order = {Pos::verb, Pos::noun,
                                                     Pos::other};
    for (const std::string &lemma : lemma_candidates(token))
      for (Pos pos : pos_order) {
        const std::vector<Sense> *senses = lex.find(lemma, pos);
        if (senses && !senses->empty())
          return std::make_pair(pos, senses->front().id);
      }
    return std::nullopt;
  };
}

std::vector<SensedToken> disambiguate(std::string_view sentence,
                                      const SenseLexicon &lex,
                                      const SenseAssigner &tagger) {
  std::vector<SensedToken> out;
  for (const Token &tok : tokenize(sentence)) {
    auto assigned = tagger(to_lower(tok.text), lex);
    if (!assigned)
      continue; // sense is None: filtered
    out.push_back(SensedToken{tok.text, tok.begin, tok.end, assigned->first,
                              assigned->second});
  }
  return out;
}

std::vector<Nugget> detect_nuggets(const std::vector<SensedToken> &sensed,
                                   const SenseLexicon &lex) {
  std::vector<Nugget> nuggets;
  for (const SensedToken &st : sensed) {
    if (st.pos != Pos::verb && st.pos != Pos::noun)
      continue;
    const Sense *sense = lex.find_sense(st.sense_id);
    if (!sense || !sense->event)
      continue;
    nuggets.push_back(Nugget{st.token, st.begin, st.end, st.pos, st.sense_id});
  }
  return nuggets;
}

std::vector<std::string> map_to_schema(std::string_view /*sentence*/,
                                       const std::vector<Nugget> &nuggets,
                                       const SenseLexicon &lex,
                                       const SchemaGraph &g) {
  std::set<std::string> labels;
  for (const Nugget &n : nuggets) {
    const Sense *sense = lex.find_sense(n.sense_id);
    if (!sense)
      continue;
    for (const std::string &type : sense->types) {
      const SchemaNode *node = g.find(type);
      if (node && node->kind == NodeKind::event_type)
        labels.insert(type);
    }
  }
  return {labels.begin(), labels.end()};
}

std::vector<StoreEntry> annotate_corpus(const std::vector<std::string> &corpus,
                                        const SenseLexicon &lex,
                                        const SchemaGraph &g,
                                        const SenseAssigner &tagger) {
  std::vector<StoreEntry> entries;
  for (const std::string &sentence : corpus) {
    std::vector<std::string> labels;
    try {
      std::vector<SensedToken> sensed = disambiguate(sentence, lex, tagger);
      std::vector<Nugget> nuggets = detect_nuggets(sensed, lex);
      labels = map_to_schema(sentence, nuggets, lex, g);
    } catch (const std::exception &e) {
      log_event(LogLevel::warn, "annotate_sentence_failed",
                {{"error", e.what()}});
      continue;
    }
    if (labels.empty())
      continue;
    StoreEntry entry;
    entry.id = static_cast<int64_t>(entries.size());
    entry.text = sentence;
    entry.labels = labels;
    entry.pointers = labels; // weak labels point at the matched type nodes
    entry.source = EntrySource::weak;
    entries.push_back(std::move(entry));
  }
  return entries;
}

} // namespace rap
