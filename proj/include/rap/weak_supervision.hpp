#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rap/reference_store.hpp"
#include "rap/schema_graph.hpp"

namespace rap {

enum class Pos { verb, noun, other };

const char *pos_name(Pos pos);
std::optional<Pos> parse_pos(const std::string &name);

struct Sense {
  std::string id;
  bool event = false;
  std::vector<std::string> types; // schema node ids this sense maps to
};

// Word-sense inventory plus trigger dictionary: (lemma, pos) -> senses
// ordered by frequency rank (first = most frequent).
class SenseLexicon {
public:
  // Senses replace any existing list for (lemma, pos).
  void add(const std::string &lemma, Pos pos, std::vector<Sense> senses);

  const std::vector<Sense> *find(const std::string &lemma, Pos pos) const;

  // Lookup by sense id (the Alg-style event test + schema mapping).
  const Sense *find_sense(const std::string &sense_id) const;

  size_t size() const { return entries_.size(); }

private:
  std::map<std::pair<std::string, Pos>, std::vector<Sense>> entries_;
  std::map<std::string, Sense> by_sense_id_;
};

// Lexicon file: JSON lines
//   {"lemma": "...", "pos": "verb|noun|other",
//    "senses": [{"id": "...", "event": bool, "types": ["..."]}]}
SenseLexicon parse_lexicon(const std::vector<std::string> &lines);
SenseLexicon load_lexicon(const std::string &path);

// Candidate event mention: a sensed verb/noun token.
struct Nugget {
  std::string token;
  size_t begin = 0; // character offsets [begin, end) in the sentence
  size_t end = 0;
  Pos pos = Pos::other;
  std::string sense_id;

  bool operator==(const Nugget &) const = default;
};

struct SensedToken {
  std::string token; // original surface form
  size_t begin = 0;
  size_t end = 0;
  Pos pos = Pos::other;
  std::string sense_id;

  bool operator==(const SensedToken &) const = default;
};

// Assigns (pos, sense) to a lowercased token, or nullopt to drop it.
using SenseAssigner = std::function<std::optional<std::pair<Pos, std::string>>(
    std::string_view token, const SenseLexicon &lex)>;

// Default assigner: lemmatize by suffix stripping (-ed, -ing, -s, -es),
// look the lemma up verb-first, take the first (most frequent) sense.
SenseAssigner most_frequent_sense();

// One tuple per token that receives a sense; senseless tokens are dropped.
std::vector<SensedToken> disambiguate(std::string_view sentence,
                                      const SenseLexicon &lex,
                                      const SenseAssigner &tagger =
                                          most_frequent_sense());

// A sensed token becomes a nugget iff its pos is verb/noun and the sense's
// event flag is true. Sentence order is preserved.
std::vector<Nugget> detect_nuggets(const std::vector<SensedToken> &sensed,
                                   const SenseLexicon &lex);

// A nugget maps iff its sense's types intersect g's event_type nodes.
// Returns the matched event-type ids, sorted and deduplicated.
std::vector<std::string> map_to_schema(std::string_view sentence,
                                       const std::vector<Nugget> &nuggets,
                                       const SenseLexicon &lex,
                                       const SchemaGraph &g);

// Full weak-labeling pipeline over a corpus: one weak entry per sentence
// that yields at least one label; other sentences are skipped.
std::vector<StoreEntry> annotate_corpus(const std::vector<std::string> &corpus,
                                        const SenseLexicon &lex,
                                        const SchemaGraph &g,
                                        const SenseAssigner &tagger =
                                            most_frequent_sense());

} // namespace rap
