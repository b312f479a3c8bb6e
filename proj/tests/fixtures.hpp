#pragma once
// Hand-built fixtures shared across the test suites. Everything here is
// constructed by manual enumeration so tests can assert exact contents.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rap/dataset.hpp"
#include "rap/reference_store.hpp"
#include "rap/schema_graph.hpp"
#include "rap/weak_supervision.hpp"

namespace fixtures {

// ACE-like event schema: 8 event types with SubType hypernyms, trigger
// words, and argument roles.
inline rap::SchemaGraph event_schema() {
  rap::SchemaGraph g;
  using rap::NodeKind;
  g.add_node("Attack", NodeKind::event_type,
             "A violent physical act causing harm or damage.");
  g.add_node("Conflict", NodeKind::event_type);
  g.add_node("Contact", NodeKind::event_type);
  g.add_node("Convict", NodeKind::event_type);
  g.add_node("Justice", NodeKind::event_type);
  g.add_node("Meet", NodeKind::event_type,
             "Two or more entities come together at a single location.");
  g.add_node("Movement", NodeKind::event_type);
  g.add_node("Transport", NodeKind::event_type,
             "An artifact or person is moved from one place to another.");

  g.add_edge("Attack", rap::kSubTypeEdge, "Conflict");
  g.add_edge("Meet", rap::kSubTypeEdge, "Contact");
  g.add_edge("Convict", rap::kSubTypeEdge, "Justice");
  g.add_edge("Transport", rap::kSubTypeEdge, "Movement");

  for (const char *t : {"hacked", "fire", "meet", "meeting", "summit",
                        "transport", "move", "convict"})
    g.add_node(t, NodeKind::trigger_word);
  g.add_edge("Attack", rap::kHasTriggerEdge, "hacked");
  g.add_edge("Attack", rap::kHasTriggerEdge, "fire");
  g.add_edge("Meet", rap::kHasTriggerEdge, "meet");
  g.add_edge("Meet", rap::kHasTriggerEdge, "meeting");
  g.add_edge("Meet", rap::kHasTriggerEdge, "summit");
  g.add_edge("Transport", rap::kHasTriggerEdge, "transport");
  g.add_edge("Transport", rap::kHasTriggerEdge, "move");
  g.add_edge("Convict", rap::kHasTriggerEdge, "convict");

  for (const char *r : {"Attacker", "Victim", "Place", "Entity", "Artifact",
                        "Origin", "Destination", "Defendant", "Adjudicator"})
    g.add_node(r, NodeKind::argument_role);
  g.add_edge("Attack", rap::kHasRoleEdge, "Attacker");
  g.add_edge("Attack", rap::kHasRoleEdge, "Victim");
  g.add_edge("Attack", rap::kHasRoleEdge, "Place");
  g.add_edge("Meet", rap::kHasRoleEdge, "Entity");
  g.add_edge("Meet", rap::kHasRoleEdge, "Place");
  g.add_edge("Transport", rap::kHasRoleEdge, "Artifact");
  g.add_edge("Transport", rap::kHasRoleEdge, "Origin");
  g.add_edge("Transport", rap::kHasRoleEdge, "Destination");
  g.add_edge("Convict", rap::kHasRoleEdge, "Defendant");
  g.add_edge("Convict", rap::kHasRoleEdge, "Adjudicator");
  return g;
}

inline rap::SchemaGraph relation_schema() {
  rap::SchemaGraph g;
  using rap::NodeKind;
  g.add_node("capital_of", NodeKind::relation_type,
             "The head entity is the capital city of the tail entity.");
  g.add_node("founders", NodeKind::relation_type);
  g.add_node("city", NodeKind::entity_type);
  g.add_node("company", NodeKind::entity_type);
  g.add_node("person", NodeKind::entity_type);
  g.add_edge("capital_of", rap::kHasHeadTypeEdge, "city");
  g.add_edge("capital_of", rap::kHasTailTypeEdge, "city");
  g.add_edge("founders", rap::kHasHeadTypeEdge, "company");
  g.add_edge("founders", rap::kHasTailTypeEdge, "person");
  return g;
}

inline const char *walkthrough_sentence() {
  return "He commanded several ships contracted by Jonathan Forward to "
         "transport convicted felons from London to Maryland.";
}

// Lexicon flagging the four stems of the walkthrough sentence. Only
// transport and convict map to schema types.
inline rap::SenseLexicon walkthrough_lexicon() {
  rap::SenseLexicon lex;
  lex.add("command", rap::Pos::verb,
          {{"command.v.01", true, {}}});
  lex.add("contract", rap::Pos::verb,
          {{"contract.v.01", true, {}}});
  lex.add("transport", rap::Pos::verb,
          {{"transport.v.01", true, {"Transport"}},
           {"transport.v.02", false, {}}});
  lex.add("convict", rap::Pos::verb,
          {{"convict.v.01", true, {"Convict"}}});
  return lex;
}

inline std::vector<rap::ExtractionRecord> event_records() {
  std::vector<rap::ExtractionRecord> records(3);
  records[0].id = 0;
  records[0].text = "A man was hacked to death by the criminal";
  records[0].events = {{
      "Attack",
      {"hacked", 10, 16},
      {{"Attacker", "criminal", 33, 41}, {"Victim", "A man", 0, 5}},
  }};
  records[1].id = 1;
  records[1].text = "Leaders will meet in Beijing next week";
  records[1].events = {{
      "Meet",
      {"meet", 13, 17},
      {{"Entity", "Leaders", 0, 7}, {"Place", "Beijing", 21, 28}},
  }};
  records[2].id = 2;
  records[2].text = "The convoy will transport felons to Maryland";
  records[2].events = {{
      "Transport",
      {"transport", 16, 25},
      {{"Artifact", "felons", 26, 32}, {"Destination", "Maryland", 36, 44}},
  }};
  return records;
}

inline std::vector<rap::ExtractionRecord> triple_records() {
  std::vector<rap::ExtractionRecord> records(2);
  records[0].id = 0;
  records[0].text = "His career included a four-year assignment in Tokyo, "
                    "Japan as head of Mobil Far East";
  records[0].triples = {{"Tokyo", "capital_of", "Japan"}};
  records[1].id = 1;
  records[1].text = "The company was started by two engineers in a garage";
  records[1].triples = {{"the company", "founders", "two engineers"}};
  return records;
}

// Three-document store for retrieval tests; labels/pointers deliberately
// empty so scores depend on text alone.
inline rap::ReferenceStore tiny_store() {
  rap::ReferenceStore store;
  store.schema_id = "deadbeef";
  const char *texts[] = {
      "he commanded several ships to transport felons",
      "the criminal was hacked to death",
      "transport of goods by ships",
  };
  for (int i = 0; i < 3; ++i) {
    rap::StoreEntry e;
    e.id = i;
    e.text = texts[i];
    e.labels = {"L"};
    e.source = rap::EntrySource::gold;
    store.entries.push_back(std::move(e));
  }
  return store;
}

class TempDir {
public:
  TempDir() {
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = std::filesystem::temp_directory_path() /
                       ("rap_test_" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::string file(const std::string &name) const {
    return (path_ / name).string();
  }

private:
  std::filesystem::path path_;
};

inline std::string write_file(const std::string &path,
                              const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// JSONL rendering of event_schema() for file-based tests.
inline std::string event_schema_jsonl() {
  const rap::SchemaGraph g = event_schema();
  std::string out;
  for (const auto &[id, node] : g.nodes()) {
    nlohmann::ordered_json line;
    line["node"] = id;
    line["kind"] = rap::node_kind_name(node.kind);
    if (node.definition)
      line["definition"] = *node.definition;
    else
      line["definition"] = nullptr;
    out += line.dump();
    out += "\n";
  }
  for (const auto &e : g.edges()) {
    nlohmann::ordered_json line;
    line["triple"] = {e.head, e.rel, e.tail};
    out += line.dump();
    out += "\n";
  }
  return out;
}

inline std::string dataset_jsonl(const std::vector<rap::ExtractionRecord> &records) {
  std::string out;
  for (const auto &rec : records) {
    out += rap::record_to_json(rec).dump();
    out += "\n";
  }
  return out;
}

inline std::string walkthrough_lexicon_jsonl() {
  return R"({"lemma": "command", "pos": "verb", "senses": [{"id": "command.v.01", "event": true, "types": []}]}
{"lemma": "contract", "pos": "verb", "senses": [{"id": "contract.v.01", "event": true, "types": []}]}
{"lemma": "transport", "pos": "verb", "senses": [{"id": "transport.v.01", "event": true, "types": ["Transport"]}, {"id": "transport.v.02", "event": false, "types": []}]}
{"lemma": "convict", "pos": "verb", "senses": [{"id": "convict.v.01", "event": true, "types": ["Convict"]}]}
)";
}

} // namespace fixtures
