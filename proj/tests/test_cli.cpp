#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "rap/dataset.hpp"
#include "rap/reference_store.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

int run_counter = 0;

RunResult run_cli(const fixtures::TempDir &dir, const std::string &args) {
  std::string out_path = dir.file(".out" + std::to_string(run_counter));
  std::string err_path = dir.file(".err" + std::to_string(run_counter));
  ++run_counter;
  std::string cmd = std::string(RAP_CLI_PATH) + " " + args + " >" + out_path +
                    " 2>" + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = fixtures::read_file(out_path);
  r.err = fixtures::read_file(err_path);
  return r;
}

struct CliFixture {
  fixtures::TempDir dir;
  std::string schema, dataset, corpus, lexicon;

  CliFixture() {
    schema = fixtures::write_file(dir.file("schema.jsonl"),
                                  fixtures::event_schema_jsonl());
    dataset = fixtures::write_file(
        dir.file("dataset.jsonl"),
        fixtures::dataset_jsonl(fixtures::event_records()));
    corpus = fixtures::write_file(
        dir.file("corpus.txt"),
        std::string(fixtures::walkthrough_sentence()) +
            "\nnothing to see in this line\n");
    lexicon = fixtures::write_file(dir.file("lexicon.jsonl"),
                                   fixtures::walkthrough_lexicon_jsonl());
  }

  RunResult build(const std::string &store_name = "store.jsonl") {
    return run_cli(dir, "build --schema " + schema + " --dataset " + dataset +
                            " --mode event --out " + dir.file(store_name));
  }
};

} // namespace

TEST_CASE("build writes store and index and prints stats") {
  CliFixture f;
  RunResult r = f.build();
  CHECK(r.exit_code == 0);
  CHECK(std::filesystem::exists(f.dir.file("store.jsonl")));
  CHECK(std::filesystem::exists(f.dir.file("store.jsonl.index.json")));
  json stats = json::parse(r.out);
  CHECK(stats["gold"] == 3);
  CHECK(stats["weak"] == 0);
  CHECK(stats["per_label"]["Attack"] == 1);
}

TEST_CASE("build fails loudly on a missing schema") {
  CliFixture f;
  RunResult r = run_cli(f.dir, "build --schema " + f.dir.file("nope.jsonl") +
                                   " --dataset " + f.dataset +
                                   " --mode event --out " +
                                   f.dir.file("s.jsonl"));
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("nope.jsonl") != std::string::npos);
}

TEST_CASE("build surfaces UnknownLabel") {
  CliFixture f;
  auto records = fixtures::event_records();
  (*records[2].events)[0].type = "Vanish";
  fixtures::write_file(f.dir.file("bad.jsonl"),
                       fixtures::dataset_jsonl(records));
  RunResult r = run_cli(f.dir, "build --schema " + f.schema + " --dataset " +
                                   f.dir.file("bad.jsonl") +
                                   " --mode event --out " +
                                   f.dir.file("s.jsonl"));
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("Vanish") != std::string::npos);
}

TEST_CASE("annotate grows the store by one weak entry") {
  CliFixture f;
  REQUIRE(f.build().exit_code == 0);
  size_t before = rap::load_store(f.dir.file("store.jsonl")).entries.size();

  RunResult r = run_cli(f.dir, "annotate --schema " + f.schema + " --store " +
                                   f.dir.file("store.jsonl") + " --corpus " +
                                   f.corpus + " --lexicon " + f.lexicon);
  CHECK(r.exit_code == 0);
  json report = json::parse(r.out);
  CHECK(report["annotated"] == 1);
  CHECK(report["accepted"] == 1);
  CHECK(report["rejected"] == 0);

  rap::ReferenceStore store = rap::load_store(f.dir.file("store.jsonl"));
  REQUIRE(store.entries.size() == before + 1);
  const rap::StoreEntry &weak = store.entries.back();
  CHECK(weak.source == rap::EntrySource::weak);
  CHECK(weak.labels == std::vector<std::string>{"Convict", "Transport"});
}

TEST_CASE("annotate with an empty corpus leaves the store unchanged") {
  CliFixture f;
  REQUIRE(f.build().exit_code == 0);
  fixtures::write_file(f.dir.file("empty.txt"), "");
  std::string before = fixtures::read_file(f.dir.file("store.jsonl"));
  RunResult r = run_cli(f.dir, "annotate --schema " + f.schema + " --store " +
                                   f.dir.file("store.jsonl") + " --corpus " +
                                   f.dir.file("empty.txt") + " --lexicon " +
                                   f.lexicon);
  CHECK(r.exit_code == 0);
  CHECK(fixtures::read_file(f.dir.file("store.jsonl")) == before);
}

TEST_CASE("annotate fails on an unreadable lexicon") {
  CliFixture f;
  REQUIRE(f.build().exit_code == 0);
  RunResult r = run_cli(f.dir, "annotate --schema " + f.schema + " --store " +
                                   f.dir.file("store.jsonl") + " --corpus " +
                                   f.corpus + " --lexicon " +
                                   f.dir.file("ghost.jsonl"));
  CHECK(r.exit_code == 1);
}

TEST_CASE("augment is deterministic and respects k") {
  CliFixture f;
  REQUIRE(f.build().exit_code == 0);
  std::string dataset_before = fixtures::read_file(f.dataset);

  std::string base_args = "augment --schema " + f.schema + " --store " +
                          f.dir.file("store.jsonl") + " --dataset " +
                          f.dataset + " --mode event --seed 11 --k 2 --out ";
  RunResult r1 = run_cli(f.dir, base_args + f.dir.file("aug1.jsonl"));
  RunResult r2 = run_cli(f.dir, base_args + f.dir.file("aug2.jsonl"));
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(fixtures::read_file(f.dir.file("aug1.jsonl")) ==
        fixtures::read_file(f.dir.file("aug2.jsonl")));

  auto augmented = rap::load_augmented(f.dir.file("aug1.jsonl"));
  REQUIRE(augmented.size() == 3);
  for (const auto &a : augmented) {
    CHECK(a.retrieved_ids.size() <= 2);
    for (int64_t id : a.retrieved_ids)
      CHECK(id != a.id); // self-retrieval guard
  }

  // inputs were not mutated
  CHECK(fixtures::read_file(f.dataset) == dataset_before);
}

TEST_CASE("augment rejects k = 0 before doing any work") {
  CliFixture f;
  REQUIRE(f.build().exit_code == 0);
  RunResult r = run_cli(f.dir, "augment --schema " + f.schema + " --store " +
                                   f.dir.file("store.jsonl") + " --dataset " +
                                   f.dataset +
                                   " --mode event --k 0 --out " +
                                   f.dir.file("aug.jsonl"));
  CHECK(r.exit_code == 1);
  CHECK_FALSE(std::filesystem::exists(f.dir.file("aug.jsonl")));
}

TEST_CASE("config file supplies defaults and flags win") {
  CliFixture f;
  REQUIRE(f.build().exit_code == 0);
  fixtures::write_file(f.dir.file("cfg.json"),
                       R"({"k": 1, "seed": 4, "mode": "event"})");
  std::string args = "augment --config " + f.dir.file("cfg.json") +
                     " --schema " + f.schema + " --store " +
                     f.dir.file("store.jsonl") + " --dataset " + f.dataset +
                     " --out " + f.dir.file("aug.jsonl");
  RunResult from_config = run_cli(f.dir, args);
  CHECK(from_config.exit_code == 0);
  CHECK(json::parse(from_config.out)["k"] == 1);

  RunResult flag_wins = run_cli(f.dir, args + " --k 2");
  CHECK(flag_wins.exit_code == 0);
  CHECK(json::parse(flag_wins.out)["k"] == 2);
}

TEST_CASE("split writes a deterministic subset") {
  CliFixture f;
  std::vector<rap::ExtractionRecord> records(100);
  for (size_t i = 0; i < records.size(); ++i) {
    records[i].id = static_cast<int64_t>(i);
    records[i].text = "sentence number " + std::to_string(i);
    records[i].events = std::vector<rap::EventAnnotation>{};
  }
  fixtures::write_file(f.dir.file("big.jsonl"),
                       fixtures::dataset_jsonl(records));
  std::string args = "split --dataset " + f.dir.file("big.jsonl") +
                     " --mode event --fraction 0.1 --seed 9 --out ";
  RunResult r1 = run_cli(f.dir, args + f.dir.file("s1.jsonl"));
  RunResult r2 = run_cli(f.dir, args + f.dir.file("s2.jsonl"));
  CHECK(r1.exit_code == 0);
  CHECK(json::parse(r1.out)["selected"] == 10);
  CHECK(fixtures::read_file(f.dir.file("s1.jsonl")) ==
        fixtures::read_file(f.dir.file("s2.jsonl")));
  CHECK(rap::load_dataset(f.dir.file("s1.jsonl"), rap::TaskMode::event).size() ==
        10);
}

TEST_CASE("eval reports perfect scores for gold == pred") {
  CliFixture f;
  RunResult r =
      run_cli(f.dir, "eval " + f.dataset + " " + f.dataset + " --mode event");
  CHECK(r.exit_code == 0);
  json report = json::parse(r.out);
  CHECK(report["trigger_classification"]["f1"] == 1.0);
  CHECK(report["argument_classification"]["f1"] == 1.0);
}

TEST_CASE("eval reproduces the hand-counted trigger scores") {
  CliFixture f;
  auto event_record = [](int64_t id,
                         std::vector<rap::EventAnnotation> events) {
    rap::ExtractionRecord r;
    r.id = id;
    r.text = std::string(30, 'x');
    r.events = std::move(events);
    return r;
  };
  auto ev = [](const std::string &type, size_t s, size_t e) {
    return rap::EventAnnotation{type, {"w", s, e}, {}};
  };
  std::vector<rap::ExtractionRecord> gold = {
      event_record(0, {ev("Attack", 10, 16), ev("Meet", 20, 24)}),
      event_record(1, {ev("Transport", 0, 9)})};
  std::vector<rap::ExtractionRecord> pred = {
      event_record(0, {ev("Attack", 10, 16), ev("Meet", 21, 25)}),
      event_record(1, {})};
  fixtures::write_file(f.dir.file("gold.jsonl"), fixtures::dataset_jsonl(gold));
  fixtures::write_file(f.dir.file("pred.jsonl"), fixtures::dataset_jsonl(pred));
  RunResult r = run_cli(f.dir, "eval " + f.dir.file("gold.jsonl") + " " +
                                   f.dir.file("pred.jsonl") + " --mode event");
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.out);
  CHECK(report["trigger_classification"]["precision"] == 0.5);
  CHECK(report["trigger_classification"]["f1"].get<double>() ==
        doctest::Approx(0.4));
  CHECK(report["trigger_classification"]["num_correct"] == 1);
}

TEST_CASE("eval exits 1 on misaligned files") {
  CliFixture f;
  auto records = fixtures::event_records();
  records.pop_back();
  fixtures::write_file(f.dir.file("short.jsonl"),
                       fixtures::dataset_jsonl(records));
  RunResult r = run_cli(f.dir, "eval " + f.dataset + " " +
                                   f.dir.file("short.jsonl") + " --mode event");
  CHECK(r.exit_code == 1);
}

TEST_CASE("eval scores triples") {
  CliFixture f;
  fixtures::write_file(f.dir.file("gold.jsonl"),
                       fixtures::dataset_jsonl(fixtures::triple_records()));
  RunResult r = run_cli(f.dir, "eval " + f.dir.file("gold.jsonl") + " " +
                                   f.dir.file("gold.jsonl") + " --mode triple");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["triples"]["f1"] == 1.0);
}

TEST_CASE("augment over 100 records emits 100 bounded lines") {
  CliFixture f;
  std::vector<rap::ExtractionRecord> records;
  auto base = fixtures::event_records();
  for (size_t i = 0; i < 100; ++i) {
    rap::ExtractionRecord rec = base[i % base.size()];
    rec.id = static_cast<int64_t>(i);
    rec.text += " variant " + std::to_string(i);
    records.push_back(std::move(rec));
  }
  fixtures::write_file(f.dir.file("hundred.jsonl"),
                       fixtures::dataset_jsonl(records));
  REQUIRE(run_cli(f.dir, "build --schema " + f.schema + " --dataset " +
                             f.dir.file("hundred.jsonl") +
                             " --mode event --out " +
                             f.dir.file("hstore.jsonl"))
              .exit_code == 0);
  RunResult r = run_cli(f.dir, "augment --schema " + f.schema + " --store " +
                                   f.dir.file("hstore.jsonl") + " --dataset " +
                                   f.dir.file("hundred.jsonl") +
                                   " --mode event --k 3 --seed 2 --out " +
                                   f.dir.file("haug.jsonl"));
  REQUIRE(r.exit_code == 0);
  auto augmented = rap::load_augmented(f.dir.file("haug.jsonl"));
  REQUIRE(augmented.size() == 100);
  for (const auto &a : augmented)
    CHECK(a.retrieved_ids.size() <= 3);
}

TEST_CASE("RAP_LOG gates the structured log stream") {
  CliFixture f;
  RunResult loud = run_cli(f.dir, "build --schema " + f.schema +
                                      " --dataset " + f.dataset +
                                      " --mode event --out " +
                                      f.dir.file("s1.jsonl"));
  CHECK(loud.exit_code == 0);
  CHECK(loud.err.find("\"event\":\"store_built\"") != std::string::npos);

  std::string quiet_out = f.dir.file(".quiet_out");
  std::string quiet_err = f.dir.file(".quiet_err");
  std::string cmd = std::string("RAP_LOG=error ") + RAP_CLI_PATH +
                    " build --schema " + f.schema + " --dataset " + f.dataset +
                    " --mode event --out " + f.dir.file("s2.jsonl") + " >" +
                    quiet_out + " 2>" + quiet_err;
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(fixtures::read_file(quiet_err).empty());
}

TEST_CASE("triple mode pipeline: build then augment with default k") {
  CliFixture f;
  fixtures::write_file(f.dir.file("rel_schema.jsonl"),
                       R"({"node": "capital_of", "kind": "relation_type"}
{"node": "founders", "kind": "relation_type"}
{"node": "city", "kind": "entity_type"}
{"node": "company", "kind": "entity_type"}
{"node": "person", "kind": "entity_type"}
{"triple": ["capital_of", "has_head_type", "city"]}
{"triple": ["capital_of", "has_tail_type", "city"]}
{"triple": ["founders", "has_head_type", "company"]}
{"triple": ["founders", "has_tail_type", "person"]}
)");
  fixtures::write_file(f.dir.file("rel.jsonl"),
                       fixtures::dataset_jsonl(fixtures::triple_records()));
  RunResult b = run_cli(f.dir, "build --schema " + f.dir.file("rel_schema.jsonl") +
                                   " --dataset " + f.dir.file("rel.jsonl") +
                                   " --mode triple --out " +
                                   f.dir.file("rel_store.jsonl"));
  REQUIRE(b.exit_code == 0);
  RunResult a = run_cli(f.dir, "augment --schema " +
                                   f.dir.file("rel_schema.jsonl") + " --store " +
                                   f.dir.file("rel_store.jsonl") + " --dataset " +
                                   f.dir.file("rel.jsonl") +
                                   " --mode triple --out " +
                                   f.dir.file("rel_aug.jsonl"));
  CHECK(a.exit_code == 0);
  CHECK(json::parse(a.out)["k"] == 8); // argument-oriented default
  CHECK(rap::load_augmented(f.dir.file("rel_aug.jsonl")).size() == 2);
}

TEST_CASE("stats prints store statistics") {
  CliFixture f;
  REQUIRE(f.build().exit_code == 0);
  RunResult r = run_cli(f.dir, "stats --store " + f.dir.file("store.jsonl"));
  CHECK(r.exit_code == 0);
  json stats = json::parse(r.out);
  CHECK(stats["gold"] == 3);
  CHECK(stats["per_label"].size() == 3);
}
