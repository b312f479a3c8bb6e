#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "rap/dataset.hpp"
#include "rap/errors.hpp"
#include "rap/evaluator.hpp"
#include "rap/io_util.hpp"
#include "rap/log.hpp"
#include "rap/prompt.hpp"
#include "rap/reference_store.hpp"
#include "rap/retrieval.hpp"
#include "rap/schema_graph.hpp"
#include "rap/weak_supervision.hpp"

using json = nlohmann::ordered_json;

namespace {

struct PipelineConfig {
  std::string config_path;
  std::string schema;
  std::string store;
  std::string corpus;
  std::string lexicon;
  std::string dataset;
  std::string templates;
  std::string out;
  std::string mode = "event";
  std::string sep = "[SEP]";
  int k = -1; // -1 means mode default
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  uint64_t seed = 0;
  double fraction = 0.1;
  int64_t budget = 0; // 0 means unlimited
  bool no_nested = false;
  bool instance_labels = false;
};

// Shared flags on a subcommand; returns option handles so config-file
// values only fill in flags the user did not pass (flags win).
std::map<std::string, CLI::Option *> add_common_options(CLI::App *cmd,
                                                        PipelineConfig &cfg) {
  std::map<std::string, CLI::Option *> opts;
  opts["config"] = cmd->add_option("--config", cfg.config_path,
                                   "JSON config file; flags override it");
  opts["schema"] = cmd->add_option("--schema", cfg.schema, "schema JSONL file");
  opts["store"] = cmd->add_option("--store", cfg.store, "reference store file");
  opts["corpus"] = cmd->add_option("--corpus", cfg.corpus,
                                   "unlabeled corpus, one sentence per line");
  opts["lexicon"] = cmd->add_option("--lexicon", cfg.lexicon,
                                    "sense lexicon JSONL file");
  opts["dataset"] = cmd->add_option("--dataset", cfg.dataset,
                                    "task dataset JSONL file");
  opts["mode"] = cmd->add_option("--mode", cfg.mode, "event|triple");
  opts["k"] = cmd->add_option("--k", cfg.k, "retrieval depth");
  opts["bm25_k1"] = cmd->add_option("--bm25-k1", cfg.bm25_k1, "BM25 k1");
  opts["bm25_b"] = cmd->add_option("--bm25-b", cfg.bm25_b, "BM25 b");
  opts["seed"] = cmd->add_option("--seed", cfg.seed, "RNG seed");
  opts["fraction"] = cmd->add_option("--fraction", cfg.fraction,
                                     "split fraction in (0,1]");
  opts["sep"] = cmd->add_option("--sep", cfg.sep, "separator literal");
  opts["budget"] = cmd->add_option("--budget", cfg.budget,
                                   "max input tokens (0 = unlimited)");
  opts["templates"] = cmd->add_option("--templates", cfg.templates,
                                      "prompt template override file");
  opts["out"] = cmd->add_option("--out", cfg.out, "output path");
  opts["no_nested"] = cmd->add_flag("--no-nested", cfg.no_nested,
                                    "independent draws per fraction");
  opts["instance_labels"] =
      cmd->add_flag("--instance-labels", cfg.instance_labels,
                    "append entry labels to retrieved instance texts");
  return opts;
}

void apply_config_file(PipelineConfig &cfg,
                       const std::map<std::string, CLI::Option *> &opts) {
  if (cfg.config_path.empty())
    return;
  std::ifstream in(cfg.config_path);
  if (!in)
    throw rap::IoError("cannot open " + cfg.config_path);
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw rap::ParseError("config: " + std::string(e.what()));
  }
  auto unseen = [&](const char *name) {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() == 0;
  };
  auto get_str = [&](const char *key, std::string &field) {
    if (obj.contains(key) && unseen(key))
      field = obj[key].get<std::string>();
  };
  get_str("schema", cfg.schema);
  get_str("store", cfg.store);
  get_str("corpus", cfg.corpus);
  get_str("lexicon", cfg.lexicon);
  get_str("dataset", cfg.dataset);
  get_str("templates", cfg.templates);
  get_str("out", cfg.out);
  get_str("mode", cfg.mode);
  get_str("sep", cfg.sep);
  if (obj.contains("k") && unseen("k"))
    cfg.k = obj["k"].get<int>();
  if (obj.contains("bm25_k1") && unseen("bm25_k1"))
    cfg.bm25_k1 = obj["bm25_k1"].get<double>();
  if (obj.contains("bm25_b") && unseen("bm25_b"))
    cfg.bm25_b = obj["bm25_b"].get<double>();
  if (obj.contains("seed") && unseen("seed"))
    cfg.seed = obj["seed"].get<uint64_t>();
  if (obj.contains("fraction") && unseen("fraction"))
    cfg.fraction = obj["fraction"].get<double>();
  if (obj.contains("budget") && unseen("budget"))
    cfg.budget = obj["budget"].get<int64_t>();
  if (obj.contains("nested") && unseen("no_nested"))
    cfg.no_nested = !obj["nested"].get<bool>();
  if (obj.contains("instance_labels") && unseen("instance_labels"))
    cfg.instance_labels = obj["instance_labels"].get<bool>();
}

rap::TaskMode require_mode(const PipelineConfig &cfg) {
  auto mode = rap::parse_task_mode(cfg.mode);
  if (!mode)
    throw rap::Error("unknown mode '" + cfg.mode + "' (want event|triple)");
  return *mode;
}

void require_paths(const std::vector<std::pair<const char *, const std::string *>>
                       &required) {
  for (const auto &[name, value] : required)
    if (value->empty())
      throw rap::Error(std::string("missing required --") + name);
}

int resolved_k(const PipelineConfig &cfg, rap::TaskMode mode) {
  if (cfg.k == -1)
    return mode == rap::TaskMode::event ? rap::kTriggerOrientedTopK
                                        : rap::kArgumentOrientedTopK;
  if (cfg.k < 1)
    throw rap::InvalidK("k must be >= 1, got " + std::to_string(cfg.k));
  return cfg.k;
}

json report_to_json(const rap::EvalReport &r) {
  json obj;
  obj["precision"] = r.precision;
  obj["recall"] = r.recall;
  obj["f1"] = r.f1;
  obj["num_gold"] = r.num_gold;
  obj["num_pred"] = r.num_pred;
  obj["num_correct"] = r.num_correct;
  return obj;
}

json stats_to_json(const rap::StoreStats &stats) {
  json obj;
  obj["gold"] = stats.gold;
  obj["weak"] = stats.weak;
  json per_label;
  for (const auto &[label, count] : stats.per_label)
    per_label[label] = count;
  obj["per_label"] = std::move(per_label);
  obj["total_tokens"] = stats.total_tokens;
  return obj;
}

int cmd_build(const PipelineConfig &cfg) {
  require_paths({{"schema", &cfg.schema},
                 {"dataset", &cfg.dataset},
                 {"out", &cfg.out}});
  rap::TaskMode mode = require_mode(cfg);
  rap::SchemaGraph g = rap::load_schema(cfg.schema);
  std::vector<rap::ExtractionRecord> dataset =
      rap::load_dataset(cfg.dataset, mode);
  rap::ReferenceStore store = rap::build_store(dataset, g);
  rap::save_store(store, cfg.out);
  rap::RetrievalIndex idx =
      rap::build_index(store, rap::Bm25Params{cfg.bm25_k1, cfg.bm25_b});
  rap::save_index_snapshot(idx, cfg.out + ".index.json");
  rap::log_event(rap::LogLevel::info, "store_built",
                 {{"store", cfg.out},
                  {"entries", std::to_string(store.entries.size())}});
  std::cout << stats_to_json(rap::store_stats(store)).dump() << "\n";
  return 0;
}

int cmd_annotate(const PipelineConfig &cfg) {
  require_paths({{"schema", &cfg.schema},
                 {"store", &cfg.store},
                 {"corpus", &cfg.corpus},
                 {"lexicon", &cfg.lexicon}});
  rap::SchemaGraph g = rap::load_schema(cfg.schema);
  rap::ReferenceStore store = rap::load_store(cfg.store);
  std::vector<std::string> corpus = rap::read_lines(cfg.corpus);
  corpus.erase(std::remove_if(corpus.begin(), corpus.end(),
                              [](const std::string &s) { return s.empty(); }),
               corpus.end());
  rap::SenseLexicon lex = rap::load_lexicon(cfg.lexicon);
  std::vector<rap::StoreEntry> weak = rap::annotate_corpus(corpus, lex, g);
  auto [extended, report] = rap::extend_store(store, weak, g);
  std::string out = cfg.out.empty() ? cfg.store : cfg.out;
  rap::save_store(extended, out);
  rap::log_event(rap::LogLevel::info, "store_extended",
                 {{"store", out},
                  {"accepted", std::to_string(report.accepted)},
                  {"rejected", std::to_string(report.rejected)}});
  json obj;
  obj["annotated"] = weak.size();
  obj["accepted"] = report.accepted;
  obj["rejected"] = report.rejected;
  obj["reasons"] = report.reasons;
  obj["entries"] = extended.entries.size();
  std::cout << obj.dump() << "\n";
  return 0;
}

int cmd_augment(const PipelineConfig &cfg) {
  require_paths({{"schema", &cfg.schema},
                 {"store", &cfg.store},
                 {"dataset", &cfg.dataset},
                 {"out", &cfg.out}});
  rap::TaskMode mode = require_mode(cfg);
  int k = resolved_k(cfg, mode);
  if (cfg.budget < 0)
    throw rap::Error("budget must be >= 0");
  rap::SchemaGraph g = rap::load_schema(cfg.schema);
  rap::ReferenceStore store = rap::load_store(cfg.store);
  if (store.schema_id != rap::schema_hash(g))
    throw rap::ValidationError("store schema_id does not match --schema");
  std::vector<rap::ExtractionRecord> dataset =
      rap::load_dataset(cfg.dataset, mode);
  rap::PromptTemplates templates;
  if (!cfg.templates.empty())
    templates = rap::load_templates(cfg.templates);
  rap::RetrievalIndex idx =
      rap::build_index(store, rap::Bm25Params{cfg.bm25_k1, cfg.bm25_b});
  std::optional<size_t> budget;
  if (cfg.budget > 0)
    budget = static_cast<size_t>(cfg.budget);

  std::vector<rap::PromptBundle> bundles;
  bundles.reserve(dataset.size());
  for (const rap::ExtractionRecord &rec : dataset) {
    rap::RetrievalResult hits =
        rap::retrieve_topk(idx, rec.text, k, rec.id);
    uint64_t record_seed =
        cfg.seed + static_cast<uint64_t>(rec.id) * 0x9E3779B97F4A7C15ULL;
    rap::PromptBundle bundle =
        mode == rap::TaskMode::event
            ? rap::assemble_event_prompt(hits, store, g, record_seed,
                                         templates, cfg.instance_labels)
            : rap::assemble_relation_prompt(hits, store, g, templates,
                                            cfg.instance_labels);
    rap::format_input(bundle, rec.text, cfg.sep, budget);
    bundles.push_back(std::move(bundle));
  }
  size_t written = rap::emit_augmented(dataset, bundles, cfg.out);
  rap::log_event(rap::LogLevel::info, "augmented",
                 {{"out", cfg.out}, {"records", std::to_string(written)}});
  json obj;
  obj["written"] = written;
  obj["k"] = k;
  std::cout << obj.dump() << "\n";
  return 0;
}

int cmd_split(const PipelineConfig &cfg) {
  require_paths({{"dataset", &cfg.dataset}, {"out", &cfg.out}});
  rap::TaskMode mode = require_mode(cfg);
  std::vector<rap::ExtractionRecord> dataset =
      rap::load_dataset(cfg.dataset, mode);
  std::vector<rap::ExtractionRecord> subset = rap::sample_split(
      dataset, cfg.fraction, cfg.seed,
      cfg.no_nested ? rap::SplitMode::independent : rap::SplitMode::nested);
  rap::save_dataset(subset, cfg.out, /*reassign_ids=*/true);
  json obj;
  obj["selected"] = subset.size();
  obj["total"] = dataset.size();
  std::cout << obj.dump() << "\n";
  return 0;
}

int cmd_eval(const PipelineConfig &cfg, const std::string &gold_path,
             const std::string &pred_path) {
  rap::TaskMode mode = require_mode(cfg);
  std::vector<rap::ExtractionRecord> gold =
      rap::load_dataset(gold_path, mode);
  std::vector<rap::ExtractionRecord> pred =
      rap::load_dataset(pred_path, mode);
  json obj;
  if (mode == rap::TaskMode::event) {
    obj["trigger_classification"] =
        report_to_json(rap::eval_trigger_classification(gold, pred));
    obj["argument_classification"] =
        report_to_json(rap::eval_argument_classification(gold, pred));
  } else {
    obj["triples"] = report_to_json(rap::eval_triples(gold, pred));
  }
  std::cout << obj.dump() << "\n";
  return 0;
}

int cmd_stats(const PipelineConfig &cfg) {
  require_paths({{"store", &cfg.store}});
  rap::ReferenceStore store = rap::load_store(cfg.store);
  std::cout << stats_to_json(rap::store_stats(store)).dump() << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Schema-grounded reference retrieval and prompt augmentation "
               "for knowledge-graph construction datasets"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string gold_path, pred_path;

  CLI::App *build = app.add_subcommand(
      "build", "build the reference store and index from gold data");
  auto build_opts = add_common_options(build, cfg);

  CLI::App *annotate = app.add_subcommand(
      "annotate", "weak-label a corpus and extend the store");
  auto annotate_opts = add_common_options(annotate, cfg);

  CLI::App *augment = app.add_subcommand(
      "augment", "retrieve references and emit the prompt-augmented dataset");
  auto augment_opts = add_common_options(augment, cfg);

  CLI::App *split =
      app.add_subcommand("split", "deterministic low-resource split");
  auto split_opts = add_common_options(split, cfg);

  CLI::App *eval = app.add_subcommand("eval", "score predictions against gold");
  eval->add_option("gold", gold_path, "gold dataset file")->required();
  eval->add_option("pred", pred_path, "prediction file")->required();
  auto eval_opts = add_common_options(eval, cfg);

  CLI::App *stats = app.add_subcommand("stats", "print store statistics");
  auto stats_opts = add_common_options(stats, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      apply_config_file(cfg, build_opts);
      return cmd_build(cfg);
    }
    if (annotate->parsed()) {
      apply_config_file(cfg, annotate_opts);
      return cmd_annotate(cfg);
    }
    if (augment->parsed()) {
      apply_config_file(cfg, augment_opts);
      return cmd_augment(cfg);
    }
    if (split->parsed()) {
      apply_config_file(cfg, split_opts);
      return cmd_split(cfg);
    }
    if (eval->parsed()) {
      apply_config_file(cfg, eval_opts);
      return cmd_eval(cfg, gold_path, pred_path);
    }
    if (stats->parsed()) {
      apply_config_file(cfg, stats_opts);
      return cmd_stats(cfg);
    }
  } catch (const std::exception &e) {
    rap::log_event(rap::LogLevel::error, "command_failed",
                   {{"error", e.what()}});
    std::cerr << "rap: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
