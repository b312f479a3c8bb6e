#include "rap/prompt.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "rap/errors.hpp"
#include "rap/tokenize.hpp"

namespace rap {

namespace {

constexpr const char *kDefaultTriggerTemplate =
    "Similar trigger such as {triggers}.";
constexpr const char *kDefaultArgumentTemplate =
    "The event has argument {role}.";
constexpr const char *kDefaultRelationTemplate = "Potential relation {relation}.";
constexpr const char *kDefaultStructureTemplate =
    "({head_type}, {relation}, {tail_type})";

std::string substitute(const std::string &format,
                       const std::map<std::string, std::string> &values) {
  std::string out;
  out.reserve(format.size());
  size_t i = 0;
  while (i < format.size()) {
    if (format[i] == '{') {
      size_t close = format.find('}', i);
      if (close != std::string::npos) {
        std::string name = format.substr(i + 1, close - i - 1);
        auto it = values.find(name);
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += format[i++];
  }
  return out;
}

std::string join(const std::vector<std::string> &items, const char *sep) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0)
      out += sep;
    out += items[i];
  }
  return out;
}

std::string render_event_type_item(const PromptTemplates &templates,
                                   const std::string &type,
                                   const std::string &hypernym,
                                   const std::string &definition) {
  if (templates.event_type)
    return substitute(*templates.event_type, {{"type", type},
                                              {"hypernym", hypernym},
                                              {"definition", definition}});
  std::string text = hypernym.empty()
                         ? "Event type " + type + "."
                         : type + " is a subtype of " + hypernym + ".";
  if (!definition.empty())
    text += " " + definition;
  return text;
}

std::string render_trigger_item(const PromptTemplates &templates,
                                const TriggerItem &item) {
  const std::string &format =
      templates.trigger ? *templates.trigger : kDefaultTriggerTemplate;
  return substitute(format, {{"type", item.type},
                             {"triggers", join(item.triggers, ", ")}});
}

std::string render_argument_item(const PromptTemplates &templates,
                                 const std::string &type,
                                 const std::string &role) {
  const std::string &format =
      templates.argument ? *templates.argument : kDefaultArgumentTemplate;
  return substitute(format, {{"type", type}, {"role", role}});
}

std::string render_relation_item(const PromptTemplates &templates,
                                 const std::string &relation) {
  const std::string &format =
      templates.relation ? *templates.relation : kDefaultRelationTemplate;
  return substitute(format, {{"relation", relation}});
}

std::string render_structure_item(const PromptTemplates &templates,
                                  const std::string &head_type,
                                  const std::string &relation,
                                  const std::string &tail_type) {
  const std::string &format =
      templates.structure ? *templates.structure : kDefaultStructureTemplate;
  return substitute(format, {{"head_type", head_type},
                             {"relation", relation},
                             {"tail_type", tail_type}});
}

// Pointed nodes of one kind across the retrieved entries, ascending.
std::vector<std::string> pointed_types(const RetrievalResult &hits,
                                       const ReferenceStore &store,
                                       const SchemaGraph &g, NodeKind kind) {
  std::set<std::string> types;
  for (const auto &[id, score] : hits.hits) {
    if (id < 0 || static_cast<size_t>(id) >= store.entries.size())
      throw EntryNotFound("hit entry " + std::to_string(id) +
                          " is not in the store");
    for (const std::string &p : store.entries[static_cast<size_t>(id)].pointers) {
      const SchemaNode *node = g.find(p);
      if (node && node->kind == kind)
        types.insert(p);
    }
  }
  return {types.begin(), types.end()};
}

std::vector<std::string> adjacent_of_kind(const SchemaGraph &g,
                                          const std::string &id,
                                          const char *rel, NodeKind kind) {
  std::vector<std::string> out;
  for (const SchemaNode &n :
       neighbors(g, id, std::optional<std::string>(rel), Direction::both))
    if (n.kind == kind)
      out.push_back(n.id);
  return out;
}

std::vector<std::string> sample_without_replacement(std::vector<std::string> pool,
                                                    size_t n,
                                                    std::mt19937_64 &rng) {
  n = std::min(n, pool.size());
  for (size_t i = 0; i < n; ++i) {
    size_t j = i + static_cast<size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

std::vector<std::string> instance_texts(const RetrievalResult &hits,
                                        const ReferenceStore &store,
                                        bool with_labels) {
  std::vector<std::string> texts;
  for (const auto &[id, score] : hits.hits) {
    const StoreEntry &entry = store.entries[static_cast<size_t>(id)];
    std::string text = entry.text;
    if (with_labels && !entry.labels.empty())
      text += " (" + join(entry.labels, ", ") + ")";
    texts.push_back(std::move(text));
  }
  return texts;
}

std::vector<int64_t> hit_ids(const RetrievalResult &hits) {
  std::vector<int64_t> ids;
  for (const auto &[id, score] : hits.hits)
    ids.push_back(id);
  return ids;
}

void apply_input(PromptBundle &bundle, const std::string &x,
                 const std::string &sep) {
  if (bundle.prompt.empty())
    bundle.input = x;
  else if (x.empty())
    bundle.input = sep + " " + bundle.prompt;
  else
    bundle.input = x + " " + sep + " " + bundle.prompt;
  size_t x_tokens = whitespace_tokens(x).size();
  size_t total = whitespace_tokens(bundle.input).size();
  bundle.mask.assign(total, 0);
  for (size_t i = 0; i < x_tokens; ++i)
    bundle.mask[i] = 1;
}

// Drops the lowest-priority droppable piece: the last retrieved instance
// first, then triggers off the tail of the T component. Returns false when
// nothing is left to drop.
bool drop_one(PromptBundle &bundle) {
  for (PromptComponent &c : bundle.components) {
    if (c.name != "I")
      continue;
    if (!c.items.empty()) {
      c.items.pop_back();
      return true;
    }
  }
  for (PromptComponent &c : bundle.components) {
    if (c.name != "T")
      continue;
    if (c.items.empty())
      return false;
    size_t last = c.items.size() - 1;
    TriggerItem &item = bundle.trigger_items[last];
    item.triggers.pop_back();
    if (item.triggers.empty()) {
      c.items.pop_back();
      bundle.trigger_items.pop_back();
    } else {
      c.items[last] = render_trigger_item(bundle.templates, item);
    }
    return true;
  }
  return false;
}

} // namespace

PromptTemplates load_templates(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path);
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object())
    throw ParseError("template file must hold a JSON object");
  PromptTemplates t;
  for (const auto &[key, value] : obj.items()) {
    if (!value.is_string())
      throw ParseError("template '" + key + "' must be a string");
    if (key == "event_type")
      t.event_type = value.get<std::string>();
    else if (key == "trigger")
      t.trigger = value.get<std::string>();
    else if (key == "argument")
      t.argument = value.get<std::string>();
    else if (key == "relation")
      t.relation = value.get<std::string>();
    else if (key == "structure")
      t.structure = value.get<std::string>();
    else
      throw ParseError("unknown template component '" + key + "'");
  }
  return t;
}

void render_prompt(PromptBundle &bundle) {
  bundle.prompt.clear();
  bundle.component_spans.clear();
  std::vector<std::pair<const PromptComponent *, std::string>> pieces;
  for (const PromptComponent &c : bundle.components)
    if (!c.items.empty())
      pieces.emplace_back(&c, join(c.items, " "));
  for (size_t i = 0; i < pieces.size(); ++i) {
    size_t begin = bundle.prompt.size();
    bundle.prompt += pieces[i].second;
    if (i + 1 < pieces.size())
      bundle.prompt += " "; // separator belongs to the preceding span
    bundle.component_spans.push_back(
        PromptSpan{pieces[i].first->name, begin, bundle.prompt.size()});
  }
}

PromptBundle assemble_event_prompt(const RetrievalResult &hits,
                                   const ReferenceStore &store,
                                   const SchemaGraph &g, uint64_t seed,
                                   const PromptTemplates &templates,
                                   bool instance_labels) {
  PromptBundle bundle;
  bundle.templates = templates;
  bundle.components = {PromptComponent{"E", {}}, PromptComponent{"T", {}},
                       PromptComponent{"A", {}}, PromptComponent{"I", {}}};
  bundle.retrieved_ids = hit_ids(hits);
  if (hits.hits.empty()) {
    bundle.empty_warning = true;
    render_prompt(bundle);
    return bundle;
  }

  std::vector<std::string> types =
      pointed_types(hits, store, g, NodeKind::event_type);
  std::mt19937_64 rng(seed);

  PromptComponent &e_comp = bundle.components[0];
  PromptComponent &t_comp = bundle.components[1];
  PromptComponent &a_comp = bundle.components[2];
  PromptComponent &i_comp = bundle.components[3];

  for (const std::string &type : types) {
    // SubType is directional: the hypernym is what this type points at.
    std::vector<SchemaNode> up = neighbors(
        g, type, std::optional<std::string>(kSubTypeEdge), Direction::out);
    std::string hypernym = up.empty() ? "" : up.front().id;
    const SchemaNode *node = g.find(type);
    std::string definition =
        node && node->definition ? *node->definition : "";
    e_comp.items.push_back(
        render_event_type_item(templates, type, hypernym, definition));

    std::vector<std::string> triggers =
        adjacent_of_kind(g, type, kHasTriggerEdge, NodeKind::trigger_word);
    triggers = sample_without_replacement(std::move(triggers), 3, rng);
    if (!triggers.empty()) {
      TriggerItem item{type, std::move(triggers)};
      t_comp.items.push_back(render_trigger_item(templates, item));
      bundle.trigger_items.push_back(std::move(item));
    }

    for (const std::string &role :
         adjacent_of_kind(g, type, kHasRoleEdge, NodeKind::argument_role))
      a_comp.items.push_back(render_argument_item(templates, type, role));
  }

  i_comp.items = instance_texts(hits, store, instance_labels);
  render_prompt(bundle);
  return bundle;
}

PromptBundle assemble_relation_prompt(const RetrievalResult &hits,
                                      const ReferenceStore &store,
                                      const SchemaGraph &g,
                                      const PromptTemplates &templates,
                                      bool instance_labels) {
  PromptBundle bundle;
  bundle.templates = templates;
  bundle.components = {PromptComponent{"R", {}}, PromptComponent{"S", {}},
                       PromptComponent{"I", {}}};
  bundle.retrieved_ids = hit_ids(hits);
  if (hits.hits.empty()) {
    bundle.empty_warning = true;
    render_prompt(bundle);
    return bundle;
  }

  std::vector<std::string> relations =
      pointed_types(hits, store, g, NodeKind::relation_type);

  PromptComponent &r_comp = bundle.components[0];
  PromptComponent &s_comp = bundle.components[1];
  PromptComponent &i_comp = bundle.components[2];

  for (const std::string &rel : relations) {
    r_comp.items.push_back(render_relation_item(templates, rel));
    std::vector<std::string> heads =
        adjacent_of_kind(g, rel, kHasHeadTypeEdge, NodeKind::entity_type);
    std::vector<std::string> tails =
        adjacent_of_kind(g, rel, kHasTailTypeEdge, NodeKind::entity_type);
    for (const std::string &head : heads)
      for (const std::string &tail : tails)
        s_comp.items.push_back(
            render_structure_item(templates, head, rel, tail));
  }

  i_comp.items = instance_texts(hits, store, instance_labels);
  render_prompt(bundle);
  return bundle;
}

PromptBundle format_input(const std::string &x, const std::string &z,
                          const std::string &sep) {
  if (sep.empty())
    throw Error("format_input: separator must be non-empty");
  PromptBundle bundle;
  bundle.prompt = z;
  apply_input(bundle, x, sep);
  return bundle;
}

void format_input(PromptBundle &bundle, const std::string &x,
                  const std::string &sep, std::optional<size_t> budget) {
  if (sep.empty())
    throw Error("format_input: separator must be non-empty");
  render_prompt(bundle);
  apply_input(bundle, x, sep);
  if (!budget)
    return;
  while (whitespace_tokens(bundle.input).size() > *budget) {
    if (!drop_one(bundle))
      break; // nothing droppable left; x is never touched
    render_prompt(bundle);
    apply_input(bundle, x, sep);
  }
}

} // namespace rap
