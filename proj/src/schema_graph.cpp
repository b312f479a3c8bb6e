#include "rap/schema_graph.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rap/errors.hpp"
#include "rap/io_util.hpp"

namespace rap {

const char *node_kind_name(NodeKind kind) {
  switch (kind) {
  case NodeKind::event_type:
    return "event_type";
  case NodeKind::trigger_word:
    return "trigger_word";
  case NodeKind::argument_role:
    return "argument_role";
  case NodeKind::relation_type:
    return "relation_type";
  case NodeKind::entity_type:
    return "entity_type";
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(const std::string &name) {
  if (name == "event_type")
    return NodeKind::event_type;
  if (name == "trigger_word")
    return NodeKind::trigger_word;
  if (name == "argument_role")
    return NodeKind::argument_role;
  if (name == "relation_type")
    return NodeKind::relation_type;
  if (name == "entity_type")
    return NodeKind::entity_type;
  return std::nullopt;
}

void SchemaGraph::add_node(const std::string &id, NodeKind kind,
                           std::optional<std::string> definition) {
  if (id.empty())
    throw ValidationError("node id must be non-empty");
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    nodes_.emplace(id, SchemaNode{id, kind, std::move(definition)});
    return;
  }
  if (it->second.kind != kind)
    throw ValidationError("duplicate node id '" + id +
                          "' with conflicting kind: " +
                          node_kind_name(it->second.kind) + " vs " +
                          node_kind_name(kind));
  if (!it->second.definition && definition)
    it->second.definition = std::move(definition);
}

void SchemaGraph::add_edge(const std::string &head, const std::string &rel,
                           const std::string &tail) {
  if (head.empty() || rel.empty() || tail.empty())
    throw ValidationError("edge fields must be non-empty");
  edges_.insert(SchemaEdge{head, rel, tail});
}

const SchemaNode *SchemaGraph::find(const std::string &id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

namespace {

void parse_schema_line(const std::string &line, size_t lineno, SchemaGraph &g) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
  }
  if (!obj.is_object())
    throw ParseError("expected a JSON object", lineno);

  if (obj.contains("node")) {
    for (const auto &[key, _] : obj.items())
      if (key != "node" && key != "kind" && key != "definition")
        throw ParseError("unknown key '" + key + "' in node line", lineno);
    if (!obj["node"].is_string())
      throw ParseError("'node' must be a string", lineno);
    if (!obj.contains("kind") || !obj["kind"].is_string())
      throw ParseError("node line requires a string 'kind'", lineno);
    auto kind = parse_node_kind(obj["kind"].get<std::string>());
    if (!kind)
      throw ParseError("unknown kind '" + obj["kind"].get<std::string>() + "'",
                       lineno);
    std::optional<std::string> definition;
    if (obj.contains("definition") && !obj["definition"].is_null()) {
      if (!obj["definition"].is_string())
        throw ParseError("'definition' must be a string or null", lineno);
      definition = obj["definition"].get<std::string>();
    }
    try {
      g.add_node(obj["node"].get<std::string>(), *kind, std::move(definition));
    } catch (const ValidationError &e) {
      throw ValidationError("line " + std::to_string(lineno) + ": " +
                            e.what());
    }
    return;
  }

  if (obj.contains("triple")) {
    for (const auto &[key, _] : obj.items())
      if (key != "triple")
        throw ParseError("unknown key '" + key + "' in triple line", lineno);
    const auto &t = obj["triple"];
    if (!t.is_array() || t.size() != 3 || !t[0].is_string() ||
        !t[1].is_string() || !t[2].is_string())
      throw ParseError("'triple' must be an array of 3 strings", lineno);
    try {
      g.add_edge(t[0].get<std::string>(), t[1].get<std::string>(),
                 t[2].get<std::string>());
    } catch (const ValidationError &e) {
      throw ValidationError("line " + std::to_string(lineno) + ": " +
                            e.what());
    }
    return;
  }

  throw ParseError("line is neither a node nor a triple", lineno);
}

} // namespace

SchemaGraph parse_schema(const std::vector<std::string> &lines) {
  SchemaGraph g;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty())
      continue;
    parse_schema_line(lines[i], i + 1, g);
  }
  std::vector<std::string> report = validate(g);
  if (!report.empty()) {
    std::string msg = "schema invalid:";
    for (const std::string &entry : report)
      msg += "\n  " + entry;
    throw ValidationError(msg);
  }
  return g;
}

SchemaGraph load_schema(const std::string &path) {
  return parse_schema(read_lines(path));
}

std::vector<SchemaNode> neighbors(const SchemaGraph &g, const std::string &id,
                                  const std::optional<std::string> &rel,
                                  Direction direction) {
  if (!g.contains(id))
    throw NodeNotFound("node '" + id + "' not in graph");
  std::set<std::string> ids;
  for (const SchemaEdge &e : g.edges()) {
    if (rel && e.rel != *rel)
      continue;
    if ((direction == Direction::out || direction == Direction::both) &&
        e.head == id)
      ids.insert(e.tail);
    if ((direction == Direction::in || direction == Direction::both) &&
        e.tail == id)
      ids.insert(e.head);
  }
  std::vector<SchemaNode> out;
  for (const std::string &nid : ids)
    if (const SchemaNode *n = g.find(nid))
      out.push_back(*n);
  return out;
}

SchemaGraph resolve_pointer(const SchemaGraph &g,
                            const std::vector<std::string> &pointer) {
  std::vector<std::string> missing;
  for (const std::string &id : pointer)
    if (!g.contains(id))
      missing.push_back(id);
  if (!missing.empty()) {
    std::string msg = "unresolved pointer ids:";
    for (const std::string &id : missing)
      msg += " '" + id + "'";
    throw NodeNotFound(msg);
  }

  std::set<std::string> keep(pointer.begin(), pointer.end());
  for (const std::string &id : pointer)
    for (const SchemaEdge &e : g.edges()) {
      if (e.head == id)
        keep.insert(e.tail);
      if (e.tail == id)
        keep.insert(e.head);
    }

  SchemaGraph sub;
  for (const std::string &id : keep)
    if (const SchemaNode *n = g.find(id))
      sub.add_node(n->id, n->kind, n->definition);
  for (const SchemaEdge &e : g.edges())
    if (keep.count(e.head) && keep.count(e.tail))
      sub.add_edge(e.head, e.rel, e.tail);
  return sub;
}

namespace {

// DFS over the SubType edge subgraph; reports one cycle per back edge.
void report_subtype_cycles(const SchemaGraph &g,
                           std::vector<std::string> &report) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const SchemaEdge &e : g.edges())
    if (e.rel == kSubTypeEdge && g.contains(e.head) && g.contains(e.tail))
      succ[e.head].push_back(e.tail);

  enum class Color { white, gray, black };
  std::map<std::string, Color> color;
  for (const auto &[id, _] : succ)
    color.emplace(id, Color::white);

  std::vector<std::string> path;
  auto dfs = [&](auto &&self, const std::string &u) -> void {
    color[u] = Color::gray;
    path.push_back(u);
    for (const std::string &v : succ[u]) {
      auto it = color.find(v);
      if (it == color.end() || it->second == Color::black)
        continue;
      if (it->second == Color::gray) {
        auto start = std::find(path.begin(), path.end(), v);
        std::string cycle = "SubType cycle: ";
        for (auto p = start; p != path.end(); ++p)
          cycle += *p + " -> ";
        cycle += v;
        report.push_back(cycle);
        continue;
      }
      self(self, v);
    }
    path.pop_back();
    color[u] = Color::black;
  };
  for (const auto &[id, c] : color)
    if (c == Color::white)
      dfs(dfs, id);
}

} // namespace

std::vector<std::string> validate(const SchemaGraph &g) {
  std::vector<std::string> report;
  for (const SchemaEdge &e : g.edges()) {
    if (!g.contains(e.head))
      report.push_back("dangling edge: head '" + e.head + "' of (" + e.head +
                       ", " + e.rel + ", " + e.tail + ") is not a node");
    if (!g.contains(e.tail))
      report.push_back("dangling edge: tail '" + e.tail + "' of (" + e.head +
                       ", " + e.rel + ", " + e.tail + ") is not a node");
  }

  report_subtype_cycles(g, report);

  for (const auto &[id, node] : g.nodes()) {
    if (node.kind != NodeKind::trigger_word)
      continue;
    bool linked = false;
    for (const SchemaEdge &e : g.edges()) {
      const SchemaNode *other = nullptr;
      if (e.head == id)
        other = g.find(e.tail);
      else if (e.tail == id)
        other = g.find(e.head);
      if (other && other->kind == NodeKind::event_type) {
        linked = true;
        break;
      }
    }
    if (!linked)
      report.push_back("trigger_word '" + id +
                       "' has no edge to an event_type node");
  }
  return report;
}

std::string schema_hash(const SchemaGraph &g) {
  // FNV-1a 64-bit over the canonical (sorted) node/edge listing.
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string &s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  for (const auto &[id, node] : g.nodes()) {
    mix(id);
    mix(node_kind_name(node.kind));
    mix(node.definition ? *node.definition : std::string("\x01"));
  }
  for (const SchemaEdge &e : g.edges()) {
    mix(e.head);
    mix(e.rel);
    mix(e.tail);
  }
  std::ostringstream out;
  out << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4)
    out << ((h >> shift) & 0xf);
  return out.str();
}

} // namespace rap
