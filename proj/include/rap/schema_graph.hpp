#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rap {

enum class NodeKind {
  event_type,
  trigger_word,
  argument_role,
  relation_type,
  entity_type,
};

const char *node_kind_name(NodeKind kind);
std::optional<NodeKind> parse_node_kind(const std::string &name);

struct SchemaNode {
  std::string id;
  NodeKind kind;
  std::optional<std::string> definition;

  bool operator==(const SchemaNode &) const = default;
};

struct SchemaEdge {
  std::string head;
  std::string rel;
  std::string tail;

  auto operator<=>(const SchemaEdge &) const = default;
};

enum class Direction { out, in, both };

// Edge label whose subgraph must stay acyclic (type hypernym hierarchy).
inline constexpr const char *kSubTypeEdge = "SubType";

// Edge label vocabulary connecting types to their satellites.
inline constexpr const char *kHasTriggerEdge = "has_trigger";
inline constexpr const char *kHasRoleEdge = "has_role";
inline constexpr const char *kHasHeadTypeEdge = "has_head_type";
inline constexpr const char *kHasTailTypeEdge = "has_tail_type";

// Symbolic graph of the task label vocabulary: event types, trigger words,
// argument roles, relation types, entity types, and their edges. Node ids
// are case-sensitive exact strings. Immutable after load by convention;
// safe to share read-only across threads.
class SchemaGraph {
public:
  // Duplicate id with the same kind is deduplicated (first non-null
  // definition wins); a duplicate id with a different kind throws
  // ValidationError. Empty ids throw ValidationError.
  void add_node(const std::string &id, NodeKind kind,
                std::optional<std::string> definition = std::nullopt);

  // Set semantics: re-adding an identical triple is a no-op.
  void add_edge(const std::string &head, const std::string &rel,
                const std::string &tail);

  const SchemaNode *find(const std::string &id) const;
  bool contains(const std::string &id) const { return find(id) != nullptr; }

  const std::map<std::string, SchemaNode> &nodes() const { return nodes_; }
  const std::set<SchemaEdge> &edges() const { return edges_; }
  size_t node_count() const { return nodes_.size(); }
  size_t edge_count() const { return edges_.size(); }

  bool operator==(const SchemaGraph &) const = default;

private:
  std::map<std::string, SchemaNode> nodes_;
  std::set<SchemaEdge> edges_;
};

// Parses schema lines (one JSON object per line; empty lines skipped):
//   {"node": "<id>", "kind": "<kind>", "definition": "<text>|null}
//   {"triple": ["<head>", "<rel>", "<tail>"]}
// Unknown keys are rejected. The returned graph is validated; any
// invariant violation raises ValidationError.
SchemaGraph parse_schema(const std::vector<std::string> &lines);

// parse_schema over the contents of a file.
SchemaGraph load_schema(const std::string &path);

// Nodes adjacent to id, optionally restricted to one edge label and one
// direction. Deduplicated, ascending node id. Throws NodeNotFound.
std::vector<SchemaNode> neighbors(const SchemaGraph &g, const std::string &id,
                                  const std::optional<std::string> &rel,
                                  Direction direction);

// Induced subgraph over the pointed nodes plus their 1-hop neighbors:
// keeps every edge of g whose endpoints both fall in that node set.
// Throws NodeNotFound listing every unresolved id.
SchemaGraph resolve_pointer(const SchemaGraph &g,
                            const std::vector<std::string> &pointer);

// One entry per invariant violation; empty iff the graph is valid.
std::vector<std::string> validate(const SchemaGraph &g);

// Deterministic content hash (hex) over the canonical node/edge listing.
std::string schema_hash(const SchemaGraph &g);

} // namespace rap
