#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "lcag/value.hpp"

namespace lcag {

struct NodeId {
  std::uint64_t value = 0;
  auto operator<=>(const NodeId&) const = default;
};

struct EdgeId {
  std::uint64_t value = 0;
  auto operator<=>(const EdgeId&) const = default;
};

/// Nodes order before edges, then by numeric id.
using EntityId = std::variant<NodeId, EdgeId>;

std::string to_string(NodeId id);
std::string to_string(EdgeId id);
std::string to_string(const EntityId& id);

enum class Direction { out, in, both };

struct Neighbor {
  EdgeId edge;
  NodeId other;
  bool operator==(const Neighbor&) const = default;
};

/// Property edits and label edits accepted by Graph::update.
struct SetProperty {
  std::string key;
  PropertyValue value;
};
struct RemoveProperty {
  std::string key;
};
struct AddLabel {
  std::string label;
};
struct RemoveLabel {
  std::string label;
};
using Change = std::variant<SetProperty, RemoveProperty, AddLabel, RemoveLabel>;

enum class UpdateOutcome { applied, not_present };

class Graph;

/// Read-only view of a live node. Invalidated by any mutation of the graph.
class NodeView {
 public:
  NodeId id() const noexcept { return id_; }
  /// Labels in lexicographic order.
  std::vector<std::string_view> labels() const;
  bool has_label(std::string_view label) const;
  const PropertyMap& props() const;
  const PropertyValue* property(std::string_view key) const;

 private:
  friend class Graph;
  NodeView(const Graph* graph, NodeId id) : graph_(graph), id_(id) {}
  const Graph* graph_;
  NodeId id_;
};

/// Read-only view of a live edge. Invalidated by any mutation of the graph.
class EdgeView {
 public:
  EdgeId id() const noexcept { return id_; }
  std::string_view rel_type() const;
  NodeId src() const;
  NodeId dst() const;
  const PropertyMap& props() const;
  const PropertyValue* property(std::string_view key) const;

 private:
  friend class Graph;
  EdgeView(const Graph* graph, EdgeId id) : graph_(graph), id_(id) {}
  const Graph* graph_;
  EdgeId id_;
};

using EntityView = std::variant<NodeView, EdgeView>;

/// In-memory labeled property graph.
///
/// Nodes and edges live in id-indexed slot vectors; ids are assigned
/// monotonically and never handed out twice. Each node slot keeps its own
/// outgoing and incoming adjacency lists (edge id, other endpoint, interned
/// relationship type), so neighbor expansion touches only the node's slot and
/// costs O(degree). A label index maps every label to the ordered set of
/// nodes carrying it.
///
/// Mutations need exclusive access; const member functions never modify
/// state, so a graph that is not being mutated can be read from any number
/// of threads.
class Graph {
 public:
  Graph() = default;

  // Mutation ----------------------------------------------------------------

  NodeId create_node(std::span<const std::string> labels = {}, PropertyMap props = {});
  NodeId create_node(std::initializer_list<std::string> labels, PropertyMap props = {});
  EdgeId create_edge(std::string_view rel_type, NodeId src, NodeId dst, PropertyMap props = {});

  /// Recreates an entity under a caller-chosen id (decoders and translators).
  /// The id must not be live; future ids continue above it.
  void insert_node(NodeId id, std::span<const std::string> labels, PropertyMap props);
  void insert_edge(EdgeId id, std::string_view rel_type, NodeId src, NodeId dst, PropertyMap props);

  UpdateOutcome update(const EntityId& target, const Change& change);

  UpdateOutcome set_property(const EntityId& target, std::string key, PropertyValue value) {
    return update(target, SetProperty{std::move(key), std::move(value)});
  }
  UpdateOutcome remove_property(const EntityId& target, std::string key) {
    return update(target, RemoveProperty{std::move(key)});
  }
  UpdateOutcome add_label(NodeId node, std::string label) { return update(node, AddLabel{std::move(label)}); }
  UpdateOutcome remove_label(NodeId node, std::string label) {
    return update(node, RemoveLabel{std::move(label)});
  }

  /// Returns the number of entities removed. Deleting a node that still has
  /// incident edges requires `detach`; otherwise IntegrityError and nothing
  /// changes.
  std::size_t remove(const EntityId& target, bool detach = false);

  // Reads -------------------------------------------------------------------

  std::optional<NodeView> node(NodeId id) const;
  std::optional<EdgeView> edge(EdgeId id) const;
  std::optional<EntityView> get(const EntityId& id) const;

  bool contains(NodeId id) const noexcept;
  bool contains(EdgeId id) const noexcept;

  /// Ascending ids of the nodes carrying `label`; empty for unknown labels.
  std::vector<NodeId> nodes_with_label(std::string_view label) const;
  std::size_t label_cardinality(std::string_view label) const;
  /// All labels in use, with their node counts, in lexicographic order.
  std::vector<std::pair<std::string, std::size_t>> label_counts() const;

  /// Incident edges in adjacency order: outgoing first, then incoming. With
  /// Direction::both a self-loop is reported once. Throws NotFoundError.
  std::vector<Neighbor> neighbors(NodeId node, Direction direction,
                                  std::optional<std::string_view> rel_type = std::nullopt) const;

  /// Calls `fn(edge, other)` for each incident edge without allocating.
  template <typename Fn>
  void for_each_neighbor(NodeId node, Direction direction, std::optional<std::string_view> rel_type,
                         Fn&& fn) const;

  std::size_t degree(NodeId node, Direction direction) const;

  std::size_t node_count() const noexcept { return live_nodes_; }
  std::size_t edge_count() const noexcept { return live_edges_; }

  std::vector<NodeId> node_ids() const;
  std::vector<EdgeId> edge_ids() const;

  /// Next ids that create_node / create_edge would hand out.
  std::uint64_t next_node_id() const noexcept { return next_node_; }
  std::uint64_t next_edge_id() const noexcept { return next_edge_; }
  /// Raises the id counters; never lowers them.
  void reserve_ids(std::uint64_t next_node, std::uint64_t next_edge);

  /// Content equality: same live ids with the same labels, types, endpoints
  /// and properties. Symbol interning and adjacency order are ignored.
  friend bool operator==(const Graph& a, const Graph& b);

  // Transactions ------------------------------------------------------------

  /// Records an undo journal for every mutation until committed; destroying
  /// an uncommitted transaction restores the graph to its state at begin.
  class Transaction {
   public:
    explicit Transaction(Graph& graph);
    Transaction(const Transaction&) = delete;
    Transaction& operator=(const Transaction&) = delete;
    ~Transaction();

    void commit();
    void rollback();

   private:
    Graph* graph_;
    bool open_ = true;
  };

  Transaction transaction() { return Transaction(*this); }

 private:
  friend class NodeView;
  friend class EdgeView;

  using Symbol = std::uint32_t;
  static constexpr Symbol kNoSymbol = UINT32_MAX;

  struct AdjEntry {
    EdgeId edge;
    NodeId other;
    Symbol rel;
  };

  // Outgoing entries occupy adj[0, out_degree), incoming ones the rest, so a
  // neighbor scan reads one contiguous array.
  struct NodeSlot {
    bool live = false;
    std::uint32_t out_degree = 0;
    std::vector<AdjEntry> adj;
    std::vector<Symbol> labels;  // sorted by symbol id
    PropertyMap props;
  };

  struct EdgeSlot {
    bool live = false;
    Symbol rel = kNoSymbol;
    NodeId src;
    NodeId dst;
    PropertyMap props;
  };

  struct UndoNodeCreated {
    NodeId id;
  };
  struct UndoEdgeCreated {
    EdgeId id;
  };
  struct UndoProperty {
    EntityId target;
    std::string key;
    std::optional<PropertyValue> previous;
  };
  struct UndoLabel {
    NodeId node;
    Symbol label;
    bool was_added;
  };
  struct UndoNodeRemoved {
    NodeId id;
    std::vector<Symbol> labels;
    PropertyMap props;
  };
  struct UndoEdgeRemoved {
    EdgeId id;
    Symbol rel;
    NodeId src;
    NodeId dst;
    PropertyMap props;
  };
  using UndoRecord =
      std::variant<UndoNodeCreated, UndoEdgeCreated, UndoProperty, UndoLabel, UndoNodeRemoved, UndoEdgeRemoved>;

  [[noreturn]] static void throw_unknown_node(NodeId id);
  [[noreturn]] static void throw_unknown_edge(EdgeId id);

  Symbol intern(std::string_view name);
  Symbol find_symbol(std::string_view name) const;
  const std::string& symbol_name(Symbol s) const { return symbols_[s]; }

  const NodeSlot* node_slot(NodeId id) const noexcept;
  NodeSlot* node_slot(NodeId id) noexcept;
  const EdgeSlot* edge_slot(EdgeId id) const noexcept;
  EdgeSlot* edge_slot(EdgeId id) noexcept;
  NodeSlot& require_node(NodeId id);
  EdgeSlot& require_edge(EdgeId id);
  PropertyMap& props_of(const EntityId& target);

  void place_node(NodeId id, std::vector<Symbol> labels, PropertyMap props);
  void place_edge(EdgeId id, Symbol rel, NodeId src, NodeId dst, PropertyMap props);
  void unplace_node(NodeId id);
  void unplace_edge(EdgeId id);
  std::vector<Symbol> intern_labels(std::span<const std::string> labels);
  void journal(UndoRecord record);
  void undo_to(std::size_t mark);

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Symbol> symbol_ids_;

  std::vector<NodeSlot> nodes_;
  std::vector<EdgeSlot> edges_;
  std::unordered_map<Symbol, std::set<NodeId>> label_index_;
  std::size_t live_nodes_ = 0;
  std::size_t live_edges_ = 0;
  std::uint64_t next_node_ = 0;
  std::uint64_t next_edge_ = 0;

  bool journaling_ = false;
  std::vector<UndoRecord> undo_;
  std::uint64_t tx_next_node_ = 0;
  std::uint64_t tx_next_edge_ = 0;
};

template <typename Fn>
void Graph::for_each_neighbor(NodeId node, Direction direction, std::optional<std::string_view> rel_type,
                              Fn&& fn) const {
  const NodeSlot* slot = node_slot(node);
  if (slot == nullptr) throw_unknown_node(node);
  Symbol wanted = kNoSymbol;
  if (rel_type) {
    wanted = find_symbol(*rel_type);
    if (wanted == kNoSymbol) return;
  }
  const std::span<const AdjEntry> adj(slot->adj.data(), slot->adj.size());
  if (direction != Direction::in) {
    for (const AdjEntry& e : adj.first(slot->out_degree)) {
      if (wanted == kNoSymbol || e.rel == wanted) fn(e.edge, e.other);
    }
  }
  if (direction != Direction::out) {
    for (const AdjEntry& e : adj.subspan(slot->out_degree)) {
      if (direction == Direction::both && e.other == node) continue;
      if (wanted == kNoSymbol || e.rel == wanted) fn(e.edge, e.other);
    }
  }
}

}  // namespace lcag
