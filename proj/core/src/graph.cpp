#include "lcag/graph.hpp"

#include <algorithm>

#include "lcag/error.hpp"

namespace lcag {

namespace {

// Upper bound for caller-chosen ids; keeps a hostile dump from forcing a
// multi-gigabyte slot allocation.
constexpr std::uint64_t kMaxExplicitId = std::uint64_t{1} << 28;

template <typename List>
bool erase_adj(List& list, std::size_t first, std::size_t last, EdgeId edge) {
  auto begin = list.begin() + static_cast<std::ptrdiff_t>(first);
  auto end = list.begin() + static_cast<std::ptrdiff_t>(last);
  auto it = std::find_if(begin, end, [&](const auto& e) { return e.edge == edge; });
  if (it == end) return false;
  list.erase(it);
  return true;
}

}  // namespace

std::string to_string(NodeId id) { return "node:" + std::to_string(id.value); }
std::string to_string(EdgeId id) { return "edge:" + std::to_string(id.value); }
std::string to_string(const EntityId& id) {
  return std::visit([](auto v) { return to_string(v); }, id);
}

// Views --------------------------------------------------------------------

std::vector<std::string_view> NodeView::labels() const {
  const auto* slot = graph_->node_slot(id_);
  std::vector<std::string_view> out;
  out.reserve(slot->labels.size());
  for (auto s : slot->labels) out.emplace_back(graph_->symbol_name(s));
  std::sort(out.begin(), out.end());
  return out;
}

bool NodeView::has_label(std::string_view label) const {
  const auto sym = graph_->find_symbol(label);
  if (sym == Graph::kNoSymbol) return false;
  const auto& labels = graph_->node_slot(id_)->labels;
  return std::binary_search(labels.begin(), labels.end(), sym);
}

const PropertyMap& NodeView::props() const { return graph_->node_slot(id_)->props; }

const PropertyValue* NodeView::property(std::string_view key) const {
  const auto& props = this->props();
  auto it = props.find(key);
  return it == props.end() ? nullptr : &it->second;
}

std::string_view EdgeView::rel_type() const { return graph_->symbol_name(graph_->edge_slot(id_)->rel); }
NodeId EdgeView::src() const { return graph_->edge_slot(id_)->src; }
NodeId EdgeView::dst() const { return graph_->edge_slot(id_)->dst; }
const PropertyMap& EdgeView::props() const { return graph_->edge_slot(id_)->props; }

const PropertyValue* EdgeView::property(std::string_view key) const {
  const auto& props = this->props();
  auto it = props.find(key);
  return it == props.end() ? nullptr : &it->second;
}

// Internals ----------------------------------------------------------------

void Graph::throw_unknown_node(NodeId id) { throw NotFoundError("unknown node " + to_string(id)); }
void Graph::throw_unknown_edge(EdgeId id) { throw NotFoundError("unknown edge " + to_string(id)); }

Graph::Symbol Graph::intern(std::string_view name) {
  auto it = symbol_ids_.find(std::string(name));
  if (it != symbol_ids_.end()) return it->second;
  const auto sym = static_cast<Symbol>(symbols_.size());
  symbols_.emplace_back(name);
  symbol_ids_.emplace(std::string(name), sym);
  return sym;
}

Graph::Symbol Graph::find_symbol(std::string_view name) const {
  auto it = symbol_ids_.find(std::string(name));
  return it == symbol_ids_.end() ? kNoSymbol : it->second;
}

const Graph::NodeSlot* Graph::node_slot(NodeId id) const noexcept {
  if (id.value >= nodes_.size() || !nodes_[id.value].live) return nullptr;
  return &nodes_[id.value];
}

Graph::NodeSlot* Graph::node_slot(NodeId id) noexcept {
  if (id.value >= nodes_.size() || !nodes_[id.value].live) return nullptr;
  return &nodes_[id.value];
}

const Graph::EdgeSlot* Graph::edge_slot(EdgeId id) const noexcept {
  if (id.value >= edges_.size() || !edges_[id.value].live) return nullptr;
  return &edges_[id.value];
}

Graph::EdgeSlot* Graph::edge_slot(EdgeId id) noexcept {
  if (id.value >= edges_.size() || !edges_[id.value].live) return nullptr;
  return &edges_[id.value];
}

Graph::NodeSlot& Graph::require_node(NodeId id) {
  auto* slot = node_slot(id);
  if (slot == nullptr) throw_unknown_node(id);
  return *slot;
}

Graph::EdgeSlot& Graph::require_edge(EdgeId id) {
  auto* slot = edge_slot(id);
  if (slot == nullptr) throw_unknown_edge(id);
  return *slot;
}

PropertyMap& Graph::props_of(const EntityId& target) {
  if (const auto* n = std::get_if<NodeId>(&target)) return require_node(*n).props;
  return require_edge(std::get<EdgeId>(target)).props;
}

std::vector<Graph::Symbol> Graph::intern_labels(std::span<const std::string> labels) {
  std::vector<Symbol> syms;
  syms.reserve(labels.size());
  for (const auto& label : labels) {
    if (label.empty()) throw ValueError("labels must be non-empty");
    syms.push_back(intern(label));
  }
  std::sort(syms.begin(), syms.end());
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  return syms;
}

void Graph::place_node(NodeId id, std::vector<Symbol> labels, PropertyMap props) {
  if (id.value >= nodes_.size()) nodes_.resize(id.value + 1);
  NodeSlot& slot = nodes_[id.value];
  slot.live = true;
  slot.labels = std::move(labels);
  slot.props = std::move(props);
  slot.adj.clear();
  slot.out_degree = 0;
  for (auto s : slot.labels) label_index_[s].insert(id);
  ++live_nodes_;
  next_node_ = std::max(next_node_, id.value + 1);
}

void Graph::place_edge(EdgeId id, Symbol rel, NodeId src, NodeId dst, PropertyMap props) {
  if (id.value >= edges_.size()) edges_.resize(id.value + 1);
  EdgeSlot& slot = edges_[id.value];
  slot.live = true;
  slot.rel = rel;
  slot.src = src;
  slot.dst = dst;
  slot.props = std::move(props);
  NodeSlot& from = nodes_[src.value];
  from.adj.insert(from.adj.begin() + from.out_degree, AdjEntry{id, dst, rel});
  ++from.out_degree;
  nodes_[dst.value].adj.push_back(AdjEntry{id, src, rel});
  ++live_edges_;
  next_edge_ = std::max(next_edge_, id.value + 1);
}

void Graph::unplace_node(NodeId id) {
  NodeSlot& slot = nodes_[id.value];
  for (auto s : slot.labels) {
    auto it = label_index_.find(s);
    it->second.erase(id);
    if (it->second.empty()) label_index_.erase(it);
  }
  slot = NodeSlot{};
  --live_nodes_;
}

void Graph::unplace_edge(EdgeId id) {
  EdgeSlot& slot = edges_[id.value];
  NodeSlot& from = nodes_[slot.src.value];
  if (erase_adj(from.adj, 0, from.out_degree, id)) --from.out_degree;
  NodeSlot& to = nodes_[slot.dst.value];
  erase_adj(to.adj, to.out_degree, to.adj.size(), id);
  slot = EdgeSlot{};
  --live_edges_;
}

void Graph::journal(UndoRecord record) {
  if (journaling_) undo_.push_back(std::move(record));
}

// Mutation -----------------------------------------------------------------

NodeId Graph::create_node(std::span<const std::string> labels, PropertyMap props) {
  validate_properties(props);
  auto syms = intern_labels(labels);
  const NodeId id{next_node_};
  place_node(id, std::move(syms), std::move(props));
  journal(UndoNodeCreated{id});
  return id;
}

NodeId Graph::create_node(std::initializer_list<std::string> labels, PropertyMap props) {
  return create_node(std::span<const std::string>(labels.begin(), labels.size()), std::move(props));
}

EdgeId Graph::create_edge(std::string_view rel_type, NodeId src, NodeId dst, PropertyMap props) {
  if (rel_type.empty()) throw ValueError("relationship type must be non-empty");
  if (!contains(src)) throw IntegrityError("edge source " + to_string(src) + " does not exist");
  if (!contains(dst)) throw IntegrityError("edge destination " + to_string(dst) + " does not exist");
  validate_properties(props);
  const EdgeId id{next_edge_};
  place_edge(id, intern(rel_type), src, dst, std::move(props));
  journal(UndoEdgeCreated{id});
  return id;
}

void Graph::insert_node(NodeId id, std::span<const std::string> labels, PropertyMap props) {
  if (id.value >= kMaxExplicitId) throw IntegrityError(to_string(id) + " exceeds the supported id range");
  if (contains(id)) throw IntegrityError("duplicate " + to_string(id));
  validate_properties(props);
  auto syms = intern_labels(labels);
  place_node(id, std::move(syms), std::move(props));
  journal(UndoNodeCreated{id});
}

void Graph::insert_edge(EdgeId id, std::string_view rel_type, NodeId src, NodeId dst, PropertyMap props) {
  if (id.value >= kMaxExplicitId) throw IntegrityError(to_string(id) + " exceeds the supported id range");
  if (contains(id)) throw IntegrityError("duplicate " + to_string(id));
  if (rel_type.empty()) throw ValueError("relationship type must be non-empty");
  if (!contains(src)) throw IntegrityError(to_string(id) + " source " + to_string(src) + " does not exist");
  if (!contains(dst)) throw IntegrityError(to_string(id) + " destination " + to_string(dst) + " does not exist");
  validate_properties(props);
  place_edge(id, intern(rel_type), src, dst, std::move(props));
  journal(UndoEdgeCreated{id});
}

UpdateOutcome Graph::update(const EntityId& target, const Change& change) {
  if (const auto* set = std::get_if<SetProperty>(&change)) {
    if (set->key.empty()) throw ValueError("property keys must be non-empty");
    validate_value(set->value);
    PropertyMap& props = props_of(target);
    auto it = props.find(set->key);
    if (it == props.end()) {
      journal(UndoProperty{target, set->key, std::nullopt});
      props.emplace(set->key, set->value);
    } else {
      journal(UndoProperty{target, set->key, it->second});
      it->second = set->value;
    }
    return UpdateOutcome::applied;
  }
  if (const auto* rm = std::get_if<RemoveProperty>(&change)) {
    PropertyMap& props = props_of(target);
    auto it = props.find(rm->key);
    if (it == props.end()) return UpdateOutcome::not_present;
    journal(UndoProperty{target, rm->key, std::move(it->second)});
    props.erase(it);
    return UpdateOutcome::applied;
  }

  const auto* node_id = std::get_if<NodeId>(&target);
  if (node_id == nullptr) {
    require_edge(std::get<EdgeId>(target));
    throw IntegrityError("labels apply only to nodes; edges carry a single relationship type");
  }
  NodeSlot& slot = require_node(*node_id);
  if (const auto* add = std::get_if<AddLabel>(&change)) {
    if (add->label.empty()) throw ValueError("labels must be non-empty");
    const Symbol sym = intern(add->label);
    auto pos = std::lower_bound(slot.labels.begin(), slot.labels.end(), sym);
    if (pos != slot.labels.end() && *pos == sym) return UpdateOutcome::not_present;
    slot.labels.insert(pos, sym);
    label_index_[sym].insert(*node_id);
    journal(UndoLabel{*node_id, sym, true});
    return UpdateOutcome::applied;
  }
  const auto& label = std::get<RemoveLabel>(change).label;
  const Symbol sym = find_symbol(label);
  auto pos = std::lower_bound(slot.labels.begin(), slot.labels.end(), sym);
  if (sym == kNoSymbol || pos == slot.labels.end() || *pos != sym) return UpdateOutcome::not_present;
  slot.labels.erase(pos);
  auto idx = label_index_.find(sym);
  idx->second.erase(*node_id);
  if (idx->second.empty()) label_index_.erase(idx);
  journal(UndoLabel{*node_id, sym, false});
  return UpdateOutcome::applied;
}

std::size_t Graph::remove(const EntityId& target, bool detach) {
  if (const auto* edge_id = std::get_if<EdgeId>(&target)) {
    EdgeSlot& slot = require_edge(*edge_id);
    journal(UndoEdgeRemoved{*edge_id, slot.rel, slot.src, slot.dst, slot.props});
    unplace_edge(*edge_id);
    return 1;
  }
  const NodeId node_id = std::get<NodeId>(target);
  NodeSlot& slot = require_node(node_id);
  const std::size_t incident = slot.adj.size();
  if (incident > 0 && !detach) {
    throw IntegrityError(to_string(node_id) + " has " + std::to_string(incident) +
                         " incident edge entries; delete with detach to remove them");
  }
  std::vector<EdgeId> doomed;
  doomed.reserve(incident);
  for (const auto& e : slot.adj) doomed.push_back(e.edge);
  std::sort(doomed.begin(), doomed.end());
  doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());

  std::size_t removed = 0;
  for (EdgeId e : doomed) removed += remove(e);
  NodeSlot& live = nodes_[node_id.value];
  journal(UndoNodeRemoved{node_id, live.labels, live.props});
  unplace_node(node_id);
  return removed + 1;
}

void Graph::reserve_ids(std::uint64_t next_node, std::uint64_t next_edge) {
  next_node_ = std::max(next_node_, next_node);
  next_edge_ = std::max(next_edge_, next_edge);
}

// Reads --------------------------------------------------------------------

std::optional<NodeView> Graph::node(NodeId id) const {
  if (!contains(id)) return std::nullopt;
  return NodeView(this, id);
}

std::optional<EdgeView> Graph::edge(EdgeId id) const {
  if (!contains(id)) return std::nullopt;
  return EdgeView(this, id);
}

std::optional<EntityView> Graph::get(const EntityId& id) const {
  if (const auto* n = std::get_if<NodeId>(&id)) {
    if (auto v = node(*n)) return EntityView{*v};
    return std::nullopt;
  }
  if (auto v = edge(std::get<EdgeId>(id))) return EntityView{*v};
  return std::nullopt;
}

bool Graph::contains(NodeId id) const noexcept { return node_slot(id) != nullptr; }
bool Graph::contains(EdgeId id) const noexcept { return edge_slot(id) != nullptr; }

std::vector<NodeId> Graph::nodes_with_label(std::string_view label) const {
  const Symbol sym = find_symbol(label);
  if (sym == kNoSymbol) return {};
  auto it = label_index_.find(sym);
  if (it == label_index_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::size_t Graph::label_cardinality(std::string_view label) const {
  const Symbol sym = find_symbol(label);
  if (sym == kNoSymbol) return 0;
  auto it = label_index_.find(sym);
  return it == label_index_.end() ? 0 : it->second.size();
}

std::vector<std::pair<std::string, std::size_t>> Graph::label_counts() const {
  std::vector<std::pair<std::string, std::size_t>> out;
  out.reserve(label_index_.size());
  for (const auto& [sym, ids] : label_index_) out.emplace_back(symbols_[sym], ids.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Neighbor> Graph::neighbors(NodeId node, Direction direction,
                                       std::optional<std::string_view> rel_type) const {
  std::vector<Neighbor> out;
  if (const NodeSlot* slot = node_slot(node)) out.reserve(slot->adj.size());
  for_each_neighbor(node, direction, rel_type, [&](EdgeId e, NodeId other) { out.push_back({e, other}); });
  return out;
}

std::size_t Graph::degree(NodeId node, Direction direction) const {
  std::size_t n = 0;
  for_each_neighbor(node, direction, std::nullopt, [&](EdgeId, NodeId) { ++n; });
  return n;
}

std::vector<NodeId> Graph::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(live_nodes_);
  for (std::uint64_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].live) out.push_back(NodeId{i});
  }
  return out;
}

std::vector<EdgeId> Graph::edge_ids() const {
  std::vector<EdgeId> out;
  out.reserve(live_edges_);
  for (std::uint64_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].live) out.push_back(EdgeId{i});
  }
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.live_nodes_ != b.live_nodes_ || a.live_edges_ != b.live_edges_) return false;
  const auto a_nodes = a.node_ids();
  if (a_nodes != b.node_ids()) return false;
  for (NodeId id : a_nodes) {
    const auto na = *a.node(id);
    const auto nb = *b.node(id);
    if (na.labels() != nb.labels() || na.props() != nb.props()) return false;
  }
  const auto a_edges = a.edge_ids();
  if (a_edges != b.edge_ids()) return false;
  for (EdgeId id : a_edges) {
    const auto ea = *a.edge(id);
    const auto eb = *b.edge(id);
    if (ea.rel_type() != eb.rel_type() || ea.src() != eb.src() || ea.dst() != eb.dst() ||
        ea.props() != eb.props()) {
      return false;
    }
  }
  return true;
}

// Transactions -------------------------------------------------------------

Graph::Transaction::Transaction(Graph& graph) : graph_(&graph) {
  if (graph.journaling_) throw Error("nested graph transactions are not supported");
  graph.journaling_ = true;
  graph.undo_.clear();
  graph.tx_next_node_ = graph.next_node_;
  graph.tx_next_edge_ = graph.next_edge_;
}

Graph::Transaction::~Transaction() {
  if (open_) rollback();
}

void Graph::Transaction::commit() {
  if (!open_) return;
  graph_->journaling_ = false;
  graph_->undo_.clear();
  open_ = false;
}

void Graph::Transaction::rollback() {
  if (!open_) return;
  graph_->journaling_ = false;
  graph_->undo_to(0);
  graph_->next_node_ = graph_->tx_next_node_;
  graph_->next_edge_ = graph_->tx_next_edge_;
  open_ = false;
}

void Graph::undo_to(std::size_t mark) {
  while (undo_.size() > mark) {
    UndoRecord record = std::move(undo_.back());
    undo_.pop_back();
    std::visit(
        [this](auto& r) {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, UndoNodeCreated>) {
            unplace_node(r.id);
          } else if constexpr (std::is_same_v<R, UndoEdgeCreated>) {
            unplace_edge(r.id);
          } else if constexpr (std::is_same_v<R, UndoProperty>) {
            PropertyMap& props = props_of(r.target);
            if (r.previous) {
              props.insert_or_assign(r.key, std::move(*r.previous));
            } else {
              props.erase(r.key);
            }
          } else if constexpr (std::is_same_v<R, UndoLabel>) {
            NodeSlot& slot = nodes_[r.node.value];
            auto pos = std::lower_bound(slot.labels.begin(), slot.labels.end(), r.label);
            if (r.was_added) {
              slot.labels.erase(pos);
              auto idx = label_index_.find(r.label);
              idx->second.erase(r.node);
              if (idx->second.empty()) label_index_.erase(idx);
            } else {
              slot.labels.insert(pos, r.label);
              label_index_[r.label].insert(r.node);
            }
          } else if constexpr (std::is_same_v<R, UndoNodeRemoved>) {
            place_node(r.id, std::move(r.labels), std::move(r.props));
          } else if constexpr (std::is_same_v<R, UndoEdgeRemoved>) {
            place_edge(r.id, r.rel, r.src, r.dst, std::move(r.props));
          }
        },
        record);
  }
}

}  // namespace lcag
