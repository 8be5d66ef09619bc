#include "lcag/snapshot.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lcag/error.hpp"
#include "value_codec.hpp"

namespace lcag {

using detail::ojson;

namespace {

ojson node_record(const NodeView& node) {
  ojson j = ojson::object();
  j["kind"] = "node";
  j["id"] = node.id().value;
  ojson labels = ojson::array();
  for (auto label : node.labels()) labels.push_back(std::string(label));
  j["labels"] = std::move(labels);
  j["props"] = detail::props_to_json(node.props());
  return j;
}

ojson edge_record(const EdgeView& edge) {
  ojson j = ojson::object();
  j["kind"] = "edge";
  j["id"] = edge.id().value;
  j["rel_type"] = std::string(edge.rel_type());
  j["src"] = edge.src().value;
  j["dst"] = edge.dst().value;
  j["props"] = detail::props_to_json(edge.props());
  return j;
}

std::uint64_t require_id(const ojson& j, const char* field) {
  if (!j.is_number_unsigned()) throw ValueError(std::string("'") + field + "' must be a non-negative integer");
  return j.get<std::uint64_t>();
}

bool keys_are(const ojson& j, std::initializer_list<const char*> keys) {
  if (!j.is_object() || j.size() != keys.size()) return false;
  auto it = j.begin();
  for (const char* key : keys) {
    if (it.key() != key) return false;
    ++it;
  }
  return true;
}

bool parse_count(std::string_view token, std::string_view name, std::size_t& out) {
  if (token.substr(0, name.size()) != name || token.size() == name.size()) return false;
  std::size_t value = 0;
  for (char c : token.substr(name.size())) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  out = value;
  return true;
}

}  // namespace

void write_snapshot(const Graph& graph, std::ostream& out) {
  out << kSnapshotMagic << ' ' << kSnapshotVersion << '\n';
  out << "counts nodes=" << graph.node_count() << " edges=" << graph.edge_count() << '\n';
  for (NodeId id : graph.node_ids()) out << detail::dump_compact(node_record(*graph.node(id))) << '\n';
  for (EdgeId id : graph.edge_ids()) out << detail::dump_compact(edge_record(*graph.edge(id))) << '\n';
}

std::string write_snapshot(const Graph& graph) {
  std::ostringstream out;
  write_snapshot(graph, out);
  return std::move(out).str();
}

Graph read_snapshot(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw FormatError(1, "empty input; expected snapshot header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto space = line.find(' ');
    if (space == std::string::npos || std::string_view(line).substr(0, space) != kSnapshotMagic) {
      throw FormatError(1, "not an lcagraph dump (header '" + line + "')");
    }
    const auto version = std::string_view(line).substr(space + 1);
    if (version != kSnapshotVersion) {
      throw VersionError(1, "unsupported dump version '" + std::string(version) + "', expected " +
                                std::string(kSnapshotVersion));
    }
  }

  line_no = 2;
  if (!std::getline(in, line)) throw FormatError(2, "missing counts manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t want_nodes = 0;
  std::size_t want_edges = 0;
  {
    std::istringstream manifest(line);
    std::string tag, nodes_tok, edges_tok, extra;
    manifest >> tag >> nodes_tok >> edges_tok;
    if (tag != "counts" || !parse_count(nodes_tok, "nodes=", want_nodes) ||
        !parse_count(edges_tok, "edges=", want_edges) || (manifest >> extra)) {
      throw FormatError(2, "malformed counts manifest '" + line + "'");
    }
  }

  Graph graph;
  bool seen_edge = false;
  std::uint64_t last_node = 0;
  std::uint64_t last_edge = 0;
  bool any_node = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      const ojson j = ojson::parse(line);
      if (keys_are(j, {"kind", "id", "labels", "props"}) && j["kind"] == "node") {
        if (seen_edge) throw ValueError("node record after edge records");
        const auto id = require_id(j["id"], "id");
        if (any_node && id <= last_node) throw ValueError("node ids must be strictly ascending");
        if (!j["labels"].is_array()) throw ValueError("'labels' must be an array");
        std::vector<std::string> labels;
        for (const auto& l : j["labels"]) {
          if (!l.is_string()) throw ValueError("labels must be strings");
          labels.push_back(l.get<std::string>());
        }
        graph.insert_node(NodeId{id}, labels, detail::props_from_json(j["props"]));
        last_node = id;
        any_node = true;
      } else if (keys_are(j, {"kind", "id", "rel_type", "src", "dst", "props"}) && j["kind"] == "edge") {
        const auto id = require_id(j["id"], "id");
        if (seen_edge && id <= last_edge) throw ValueError("edge ids must be strictly ascending");
        if (!j["rel_type"].is_string()) throw ValueError("'rel_type' must be a string");
        graph.insert_edge(EdgeId{id}, j["rel_type"].get<std::string>(), NodeId{require_id(j["src"], "src")},
                          NodeId{require_id(j["dst"], "dst")}, detail::props_from_json(j["props"]));
        last_edge = id;
        seen_edge = true;
      } else {
        throw ValueError("record is neither a node nor an edge in canonical key order");
      }
    } catch (const ojson::exception& e) {
      throw FormatError(line_no, std::string("malformed record: ") + e.what());
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(line_no, e.what());
    }
  }
  if (graph.node_count() != want_nodes || graph.edge_count() != want_edges) {
    throw FormatError(2, "manifest declares nodes=" + std::to_string(want_nodes) +
                             " edges=" + std::to_string(want_edges) + " but the dump holds nodes=" +
                             std::to_string(graph.node_count()) + " edges=" + std::to_string(graph.edge_count()));
  }
  return graph;
}

Graph read_snapshot(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_snapshot(in);
}

void save_snapshot_file(const Graph& graph, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    write_snapshot(graph, out);
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Graph load_snapshot_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace lcag
