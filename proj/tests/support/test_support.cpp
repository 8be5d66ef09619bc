#include "test_support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lcag::testkit {

std::filesystem::path fixture_dir() { return LCAG_FIXTURE_DIR; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TableBundle fixture_bundle() {
  TableBundle bundle;
  for (const char* name : {"workflow", "metadata", "agent", "reference"}) {
    bundle.emplace(name, read_text(fixture_dir() / "two_publications" / (std::string(name) + ".csv")));
  }
  return bundle;
}

Graph fixture_graph() {
  Graph g;
  ingest_bundle(g, fixture_bundle());
  return g;
}

PropertyValue random_value(std::mt19937_64& rng, bool rich) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  if (!rich) {
    if (pick(2) == 0) return static_cast<std::int64_t>(pick(4));
    static const std::vector<std::string> words = {"x", "y", "z"};
    return words[static_cast<std::size_t>(pick(3))];
  }
  std::uniform_real_distribution<double> real(-1e6, 1e6);
  switch (pick(7)) {
    case 0: {
      static const std::vector<std::string> texts = {
          "", "plain", "with space", "comma,quote\"", "line\nbreak\ttab", "caf\xc3\xa9 \xe2\x82\xac", "<iri>", "\\"};
      return texts[static_cast<std::size_t>(pick(static_cast<int>(texts.size())))];
    }
    case 1:
      return std::uniform_int_distribution<std::int64_t>(INT64_MIN, INT64_MAX)(rng);
    case 2: {
      double choices[] = {real(rng), 0.1, -0.0, 1e-300, 5e-324, 1.7976931348623157e308, 3.0};
      return choices[pick(7)];
    }
    case 3:
      return pick(2) == 1;
    case 4: {
      RealArray a(static_cast<std::size_t>(pick(4)));
      for (auto& x : a) x = real(rng);
      return a;
    }
    default: {
      static const std::vector<std::string> units = {"kg", "kWh", "m3", "t*km", "1"};
      Quantity q{real(rng), units[static_cast<std::size_t>(pick(5))], {}};
      int u = pick(3);
      if (u == 1) {
        double lo = real(rng);
        q.uncertainty = Uncertainty::uniform(lo, lo + std::abs(real(rng)));
      } else if (u == 2) {
        q.uncertainty = Uncertainty::normal(real(rng), std::abs(real(rng)));
      }
      return q;
    }
  }
}

Graph random_graph(std::mt19937_64& rng, const RandomGraphSpec& spec) {
  Graph g;
  auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng); };
  const std::size_t n = below(spec.max_nodes);
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> labels;
    for (const auto& l : spec.labels) {
      if (below(2) == 0) labels.push_back(l);
    }
    PropertyMap props;
    const std::size_t k = below(spec.max_props);
    for (std::size_t j = 0; j < k; ++j) props.insert_or_assign("p" + std::to_string(below(3)), random_value(rng, spec.rich_values));
    ids.push_back(g.create_node(labels, std::move(props)));
  }
  if (ids.empty()) return g;
  const std::size_t m = below(spec.max_edges);
  for (std::size_t i = 0; i < m; ++i) {
    NodeId a = ids[below(ids.size() - 1)];
    NodeId b = ids[below(ids.size() - 1)];
    PropertyMap props;
    const std::size_t k = below(spec.max_props);
    for (std::size_t j = 0; j < k; ++j) props.insert_or_assign("q" + std::to_string(below(2)), random_value(rng, spec.rich_values));
    g.create_edge(spec.rel_types[below(spec.rel_types.size() - 1)], a, b, std::move(props));
  }
  return g;
}

namespace {

std::string describe_props(const PropertyMap& props) {
  std::string out = "{";
  for (const auto& [k, v] : props) out += k + "=" + std::to_string(v.index()) + ":" + format_value(v) + ";";
  return out + "}";
}

}  // namespace

std::string structural_signature(const Graph& graph) {
  std::map<NodeId, std::string> names;
  std::vector<std::string> nodes;
  for (NodeId id : graph.node_ids()) {
    auto n = graph.node(id);
    std::string d;
    for (auto l : n->labels()) d += std::string(l) + ":";
    d += describe_props(n->props());
    names[id] = d;
    nodes.push_back(d);
  }
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw std::runtime_error("structural_signature needs distinguishable nodes");
  }
  std::vector<std::string> edges;
  for (EdgeId id : graph.edge_ids()) {
    auto e = graph.edge(id);
    edges.push_back(names[e->src()] + " -[" + std::string(e->rel_type()) + describe_props(e->props()) + "]-> " +
                    names[e->dst()]);
  }
  std::sort(edges.begin(), edges.end());
  std::string out;
  for (const auto& n : nodes) out += "N " + n + "\n";
  for (const auto& e : edges) out += "E " + e + "\n";
  return out;
}

}  // namespace lcag::testkit
