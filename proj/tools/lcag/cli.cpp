#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "lcag/error.hpp"
#include "lcag/harmonize.hpp"
#include "lcag/ingest.hpp"
#include "lcag/ontology.hpp"
#include "lcag/quality.hpp"
#include "lcag/query.hpp"
#include "lcag/snapshot.hpp"
#include "lcag/triples.hpp"

namespace fs = std::filesystem;

namespace lcag::cli {

namespace {

/// Usage-level failure: bad paths, missing store, conflicting settings.
struct UsageFailure {
  std::string message;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageFailure{"cannot read " + path.string()};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageFailure{"cannot write " + path.string()};
  out << text;
  if (!out.flush()) throw UsageFailure{"cannot write " + path.string()};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Options {
  std::string store;
  std::string config;

  std::string workflow, metadata, agent, reference;
  bool statements = false;
  bool strict = false;

  std::string schema;
  std::string expression, query_file, format;
  std::string mappings, ontology;
  std::string output, input;
};

class Session {
 public:
  Session(CliConfig config, std::ostream& out, std::ostream& err) : cfg_(std::move(config)), out_(out), err_(err) {}

  Graph load() const {
    if (!fs::exists(cfg_.store_path)) {
      throw UsageFailure{"store " + cfg_.store_path.string() + " does not exist; run `lcag ingest` first"};
    }
    return load_snapshot_file(cfg_.store_path);
  }

  void save(const Graph& graph) const { save_snapshot_file(graph, cfg_.store_path); }

  SchemaDef schema(const std::string& flag) const {
    if (!flag.empty()) return parse_schema(read_file(flag));
    if (cfg_.schema_path) return parse_schema(read_file(*cfg_.schema_path));
    return builtin_schema();
  }

  int ingest(const Options& o) const {
    TableBundle bundle;
    if (!o.workflow.empty()) bundle.emplace("workflow", read_file(o.workflow));
    if (!o.metadata.empty()) bundle.emplace("metadata", read_file(o.metadata));
    if (!o.agent.empty()) bundle.emplace("agent", read_file(o.agent));
    if (!o.reference.empty()) bundle.emplace("reference", read_file(o.reference));
    if (bundle.empty()) throw UsageFailure{"ingest needs at least one of --workflow, --metadata, --agent, --reference"};

    Graph graph = fs::exists(cfg_.store_path) ? load() : Graph{};

    if (o.statements) {
      for (const auto& name : TableRegistry::builtin().names()) {
        auto it = bundle.find(name);
        if (it == bundle.end()) continue;
        for (const auto& s : build_statements(parse_table(*parse_table_kind(name), it->second))) {
          out_ << render_statement(s) << "\n";
        }
      }
    }

    IngestSummary summary = ingest_bundle(graph, bundle);
    for (const auto& e : summary.row_errors) err_ << e.table << " line " << e.line << ": " << e.message << "\n";
    out_ << "nodes_created " << summary.nodes_created << "\n"
         << "nodes_matched " << summary.nodes_matched << "\n"
         << "edges_created " << summary.edges_created << "\n"
         << "edges_matched " << summary.edges_matched << "\n"
         << "props_set " << summary.props_set << "\n"
         << "row_errors " << summary.row_errors.size() << "\n";
    if (o.strict && !summary.row_errors.empty()) {
      err_ << "store left unchanged: --strict and " << summary.row_errors.size() << " row errors\n";
      return kDataError;
    }
    save(graph);
    return kOk;
  }

  int validate(const Options& o) const {
    Graph graph = load();
    auto violations = validate_graph(graph, schema(o.schema));
    for (const auto& v : violations) {
      out_ << to_string(v.kind) << "\t" << to_string(v.target) << "\t" << v.detail << "\n";
    }
    err_ << violations.size() << " violations\n";
    return o.strict && !violations.empty() ? kDataError : kOk;
  }

  int query(const Options& o) const {
    std::string format = o.format.empty() ? cfg_.format : o.format;
    if (format != "csv" && format != "json") throw UsageFailure{"unknown output format " + format};
    std::string text = o.expression.empty() ? read_file(o.query_file) : o.expression;
    QueryAst ast = parse_query(text);
    Graph graph = load();
    ResultTable table = execute_query(ast, graph);
    out_ << (format == "json" ? table.to_json_lines() : table.to_csv());
    return kOk;
  }

  int score(const Options& o) const {
    Graph graph = load();
    QualityReport report = score_quality(graph, schema(o.schema));
    out_ << (o.format == "json" ? to_json(report) + "\n" : to_text(report));
    return kOk;
  }

  int fair(const Options& o) const {
    Graph graph = load();
    FairReport report = fair_report(graph, schema(o.schema));
    out_ << (o.format == "json" ? to_json(report) + "\n" : to_text(report));
    return o.strict && !report.all_passed() ? kDataError : kOk;
  }

  int harmonize(const Options& o) const {
    MappingTable table;
    if (!o.mappings.empty()) {
      table = parse_mappings(read_file(o.mappings));
    } else if (cfg_.mappings_path) {
      table = parse_mappings(read_file(*cfg_.mappings_path));
    } else {
      table = builtin_mappings();
    }
    SchemaDef target = schema(o.schema);
    for (const auto& c : detect_conflicts(table, target)) {
      err_ << "warning: " << to_string(c.kind) << ": " << c.detail << "\n";
    }

    Graph graph = load();
    std::optional<std::string_view> only;
    if (!o.ontology.empty()) only = o.ontology;
    TranslationResult result = translate_graph(graph, table, target, only);

    fs::path backup = cfg_.store_path;
    backup += ".bak";
    fs::copy_file(cfg_.store_path, backup, fs::copy_options::overwrite_existing);
    save(result.graph);

    const auto& r = result.report;
    out_ << "labels_rewritten " << r.labels_rewritten << "\n"
         << "relations_rewritten " << r.relations_rewritten << "\n"
         << "edges_reversed " << r.edges_reversed << "\n"
         << "properties_rewritten " << r.properties_rewritten << "\n";
    for (const auto& t : r.untranslated) out_ << "untranslated " << t << "\n";
    for (const auto& c : r.collisions) err_ << "collision: " << c << "\n";
    return kOk;
  }

  int export_triples(const Options& o) const {
    Graph graph = load();
    std::string text = write_ntriples(to_triples(graph));
    if (o.output == "-") {
      out_ << text;
    } else {
      write_file(o.output, text);
    }
    return kOk;
  }

  int import_triples(const Options& o) const {
    Graph graph = from_triples(parse_ntriples(read_file(o.input)));
    save(graph);
    out_ << "nodes " << graph.node_count() << "\n" << "edges " << graph.edge_count() << "\n";
    return kOk;
  }

  int stats() const {
    Graph graph = load();
    std::map<std::string, std::size_t> relations;
    for (EdgeId id : graph.edge_ids()) ++relations[std::string(graph.edge(id)->rel_type())];
    out_ << "nodes " << graph.node_count() << "\n"
         << "edges " << graph.edge_count() << "\n"
         << "workflows " << graph.label_cardinality("Workflow") << "\n";
    for (const auto& [label, n] : graph.label_counts()) out_ << "label " << label << " " << n << "\n";
    for (const auto& [rel, n] : relations) out_ << "relation " << rel << " " << n << "\n";
    return kOk;
  }

 private:
  CliConfig cfg_;
  std::ostream& out_;
  std::ostream& err_;
};

CliConfig resolve_config(const Options& o, const EnvLookup& env) {
  CliConfig cfg;
  if (auto s = env("LCAG_STORE"); s && !s->empty()) cfg.store_path = *s;

  std::optional<fs::path> config_path;
  if (!o.config.empty()) {
    config_path = o.config;
    if (!fs::exists(*config_path)) throw UsageFailure{"config file " + o.config + " does not exist"};
  } else if (auto p = default_config_path(env); p && fs::exists(*p)) {
    config_path = p;
  }
  if (config_path) {
    cfg = parse_config(read_file(*config_path), cfg);
    // Relative paths in a config file are relative to the file itself.
    const fs::path base = config_path->parent_path();
    auto anchor = [&](fs::path& p) {
      if (!p.empty() && p.is_relative()) p = base / p;
    };
    anchor(cfg.store_path);
    if (cfg.schema_path) anchor(*cfg.schema_path);
    if (cfg.mappings_path) anchor(*cfg.mappings_path);
  }

  if (!o.store.empty()) cfg.store_path = o.store;
  if (cfg.store_path.empty()) {
    throw UsageFailure{"no graph store configured; pass --store, set `store` in the config file or LCAG_STORE"};
  }
  fs::path parent = fs::absolute(cfg.store_path).parent_path();
  if (!fs::is_directory(parent)) throw UsageFailure{"store directory " + parent.string() + " does not exist"};
  return cfg;
}

}  // namespace

std::optional<std::string> process_env(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

std::optional<fs::path> default_config_path(const EnvLookup& env) {
  if (auto p = env("LCAG_CONFIG"); p && !p->empty()) return fs::path(*p);
  if (auto p = env("XDG_CONFIG_HOME"); p && !p->empty()) return fs::path(*p) / "lcag" / "config";
  if (auto p = env("HOME"); p && !p->empty()) return fs::path(*p) / ".config" / "lcag" / "config";
  return std::nullopt;
}

CliConfig parse_config(std::string_view text, CliConfig base) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(line_no, "expected `key = value`");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (value.empty()) throw FormatError(line_no, "empty value for " + key);
    if (key == "store") {
      base.store_path = value;
    } else if (key == "schema") {
      base.schema_path = value;
    } else if (key == "mappings") {
      base.mappings_path = value;
    } else if (key == "format") {
      if (value != "csv" && value != "json") throw FormatError(line_no, "format must be csv or json");
      base.format = value;
    } else {
      throw FormatError(line_no, "unknown key " + key);
    }
  }
  return base;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  Options o;
  CLI::App app{"Labeled property graph store for life-cycle inventory data", "lcag"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--store", o.store, "Graph store file (overrides config and LCAG_STORE)");
  app.add_option("--config", o.config, "Config file with `key = value` lines");

  auto* ingest = app.add_subcommand("ingest", "Ingest unified CSV tables into the store");
  ingest->add_option("--workflow", o.workflow, "Workflow table");
  ingest->add_option("--metadata", o.metadata, "Metadata table");
  ingest->add_option("--agent", o.agent, "Agent table");
  ingest->add_option("--reference", o.reference, "Reference table");
  ingest->add_flag("--statements", o.statements, "Print the generated statements");
  ingest->add_flag("--strict", o.strict, "Fail without saving when any row is rejected");

  auto* validate = app.add_subcommand("validate", "Check the store against a schema");
  validate->add_option("--schema", o.schema, "Schema DSL file (default: builtin schema)");
  validate->add_flag("--strict", o.strict, "Exit 1 when violations are found");

  auto* query = app.add_subcommand("query", "Run a pattern query");
  auto* expr_opt = query->add_option("-e,--expression", o.expression, "Query text");
  auto* file_opt = query->add_option("-f,--file", o.query_file, "File holding the query");
  expr_opt->excludes(file_opt);
  query->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* score = app.add_subcommand("score", "Data-quality ratios");
  score->add_option("--schema", o.schema, "Schema DSL file");
  score->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* fair = app.add_subcommand("fair", "FAIR pass/fail report");
  fair->add_option("--schema", o.schema, "Schema DSL file");
  fair->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  fair->add_flag("--strict", o.strict, "Exit 1 when any check fails");

  auto* harmonize = app.add_subcommand("harmonize", "Translate source vocabularies into the canonical schema");
  harmonize->add_option("--mappings", o.mappings, "Mapping CSV (default: builtin mappings)");
  harmonize->add_option("--ontology", o.ontology, "Apply only this source ontology's entries");
  harmonize->add_option("--schema", o.schema, "Target schema DSL file");

  auto* export_cmd = app.add_subcommand("export-triples", "Write the store as N-Triples");
  export_cmd->add_option("-o,--output", o.output, "Output file, or - for stdout")->required();

  auto* import_cmd = app.add_subcommand("import-triples", "Replace the store with an N-Triples document");
  import_cmd->add_option("-i,--input", o.input, "Input file")->required();

  auto* stats = app.add_subcommand("stats", "Node, edge, label and relation counts");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (query->parsed() && o.expression.empty() && o.query_file.empty()) {
      throw CLI::RequiredError("query needs -e TEXT or -f FILE");
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  }

  try {
    Session session(resolve_config(o, env), out, err);
    if (ingest->parsed()) return session.ingest(o);
    if (validate->parsed()) return session.validate(o);
    if (query->parsed()) return session.query(o);
    if (score->parsed()) return session.score(o);
    if (fair->parsed()) return session.fair(o);
    if (harmonize->parsed()) return session.harmonize(o);
    if (export_cmd->parsed()) return session.export_triples(o);
    if (import_cmd->parsed()) return session.import_triples(o);
    if (stats->parsed()) return session.stats();
    return kUsageError;
  } catch (const UsageFailure& e) {
    err << "error: " << e.message << "\n";
    return kUsageError;
  } catch (const UnsupportedVocabularyError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& s : e.subjects()) err << "  " << s << "\n";
    return kUsageError;
  } catch (const QueryRuntimeError& e) {
    err << "query error: " << e.what() << "\n";
    return kDataError;
  } catch (const QuerySyntaxError& e) {
    err << "query syntax error: " << e.what() << "\n";
    return kUsageError;
  } catch (const QuerySemanticError& e) {
    err << "query error: " << e.what() << "\n";
    return kUsageError;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kUsageError;
  } catch (const MappingError& e) {
    err << "mapping error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IntegrityError& e) {
    err << "integrity error: " << e.what() << "\n";
    return kUsageError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace lcag::cli
