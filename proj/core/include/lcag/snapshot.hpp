#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "lcag/graph.hpp"

namespace lcag {

// Line-oriented UTF-8 dump:
//
//   lcagraph-dump v1
//   counts nodes=<n> edges=<m>
//   {"kind":"node","id":0,"labels":[...],"props":{...}}
//   {"kind":"edge","id":0,"rel_type":"T","src":0,"dst":1,"props":{...}}
//
// Nodes precede edges, each in ascending id order; labels and property keys
// are sorted. Equal graphs therefore produce byte-identical dumps.

inline constexpr std::string_view kSnapshotMagic = "lcagraph-dump";
inline constexpr std::string_view kSnapshotVersion = "v1";

void write_snapshot(const Graph& graph, std::ostream& out);
std::string write_snapshot(const Graph& graph);

/// Throws VersionError for an unknown version token and FormatError (with
/// the 1-based line number) for anything else that does not parse.
Graph read_snapshot(std::istream& in);
Graph read_snapshot(std::string_view text);

/// Writes through a sibling temporary file and renames it into place.
void save_snapshot_file(const Graph& graph, const std::filesystem::path& path);
Graph load_snapshot_file(const std::filesystem::path& path);

}  // namespace lcag
