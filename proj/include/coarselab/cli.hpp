#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarselab/dimension.hpp"
#include "coarselab/maps.hpp"
#include "coarselab/nearness_lab.hpp"

namespace coarselab {

inline constexpr const char* kVersion = "coarselab 1.0";
inline constexpr int kDocumentVersion = 1;

/// A parsed instance document: one space with its LS.R, plus optional covers,
/// queries and a map section.
///
///   {"coarselab": 1,
///    "space": {"universe": ["a", "b", "c"]} | "nat-line",
///    "lsr": {"kind": "explicit", "members": [[["a"], ["a","b"]], ...], "generate": false}
///         | {"kind": "partition", "blocks": [["a","b"], ["c"]]}
///         | {"kind": "metric-line"} | {"kind": "topo-trace"},
///    "nearness": "induced" | "topological",
///    "budget": {"window": N, "max_scale": K},
///    "covers": [[["a"], ["b","c"]], ...]  or rule objects on the line,
///    "windows": [16, 32, ...],
///    "queries": {"near": [family, ...], "bunch": family},
///    "map": {"x": document, "y": document, "f": ..., "g": ...}}
///
/// Explicit sets are label lists; line sets are LineSet descriptors. Members are
/// taken literally (downward closure only) unless "generate" asks for the
/// smallest LS.R containing them.
struct Document {
  LsrBackend backend;
  std::string nearness = "induced";
  std::vector<json> covers;
  std::vector<Nat> windows;
  json queries = json::object();
  json map;
  json source;

  bool line() const { return backend.is_line(); }
  static Document parse(const json& j);
};

struct Options {
  std::optional<Nat> scale, window;
  unsigned seed = 1;
  std::size_t cap = 200;
  std::string target = "non-ls-regular";
  std::size_t max_size = 3;
};

struct CommandResult {
  int exit_code = 0;
  std::vector<std::string> lines;
  json report = json::object();

  /// Plain text with a version header, or the report as sorted-key JSON.
  std::string render(bool as_json) const;
};

/// Exit codes: 0 pass, 1 property failure, 2 schema, 3 cap, 4 Unknown.
int exit_code_of(const TriVerdict& v);
int exit_code_of(ErrorKind k);

CommandResult cmd_check(const Document& d, const Options& o = {});
CommandResult cmd_asdim(const Document& d, const Options& o = {});
CommandResult cmd_near(const Document& d, const Options& o = {});
CommandResult cmd_bunch(const Document& d, const Options& o = {});
CommandResult cmd_map(const Document& d, const Options& o = {});
CommandResult cmd_mine(const Options& o);

/// Dispatch by name on a JSON document; library errors become exit codes.
CommandResult run_command(const std::string& name, const json& doc, const Options& o);

/// Instance document for an explicit LS.R (its maximal members, literal form).
json lsr_document(const ExplicitLsr& c);

/// Every LS.R on `width` <= 3 points.
std::vector<ExplicitLsr> enumerate_lsrs(std::size_t width);

}  // namespace coarselab
