#pragma once

#include <stdexcept>
#include <string>

#include "klein/examples.hpp"
#include "klein/graphs.hpp"
#include "klein/surface.hpp"

namespace klein::io {

// Raised on malformed input files. The message carries the file path plus
// either a line/column (syntax errors) or a field path (semantic errors).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error("ParseError: " + msg) {}
};

// All files share one JSON-compatible text format with a top-level
// format_version and a kind tag ("category", "graph", "word"). Rationals are
// encoded as strings "p" or "p/q"; sparse vectors as {"index": "p/q", ...};
// sparse matrices as triplet lists [[row, col, "p/q"], ...].

ExampleCategory load_category(const std::string& path);
MobiusGraph load_graph(const std::string& path);
MorphismWord load_word(const std::string& path);

std::string category_to_json(const ExampleCategory& ex);
std::string graph_to_json(const MobiusGraph& g);
std::string word_to_json(const MorphismWord& w);

// Human-readable rendering of surface-category words, e.g.
// "1 * Compose[DiscPlus(0,1,2), TwistedDisc(0,2)]".
std::string render_word(const MorphismWord& w);

}  // namespace klein::io
