#pragma once

// k-colorability as CNF, for cross-checking with external SAT solvers.
// Variable v*k + c + 1 means "vertex v has color c".

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chromplane/coloring.hpp"
#include "chromplane/graph.hpp"

namespace chromplane {

struct CnfOptions {
  bool at_most_one = false;
};

struct CnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::string> comments;
};

inline int cnf_var(int vertex, int color, int k) {
  return vertex * k + color + 1;
}

CnfInstance export_dimacs(const TwoDistGraph& g, int k,
                          const CnfOptions& opts = {});
void write_dimacs(std::ostream& os, const CnfInstance& cnf);

// A model that does not assign every variable, or assigns one both ways.
class MalformedModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads whitespace-separated literals; "v" prefixes, "s ..." status lines,
// "c ..." comments and the terminating 0 are accepted.
std::vector<int> parse_model(std::istream& is);

// Lowest true color per vertex; -1 when a vertex has none.
// Throws MalformedModel.
std::vector<int> decode_model(const TwoDistGraph& g, int k,
                              std::span<const int> model);
bool check_model(const TwoDistGraph& g, int k, std::span<const int> model);

// Full assignment with exactly the coloring's variables true.
std::vector<int> encode_coloring(const CanonicalColoring& c, int k);

}  // namespace chromplane
