#include "chromplane/cnf.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace chromplane {

CnfInstance export_dimacs(const TwoDistGraph& g, int k, const CnfOptions& opts) {
  if (k < 0) throw std::invalid_argument("export_dimacs: negative k");
  const int n = g.num_vertices();
  CnfInstance cnf;
  cnf.num_vars = n * k;

  std::ostringstream head;
  head << "graph " << (g.name.empty() ? "unnamed" : g.name) << " n " << n
       << " unit-edges " << g.edges1.size() << " distance2-edges "
       << g.edges2.size() << " k " << k;
  cnf.comments.push_back(head.str());
  cnf.comments.push_back("sha256 " + graph_digest(g));
  cnf.comments.push_back("var(v, c) = v*k + c + 1");
  if (opts.at_most_one) cnf.comments.push_back("at-most-one clauses included");

  for (int v = 0; v < n; ++v) {
    std::vector<int> alo;
    for (int c = 0; c < k; ++c) alo.push_back(cnf_var(v, c, k));
    cnf.clauses.push_back(std::move(alo));
  }
  for (const auto* edges : {&g.edges1, &g.edges2})
    for (auto [u, v] : *edges)
      for (int c = 0; c < k; ++c)
        cnf.clauses.push_back({-cnf_var(u, c, k), -cnf_var(v, c, k)});
  if (opts.at_most_one)
    for (int v = 0; v < n; ++v)
      for (int c = 0; c < k; ++c)
        for (int d = c + 1; d < k; ++d)
          cnf.clauses.push_back({-cnf_var(v, c, k), -cnf_var(v, d, k)});
  return cnf;
}

void write_dimacs(std::ostream& os, const CnfInstance& cnf) {
  for (const auto& c : cnf.comments) os << "c " << c << '\n';
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) os << lit << ' ';
    os << "0\n";
  }
}

std::vector<int> parse_model(std::istream& is) {
  std::vector<int> lits;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok == "c" || tok == "s") continue;
    if (tok != "v") ss.seekg(0);
    while (ss >> tok) {
      if (tok == "v") continue;
      std::size_t pos = 0;
      int lit = 0;
      try {
        lit = std::stoi(tok, &pos);
      } catch (const std::exception&) {
        throw MalformedModel("model: not an integer literal: " + tok);
      }
      if (pos != tok.size())
        throw MalformedModel("model: not an integer literal: " + tok);
      if (lit != 0) lits.push_back(lit);
    }
  }
  return lits;
}

std::vector<int> decode_model(const TwoDistGraph& g, int k,
                              std::span<const int> model) {
  const int n = g.num_vertices();
  const int nv = n * k;
  // 0 unassigned, 1 true, -1 false
  std::vector<int> value(nv + 1, 0);
  for (int lit : model) {
    const int var = lit < 0 ? -lit : lit;
    if (var == 0 || var > nv)
      throw MalformedModel("model: variable out of range: " + std::to_string(lit));
    const int val = lit > 0 ? 1 : -1;
    if (value[var] == -val)
      throw MalformedModel("model: variable assigned both ways: " +
                           std::to_string(var));
    value[var] = val;
  }
  for (int var = 1; var <= nv; ++var)
    if (value[var] == 0)
      throw MalformedModel("model: missing variable " + std::to_string(var));

  std::vector<int> colors(n, -1);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < k; ++c)
      if (value[cnf_var(v, c, k)] > 0) {
        colors[v] = c;
        break;
      }
  return colors;
}

bool check_model(const TwoDistGraph& g, int k, std::span<const int> model) {
  const auto colors = decode_model(g, k, model);
  for (int c : colors)
    if (c < 0) return false;
  for (const auto* edges : {&g.edges1, &g.edges2})
    for (auto [u, v] : *edges)
      if (colors[u] == colors[v]) return false;
  return true;
}

std::vector<int> encode_coloring(const CanonicalColoring& c, int k) {
  const int n = static_cast<int>(c.colors.size());
  std::vector<int> lits;
  lits.reserve(static_cast<std::size_t>(n) * k);
  for (int v = 0; v < n; ++v)
    for (int col = 0; col < k; ++col) {
      const int var = cnf_var(v, col, k);
      lits.push_back(c.colors[v] == col ? var : -var);
    }
  return lits;
}

}  // namespace chromplane
