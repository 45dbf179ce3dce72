#include "chromplane/graph.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "chromplane/geometry.hpp"

namespace chromplane {

int TwoDistGraph::label_index(const std::string& label) const {
  for (const auto& [idx, name] : labels)
    if (name == label) return idx;
  return -1;
}

std::vector<std::vector<int>> TwoDistGraph::adjacency() const {
  std::vector<std::vector<int>> adj(vertices.size());
  for (const auto* edges : {&edges1, &edges2}) {
    for (auto [u, v] : *edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<int> TwoDistGraph::degrees() const {
  std::vector<int> deg(vertices.size(), 0);
  for (const auto* edges : {&edges1, &edges2}) {
    for (auto [u, v] : *edges) {
      ++deg[u];
      ++deg[v];
    }
  }
  return deg;
}

std::vector<QuadCoord> seed_points() {
  return {
      {0, 0, 0, 0},    {0, 0, 0, -4},   {0, 0, -6, -2},  {0, 0, -6, 2},
      {-6, 0, 0, -2},  {-4, 0, 0, 0},   {-4, 0, -6, -2}, {-4, 0, -6, 2},
      {-2, 0, 0, -2},  {-2, 0, -6, -4}, {-2, 0, -6, 4},  {0, -6, -6, 0},
      {-5, -3, 3, 3},  {-5, 3, -3, 3},  {-2, -6, 0, 0},  {-2, -6, 0, -4},
      {-2, 6, 0, 0},   {-2, 6, 0, -4},  {-6, -6, 0, 0},  {-6, 6, 0, 0},
      {-4, 0, 0, -4},  {0, 0, -12, 0},  {-8, 0, 0, 0},
  };
}

std::vector<QuadCoord> extra_points() {
  return {
      {-2, 0, 0, -6},  {8, 0, 0, 4},    {-4, -6, -6, -4}, {-4, 6, 6, -4},
      {-3, -3, -3, -5}, {-4, 0, -12, 4}, {-4, 0, 12, 4},   {7, -3, 3, 3},
      {7, 3, -3, 3},
  };
}

namespace {

// Appends points not already present, preserving first-occurrence order.
class PointSet {
 public:
  bool add(const PlanePoint& p) {
    if (!seen_.insert(p).second) return false;
    points_.push_back(p);
    return true;
  }
  const std::vector<PlanePoint>& points() const { return points_; }
  std::vector<PlanePoint> take() { return std::move(points_); }

 private:
  std::unordered_set<PlanePoint, PlanePointHash> seen_;
  std::vector<PlanePoint> points_;
};

std::vector<PlanePoint> embed_all(std::span<const QuadCoord> qs) {
  std::vector<PlanePoint> out;
  out.reserve(qs.size());
  for (const auto& q : qs) out.push_back(embed_quad(q));
  return out;
}

std::unordered_map<PlanePoint, int, PlanePointHash> index_of(
    std::span<const PlanePoint> pts) {
  std::unordered_map<PlanePoint, int, PlanePointHash> idx;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) idx.emplace(pts[i], i);
  return idx;
}

}  // namespace

std::vector<PlanePoint> build_T(std::span<const PlanePoint> seeds) {
  PointSet t;
  for (const auto& p : seeds) t.add(p);
  for (const auto& p : seeds) t.add(reflect_x(p));
  for (const auto& p : seeds) t.add(reflect_y(p));
  return t.take();
}

std::vector<PlanePoint> build_V(std::span<const PlanePoint> t) {
  PointSet v;
  std::vector<PlanePoint> current(t.begin(), t.end());
  for (int k = 0; k < 6; ++k) {
    for (const auto& p : current) v.add(p);
    for (auto& p : current) p = rotate60(p);
  }
  return v.take();
}

EdgeSets classify_edges(std::span<const PlanePoint> points) {
  EdgeSets out;
  const int n = static_cast<int>(points.size());
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      Q33 d = sq_distance(points[u], points[v]);
      if (sgn(d.s) != 0) continue;
      if (d.r == 1)
        out.dist1.emplace_back(u, v);
      else if (d.r == 4)
        out.dist2.emplace_back(u, v);
    }
  }
  return out;
}

TwoDistGraph make_graph(std::string name, std::vector<PlanePoint> vertices) {
  TwoDistGraph g;
  g.name = std::move(name);
  g.vertices = std::move(vertices);
  auto e = classify_edges(g.vertices);
  g.edges1 = std::move(e.dist1);
  g.edges2 = std::move(e.dist2);
  return g;
}

TwoDistGraph build_G(const ConstructionInput& in) {
  auto s = embed_all(in.seeds);
  auto t = build_T(s);
  return make_graph("G", build_V(t));
}

TwoDistGraph build_H(const ConstructionInput& in) {
  auto s = embed_all(in.seeds);
  PointSet h;
  for (const auto& p : build_V(build_T(s))) h.add(p);
  std::vector<int> extra_idx;
  auto idx = index_of(h.points());
  for (const auto& q : in.extras) {
    PlanePoint p = embed_quad(q);
    if (h.add(p))
      extra_idx.push_back(static_cast<int>(h.points().size()) - 1);
    else
      extra_idx.push_back(idx.count(p) ? idx.at(p) : -1);
  }
  TwoDistGraph g = make_graph("H", h.take());
  for (std::size_t i = 0; i < extra_idx.size(); ++i) {
    if (extra_idx[i] < 0) continue;
    std::string label = i == 0   ? "A"
                        : i == 1 ? "B"
                                 : "X" + std::to_string(i - 1);
    g.labels.emplace(extra_idx[i], label);
  }
  return g;
}

KConstruction construct_K(const ConstructionInput& in) {
  TwoDistGraph h = build_H(in);
  int a = h.label_index("A");
  int b = h.label_index("B");
  if (a < 0 || b < 0) throw std::logic_error("construct_K: H lacks A or B");
  const PlanePoint center = h.vertices[a];

  KConstruction kc;
  PointSet k;
  for (const auto& p : h.vertices) {
    k.add(p);
    kc.h_to_k.push_back(static_cast<int>(k.points().size()) - 1);
  }
  auto h_index = index_of(h.vertices);
  for (int i = 0; i < h.num_vertices(); ++i) {
    PlanePoint img = rotate_special(h.vertices[i], center, +1);
    if (k.add(img)) {
      kc.hprime_to_k.push_back(static_cast<int>(k.points().size()) - 1);
    } else {
      int j = h_index.at(img);
      kc.hprime_to_k.push_back(kc.h_to_k[j]);
      kc.coincidences.emplace_back(j, i);
    }
  }
  kc.k = make_graph("K", k.take());
  kc.k.labels.emplace(kc.h_to_k[a], "A");
  kc.k.labels.emplace(kc.h_to_k[b], "B");
  kc.k.labels.emplace(kc.hprime_to_k[b], "B'");
  return kc;
}

TwoDistGraph build_K(const ConstructionInput& in) { return construct_K(in).k; }

TwoDistGraph induced_subgraph(const TwoDistGraph& g, std::span<const int> keep) {
  std::vector<int> remap(g.vertices.size(), -1);
  TwoDistGraph out;
  out.name = g.name + "[induced]";
  for (int v : keep) {
    if (v < 0 || v >= g.num_vertices() || remap[v] >= 0)
      throw std::invalid_argument("induced_subgraph: bad vertex list");
    remap[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(g.vertices[v]);
    if (auto it = g.labels.find(v); it != g.labels.end())
      out.labels.emplace(remap[v], it->second);
  }
  auto carry = [&](const std::vector<Edge>& src, std::vector<Edge>& dst) {
    for (auto [u, v] : src) {
      int a = remap[u], b = remap[v];
      if (a < 0 || b < 0) continue;
      dst.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(dst.begin(), dst.end());
  };
  carry(g.edges1, out.edges1);
  carry(g.edges2, out.edges2);
  return out;
}

OrbitPartition orbit_partition(const TwoDistGraph& g) {
  const int n = g.num_vertices();
  auto idx = index_of(g.vertices);
  OrbitPartition p;
  p.orbit_of.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (p.orbit_of[v] >= 0) continue;
    std::vector<int> members;
    bool closed = true;
    for (const auto& img : orbit(g.vertices[v])) {
      auto it = idx.find(img);
      if (it == idx.end() || p.orbit_of[it->second] >= 0) {
        closed = false;
        break;
      }
      members.push_back(it->second);
    }
    if (!closed) members = {v};
    std::sort(members.begin(), members.end());
    for (int m : members) p.orbit_of[m] = static_cast<int>(p.orbits.size());
    p.orbits.push_back(std::move(members));
  }
  return p;
}

OrbitPartition orbit_partition(const KConstruction& kc) {
  const int n = kc.k.num_vertices();
  TwoDistGraph h;
  h.vertices.resize(kc.h_to_k.size());
  for (std::size_t i = 0; i < kc.h_to_k.size(); ++i)
    h.vertices[i] = kc.k.vertices[kc.h_to_k[i]];
  OrbitPartition hp = orbit_partition(h);

  OrbitPartition p;
  p.orbit_of.assign(n, -1);
  auto emit = [&](const std::vector<int>& members) {
    std::vector<int> fresh;
    for (int m : members)
      if (p.orbit_of[m] < 0) fresh.push_back(m);
    if (fresh.empty()) return;
    std::sort(fresh.begin(), fresh.end());
    for (int m : fresh) p.orbit_of[m] = static_cast<int>(p.orbits.size());
    p.orbits.push_back(std::move(fresh));
  };
  for (const auto& orb : hp.orbits) {
    std::vector<int> members;
    for (int i : orb) members.push_back(kc.h_to_k[i]);
    emit(members);
  }
  for (const auto& orb : hp.orbits) {
    std::vector<int> members;
    for (int i : orb) members.push_back(kc.hprime_to_k[i]);
    emit(members);
  }
  return p;
}

namespace {

std::vector<int> orbit_sequence(const TwoDistGraph& g, const OrbitPartition& p) {
  const int n = g.num_vertices();
  const auto deg = g.degrees();
  const auto adj = g.adjacency();
  const int m = static_cast<int>(p.orbits.size());

  std::vector<char> placed_vertex(n, 0);
  std::vector<char> placed_orbit(m, 0);
  std::vector<int> seq;
  seq.reserve(m);

  auto orbit_degree = [&](int o) {
    int best = 0;
    for (int v : p.orbits[o]) best = std::max(best, deg[v]);
    return best;
  };
  auto earlier_neighbors = [&](int o) {
    std::set<int> seen;
    for (int v : p.orbits[o])
      for (int u : adj[v])
        if (placed_vertex[u]) seen.insert(u);
    return static_cast<int>(seen.size());
  };

  for (int step = 0; step < m; ++step) {
    int best = -1, best_deg = -1, best_adj = -1;
    for (int o = 0; o < m; ++o) {
      if (placed_orbit[o]) continue;
      int d = orbit_degree(o);
      if (d < best_deg) continue;
      int a = earlier_neighbors(o);
      if (d > best_deg || a > best_adj) {
        best = o;
        best_deg = d;
        best_adj = a;
      }
    }
    placed_orbit[best] = 1;
    for (int v : p.orbits[best]) placed_vertex[v] = 1;
    seq.push_back(best);
  }
  return seq;
}

VertexOrder expand(const TwoDistGraph& g, const OrbitPartition& p,
                   const std::vector<int>& seq, bool clockwise = false) {
  VertexOrder out;
  for (int o : seq) {
    std::vector<int> members = p.orbits[o];
    std::stable_sort(members.begin(), members.end(), [&](int u, int v) {
      return polar_angle_less(g.vertices[u], g.vertices[v]);
    });
    if (clockwise) std::reverse(members.begin(), members.end());
    out.order.insert(out.order.end(), members.begin(), members.end());
  }
  return out;
}

}  // namespace

VertexOrder order_vertices(const TwoDistGraph& g, const OrbitPartition& p) {
  return expand(g, p, orbit_sequence(g, p));
}

VertexOrder reversed_orbit_order(const TwoDistGraph& g,
                                 const OrbitPartition& p) {
  auto seq = orbit_sequence(g, p);
  std::reverse(seq.begin(), seq.end());
  return expand(g, p, seq);
}

VertexOrder clockwise_order(const TwoDistGraph& g, const OrbitPartition& p) {
  return expand(g, p, orbit_sequence(g, p), true);
}

VertexOrder identity_order(int n) {
  VertexOrder o;
  o.order.resize(n);
  std::iota(o.order.begin(), o.order.end(), 0);
  return o;
}

bool is_valid_order(const VertexOrder& o, int n) {
  if (static_cast<int>(o.order.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : o.order) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::string graph_digest(const TwoDistGraph& g) {
  std::ostringstream os;
  write_general_vertices(os, g);
  write_edge_list(os, g);
  const std::string data = os.str();

  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("graph_digest: SHA-256 failed");
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << int{md[i]};
  return hex.str();
}

void write_lattice_vertices(std::ostream& os, const TwoDistGraph& g) {
  for (const auto& p : g.vertices) {
    QuadCoord q;
    if (!to_quad(p, q))
      throw std::domain_error("vertex is not on the 1/12 lattice");
    os << q.a << ' ' << q.b << ' ' << q.c << ' ' << q.d << '\n';
  }
}

void write_general_vertices(std::ostream& os, const TwoDistGraph& g) {
  for (const auto& p : g.vertices) {
    os << to_string(p.xa) << ' ' << to_string(p.xb) << ' ' << to_string(p.yc)
       << ' ' << to_string(p.yd) << '\n';
  }
}

void write_edge_list(std::ostream& os, const TwoDistGraph& g) {
  os << g.num_vertices() << ' ' << g.edges1.size() << ' ' << g.edges2.size()
     << '\n';
  // Merge the two classes in (u, v) order.
  std::vector<std::tuple<int, int, int>> all;
  for (auto [u, v] : g.edges1) all.emplace_back(u, v, 1);
  for (auto [u, v] : g.edges2) all.emplace_back(u, v, 2);
  std::sort(all.begin(), all.end());
  for (auto [u, v, w] : all) os << u << ' ' << v << ' ' << w << '\n';
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

long long parse_int(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("not an integer: " + s);
  }
  if (pos != s.size()) throw std::runtime_error("not an integer: " + s);
  return v;
}

}  // namespace

std::vector<PlanePoint> read_lattice_vertices(std::istream& is) {
  std::vector<PlanePoint> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto f = split_fields(line);
    if (f.empty()) continue;
    if (f.size() != 4)
      throw std::runtime_error("lattice vertex line " + std::to_string(lineno) +
                               ": expected 4 integers");
    out.push_back(embed_quad(
        {parse_int(f[0]), parse_int(f[1]), parse_int(f[2]), parse_int(f[3])}));
  }
  return out;
}

std::vector<PlanePoint> read_general_vertices(std::istream& is) {
  std::vector<PlanePoint> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto f = split_fields(line);
    if (f.empty()) continue;
    if (f.size() != 4)
      throw std::runtime_error("general vertex line " + std::to_string(lineno) +
                               ": expected 4 rationals");
    try {
      out.push_back({parse_rat(f[0]), parse_rat(f[1]), parse_rat(f[2]),
                     parse_rat(f[3])});
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("general vertex line " + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  return out;
}

EdgeFile read_edge_list(std::istream& is) {
  EdgeFile ef;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("edge file: empty");
  auto h = split_fields(line);
  if (h.size() != 3) throw std::runtime_error("edge file: bad header");
  ef.n = static_cast<int>(parse_int(h[0]));
  const long long m1 = parse_int(h[1]), m2 = parse_int(h[2]);
  while (std::getline(is, line)) {
    auto f = split_fields(line);
    if (f.empty()) continue;
    if (f.size() != 3) throw std::runtime_error("edge file: bad edge line");
    int u = static_cast<int>(parse_int(f[0]));
    int v = static_cast<int>(parse_int(f[1]));
    long long w = parse_int(f[2]);
    if (u < 0 || v < 0 || u >= ef.n || v >= ef.n || u == v)
      throw std::runtime_error("edge file: endpoint out of range");
    Edge e{std::min(u, v), std::max(u, v)};
    if (w == 1)
      ef.edges1.push_back(e);
    else if (w == 2)
      ef.edges2.push_back(e);
    else
      throw std::runtime_error("edge file: weight must be 1 or 2");
  }
  if (static_cast<long long>(ef.edges1.size()) != m1 ||
      static_cast<long long>(ef.edges2.size()) != m2)
    throw std::runtime_error("edge file: counts disagree with header");
  std::sort(ef.edges1.begin(), ef.edges1.end());
  std::sort(ef.edges2.begin(), ef.edges2.end());
  return ef;
}

}  // namespace chromplane
