#pragma once

// Construction of the {1,2}-graphs G, H and K, orbit partitions, and the
// static vertex ordering used by the coloring search.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chromplane/exact_field.hpp"

namespace chromplane {

using Edge = std::pair<int, int>;  // u < v

struct EdgeSets {
  std::vector<Edge> dist1;  // squared distance exactly 1
  std::vector<Edge> dist2;  // squared distance exactly 4
};

// Points in the plane joined when their distance is exactly 1 or exactly 2.
struct TwoDistGraph {
  std::string name;
  std::vector<PlanePoint> vertices;
  std::vector<Edge> edges1;
  std::vector<Edge> edges2;
  std::map<int, std::string> labels;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int label_index(const std::string& label) const;  // -1 if absent
  std::vector<std::vector<int>> adjacency() const;   // both classes, sorted
  std::vector<int> degrees() const;
};

// The 23 seed points, in listing order.
std::vector<QuadCoord> seed_points();
// The nine points added to G to form H; A and B are the first two.
std::vector<QuadCoord> extra_points();

// Inputs to the construction; tests perturb these for negative controls.
struct ConstructionInput {
  std::vector<QuadCoord> seeds = seed_points();
  std::vector<QuadCoord> extras = extra_points();
};

// S followed by reflect_x(S) then reflect_y(S), first occurrence kept.
std::vector<PlanePoint> build_T(std::span<const PlanePoint> seeds);
// Union of the six rotations of T by k*pi/3, k = 0..5, first occurrence kept.
std::vector<PlanePoint> build_V(std::span<const PlanePoint> t);

EdgeSets classify_edges(std::span<const PlanePoint> points);

TwoDistGraph make_graph(std::string name, std::vector<PlanePoint> vertices);

TwoDistGraph build_G(const ConstructionInput& in = {});
// Labels: "A", "B", then "X1".."X7" for the remaining extra points.
TwoDistGraph build_H(const ConstructionInput& in = {});

struct KConstruction {
  TwoDistGraph k;
  // Index in k of each vertex of H and of its rotated image in H'.
  std::vector<int> h_to_k;
  std::vector<int> hprime_to_k;
  // Indices (in H) of vertices whose rotated image is itself a vertex of H.
  std::vector<std::pair<int, int>> coincidences;  // (h index, h' source index)
};

// K = V(H) union V(H'), H' the rotation of H about A by arccos(49/50).
// Labels "A", "B", "B'" (B' the image of B).
KConstruction construct_K(const ConstructionInput& in = {});
TwoDistGraph build_K(const ConstructionInput& in = {});

TwoDistGraph induced_subgraph(const TwoDistGraph& g,
                              std::span<const int> keep);

struct OrbitPartition {
  std::vector<std::vector<int>> orbits;
  std::vector<int> orbit_of;
};

// Orbits under the order-12 dihedral group. A vertex whose orbit is not
// contained in the vertex set is its own singleton orbit.
OrbitPartition orbit_partition(const TwoDistGraph& g);
// K: H's orbits for the H part, their rotated images for the rest of H'.
OrbitPartition orbit_partition(const KConstruction& kc);

struct VertexOrder {
  std::vector<int> order;  // order[i] = vertex searched at position i
};

VertexOrder order_vertices(const TwoDistGraph& g, const OrbitPartition& p);
// Same rules, but orbits emitted in the reverse of that sequence.
VertexOrder reversed_orbit_order(const TwoDistGraph& g,
                                 const OrbitPartition& p);
// Same orbit sequence, each orbit walked by decreasing polar angle.
VertexOrder clockwise_order(const TwoDistGraph& g, const OrbitPartition& p);
VertexOrder identity_order(int n);

bool is_valid_order(const VertexOrder& o, int n);

// SHA-256 (hex) over the general-form vertex file plus edge file.
std::string graph_digest(const TwoDistGraph& g);

// File formats. Lattice form throws std::domain_error when a vertex is not
// on the 1/12 lattice.
void write_lattice_vertices(std::ostream& os, const TwoDistGraph& g);
void write_general_vertices(std::ostream& os, const TwoDistGraph& g);
void write_edge_list(std::ostream& os, const TwoDistGraph& g);

// Readers throw std::runtime_error on malformed input.
std::vector<PlanePoint> read_lattice_vertices(std::istream& is);
std::vector<PlanePoint> read_general_vertices(std::istream& is);
struct EdgeFile {
  int n = 0;
  std::vector<Edge> edges1, edges2;
};
EdgeFile read_edge_list(std::istream& is);

}  // namespace chromplane
