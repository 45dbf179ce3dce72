#pragma once

// End-to-end check that no 5-coloring of the plane avoids monochromatic
// pairs at distance 1 and 2.
//
// The argument: H has exactly 35 colorings up to renaming, and in each of
// them A and B share a color. K contains H and its rotation H' about A, and
// the rotation sends B to B' at distance 1 from B. A 5-coloring of K would
// restrict to 5-colorings of both copies, giving color(B) = color(A) =
// color(B'), which the unit edge BB' forbids.

#include <cstdint>
#include <string>
#include <vector>

#include "chromplane/coloring.hpp"
#include "chromplane/graph.hpp"

namespace chromplane {

enum class Fault {
  kNone,
  kDropVertex,          // remove one vertex of V before building G and H
  kPerturbCoordinate,   // shift one seed coordinate
  kRemoveEdge,          // delete one unit edge of H
  kWrongForcingPair,    // run the forcing check on (A, X1) instead of (A, B)
};

// Accepts "none", "drop-vertex", "perturb-coordinate", "remove-edge",
// "wrong-forcing-pair". Throws std::invalid_argument otherwise.
Fault parse_fault(const std::string& name);
std::string to_string(Fault f);

struct SubCheck {
  std::string group;  // "counts", "colorings", "metric", "composition"
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
  bool skipped = false;
};

struct VerdictReport {
  std::vector<SubCheck> checks;
  bool pass = false;
  std::string first_failure;       // empty on PASS
  std::vector<std::string> derivation;  // human-readable argument steps
  // Informational: G's colorings counted up to the dihedral symmetry too.
  std::uint64_t g_colorings_up_to_symmetry = 0;
  std::string second_coincidence;  // lattice form of the non-A shared vertex
  std::string g_digest, h_digest, k_digest;
  double seconds_g = 0, seconds_h = 0;
};

struct VerifyOptions {
  int keydepth = 17;
  int shards = 1;
  int threads = 1;
  Fault fault = Fault::kNone;
};

VerdictReport verify_theorem(const VerifyOptions& opts = {});

// Number of orbits of `colorings` under vertex permutations induced by the
// order-12 dihedral group acting on g's vertex set (assumed closed).
std::uint64_t count_up_to_symmetry(const TwoDistGraph& g,
                                   const std::vector<CanonicalColoring>& colorings,
                                   const VertexOrder& order);

}  // namespace chromplane
