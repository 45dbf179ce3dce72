#pragma once

// Exhaustive enumeration of proper k-colorings up to renaming of colors.
//
// The search walks vertices in a fixed order. Coloring a vertex removes its
// color from every neighbor's candidate mask; a neighbor left with a single
// candidate is colored in turn, and a neighbor left with none is a conflict.
// A decision may use any color already in play or the next unused one, so
// each color class partition is reached exactly once.
//
// Work is split at a fixed level ("keydepth"): every arrival at that level
// bumps a counter, and shard i of N only continues when counter % N == i.

#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chromplane/graph.hpp"

namespace chromplane {

using ColorMask = std::uint32_t;
inline constexpr int kMaxColors = 32;
inline constexpr int kNoColor = -1;

enum class Branching : std::uint8_t {
  kStatic,     // next uncolored vertex in the given order
  kFailFirst,  // uncolored vertex with the fewest candidates, order breaks ties
};

enum class Propagation : std::uint8_t {
  kFull,  // candidate masks + recursive forcing
  kNone,  // plain backtracking against colored neighbors
};

std::string to_string(Branching b);
std::string to_string(Propagation p);

struct SearchConfig {
  int k = 5;
  int keydepth = 17;
  int shard_id = 0;
  int shard_count = 1;
  Branching branching = Branching::kStatic;
  Propagation propagation = Propagation::kFull;
  // Search nodes between checkpoints; 0 disables periodic checkpoints.
  std::uint64_t checkpoint_interval = 0;
  // Stop (with a checkpoint) after this many nodes; 0 means no limit.
  std::uint64_t node_limit = 0;
  bool collect = true;  // keep colorings in the result

  // Throws std::invalid_argument.
  void validate(int n) const;
};

// Colors indexed by graph vertex. Canonical: scanning the search order, the
// first occurrences of colors are 0, 1, 2, ... without gaps.
struct CanonicalColoring {
  std::vector<std::uint8_t> colors;

  friend auto operator<=>(const CanonicalColoring&,
                          const CanonicalColoring&) = default;
  friend bool operator==(const CanonicalColoring&,
                         const CanonicalColoring&) = default;
};

// Renames colors by first occurrence along `order`.
CanonicalColoring canonicalize(std::span<const int> colors,
                               const VertexOrder& order);
bool is_proper(const TwoDistGraph& g, std::span<const std::uint8_t> colors);
bool is_canonical(const CanonicalColoring& c, const VertexOrder& order);

// Coloring state with an undo trail. Vertex ids are graph ids.
class SearchState {
 public:
  SearchState(const TwoDistGraph& g, int k,
              Propagation prop = Propagation::kFull);

  // Colors v with c and propagates. Always opens an undo frame, so every
  // assign must be matched by an unassign, also when it returns false.
  bool assign(int v, int c);
  void unassign(int v, int c);

  int num_vertices() const { return static_cast<int>(color_.size()); }
  int k() const { return k_; }
  int color(int v) const { return color_[v]; }
  ColorMask candidates(int v) const { return mask_[v]; }
  int max_used() const { return max_used_; }
  std::size_t depth() const { return frames_.size(); }
  bool all_colored() const { return colored_ == num_vertices(); }

  struct Snapshot {
    std::vector<int> color;
    std::vector<ColorMask> mask;
    int max_used;
    friend bool operator==(const Snapshot&, const Snapshot&) = default;
  };
  Snapshot snapshot() const { return {color_, mask_, max_used_}; }

 private:
  struct TrailEntry {
    int vertex;
    ColorMask mask;
    int color;
  };
  struct Frame {
    std::size_t trail_mark;
    int max_used;
    int colored;
    int vertex;
  };

  void set_color(int v, int c);
  void set_mask(int v, ColorMask m);

  int k_;
  Propagation prop_;
  std::vector<int> adj_start_;
  std::vector<int> adj_;
  std::vector<int> color_;
  std::vector<ColorMask> mask_;
  int max_used_ = -1;
  int colored_ = 0;
  std::vector<TrailEntry> trail_;
  std::vector<Frame> frames_;
  std::vector<int> queue_;
};

// Resumable search position. Serialized as a versioned binary blob.
struct Checkpoint {
  struct Decision {
    int vertex;
    int color;
    ColorMask remaining;  // colors still to try at this decision
    friend bool operator==(const Decision&, const Decision&) = default;
  };
  int n = 0;
  int k = 0;
  int keydepth = 0;
  int shard_id = 0;
  int shard_count = 1;
  Branching branching = Branching::kStatic;
  Propagation propagation = Propagation::kFull;
  std::string order_digest;
  std::uint64_t calls = 0;
  std::uint64_t nodes = 0;
  std::uint64_t count = 0;
  std::vector<Decision> stack;
  std::vector<CanonicalColoring> colorings;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

void write_checkpoint(std::ostream& os, const Checkpoint& cp);
// Throws std::runtime_error on a bad magic, version or truncated blob.
Checkpoint read_checkpoint(std::istream& is);
// Writes to a temporary file and renames it over `path`.
void save_checkpoint_file(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint_file(const std::string& path);

std::string order_digest(const VertexOrder& order);

struct SearchHooks {
  std::function<void(const CanonicalColoring&)> on_coloring;
  std::function<void(const Checkpoint&)> on_checkpoint;
  // Polled between nodes; when set, the search checkpoints and returns.
  const std::atomic<bool>* stop = nullptr;
};

struct SearchResult {
  std::uint64_t count = 0;
  std::vector<CanonicalColoring> colorings;  // sorted when collected
  std::uint64_t nodes = 0;
  std::uint64_t calls = 0;
  bool complete = true;
};

SearchResult enumerate_colorings(const TwoDistGraph& g,
                                 const VertexOrder& order,
                                 const SearchConfig& cfg,
                                 const SearchHooks& hooks = {},
                                 const Checkpoint* resume = nullptr);

struct ShardedResult {
  std::uint64_t count = 0;
  std::vector<CanonicalColoring> colorings;  // union, sorted
  std::vector<SearchResult> shards;
};

// Runs shards 0..cfg.shard_count-1 on `threads` workers and merges them.
// cfg.shard_id is ignored.
ShardedResult enumerate_sharded(const TwoDistGraph& g, const VertexOrder& order,
                                const SearchConfig& cfg, int threads);

bool check_forced_same_color(std::span<const CanonicalColoring> colorings,
                             int u, int v);

// Independent oracle: tries every restricted-growth labeling (colors in
// first-occurrence order along vertex ids) and tests each for properness.
// Throws std::invalid_argument above 14 vertices.
std::uint64_t brute_force_count(const TwoDistGraph& g, int k);

// Coloring file: header "n k count", then one line of n colors per coloring.
void write_colorings(std::ostream& os, int n, int k,
                     std::span<const CanonicalColoring> colorings);
struct ColoringFile {
  int n = 0;
  int k = 0;
  std::vector<CanonicalColoring> colorings;
};
ColoringFile read_colorings(std::istream& is);

}  // namespace chromplane
