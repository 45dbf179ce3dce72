#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "chromplane/coloring.hpp"
#include "test_support.hpp"

namespace chromplane {
namespace {

using testing::dense_subgraph;
using testing::graph_of;

// origin, then points at distance 1 and 2 along one line: a mixed triangle
TwoDistGraph triangle() {
  return graph_of({{0, 0, 0, 0}, {-2, 0, 0, -2}, {-4, 0, 0, -4}});
}

// u - v - w with u, w at squared distance about 0.085
TwoDistGraph path3() {
  return graph_of({{0, 0, 0, 0}, {-2, 0, 0, -2}, {-2, 0, 12, -2}});
}

// Labeled colorings by plain k^n loop, divided by the number of ways to
// rename the colors actually used.
std::uint64_t labeled_quotient(const TwoDistGraph& g, int k) {
  const int n = g.num_vertices();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= k;
  std::vector<std::uint64_t> by_used(k + 1, 0);
  std::vector<int> c(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t x = code;
    for (int i = 0; i < n; ++i) {
      c[i] = static_cast<int>(x % k);
      x /= k;
    }
    bool ok = true;
    for (const auto* es : {&g.edges1, &g.edges2})
      for (auto [u, v] : *es) ok = ok && c[u] != c[v];
    if (!ok) continue;
    std::set<int> used(c.begin(), c.end());
    ++by_used[used.size()];
  }
  std::uint64_t out = 0;
  for (int j = 1; j <= k; ++j) {
    std::uint64_t perms = 1;  // k! / (k-j)!
    for (int i = 0; i < j; ++i) perms *= k - i;
    out += by_used[j] / perms;
  }
  return n == 0 ? 1 : out;
}

std::vector<CanonicalColoring> run_set(const TwoDistGraph& g, const VertexOrder& o,
                                       SearchConfig cfg) {
  return enumerate_colorings(g, o, cfg).colorings;
}

TEST(SearchState, AssignIsolatedVertex) {
  TwoDistGraph g = graph_of({{0, 0, 0, 0}});
  SearchState s(g, 5);
  EXPECT_TRUE(s.assign(0, 3));
  EXPECT_EQ(s.color(0), 3);
  EXPECT_TRUE(s.all_colored());
}

TEST(SearchState, ForcingAlongPath) {
  TwoDistGraph g = path3();
  ASSERT_EQ(g.edges1.size(), 2u);
  ASSERT_TRUE(g.edges2.empty());
  SearchState s(g, 2);
  ASSERT_TRUE(s.assign(0, 0));
  EXPECT_EQ(s.color(1), 1);  // single candidate left
  EXPECT_EQ(s.color(2), 0);
  EXPECT_TRUE(s.all_colored());
}

TEST(SearchState, ExplicitAssignForcesTail) {
  TwoDistGraph g = path3();
  SearchState s(g, 3);
  ASSERT_TRUE(s.assign(0, 0));
  EXPECT_EQ(s.color(1), kNoColor);
  ASSERT_TRUE(s.assign(1, 1));
  EXPECT_EQ(s.candidates(2), ColorMask{0b101});
}

TEST(SearchState, TriangleWithTwoColorsConflicts) {
  TwoDistGraph g = triangle();
  SearchState s(g, 2);
  EXPECT_FALSE(s.assign(0, 0));
  s.unassign(0, 0);
  EXPECT_EQ(s.depth(), 0u);
}

TEST(SearchState, UnassignRestoresSnapshot) {
  TwoDistGraph g = build_G();
  SearchState s(g, 5);
  auto before = s.snapshot();
  ASSERT_TRUE(s.assign(0, 0));
  s.unassign(0, 0);
  EXPECT_EQ(s.snapshot(), before);
}

TEST(SearchState, NestedUnwindLifo) {
  TwoDistGraph g = build_G();
  auto order = order_vertices(g, orbit_partition(g));
  SearchState s(g, 5);
  auto before = s.snapshot();
  std::vector<std::pair<int, int>> done;
  std::vector<SearchState::Snapshot> snaps;
  for (int i = 0; i < 12; ++i) {
    const int v = order.order[i];
    if (s.color(v) != kNoColor) continue;
    const int c = std::countr_zero(s.candidates(v));
    snaps.push_back(s.snapshot());
    const bool ok = s.assign(v, c);
    done.push_back({v, c});
    if (!ok) break;
  }
  ASSERT_FALSE(done.empty());
  while (!done.empty()) {
    s.unassign(done.back().first, done.back().second);
    done.pop_back();
    EXPECT_EQ(s.snapshot(), snaps.back());
    snaps.pop_back();
  }
  EXPECT_EQ(s.snapshot(), before);
}

TEST(SearchState, ReassignIsDeterministic) {
  TwoDistGraph g = build_H();
  SearchState s(g, 5);
  ASSERT_TRUE(s.assign(3, 0));
  auto once = s.snapshot();
  s.unassign(3, 0);
  ASSERT_TRUE(s.assign(3, 0));
  EXPECT_EQ(s.snapshot(), once);
}

TEST(Enumerate, SmallExamples) {
  SearchConfig cfg;
  cfg.keydepth = 0;
  TwoDistGraph edge = graph_of({{0, 0, 0, 0}, {-2, 0, 0, -2}});
  auto r = enumerate_colorings(edge, identity_order(2), cfg);
  EXPECT_EQ(r.count, 1u);
  EXPECT_EQ(r.colorings[0].colors, (std::vector<std::uint8_t>{0, 1}));

  EXPECT_EQ(enumerate_colorings(triangle(), identity_order(3), cfg).count, 1u);
  EXPECT_EQ(labeled_quotient(triangle(), 5), 1u);

  TwoDistGraph empty = make_graph("empty", {});
  EXPECT_EQ(enumerate_colorings(empty, identity_order(0), cfg).count, 1u);

  SearchConfig k0 = cfg;
  k0.k = 0;
  EXPECT_EQ(enumerate_colorings(edge, identity_order(2), k0).count, 0u);
}

TEST(Enumerate, RejectsBadInput) {
  TwoDistGraph g = triangle();
  SearchConfig cfg;
  cfg.keydepth = 2;
  EXPECT_THROW(enumerate_colorings(g, VertexOrder{{0, 0, 1}}, cfg),
               std::invalid_argument);
  SearchConfig bad = cfg;
  bad.shard_id = 3;
  bad.shard_count = 3;
  EXPECT_THROW(enumerate_colorings(g, identity_order(3), bad), std::invalid_argument);
  bad = cfg;
  bad.keydepth = 4;
  EXPECT_THROW(enumerate_colorings(g, identity_order(3), bad), std::invalid_argument);
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_count(graph_of({{0, 0, 0, 0}}), 5), 1u);
  EXPECT_EQ(brute_force_count(triangle(), 3), 1u);
  EXPECT_EQ(brute_force_count(triangle(), 2), 0u);
  EXPECT_EQ(brute_force_count(path3(), 2), 1u);
  EXPECT_EQ(brute_force_count(path3(), 3), 2u);
  TwoDistGraph g = build_G();
  std::vector<int> keep(15);
  std::iota(keep.begin(), keep.end(), 0);
  EXPECT_THROW(brute_force_count(induced_subgraph(g, keep), 5), std::invalid_argument);
}

TEST(BruteForce, AgreesWithLabeledQuotient) {
  TwoDistGraph g = build_G();
  std::mt19937 rng(17);
  std::vector<int> all(g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> keep(all.begin(), all.begin() + 7);
    std::sort(keep.begin(), keep.end());
    auto sub = induced_subgraph(g, keep);
    for (int k : {2, 3, 4})
      EXPECT_EQ(brute_force_count(sub, k), labeled_quotient(sub, k));
  }
}

// Random induced subgraphs of G, grown from a random vertex so they are not
// mostly edgeless.
std::vector<TwoDistGraph> random_subgraphs(int count, unsigned seed) {
  TwoDistGraph g = build_G();
  const auto adj = g.adjacency();
  std::mt19937 rng(seed);
  std::vector<TwoDistGraph> out;
  for (int t = 0; t < count; ++t) {
    const int m = 4 + static_cast<int>(rng() % 9);  // 4..12
    std::vector<int> keep{static_cast<int>(rng() % g.num_vertices())};
    while (static_cast<int>(keep.size()) < m) {
      std::vector<int> frontier;
      for (int v : keep)
        for (int u : adj[v])
          if (std::find(keep.begin(), keep.end(), u) == keep.end()) frontier.push_back(u);
      if (frontier.empty() || rng() % 4 == 0)
        frontier.push_back(static_cast<int>(rng() % g.num_vertices()));
      const int pick = frontier[rng() % frontier.size()];
      if (std::find(keep.begin(), keep.end(), pick) == keep.end()) keep.push_back(pick);
    }
    std::sort(keep.begin(), keep.end());
    out.push_back(induced_subgraph(g, keep));
  }
  return out;
}

TEST(Enumerate, MatchesBruteForceOnRandomSubgraphs) {
  auto subs = random_subgraphs(60, 23);
  for (const auto& sub : subs) {
    const int n = sub.num_vertices();
    auto order = order_vertices(sub, orbit_partition(sub));
    for (int k : {2, 3, 5}) {
      SearchConfig cfg;
      cfg.k = k;
      cfg.keydepth = n / 2;
      auto r = enumerate_colorings(sub, order, cfg);
      ASSERT_EQ(r.count, brute_force_count(sub, k)) << "n=" << n << " k=" << k;
      for (const auto& c : r.colorings) {
        EXPECT_TRUE(is_proper(sub, c.colors));
        EXPECT_TRUE(is_canonical(c, order));
      }
    }
  }
}

TEST(Enumerate, PropagationNeutral) {
  for (const auto& sub : random_subgraphs(30, 29)) {
    auto order = identity_order(sub.num_vertices());
    for (int k : {3, 4, 5}) {
      SearchConfig full;
      full.k = k;
      full.keydepth = 0;
      SearchConfig none = full;
      none.propagation = Propagation::kNone;
      EXPECT_EQ(run_set(sub, order, full), run_set(sub, order, none));
    }
  }
}

TEST(Enumerate, FailFirstSameSet) {
  for (const auto& sub : random_subgraphs(30, 31)) {
    auto order = order_vertices(sub, orbit_partition(sub));
    SearchConfig st;
    st.keydepth = 3;
    SearchConfig ff = st;
    ff.branching = Branching::kFailFirst;
    EXPECT_EQ(run_set(sub, order, st), run_set(sub, order, ff));
  }
}

class ShardTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    sub_ = new TwoDistGraph(dense_subgraph(build_G(), testing::kShardStart,
                                           testing::kShardSize));
    order_ = new VertexOrder(order_vertices(*sub_, orbit_partition(*sub_)));
  }
  static void TearDownTestSuite() {
    delete sub_;
    delete order_;
  }
  static SearchConfig config() {
    SearchConfig cfg;
    cfg.k = testing::kShardColors;
    cfg.keydepth = 12;
    return cfg;
  }
  static inline TwoDistGraph* sub_ = nullptr;
  static inline VertexOrder* order_ = nullptr;
};

TEST_F(ShardTest, PartitionAcrossShardCounts) {
  ASSERT_EQ(sub_->num_vertices(), testing::kShardSize);
  auto whole = enumerate_colorings(*sub_, *order_, config());
  ASSERT_EQ(whole.count, testing::kShardCount);
  for (int n : {1, 2, 3, 7}) {
    std::vector<CanonicalColoring> all;
    std::uint64_t total = 0;
    for (int i = 0; i < n; ++i) {
      SearchConfig cfg = config();
      cfg.shard_id = i;
      cfg.shard_count = n;
      auto r = enumerate_colorings(*sub_, *order_, cfg);
      total += r.count;
      all.insert(all.end(), r.colorings.begin(), r.colorings.end());
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(total, whole.count) << n;
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end()) << n;
    EXPECT_EQ(all, whole.colorings) << n;
  }
}

TEST_F(ShardTest, ThreadedMatchesSequential) {
  SearchConfig cfg = config();
  cfg.shard_count = 7;
  auto a = enumerate_sharded(*sub_, *order_, cfg, 1);
  auto b = enumerate_sharded(*sub_, *order_, cfg, 4);
  EXPECT_EQ(a.count, testing::kShardCount);
  EXPECT_EQ(a.colorings, b.colorings);
  for (std::size_t i = 0; i < a.shards.size(); ++i)
    EXPECT_EQ(a.shards[i].colorings, b.shards[i].colorings);
}

TEST_F(ShardTest, ResumeAfterInterruptEqualsUninterrupted) {
  SearchConfig cfg = config();
  cfg.shard_id = 1;
  cfg.shard_count = 3;
  auto whole = enumerate_colorings(*sub_, *order_, cfg);

  SearchConfig limited = cfg;
  limited.node_limit = whole.nodes / 3;
  std::optional<Checkpoint> last;
  SearchHooks hooks;
  hooks.on_checkpoint = [&](const Checkpoint& cp) { last = cp; };
  auto part = enumerate_colorings(*sub_, *order_, limited, hooks);
  ASSERT_FALSE(part.complete);
  ASSERT_TRUE(last.has_value());

  std::stringstream blob;
  write_checkpoint(blob, *last);
  Checkpoint back = read_checkpoint(blob);
  EXPECT_EQ(back, *last);

  auto rest = enumerate_colorings(*sub_, *order_, cfg, {}, &back);
  EXPECT_TRUE(rest.complete);
  EXPECT_EQ(rest.count, whole.count);
  EXPECT_EQ(rest.colorings, whole.colorings);
  EXPECT_EQ(rest.calls, whole.calls);
}

TEST_F(ShardTest, PeriodicCheckpointsResumeAnywhere) {
  SearchConfig cfg = config();
  cfg.collect = false;
  auto whole = enumerate_colorings(*sub_, *order_, cfg);
  SearchConfig periodic = cfg;
  periodic.checkpoint_interval = whole.nodes / 5;
  std::vector<Checkpoint> cps;
  SearchHooks hooks;
  hooks.on_checkpoint = [&](const Checkpoint& cp) { cps.push_back(cp); };
  auto r = enumerate_colorings(*sub_, *order_, periodic, hooks);
  EXPECT_EQ(r.count, whole.count);
  ASSERT_GE(cps.size(), 3u);
  for (const auto& cp : cps)
    EXPECT_EQ(enumerate_colorings(*sub_, *order_, periodic, {}, &cp).count, whole.count);
}

TEST_F(ShardTest, MismatchedCheckpointRejected) {
  SearchConfig cfg = config();
  cfg.node_limit = 1000;
  std::optional<Checkpoint> last;
  SearchHooks hooks;
  hooks.on_checkpoint = [&](const Checkpoint& cp) { last = cp; };
  enumerate_colorings(*sub_, *order_, cfg, hooks);
  ASSERT_TRUE(last.has_value());
  SearchConfig other = config();
  other.k = 5;
  EXPECT_THROW(enumerate_colorings(*sub_, *order_, other, {}, &*last),
               std::invalid_argument);
  EXPECT_THROW(enumerate_colorings(*sub_, identity_order(sub_->num_vertices()),
                                   config(), {}, &*last),
               std::invalid_argument);
}

TEST(Checkpoint, BadBlobsThrow) {
  std::stringstream bad("NOTACKPT and some bytes");
  EXPECT_THROW(read_checkpoint(bad), std::runtime_error);
  Checkpoint cp;
  cp.n = 3;
  cp.k = 5;
  cp.stack.push_back({1, 2, 0b1000});
  std::stringstream ok;
  write_checkpoint(ok, cp);
  std::string s = ok.str();
  std::stringstream truncated(s.substr(0, s.size() - 3));
  EXPECT_THROW(read_checkpoint(truncated), std::runtime_error);
  std::string wrong_version = s;
  wrong_version[8] = 99;
  std::stringstream wv(wrong_version);
  EXPECT_THROW(read_checkpoint(wv), std::runtime_error);
}

TEST(ColoringLong, GCountIsOrderIndependent) {
  TwoDistGraph g = build_G();
  auto part = orbit_partition(g);
  auto ccw = order_vertices(g, part);
  auto cw = clockwise_order(g, part);
  ASSERT_NE(ccw.order, cw.order);
  SearchConfig cfg;
  auto a = enumerate_colorings(g, ccw, cfg);
  auto b = enumerate_colorings(g, cw, cfg);
  EXPECT_EQ(a.count, 18u);
  EXPECT_EQ(b.count, 18u);
  for (const auto& c : b.colorings) {
    EXPECT_TRUE(is_proper(g, c.colors));
    EXPECT_TRUE(is_canonical(c, cw));
  }
  // Same partitions into color classes, different representatives.
  std::vector<CanonicalColoring> renamed;
  for (const auto& c : b.colorings) {
    std::vector<int> raw(c.colors.begin(), c.colors.end());
    renamed.push_back(canonicalize(raw, ccw));
  }
  std::sort(renamed.begin(), renamed.end());
  EXPECT_EQ(renamed, a.colorings);
  EXPECT_NE(a.colorings, b.colorings);
}

TEST(ForcedSameColor, Examples) {
  TwoDistGraph edge = graph_of({{0, 0, 0, 0}, {-2, 0, 0, -2}});
  SearchConfig cfg;
  cfg.keydepth = 0;
  auto r = enumerate_colorings(edge, identity_order(2), cfg);
  EXPECT_FALSE(check_forced_same_color(r.colorings, 0, 1));
  EXPECT_TRUE(check_forced_same_color(r.colorings, 1, 1));
  auto p = enumerate_colorings(path3(), identity_order(3), cfg);
  EXPECT_FALSE(check_forced_same_color(p.colorings, 0, 2));  // {0,1,0} and {0,1,2}
  SearchConfig two = cfg;
  two.k = 2;
  auto q = enumerate_colorings(path3(), identity_order(3), two);
  EXPECT_TRUE(check_forced_same_color(q.colorings, 0, 2));
}

TEST(ColoringFile, RoundTrip) {
  std::vector<CanonicalColoring> cs{{{0, 1, 0}}, {{0, 1, 2}}};
  std::stringstream ss;
  write_colorings(ss, 3, 5, cs);
  EXPECT_EQ(ss.str().substr(0, 6), "3 5 2\n");
  auto back = read_colorings(ss);
  EXPECT_EQ(back.n, 3);
  EXPECT_EQ(back.k, 5);
  EXPECT_EQ(back.colorings, cs);
  std::stringstream short_file("3 5 2\n0 1 0\n");
  EXPECT_THROW(read_colorings(short_file), std::runtime_error);
}

TEST(Canonicalize, RenamesByFirstOccurrence) {
  std::vector<int> colors{3, 1, 3, 4};
  auto c = canonicalize(colors, identity_order(4));
  EXPECT_EQ(c.colors, (std::vector<std::uint8_t>{0, 1, 0, 2}));
  auto r = canonicalize(colors, VertexOrder{{3, 2, 1, 0}});
  EXPECT_EQ(r.colors, (std::vector<std::uint8_t>{1, 2, 1, 0}));
  EXPECT_TRUE(is_canonical(r, VertexOrder{{3, 2, 1, 0}}));
  EXPECT_FALSE(is_canonical(r, identity_order(4)));
}

}  // namespace
}  // namespace chromplane
