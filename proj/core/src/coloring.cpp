#include "chromplane/coloring.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace chromplane {

std::string to_string(Branching b) {
  return b == Branching::kStatic ? "static" : "fail-first";
}

std::string to_string(Propagation p) {
  return p == Propagation::kFull ? "full" : "none";
}

void SearchConfig::validate(int n) const {
  if (k < 0 || k > kMaxColors)
    throw std::invalid_argument("k must be in [0, 32]");
  if (shard_count < 1) throw std::invalid_argument("shard count must be >= 1");
  if (shard_id < 0 || shard_id >= shard_count)
    throw std::invalid_argument("shard id must be in [0, shard count)");
  if (keydepth < 0 || keydepth > n)
    throw std::invalid_argument("keydepth must be in [0, n]");
}

namespace {

ColorMask full_mask(int k) {
  return k >= 32 ? ~ColorMask{0} : (ColorMask{1} << k) - 1;
}

}  // namespace

CanonicalColoring canonicalize(std::span<const int> colors,
                               const VertexOrder& order) {
  std::vector<int> rename(kMaxColors, -1);
  int next = 0;
  CanonicalColoring out;
  out.colors.assign(colors.size(), 0);
  for (int v : order.order) {
    int c = colors[v];
    if (c < 0 || c >= kMaxColors)
      throw std::invalid_argument("canonicalize: uncolored vertex");
    if (rename[c] < 0) rename[c] = next++;
    out.colors[v] = static_cast<std::uint8_t>(rename[c]);
  }
  return out;
}

bool is_proper(const TwoDistGraph& g, std::span<const std::uint8_t> colors) {
  if (static_cast<int>(colors.size()) != g.num_vertices()) return false;
  for (const auto* edges : {&g.edges1, &g.edges2})
    for (auto [u, v] : *edges)
      if (colors[u] == colors[v]) return false;
  return true;
}

bool is_canonical(const CanonicalColoring& c, const VertexOrder& order) {
  int next = 0;
  for (int v : order.order) {
    int col = c.colors[v];
    if (col > next) return false;
    if (col == next) ++next;
  }
  return true;
}

// ---------------------------------------------------------------------------
// SearchState

SearchState::SearchState(const TwoDistGraph& g, int k, Propagation prop)
    : k_(k), prop_(prop) {
  if (k < 0 || k > kMaxColors)
    throw std::invalid_argument("SearchState: k must be in [0, 32]");
  const int n = g.num_vertices();
  auto adj = g.adjacency();
  adj_start_.reserve(n + 1);
  adj_start_.push_back(0);
  for (const auto& a : adj) {
    adj_.insert(adj_.end(), a.begin(), a.end());
    adj_start_.push_back(static_cast<int>(adj_.size()));
  }
  color_.assign(n, kNoColor);
  mask_.assign(n, full_mask(k));
  queue_.reserve(n);
}

void SearchState::set_color(int v, int c) {
  trail_.push_back({v, mask_[v], color_[v]});
  color_[v] = c;
  mask_[v] = ColorMask{1} << c;
  max_used_ = std::max(max_used_, c);
  ++colored_;
}

void SearchState::set_mask(int v, ColorMask m) {
  trail_.push_back({v, mask_[v], color_[v]});
  mask_[v] = m;
}

bool SearchState::assign(int v, int c) {
  frames_.push_back({trail_.size(), max_used_, colored_, v});
  if (color_[v] != kNoColor || c < 0 || c >= k_ || !(mask_[v] >> c & 1))
    return false;

  if (prop_ == Propagation::kNone) {
    for (int i = adj_start_[v]; i < adj_start_[v + 1]; ++i)
      if (color_[adj_[i]] == c) return false;
    set_color(v, c);
    return true;
  }

  set_color(v, c);
  queue_.clear();
  queue_.push_back(v);
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const int x = queue_[head];
    const ColorMask bit = ColorMask{1} << color_[x];
    for (int i = adj_start_[x]; i < adj_start_[x + 1]; ++i) {
      const int u = adj_[i];
      if (!(mask_[u] & bit)) continue;
      const ColorMask m = mask_[u] & ~bit;
      if (m == 0) return false;
      set_mask(u, m);
      if (color_[u] == kNoColor && std::has_single_bit(m)) {
        set_color(u, std::countr_zero(m));
        queue_.push_back(u);
      }
    }
  }
  return true;
}

void SearchState::unassign(int v, int c) {
  (void)c;
  if (frames_.empty() || frames_.back().vertex != v)
    throw std::logic_error("unassign does not match the last assign");
  const Frame f = frames_.back();
  frames_.pop_back();
  while (trail_.size() > f.trail_mark) {
    const TrailEntry& e = trail_.back();
    mask_[e.vertex] = e.mask;
    color_[e.vertex] = e.color;
    trail_.pop_back();
  }
  max_used_ = f.max_used;
  colored_ = f.colored;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr char kMagic[8] = {'C', 'H', 'P', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

class BlobWriter {
 public:
  explicit BlobWriter(std::ostream& os) : os_(os) {}
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os_.write(reinterpret_cast<const char*>(b), 8);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    os_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& os_;
};

class BlobReader {
 public:
  explicit BlobReader(std::istream& is) : is_(is) {}
  std::uint64_t u64() {
    unsigned char b[8];
    if (!is_.read(reinterpret_cast<char*>(b), 8))
      throw std::runtime_error("checkpoint: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::string str() {
    std::uint64_t len = u64();
    if (len > (1u << 20)) throw std::runtime_error("checkpoint: bad string");
    std::string s(len, '\0');
    if (!is_.read(s.data(), static_cast<std::streamsize>(len)))
      throw std::runtime_error("checkpoint: truncated");
    return s;
  }

 private:
  std::istream& is_;
};

}  // namespace

void write_checkpoint(std::ostream& os, const Checkpoint& cp) {
  os.write(kMagic, sizeof kMagic);
  BlobWriter w(os);
  w.u64(kCheckpointVersion);
  w.i64(cp.n);
  w.i64(cp.k);
  w.i64(cp.keydepth);
  w.i64(cp.shard_id);
  w.i64(cp.shard_count);
  w.u64(static_cast<std::uint64_t>(cp.branching));
  w.u64(static_cast<std::uint64_t>(cp.propagation));
  w.str(cp.order_digest);
  w.u64(cp.calls);
  w.u64(cp.nodes);
  w.u64(cp.count);
  w.u64(cp.stack.size());
  for (const auto& d : cp.stack) {
    w.i64(d.vertex);
    w.i64(d.color);
    w.u64(d.remaining);
  }
  w.u64(cp.colorings.size());
  for (const auto& c : cp.colorings)
    w.str(std::string(c.colors.begin(), c.colors.end()));
}

Checkpoint read_checkpoint(std::istream& is) {
  char magic[sizeof kMagic];
  if (!is.read(magic, sizeof magic) ||
      std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  BlobReader r(is);
  if (r.u64() != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version");
  Checkpoint cp;
  cp.n = static_cast<int>(r.i64());
  cp.k = static_cast<int>(r.i64());
  cp.keydepth = static_cast<int>(r.i64());
  cp.shard_id = static_cast<int>(r.i64());
  cp.shard_count = static_cast<int>(r.i64());
  cp.branching = static_cast<Branching>(r.u64());
  cp.propagation = static_cast<Propagation>(r.u64());
  cp.order_digest = r.str();
  cp.calls = r.u64();
  cp.nodes = r.u64();
  cp.count = r.u64();
  std::uint64_t depth = r.u64();
  if (depth > static_cast<std::uint64_t>(std::max(cp.n, 0)))
    throw std::runtime_error("checkpoint: stack deeper than graph");
  for (std::uint64_t i = 0; i < depth; ++i) {
    Checkpoint::Decision d;
    d.vertex = static_cast<int>(r.i64());
    d.color = static_cast<int>(r.i64());
    d.remaining = static_cast<ColorMask>(r.u64());
    cp.stack.push_back(d);
  }
  std::uint64_t ncol = r.u64();
  for (std::uint64_t i = 0; i < ncol; ++i) {
    std::string s = r.str();
    cp.colorings.push_back({std::vector<std::uint8_t>(s.begin(), s.end())});
  }
  return cp;
}

void save_checkpoint_file(const std::string& path, const Checkpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write checkpoint: " + tmp);
    write_checkpoint(os, cp);
    os.flush();
    if (!os) throw std::runtime_error("cannot write checkpoint: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read checkpoint: " + path);
  return read_checkpoint(is);
}

std::string order_digest(const VertexOrder& order) {
  std::ostringstream os;
  for (int v : order.order) os << v << ',';
  const std::string data = os.str();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << int{md[i]};
  return hex.str();
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

class Enumerator {
 public:
  Enumerator(const TwoDistGraph& g, const VertexOrder& order,
             const SearchConfig& cfg, const SearchHooks& hooks)
      : order_(order),
        cfg_(cfg),
        hooks_(hooks),
        state_(g, cfg.k, cfg.propagation),
        n_(g.num_vertices()),
        pos_of_(g.num_vertices()) {
    for (int i = 0; i < n_; ++i) pos_of_[order.order[i]] = i;
  }

  SearchResult run(const Checkpoint* resume) {
    if (resume) {
      restore(*resume);
      arrive(stack_.empty() ? -1 : stack_.back().pos);
    } else {
      arrive(-1);
    }

    while (!stack_.empty()) {
      Frame& f = stack_.back();
      if (f.color != kNoColor) {
        state_.unassign(f.vertex, f.color);
        f.color = kNoColor;
      }
      if (f.remaining == 0) {
        stack_.pop_back();
        continue;
      }
      const int c = std::countr_zero(f.remaining);
      f.remaining &= f.remaining - 1;
      f.color = c;
      if (!state_.assign(f.vertex, c)) continue;

      const int pos = f.pos;
      if (should_pause()) {
        emit_checkpoint();
        if (paused_) break;
      }
      arrive(pos);
    }

    if (!paused_) result_.complete = true;
    if (cfg_.collect)
      std::sort(result_.colorings.begin(), result_.colorings.end());
    return std::move(result_);
  }

 private:
  struct Frame {
    int vertex;
    int pos;
    ColorMask remaining;
    int color;
  };

  // Called on entering a search node, after the decision at static position
  // `from` (or -1 at the root). Pushes the next decision frame if any.
  void arrive(int from) {
    ++result_.nodes;
    int v = -1;
    int p = n_;
    if (cfg_.branching == Branching::kStatic) {
      for (p = from + 1; p < n_; ++p)
        if (state_.color(order_.order[p]) == kNoColor) break;
      if (p < n_) v = order_.order[p];
    } else {
      v = fail_first();
      if (v >= 0) p = pos_of_[v];
    }
    const bool leaf = v < 0;

    bool gate;
    if (cfg_.branching == Branching::kStatic) {
      // Levels from+1 .. p are passed, forced vertices included.
      gate = cfg_.keydepth > from && cfg_.keydepth <= (leaf ? n_ : p);
    } else {
      const int depth = static_cast<int>(stack_.size());
      gate = depth == cfg_.keydepth || (leaf && depth < cfg_.keydepth);
    }
    if (gate) {
      ++result_.calls;
      if (result_.calls % static_cast<std::uint64_t>(cfg_.shard_count) !=
          static_cast<std::uint64_t>(cfg_.shard_id))
        return;
    }

    if (leaf) {
      emit_leaf();
      return;
    }
    const int limit = std::min(state_.max_used() + 1, cfg_.k - 1);
    const ColorMask allowed = limit < 0 ? 0 : full_mask(limit + 1);
    stack_.push_back({v, p, state_.candidates(v) & allowed, kNoColor});
  }

  int fail_first() const {
    const int limit = std::min(state_.max_used() + 1, cfg_.k - 1);
    const ColorMask allowed = limit < 0 ? 0 : full_mask(limit + 1);
    int best = -1, best_count = kMaxColors + 1;
    for (int p = 0; p < n_; ++p) {
      const int v = order_.order[p];
      if (state_.color(v) != kNoColor) continue;
      const int cnt = std::popcount(state_.candidates(v) & allowed);
      if (cnt < best_count) {
        best = v;
        best_count = cnt;
        if (cnt <= 1) break;
      }
    }
    return best;
  }

  void emit_leaf() {
    ++result_.count;
    if (!cfg_.collect && !hooks_.on_coloring) return;
    std::vector<int> colors(n_);
    for (int v = 0; v < n_; ++v) colors[v] = state_.color(v);
    CanonicalColoring c;
    if (cfg_.branching == Branching::kStatic) {
      c.colors.assign(colors.begin(), colors.end());
    } else {
      c = canonicalize(colors, order_);
    }
    if (hooks_.on_coloring) hooks_.on_coloring(c);
    if (cfg_.collect) result_.colorings.push_back(std::move(c));
  }

  bool should_pause() {
    const bool stop =
        hooks_.stop && hooks_.stop->load(std::memory_order_relaxed);
    const bool limit = cfg_.node_limit && result_.nodes >= cfg_.node_limit;
    if (stop || limit) {
      paused_ = true;
      result_.complete = false;
      return true;
    }
    return cfg_.checkpoint_interval &&
           result_.nodes - last_checkpoint_ >= cfg_.checkpoint_interval;
  }

  Checkpoint snapshot() const {
    Checkpoint cp;
    cp.n = n_;
    cp.k = cfg_.k;
    cp.keydepth = cfg_.keydepth;
    cp.shard_id = cfg_.shard_id;
    cp.shard_count = cfg_.shard_count;
    cp.branching = cfg_.branching;
    cp.propagation = cfg_.propagation;
    cp.order_digest = order_digest(order_);
    cp.calls = result_.calls;
    cp.nodes = result_.nodes;
    cp.count = result_.count;
    for (const auto& f : stack_) cp.stack.push_back({f.vertex, f.color, f.remaining});
    cp.colorings = result_.colorings;
    return cp;
  }

  void emit_checkpoint() {
    last_checkpoint_ = result_.nodes;
    if (hooks_.on_checkpoint) hooks_.on_checkpoint(snapshot());
  }

  void restore(const Checkpoint& cp) {
    if (cp.n != n_ || cp.k != cfg_.k || cp.keydepth != cfg_.keydepth ||
        cp.shard_id != cfg_.shard_id || cp.shard_count != cfg_.shard_count ||
        cp.branching != cfg_.branching || cp.propagation != cfg_.propagation ||
        cp.order_digest != order_digest(order_))
      throw std::invalid_argument("checkpoint does not match this search");
    for (const auto& d : cp.stack) {
      if (d.vertex < 0 || d.vertex >= n_)
        throw std::invalid_argument("checkpoint: vertex out of range");
      stack_.push_back({d.vertex, pos_of_[d.vertex], d.remaining, d.color});
      if (!state_.assign(d.vertex, d.color))
        throw std::invalid_argument("checkpoint: inconsistent decision stack");
    }
    result_.calls = cp.calls;
    result_.nodes = cp.nodes;
    result_.count = cp.count;
    result_.colorings = cp.colorings;
    last_checkpoint_ = cp.nodes;
  }

  const VertexOrder& order_;
  SearchConfig cfg_;
  const SearchHooks& hooks_;
  SearchState state_;
  int n_;
  std::vector<int> pos_of_;
  std::vector<Frame> stack_;
  SearchResult result_;
  std::uint64_t last_checkpoint_ = 0;
  bool paused_ = false;
};

}  // namespace

SearchResult enumerate_colorings(const TwoDistGraph& g,
                                 const VertexOrder& order,
                                 const SearchConfig& cfg,
                                 const SearchHooks& hooks,
                                 const Checkpoint* resume) {
  cfg.validate(g.num_vertices());
  if (!is_valid_order(order, g.num_vertices()))
    throw std::invalid_argument("vertex order is not a permutation");
  Enumerator e(g, order, cfg, hooks);
  return e.run(resume);
}

ShardedResult enumerate_sharded(const TwoDistGraph& g, const VertexOrder& order,
                                const SearchConfig& cfg, int threads) {
  SearchConfig base = cfg;
  base.shard_id = 0;
  base.validate(g.num_vertices());
  ShardedResult out;
  out.shards.resize(cfg.shard_count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.shard_count; i = next++) {
      SearchConfig c = base;
      c.shard_id = i;
      out.shards[i] = enumerate_colorings(g, order, c);
    }
  };
  threads = std::clamp(threads, 1, cfg.shard_count);
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& s : out.shards) {
    out.count += s.count;
    out.colorings.insert(out.colorings.end(), s.colorings.begin(),
                         s.colorings.end());
  }
  std::sort(out.colorings.begin(), out.colorings.end());
  return out;
}

bool check_forced_same_color(std::span<const CanonicalColoring> colorings,
                             int u, int v) {
  return std::all_of(colorings.begin(), colorings.end(),
                     [&](const CanonicalColoring& c) {
                       return c.colors.at(u) == c.colors.at(v);
                     });
}

std::uint64_t brute_force_count(const TwoDistGraph& g, int k) {
  const int n = g.num_vertices();
  if (n > 14) throw std::invalid_argument("brute_force_count: more than 14 vertices");
  if (k < 0) throw std::invalid_argument("brute_force_count: negative k");
  if (n == 0) return 1;
  if (k == 0) return 0;

  std::vector<std::uint8_t> label(n, 0);
  // prefix_max[i] = max label among vertices 0..i-1 (or -1).
  std::vector<int> prefix_max(n + 1, -1);
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      if (is_proper(g, label)) ++count;
      return;
    }
    const int top = std::min(prefix_max[i] + 1, k - 1);
    for (int c = 0; c <= top; ++c) {
      label[i] = static_cast<std::uint8_t>(c);
      prefix_max[i + 1] = std::max(prefix_max[i], c);
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return count;
}

void write_colorings(std::ostream& os, int n, int k,
                     std::span<const CanonicalColoring> colorings) {
  os << n << ' ' << k << ' ' << colorings.size() << '\n';
  for (const auto& c : colorings) {
    for (int v = 0; v < n; ++v) {
      if (v) os << ' ';
      os << int{c.colors[v]};
    }
    os << '\n';
  }
}

ColoringFile read_colorings(std::istream& is) {
  ColoringFile f;
  long long count = 0;
  if (!(is >> f.n >> f.k >> count) || f.n < 0 || f.k < 0 || count < 0)
    throw std::runtime_error("coloring file: bad header");
  for (long long i = 0; i < count; ++i) {
    CanonicalColoring c;
    c.colors.resize(f.n);
    for (int v = 0; v < f.n; ++v) {
      int col = 0;
      if (!(is >> col) || col < 0 || col >= std::max(f.k, 1))
        throw std::runtime_error("coloring file: bad color entry");
      c.colors[v] = static_cast<std::uint8_t>(col);
    }
    f.colorings.push_back(std::move(c));
  }
  return f;
}

}  // namespace chromplane
