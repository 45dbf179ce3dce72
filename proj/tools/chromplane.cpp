// chromplane: build the {1,2}-graphs, enumerate their 5-colorings, export
// CNF, and run the end-to-end verifier.
//
// Exit codes: 0 success / PASS, 1 verification FAIL or invalid model,
// 2 usage error, 3 I/O error, 4 interrupted (checkpoint written).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "chromplane/cnf.hpp"
#include "chromplane/coloring.hpp"
#include "chromplane/graph.hpp"
#include "chromplane/verify.hpp"

namespace {

using namespace chromplane;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInterrupted = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::atomic<bool> g_stop{false};

extern "C" void handle_signal(int) { g_stop.store(true); }

// Line-oriented key: value record of a run.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
      if (k == key) {
        v = value;
        return;
      }
    entries_.emplace_back(key, value);
  }
  template <typename T>
  void set(const std::string& key, const T& value) {
    std::ostringstream os;
    os << value;
    set(key, os.str());
  }
  std::string str() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries_) os << k << ": " << v << '\n';
    return os.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Writes through a temporary sibling and renames, so a failed write leaves
// nothing behind.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);
    try {
      body(os);
    } catch (...) {
      os.close();
      std::filesystem::remove(tmp);
      throw;
    }
    os.flush();
    if (!os) {
      os.close();
      std::filesystem::remove(tmp);
      throw IoError("write failed: " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename into place: " + path);
  }
}

struct Target {
  TwoDistGraph graph;
  VertexOrder order;
};

Target load_target(const std::string& name) {
  Target t;
  if (name == "G" || name == "H") {
    t.graph = name == "G" ? build_G() : build_H();
    t.order = order_vertices(t.graph, orbit_partition(t.graph));
  } else if (name == "K") {
    KConstruction kc = construct_K();
    t.order = order_vertices(kc.k, orbit_partition(kc));
    t.graph = std::move(kc.k);
  } else {
    throw UsageError("target must be G, H or K");
  }
  return t;
}

void describe_graph(Manifest& m, const TwoDistGraph& g) {
  m.set("target", g.name);
  m.set("vertices", g.num_vertices());
  m.set("unit_edges", g.edges1.size());
  m.set("distance2_edges", g.edges2.size());
  m.set("graph_sha256", graph_digest(g));
}

void emit_manifest(const Manifest& m, const std::string& path) {
  std::cout << m.str();
  if (!path.empty())
    write_file_atomic(path, [&](std::ostream& os) { os << m.str(); });
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string target;
  std::string out;
  std::string format = "general";
  std::string manifest;
};

int cmd_build(const BuildArgs& a) {
  Manifest m;
  m.set("command", "build");
  m.set("started_at", utc_now());
  Target t = load_target(a.target);
  describe_graph(m, t.graph);
  m.set("format", a.format);
  if (!a.out.empty()) {
    if (a.format == "lattice") {
      QuadCoord q;
      for (const auto& p : t.graph.vertices)
        if (!to_quad(p, q))
          throw UsageError("graph " + a.target +
                           " has vertices off the 1/12 lattice; use --format general");
      write_file_atomic(a.out, [&](std::ostream& os) {
        write_lattice_vertices(os, t.graph);
      });
    } else if (a.format == "general") {
      write_file_atomic(a.out, [&](std::ostream& os) {
        write_general_vertices(os, t.graph);
      });
    } else {
      write_file_atomic(a.out,
                        [&](std::ostream& os) { write_edge_list(os, t.graph); });
    }
    m.set("out", a.out);
  }
  for (const auto& [idx, label] : t.graph.labels) m.set("label_" + label, idx);
  emit_manifest(m, a.manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ColorArgs {
  std::string target;
  int k = 5;
  int keydepth = 17;
  std::string shard = "0/1";
  int threads = 1;
  std::string checkpoint;
  bool resume = false;
  std::uint64_t checkpoint_every = 1'000'000;
  std::uint64_t node_limit = 0;
  std::string branching = "static";
  std::string out;
  std::string manifest;
};

std::pair<int, int> parse_shard(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) throw UsageError("--shard must be i/N");
  int i = 0, n = 0;
  try {
    std::size_t p1 = 0, p2 = 0;
    i = std::stoi(s.substr(0, slash), &p1);
    n = std::stoi(s.substr(slash + 1), &p2);
    if (p1 != slash || p2 != s.size() - slash - 1) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw UsageError("--shard must be i/N");
  }
  if (n < 1 || i < 0 || i >= n)
    throw UsageError("invalid shard " + s + ": need 0 <= i < N");
  return {i, n};
}

int cmd_color(const ColorArgs& a) {
  auto [shard_id, shard_count] = parse_shard(a.shard);
  if (a.k < 0 || a.k > kMaxColors) throw UsageError("--k must be in [0, 32]");
  if (a.threads < 1) throw UsageError("--threads must be >= 1");
  if (a.resume && a.checkpoint.empty())
    throw UsageError("--resume needs --checkpoint");

  Manifest m;
  m.set("command", "color");
  m.set("started_at", utc_now());
  Target t = load_target(a.target);
  describe_graph(m, t.graph);

  SearchConfig cfg;
  cfg.k = a.k;
  cfg.keydepth = a.keydepth;
  if (a.branching == "static")
    cfg.branching = Branching::kStatic;
  else if (a.branching == "fail-first")
    cfg.branching = Branching::kFailFirst;
  else
    throw UsageError("--branching must be static or fail-first");
  cfg.node_limit = a.node_limit;
  if (!a.checkpoint.empty()) cfg.checkpoint_interval = a.checkpoint_every;
  try {
    cfg.validate(t.graph.num_vertices());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  // One explicit shard runs alone; the whole job is split across threads.
  std::vector<int> shard_ids;
  int split = shard_count;
  if (shard_count > 1) {
    shard_ids = {shard_id};
  } else {
    split = a.threads;
    for (int i = 0; i < split; ++i) shard_ids.push_back(i);
  }
  cfg.shard_count = split;
  const int workers = std::min<int>(a.threads, static_cast<int>(shard_ids.size()));

  m.set("k", cfg.k);
  m.set("keydepth", cfg.keydepth);
  m.set("branching", to_string(cfg.branching));
  m.set("shard", a.shard);
  m.set("threads", workers);
  {
    std::ostringstream ids;
    for (std::size_t i = 0; i < shard_ids.size(); ++i)
      ids << (i ? "," : "") << shard_ids[i] << "/" << split;
    m.set("shard_assignments", ids.str());
  }

  auto checkpoint_path = [&](int id) {
    if (a.checkpoint.empty()) return std::string();
    return shard_ids.size() == 1 ? a.checkpoint
                                 : a.checkpoint + "." + std::to_string(id);
  };

  std::vector<SearchResult> results(shard_ids.size());
  std::vector<std::string> errors(shard_ids.size());
  std::atomic<std::size_t> next{0};
  const auto t0 = std::chrono::steady_clock::now();
  auto worker = [&] {
    for (std::size_t j = next++; j < shard_ids.size(); j = next++) {
      try {
        SearchConfig c = cfg;
        c.shard_id = shard_ids[j];
        const std::string cp_path = checkpoint_path(c.shard_id);
        SearchHooks hooks;
        hooks.stop = &g_stop;
        if (!cp_path.empty())
          hooks.on_checkpoint = [&](const Checkpoint& cp) {
            save_checkpoint_file(cp_path, cp);
          };
        std::optional<Checkpoint> resume;
        if (a.resume) {
          if (!std::filesystem::exists(cp_path))
            throw IoError("no checkpoint to resume: " + cp_path);
          resume = load_checkpoint_file(cp_path);
        }
        results[j] = enumerate_colorings(t.graph, t.order, c, hooks,
                                         resume ? &*resume : nullptr);
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto& e : errors) {
    if (e.empty()) continue;
    if (e.find("checkpoint") != std::string::npos && e.find("match") != std::string::npos)
      throw UsageError(e);
    throw IoError(e);
  }

  std::uint64_t count = 0, nodes = 0;
  bool complete = true;
  std::vector<CanonicalColoring> all;
  std::ostringstream per_shard;
  for (std::size_t j = 0; j < results.size(); ++j) {
    count += results[j].count;
    nodes += results[j].nodes;
    complete &= results[j].complete;
    all.insert(all.end(), results[j].colorings.begin(), results[j].colorings.end());
    per_shard << (j ? "," : "") << results[j].count;
  }
  std::sort(all.begin(), all.end());
  m.set("count", count);
  m.set("shard_counts", per_shard.str());
  m.set("nodes", nodes);
  m.set("complete", complete ? "yes" : "no");
  m.set("wall_seconds", wall);

  if (!complete) {
    m.set("status", "interrupted");
    emit_manifest(m, a.manifest);
    return kExitInterrupted;
  }
  if (!a.out.empty()) {
    write_file_atomic(a.out, [&](std::ostream& os) {
      write_colorings(os, t.graph.num_vertices(), cfg.k, all);
    });
    m.set("out", a.out);
  }
  m.set("status", "complete");
  emit_manifest(m, a.manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  int keydepth = 17;
  int threads = 1;
  int shards = 0;
  std::string fault = "none";
  std::string manifest;
};

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opts;
  opts.keydepth = a.keydepth;
  opts.threads = std::max(1, a.threads);
  opts.shards = a.shards > 0 ? a.shards : opts.threads;
  try {
    opts.fault = parse_fault(a.fault);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
#ifndef CHROMPLANE_FAULT_INJECTION
  if (opts.fault != Fault::kNone)
    throw UsageError("fault injection is not compiled into this build");
#endif

  Manifest m;
  m.set("command", "verify");
  m.set("started_at", utc_now());
  m.set("keydepth", opts.keydepth);
  m.set("threads", opts.threads);
  m.set("shards", opts.shards);
  m.set("fault", to_string(opts.fault));
  const auto t0 = std::chrono::steady_clock::now();
  VerdictReport r = verify_theorem(opts);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  m.set("G_sha256", r.g_digest);
  m.set("H_sha256", r.h_digest);
  m.set("K_sha256", r.k_digest);
  for (const auto& c : r.checks) {
    std::string key = c.group + "." + c.name;
    std::replace(key.begin(), key.end(), ' ', '_');
    m.set(key, c.skipped ? "SKIPPED" : c.actual + (c.pass ? " ok" : " MISMATCH (expected " + c.expected + ")"));
  }
  m.set("G_colorings_up_to_symmetry", r.g_colorings_up_to_symmetry);
  if (!r.second_coincidence.empty())
    m.set("second_shared_vertex_of_H_and_H'", r.second_coincidence);
  m.set("seconds_G", r.seconds_g);
  m.set("seconds_H", r.seconds_h);
  m.set("wall_seconds", wall);
  m.set("verdict", r.pass ? "PASS" : "FAIL");
  if (!r.pass) m.set("first_failure", r.first_failure);
  emit_manifest(m, a.manifest);
  if (r.pass) {
    std::cout << "\n";
    for (const auto& line : r.derivation) std::cout << "  - " << line << '\n';
  }
  return r.pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------

struct CnfArgs {
  std::string target;
  int k = 5;
  std::string out;
  bool at_most_one = false;
};

int cmd_export_cnf(const CnfArgs& a) {
  if (a.k < 0) throw UsageError("--k must be >= 0");
  Target t = load_target(a.target);
  CnfOptions opts;
  opts.at_most_one = a.at_most_one;
  CnfInstance cnf = export_dimacs(t.graph, a.k, opts);
  if (a.out.empty() || a.out == "-") {
    write_dimacs(std::cout, cnf);
  } else {
    write_file_atomic(a.out, [&](std::ostream& os) { write_dimacs(os, cnf); });
    std::cout << "variables: " << cnf.num_vars << "\nclauses: " << cnf.clauses.size()
              << "\nout: " << a.out << '\n';
  }
  return kExitOk;
}

struct CheckModelArgs {
  std::string target;
  int k = 5;
  std::string model;
  std::string against;
};

int cmd_check_model(const CheckModelArgs& a) {
  Target t = load_target(a.target);
  std::ifstream is(a.model);
  if (!is) throw IoError("cannot read model: " + a.model);
  std::vector<int> lits;
  std::vector<int> colors;
  try {
    lits = parse_model(is);
    colors = decode_model(t.graph, a.k, lits);
  } catch (const MalformedModel& e) {
    std::cerr << "malformed model: " << e.what() << '\n';
    return kExitIo;
  }
  const bool ok = check_model(t.graph, a.k, lits);
  std::cout << "model: " << (ok ? "proper coloring" : "NOT a proper coloring") << '\n';
  if (!ok) return kExitFail;
  if (!a.against.empty()) {
    std::ifstream cs(a.against);
    if (!cs) throw IoError("cannot read colorings: " + a.against);
    ColoringFile f = read_colorings(cs);
    CanonicalColoring c = canonicalize(colors, t.order);
    const bool member =
        std::find(f.colorings.begin(), f.colorings.end(), c) != f.colorings.end();
    std::cout << "class: " << (member ? "listed" : "NOT listed") << " among "
              << f.colorings.size() << " colorings\n";
    if (!member) return kExitFail;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact {1,2}-graph construction and 5-coloring enumeration"};
  app.require_subcommand(1);
  const int cores = std::max(1u, std::thread::hardware_concurrency());

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Construct G, H or K and write its files");
  b->add_option("target", build.target, "G, H or K")->required();
  b->add_option("--out", build.out, "Output file");
  b->add_option("--format", build.format, "lattice, general or edges")
      ->check(CLI::IsMember({"lattice", "general", "edges"}));
  b->add_option("--manifest", build.manifest, "Also write the manifest here");

  ColorArgs color;
  color.threads = cores;
  auto* c = app.add_subcommand("color", "Enumerate canonical k-colorings");
  c->add_option("target", color.target, "G, H or K")->required();
  c->add_option("--k", color.k, "Number of colors")->envname("CHROMPLANE_K");
  c->add_option("--keydepth", color.keydepth, "Level at which work is split")
      ->envname("CHROMPLANE_KEYDEPTH");
  c->add_option("--shard", color.shard, "Run only shard i of N (i/N)")
      ->envname("CHROMPLANE_SHARD");
  c->add_option("--threads", color.threads, "Worker threads")
      ->envname("CHROMPLANE_THREADS");
  c->add_option("--checkpoint", color.checkpoint, "Checkpoint file")
      ->envname("CHROMPLANE_CHECKPOINT");
  c->add_flag("--resume", color.resume, "Resume from --checkpoint");
  c->add_option("--checkpoint-every", color.checkpoint_every,
                "Search nodes between checkpoints")
      ->envname("CHROMPLANE_CHECKPOINT_EVERY");
  c->add_option("--node-limit", color.node_limit,
                "Stop with a checkpoint after this many nodes");
  c->add_option("--branching", color.branching, "static or fail-first")
      ->envname("CHROMPLANE_BRANCHING");
  c->add_option("--out", color.out, "Coloring file");
  c->add_option("--manifest", color.manifest, "Also write the manifest here");

  VerifyArgs verify;
  verify.threads = cores;
  auto* v = app.add_subcommand("verify", "Run every check behind chi({1,2}) >= 6");
  v->add_option("--keydepth", verify.keydepth)->envname("CHROMPLANE_KEYDEPTH");
  v->add_option("--threads", verify.threads)->envname("CHROMPLANE_THREADS");
  v->add_option("--shards", verify.shards, "Work split (default: threads)");
  v->add_option("--inject-fault", verify.fault,
                "Test hook: drop-vertex, perturb-coordinate, remove-edge, "
                "wrong-forcing-pair");
  v->add_option("--manifest", verify.manifest, "Also write the manifest here");

  CnfArgs cnf;
  auto* e = app.add_subcommand("export-cnf", "Write k-colorability as DIMACS CNF");
  e->add_option("target", cnf.target, "G, H or K")->required();
  e->add_option("--k", cnf.k)->envname("CHROMPLANE_K");
  e->add_option("--out", cnf.out, "Output file ('-' for stdout)");
  e->add_flag("--at-most-one", cnf.at_most_one, "Add at-most-one-color clauses");

  CheckModelArgs model;
  auto* mcmd = app.add_subcommand("check-model", "Validate a SAT solver model");
  mcmd->add_option("target", model.target, "G, H or K")->required();
  mcmd->add_option("model", model.model, "Model file")->required();
  mcmd->add_option("--k", model.k)->envname("CHROMPLANE_K");
  mcmd->add_option("--against", model.against,
                   "Coloring file the decoded class must appear in");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  try {
    if (*b) return cmd_build(build);
    if (*c) return cmd_color(color);
    if (*v) return cmd_verify(verify);
    if (*e) return cmd_export_cnf(cnf);
    if (*mcmd) return cmd_check_model(model);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const IoError& err) {
    std::cerr << "i/o error: " << err.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& err) {
    std::cerr << "i/o error: " << err.what() << '\n';
    return kExitIo;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
