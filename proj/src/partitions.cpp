#include "mgp/partitions.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

#include <algorithm>

namespace mgp {

ElementId PartitionSystem::find(std::string_view label) const {
  for (ElementId b = 0; b < size; ++b) {
    if (labels[b] == label) return b;
  }
  throw DomainError("unknown colour '" + std::string(label) + "'");
}

PartitionSystem partition_system(const PerfectCrystal& c, const GroundStatePath& gsp, const NormalizedEnergy& ne) {
  PartitionSystem sys;
  sys.size = c.size();
  sys.dh = ne.dh_values();
  sys.ground.assign(gsp.g.begin(), gsp.g.end());
  sys.u = ground_integers(ne, gsp);
  sys.labels = c.labels();
  for (ElementId b = 0; b < c.size(); ++b) sys.colours.push_back(c.colour(b));
  sys.unit = QUnit::make(1, static_cast<std::int64_t>(c.d0()) * ne.D());
  return sys;
}

PartitionSystem partition_system_from_matrix(std::vector<std::string> labels, const std::vector<std::vector<long>>& rows,
                                             std::vector<ElementId> ground) {
  const int sz = static_cast<int>(labels.size());
  if (static_cast<int>(rows.size()) != sz) throw DomainError("difference matrix must be square over the colours");
  if (ground.empty()) throw DomainError("ground needs at least one colour");
  PartitionSystem sys;
  sys.size = sz;
  sys.dh.assign(static_cast<std::size_t>(sz) * sz, 0);
  for (int b = 0; b < sz; ++b) {
    if (static_cast<int>(rows[b].size()) != sz) throw DomainError("difference matrix must be square over the colours");
    for (int bp = 0; bp < sz; ++bp) sys.dh[static_cast<std::size_t>(bp) * sz + b] = rows[b][bp];
  }
  for (ElementId g : ground) {
    if (g < 0 || g >= sz) throw DomainError("ground colour out of range");
  }
  sys.ground = std::move(ground);
  sys.labels = std::move(labels);
  for (int b = 0; b < sz; ++b) sys.colours.push_back(ColourMonomial::variable(sz, b));
  sys.u = solve_ground_chain(sys);
  return sys;
}

std::vector<long> solve_ground_chain(const PartitionSystem& sys) {
  const int t = sys.t();
  // u_k - u_{k+1} >= a_k around the cycle; the differences sum to zero, so uniqueness
  // forces every inequality to be tight.
  std::vector<long> a(t);
  long total = 0;
  for (int k = 0; k < t; ++k) {
    a[k] = sys.gap(sys.ground[k], sys.ground[(k + 1) % t]);
    total += a[k];
  }
  if (total > 0) throw DomainError("no ground integers satisfy the cyclic chain");
  if (total < 0) throw DomainError("ground integers are not unique for this ground");
  long acc = 0, sum = 0;
  for (int k = 0; k < t; ++k) {
    sum += acc;  // u_k = u_0 - acc
    acc += a[k];
  }
  if (sum % t != 0) throw DomainError("ground integers are not integral");
  std::vector<long> u(t);
  u[0] = sum / t;
  for (int k = 1; k < t; ++k) u[k] = u[k - 1] - a[k - 1];
  return u;
}

std::string mode_token(RelationMode m) { return m == RelationMode::Minimal ? "minimal" : "flexible"; }

RelationMode parse_mode(std::string_view token) {
  if (token == "minimal") return RelationMode::Minimal;
  if (token == "flexible") return RelationMode::Flexible;
  throw DomainError("unknown mode '" + std::string(token) + "' (valid: minimal, flexible)");
}

bool relation_check(const ColouredInteger& a, const ColouredInteger& b, RelationMode mode, int d,
                    const PartitionSystem& sys) {
  long surplus = a.size - b.size - sys.gap(a.colour, b.colour);
  if (mode == RelationMode::Minimal) return surplus == 0;
  return surplus >= 0 && surplus % d == 0;
}

bool validate(const std::vector<ColouredInteger>& seq, const PartitionSystem& sys, RelationMode mode, int d,
              bool require_t_divisible) {
  const int t = sys.t();
  if (static_cast<int>(seq.size()) < t) return false;
  const std::size_t s = seq.size() - t;
  for (ElementId b = 0; b < t; ++b) {
    if (seq[s + b] != ColouredInteger{sys.u[b], sys.ground[b]}) return false;
  }
  for (const auto& x : seq) {
    if (x.colour < 0 || x.colour >= sys.size) return false;
  }
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    if (!relation_check(seq[k], seq[k + 1], mode, d, sys)) return false;
  }
  if (s >= static_cast<std::size_t>(t) && std::equal(seq.begin() + (s - t), seq.begin() + s, seq.begin() + s)) {
    return false;
  }
  if (require_t_divisible && seq.size() % t != 0) return false;
  return true;
}

std::vector<ColouredInteger> full_sequence(const MultiGroundedPartition& p, const PartitionSystem& sys) {
  std::vector<ColouredInteger> seq = p.parts;
  for (int k = 0; k < sys.t(); ++k) seq.push_back({sys.u[k], sys.ground[k]});
  return seq;
}

MultiGroundedPartition strip_tail(const std::vector<ColouredInteger>& seq, const PartitionSystem& sys) {
  if (static_cast<int>(seq.size()) < sys.t()) throw DomainError("sequence shorter than the ground");
  return MultiGroundedPartition{{seq.begin(), seq.end() - sys.t()}};
}

long partition_weight(const MultiGroundedPartition& p, const PartitionSystem& sys) {
  long w = 0;
  for (const auto& x : p.parts) w += x.size;
  for (long v : sys.u) w += v;
  return w;
}

ColourMonomial partition_colour(const MultiGroundedPartition& p, const PartitionSystem& sys) {
  ColourMonomial m(sys.colours.front().rank());
  for (const auto& x : p.parts) m *= sys.colours[x.colour];
  for (ElementId g : sys.ground) m *= sys.colours[g];
  return m;
}

nlohmann::json partition_to_json(const MultiGroundedPartition& p, const PartitionSystem& sys) {
  auto part = [&](const ColouredInteger& x) { return nlohmann::json{{"size", x.size}, {"colour", sys.labels[x.colour]}}; };
  nlohmann::json parts = nlohmann::json::array(), tail = nlohmann::json::array();
  for (const auto& x : p.parts) parts.push_back(part(x));
  for (int k = 0; k < sys.t(); ++k) tail.push_back(part({sys.u[k], sys.ground[k]}));
  return {{"parts", parts}, {"tail", tail}, {"weight", partition_weight(p, sys)}};
}

MultiGroundedPartition partition_from_json(const nlohmann::json& j, const PartitionSystem& sys) {
  MultiGroundedPartition p;
  for (const auto& x : j.at("parts")) {
    p.parts.push_back({x.at("size").get<long>(), sys.find(x.at("colour").get<std::string>())});
  }
  if (j.contains("tail")) {
    const auto& tail = j.at("tail");
    if (static_cast<int>(tail.size()) != sys.t()) throw DomainError("tail length does not match the ground");
    for (int k = 0; k < sys.t(); ++k) {
      ColouredInteger x{tail[k].at("size").get<long>(), sys.find(tail[k].at("colour").get<std::string>())};
      if (x != ColouredInteger{sys.u[k], sys.ground[k]}) throw DomainError("tail does not match the ground");
    }
  }
  return p;
}

LowerBound::LowerBound(const PartitionSystem& sys, RelationMode mode, int d) {
  const int sz = sys.size;
  // Least cumulative gap along any non-empty walk b -> x -> ... (new parts go on the left).
  std::vector<long> dist(sz, 0);
  long low = 0;
  for (int iter = 0;; ++iter) {
    bool changed = false;
    std::vector<long> next = dist;
    for (ElementId b = 0; b < sz; ++b) {
      for (ElementId x = 0; x < sz; ++x) {
        long v = std::min(0L, dist[b]) + sys.gap(x, b);
        if (v < next[x]) {
          next[x] = v;
          changed = true;
        }
      }
    }
    dist = std::move(next);
    if (!changed) break;
    if (iter > sz + 1) throw UnstableError("enumeration unstable: part sizes decrease without bound along a cycle");
  }
  for (long v : dist) low = std::min(low, v);

  // Past hi every later part is non-negative, so nothing more can be subtracted.
  lo_ = sys.u.front() + low;
  hi_ = -low;
  if (lo_ >= hi_) {
    lo_ = hi_;
    return;
  }
  const long width = hi_ - lo_;
  const std::size_t states = static_cast<std::size_t>(sz) * static_cast<std::size_t>(width);
  auto index = [&](ElementId b, long s) {
    return static_cast<std::size_t>(b) * static_cast<std::size_t>(width) + static_cast<std::size_t>(s - lo_);
  };
  table_.assign(states, 0);

  // Only states reachable from the ground matter; unreachable ones may carry cycles of
  // negative total size that no partition can use.
  std::vector<char> reach(states, 0);
  std::vector<std::pair<ElementId, long>> todo;
  if (sys.u.front() < hi_) {
    reach[index(sys.ground.front(), sys.u.front())] = 1;
    todo.push_back({sys.ground.front(), sys.u.front()});
  }
  while (!todo.empty()) {
    auto [b, s] = todo.back();
    todo.pop_back();
    for (ElementId x = 0; x < sz; ++x) {
      for (long sx = s + sys.gap(x, b); sx < hi_; sx += d) {
        auto& r = reach[index(x, sx)];
        if (!r) {
          r = 1;
          todo.push_back({x, sx});
        }
        if (mode == RelationMode::Minimal) break;
      }
    }
  }

  std::size_t live = 0;
  for (char r : reach) live += r;
  for (std::size_t iter = 0;; ++iter) {
    bool changed = false;
    for (ElementId b = 0; b < sz; ++b) {
      for (long s = lo_; s < hi_; ++s) {
        if (!reach[index(b, s)]) continue;
        long best = 0;
        for (ElementId x = 0; x < sz; ++x) {
          long sx = s + sys.gap(x, b);
          long tail = sx >= hi_ ? 0 : table_[index(x, sx)];
          best = std::min(best, sx + tail);
        }
        if (best < table_[index(b, s)]) {
          table_[index(b, s)] = best;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (iter > live + 1) {
      throw UnstableError("enumeration unstable: partitions of unbounded negative weight exist");
    }
  }
}

namespace {

struct SubtreeRoot {
  std::vector<ColouredInteger> stack;
  ColourMonomial colour;
  ElementId b;
  long s, w;
  bool matches_tail;
};

struct Dfs {
  const PartitionSystem& sys;
  const LowerBound& bound;
  const EnumerationQuery& q;
  const PartitionVisitor& visit;
  SweepStats stats;
  std::vector<ColouredInteger> stack;
  ColourMonomial colour;
  int split = -1;
  std::vector<SubtreeRoot>* roots = nullptr;

  void run(ElementId b, long s, long w, bool matches_tail) {
    if (roots && static_cast<int>(stack.size()) == split) {
      roots->push_back({stack, colour, b, s, w, matches_tail});
      return;
    }
    ++stats.nodes;
    const int depth = static_cast<int>(stack.size());
    const int t = sys.t();
    stats.deepest = std::max(stats.deepest, depth);
    if (!q.t_divisible || depth % t == 0) {
      ++stats.emitted;
      visit(stack, w, colour);
    }
    for (ElementId x = 0; x < sys.size; ++x) {
      const long base = s + sys.gap(x, b);
      for (long sx = base;; sx += q.d) {
        const long wx = w + sx;
        if (wx + bound(x, sx) > q.max_weight) break;
        bool m = false;
        if (depth < t) {
          const int k = t - 1 - depth;
          m = (depth == 0 || matches_tail) && x == sys.ground[k] && sx == sys.u[k];
          if (depth == t - 1 && m) {
            if (q.mode == RelationMode::Minimal) break;
            continue;
          }
        }
        if (depth >= q.part_cap) {
          stats.hit_part_cap = true;
          return;
        }
        stack.push_back({sx, x});
        colour *= sys.colours[x];
        run(x, sx, wx, m);
        colour /= sys.colours[x];
        stack.pop_back();
        if (q.mode == RelationMode::Minimal) break;
      }
    }
  }
};

}  // namespace

SweepStats for_each_mgp(const PartitionSystem& sys, const LowerBound& bound, const EnumerationQuery& q,
                        const PartitionVisitor& visit) {
  if (q.d < 1) throw DomainError("d must be positive");
  Dfs dfs{sys, bound, q, visit, {}, {}, ColourMonomial(sys.colours.front().rank())};
  for (ElementId g : sys.ground) dfs.colour *= sys.colours[g];
  long w0 = 0;
  for (long v : sys.u) w0 += v;
  if (w0 + bound(sys.ground.front(), sys.u.front()) > q.max_weight) return dfs.stats;
  dfs.run(sys.ground.front(), sys.u.front(), w0, false);
  return dfs.stats;
}

namespace {

std::atomic<unsigned> g_threads{0};

void merge_stats(SweepStats& into, const SweepStats& from) {
  into.hit_part_cap = into.hit_part_cap || from.hit_part_cap;
  into.nodes += from.nodes;
  into.emitted += from.emitted;
  into.deepest = std::max(into.deepest, from.deepest);
}

}  // namespace

unsigned worker_threads() {
  if (unsigned n = g_threads.load()) return n;
  if (const char* env = std::getenv("MGPCHAR_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_threads(unsigned n) { g_threads.store(n); }

SweepStats for_each_mgp_parallel(const PartitionSystem& sys, const LowerBound& bound, const EnumerationQuery& q,
                                 unsigned threads, const std::function<PartitionVisitor(unsigned)>& visitor_for) {
  if (q.d < 1) throw DomainError("d must be positive");
  threads = std::max(1u, threads);
  PartitionVisitor first = visitor_for(0);
  if (threads == 1) return for_each_mgp(sys, bound, q, first);

  long w0 = 0;
  for (long v : sys.u) w0 += v;
  if (w0 + bound(sys.ground.front(), sys.u.front()) > q.max_weight) return {};

  // Shallow nodes are visited here by worker 0's visitor; deeper ones become subtrees.
  std::vector<SubtreeRoot> roots;
  Dfs top{sys, bound, q, first, {}, {}, ColourMonomial(sys.colours.front().rank())};
  for (ElementId g : sys.ground) top.colour *= sys.colours[g];
  top.split = std::min(q.part_cap, 3 * sys.t() + 2);
  top.roots = &roots;
  top.run(sys.ground.front(), sys.u.front(), w0, false);

  std::vector<PartitionVisitor> visitors{first};
  for (unsigned i = 1; i < threads; ++i) visitors.push_back(visitor_for(i));
  std::vector<SweepStats> stats(threads);
  std::vector<std::exception_ptr> errors(threads);
  std::atomic<std::size_t> next{0};
  auto work = [&](unsigned id) {
    try {
      for (std::size_t k; (k = next.fetch_add(1)) < roots.size();) {
        SubtreeRoot& r = roots[k];
        Dfs dfs{sys, bound, q, visitors[id], {}, std::move(r.stack), std::move(r.colour)};
        dfs.run(r.b, r.s, r.w, r.matches_tail);
        merge_stats(stats[id], dfs.stats);
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(work, i);
  work(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  SweepStats total = top.stats;
  for (const auto& st : stats) merge_stats(total, st);
  return total;
}

nlohmann::json telemetry_to_json(const StabilityTelemetry& t) {
  return {{"kind", t.kind}, {"caps", t.caps}, {"sizes", t.sizes}, {"converged", t.converged}};
}

EnumerationResult enumerate_mgp(const PartitionSystem& sys, RelationMode mode, int d, long max_weight,
                                bool t_divisible, const StabilityPolicy& policy) {
  LowerBound bound(sys, mode, d);
  EnumerationResult out;
  out.telemetry.kind = "part-cap";
  std::optional<std::vector<MultiGroundedPartition>> previous;
  for (int cap = policy.initial_cap; cap <= policy.ceiling; cap *= 2) {
    std::vector<std::pair<long, MultiGroundedPartition>> found;
    EnumerationQuery q{mode, d, max_weight, t_divisible, cap};
    for_each_mgp(sys, bound, q, [&](const std::vector<ColouredInteger>& stack, long w, const ColourMonomial&) {
      found.push_back({w, MultiGroundedPartition{{stack.rbegin(), stack.rend()}}});
    });
    std::sort(found.begin(), found.end());
    std::vector<MultiGroundedPartition> list;
    list.reserve(found.size());
    for (auto& [w, p] : found) list.push_back(std::move(p));
    out.telemetry.caps.push_back(cap);
    out.telemetry.sizes.push_back(list.size());
    if (previous && *previous == list) {
      out.telemetry.converged = true;
      out.partitions = std::move(list);
      return out;
    }
    previous = std::move(list);
  }
  throw UnstableError("enumeration unstable: part-count sweeps still changing at cap " +
                      std::to_string(policy.ceiling));
}

MultiGroundedPartition phi_forward(const LambdaPath& path, const PartitionSystem& sys) {
  const int t = sys.t();
  const int M = ((static_cast<int>(path.prefix.size()) + t - 1) / t) * t;
  auto at = [&](int k) { return k < static_cast<int>(path.prefix.size()) ? path.prefix[k] : sys.ground[k % t]; };
  MultiGroundedPartition p;
  p.parts.resize(M);
  long size = sys.u.front();
  for (int k = M - 1; k >= 0; --k) {
    size += sys.dh_of(at(k + 1), at(k));
    p.parts[k] = {size, at(k)};
  }
  return p;
}

LambdaPath phi_inverse(const MultiGroundedPartition& p, const PartitionSystem& sys) {
  if (!validate(full_sequence(p, sys), sys, RelationMode::Minimal, 1, true)) {
    throw DomainError("not a minimal multi-grounded partition with part count divisible by t");
  }
  std::vector<ElementId> prefix;
  for (const auto& x : p.parts) prefix.push_back(x.colour);
  GroundStatePath g{sys.t(), sys.ground, {}};
  return canonical_path(std::move(prefix), g);
}

DecompositionPair phi_d_forward(const MultiGroundedPartition& p, const PartitionSystem& sys, int d) {
  const int t = sys.t();
  if (!validate(full_sequence(p, sys), sys, RelationMode::Flexible, d, true)) {
    throw DomainError("not a flexible multi-grounded partition with part count divisible by t");
  }
  const int S = static_cast<int>(p.parts.size()) / t;
  std::vector<ElementId> colours;
  for (const auto& x : p.parts) colours.push_back(x.colour);
  GroundStatePath g{t, sys.ground, {}};
  LambdaPath path = canonical_path(colours, g);
  const int m = (static_cast<int>(path.prefix.size()) + t - 1) / t;
  DecompositionPair out;
  out.minimal = phi_forward(path, sys);
  const auto& mu = out.minimal.parts;
  if (m < S) {
    for (int k = 0; k < m * t; ++k) out.free.push_back(p.parts[k].size - mu[k].size);
    for (int k = m * t; k < S * t; ++k) out.free.push_back(p.parts[k].size - sys.u[k % t]);
  } else {
    int r = S;
    for (int k = 0; k < S; ++k) {
      if (p.parts[k * t].size == mu[k * t].size) {
        r = k;
        break;
      }
    }
    for (int k = 0; k < r * t; ++k) out.free.push_back(p.parts[k].size - mu[k].size);
  }
  for (std::size_t k = 0; k < out.free.size(); ++k) {
    long v = out.free[k];
    if (v < 0 || v % d != 0 || (k > 0 && v > out.free[k - 1])) {
      throw Error("internal: free part sequence is not a partition into multiples of d");
    }
  }
  return out;
}

MultiGroundedPartition phi_d_inverse(const DecompositionPair& pair, const PartitionSystem& sys, int d) {
  const int t = sys.t();
  if (!validate(full_sequence(pair.minimal, sys), sys, RelationMode::Minimal, 1, true)) {
    throw DomainError("first component is not a minimal multi-grounded partition");
  }
  const auto& nu = pair.free;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    if (nu[k] < 0 || nu[k] % d != 0 || (k > 0 && nu[k] > nu[k - 1])) {
      throw DomainError("free part must be non-increasing non-negative multiples of d");
    }
  }
  if (nu.size() % t != 0) throw DomainError("free part length must be a multiple of t");
  auto nu_at = [&](std::size_t k) { return k < nu.size() ? nu[k] : 0L; };
  int r = 0;
  while (nu_at(static_cast<std::size_t>(r) * t) > 0) ++r;
  const int m = static_cast<int>(pair.minimal.parts.size()) / t;
  MultiGroundedPartition p;
  for (int k = 0; k < m * t; ++k) {
    const auto& x = pair.minimal.parts[k];
    p.parts.push_back({x.size + nu_at(k), x.colour});
  }
  for (int k = m * t; k < r * t; ++k) p.parts.push_back({nu_at(k) + sys.u[k % t], sys.ground[k % t]});
  return p;
}

}  // namespace mgp
