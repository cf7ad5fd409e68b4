#include "palm/palm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

namespace palm {

unsigned palm_thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PALM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

namespace {

template <typename Fn>
void parallel_for(size_t count, Fn&& fn) {
  unsigned threads = std::min<size_t>(palm_thread_budget(), count);
  if (threads <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

double region_term_bits(int64_t count, int64_t cells, int64_t n) {
  if (count == 0) return 0.0;
  return static_cast<double>(count) *
         std::log2(static_cast<double>(count) /
                   (static_cast<double>(n) * static_cast<double>(cells)));
}

// One rectangle of the evolving partition with its points and the
// per-direction "confirmed K=1" memo.
struct Node {
  Rect rect;
  std::vector<uint32_t> pts;
  bool settled[2] = {false, false};  // [vertical, horizontal]
};

int dir_index(Direction d) { return d == Direction::vertical ? 0 : 1; }

class Engine {
 public:
  Engine(const Dataset2D& data, const PalmConfig& config) : data_(data), config_(config) {
    if (config.k_max < 2) throw std::invalid_argument("k_max must be >= 2");
    n_ = data.n();
    Node root;
    root.rect = {0, 0, data.grid.width, data.grid.height};
    root.pts.resize(static_cast<size_t>(n_));
    for (int64_t i = 0; i < n_; ++i) root.pts[static_cast<size_t>(i)] = static_cast<uint32_t>(i);
    nodes_.push_back(std::move(root));
  }

  void run_partitioning(std::vector<TraceEntry>* trace) {
    Direction dir = config_.initial_direction;
    bool prev_pass_clean = false;
    while (true) {
      bool split = run_pass(dir);
      if (trace) trace->push_back(trace_entry(TraceEntry::Phase::partition));
      if (!split) {
        if (prev_pass_clean) break;  // no splits in either direction
        prev_pass_clean = true;
      } else {
        prev_pass_clean = false;
      }
      dir = flip(dir);
    }
  }

  Partition snapshot() const {
    Partition p;
    p.grid = data_.grid;
    p.regions.reserve(nodes_.size());
    for (const auto& node : nodes_) {
      Region r;
      r.rects = {node.rect};
      r.area_units = node.rect.area_units();
      r.count = static_cast<int64_t>(node.pts.size());
      p.regions.push_back(std::move(r));
    }
    return p;
  }

  double data_code_bits() const {
    double neg = 0.0;
    for (const auto& node : nodes_)
      neg -= region_term_bits(static_cast<int64_t>(node.pts.size()), node.rect.area_units(), n_);
    if (n_ == 0) return 0.0;
    auto comp = log_comp(n_, static_cast<int>(nodes_.size()));
    return neg + comp.bits.back();
  }

 private:
  TraceEntry trace_entry(TraceEntry::Phase phase) const {
    return {phase, static_cast<int64_t>(nodes_.size()), data_code_bits()};
  }

  // Runs the per-region 1-D searches in direction `dir` and applies the
  // chosen splits. Returns whether any region was split.
  bool run_pass(Direction dir) {
    int di = dir_index(dir);
    std::vector<std::vector<int64_t>> cuts(nodes_.size());
    parallel_for(nodes_.size(), [&](size_t i) {
      Node& node = nodes_[i];
      if (node.settled[di]) return;
      auto chosen = best_cuts(node, dir);
      if (chosen.empty()) node.settled[di] = true;
      cuts[i] = std::move(chosen);
    });

    bool any = false;
    std::vector<Node> next;
    next.reserve(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) {
      if (cuts[i].empty()) {
        next.push_back(std::move(nodes_[i]));
        continue;
      }
      any = true;
      split_node(std::move(nodes_[i]), cuts[i], dir, next);
    }
    nodes_ = std::move(next);
    return any;
  }

  // Absolute cut positions chosen by the 1-D MDL histogram on the node's
  // projection; empty when K=1 wins.
  std::vector<int64_t> best_cuts(const Node& node, Direction dir) {
    bool vertical = dir == Direction::vertical;
    int64_t lo = vertical ? node.rect.x0 : node.rect.y0;
    int64_t hi = vertical ? node.rect.x1 : node.rect.y1;
    int64_t units = hi - lo;
    if (units < 2) return {};  // no interior candidate positions

    hist1d::PositionHistogram hist;
    hist.units = units;
    hist.occ.assign(static_cast<size_t>(units) + 1, 0);
    for (uint32_t id : node.pts) {
      int64_t pos = vertical ? data_.points[id].x : data_.points[id].y;
      ++hist.occ[static_cast<size_t>(pos - lo)];
    }

    hist1d::Extent1D extent;
    extent.epsilon = data_.grid.epsilon;
    extent.lo = vertical ? data_.grid.coord_x(lo) : data_.grid.coord_y(lo);
    extent.hi = vertical ? data_.grid.coord_x(hi) : data_.grid.coord_y(hi);
    extent.units = units;

    auto res = hist1d::select_from_histogram(hist, extent, config_.k_max);
    if (res.chosen_k <= 1) return {};
    std::vector<int64_t> abs;
    for (int64_t u : res.chosen().cut_units) abs.push_back(lo + u);
    return abs;
  }

  void split_node(Node&& node, const std::vector<int64_t>& cuts, Direction dir,
                  std::vector<Node>& out) {
    bool vertical = dir == Direction::vertical;
    size_t children = cuts.size() + 1;
    std::vector<Node> parts(children);
    for (size_t c = 0; c < children; ++c) {
      Rect r = node.rect;
      int64_t lo = c == 0 ? (vertical ? r.x0 : r.y0) : cuts[c - 1];
      int64_t hi = c == cuts.size() ? (vertical ? r.x1 : r.y1) : cuts[c];
      if (vertical) {
        r.x0 = lo;
        r.x1 = hi;
      } else {
        r.y0 = lo;
        r.y1 = hi;
      }
      parts[c].rect = r;
    }
    int64_t top = vertical ? data_.grid.width - 1 : data_.grid.height - 1;
    for (uint32_t id : node.pts) {
      int64_t cell = vertical ? std::min(data_.points[id].x, top)
                              : std::min(data_.points[id].y, top);
      size_t c = static_cast<size_t>(
          std::upper_bound(cuts.begin(), cuts.end(), cell) - cuts.begin());
      parts[c].pts.push_back(id);
    }
    for (auto& part : parts) out.push_back(std::move(part));
  }

  const Dataset2D& data_;
  const PalmConfig& config_;
  int64_t n_ = 0;
  std::vector<Node> nodes_;
};

// Greedy merge loop over an adjacency structure kept incrementally:
// merging regions A and B gives a region adjacent to exactly the former
// neighbors of A and B.
Partition run_merge(const Partition& start, const Dataset2D& data,
                    std::vector<TraceEntry>* trace) {
  int64_t n = data.n();
  size_t k0 = start.regions.size();
  if (k0 <= 1) return start;

  struct Slot {
    std::vector<Rect> rects;
    int64_t cells = 0;
    int64_t count = 0;
    double term = 0.0;
    bool alive = true;
    std::set<int> neighbors;
  };
  std::vector<Slot> slots(k0);
  for (size_t i = 0; i < k0; ++i) {
    slots[i].rects = start.regions[i].rects;
    slots[i].cells = start.regions[i].area_units;
    slots[i].count = start.regions[i].count;
    slots[i].term = region_term_bits(slots[i].count, slots[i].cells, n);
  }
  for (size_t i = 0; i < k0; ++i)
    for (size_t j = i + 1; j < k0; ++j)
      if (are_neighbors(start.regions[i], start.regions[j])) {
        slots[i].neighbors.insert(static_cast<int>(j));
        slots[j].neighbors.insert(static_cast<int>(i));
      }

  auto comp = log_comp(n, static_cast<int>(k0));
  double data_bits = 0.0;
  for (const auto& s : slots) data_bits -= s.term;
  auto k = static_cast<int>(k0);

  while (k > 1) {
    double current = data_bits + comp.at(k);
    double best = std::numeric_limits<double>::infinity();
    int best_i = -1, best_j = -1;
    double best_term = 0.0;
    for (size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].alive) continue;
      for (int j : slots[i].neighbors) {
        if (j <= static_cast<int>(i)) continue;
        double merged_term = region_term_bits(slots[i].count + slots[static_cast<size_t>(j)].count,
                                              slots[i].cells + slots[static_cast<size_t>(j)].cells, n);
        double cand = data_bits + slots[i].term + slots[static_cast<size_t>(j)].term - merged_term +
                      comp.at(k - 1);
        if (cand < best) {
          best = cand;
          best_i = static_cast<int>(i);
          best_j = j;
          best_term = merged_term;
        }
      }
    }
    if (best_i < 0 || best > current) break;  // strict `>` stop: ties merge

    auto& a = slots[static_cast<size_t>(best_i)];
    auto& b = slots[static_cast<size_t>(best_j)];
    data_bits += a.term + b.term - best_term;
    a.rects.insert(a.rects.end(), b.rects.begin(), b.rects.end());
    a.cells += b.cells;
    a.count += b.count;
    a.term = best_term;
    b.alive = false;
    a.neighbors.erase(best_j);
    for (int t : b.neighbors) {
      if (t == best_i) continue;
      auto& other = slots[static_cast<size_t>(t)];
      other.neighbors.erase(best_j);
      other.neighbors.insert(best_i);
      a.neighbors.insert(t);
    }
    b.neighbors.clear();
    --k;
    if (trace)
      trace->push_back({TraceEntry::Phase::merge, k, data_bits + comp.at(k)});
  }

  Partition out;
  out.grid = start.grid;
  for (auto& s : slots) {
    if (!s.alive) continue;
    Region r;
    r.rects = std::move(s.rects);
    r.area_units = s.cells;
    r.count = s.count;
    out.regions.push_back(std::move(r));
  }
  return out;
}

}  // namespace

GridSpec resolve_grid(const PalmConfig& config, double epsilon,
                      std::span<const std::pair<double, double>> raw) {
  if (config.sample_space) {
    const auto& s = *config.sample_space;
    return GridSpec::from_extent(epsilon, s[0], s[1], s[2] - s[0], s[3] - s[1]);
  }
  if (raw.empty())
    return GridSpec::from_extent(epsilon, 0.0, 0.0, 1.0, 1.0);
  double min_x = raw[0].first, max_x = raw[0].first;
  double min_y = raw[0].second, max_y = raw[0].second;
  for (const auto& [x, y] : raw) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  GridSpec g;
  g.epsilon = epsilon;
  int64_t x0 = snap_offset(min_x / epsilon);
  int64_t y0 = snap_offset(min_y / epsilon);
  g.origin_x = static_cast<double>(x0) * epsilon;
  g.origin_y = static_cast<double>(y0) * epsilon;
  g.width = std::max<int64_t>(1, snap_offset(max_x / epsilon) - x0);
  g.height = std::max<int64_t>(1, snap_offset(max_y / epsilon) - y0);
  return g;
}

Partition partition_step(const Dataset2D& data, const PalmConfig& config) {
  Engine engine(data, config);
  engine.run_partitioning(nullptr);
  return engine.snapshot();
}

Partition merge_step(const Partition& partition, const Dataset2D& data) {
  return run_merge(partition, data, nullptr);
}

FitResult palm_fit(const Dataset2D& data, const PalmConfig& config) {
  FitResult result;
  Engine engine(data, config);
  engine.run_partitioning(&result.trace);
  Partition coarse = engine.snapshot();
  result.partition = run_merge(coarse, data, &result.trace);
  if (data.n() >= 1) {
    result.densities = ml_densities(result.partition, data);
  } else {
    result.densities.values.assign(result.partition.regions.size(), 0.0);
  }
  result.total_bits.data_bits = data_code_length_2d(result.partition, data);
  result.total_bits.model_bits = 0.0;  // uniform model prior over the merge class
  return result;
}

}  // namespace palm
