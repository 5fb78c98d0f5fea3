#include "ipp/planners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace ipp {

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

PlannerDecision greedy_next(const GpPosterior& posterior, const GridGraph& g,
                            const std::vector<NodeId>& current,
                            const std::vector<bool>* active) {
  PlannerDecision d;
  d.mode = PlannerMode::Sequential;
  d.targets.resize(current.size());
  d.done.assign(current.size(), false);
  std::unordered_set<NodeId> claimed;

  for (std::size_t v = 0; v < current.size(); ++v) {
    if (active && !(*active)[v]) {
      d.targets[v] = current[v];  // retired vehicles do not contest nodes
      continue;
    }
    auto cands = g.neighbors(current[v]);  // ascending NodeId
    if (cands.empty()) {
      // nowhere to ever go; staying because neighbors are claimed is
      // transient, an isolated vehicle is finished
      d.targets[v] = current[v];
      d.done[v] = true;
      continue;
    }
    std::stable_sort(cands.begin(), cands.end(), [&](NodeId a, NodeId b) {
      return posterior.std[a] > posterior.std[b];
    });
    NodeId chosen = current[v];
    for (NodeId n : cands) {
      if (!claimed.count(n)) {
        chosen = n;
        break;
      }
    }
    d.targets[v] = chosen;
    claimed.insert(chosen);
  }
  return d;
}

double ei_value(double mu, double sigma, const AcquisitionParams& p) {
  p.validate();
  const double gain = mu - p.f_best - p.xi;
  if (sigma <= 0.0) return std::max(0.0, gain);
  const double z = gain / sigma;
  return gain * normal_cdf(z) + sigma * normal_pdf(z);
}

PlannerDecision ei_next(const GpPosterior& posterior, const GridGraph& g,
                        const std::vector<NodeId>& current, const AcquisitionParams& p,
                        const std::vector<double>& remaining_budget,
                        const std::vector<bool>* active) {
  PlannerDecision d;
  d.mode = PlannerMode::Target;
  d.targets.resize(current.size());
  d.done.assign(current.size(), false);
  std::unordered_set<NodeId> claimed;

  for (std::size_t v = 0; v < current.size(); ++v) {
    if (active && !(*active)[v]) {
      d.targets[v] = current[v];  // retired vehicles do not contest nodes
      continue;
    }
    const auto dist = g.dijkstra_distances(current[v]);
    NodeId best = kInvalidNode;
    double best_score = -std::numeric_limits<double>::infinity();
    for (NodeId n = 0; n < static_cast<NodeId>(g.node_count()); ++n) {
      if (n == current[v] || claimed.count(n)) continue;
      if (!(dist[n] <= remaining_budget[v])) continue;
      const double score = ei_value(posterior.mean[n], posterior.std[n], p);
      if (score > best_score) {
        best_score = score;
        best = n;
      }
    }
    if (best == kInvalidNode) {
      d.targets[v] = current[v];
      d.done[v] = true;
    } else {
      d.targets[v] = best;
      claimed.insert(best);
    }
  }
  return d;
}

std::vector<NodeId> lawnmower_order(const GridGraph& g, NodeId start) {
  if (!g.valid(start)) throw std::out_of_range("lawnmower: invalid start node");
  // reachable set via BFS
  std::vector<char> reachable(g.node_count(), 0);
  std::vector<NodeId> stack{start};
  reachable[start] = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const auto& e : g.edges(u))
      if (!reachable[e.to]) {
        reachable[e.to] = 1;
        stack.push_back(e.to);
      }
  }

  auto row_nodes = [&](int r, bool left_to_right) {
    std::vector<NodeId> out;
    if (left_to_right)
      for (int c = 0; c < g.cols(); ++c) {
        const NodeId n = g.node_at(r, c);
        if (n != kInvalidNode && reachable[n]) out.push_back(n);
      }
    else
      for (int c = g.cols() - 1; c >= 0; --c) {
        const NodeId n = g.node_at(r, c);
        if (n != kInvalidNode && reachable[n]) out.push_back(n);
      }
    return out;
  };

  const auto [start_row, start_col] = g.node_rc(start);
  std::vector<NodeId> order;
  order.reserve(g.node_count());

  // start row: from the start column rightward, then the left remnant
  // from nearest to farthest
  for (int c = start_col; c < g.cols(); ++c) {
    const NodeId n = g.node_at(start_row, c);
    if (n != kInvalidNode && reachable[n]) order.push_back(n);
  }
  bool had_left_remnant = false;
  for (int c = start_col - 1; c >= 0; --c) {
    const NodeId n = g.node_at(start_row, c);
    if (n != kInvalidNode && reachable[n]) {
      order.push_back(n);
      had_left_remnant = true;
    }
  }

  bool left_to_right = had_left_remnant;  // continue sweeping away from where we ended
  auto sweep_rows = [&](int first, int last, int step) {
    for (int r = first; step > 0 ? r <= last : r >= last; r += step) {
      auto nodes = row_nodes(r, left_to_right);
      if (nodes.empty()) continue;
      order.insert(order.end(), nodes.begin(), nodes.end());
      left_to_right = !left_to_right;
    }
  };
  sweep_rows(start_row + 1, g.rows() - 1, 1);
  sweep_rows(start_row - 1, 0, -1);
  return order;
}

FloodingPlan::FloodingPlan(const GridGraph& g, const std::vector<NodeId>& starts) {
  if (starts.empty()) throw std::invalid_argument("flooding: empty fleet");
  order_ = lawnmower_order(g, starts.front());
  const std::size_t n_vehicles = starts.size();
  const std::size_t total = order_.size();
  segment_begin_.resize(n_vehicles + 1);
  // contiguous equal split, earlier vehicles take the remainder
  std::size_t pos = 0;
  for (std::size_t v = 0; v < n_vehicles; ++v) {
    segment_begin_[v] = pos;
    pos += total / n_vehicles + (v < total % n_vehicles ? 1 : 0);
  }
  segment_begin_[n_vehicles] = total;
  cursor_.assign(segment_begin_.begin(), segment_begin_.end() - 1);
}

PlannerDecision FloodingPlan::next(const std::vector<NodeId>& current) {
  if (current.size() + 1 != segment_begin_.size())
    throw std::invalid_argument("flooding: fleet size mismatch");
  PlannerDecision d;
  d.mode = PlannerMode::Target;
  d.targets.resize(current.size());
  d.done.assign(current.size(), false);
  for (std::size_t v = 0; v < current.size(); ++v) {
    while (cursor_[v] < segment_begin_[v + 1] && order_[cursor_[v]] == current[v]) ++cursor_[v];
    if (cursor_[v] >= segment_begin_[v + 1]) {
      d.targets[v] = current[v];
      d.done[v] = true;
    } else {
      d.targets[v] = order_[cursor_[v]];
      ++cursor_[v];
    }
  }
  return d;
}

}  // namespace ipp
