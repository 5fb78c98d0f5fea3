#pragma once

#include <vector>

#include "ipp/gp.hpp"
#include "ipp/grid_graph.hpp"

namespace ipp {

enum class PlannerMode { Sequential, Target };

/// One decision per vehicle. A done vehicle keeps its current node as
/// target and is skipped by the fleet.
struct PlannerDecision {
  std::vector<NodeId> targets;
  std::vector<bool> done;
  PlannerMode mode = PlannerMode::Sequential;
};

struct AcquisitionParams {
  double xi = 0.01;     // exploration jitter
  double f_best = 0.0;  // running best observed value

  void validate() const {
    if (xi < 0.0) throw std::invalid_argument("planner: xi must be >= 0");
  }
};

/// Per-vehicle argmax of posterior std over graph neighbors; sequential
/// mode. Claim-and-skip conflict resolution in ascending vehicle index.
/// Vehicles flagged inactive keep their node and claim nothing.
PlannerDecision greedy_next(const GpPosterior& posterior, const GridGraph& g,
                            const std::vector<NodeId>& current,
                            const std::vector<bool>* active = nullptr);

/// Classic expected improvement for a N(mu, sigma^2) candidate.
double ei_value(double mu, double sigma, const AcquisitionParams& p);

/// Per-vehicle argmax of ei_value over every navigable node reachable
/// within the vehicle's remaining budget; target mode. The current node is
/// excluded; a vehicle with no affordable candidate is marked done.
PlannerDecision ei_next(const GpPosterior& posterior, const GridGraph& g,
                        const std::vector<NodeId>& current, const AcquisitionParams& p,
                        const std::vector<double>& remaining_budget,
                        const std::vector<bool>* active = nullptr);

/// Boustrophedon sweep over all nodes reachable from start, each exactly
/// once. Rows are visited from the start row downward then upward; sweep
/// direction alternates per visited row.
std::vector<NodeId> lawnmower_order(const GridGraph& g, NodeId start);

/// Coverage baseline: hands out the precomputed sweep order, one
/// contiguous segment per vehicle. Owns the per-vehicle progress cursors.
class FloodingPlan {
 public:
  FloodingPlan(const GridGraph& g, const std::vector<NodeId>& starts);

  PlannerDecision next(const std::vector<NodeId>& current);
  const std::vector<NodeId>& order() const { return order_; }

 private:
  std::vector<NodeId> order_;
  std::vector<std::size_t> segment_begin_;  // per vehicle, plus end sentinel
  std::vector<std::size_t> cursor_;
};

}  // namespace ipp
