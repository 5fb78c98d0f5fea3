#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ipp/field.hpp"
#include "ipp/gp.hpp"
#include "ipp/grid_graph.hpp"
#include "ipp/rng.hpp"

namespace ipp {

struct Visit {
  int vehicle;
  NodeId node;
};

/// One metrics row per decision step.
struct StepRecord {
  int step = 0;
  double sim_time = 0.0;
  std::vector<double> traveled;            // per vehicle, meters
  std::optional<double> mse;               // only when ground truth + posterior exist
  std::optional<double> mean_std;
  double coverage = 0.0;
};

struct MissionMetrics {
  std::vector<StepRecord> records;
};

/// Single-writer mission environment. Implementations ingest measurement
/// values reported by a fleet (local or remote) and expose per-mission
/// metrics.
class Environment {
 public:
  virtual ~Environment() = default;

  /// Ground-truth measurement at a node, as a vehicle's sensor would
  /// report it. Used by local fleets and synthetic-mode backends.
  virtual double sense(NodeId n) = 0;
  /// Integrates a reported measurement into the environment state.
  virtual void ingest(const Visit& v, double value) = 0;

  virtual std::optional<double> mse() const { return std::nullopt; }
  virtual std::optional<double> mean_posterior_std() const { return std::nullopt; }

  const std::set<NodeId>& visited() const { return visited_; }
  double coverage(const GridGraph& g) const {
    return static_cast<double>(visited_.size()) / static_cast<double>(g.node_count());
  }

 protected:
  std::set<NodeId> visited_;
};

/// GP monitoring mission: every measurement feeds a Gaussian-process model
/// of the scalar field. Refit is lazy (on posterior access).
class GpBasedEnv : public Environment {
 public:
  GpBasedEnv(const GridGraph& g, ScalarField ground_truth, GpHyperparams hyper,
             double noise_std, std::uint64_t seed);

  double sense(NodeId n) override;
  void ingest(const Visit& v, double value) override;

  const GpPosterior& posterior() const;
  const std::vector<Observation>& observation_log() const { return log_; }
  double f_best() const { return f_best_; }
  Rng& rng() { return rng_; }
  double noise_std() const { return noise_std_; }
  const ScalarField& ground_truth() const { return truth_; }

  std::optional<double> mse() const override;
  std::optional<double> mean_posterior_std() const override;

 private:
  const GridGraph& graph_;
  ScalarField truth_;
  GpHyperparams hyper_;
  double noise_std_;
  mutable Rng rng_;
  std::vector<Observation> log_;
  double f_best_;
  mutable GpModel model_;
  mutable GpPosterior posterior_;
  mutable bool dirty_ = true;
};

/// Floating-trash mission: items at visited nodes are collected; items
/// within the vision radius are permanently detected.
class TrashCleanEnv : public Environment {
 public:
  TrashCleanEnv(const GridGraph& g, std::map<NodeId, int> trash, double vision_radius);

  double sense(NodeId n) override;  // trash count at node
  void ingest(const Visit& v, double value) override;

  int collected() const { return collected_; }
  int remaining() const;
  int initial() const { return initial_; }
  const std::map<NodeId, int>& detected() const { return detected_; }
  const std::map<NodeId, int>& trash() const { return trash_; }

 private:
  const GridGraph& graph_;
  std::map<NodeId, int> trash_;
  std::map<NodeId, int> detected_;  // permanent memory map
  double vision_radius_;
  int collected_ = 0;
  int initial_ = 0;
};

/// Oil-spill delimitation: belief values are deterministic copies of the
/// contamination truth, revealed within the view radius of each visit.
class OilSpillEnv : public Environment {
 public:
  OilSpillEnv(const GridGraph& g, ScalarField contamination, double view_radius);

  double sense(NodeId n) override;
  void ingest(const Visit& v, double value) override;

  const std::vector<std::optional<double>>& belief() const { return belief_; }
  const ScalarField& ground_truth() const { return truth_; }

 private:
  const GridGraph& graph_;
  ScalarField truth_;
  std::vector<std::optional<double>> belief_;
  double view_radius_;
};

/// Planar distance in meters between two node cell centers.
double node_distance_m(const GridGraph& g, NodeId a, NodeId b);

/// MSE of a posterior mean against ground truth, averaged over navigable
/// nodes only.
double field_mse(const std::vector<double>& mean, const std::vector<double>& truth);

}  // namespace ipp
