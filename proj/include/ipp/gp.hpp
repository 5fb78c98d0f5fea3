#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "ipp/grid_graph.hpp"

namespace ipp {

struct GpHyperparams {
  double lengthscale = 3.0;  // cells
  double signal_std = 1.0;
  double noise_std = 0.01;

  void validate() const {
    if (lengthscale <= 0.0 || signal_std <= 0.0 || noise_std < 0.0)
      throw std::invalid_argument("gp: invalid hyperparameters");
  }
};

struct Observation {
  NodeId node;
  double value;
};

struct GpPosterior {
  std::vector<double> mean;
  std::vector<double> std;
};

struct IllConditionedError : std::runtime_error {
  IllConditionedError() : std::runtime_error("gp: covariance factorization failed after maximum jitter") {}
};

/// Squared-exponential kernel over cell coordinates.
double rbf_kernel(double ar, double ac, double br, double bc, const GpHyperparams& h);

/// Zero-mean GP regression over graph nodes. Fit factorizes the training
/// covariance once; posterior snapshots are immutable and safe to query
/// concurrently.
class GpModel {
 public:
  /// Observations are canonicalized (sorted by node, then value) before the
  /// factorization, so the posterior depends only on the observation
  /// multiset. Jitter escalates 1e-10 -> x10 up to 1e-4 * signal_var.
  void fit(std::vector<Observation> obs, const GridGraph& g, const GpHyperparams& h);

  bool fitted() const { return fitted_; }

  /// Predictive mean/std at every node (OpenMP-parallel over nodes).
  GpPosterior posterior(const GridGraph& g) const;
  /// Serial reference implementation, kept for testing and benchmarking.
  GpPosterior posterior_serial(const GridGraph& g) const;

 private:
  void predict_node(const GridGraph& g, NodeId n, double& mean, double& std) const;

  bool fitted_ = false;
  GpHyperparams hyper_;
  Eigen::MatrixXd train_coords_;  // n_obs x 2 (row, col)
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

}  // namespace ipp
