#include "ipp/gp.hpp"

#include <algorithm>
#include <cmath>

namespace ipp {

double rbf_kernel(double ar, double ac, double br, double bc, const GpHyperparams& h) {
  const double dr = ar - br, dc = ac - bc;
  const double d2 = dr * dr + dc * dc;
  return h.signal_std * h.signal_std * std::exp(-d2 / (2.0 * h.lengthscale * h.lengthscale));
}

void GpModel::fit(std::vector<Observation> obs, const GridGraph& g, const GpHyperparams& h) {
  h.validate();
  if (obs.empty()) throw std::invalid_argument("gp: fit requires at least one observation");
  for (const auto& o : obs) {
    if (!g.valid(o.node)) throw std::out_of_range("gp: invalid observation node");
    if (!std::isfinite(o.value)) throw std::invalid_argument("gp: non-finite observation value");
  }
  // canonical order: the posterior then depends only on the multiset
  std::sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) {
    return a.node != b.node ? a.node < b.node : a.value < b.value;
  });

  const auto n = static_cast<Eigen::Index>(obs.size());
  train_coords_.resize(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [r, c] = g.node_rc(obs[i].node);
    train_coords_(i, 0) = r;
    train_coords_(i, 1) = c;
    y(i) = obs[i].value;
  }

  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double k = rbf_kernel(train_coords_(i, 0), train_coords_(i, 1), train_coords_(j, 0),
                                  train_coords_(j, 1), h);
      K(i, j) = k;
      K(j, i) = k;
    }
  K.diagonal().array() += h.noise_std * h.noise_std;

  const double max_jitter = 1e-4 * h.signal_std * h.signal_std;
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd Kj = K;
    if (jitter > 0.0) Kj.diagonal().array() += jitter;
    llt_.compute(Kj);
    if (llt_.info() == Eigen::Success) break;
    jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
    if (jitter > max_jitter) throw IllConditionedError();
  }

  alpha_ = llt_.solve(y);
  hyper_ = h;
  fitted_ = true;
}

void GpModel::predict_node(const GridGraph& g, NodeId n, double& mean, double& std_out) const {
  const auto [r, c] = g.node_rc(n);
  const auto m = train_coords_.rows();
  Eigen::VectorXd k(m);
  for (Eigen::Index i = 0; i < m; ++i)
    k(i) = rbf_kernel(r, c, train_coords_(i, 0), train_coords_(i, 1), hyper_);
  mean = k.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(k);
  const double var = hyper_.signal_std * hyper_.signal_std - v.squaredNorm();
  std_out = std::sqrt(std::max(0.0, var));
}

GpPosterior GpModel::posterior(const GridGraph& g) const {
  if (!fitted_) throw std::logic_error("gp: posterior before fit");
  GpPosterior p;
  const auto n = static_cast<NodeId>(g.node_count());
  p.mean.resize(n);
  p.std.resize(n);
#pragma omp parallel for schedule(static)
  for (NodeId i = 0; i < n; ++i) predict_node(g, i, p.mean[i], p.std[i]);
  return p;
}

GpPosterior GpModel::posterior_serial(const GridGraph& g) const {
  if (!fitted_) throw std::logic_error("gp: posterior before fit");
  GpPosterior p;
  const auto n = static_cast<NodeId>(g.node_count());
  p.mean.resize(n);
  p.std.resize(n);
  for (NodeId i = 0; i < n; ++i) predict_node(g, i, p.mean[i], p.std[i]);
  return p;
}

}  // namespace ipp
