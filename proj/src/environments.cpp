#include "ipp/environments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ipp {

double node_distance_m(const GridGraph& g, NodeId a, NodeId b) {
  const auto [ar, ac] = g.node_rc(a);
  const auto [br, bc] = g.node_rc(b);
  const double dr = (ar - br) * g.cell_side();
  const double dc = (ac - bc) * g.cell_side();
  return std::sqrt(dr * dr + dc * dc);
}

double field_mse(const std::vector<double>& mean, const std::vector<double>& truth) {
  if (mean.size() != truth.size()) throw std::invalid_argument("mse: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double d = mean[i] - truth[i];
    acc += d * d;
  }
  return acc / static_cast<double>(mean.size());
}

GpBasedEnv::GpBasedEnv(const GridGraph& g, ScalarField ground_truth, GpHyperparams hyper,
                       double noise_std, std::uint64_t seed)
    : graph_(g),
      truth_(std::move(ground_truth)),
      hyper_(hyper),
      noise_std_(noise_std),
      rng_(seed),
      f_best_(-std::numeric_limits<double>::infinity()) {
  if (truth_.values.size() != g.node_count())
    throw std::invalid_argument("gp env: ground truth size mismatch");
  hyper_.validate();
}

double GpBasedEnv::sense(NodeId n) { return sample(truth_, n, noise_std_, rng_); }

void GpBasedEnv::ingest(const Visit& v, double value) {
  if (!graph_.valid(v.node)) throw std::out_of_range("gp env: invalid node");
  log_.push_back({v.node, value});
  f_best_ = std::max(f_best_, value);
  visited_.insert(v.node);
  dirty_ = true;
}

const GpPosterior& GpBasedEnv::posterior() const {
  if (dirty_) {
    if (log_.empty()) throw std::logic_error("gp env: posterior requested before any observation");
    model_.fit(log_, graph_, hyper_);
    posterior_ = model_.posterior(graph_);
    dirty_ = false;
  }
  return posterior_;
}

std::optional<double> GpBasedEnv::mse() const {
  if (log_.empty()) return std::nullopt;
  return field_mse(posterior().mean, truth_.values);
}

std::optional<double> GpBasedEnv::mean_posterior_std() const {
  if (log_.empty()) return std::nullopt;
  const auto& s = posterior().std;
  double acc = 0.0;
  for (double v : s) acc += v;
  return acc / static_cast<double>(s.size());
}

TrashCleanEnv::TrashCleanEnv(const GridGraph& g, std::map<NodeId, int> trash, double vision_radius)
    : graph_(g), trash_(std::move(trash)), vision_radius_(vision_radius) {
  for (const auto& [node, count] : trash_) {
    if (!g.valid(node) || count < 0) throw std::invalid_argument("trash env: bad trash placement");
    initial_ += count;
  }
}

double TrashCleanEnv::sense(NodeId n) {
  auto it = trash_.find(n);
  return it == trash_.end() ? 0.0 : static_cast<double>(it->second);
}

void TrashCleanEnv::ingest(const Visit& v, double) {
  if (!graph_.valid(v.node)) throw std::out_of_range("trash env: invalid node");
  visited_.insert(v.node);
  // detection: everything within the (inclusive) vision radius
  for (const auto& [node, count] : trash_)
    if (node_distance_m(graph_, v.node, node) <= vision_radius_) detected_[node] = count;
  // collection at the visited node itself
  auto it = trash_.find(v.node);
  if (it != trash_.end()) {
    collected_ += it->second;
    trash_.erase(it);
    detected_.erase(v.node);
  }
}

int TrashCleanEnv::remaining() const {
  int n = 0;
  for (const auto& [node, count] : trash_) n += count;
  return n;
}

OilSpillEnv::OilSpillEnv(const GridGraph& g, ScalarField contamination, double view_radius)
    : graph_(g), truth_(std::move(contamination)), view_radius_(view_radius) {
  if (truth_.values.size() != g.node_count())
    throw std::invalid_argument("oil env: contamination size mismatch");
  belief_.assign(g.node_count(), std::nullopt);
}

double OilSpillEnv::sense(NodeId n) { return truth_.values[n]; }

void OilSpillEnv::ingest(const Visit& v, double) {
  if (!graph_.valid(v.node)) throw std::out_of_range("oil env: invalid node");
  visited_.insert(v.node);
  for (NodeId n = 0; n < static_cast<NodeId>(graph_.node_count()); ++n)
    if (node_distance_m(graph_, v.node, n) <= view_radius_) belief_[n] = truth_.values[n];
}

}  // namespace ipp
