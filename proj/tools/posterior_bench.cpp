#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "ipp/field.hpp"
#include "ipp/gp.hpp"
#include "ipp/grid_graph.hpp"
#include "ipp/rng.hpp"

// Times the parallel posterior kernel against the serial reference on a
// synthetic open-water grid and checks they agree to the last bit that
// matters.

int main(int argc, char** argv) {
  const int size = argc > 1 ? std::atoi(argv[1]) : 120;
  const int n_obs = argc > 2 ? std::atoi(argv[2]) : 200;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 5;

  std::string ascii;
  for (int r = 0; r < size; ++r) {
    ascii.append(size, '1');
    ascii.push_back('\n');
  }
  const auto mask = ipp::OccupancyMask::from_ascii(ascii);
  ipp::GeoReference geo;
  geo.rows = size;
  geo.cols = size;
  const auto graph = ipp::GridGraph::build_from_mask(mask, geo);

  ipp::Rng rng(42);
  std::vector<ipp::Observation> obs;
  for (int i = 0; i < n_obs; ++i)
    obs.push_back({static_cast<ipp::NodeId>(rng.uniform_index(graph.node_count())),
                   rng.normal()});

  ipp::GpModel model;
  model.fit(obs, graph, {});

  using clock = std::chrono::steady_clock;
  auto time_it = [&](auto&& fn) {
    double best = 1e300;
    ipp::GpPosterior out;
    for (int i = 0; i < reps; ++i) {
      const auto t0 = clock::now();
      out = fn();
      const auto t1 = clock::now();
      best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return std::pair{best, out};
  };

  const auto [t_par, p_par] = time_it([&] { return model.posterior(graph); });
  const auto [t_ser, p_ser] = time_it([&] { return model.posterior_serial(graph); });

  double max_diff = 0.0;
  for (std::size_t i = 0; i < p_par.mean.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(p_par.mean[i] - p_ser.mean[i]));
    max_diff = std::max(max_diff, std::abs(p_par.std[i] - p_ser.std[i]));
  }

  std::printf("grid %dx%d (%zu nodes), %d observations, best of %d reps\n", size, size,
              graph.node_count(), n_obs, reps);
  std::printf("parallel posterior: %8.2f ms\n", t_par);
  std::printf("serial reference:   %8.2f ms\n", t_ser);
  std::printf("speedup:            %8.2fx\n", t_ser / t_par);
  std::printf("max |par - ser|:    %.3e\n", max_diff);
  return max_diff < 1e-12 ? 0 : 1;
}
