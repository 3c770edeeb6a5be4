#include "trajectories.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace slb {

namespace {

unsigned resolve_threads(unsigned requested, std::size_t n) {
  unsigned t = requested;
  if (t == 0) {
    if (const char* env = std::getenv("SLB_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) t = (unsigned)v;
    }
  }
  if (t == 0) t = std::thread::hardware_concurrency();
  if (t == 0) t = 1;
  if ((std::size_t)t > n) t = (unsigned)n;
  return t;
}

}  // namespace

TrajectoryEnsemble build_ensemble(const PhysicalParams& params, const Potential& pot,
                                  double q0, double v0_base, double sigma0,
                                  std::size_t n, std::uint64_t seed, double dt,
                                  double t_end, const EnsembleOptions& opts) {
  if (n < 1) throw std::invalid_argument("build_ensemble: n must be >= 1");
  if (!(dt > 0.0) || !(t_end >= dt))
    throw std::invalid_argument("build_ensemble: need dt > 0 and t_end >= dt");

  std::size_t steps = (std::size_t)std::ceil(t_end / dt - 1e-9);
  std::size_t stride = 1;
  if (opts.max_samples >= 2 && steps > opts.max_samples - 1) {
    stride = (steps + opts.max_samples - 2) / (opts.max_samples - 1);
    steps = ((steps + stride - 1) / stride) * stride;  // keep the grid uniform
  }
  const std::size_t n_samples = steps / stride + 1;

  TrajectoryEnsemble ens;
  ens.params = params;
  ens.potential = pot;
  ens.q0 = q0;
  ens.sigma0 = sigma0;
  ens.seed = seed;
  ens.dt = dt;
  ens.stride = stride;
  ens.classical_width = opts.classical_width;

  const WidthPath width =
      integrate_pinney(params, pot, sigma0, dt, (double)steps * dt, opts.classical_width);
  ens.time.resize(n_samples);
  ens.sigma.resize(n_samples);
  ens.sigma_dot.resize(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) {
    const std::size_t k = j * stride;
    ens.time[j] = (double)k * dt;
    ens.sigma[j] = width.sigma[k];
    ens.sigma_dot[j] = width.sigma_dot[k];
  }

  ens.traj.resize(n);
  const VelocitySampler vel(params.kb_temp_sys, params.mass, seed);

  // With the bath noise amplitude zero and a common initial velocity, every
  // center path is identical: integrate it once and share it.
  const bool zero_noise = params.friction == 0.0 || params.kb_temp == 0.0;
  const bool common_v0 = opts.fixed_v0.has_value() || params.kb_temp_sys == 0.0;
  if (zero_noise && common_v0) {
    const double v0 = opts.fixed_v0 ? *opts.fixed_v0 : v0_base;
    NoiseStream ns(params, dt, seed, 0);
    LangevinStepper st(params, pot, q0, v0, ns, dt, opts.scheme);
    ens.shared_center = true;
    ens.center_q.resize(n_samples);
    ens.center_v.resize(n_samples);
    ens.center_q[0] = q0;
    ens.center_v[0] = v0;
    try {
      std::size_t j = 1;
      for (std::size_t k = 1; k <= steps; ++k) {
        st.step();
        if (k % stride == 0) {
          ens.center_q[j] = st.q();
          ens.center_v[j] = st.v();
          ++j;
        }
      }
    } catch (const numerical_error& e) {
      throw numerical_error("trajectory 0 failed: " + std::string(e.what()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      TrajectoryEnsemble::Trajectory& tr = ens.traj[i];
      tr.stream = i;
      tr.x0 = opts.fixed_x0 ? *opts.fixed_x0 : sample_born_position(q0, sigma0, seed, i);
      tr.v0 = v0;
    }
    return ens;
  }

  const unsigned n_threads = resolve_threads(opts.n_threads, n);
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};

  auto worker = [&](unsigned wid) {
    for (std::size_t i = wid; i < n; i += n_threads) {
      if (failed.load(std::memory_order_relaxed)) return;
      try {
        TrajectoryEnsemble::Trajectory& tr = ens.traj[i];
        tr.stream = i;
        tr.x0 = opts.fixed_x0 ? *opts.fixed_x0 : sample_born_position(q0, sigma0, seed, i);
        tr.v0 = opts.fixed_v0 ? *opts.fixed_v0 : v0_base + vel.sample(i);
        tr.q.resize(n_samples);
        tr.v.resize(n_samples);
        NoiseStream ns(params, dt, seed, i);
        LangevinStepper st(params, pot, q0, tr.v0, ns, dt, opts.scheme);
        tr.q[0] = q0;
        tr.v[0] = tr.v0;
        std::size_t j = 1;
        for (std::size_t k = 1; k <= steps; ++k) {
          st.step();
          if (k % stride == 0) {
            tr.q[j] = st.q();
            tr.v[j] = st.v();
            ++j;
          }
        }
      } catch (...) {
        bool expected = false;
        if (failed.compare_exchange_strong(expected, true)) {
          try {
            std::throw_with_nested(
                numerical_error("trajectory " + std::to_string(i) + " failed"));
          } catch (...) {
            first_error = std::current_exception();
          }
        }
        return;
      }
    }
  };

  if (n_threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return ens;
}

}  // namespace slb
