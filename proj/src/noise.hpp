#pragma once

#include <array>
#include <cstdint>

#include "core.hpp"

namespace slb {

// Philox-4x32-10 block function.  Output is a pure function of (key, counter),
// so a (seed, layer, stream) triple addresses an independent substream that
// replays bit-exactly no matter how trajectories are scheduled over workers.
namespace philox {
std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                   std::array<std::uint32_t, 2> key);
}

// The three randomness layers draw from disjoint substream ranges of one
// master seed so any layer can be frozen independently.
enum class StreamLayer : std::uint32_t {
  born_position = 0,
  initial_velocity = 1,
  bath = 2,
};

class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, StreamLayer layer, std::uint64_t stream);

  double uniform();  // (0, 1]
  double normal();   // standard normal (Box-Muller)

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 2;       // uniforms available: 2 - buf_pos_
  double spare_ = 0.0;    // cached second Box-Muller deviate
  bool has_spare_ = false;
};

// Bath-noise stream for one trajectory.  Impulses are independent Gaussian
// kicks with variance 2 m gamma k_B T dt, the Ito discretization of
// delta-correlated white noise over one step.
class NoiseStream {
 public:
  NoiseStream(const PhysicalParams& params, double dt, std::uint64_t seed,
              std::uint64_t stream);

  double sample_impulse();  // integral of the random force over one step
  double normal() { return gauss_.normal(); }
  double dt() const { return dt_; }
  double impulse_std() const { return impulse_std_; }

 private:
  GaussianStream gauss_;
  double dt_;
  double impulse_std_;
};

// Maxwell-Boltzmann initial-velocity sampler: mean 0, variance k_B T_s / m.
// T_s = 0 is the delta-function limit and returns exactly 0.
class VelocitySampler {
 public:
  VelocitySampler(double kb_temp_sys, double mass, std::uint64_t seed);
  double sample(std::uint64_t stream) const;

 private:
  double kb_temp_sys_;
  double mass_;
  std::uint64_t seed_;
};

// Born-rule initial position: one draw from the initial Gaussian density.
double sample_born_position(double q0, double sigma0, std::uint64_t seed,
                            std::uint64_t stream);

}  // namespace slb
