#include "noise.hpp"

#include <cmath>

namespace slb {

namespace philox {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = (std::uint64_t)kMul0 * c[0];
  const std::uint64_t p1 = (std::uint64_t)kMul1 * c[2];
  const std::uint32_t hi0 = (std::uint32_t)(p0 >> 32), lo0 = (std::uint32_t)p0;
  const std::uint32_t hi1 = (std::uint32_t)(p1 >> 32), lo1 = (std::uint32_t)p1;
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}
}  // namespace

std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                   std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    round_once(counter, key);
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

}  // namespace philox

GaussianStream::GaussianStream(std::uint64_t seed, StreamLayer layer, std::uint64_t stream) {
  key_ = {(std::uint32_t)seed, (std::uint32_t)(seed >> 32)};
  // layer folded into the high stream word; streams stay independent for
  // indices below 2^32 per layer.
  stream_ = {(std::uint32_t)stream,
             (std::uint32_t)(stream >> 32) ^ ((std::uint32_t)layer << 29)};
}

void GaussianStream::refill() {
  buf_ = philox::block({(std::uint32_t)block_, (std::uint32_t)(block_ >> 32),
                        stream_[0], stream_[1]},
                       key_);
  ++block_;
  buf_pos_ = 0;
}

double GaussianStream::uniform() {
  if (buf_pos_ >= 2) refill();
  const std::uint64_t hi = buf_[2 * buf_pos_];
  const std::uint64_t lo = buf_[2 * buf_pos_ + 1];
  ++buf_pos_;
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return ((double)bits + 1.0) * 0x1.0p-53;
}

double GaussianStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

NoiseStream::NoiseStream(const PhysicalParams& params, double dt, std::uint64_t seed,
                         std::uint64_t stream)
    : gauss_(seed, StreamLayer::bath, stream), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("NoiseStream: dt must be > 0");
  impulse_std_ =
      std::sqrt(2.0 * params.mass * params.friction * params.kb_temp * dt);
}

double NoiseStream::sample_impulse() {
  if (impulse_std_ == 0.0) return 0.0;
  return impulse_std_ * gauss_.normal();
}

VelocitySampler::VelocitySampler(double kb_temp_sys, double mass, std::uint64_t seed)
    : kb_temp_sys_(kb_temp_sys), mass_(mass), seed_(seed) {
  if (kb_temp_sys < 0.0) throw std::invalid_argument("VelocitySampler: kts must be >= 0");
}

double VelocitySampler::sample(std::uint64_t stream) const {
  if (kb_temp_sys_ == 0.0) return 0.0;
  GaussianStream g(seed_, StreamLayer::initial_velocity, stream);
  return std::sqrt(kb_temp_sys_ / mass_) * g.normal();
}

double sample_born_position(double q0, double sigma0, std::uint64_t seed,
                            std::uint64_t stream) {
  GaussianStream g(seed, StreamLayer::born_position, stream);
  return q0 + sigma0 * g.normal();
}

}  // namespace slb
