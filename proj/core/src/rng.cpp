#include "pcyl/rng.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

namespace pcyl {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t hash_label(std::string_view label) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t SeedDerivation::stream_id() const {
  std::uint64_t h = splitmix64(experiment);
  h = splitmix64(h ^ replicate);
  h = splitmix64(h ^ draw);
  return h;
}

CounterRng::CounterRng(const SeedDerivation& labels)
    : key_{static_cast<std::uint32_t>(labels.master_seed),
           static_cast<std::uint32_t>(labels.master_seed >> 32)},
      stream_(labels.stream_id()) {}

CounterRng::result_type CounterRng::operator()() {
  if (used_ >= 4) {
    buffer_ = Philox4x32::block({static_cast<std::uint32_t>(block_),
                                 static_cast<std::uint32_t>(block_ >> 32),
                                 static_cast<std::uint32_t>(stream_),
                                 static_cast<std::uint32_t>(stream_ >> 32)},
                                key_);
    ++block_;
    used_ = 0;
  }
  const std::uint64_t lo = buffer_[used_];
  const std::uint64_t hi = buffer_[used_ + 1];
  used_ += 2;
  return (hi << 32) | lo;
}

double standard_normal(CounterRng& rng) {
  boost::random::normal_distribution<double> dist;
  return dist(rng);
}

Vec uniform_direction(CounterRng& rng, int d) {
  boost::random::normal_distribution<double> dist;
  for (;;) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = dist(rng);
    const double n = norm(v);
    if (n > 1e-300) return v * (1.0 / n);
  }
}

std::int64_t poisson(CounterRng& rng, double mean) {
  if (mean <= 0.0) return 0;
  boost::random::poisson_distribution<std::int64_t, double> dist(mean);
  return dist(rng);
}

}  // namespace pcyl
