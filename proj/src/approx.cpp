#include "robustdp/approx.hpp"

#include <stdexcept>

namespace robustdp {

namespace {

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t key(std::uint64_t seed, const QueryTag& tag) {
  std::uint64_t h = mix(seed);
  for (int field : {tag.iteration, tag.sweep, tag.state, tag.action}) {
    h = mix(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(field)));
  }
  return h;
}

}  // namespace

std::string_view to_string(PerturbationMode mode) {
  switch (mode) {
    case PerturbationMode::identity:
      return "identity";
    case PerturbationMode::uniform_noise:
      return "uniform_noise";
    case PerturbationMode::adversarial_extremes:
      return "adversarial_extremes";
  }
  return "identity";
}

std::optional<PerturbationMode> parse_perturbation_mode(std::string_view name) {
  if (name == "identity") return PerturbationMode::identity;
  if (name == "uniform_noise" || name == "uniform") return PerturbationMode::uniform_noise;
  if (name == "adversarial_extremes" || name == "adversarial") return PerturbationMode::adversarial_extremes;
  return std::nullopt;
}

PerturbationOracle::PerturbationOracle(PerturbationMode mode, double bound, std::uint64_t seed, bool argmax_lock)
    : mode_(mode), bound_(bound), seed_(seed), argmax_lock_(argmax_lock) {
  if (!(bound >= 0.0)) throw std::invalid_argument("perturbation bound must be nonnegative");
}

double PerturbationOracle::noise(const QueryTag& tag) const {
  switch (mode_) {
    case PerturbationMode::identity:
      return 0.0;
    case PerturbationMode::adversarial_extremes: {
      const int parity = (tag.iteration + tag.sweep + tag.state + tag.action) & 1;
      return parity == 0 ? bound_ : -bound_;
    }
    case PerturbationMode::uniform_noise: {
      // 53 random bits -> [0, 1], then affine map onto [-bound, bound].
      const double unit = static_cast<double>(key(seed_, tag) >> 11) * 0x1.0p-53;
      const double eta = bound_ * (2.0 * unit - 1.0);
      return eta > bound_ ? bound_ : (eta < -bound_ ? -bound_ : eta);
    }
  }
  return 0.0;
}

}  // namespace robustdp
