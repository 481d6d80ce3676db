#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace robustdp {

enum class PerturbationMode { identity, uniform_noise, adversarial_extremes };

std::string_view to_string(PerturbationMode mode);
std::optional<PerturbationMode> parse_perturbation_mode(std::string_view name);

/// Identifies one backup query. sweep is 0 for the improvement sweep of outer
/// iteration `iteration` and 1..M for its partial-evaluation sweeps.
struct QueryTag {
  int iteration = 0;
  int sweep = 0;
  int state = 0;
  int action = 0;
};

/// Models the inexact computation of a robust backup: every answer is within
/// `bound` (= lambda * delta) of the exact value. Stateless; the perturbation
/// is a pure function of (seed, tag), so query order never matters.
class PerturbationOracle {
 public:
  PerturbationOracle() = default;
  PerturbationOracle(PerturbationMode mode, double bound, std::uint64_t seed, bool argmax_lock = false);

  static PerturbationOracle identity() { return {}; }

  double perturb(double exact, const QueryTag& tag) const { return exact + noise(tag); }
  double noise(const QueryTag& tag) const;

  PerturbationMode mode() const { return mode_; }
  double bound() const { return bound_; }
  std::uint64_t seed() const { return seed_; }
  /// When set, actions (and worst-case rows) are selected from exact backups
  /// and the perturbation is added to the selected value afterwards.
  bool argmax_lock() const { return argmax_lock_; }
  bool is_exact() const { return mode_ == PerturbationMode::identity || bound_ == 0.0; }

 private:
  PerturbationMode mode_ = PerturbationMode::identity;
  double bound_ = 0.0;
  std::uint64_t seed_ = 0;
  bool argmax_lock_ = false;
};

}  // namespace robustdp
