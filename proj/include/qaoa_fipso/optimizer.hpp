#ifndef QAOA_FIPSO_OPTIMIZER_HPP
#define QAOA_FIPSO_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qaoa_fipso/graph.hpp"
#include "qaoa_fipso/rng.hpp"

namespace qaoa_fipso {

/// How a particle refines its social move.
///   adam_fd      social move, then an Adam step along a central-difference gradient
///   adam_swarm   velocity = inertia + Adam-normalized swarm-influence term
///   fipso_plain  social move only
enum class SwarmMode { adam_fd, adam_swarm, fipso_plain };

std::string_view to_string(SwarmMode mode);
/// Throws ArgumentError for unknown names.
SwarmMode parse_swarm_mode(std::string_view name);

struct Bounds {
  double lo = -std::numbers::pi;
  double hi = std::numbers::pi;
};

struct SwarmConfig {
  int swarm_size = 20;
  int max_iters = 50;
  double w_max = 0.9;
  double w_min = 0.4;
  double c = 2.0;
  double eta = 0.05;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double epsilon = 1e-8;
  double lambda = 1.0;
  double fd_step = 1e-3;
  /// Empty means [-pi, pi] in every dimension; a single entry is broadcast.
  std::vector<Bounds> bounds;
  SwarmMode mode = SwarmMode::adam_fd;
  std::uint64_t seed = 0;

  /// Throws ArgumentError if any field is out of range for a `dim`-dimensional search.
  void validate(std::size_t dim) const;
  std::vector<Bounds> bounds_for(std::size_t dim) const;
};

/// Every field optional; absent fields keep their defaults. Unknown keys are rejected.
SwarmConfig swarm_config_from_json(std::string_view text);
std::string swarm_config_to_json(const SwarmConfig& cfg);

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> pbest_position;
  double pbest_loss = 0.0;
  std::vector<double> m;   // Adam first moment
  std::vector<double> v2;  // Adam second moment
  int adam_steps = 0;
};

struct OptimizeResult {
  std::vector<double> best_position;
  double best_loss = 0.0;
  /// Expected cut at best_position; NaN for non-QAOA objectives.
  double best_expectation = 0.0;
  /// Global-best loss after each iteration.
  std::vector<double> trace;
  std::size_t evaluations = 0;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

/// Called after every iteration with the 1-based iteration number.
using IterationObserver = std::function<void(int, std::span<const Particle>)>;

/// c_hat / c_target, or 0 when the target is 0.
double approx_ratio(double c_hat, double c_target);

/// (c_hat - c_target)^2 + lambda (1 - AR)^2.
double loss_from_cut(double c_hat, double c_target, double lambda);

/// Loss of QAOA angles `theta` on `g`. Throws ArgumentError for a negative target.
double objective(std::span<const double> theta, const Graph& g, double c_target, double lambda);

/// Central differences; throws NumericalError if f returns a non-finite value.
std::vector<double> finite_diff_grad(const ObjectiveFn& f, std::span<const double> theta, double h);

/// Fully informed pull of particle `i` toward every personal best, one U(0,1)
/// scalar per contributing particle drawn in particle order.
std::vector<double> swarm_influence_grad(std::size_t i, std::span<const Particle> swarm, double c,
                                         Rng& rng);
/// Same, drawing the U(0,1) scalars from `uniform01`.
std::vector<double> swarm_influence_grad(std::size_t i, std::span<const Particle> swarm, double c,
                                         const std::function<double()>& uniform01);

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eta = 0.05;
  double epsilon = 1e-8;
};

struct AdamStep {
  std::vector<double> step;
  std::vector<double> m_hat;
  std::vector<double> v_hat;
};

/// Updates the moment accumulators in place and returns the bias-corrected
/// step eta * m_hat / (sqrt(v_hat) + epsilon). `t` is the 1-based step count.
AdamStep adam_update(std::span<double> m, std::span<double> v2, int t,
                     std::span<const double> grad, const AdamParams& params);

/// Adam-FIPSO on an arbitrary objective over `dim` dimensions.
OptimizeResult swarm_minimize(const ObjectiveFn& f, std::size_t dim, const SwarmConfig& cfg,
                              const IterationObserver& observer = {});

/// Adam-FIPSO on the QAOA loss of depth `p` for graph `g`.
OptimizeResult adam_fipso_optimize(const Graph& g, int p, double c_target, const SwarmConfig& cfg,
                                   const IterationObserver& observer = {});

/// 2p independent draws from U[-pi, pi].
std::vector<double> random_params(int p, Rng& rng);

}  // namespace qaoa_fipso

#endif  // QAOA_FIPSO_OPTIMIZER_HPP
