#include "qaoa_fipso/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/qaoasim.hpp"

namespace qaoa_fipso {

double approx_ratio(double c_hat, double c_target) {
  return c_target != 0.0 ? c_hat / c_target : 0.0;
}

double loss_from_cut(double c_hat, double c_target, double lambda) {
  if (c_target < 0.0) throw ArgumentError("target cut must be non-negative");
  const double miss = c_hat - c_target;
  const double ar_gap = 1.0 - approx_ratio(c_hat, c_target);
  return miss * miss + lambda * ar_gap * ar_gap;
}

double objective(std::span<const double> theta, const Graph& g, double c_target, double lambda) {
  if (c_target < 0.0) throw ArgumentError("target cut must be non-negative");
  QaoaSimulator sim(g);
  return loss_from_cut(sim.expectation(theta), c_target, lambda);
}

std::vector<double> finite_diff_grad(const ObjectiveFn& f, std::span<const double> theta, double h) {
  if (!(h > 0.0)) throw ArgumentError("finite-difference step must be positive");
  std::vector<double> probe(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  for (std::size_t d = 0; d < theta.size(); ++d) {
    probe[d] = theta[d] + h;
    const double up = f(probe);
    probe[d] = theta[d] - h;
    const double down = f(probe);
    probe[d] = theta[d];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericalError("objective returned a non-finite value while differencing dimension " +
                           std::to_string(d));
    }
    grad[d] = (up - down) / (2.0 * h);
  }
  return grad;
}

std::vector<double> swarm_influence_grad(std::size_t i, std::span<const Particle> swarm, double c,
                                         Rng& rng) {
  return swarm_influence_grad(i, swarm, c, [&rng] { return rng.uniform(); });
}

std::vector<double> swarm_influence_grad(std::size_t i, std::span<const Particle> swarm, double c,
                                         const std::function<double()>& uniform01) {
  if (swarm.empty()) throw ArgumentError("swarm is empty");
  if (i >= swarm.size()) throw ArgumentError("particle index out of range");
  const auto& x = swarm[i].position;
  std::vector<double> g(x.size(), 0.0);
  for (const Particle& other : swarm) {
    const double r = uniform01();
    for (std::size_t d = 0; d < x.size(); ++d) g[d] += c * r * (other.pbest_position[d] - x[d]);
  }
  const double inv = 1.0 / static_cast<double>(swarm.size());
  for (double& gd : g) gd *= inv;
  return g;
}

AdamStep adam_update(std::span<double> m, std::span<double> v2, int t,
                     std::span<const double> grad, const AdamParams& params) {
  if (t < 1) throw ArgumentError("Adam step counter must be >= 1");
  if (m.size() != grad.size() || v2.size() != grad.size()) {
    throw DimensionError("Adam moment and gradient lengths differ");
  }
  const double c1 = 1.0 - std::pow(params.beta1, t);
  const double c2 = 1.0 - std::pow(params.beta2, t);
  AdamStep out{std::vector<double>(grad.size()), std::vector<double>(grad.size()),
               std::vector<double>(grad.size())};
  for (std::size_t d = 0; d < grad.size(); ++d) {
    m[d] = params.beta1 * m[d] + (1.0 - params.beta1) * grad[d];
    v2[d] = params.beta2 * v2[d] + (1.0 - params.beta2) * grad[d] * grad[d];
    out.m_hat[d] = m[d] / c1;
    out.v_hat[d] = v2[d] / c2;
    out.step[d] = params.eta * out.m_hat[d] / (std::sqrt(out.v_hat[d]) + params.epsilon);
  }
  return out;
}

namespace {

class Swarm {
 public:
  Swarm(const ObjectiveFn& f, std::size_t dim, const SwarmConfig& cfg)
      : f_(f), dim_(dim), cfg_(cfg), bounds_(cfg.bounds_for(dim)), rng_(cfg.seed) {}

  OptimizeResult run(const IterationObserver& observer) {
    initialize();
    for (int t = 1; t <= cfg_.max_iters; ++t) {
      const double w = cfg_.w_max - (static_cast<double>(t) / cfg_.max_iters) * (cfg_.w_max - cfg_.w_min);
      for (std::size_t i = 0; i < particles_.size(); ++i) step_particle(i, w);
      result_.trace.push_back(result_.best_loss);
      if (observer) observer(t, particles_);
    }
    return std::move(result_);
  }

 private:
  double evaluate(std::span<const double> theta) {
    ++result_.evaluations;
    const double loss = f_(theta);
    if (!std::isfinite(loss)) throw NumericalError("objective returned a non-finite value");
    return loss;
  }

  void initialize() {
    particles_.resize(static_cast<std::size_t>(cfg_.swarm_size));
    for (Particle& p : particles_) {
      p.position.resize(dim_);
      for (std::size_t d = 0; d < dim_; ++d) p.position[d] = rng_.uniform(bounds_[d].lo, bounds_[d].hi);
      p.velocity.assign(dim_, 0.0);
      p.m.assign(dim_, 0.0);
      p.v2.assign(dim_, 0.0);
      p.pbest_position = p.position;
      p.pbest_loss = evaluate(p.position);
    }
    result_.best_loss = std::numeric_limits<double>::infinity();
    for (const Particle& p : particles_) {
      if (p.pbest_loss < result_.best_loss) {
        result_.best_loss = p.pbest_loss;
        result_.best_position = p.pbest_position;
      }
    }
  }

  // Velocity += (c/S) sum_j r_j (pbest_j - x_i), one scalar r_j per contributor.
  void social_move(Particle& p, double w) {
    std::vector<double> delta(dim_, 0.0);
    for (const Particle& other : particles_) {
      const double r = rng_.uniform();
      for (std::size_t d = 0; d < dim_; ++d) delta[d] += r * (other.pbest_position[d] - p.position[d]);
    }
    const double scale = cfg_.c / static_cast<double>(particles_.size());
    for (std::size_t d = 0; d < dim_; ++d) p.velocity[d] = w * p.velocity[d] + scale * delta[d];
  }

  void step_particle(std::size_t i, double w) {
    Particle& p = particles_[i];
    const AdamParams adam{cfg_.adam_beta1, cfg_.adam_beta2, cfg_.eta, cfg_.epsilon};
    std::vector<double> candidate(dim_);

    switch (cfg_.mode) {
      case SwarmMode::fipso_plain:
        social_move(p, w);
        for (std::size_t d = 0; d < dim_; ++d) candidate[d] = p.position[d] + p.velocity[d];
        break;
      case SwarmMode::adam_fd: {
        social_move(p, w);
        for (std::size_t d = 0; d < dim_; ++d) candidate[d] = p.position[d] + p.velocity[d];
        ObjectiveFn counted = [this](std::span<const double> x) { return evaluate(x); };
        const auto grad = finite_diff_grad(counted, candidate, cfg_.fd_step);
        const auto adam_step = adam_update(p.m, p.v2, ++p.adam_steps, grad, adam);
        for (std::size_t d = 0; d < dim_; ++d) candidate[d] -= adam_step.step[d];
        break;
      }
      case SwarmMode::adam_swarm: {
        const auto grad = swarm_influence_grad(i, particles_, cfg_.c, rng_);
        const auto adam_step = adam_update(p.m, p.v2, ++p.adam_steps, grad, adam);
        for (std::size_t d = 0; d < dim_; ++d) {
          p.velocity[d] = w * p.velocity[d] + adam_step.step[d];
          candidate[d] = p.position[d] + p.velocity[d];
        }
        break;
      }
    }

    for (std::size_t d = 0; d < dim_; ++d) {
      candidate[d] = std::clamp(candidate[d], bounds_[d].lo, bounds_[d].hi);
      p.velocity[d] = candidate[d] - p.position[d];
    }
    p.position = std::move(candidate);

    const double loss = evaluate(p.position);
    if (loss < p.pbest_loss) {
      p.pbest_loss = loss;
      p.pbest_position = p.position;
      if (loss < result_.best_loss) {
        result_.best_loss = loss;
        result_.best_position = p.position;
      }
    }
  }

  const ObjectiveFn& f_;
  std::size_t dim_;
  const SwarmConfig& cfg_;
  std::vector<Bounds> bounds_;
  Rng rng_;
  std::vector<Particle> particles_;
  OptimizeResult result_;
};

}  // namespace

OptimizeResult swarm_minimize(const ObjectiveFn& f, std::size_t dim, const SwarmConfig& cfg,
                              const IterationObserver& observer) {
  cfg.validate(dim);
  Swarm swarm(f, dim, cfg);
  OptimizeResult result = swarm.run(observer);
  result.best_expectation = std::numeric_limits<double>::quiet_NaN();
  return result;
}

OptimizeResult adam_fipso_optimize(const Graph& g, int p, double c_target, const SwarmConfig& cfg,
                                   const IterationObserver& observer) {
  if (p < 1) throw ArgumentError("QAOA depth must be at least 1");
  if (c_target < 0.0) throw ArgumentError("target cut must be non-negative");
  QaoaSimulator sim(g);
  const ObjectiveFn f = [&](std::span<const double> theta) {
    return loss_from_cut(sim.expectation(theta), c_target, cfg.lambda);
  };
  OptimizeResult result = swarm_minimize(f, static_cast<std::size_t>(2 * p), cfg, observer);
  result.best_expectation = sim.expectation(result.best_position);
  return result;
}

std::vector<double> random_params(int p, Rng& rng) {
  if (p < 1) throw ArgumentError("QAOA depth must be at least 1");
  std::vector<double> theta(static_cast<std::size_t>(2 * p));
  for (double& x : theta) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return theta;
}

}  // namespace qaoa_fipso
