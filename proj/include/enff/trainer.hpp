#pragma once

#include "enff/features.hpp"
#include "enff/nnet.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace enff::trainer {

struct SwarmConfig {
    std::size_t swarm_size = 30;
    double inertia = 0.729;
    double cognitive = 1.494;
    double social = 1.494;
    double v_max_fraction = 0.5;  // of the init range width
    int max_iterations = 300;
    double target_error = 1e-4;
    double init_lo = -1.0;
    double init_hi = 1.0;
    std::uint64_t seed = 0;
    std::size_t threads = 1;  // 0 = hardware concurrency

    double v_max() const noexcept { return v_max_fraction * (init_hi - init_lo); }
    /// Throws InvalidConfig. swarm_size 1 is accepted (degenerate swarm).
    void validate() const;
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    double fitness = std::numeric_limits<double>::infinity();  // at current position
};

/// gbest fitness after each iteration; nonincreasing.
using TrainingTrace = std::vector<double>;

/// Must be safe to call concurrently when threads > 1.
using Objective = std::function<double(std::span<const double>)>;

/// Called after the pbest/gbest reduction of every iteration (1-based).
using SwarmObserver = std::function<void(int iteration, std::span<const Particle> particles,
                                         std::span<const double> gbest, double gbest_fitness)>;

struct SwarmResult {
    std::vector<double> best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    TrainingTrace trace;
};

/// v' = w·v + c1·r1∘(pbest − x) + c2·r2∘(gbest − x), clamped to ±v_max.
std::vector<double> update_velocity(const Particle& particle, std::span<const double> gbest,
                                    const SwarmConfig& config, std::span<const double> r1,
                                    std::span<const double> r2);

/// x ← x + v (no position clamping).
void update_position(Particle& particle);

/// Global-best PSO minimizing `objective`.
///
/// Particle i draws from its own stream Rng(derive_seed(config.seed, i)):
/// first `dims` init positions, then `dims` init velocities, then per
/// iteration `dims` r1 values followed by `dims` r2 values. Each iteration
/// evaluates every particle (possibly in parallel), updates pbests, then the
/// gbest (lowest index wins ties), records the trace, stops on
/// target_error, and finally moves all particles.
SwarmResult optimize_swarm(std::size_t dims, const Objective& objective, const SwarmConfig& config,
                           const SwarmObserver& observer = {});

/// Mean squared error over the dataset; Elman networks run sequentially in
/// row order with the context carried across rows. Throws EmptyDataset.
double fitness(std::span<const double> weights, const nnet::NetworkSpec& spec, const features::Dataset& data);

nnet::BatchView batch_of(const features::Dataset& data);

struct GpsoResult {
    nnet::WeightVector weights;
    TrainingTrace trace;
};

GpsoResult train_gpso(const nnet::NetworkSpec& spec, const features::Dataset& data, const SwarmConfig& config,
                      const SwarmObserver& observer = {});

struct BackpropConfig {
    double learning_rate = 0.01;
    int epochs = 500;
    std::uint64_t seed = 0;
    double init_range = 0.5;  // initial weights uniform in [-init_range, init_range]
};

/// Seeded starting point used by train_backprop.
nnet::WeightVector initial_weights(const nnet::NetworkSpec& spec, const BackpropConfig& config);

struct BackpropResult {
    nnet::WeightVector weights;
    TrainingTrace trace;  // MSE before each epoch, then the final MSE (epochs + 1 values)
};

/// Full-batch gradient descent on MSE. FNN only (UnsupportedKind otherwise).
BackpropResult train_backprop(const nnet::NetworkSpec& spec, const features::Dataset& data,
                              const BackpropConfig& config);

}  // namespace enff::trainer
