#include "enff/trainer.hpp"

#include "enff/error.hpp"
#include "enff/parallel.hpp"
#include "enff/random.hpp"

#include <algorithm>
#include <cmath>

namespace enff::trainer {

void SwarmConfig::validate() const {
    if (swarm_size < 1) throw Error(ErrorCode::InvalidConfig, "swarm_size must be >= 1");
    if (cognitive < 0.0 || social < 0.0) throw Error(ErrorCode::InvalidConfig, "c1 and c2 must be >= 0");
    if (!(init_hi > init_lo)) throw Error(ErrorCode::InvalidConfig, "init range must have positive width");
    if (!(v_max() > 0.0)) throw Error(ErrorCode::InvalidConfig, "v_max must be > 0");
    if (max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max_iterations must be >= 1");
}

std::vector<double> update_velocity(const Particle& p, std::span<const double> gbest, const SwarmConfig& c,
                                    std::span<const double> r1, std::span<const double> r2) {
    const std::size_t d = p.position.size();
    if (p.velocity.size() != d || p.best_position.size() != d || gbest.size() != d || r1.size() != d ||
        r2.size() != d) {
        throw Error(ErrorCode::DimensionMismatch, "particle, gbest and random draws must share a dimension");
    }
    const double vmax = c.v_max();
    std::vector<double> v(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double raw = c.inertia * p.velocity[k] + c.cognitive * r1[k] * (p.best_position[k] - p.position[k]) +
                           c.social * r2[k] * (gbest[k] - p.position[k]);
        v[k] = std::clamp(raw, -vmax, vmax);
    }
    return v;
}

void update_position(Particle& p) {
    if (p.velocity.size() != p.position.size()) {
        throw Error(ErrorCode::DimensionMismatch, "velocity and position differ in dimension");
    }
    for (std::size_t k = 0; k < p.position.size(); ++k) p.position[k] += p.velocity[k];
}

SwarmResult optimize_swarm(std::size_t dims, const Objective& objective, const SwarmConfig& config,
                           const SwarmObserver& observer) {
    config.validate();
    if (dims == 0) throw Error(ErrorCode::DimensionMismatch, "search space must have >= 1 dimension");
    const std::size_t n = config.swarm_size;
    const double vmax = config.v_max();

    std::vector<Rng> streams;
    streams.reserve(n);
    std::vector<Particle> swarm(n);
    for (std::size_t i = 0; i < n; ++i) {
        streams.emplace_back(derive_seed(config.seed, i));
        auto& p = swarm[i];
        p.position.resize(dims);
        p.velocity.resize(dims);
        for (auto& x : p.position) x = streams[i].uniform(config.init_lo, config.init_hi);
        for (auto& v : p.velocity) v = streams[i].uniform(-vmax, vmax);
        p.best_position = p.position;
    }

    SwarmResult result;
    result.best_position = swarm.front().position;
    std::vector<double> r1(dims), r2(dims);

    for (int it = 1; it <= config.max_iterations; ++it) {
        parallel_for(n, config.threads, [&](std::size_t i) {
            const double f = objective(swarm[i].position);
            swarm[i].fitness = std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
        });
        for (auto& p : swarm) {
            if (p.fitness < p.best_fitness) {
                p.best_fitness = p.fitness;
                p.best_position = p.position;
            }
        }
        for (const auto& p : swarm) {
            if (p.best_fitness < result.best_fitness) {
                result.best_fitness = p.best_fitness;
                result.best_position = p.best_position;
            }
        }
        result.trace.push_back(result.best_fitness);
        if (observer) observer(it, swarm, result.best_position, result.best_fitness);
        if (result.best_fitness <= config.target_error || it == config.max_iterations) break;

        for (std::size_t i = 0; i < n; ++i) {
            for (auto& r : r1) r = streams[i].uniform();
            for (auto& r : r2) r = streams[i].uniform();
            swarm[i].velocity = update_velocity(swarm[i], result.best_position, config, r1, r2);
            update_position(swarm[i]);
        }
    }
    return result;
}

nnet::BatchView batch_of(const features::Dataset& data) {
    return {data.inputs, data.targets, data.input_dim};
}

double fitness(std::span<const double> weights, const nnet::NetworkSpec& spec, const features::Dataset& data) {
    if (data.empty()) throw Error(ErrorCode::EmptyDataset, "training dataset is empty");
    return nnet::mean_squared_error(spec, weights, batch_of(data));
}

GpsoResult train_gpso(const nnet::NetworkSpec& spec, const features::Dataset& data, const SwarmConfig& config,
                      const SwarmObserver& observer) {
    if (data.empty()) throw Error(ErrorCode::EmptyDataset, "training dataset is empty");
    if (data.input_dim != spec.input_dim) {
        throw Error(ErrorCode::DimensionMismatch, "dataset width differs from network input_dim");
    }
    const auto dims = nnet::param_count(spec);
    auto objective = [&](std::span<const double> w) { return fitness(w, spec, data); };
    auto swarm = optimize_swarm(dims, objective, config, observer);
    return {std::move(swarm.best_position), std::move(swarm.trace)};
}

nnet::WeightVector initial_weights(const nnet::NetworkSpec& spec, const BackpropConfig& config) {
    Rng rng(config.seed);
    nnet::WeightVector w(nnet::param_count(spec));
    for (auto& x : w) x = rng.uniform(-config.init_range, config.init_range);
    return w;
}

BackpropResult train_backprop(const nnet::NetworkSpec& spec, const features::Dataset& data,
                              const BackpropConfig& config) {
    if (spec.kind != nnet::Kind::FNN) {
        throw Error(ErrorCode::UnsupportedKind, "backprop training supports FNN only");
    }
    if (data.empty()) throw Error(ErrorCode::EmptyDataset, "training dataset is empty");
    if (config.epochs < 0) throw Error(ErrorCode::InvalidConfig, "epochs must be >= 0");
    const auto batch = batch_of(data);
    BackpropResult result;
    result.weights = initial_weights(spec, config);
    result.trace.reserve(static_cast<std::size_t>(config.epochs) + 1);
    for (int e = 0; e < config.epochs; ++e) {
        result.trace.push_back(nnet::mean_squared_error(spec, result.weights, batch));
        if (config.learning_rate == 0.0) continue;
        const auto grad = nnet::backprop_gradient(spec, result.weights, batch);
        for (std::size_t k = 0; k < grad.size(); ++k) result.weights[k] -= config.learning_rate * grad[k];
    }
    result.trace.push_back(nnet::mean_squared_error(spec, result.weights, batch));
    return result;
}

}  // namespace enff::trainer
