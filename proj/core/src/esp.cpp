#include "evoke/esp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evoke {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void validate(const EvolutionConfig& config) {
  if (config.n_cells == 0) {
    throw std::invalid_argument("EvolutionConfig: n_cells must be positive");
  }
  if (config.n_inputs == 0) {
    throw std::invalid_argument("EvolutionConfig: n_inputs must be positive");
  }
  if (config.subpop_size == 0 || config.subpop_size % 4 != 0) {
    throw std::invalid_argument(
        "EvolutionConfig: subpop_size must be a positive multiple of 4");
  }
  if (config.trials_per_neuron == 0) {
    throw std::invalid_argument(
        "EvolutionConfig: trials_per_neuron must be positive");
  }
  if (!(config.cauchy_alpha > 0.0)) {
    throw std::invalid_argument(
        "EvolutionConfig: cauchy_alpha must be positive");
  }
  if (!(config.weight_init_min <= config.weight_init_max)) {
    throw std::invalid_argument("EvolutionConfig: empty weight init range");
  }
  if (config.stagnation_window == 0) {
    throw std::invalid_argument(
        "EvolutionConfig: stagnation_window must be positive (use kNeverBurst "
        "to disable)");
  }
  if (config.max_generations == 0) {
    throw std::invalid_argument(
        "EvolutionConfig: max_generations must be positive");
  }
}

std::vector<Subpopulation> init_subpopulations(const EvolutionConfig& config,
                                               Rng& rng) {
  validate(config);
  const std::size_t length =
      chromosome_length(config.n_inputs, config.n_cells);
  std::vector<Subpopulation> subpops(config.n_cells);
  for (std::size_t s = 0; s < config.n_cells; ++s) {
    subpops[s].slot = s;
    subpops[s].members.resize(config.subpop_size);
    for (ScoredChromosome& member : subpops[s].members) {
      member.chromosome.weights.resize(length);
      for (double& w : member.chromosome.weights) {
        w = rng.uniform(config.weight_init_min, config.weight_init_max);
      }
    }
  }
  return subpops;
}

Genome assemble_network(const std::vector<Subpopulation>& subpops,
                        std::span<const std::size_t> member_indices) {
  if (member_indices.size() != subpops.size()) {
    throw std::invalid_argument("assemble_network: need one index per slot");
  }
  Genome genome;
  genome.reserve(subpops.size());
  for (std::size_t s = 0; s < subpops.size(); ++s) {
    if (member_indices[s] >= subpops[s].members.size()) {
      throw std::invalid_argument("assemble_network: member index " +
                                  std::to_string(member_indices[s]) +
                                  " out of range in slot " + std::to_string(s));
    }
    genome.push_back(subpops[s].members[member_indices[s]].chromosome);
  }
  return genome;
}

FitnessRecord evaluate_generation(std::vector<Subpopulation>& subpops,
                                  const FitnessFn& fitness,
                                  std::size_t trials_per_neuron, Rng& rng) {
  if (subpops.empty()) {
    throw std::invalid_argument("evaluate_generation: no subpopulations");
  }
  const std::size_t slots = subpops.size();
  const std::size_t size = subpops.front().members.size();
  for (Subpopulation& sp : subpops) {
    for (ScoredChromosome& m : sp.members) {
      m.fitness_sum = 0.0;
      m.trials = 0;
    }
  }

  FitnessRecord record;
  std::vector<std::vector<std::size_t>> order(slots,
                                              std::vector<std::size_t>(size));
  std::vector<std::size_t> picks(slots);
  std::size_t evaluations = 0;
  for (std::size_t round = 0; round < trials_per_neuron; ++round) {
    for (std::size_t s = 0; s < slots; ++s) {
      std::iota(order[s].begin(), order[s].end(), std::size_t{0});
      rng.shuffle(std::span<std::size_t>(order[s]));
    }
    for (std::size_t e = 0; e < size; ++e) {
      for (std::size_t s = 0; s < slots; ++s) picks[s] = order[s][e];
      Genome genome = assemble_network(subpops, picks);
      double f = kInf;
      try {
        f = fitness(genome);
      } catch (...) {
        f = kInf;
      }
      if (std::isnan(f)) f = kInf;
      for (std::size_t s = 0; s < slots; ++s) {
        ScoredChromosome& m = subpops[s].members[picks[s]];
        m.fitness_sum += f;
        m.trials += 1;
      }
      ++evaluations;
      if (f < record.best_fitness) {
        record.best_fitness = f;
        record.best_genome = std::move(genome);
      }
    }
  }
  record.evaluations_so_far = evaluations;
  return record;
}

void select_and_mutate(Subpopulation& subpop, double alpha, Rng& rng) {
  const std::size_t size = subpop.members.size();
  if (size == 0 || size % 4 != 0) {
    throw std::invalid_argument(
        "select_and_mutate: subpopulation size must be a positive multiple "
        "of 4");
  }
  std::stable_sort(subpop.members.begin(), subpop.members.end(),
                   [](const ScoredChromosome& a, const ScoredChromosome& b) {
                     return a.mean_fitness() < b.mean_fitness();
                   });
  const std::size_t quarter = size / 4;
  for (std::size_t q = 0; q < quarter; ++q) {
    ScoredChromosome copy;
    copy.chromosome = subpop.members[q].chromosome;
    for (double& w : copy.chromosome.weights) {
      w += rng.cauchy(alpha);
    }
    subpop.members[size - quarter + q] = std::move(copy);
  }
}

void burst_mutate(std::vector<Subpopulation>& subpops, const Genome& best,
                  double alpha, Rng& rng) {
  if (best.size() != subpops.size()) {
    throw std::invalid_argument(
        "burst_mutate: genome must have one chromosome per slot");
  }
  for (std::size_t s = 0; s < subpops.size(); ++s) {
    std::vector<ScoredChromosome>& members = subpops[s].members;
    for (std::size_t m = 0; m < members.size(); ++m) {
      members[m] = ScoredChromosome{};
      members[m].chromosome = best[s];
      if (m > 0) {
        for (double& w : members[m].chromosome.weights) {
          w += rng.cauchy(alpha);
        }
      }
    }
  }
}

EvolutionResult evolve(const EvolutionConfig& config, const FitnessFn& fitness,
                       const StopFn& stop) {
  validate(config);
  Rng rng(config.rng_seed);
  std::vector<Subpopulation> subpops = init_subpopulations(config, rng);

  EvolutionResult result;
  std::size_t last_improvement = 0;
  for (std::size_t gen = 0; gen < config.max_generations; ++gen) {
    FitnessRecord record =
        evaluate_generation(subpops, fitness, config.trials_per_neuron, rng);
    result.evaluations += record.evaluations_so_far;
    if (record.best_fitness < result.best_fitness) {
      result.best_fitness = record.best_fitness;
      result.best_genome = record.best_genome;
      last_improvement = gen;
    }
    record.generation = gen;
    record.best_fitness = result.best_fitness;
    record.best_genome = result.best_genome;
    record.evaluations_so_far = result.evaluations;

    const bool solved = result.best_fitness <= 0.0;
    const bool last = gen + 1 == config.max_generations;
    if (!solved && !last) {
      if (gen - last_improvement >= config.stagnation_window &&
          !result.best_genome.empty()) {
        burst_mutate(subpops, result.best_genome, config.cauchy_alpha, rng);
        last_improvement = gen;
        record.burst_applied = true;
      } else {
        for (Subpopulation& sp : subpops) {
          select_and_mutate(sp, config.cauchy_alpha, rng);
        }
      }
    }
    result.history.push_back(std::move(record));
    if (solved || (stop && stop())) {
      break;
    }
  }
  return result;
}

}  // namespace evoke
