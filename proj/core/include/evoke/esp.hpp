#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "evoke/lstm.hpp"
#include "evoke/rng.hpp"

namespace evoke {

// One network candidate: one memory-cell chromosome per cell slot.
using Genome = std::vector<MemoryCellChromosome>;

// Candidate fitness, lower is better. Must be total: failures are reported
// as +infinity, never by throwing (the evolution loop also guards).
using FitnessFn = std::function<double(const Genome&)>;

inline constexpr std::size_t kNeverBurst =
    std::numeric_limits<std::size_t>::max();

struct EvolutionConfig {
  std::size_t n_cells = 5;
  // Network fan-in; fixes the chromosome length 4*(n_inputs + n_cells).
  std::size_t n_inputs = 4;
  std::size_t subpop_size = 40;  // must be divisible by 4 (top-quarter rule)
  std::size_t trials_per_neuron = 1;
  double cauchy_alpha = 0.1;
  double weight_init_min = -5.0;
  double weight_init_max = 5.0;
  // Generations without best-so-far improvement before burst mutation.
  std::size_t stagnation_window = 10;
  std::size_t max_generations = 50;
  std::uint64_t rng_seed = 0;
};

// Throws std::invalid_argument on an unusable configuration.
void validate(const EvolutionConfig& config);

struct ScoredChromosome {
  MemoryCellChromosome chromosome;
  double fitness_sum = 0.0;
  std::size_t trials = 0;

  double mean_fitness() const {
    return trials > 0 ? fitness_sum / static_cast<double>(trials)
                      : std::numeric_limits<double>::infinity();
  }
};

struct Subpopulation {
  std::size_t slot = 0;
  std::vector<ScoredChromosome> members;
};

struct FitnessRecord {
  std::size_t generation = 0;
  double best_fitness = std::numeric_limits<double>::infinity();
  Genome best_genome;
  std::size_t evaluations_so_far = 0;
  bool burst_applied = false;
};

struct EvolutionResult {
  Genome best_genome;
  double best_fitness = std::numeric_limits<double>::infinity();
  std::vector<FitnessRecord> history;  // one per generation, best-so-far
  std::size_t evaluations = 0;
};

// One subpopulation per cell slot, weights uniform in the init range.
std::vector<Subpopulation> init_subpopulations(const EvolutionConfig& config,
                                               Rng& rng);

// Picks member_indices[s] from subpopulation s, preserving slot order.
Genome assemble_network(const std::vector<Subpopulation>& subpops,
                        std::span<const std::size_t> member_indices);

// Round-robin trials: every member participates in exactly trials_per_neuron
// assemblies per generation (random partners), so one generation costs
// subpop_size * trials_per_neuron evaluations. Member fitness is the mean
// over its trials. Returns the generation's best assembly.
FitnessRecord evaluate_generation(std::vector<Subpopulation>& subpops,
                                  const FitnessFn& fitness,
                                  std::size_t trials_per_neuron, Rng& rng);

// Sorts members by mean fitness (best first) and replaces the worst quarter
// with Cauchy-mutated copies of the best quarter. No crossover.
void select_and_mutate(Subpopulation& subpop, double alpha, Rng& rng);

// Re-seeds every subpopulation with Cauchy-perturbed copies of the best
// genome's chromosome for that slot, keeping one exact copy per slot.
void burst_mutate(std::vector<Subpopulation>& subpops, const Genome& best,
                  double alpha, Rng& rng);

// Full evolution: per generation evaluate, then either burst (on stagnation)
// or select-and-mutate. Stops after max_generations or once the best fitness
// reaches 0. History records the best-so-far, so best_fitness is
// non-increasing along it.
using StopFn = std::function<bool()>;
EvolutionResult evolve(const EvolutionConfig& config, const FitnessFn& fitness,
                       const StopFn& stop = {});

}  // namespace evoke
