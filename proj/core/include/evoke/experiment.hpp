#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "evoke/csl_task.hpp"
#include "evoke/esp.hpp"
#include "evoke/pseudoinverse.hpp"
#include "evoke/sine_task.hpp"
#include "evoke/svm.hpp"

namespace evoke {

enum class TaskKind { csl, sine };
enum class ReadoutKind { svm, pseudoinverse };

// Full hyperparameter record of a campaign. Everything except output_dir is
// echoed verbatim into the report (reports stay byte-identical across
// output locations).
struct ExperimentConfig {
  TaskKind task = TaskKind::csl;
  ReadoutKind readout = ReadoutKind::svm;

  int csl_n = 10;                    // train on a^n b^n c^n, n = 1..csl_n
  std::size_t series_length = 1000;  // sine task

  std::size_t n_cells = 5;
  std::size_t subpop_size = 40;
  std::size_t trials_per_neuron = 1;
  double cauchy_alpha = 0.1;
  double weight_init_min = -5.0;
  double weight_init_max = 5.0;
  std::size_t stagnation_window = 10;
  std::size_t max_generations = 50;

  double forget_bias = 1.5;
  double output_bias = -1.5;

  double kernel_sigma = 2.0;
  double svm_capacity = 100.0;
  double svr_epsilon = 0.01;
  double smo_tolerance = 1e-3;

  int max_generalization = 1000;
  std::size_t runs = 20;
  std::uint64_t seed = 42;
  double timeout_minutes = 30.0;

  std::string output_dir;  // not serialized

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

ExperimentConfig default_csl_config();
ExperimentConfig default_sine_config();
void validate(const ExperimentConfig& config);

// Flat key=value text, fixed key order; parse accepts any order and keeps
// defaults for missing keys. Unknown keys are errors.
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

std::string to_string(TaskKind task);
std::string to_string(ReadoutKind readout);

struct RunResult {
  std::size_t run_index = 0;
  std::vector<FitnessRecord> history;
  double best_fitness = 0.0;
  // Generalization depth m for the CSL task, test SSE for the sine task.
  double final_metric = 0.0;
  std::size_t evaluations = 0;
  bool timed_out = false;
  double wall_seconds = 0.0;  // console only, never written to report files
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  double metric_mean = 0.0;
  double metric_median = 0.0;
  double metric_min = 0.0;
  double metric_max = 0.0;
  std::size_t best_run = 0;
  // Sine only: free-running test trace of the best run.
  std::vector<SinePrediction> best_run_trace;
};

// Two-phase candidate evaluation: decode the genome, run the training
// sequences, fit the readout(s) on the training rows, and score the combined
// system on training + validation data. Decoding or readout failures map to
// +infinity; the returned function never throws.
FitnessFn make_fitness_fn(const ExperimentConfig& config,
                          const CslDataset& dataset);
FitnessFn make_fitness_fn(const ExperimentConfig& config,
                          const SineSeries& series);

// runs independent evolutions with seeds seed+0 .. seed+runs-1, tests each
// run's best genome, and aggregates the final metrics.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Writes config.txt, fitness.csv, summary.txt, the task's dataset dump, and
// (sine) predictions.csv for the best run.
void emit_report(const ExperimentReport& report,
                 const std::filesystem::path& dir);

}  // namespace evoke
