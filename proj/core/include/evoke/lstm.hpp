#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace evoke {

// One evolvable memory cell: a flat string of 4*(I+H) weights in four blocks,
// ordered cell input, input gate, forget gate, output gate. Each block holds
// I external-input weights followed by H recurrent weights from the previous
// step's cell outputs.
struct MemoryCellChromosome {
  std::vector<double> weights;
};

constexpr std::size_t chromosome_length(std::size_t n_inputs,
                                        std::size_t n_cells) {
  return 4 * (n_inputs + n_cells);
}

// Fixed gate biases attached at decode time; not part of the genome.
struct GateBiases {
  double forget = 0.0;
  double output = 0.0;
};

enum class InputMode {
  external_only,  // inputs carry exactly the I external channels
  backprojected,  // the previous output is appended as the last input channel
};

// A decoded memory-cell network. State is mutable (cell states and outputs);
// weights are fixed for the lifetime of the instance. One instance per
// thread; distinct instances share nothing.
class LstmNetwork {
 public:
  std::size_t input_count() const { return n_inputs_; }
  std::size_t cell_count() const { return n_cells_; }
  const GateBiases& biases() const { return biases_; }

  // Zeroes cell states and outputs; weights are untouched.
  void reset();

  // One forward step. `input` must have length input_count(). Returns the
  // cell outputs phi(t) and advances the internal state.
  std::span<const double> step(std::span<const double> input);

  std::span<const double> cell_states() const { return states_; }
  std::span<const double> cell_outputs() const { return outputs_; }

 private:
  friend LstmNetwork decode_genome(const std::vector<MemoryCellChromosome>&,
                                   std::size_t, GateBiases);
  LstmNetwork() = default;

  std::size_t n_inputs_ = 0;
  std::size_t n_cells_ = 0;
  GateBiases biases_;
  std::vector<double> weights_;  // [cell][block][I+H]
  std::vector<double> states_;
  std::vector<double> outputs_;
  std::vector<double> scratch_;  // x(t) = [u(t); phi(t-1)]
};

// Decodes one chromosome per cell into a network with zeroed state.
// Every chromosome must have length 4*(I+H) with H = chromosome count;
// anything else is a malformed genome (std::invalid_argument).
LstmNetwork decode_genome(const std::vector<MemoryCellChromosome>& genome,
                          std::size_t n_inputs, GateBiases biases = {});

// Spec-named alias for LstmNetwork::reset.
void reset(LstmNetwork& net);

// Runs a full input sequence and returns one activation row per step.
// The caller is responsible for resetting the network beforehand (sequences
// may deliberately continue from prior state, as in free-running prediction).
//
// external_only: each input must have length I; `teacher` must be null.
// backprojected: each input must have length I-1; the feedback channel is
// appended. With a teacher, step t feeds teacher[t-1] (0.0 at t=0), clamping
// the output history to the target values.
std::vector<std::vector<double>> run_sequence(
    LstmNetwork& net, const std::vector<std::vector<double>>& inputs,
    InputMode mode, const std::vector<double>* teacher = nullptr);

// Free-running variant: the feedback channel at step t carries
// feedback(row[t-1]), and initial_feedback at t=0.
using FeedbackFn = std::function<double(std::span<const double>)>;
std::vector<std::vector<double>> run_sequence(
    LstmNetwork& net, const std::vector<std::vector<double>>& inputs,
    InputMode mode, const FeedbackFn& feedback, double initial_feedback = 0.0);

}  // namespace evoke
