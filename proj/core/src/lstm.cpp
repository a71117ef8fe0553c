#include "evoke/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evoke {
namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

LstmNetwork decode_genome(const std::vector<MemoryCellChromosome>& genome,
                          std::size_t n_inputs, GateBiases biases) {
  if (genome.empty()) {
    throw std::invalid_argument("decode_genome: empty genome");
  }
  if (n_inputs == 0) {
    throw std::invalid_argument("decode_genome: need at least one input");
  }
  const std::size_t n_cells = genome.size();
  const std::size_t expected = chromosome_length(n_inputs, n_cells);
  for (const MemoryCellChromosome& cell : genome) {
    if (cell.weights.size() != expected) {
      throw std::invalid_argument(
          "decode_genome: malformed genome, chromosome length " +
          std::to_string(cell.weights.size()) + " != 4*(I+H) = " +
          std::to_string(expected));
    }
    for (double w : cell.weights) {
      if (!std::isfinite(w)) {
        throw std::invalid_argument(
            "decode_genome: malformed genome, non-finite weight");
      }
    }
  }

  LstmNetwork net;
  net.n_inputs_ = n_inputs;
  net.n_cells_ = n_cells;
  net.biases_ = biases;
  net.weights_.reserve(n_cells * expected);
  for (const MemoryCellChromosome& cell : genome) {
    net.weights_.insert(net.weights_.end(), cell.weights.begin(),
                        cell.weights.end());
  }
  net.states_.assign(n_cells, 0.0);
  net.outputs_.assign(n_cells, 0.0);
  net.scratch_.assign(n_inputs + n_cells, 0.0);
  return net;
}

void LstmNetwork::reset() {
  std::fill(states_.begin(), states_.end(), 0.0);
  std::fill(outputs_.begin(), outputs_.end(), 0.0);
}

void reset(LstmNetwork& net) { net.reset(); }

std::span<const double> LstmNetwork::step(std::span<const double> input) {
  if (input.size() != n_inputs_) {
    throw std::invalid_argument("LstmNetwork::step: input length " +
                                std::to_string(input.size()) + " != " +
                                std::to_string(n_inputs_));
  }
  for (double v : input) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("LstmNetwork::step: non-finite input");
    }
  }

  const std::size_t fan_in = n_inputs_ + n_cells_;
  // Snapshot x(t) = [u(t); phi(t-1)] so every cell sees the previous outputs.
  std::copy(input.begin(), input.end(), scratch_.begin());
  std::copy(outputs_.begin(), outputs_.end(), scratch_.begin() + n_inputs_);

  for (std::size_t c = 0; c < n_cells_; ++c) {
    const double* w = weights_.data() + c * 4 * fan_in;
    double net_cell = 0.0;
    double net_in = 0.0;
    double net_forget = 0.0;
    double net_out = 0.0;
    for (std::size_t j = 0; j < fan_in; ++j) {
      const double x = scratch_[j];
      net_cell += w[j] * x;
      net_in += w[fan_in + j] * x;
      net_forget += w[2 * fan_in + j] * x;
      net_out += w[3 * fan_in + j] * x;
    }
    net_forget += biases_.forget;
    net_out += biases_.output;

    states_[c] = logistic(net_forget) * states_[c] +
                 logistic(net_in) * std::tanh(net_cell);
    outputs_[c] = logistic(net_out) * std::tanh(states_[c]);
  }
  return outputs_;
}

namespace {

std::vector<std::vector<double>> run_backprojected(
    LstmNetwork& net, const std::vector<std::vector<double>>& inputs,
    const std::vector<double>* teacher, const FeedbackFn* feedback,
    double initial_feedback) {
  const std::size_t width = net.input_count();
  if (width == 0) {
    throw std::invalid_argument("run_sequence: backprojected mode needs I>=1");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(inputs.size());
  std::vector<double> full(width, 0.0);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    if (inputs[t].size() != width - 1) {
      throw std::invalid_argument(
          "run_sequence: external input width must be I-1 in backprojected "
          "mode");
    }
    double fb = 0.0;
    if (teacher != nullptr) {
      fb = t == 0 ? 0.0 : (*teacher)[t - 1];
    } else {
      fb = t == 0 ? initial_feedback : (*feedback)(rows.back());
    }
    std::copy(inputs[t].begin(), inputs[t].end(), full.begin());
    full[width - 1] = fb;
    std::span<const double> phi = net.step(full);
    rows.emplace_back(phi.begin(), phi.end());
  }
  return rows;
}

}  // namespace

std::vector<std::vector<double>> run_sequence(
    LstmNetwork& net, const std::vector<std::vector<double>>& inputs,
    InputMode mode, const std::vector<double>* teacher) {
  if (mode == InputMode::external_only) {
    if (teacher != nullptr) {
      throw std::invalid_argument(
          "run_sequence: teacher given in external-only mode");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(inputs.size());
    for (const std::vector<double>& u : inputs) {
      std::span<const double> phi = net.step(u);
      rows.emplace_back(phi.begin(), phi.end());
    }
    return rows;
  }
  if (teacher == nullptr) {
    throw std::invalid_argument(
        "run_sequence: backprojected mode needs a teacher or a feedback "
        "callback");
  }
  if (teacher->size() != inputs.size()) {
    throw std::invalid_argument("run_sequence: teacher length " +
                                std::to_string(teacher->size()) +
                                " != sequence length " +
                                std::to_string(inputs.size()));
  }
  return run_backprojected(net, inputs, teacher, nullptr, 0.0);
}

std::vector<std::vector<double>> run_sequence(
    LstmNetwork& net, const std::vector<std::vector<double>>& inputs,
    InputMode mode, const FeedbackFn& feedback, double initial_feedback) {
  if (mode != InputMode::backprojected) {
    throw std::invalid_argument(
        "run_sequence: feedback callback requires backprojected mode");
  }
  if (!feedback) {
    throw std::invalid_argument("run_sequence: empty feedback callback");
  }
  return run_backprojected(net, inputs, nullptr, &feedback, initial_feedback);
}

}  // namespace evoke
