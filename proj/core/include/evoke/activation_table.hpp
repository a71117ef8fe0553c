#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace evoke {

// Activation rows collected from network runs, with aligned scalar targets.
// Rows from several sequences are concatenated; sequence_ends()[k] is the
// exclusive row index where sequence k ends, so the ends partition the rows
// into contiguous blocks.
class ActivationTable {
 public:
  explicit ActivationTable(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  std::size_t rows() const { return targets_.size(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * width_, width_};
  }
  double target(std::size_t i) const { return targets_[i]; }
  std::span<const double> targets() const { return targets_; }

  void append(std::span<const double> row, double target) {
    if (row.size() != width_) {
      throw std::invalid_argument("ActivationTable: row width " +
                                  std::to_string(row.size()) + " != " +
                                  std::to_string(width_));
    }
    values_.insert(values_.end(), row.begin(), row.end());
    targets_.push_back(target);
  }

  // Closes the current sequence block. No-op when the block is empty.
  void end_sequence() {
    if (sequence_ends_.empty() ? rows() > 0 : sequence_ends_.back() < rows()) {
      sequence_ends_.push_back(rows());
    }
  }

  const std::vector<std::size_t>& sequence_ends() const {
    return sequence_ends_;
  }

 private:
  std::size_t width_;
  std::vector<double> values_;  // row-major
  std::vector<double> targets_;
  std::vector<std::size_t> sequence_ends_;
};

// A fitted readout as a plain decision function over one activation row.
using ScalarPredictor = std::function<double(std::span<const double>)>;

}  // namespace evoke
