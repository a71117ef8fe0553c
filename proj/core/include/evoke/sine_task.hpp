#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "evoke/activation_table.hpp"
#include "evoke/lstm.hpp"

namespace evoke {

// y(x) = sin(0.2 x) + sin(0.311 x).
double sine_wave(double x);

// The series sampled at integer x = 1..length, with the fixed protocol
// segments: washout 1..100, training 101..400, validation 401..700,
// free-running test 701..1000.
struct SineSeries {
  static constexpr std::size_t kWashoutEnd = 100;
  static constexpr std::size_t kTrainEnd = 400;
  static constexpr std::size_t kValidationEnd = 700;
  static constexpr std::size_t kTestEnd = 1000;

  std::vector<double> values;  // values[i] = y(i + 1)

  std::size_t length() const { return values.size(); }
  double at(std::size_t x) const { return values[x - 1]; }  // x is 1-based
};

SineSeries generate_sine_series(std::size_t length);

// Fits a readout on an activation table; returns its decision function.
using ReadoutFitter = std::function<ScalarPredictor(const ActivationTable&)>;

// Teacher-clamped pass over steps x = 1..n_steps. The network's only input
// is the backprojected output channel: y(x-1) is fed at step x, 0.0 at x=1.
// The caller resets the network; rows come back in step order.
std::vector<std::vector<double>> sine_clamped_rows(LstmNetwork& net,
                                                   const SineSeries& series,
                                                   std::size_t n_steps);

// Two-phase candidate score: clamped run over 1..700, readout fitted on the
// training rows (101..400), returns the summed squared error of the readout
// over rows 101..700 (training + validation).
double sine_fitness(LstmNetwork& net, const SineSeries& series,
                    const ReadoutFitter& fit_readout);

struct SinePrediction {
  std::size_t x = 0;
  double target = 0.0;
  double prediction = 0.0;
};

// Test protocol: clamped warm-up over 1..700, then free-running prediction of
// 701..1000 with the model's own outputs backprojected (the first free step
// feeds the last clamped value y(700)).
std::vector<SinePrediction> sine_test_trace(LstmNetwork& net,
                                            const ScalarPredictor& predictor,
                                            const SineSeries& series);

// Summed squared error of the trace over the 300 test points.
double sine_test(LstmNetwork& net, const ScalarPredictor& predictor,
                 const SineSeries& series);

// Plain text dump, "x y" per line.
void dump_series(const SineSeries& series, std::ostream& out);

}  // namespace evoke
