#include "evoke/sine_task.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace evoke {

double sine_wave(double x) { return std::sin(0.2 * x) + std::sin(0.311 * x); }

SineSeries generate_sine_series(std::size_t length) {
  SineSeries series;
  series.values.reserve(length);
  for (std::size_t x = 1; x <= length; ++x) {
    series.values.push_back(sine_wave(static_cast<double>(x)));
  }
  return series;
}

std::vector<std::vector<double>> sine_clamped_rows(LstmNetwork& net,
                                                   const SineSeries& series,
                                                   std::size_t n_steps) {
  if (net.input_count() != 1) {
    throw std::invalid_argument(
        "sine_clamped_rows: the network's only input is the feedback channel "
        "(I=1)");
  }
  if (series.length() < n_steps) {
    throw std::invalid_argument("sine_clamped_rows: series too short");
  }
  const std::vector<std::vector<double>> empty_inputs(n_steps);
  const std::vector<double> teacher(series.values.begin(),
                                    series.values.begin() + n_steps);
  return run_sequence(net, empty_inputs, InputMode::backprojected, &teacher);
}

double sine_fitness(LstmNetwork& net, const SineSeries& series,
                    const ReadoutFitter& fit_readout) {
  if (series.length() < SineSeries::kValidationEnd) {
    throw std::invalid_argument("sine_fitness: series shorter than 700");
  }
  net.reset();
  const std::vector<std::vector<double>> rows =
      sine_clamped_rows(net, series, SineSeries::kValidationEnd);

  ActivationTable training(net.cell_count());
  for (std::size_t x = SineSeries::kWashoutEnd + 1;
       x <= SineSeries::kTrainEnd; ++x) {
    training.append(rows[x - 1], series.at(x));
  }
  training.end_sequence();
  const ScalarPredictor predictor = fit_readout(training);

  double sse = 0.0;
  for (std::size_t x = SineSeries::kWashoutEnd + 1;
       x <= SineSeries::kValidationEnd; ++x) {
    const double e = predictor(rows[x - 1]) - series.at(x);
    sse += e * e;
  }
  return sse;
}

std::vector<SinePrediction> sine_test_trace(LstmNetwork& net,
                                            const ScalarPredictor& predictor,
                                            const SineSeries& series) {
  if (series.length() < SineSeries::kTestEnd) {
    throw std::invalid_argument("sine_test_trace: series shorter than 1000");
  }
  net.reset();
  sine_clamped_rows(net, series, SineSeries::kValidationEnd);

  std::vector<SinePrediction> trace;
  trace.reserve(SineSeries::kTestEnd - SineSeries::kValidationEnd);
  double feedback = series.at(SineSeries::kValidationEnd);
  std::vector<double> input(1);
  for (std::size_t x = SineSeries::kValidationEnd + 1;
       x <= SineSeries::kTestEnd; ++x) {
    input[0] = feedback;
    const std::span<const double> row = net.step(input);
    const double prediction = predictor(row);
    trace.push_back({x, series.at(x), prediction});
    feedback = prediction;
  }
  return trace;
}

double sine_test(LstmNetwork& net, const ScalarPredictor& predictor,
                 const SineSeries& series) {
  double sse = 0.0;
  for (const SinePrediction& p : sine_test_trace(net, predictor, series)) {
    const double e = p.prediction - p.target;
    sse += e * e;
  }
  return sse;
}

void dump_series(const SineSeries& series, std::ostream& out) {
  char buf[64];
  for (std::size_t x = 1; x <= series.length(); ++x) {
    std::snprintf(buf, sizeof buf, "%zu %.17g\n", x, series.at(x));
    out << buf;
  }
}

}  // namespace evoke
