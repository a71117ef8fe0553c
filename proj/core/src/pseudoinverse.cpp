#include "evoke/pseudoinverse.hpp"

#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace evoke {

LinearReadout fit_pseudoinverse(const ActivationTable& table, bool fit_bias) {
  const std::size_t rows = table.rows();
  if (rows == 0) {
    throw std::invalid_argument("fit_pseudoinverse: empty table");
  }
  const std::size_t width = table.width();
  const std::size_t cols = width + (fit_bias ? 1 : 0);

  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd d(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::span<const double> row = table.row(r);
    for (std::size_t c = 0; c < width; ++c) a(r, c) = row[c];
    if (fit_bias) a(r, width) = 1.0;
    d(r) = table.target(r);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd solution = svd.solve(d);

  LinearReadout readout;
  readout.weights.assign(solution.data(), solution.data() + width);
  readout.bias = fit_bias ? solution(width) : 0.0;
  return readout;
}

double predict_linear(const LinearReadout& readout,
                      std::span<const double> phi) {
  if (phi.size() != readout.weights.size()) {
    throw std::invalid_argument("predict_linear: row width mismatch");
  }
  double y = readout.bias;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    y += readout.weights[i] * phi[i];
  }
  return y;
}

ScalarPredictor predictor_of(LinearReadout readout) {
  return [r = std::move(readout)](std::span<const double> phi) {
    return predict_linear(r, phi);
  };
}

}  // namespace evoke
