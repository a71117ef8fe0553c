#pragma once

#include <span>
#include <vector>

#include "evoke/activation_table.hpp"

namespace evoke {

struct LinearReadout {
  std::vector<double> weights;
  double bias = 0.0;
};

// Least-squares readout: minimizes sum_t (w . phi_t + b - d_t)^2 by the
// Moore-Penrose pseudoinverse; the minimum-norm solution when the table is
// rank deficient. With fit_bias = false the bias stays 0 and only the
// weights are solved for.
LinearReadout fit_pseudoinverse(const ActivationTable& table,
                                bool fit_bias = true);

double predict_linear(const LinearReadout& readout,
                      std::span<const double> phi);

ScalarPredictor predictor_of(LinearReadout readout);

}  // namespace evoke
