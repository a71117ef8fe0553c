#pragma once

#include <cstddef>
#include <iosfwd>
#include <list>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "evoke/activation_table.hpp"

namespace evoke {

// Gaussian kernel K(x,y) = exp(-|x-y|^2 / (2 sigma^2)).
struct KernelSpec {
  double sigma = 2.0;
};

double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                       double sigma);

// Gram-matrix evaluator over the rows of an activation table. Small tables
// keep the full (lazily filled) matrix; larger ones keep an LRU set of rows.
class KernelCache {
 public:
  KernelCache(const ActivationTable& table, KernelSpec kernel,
              std::size_t full_matrix_limit = 4000);

  // K(i, *) over all table rows. The span is valid until the next call.
  std::span<const double> row(std::size_t i);

  std::size_t size() const { return n_; }
  bool full_matrix() const { return full_; }

 private:
  void compute_row(std::size_t i, double* out) const;

  const ActivationTable& table_;
  KernelSpec kernel_;
  std::size_t n_;
  bool full_;
  // full mode
  std::vector<double> matrix_;
  std::vector<bool> filled_;
  // LRU mode
  std::size_t max_cached_ = 0;
  std::list<std::size_t> lru_;  // most recent first
  struct CacheEntry {
    std::vector<double> values;
    std::list<std::size_t>::iterator lru_pos;
  };
  std::unordered_map<std::size_t, CacheEntry> cached_;
};

enum class SvmTask { classification, regression };

class degenerate_labels_error : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class smo_convergence_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kernel expansion y(phi) = bias + sum_i coefficients[i] * K(phi, rows[i]).
// Only rows with nonzero dual coefficient are stored; |coefficient| <= capacity.
struct SvmModel {
  SvmTask task = SvmTask::classification;
  KernelSpec kernel;
  double capacity = 1.0;
  double epsilon = 0.0;  // regression tube half-width
  double bias = 0.0;     // w0
  std::size_t width = 0;
  std::vector<double> coefficients;
  std::vector<std::vector<double>> support_rows;

  // Solver diagnostics; informational only, never serialized.
  double dual_objective = 0.0;
  double kkt_gap = 0.0;
  std::size_t iterations = 0;
};

// Soft-margin SVM classifier. Targets must be exactly -1 or +1 with both
// classes present (degenerate_labels_error otherwise). The dual is solved by
// sequential minimal optimization, maximal-violating-pair selection, to the
// given KKT tolerance; smo_convergence_error after 1e7 pair updates.
SvmModel fit_svc(const ActivationTable& table, KernelSpec kernel,
                 double capacity, double tolerance = 1e-3);

// Epsilon-insensitive support vector regression, same solver.
SvmModel fit_svr(const ActivationTable& table, KernelSpec kernel,
                 double capacity, double epsilon, double tolerance = 1e-3);

double predict(const SvmModel& model, std::span<const double> phi);

ScalarPredictor predictor_of(SvmModel model);

// Flat text round-trip: header line "w0 sigma capacity epsilon", then one
// support row per line (coefficient followed by the row values).
void save_svm_model(const SvmModel& model, std::ostream& out);
SvmModel load_svm_model(std::istream& in,
                        SvmTask task = SvmTask::regression);

}  // namespace evoke
