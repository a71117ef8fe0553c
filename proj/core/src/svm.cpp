#include "evoke/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace evoke {

double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                       double sigma) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("gaussian_kernel: length mismatch");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian_kernel: sigma must be positive");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    d2 += d * d;
  }
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

KernelCache::KernelCache(const ActivationTable& table, KernelSpec kernel,
                         std::size_t full_matrix_limit)
    : table_(table), kernel_(kernel), n_(table.rows()) {
  full_ = n_ <= full_matrix_limit;
  if (full_) {
    matrix_.assign(n_ * n_, 0.0);
    filled_.assign(n_, false);
  } else {
    // Bound the row cache to roughly the memory a full matrix at the limit
    // would take, but always keep at least two rows (the solver works on
    // pairs).
    max_cached_ = std::max<std::size_t>(
        2, full_matrix_limit * full_matrix_limit / std::max<std::size_t>(n_, 1));
    max_cached_ = std::min(max_cached_, n_);
  }
}

void KernelCache::compute_row(std::size_t i, double* out) const {
  const std::span<const double> xi = table_.row(i);
  for (std::size_t j = 0; j < n_; ++j) {
    out[j] = gaussian_kernel(xi, table_.row(j), kernel_.sigma);
  }
}

std::span<const double> KernelCache::row(std::size_t i) {
  if (full_) {
    double* r = matrix_.data() + i * n_;
    if (!filled_[i]) {
      compute_row(i, r);
      filled_[i] = true;
    }
    return {r, n_};
  }
  auto found = cached_.find(i);
  if (found != cached_.end()) {
    lru_.erase(found->second.lru_pos);
    lru_.push_front(i);
    found->second.lru_pos = lru_.begin();
    return found->second.values;
  }
  if (cached_.size() >= max_cached_) {
    const std::size_t victim = lru_.back();
    lru_.pop_back();
    cached_.erase(victim);
  }
  CacheEntry entry;
  entry.values.resize(n_);
  compute_row(i, entry.values.data());
  lru_.push_front(i);
  entry.lru_pos = lru_.begin();
  return cached_.emplace(i, std::move(entry)).first->second.values;
}

namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kMaxPairUpdates = 10'000'000;
constexpr double kInf = std::numeric_limits<double>::infinity();

// The solver minimizes 1/2 a'Qa + p'a subject to 0 <= a_v <= c and y'a = 0,
// with Q(v,w) = y_v y_w K(row_of[v], row_of[w]).
//
// Classification: one variable per table row, y = labels, p = -1.
// Regression: 2l variables (alpha, alpha*), y = (+1.., -1..),
// p = (eps - d; eps + d); the coefficient of row r is a_r - a_{l+r}.
struct SmoProblem {
  KernelCache& gram;
  std::vector<signed char> y;
  std::vector<double> p;
  std::vector<std::size_t> row_of;
  double c;
  double tolerance;
};

struct SmoSolution {
  std::vector<double> alpha;
  double rho;  // multiplier of the equality constraint
  double objective;
  double gap;
  std::size_t iterations;
};

SmoSolution solve_smo(SmoProblem& prob) {
  const std::size_t n = prob.y.size();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(prob.p);  // gradient of the objective at alpha = 0
  std::vector<double> qi(n), qj(n);

  auto fill_q_row = [&](std::size_t v, std::vector<double>& out) {
    const std::span<const double> k = prob.gram.row(prob.row_of[v]);
    const double yv = prob.y[v];
    for (std::size_t w = 0; w < n; ++w) {
      out[w] = yv * prob.y[w] * k[prob.row_of[w]];
    }
  };

  double gap = kInf;
  std::size_t iter = 0;
  for (; iter < kMaxPairUpdates; ++iter) {
    // Maximal violating pair: i maximizes -y_t grad_t over I_up, j minimizes
    // it over I_low.
    double gmax = -kInf, gmin = kInf;
    std::ptrdiff_t i = -1, j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -prob.y[t] * grad[t];
      const bool up = prob.y[t] > 0 ? alpha[t] < prob.c : alpha[t] > 0.0;
      const bool low = prob.y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < prob.c;
      if (up && v > gmax) {
        gmax = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (low && v < gmin) {
        gmin = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    gap = gmax - gmin;
    if (i < 0 || j < 0 || gap <= prob.tolerance) {
      break;
    }

    fill_q_row(static_cast<std::size_t>(i), qi);
    fill_q_row(static_cast<std::size_t>(j), qj);
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double c = prob.c;

    if (prob.y[i] != prob.y[j]) {
      double quad = qi[i] + qj[j] + 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = old_ai - old_aj;
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else {
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = -diff;
        }
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = c + diff;
        }
      }
    } else {
      double quad = qi[i] + qj[j] - 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = old_ai + old_aj;
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = sum;
        }
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else {
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = sum;
        }
      }
    }

    const double di = alpha[i] - old_ai;
    const double dj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += qi[t] * di + qj[t] * dj;
    }
  }

  if (gap > prob.tolerance) {
    throw smo_convergence_error("SMO did not converge: gap " +
                                std::to_string(gap) + " after " +
                                std::to_string(iter) + " pair updates");
  }

  // KKT multiplier of y'a = 0: y_t grad_t for free variables, otherwise the
  // midpoint of the feasible interval.
  double upper = kInf, lower = -kInf, free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = prob.y[t] * grad[t];
    if (alpha[t] >= prob.c) {
      if (prob.y[t] < 0) {
        upper = std::min(upper, yg);
      } else {
        lower = std::max(lower, yg);
      }
    } else if (alpha[t] <= 0.0) {
      if (prob.y[t] > 0) {
        upper = std::min(upper, yg);
      } else {
        lower = std::max(lower, yg);
      }
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho =
      free_count > 0 ? free_sum / free_count : (upper + lower) / 2.0;

  double objective = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    objective += alpha[t] * (grad[t] + prob.p[t]);
  }
  objective /= 2.0;

  return {std::move(alpha), rho, objective, std::max(gap, 0.0), iter};
}

void check_common(const ActivationTable& table, KernelSpec kernel,
                  double capacity, double tolerance) {
  if (!(kernel.sigma > 0.0)) {
    throw std::invalid_argument("fit: sigma must be positive");
  }
  if (!(capacity > 0.0)) {
    throw std::invalid_argument("fit: capacity must be positive");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("fit: tolerance must be positive");
  }
  for (double d : table.targets()) {
    if (!std::isfinite(d)) {
      throw std::invalid_argument("fit: non-finite target");
    }
  }
}

SvmModel extract_model(const ActivationTable& table, SvmTask task,
                       KernelSpec kernel, double capacity, double epsilon,
                       std::span<const double> row_coefficients,
                       const SmoSolution& solution) {
  SvmModel model;
  model.task = task;
  model.kernel = kernel;
  model.capacity = capacity;
  model.epsilon = epsilon;
  model.bias = -solution.rho;
  model.width = table.width();
  model.dual_objective = solution.objective;
  model.kkt_gap = solution.gap;
  model.iterations = solution.iterations;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    if (row_coefficients[r] != 0.0) {
      model.coefficients.push_back(row_coefficients[r]);
      const std::span<const double> row = table.row(r);
      model.support_rows.emplace_back(row.begin(), row.end());
    }
  }
  return model;
}

}  // namespace

SvmModel fit_svc(const ActivationTable& table, KernelSpec kernel,
                 double capacity, double tolerance) {
  check_common(table, kernel, capacity, tolerance);
  const std::size_t l = table.rows();
  std::size_t positives = 0, negatives = 0;
  for (double d : table.targets()) {
    if (d == 1.0) {
      ++positives;
    } else if (d == -1.0) {
      ++negatives;
    } else {
      throw std::invalid_argument("fit_svc: targets must be -1 or +1");
    }
  }
  if (positives == 0 || negatives == 0) {
    throw degenerate_labels_error("fit_svc: single-class data");
  }

  KernelCache gram(table, kernel);
  SmoProblem prob{gram, {}, {}, {}, capacity, tolerance};
  prob.y.resize(l);
  prob.p.assign(l, -1.0);
  prob.row_of.resize(l);
  for (std::size_t r = 0; r < l; ++r) {
    prob.y[r] = table.target(r) > 0 ? 1 : -1;
    prob.row_of[r] = r;
  }
  const SmoSolution solution = solve_smo(prob);

  std::vector<double> coef(l);
  for (std::size_t r = 0; r < l; ++r) {
    coef[r] = prob.y[r] * solution.alpha[r];
  }
  return extract_model(table, SvmTask::classification, kernel, capacity, 0.0,
                       coef, solution);
}

SvmModel fit_svr(const ActivationTable& table, KernelSpec kernel,
                 double capacity, double epsilon, double tolerance) {
  check_common(table, kernel, capacity, tolerance);
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("fit_svr: epsilon must be non-negative");
  }
  const std::size_t l = table.rows();
  if (l < 2) {
    throw std::invalid_argument("fit_svr: need at least two rows");
  }

  KernelCache gram(table, kernel);
  SmoProblem prob{gram, {}, {}, {}, capacity, tolerance};
  prob.y.resize(2 * l);
  prob.p.resize(2 * l);
  prob.row_of.resize(2 * l);
  for (std::size_t r = 0; r < l; ++r) {
    prob.y[r] = 1;
    prob.y[l + r] = -1;
    prob.p[r] = epsilon - table.target(r);
    prob.p[l + r] = epsilon + table.target(r);
    prob.row_of[r] = r;
    prob.row_of[l + r] = r;
  }
  const SmoSolution solution = solve_smo(prob);

  std::vector<double> coef(l);
  for (std::size_t r = 0; r < l; ++r) {
    coef[r] = solution.alpha[r] - solution.alpha[l + r];
  }
  return extract_model(table, SvmTask::regression, kernel, capacity, epsilon,
                       coef, solution);
}

double predict(const SvmModel& model, std::span<const double> phi) {
  if (!model.support_rows.empty() && phi.size() != model.width) {
    throw std::invalid_argument("predict: row width " +
                                std::to_string(phi.size()) + " != " +
                                std::to_string(model.width));
  }
  double y = model.bias;
  for (std::size_t i = 0; i < model.support_rows.size(); ++i) {
    y += model.coefficients[i] *
         gaussian_kernel(phi, model.support_rows[i], model.kernel.sigma);
  }
  return y;
}

ScalarPredictor predictor_of(SvmModel model) {
  return [m = std::move(model)](std::span<const double> phi) {
    return predict(m, phi);
  };
}

namespace {

void print_number(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void save_svm_model(const SvmModel& model, std::ostream& out) {
  print_number(out, model.bias);
  out << ' ';
  print_number(out, model.kernel.sigma);
  out << ' ';
  print_number(out, model.capacity);
  out << ' ';
  print_number(out, model.epsilon);
  out << '\n';
  for (std::size_t i = 0; i < model.support_rows.size(); ++i) {
    print_number(out, model.coefficients[i]);
    for (double v : model.support_rows[i]) {
      out << ' ';
      print_number(out, v);
    }
    out << '\n';
  }
}

SvmModel load_svm_model(std::istream& in, SvmTask task) {
  SvmModel model;
  model.task = task;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("load_svm_model: missing header");
  }
  {
    std::istringstream header(line);
    if (!(header >> model.bias >> model.kernel.sigma >> model.capacity >>
          model.epsilon)) {
      throw std::invalid_argument("load_svm_model: malformed header");
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row_in(line);
    double coef = 0.0;
    if (!(row_in >> coef)) {
      throw std::invalid_argument("load_svm_model: malformed support row");
    }
    std::vector<double> row;
    double v = 0.0;
    while (row_in >> v) row.push_back(v);
    if (!model.support_rows.empty() &&
        row.size() != model.support_rows.front().size()) {
      throw std::invalid_argument("load_svm_model: ragged support rows");
    }
    model.coefficients.push_back(coef);
    model.support_rows.push_back(std::move(row));
  }
  model.width =
      model.support_rows.empty() ? 0 : model.support_rows.front().size();
  return model;
}

}  // namespace evoke
