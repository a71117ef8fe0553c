#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "evoke/activation_table.hpp"
#include "evoke/lstm.hpp"

namespace evoke {

// Input alphabet of the a^n b^n c^n task; one input channel per symbol.
enum class CslSymbol : int { S = 0, a = 1, b = 2, c = 3 };

// Prediction targets are the symbols that may legally follow a prefix.
// Classifier index layout: 0 = a, 1 = b, 2 = c, 3 = T (termination).
using LegalSet = std::array<bool, 4>;

inline constexpr std::size_t kCslInputs = 4;

struct SymbolString {
  int n = 0;
  std::vector<CslSymbol> symbols;  // S a^n b^n c^n, length 3n+1
  // Per step: 1.0 on the observed symbol's channel, -1.0 elsewhere.
  std::vector<std::array<double, kCslInputs>> inputs;
  // Grammar legal-next set after each fed symbol; the final set is {T}.
  std::vector<LegalSet> legal_next;
};

SymbolString make_csl_string(int n);

struct CslDataset {
  std::vector<SymbolString> strings;  // n = 1..N
  std::size_t training_count = 0;     // first half, used for fitting

  std::span<const SymbolString> training() const {
    return {strings.data(), training_count};
  }
  std::span<const SymbolString> validation() const {
    return {strings.data() + training_count, strings.size() - training_count};
  }
  std::span<const SymbolString> all() const { return strings; }
};

// Strings for n = 1..max_n, first half training, second half validation.
// max_n must be at least 2 (otherwise the validation half is empty).
CslDataset generate_csl_set(int max_n);

std::array<double, kCslInputs> encode_csl_symbol(CslSymbol s);

// Legal continuations of an arbitrary symbol sequence under S a^n b^n c^n T;
// nullopt once the prefix can no longer be completed to a legal string.
std::optional<LegalSet> legal_next_of_prefix(std::span<const CslSymbol> prefix);

// One shared network pass per string (reset before each); the four tables
// hold identical rows and one target column per classifier: +1 when the
// symbol is in the grammar's legal-next set, -1 otherwise.
std::array<ActivationTable, 4> build_csl_tables(
    LstmNetwork& net, std::span<const SymbolString> strings);

using PredictorSet = std::array<ScalarPredictor, 4>;

// A string is accepted iff its prefix stays inside the language and, at every
// step, the thresholded predictions (> 0 means "legal next") reproduce the
// grammar's legal-next set exactly. A prediction of exactly 0 counts as -1.
bool classify_symbols(LstmNetwork& net, const PredictorSet& predictors,
                      std::span<const CslSymbol> symbols);
bool classify_string(LstmNetwork& net, const PredictorSet& predictors,
                     const SymbolString& string);

// Largest m such that a^n b^n c^n is accepted for every n = 1..m; scans in
// order and stops at the first rejection (0 if n = 1 already fails).
int csl_generalization(LstmNetwork& net, const PredictorSet& predictors,
                       int max_n);

// Total count of per-step per-classifier sign errors over the whole dataset
// (training plus validation halves).
double csl_fitness(LstmNetwork& net, const PredictorSet& predictors,
                   const CslDataset& dataset);

// Plain text dump, one string per line.
void dump_dataset(const CslDataset& dataset, std::ostream& out);

}  // namespace evoke
