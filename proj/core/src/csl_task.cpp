#include "evoke/csl_task.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace evoke {
namespace {

struct PrefixCounts {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;
};

// Legal-next set of a legal prefix S a^i b^j c^k.
LegalSet legal_next_from_counts(const PrefixCounts& n) {
  if (n.b == 0 && n.c == 0) {
    if (n.a == 0) return {true, false, false, false};  // after S: {a}
    return {true, true, false, false};                 // in the a run: {a,b}
  }
  if (n.c == 0) {
    if (n.b < n.a) return {false, true, false, false};  // {b}
    return {false, false, true, false};                 // b run complete: {c}
  }
  if (n.c < n.a) return {false, false, true, false};  // {c}
  return {false, false, false, true};                 // {T}
}

// Feeds one symbol into the counts; false when the prefix leaves the
// language. The symbol must not be S (only position 0 may hold S).
bool advance(PrefixCounts& n, CslSymbol s) {
  const LegalSet legal = legal_next_from_counts(n);
  switch (s) {
    case CslSymbol::a:
      if (!legal[0]) return false;
      ++n.a;
      return true;
    case CslSymbol::b:
      if (!legal[1]) return false;
      ++n.b;
      return true;
    case CslSymbol::c:
      if (!legal[2]) return false;
      ++n.c;
      return true;
    default:
      return false;
  }
}

}  // namespace

std::array<double, kCslInputs> encode_csl_symbol(CslSymbol s) {
  std::array<double, kCslInputs> x{-1.0, -1.0, -1.0, -1.0};
  x[static_cast<std::size_t>(s)] = 1.0;
  return x;
}

SymbolString make_csl_string(int n) {
  if (n < 1) {
    throw std::invalid_argument("make_csl_string: n must be positive");
  }
  SymbolString s;
  s.n = n;
  s.symbols.reserve(3 * static_cast<std::size_t>(n) + 1);
  s.symbols.push_back(CslSymbol::S);
  for (int i = 0; i < n; ++i) s.symbols.push_back(CslSymbol::a);
  for (int i = 0; i < n; ++i) s.symbols.push_back(CslSymbol::b);
  for (int i = 0; i < n; ++i) s.symbols.push_back(CslSymbol::c);

  PrefixCounts counts;
  s.inputs.reserve(s.symbols.size());
  s.legal_next.reserve(s.symbols.size());
  for (std::size_t t = 0; t < s.symbols.size(); ++t) {
    s.inputs.push_back(encode_csl_symbol(s.symbols[t]));
    if (t > 0 && !advance(counts, s.symbols[t])) {
      throw std::logic_error("make_csl_string: generated an illegal prefix");
    }
    s.legal_next.push_back(legal_next_from_counts(counts));
  }
  return s;
}

CslDataset generate_csl_set(int max_n) {
  if (max_n < 2) {
    throw std::invalid_argument(
        "generate_csl_set: need max_n >= 2 so the validation half is "
        "non-empty");
  }
  CslDataset dataset;
  dataset.strings.reserve(max_n);
  for (int n = 1; n <= max_n; ++n) {
    dataset.strings.push_back(make_csl_string(n));
  }
  dataset.training_count = dataset.strings.size() / 2;
  return dataset;
}

std::optional<LegalSet> legal_next_of_prefix(
    std::span<const CslSymbol> prefix) {
  PrefixCounts counts;
  for (std::size_t t = 0; t < prefix.size(); ++t) {
    if (t == 0) {
      if (prefix[0] != CslSymbol::S) return std::nullopt;
      continue;
    }
    if (!advance(counts, prefix[t])) return std::nullopt;
  }
  if (prefix.empty()) {
    // The empty prefix can only be extended by the start symbol, which is not
    // a prediction target; report the post-S view instead of inventing one.
    return std::nullopt;
  }
  return legal_next_from_counts(counts);
}

std::array<ActivationTable, 4> build_csl_tables(
    LstmNetwork& net, std::span<const SymbolString> strings) {
  if (net.input_count() != kCslInputs) {
    throw std::invalid_argument("build_csl_tables: network must have I=4");
  }
  std::array<ActivationTable, 4> tables{
      ActivationTable(net.cell_count()), ActivationTable(net.cell_count()),
      ActivationTable(net.cell_count()), ActivationTable(net.cell_count())};
  for (const SymbolString& s : strings) {
    net.reset();
    for (std::size_t t = 0; t < s.symbols.size(); ++t) {
      const std::span<const double> row = net.step(s.inputs[t]);
      for (std::size_t k = 0; k < 4; ++k) {
        tables[k].append(row, s.legal_next[t][k] ? 1.0 : -1.0);
      }
    }
    for (ActivationTable& table : tables) table.end_sequence();
  }
  return tables;
}

namespace {

bool predicted_legal(const ScalarPredictor& predictor,
                     std::span<const double> row) {
  return predictor(row) > 0.0;  // exactly 0 counts as "not legal"
}

}  // namespace

bool classify_symbols(LstmNetwork& net, const PredictorSet& predictors,
                      std::span<const CslSymbol> symbols) {
  if (symbols.empty() || symbols[0] != CslSymbol::S) return false;
  net.reset();
  PrefixCounts counts;
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    if (t > 0 && !advance(counts, symbols[t])) {
      return false;  // the prefix left the language
    }
    const LegalSet legal = legal_next_from_counts(counts);
    const std::span<const double> row =
        net.step(encode_csl_symbol(symbols[t]));
    for (std::size_t k = 0; k < 4; ++k) {
      if (predicted_legal(predictors[k], row) != legal[k]) return false;
    }
  }
  return true;
}

bool classify_string(LstmNetwork& net, const PredictorSet& predictors,
                     const SymbolString& string) {
  return classify_symbols(net, predictors, string.symbols);
}

int csl_generalization(LstmNetwork& net, const PredictorSet& predictors,
                       int max_n) {
  if (max_n < 1) {
    throw std::invalid_argument("csl_generalization: max_n must be positive");
  }
  for (int n = 1; n <= max_n; ++n) {
    if (!classify_string(net, predictors, make_csl_string(n))) {
      return n - 1;
    }
  }
  return max_n;
}

double csl_fitness(LstmNetwork& net, const PredictorSet& predictors,
                   const CslDataset& dataset) {
  double errors = 0.0;
  for (const SymbolString& s : dataset.strings) {
    net.reset();
    for (std::size_t t = 0; t < s.symbols.size(); ++t) {
      const std::span<const double> row = net.step(s.inputs[t]);
      for (std::size_t k = 0; k < 4; ++k) {
        if (predicted_legal(predictors[k], row) != s.legal_next[t][k]) {
          errors += 1.0;
        }
      }
    }
  }
  return errors;
}

void dump_dataset(const CslDataset& dataset, std::ostream& out) {
  static constexpr char kNames[] = {'S', 'a', 'b', 'c'};
  for (const SymbolString& s : dataset.strings) {
    for (CslSymbol sym : s.symbols) {
      out << kNames[static_cast<std::size_t>(sym)];
    }
    out << '\n';
  }
}

}  // namespace evoke
