#pragma once

#include <vector>

#include "conn/lexicon/stats.hpp"

namespace conn::fixtures {

inline const std::vector<int> kPolarity = {-1, 0, 1};

// Expected values computed once with scikit-learn (f1_score average="macro",
// zero_division=0; cohen_kappa_score) and statsmodels (fleiss_kappa), then
// frozen here.
struct MacroF1Case {
  std::vector<int> gold, pred, classes;
  double f1;
};

inline const std::vector<MacroF1Case> kMacroF1 = {
    {{-1, -1, 0, 0, 1, 1}, {0, 0, 0, 0, 0, 0}, {-1, 0, 1}, 0.16666666666666666},
    {{-1, 0, 0, -1, 0}, {-1, 0, -1, -1, 0}, {-1, 0, 1}, 0.5333333333333333},
    {{0, 1, 2, 3, 0, 1, 2, 3, 1, 1}, {0, 1, 1, 3, 2, 1, 2, 0, 1, 3}, {0, 1, 2, 3}, 0.5625},
    {{1, 1, 0, -1, -1, 0, 1, 0}, {1, 0, 0, -1, 1, 0, -1, 0}, {-1, 0, 1}, 0.5857142857142857},
    {{0, 0, 0, 1, 1}, {0, 0, 0, 0, 0}, {0, 1, 2}, 0.25},
};

struct FleissCase {
  AnnotationMatrix m;
  double kappa;
};

inline const std::vector<FleissCase> kFleiss = {
    {{{1, 1, 1}, {0, 0, 1}, {-1, -1, -1}, {1, 0, 0}, {-1, 0, 1}}, 0.29054054054054046},
    {{{1, 1}, {1, 0}, {0, 0}, {-1, -1}, {-1, 1}, {0, 1}}, 0.23404255319148937},
    {{{0, 0, 0, 0}, {1, 1, 1, 0}, {-1, -1, 0, 0}, {1, 1, 1, 1}, {0, -1, -1, -1}, {1, 0, 1, 0}}, 0.39459459459459445},
    {{{1, 0, -1}, {1, 1, 0}, {0, 0, 0}, {-1, -1, 1}}, 0.10638297872340421},
    {{{1, 1, 1}, {1, 1, 1}, {0, 0, 1}, {-1, -1, -1}, {-1, 0, -1}, {0, 0, 0}, {1, -1, 1}}, 0.5625000000000001},
};

struct PairCase {
  std::vector<int> a;
  std::vector<int> b;
  double kappa;
  double pct;
  double nc;
};

inline const std::vector<PairCase> kPairs = {
    {{1, 0, -1, 1, 0}, {1, 0, 0, 1, -1}, 0.375, 60.0, 100.0},
    {{1, 1, 1, 0}, {1, 0, 1, 0}, 0.5, 75.0, 100.0},
    {{-1, -1, 0, 1, 1, 0}, {0, -1, 0, 1, 1, 1}, 0.5, 66.66666666666666, 100.0},
    {{1, 0, -1}, {-1, 0, 1}, 0.0, 33.33333333333333, 33.33333333333333},
    {{0, 0, 1, 1, -1, -1, 0}, {0, 1, 1, 0, -1, 0, 0}, 0.32258064516129026, 57.14285714285714, 100.0},
};

}  // namespace conn::fixtures
