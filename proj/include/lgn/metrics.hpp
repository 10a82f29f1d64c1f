#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgn/common.hpp"

namespace lgn {

// Class order everywhere: 0 = N, 1 = S, 2 = V, 3 = F.
inline constexpr int kNumClasses = 4;
inline constexpr const char* kClassNames[kNumClasses] = {"N", "S", "V", "F"};

/** 4×4 confusion counts; rows are true classes, columns predictions. */
struct ConfusionMatrix {
  std::array<std::array<uint64_t, kNumClasses>, kNumClasses> c{};

  uint64_t total() const {
    uint64_t t = 0;
    for (auto& row : c)
      for (uint64_t v : row) t += v;
    return t;
  }
  uint64_t row_sum(int k) const {
    uint64_t t = 0;
    for (uint64_t v : c[size_t(k)]) t += v;
    return t;
  }
  uint64_t col_sum(int k) const {
    uint64_t t = 0;
    for (auto& row : c) t += row[size_t(k)];
    return t;
  }
};

/** Tally a prediction/label sequence over classes 0..3. */
ConfusionMatrix confusion(const std::vector<int>& preds,
                          const std::vector<int>& labels);

double accuracy(const ConfusionMatrix& c);

/** Recall of class k; 0 when the class never occurs. */
double sensitivity(const ConfusionMatrix& c, int k);

/** Positive predictive value of class k; 0 when k is never predicted. */
double ppv(const ConfusionMatrix& c, int k);

/** SEN_S + SEN_V + PPV_S + PPV_V, in [0, 4]. */
double j_index(const ConfusionMatrix& c);

/**
 * Cohen's κ = (Acc − p_e) / (1 − p_e). Empty when the chance agreement p_e
 * equals 1 (single-cell matrices), which leaves κ undefined.
 */
std::optional<double> kappa(const ConfusionMatrix& c);

/** jκ = j/8 + κ/2; empty exactly when κ is undefined. */
std::optional<double> jk_index(const ConfusionMatrix& c);

/** Human-readable metrics table (per-class SEN/PPV, Acc, j, κ, jκ). */
std::string metrics_report_text(const ConfusionMatrix& c);

/** CSV form of the same report; stable header, fixed formatting. */
std::string metrics_report_csv(const ConfusionMatrix& c);

}  // namespace lgn
