#include "lgn/metrics.hpp"

#include <cstdio>

namespace lgn {

ConfusionMatrix confusion(const std::vector<int>& preds,
                          const std::vector<int>& labels) {
  if (preds.size() != labels.size())
    throw ArgumentError("confusion: preds/labels size mismatch (" +
                        std::to_string(preds.size()) + " vs " +
                        std::to_string(labels.size()) + ")");
  ConfusionMatrix m;
  for (size_t i = 0; i < preds.size(); ++i) {
    int p = preds[i];
    int y = labels[i];
    if (p < 0 || p >= kNumClasses || y < 0 || y >= kNumClasses)
      throw ArgumentError("confusion: class id out of range at index " +
                          std::to_string(i));
    m.c[size_t(y)][size_t(p)] += 1;
  }
  return m;
}

double accuracy(const ConfusionMatrix& c) {
  uint64_t t = c.total();
  if (t == 0) return 0.0;
  uint64_t diag = 0;
  for (int k = 0; k < kNumClasses; ++k) diag += c.c[size_t(k)][size_t(k)];
  return double(diag) / double(t);
}

double sensitivity(const ConfusionMatrix& c, int k) {
  if (k < 0 || k >= kNumClasses)
    throw ArgumentError("sensitivity: class id out of range");
  uint64_t denom = c.row_sum(k);
  if (denom == 0) return 0.0;
  return double(c.c[size_t(k)][size_t(k)]) / double(denom);
}

double ppv(const ConfusionMatrix& c, int k) {
  if (k < 0 || k >= kNumClasses) throw ArgumentError("ppv: class id out of range");
  uint64_t denom = c.col_sum(k);
  if (denom == 0) return 0.0;
  return double(c.c[size_t(k)][size_t(k)]) / double(denom);
}

double j_index(const ConfusionMatrix& c) {
  return sensitivity(c, 1) + sensitivity(c, 2) + ppv(c, 1) + ppv(c, 2);
}

std::optional<double> kappa(const ConfusionMatrix& c) {
  uint64_t t = c.total();
  if (t == 0) throw ArgumentError("kappa: empty confusion matrix");
  // Chance agreement compared exactly in integers: p_e == 1 iff
  // sum_k row_k*col_k == t^2, avoiding float round-off on the boundary.
  unsigned __int128 num = 0;
  for (int k = 0; k < kNumClasses; ++k)
    num += (unsigned __int128)c.row_sum(k) * (unsigned __int128)c.col_sum(k);
  unsigned __int128 tt = (unsigned __int128)t * (unsigned __int128)t;
  if (num == tt) return std::nullopt;
  double p_e = double(num) / double(tt);
  return (accuracy(c) - p_e) / (1.0 - p_e);
}

std::optional<double> jk_index(const ConfusionMatrix& c) {
  auto k = kappa(c);
  if (!k) return std::nullopt;
  return j_index(c) / 8.0 + *k / 2.0;
}

std::string metrics_report_text(const ConfusionMatrix& c) {
  char buf[256];
  std::string out;
  out += "confusion (rows true, cols predicted)\n";
  std::snprintf(buf, sizeof buf, "%6s %10s %10s %10s %10s\n", "", kClassNames[0],
                kClassNames[1], kClassNames[2], kClassNames[3]);
  out += buf;
  for (int r = 0; r < kNumClasses; ++r) {
    std::snprintf(buf, sizeof buf, "%6s %10llu %10llu %10llu %10llu\n",
                  kClassNames[r], (unsigned long long)c.c[size_t(r)][0],
                  (unsigned long long)c.c[size_t(r)][1],
                  (unsigned long long)c.c[size_t(r)][2],
                  (unsigned long long)c.c[size_t(r)][3]);
    out += buf;
  }
  for (int k = 0; k < kNumClasses; ++k) {
    std::snprintf(buf, sizeof buf, "class %s: sen=%.6f ppv=%.6f\n",
                  kClassNames[k], sensitivity(c, k), ppv(c, k));
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "accuracy=%.6f\n", accuracy(c));
  out += buf;
  std::snprintf(buf, sizeof buf, "j_index=%.6f\n", j_index(c));
  out += buf;
  auto kap = kappa(c);
  auto jk = jk_index(c);
  if (kap) {
    std::snprintf(buf, sizeof buf, "kappa=%.6f\njk_index=%.6f\n", *kap, *jk);
    out += buf;
  } else {
    out += "kappa=undefined\njk_index=undefined\n";
  }
  return out;
}

std::string metrics_report_csv(const ConfusionMatrix& c) {
  std::string out =
      "metric,N,S,V,F\n";
  char buf[256];
  auto row = [&](const char* name, double a, double b, double d, double e) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f\n", name, a, b, d, e);
    out += buf;
  };
  row("sen", sensitivity(c, 0), sensitivity(c, 1), sensitivity(c, 2),
      sensitivity(c, 3));
  row("ppv", ppv(c, 0), ppv(c, 1), ppv(c, 2), ppv(c, 3));
  for (int r = 0; r < kNumClasses; ++r) {
    std::snprintf(buf, sizeof buf, "count_%s,%llu,%llu,%llu,%llu\n",
                  kClassNames[r], (unsigned long long)c.c[size_t(r)][0],
                  (unsigned long long)c.c[size_t(r)][1],
                  (unsigned long long)c.c[size_t(r)][2],
                  (unsigned long long)c.c[size_t(r)][3]);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "accuracy,%.6f,,,\n", accuracy(c));
  out += buf;
  std::snprintf(buf, sizeof buf, "j_index,%.6f,,,\n", j_index(c));
  out += buf;
  auto kap = kappa(c);
  auto jk = jk_index(c);
  if (kap) {
    std::snprintf(buf, sizeof buf, "kappa,%.6f,,,\n", *kap);
    out += buf;
    std::snprintf(buf, sizeof buf, "jk_index,%.6f,,,\n", *jk);
    out += buf;
  } else {
    out += "kappa,undefined,,,\njk_index,undefined,,,\n";
  }
  return out;
}

}  // namespace lgn
