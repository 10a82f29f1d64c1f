#include "lgn/lut.hpp"

namespace lgn {

static int lut_fanin_checked(size_t w_size, size_t l_size) {
  if (l_size == 0) throw ArgumentError("LUT fan-in must be >= 1");
  if (w_size != (size_t(1) << l_size))
    throw ArgumentError("LUT weight count " + std::to_string(w_size) +
                        " does not match 2^" + std::to_string(l_size));
  return int(l_size);
}

std::vector<std::vector<uint8_t>> selector_matrix(int n) {
  if (n < 1) throw ArgumentError("selector_matrix requires N >= 1");
  size_t rows = size_t(1) << n;
  std::vector<std::vector<uint8_t>> s(rows, std::vector<uint8_t>(n));
  for (size_t i = 0; i < rows; ++i)
    for (int j = 0; j < n; ++j)
      s[i][j] = uint8_t((i >> (n - 1 - j)) & 1);
  return s;
}

// Merge adjacent table entries with the least significant selector first;
// after N halvings the single survivor is the output.
double lut_forward(const std::vector<double>& w, const std::vector<double>& l) {
  int n = lut_fanin_checked(w.size(), l.size());
  std::vector<double> v = w;
  size_t size = v.size();
  for (int j = n - 1; j >= 0; --j) {
    size_t half = size / 2;
    double lj = l[size_t(j)];
    for (size_t i = 0; i < half; ++i)
      v[i] = (1.0 - lj) * v[2 * i] + lj * v[2 * i + 1];
    size = half;
  }
  return v[0];
}

LutGrad lut_forward_backward(const std::vector<double>& w,
                             const std::vector<double>& l, double upstream) {
  int n = lut_fanin_checked(w.size(), l.size());

  // Forward, saving the pre-merge values at every level for the reverse sweep.
  std::vector<std::vector<double>> levels(static_cast<size_t>(n));
  std::vector<double> v = w;
  for (int j = n - 1; j >= 0; --j) {
    levels[size_t(j)] = v;
    size_t half = v.size() / 2;
    double lj = l[size_t(j)];
    std::vector<double> next(half);
    for (size_t i = 0; i < half; ++i)
      next[i] = (1.0 - lj) * v[2 * i] + lj * v[2 * i + 1];
    v.swap(next);
  }

  LutGrad out;
  out.grad_l.assign(size_t(n), 0.0);
  std::vector<double> g{upstream};
  for (int j = 0; j < n; ++j) {
    const std::vector<double>& before = levels[size_t(j)];
    double lj = l[size_t(j)];
    std::vector<double> gnext(before.size());
    double gl = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
      gnext[2 * i] = g[i] * (1.0 - lj);
      gnext[2 * i + 1] = g[i] * lj;
      gl += g[i] * (before[2 * i + 1] - before[2 * i]);
    }
    out.grad_l[size_t(j)] = gl;
    g.swap(gnext);
  }
  out.grad_w = std::move(g);
  return out;
}

}  // namespace lgn
