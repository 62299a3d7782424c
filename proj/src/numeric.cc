// Copyright 2026 The dprank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dprank/numeric.h"

#include <cmath>

namespace dprank {

ScalarMinimum GoldenSectionMinimize(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    double abs_tolerance) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evaluations = 2;
  while (b - a > abs_tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++evaluations;
  }
  return fc <= fd ? ScalarMinimum{c, fc, evaluations}
                  : ScalarMinimum{d, fd, evaluations};
}

double SimpsonUniform(std::span<const double> y, double h) {
  const size_t n = y.size();
  if (n < 2) return 0.0;
  const size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * h * (y[0] + y[1]);
  // With an odd interval count the last three intervals use the 3/8 rule.
  const size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  double sum = 0.0;
  for (size_t i = 0; i + 2 <= simpson_end; i += 2) {
    sum += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  }
  if (simpson_end != intervals) {
    const size_t i = simpson_end;
    sum += 3.0 * h / 8.0 * (y[i] + 3.0 * y[i + 1] + 3.0 * y[i + 2] + y[i + 3]);
  }
  return sum;
}

double SimpsonIntegrate(const std::function<double(double)>& f, double a,
                        double b, int nodes) {
  if (nodes < 2 || b <= a) return 0.0;
  const double h = (b - a) / (nodes - 1);
  std::vector<double> y(nodes);
  for (int i = 0; i < nodes; ++i) y[i] = f(a + i * h);
  return SimpsonUniform(y, h);
}

int DefaultThreads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace dprank
