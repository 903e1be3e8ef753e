// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

// Exact value of the double integral of exp(-|u - v| / delta) over two
// collinear intervals [a0, a1] x [b0, b1]; the independent oracle for the
// segment-pair quadrature.  F2 below is the second antiderivative of
// exp(-|x| / delta).
inline double collinear_exp_integral(double a0, double a1, double b0, double b1,
                                     double delta) {
  auto f2 = [delta](double x) {
    return delta * std::abs(x) - delta * delta * (1.0 - std::exp(-std::abs(x) / delta));
  };
  return f2(a1 - b0) + f2(a0 - b1) - f2(a1 - b1) - f2(a0 - b0);
}

// Kolmogorov-Smirnov distance of samples against a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

// Asymptotic KS critical value.
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / 1.4142135623730950488);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (sxy - sx * sy / n) /
         std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
}

// Unique temp path; removed by the destructor.
class TempFile {
 public:
  explicit TempFile(const std::string& name) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("corrshadow_test_" + std::to_string(counter++) + "_" + name))
                .string();
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_file(const std::string& name) {
  return std::string(CORRSHADOW_DATA_DIR) + "/" + name;
}

}  // namespace testutil
