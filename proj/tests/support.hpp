#pragma once

#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "twistlab/error.hpp"
#include "twistlab/linalg.hpp"
#include "twistlab/random.hpp"

namespace twistlab::testing {

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline CMatrix diag(std::initializer_list<Complex> values) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& v : values) m(i, i) = v, ++i;
  return m;
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Multiset distance between two spectra: greedy nearest matching.
inline double spectrum_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

template <class Fn>
ErrorKind error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a twistlab::Error";
  return ErrorKind::Usage;
}

}  // namespace twistlab::testing
