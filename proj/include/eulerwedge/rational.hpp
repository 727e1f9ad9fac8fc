#pragma once
#include <boost/rational.hpp>
#include <vector>

namespace ew {

using Rat = boost::rational<long long>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec operator-(const RatVec& a) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

// Solves M x = rhs by exact Gaussian elimination. M must be square and
// invertible (positive-definite Gram matrices in practice).
RatVec solve_exact(RatMat M, RatVec rhs);

}  // namespace ew
