#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace gconj {

// All group arithmetic uses arbitrary precision integers; nothing in the
// library is allowed to overflow silently.
using Int = boost::multiprecision::cpp_int;

using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int gcd_int(Int a, Int b) {
  a = abs_int(a);
  b = abs_int(b);
  while (b != 0) {
    Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// Floor division/remainder (cpp_int's % truncates toward zero).
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int floor_mod(const Int& a, const Int& b) { return a - floor_div(a, b) * b; }

inline long long to_ll(const Int& x) { return x.convert_to<long long>(); }

std::string vec_to_string(const Vec& v);
std::string mat_to_string(const Mat& m);

}  // namespace gconj
