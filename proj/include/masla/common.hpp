#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace masla {

inline constexpr const char* kVersion = "0.1.0";

// Points, drifts and noise vectors are plain dense vectors; all targets in
// the catalogue are low-dimensional (d = 1 or 2).
using Vec = std::vector<double>;

// A prox request whose minimizer set is not a single point.
class NotUniqueError : public std::runtime_error {
 public:
  explicit NotUniqueError(const std::string& what) : std::runtime_error(what) {}
};

// A request the target or kernel variant cannot serve.
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid experiment or kernel configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline bool all_finite(const Vec& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double sq_norm(const Vec& a) { return dot(a, a); }

inline double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Fixed 17-significant-digit scientific notation; output files are compared
// by checksum, so formatting must be bit-stable.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace masla
