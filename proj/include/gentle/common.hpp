#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gentle {

// Bad user input, malformed objects, violated preconditions. CLI exit code 4.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured resource limit was hit. CLI exit code 3.
struct cap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resource limits shared by the heavier constructions. dim_cap < 0 means
// "derive from the operands" (power computations use dim(K)*r + 1).
struct Caps {
  uint32_t r_max = 4;
  int dim_cap = -1;
  std::size_t max_simplices = 5'000'000;
  std::size_t max_maps = 200'000;
  std::size_t group_cap = 256;
};

// Exact rational arithmetic, 64-bit numerator/denominator with overflow
// checks. Enough for the integer-polynomial window tests.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool is_zero() const { return num == 0; }
  std::string str() const;

 private:
  void normalize();
};

uint64_t fnv1a(const void* data, std::size_t n, uint64_t seed = 1469598103934665603ull);

inline uint64_t fnv1a_str(const std::string& s, uint64_t seed = 1469598103934665603ull) {
  return fnv1a(s.data(), s.size(), seed);
}

// Number of worker threads: GENTLE_THREADS if set, else 1. Results never
// depend on this value; it only spreads independent work.
std::size_t thread_count();

// Runs fn(i) for i in [0, n). Output slots are written by index so the
// result is identical for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace gentle
