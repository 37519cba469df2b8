#include "gentle/common.hpp"

#include <cstdlib>
#include <mutex>
#include <thread>

namespace gentle {

namespace {

long long checked_mul(long long a, long long b) {
  __int128 r = static_cast<__int128>(a) * b;
  if (r > INT64_MAX || r < INT64_MIN) throw input_error("rational overflow");
  return static_cast<long long>(r);
}

long long checked_add(long long a, long long b) {
  __int128 r = static_cast<__int128>(a) + b;
  if (r > INT64_MAX || r < INT64_MIN) throw input_error("rational overflow");
  return static_cast<long long>(r);
}

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (d == 0) throw input_error("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

Rational Rational::operator+(const Rational& o) const {
  Rational r;
  r.num = checked_add(checked_mul(num, o.den), checked_mul(o.num, den));
  r.den = checked_mul(den, o.den);
  r.normalize();
  return r;
}

Rational Rational::operator-(const Rational& o) const {
  Rational neg{-o.num, o.den};
  return *this + neg;
}

Rational Rational::operator*(const Rational& o) const {
  Rational r;
  r.num = checked_mul(num, o.num);
  r.den = checked_mul(den, o.den);
  r.normalize();
  return r;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

uint64_t fnv1a(const void* data, std::size_t n, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::size_t thread_count() {
  const char* env = std::getenv("GENTLE_THREADS");
  if (!env) return 1;
  long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  if (v > 64) return 64;
  return static_cast<std::size_t>(v);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = thread_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = n;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr err;
  std::mutex err_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace gentle
