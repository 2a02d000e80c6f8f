// Argument helpers for the dfpfisher command-line tool.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dfpfisher/linalg.hpp"

namespace dfpfisher::cli {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError(what + ": malformed number '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(s);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

/// `start:stop:step` (stop inclusive), a comma list, or a single value.
inline std::vector<double> parse_range(const std::string& s, const std::string& what) {
  if (s.empty()) throw UsageError(what + ": empty range");
  if (s.find(':') == std::string::npos) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(parse_double(p, what));
    return out;
  }
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError(what + ": expected start:stop:step, got '" + s + "'");
  const double a = parse_double(parts[0], what), b = parse_double(parts[1], what), h = parse_double(parts[2], what);
  if (!(h > 0.0)) throw UsageError(what + ": step must be positive");
  if (b < a) throw UsageError(what + ": stop lies before start");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + static_cast<double>(i) * h;
  return out;
}

/// Three comma-separated Bloch components.
inline Vec3 parse_vec3(const std::string& s, const std::string& what) {
  const auto p = split(s, ',');
  if (p.size() != 3) throw UsageError(what + ": expected x,y,z");
  return {parse_double(p[0], what), parse_double(p[1], what), parse_double(p[2], what)};
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; the first exception is rethrown on the caller.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dfpfisher::cli
