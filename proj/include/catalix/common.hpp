#ifndef CATALIX_COMMON_HPP
#define CATALIX_COMMON_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace catalix {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Syntax errors carry a 1-based source position.
struct ParseError : Error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " at line " + std::to_string(line_) + ", column " +
              std::to_string(col_)),
        line(line_),
        col(col_) {}
};

template <class... Ts>
std::string cat(const Ts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

// Deterministic RNG wrapper; mt19937_64 output is pinned by the standard.
struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed = 0) : g(seed) {}
  std::uint64_t next() { return g(); }
  std::uint64_t below(std::uint64_t n) { return n ? g() % n : 0; }
  // uniform in [lo, hi]
  std::int64_t in(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Tasks must be
// independent; results should be written to preallocated slots so the
// outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned nt = jobs < n ? jobs : static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errs(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= n) break;
          fn(i);
        }
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace catalix

#endif
