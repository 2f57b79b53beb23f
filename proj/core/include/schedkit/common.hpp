#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace schedkit {

// Feasibility tolerance used for all floating-point LP/flow comparisons.
inline constexpr double kFeasTol = 1e-9;

// Error taxonomy. The CLI maps these onto exit codes: parse/argument -> 1,
// infeasible -> 2, internal/audit -> 3.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct validation_error : error { using error::error; };
struct argument_error : error { using error::error; };
struct size_error : error { using error::error; };
struct parse_error : error { using error::error; };
struct infeasible_error : error { using error::error; };
struct internal_error : error { using error::error; };
// A structural audit that is supposed to hold on every run has fired.
struct audit_error : internal_error { using internal_error::internal_error; };

// SplitMix64. Hand-rolled so that seeded output is byte-identical across
// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], inclusive.
  long long next_int(long long lo, long long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(next_u64() % span);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (lo, hi].
  double next_open_closed(double lo, double hi) {
    return hi - (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

}  // namespace schedkit
