#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynq {

// Discrete time. Stages are 1-based; stage 0 only appears as the seed time of
// initial-queue blockers.
using Stage = long long;

// Exact arithmetic for all reported values; no floating point in results.
using Rat = boost::rational<long long>;

std::string to_string(const Rat& r);                   // "p/q", or "p" when integral
std::string to_decimal(const Rat& r, int places = 6);  // rounded decimal rendering

enum class Errc {
  route_explosion,
  infeasible_demand,
  incomplete_horizon,
  incomplete_window,
  horizon_too_small,
  no_cycle_within_horizon,
  not_parallel,
  not_at_capacity,
  not_chain_of_parallel,
  state_explosion,
  capacity_mismatch,
  search_budget_exceeded,
  overflow,
  parse_error,
  validation_error,
  bad_argument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

// Integer helpers with overflow detection (quantities in this domain are
// naturals; silent wraparound would corrupt results).
long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);
long long checked_pow(long long base, long long exp);

}  // namespace dynq
