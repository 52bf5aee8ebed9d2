#include "dynq/types.hpp"

#include <cstdlib>

namespace dynq {

std::string to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_decimal(const Rat& r, int places) {
  long long num = r.numerator();
  long long den = r.denominator();
  bool neg = num < 0;
  if (neg) num = -num;
  long long whole = num / den;
  long long rem = num % den;
  std::string out = (neg ? "-" : "") + std::to_string(whole);
  if (places <= 0) return out;
  out += '.';
  for (int i = 0; i < places; ++i) {
    rem *= 10;
    if (i + 1 == places) {
      // round half up on the last digit
      long long digit = rem / den;
      if ((rem % den) * 2 >= den) ++digit;
      if (digit == 10) {
        // rare carry; fall back to a cruder but correct rendering
        return to_decimal(r + Rat(neg ? -1 : 1, 2 * checked_pow(10, places)), places);
      }
      out += char('0' + digit);
    } else {
      out += char('0' + rem / den);
      rem %= den;
    }
  }
  return out;
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::route_explosion: return "RouteExplosion";
    case Errc::infeasible_demand: return "InfeasibleDemand";
    case Errc::incomplete_horizon: return "IncompleteHorizon";
    case Errc::incomplete_window: return "IncompleteWindow";
    case Errc::horizon_too_small: return "HorizonTooSmall";
    case Errc::no_cycle_within_horizon: return "NoCycleWithinHorizon";
    case Errc::not_parallel: return "NotParallel";
    case Errc::not_at_capacity: return "NotAtCapacity";
    case Errc::not_chain_of_parallel: return "NotChainOfParallel";
    case Errc::state_explosion: return "StateExplosion";
    case Errc::capacity_mismatch: return "CapacityMismatch";
    case Errc::search_budget_exceeded: return "SearchBudgetExceeded";
    case Errc::overflow: return "Overflow";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::bad_argument: return "BadArgument";
  }
  return "UnknownError";
}

long long checked_add(long long a, long long b) {
  long long out;
  if (__builtin_add_overflow(a, b, &out)) fail(Errc::overflow, "integer addition overflow");
  return out;
}

long long checked_mul(long long a, long long b) {
  long long out;
  if (__builtin_mul_overflow(a, b, &out)) fail(Errc::overflow, "integer multiplication overflow");
  return out;
}

long long checked_pow(long long base, long long exp) {
  long long out = 1;
  for (long long i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

}  // namespace dynq
