#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "dynq/dynsim.hpp"
#include "dynq/netcore.hpp"

namespace dynq::shell {

struct Scenario {
  netcore::Network network;
  std::optional<dynsim::InflowProfile> inflow;  // absent: uniform at capacity
  std::optional<Stage> horizon;

  dynsim::InflowProfile inflow_or_capacity() const;
  Stage horizon_or(Stage fallback) const { return horizon.value_or(fallback); }
};

// Scenario files extend the network format with:
//   inflow uniform <delta>
//   inflow periodic <d1> <d2> ... <dK>
//   horizon <stages>
Scenario parse_scenario(std::istream& in, const std::string& filename = "<input>");
Scenario parse_scenario_file(const std::string& path);
std::string emit_scenario(const Scenario& sc);

// Cross-validate inflow against capacity; returns a warning line when the
// average inflow exceeds the capacity (queues diverge), empty otherwise.
std::string cross_validate(const Scenario& sc);

}  // namespace dynq::shell
