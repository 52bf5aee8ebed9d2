#include "dynq/scenario.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace dynq::shell {

dynsim::InflowProfile Scenario::inflow_or_capacity() const {
  if (inflow) return *inflow;
  return dynsim::InflowProfile::uniform(netcore::min_cut(network).capacity);
}

Scenario parse_scenario(std::istream& in, const std::string& filename) {
  netcore::NetworkBuilder builder(filename);
  Scenario sc;
  std::string line;
  int lineno = 0;
  auto fail_at = [&](const std::string& msg) {
    fail(Errc::parse_error, filename + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto parse_ll = [&](const std::string& tok) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      fail_at("bad unsigned integer '" + tok + "'");
    return std::stoll(tok);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = netcore::tokenize_line(line);
    if (tokens.empty()) continue;
    if (builder.feed(tokens, lineno)) continue;
    if (tokens[0] == "inflow") {
      if (sc.inflow) fail_at("duplicate 'inflow' directive");
      if (tokens.size() >= 3 && tokens[1] == "uniform") {
        if (tokens.size() != 3) fail_at("usage: inflow uniform <delta>");
        sc.inflow = dynsim::InflowProfile::uniform(parse_ll(tokens[2]));
      } else if (tokens.size() >= 3 && tokens[1] == "periodic") {
        std::vector<long long> values;
        for (size_t i = 2; i < tokens.size(); ++i) values.push_back(parse_ll(tokens[i]));
        sc.inflow = dynsim::InflowProfile::periodic(std::move(values));
      } else {
        fail_at("usage: inflow uniform <delta> | inflow periodic <d1> ... <dK>");
      }
      continue;
    }
    if (tokens[0] == "horizon") {
      if (tokens.size() != 2) fail_at("usage: horizon <stages>");
      if (sc.horizon) fail_at("duplicate 'horizon' directive");
      sc.horizon = parse_ll(tokens[1]);
      if (*sc.horizon < 1) fail_at("horizon must be >= 1");
      continue;
    }
    fail_at("unknown directive '" + tokens[0] + "'");
  }
  sc.network = builder.finish(lineno + 1);
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  if (path == "-") return parse_scenario(std::cin, "<stdin>");
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
  return parse_scenario(in, path);
}

std::string emit_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << netcore::emit_network(sc.network);
  if (sc.inflow) {
    if (sc.inflow->is_periodic()) {
      out << "inflow periodic";
      for (long long v : sc.inflow->values()) out << " " << v;
      out << "\n";
    } else {
      out << "inflow uniform " << sc.inflow->at(1) << "\n";
    }
  }
  if (sc.horizon) out << "horizon " << *sc.horizon << "\n";
  return out.str();
}

std::string cross_validate(const Scenario& sc) {
  netcore::require_valid(sc.network);
  if (!sc.inflow) return "";
  Rat avg = sc.inflow->average();
  long long cap = netcore::min_cut(sc.network).capacity;
  if (avg > Rat(cap))
    return "warning: average inflow " + to_string(avg) + " exceeds capacity " +
           std::to_string(cap) + "; queues will diverge";
  return "";
}

}  // namespace dynq::shell
