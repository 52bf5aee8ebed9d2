#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dynq/types.hpp"

namespace dynq::netcore {

// Vertices and edges are handled by declared index everywhere; names/ids are
// for I/O only. Edge declaration order doubles as the deterministic
// tie-break order used throughout.
struct Edge {
  std::string id;
  int tail = -1;
  int head = -1;
  long long transit = 0;   // stages needed to traverse when no queue forms
  long long capacity = 1;  // players that may exit per stage
};

struct Network {
  std::string name = "net";
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  int source = -1;
  int destination = -1;
  std::map<int, long long> initial_queues;  // edge index -> blocker count

  int vertex_index(const std::string& vname) const;
  int edge_index(const std::string& id) const;
  int add_vertex(const std::string& vname);  // returns existing index if present
  int add_edge(const std::string& id, const std::string& tail, const std::string& head,
               long long transit, long long capacity);
  long long initial_queue(int edge) const;

  std::vector<std::vector<int>> out_edges() const;  // per vertex, edge indices in declared order
  std::vector<std::vector<int>> in_edges() const;
};

// Simple s->d path, stored as edge indices.
struct Route {
  std::vector<int> edges;
  friend bool operator==(const Route& a, const Route& b) { return a.edges == b.edges; }
  friend bool operator<(const Route& a, const Route& b) { return a.edges < b.edges; }
};

std::string route_id(const Network& net, const Route& r);  // "e1,e3,e5"
Route route_from_ids(const Network& net, const std::vector<std::string>& ids);
long long route_transit(const Network& net, const Route& r);
std::vector<int> route_vertices(const Network& net, const Route& r);  // s, ..., d
bool route_contains_vertex(const Network& net, const Route& r, int v);

struct Violation {
  enum Kind { SourceHasIncoming, DestHasOutgoing, UnreachableVertex, DeadEndVertex, NoRoute } kind;
  int vertex = -1;
  std::string describe(const Network& net) const;
};

std::vector<Violation> validate(const Network& net);
void require_valid(const Network& net);  // throws validation_error

struct RouteLimits {
  long long max_routes = 1'000'000;
};
// All simple s->d paths, ordered lexicographically by edge-index sequence.
std::vector<Route> enumerate_routes(const Network& net, const RouteLimits& limits = {});

struct CutResult {
  std::set<int> cut_edges;
  long long capacity = 0;
};
// Minimum s-d edge cut; capacity equals the max-flow value.
CutResult min_cut(const Network& net);

struct ChainModules {
  // cut_vertices = s, m1, ..., d; modules[h] holds the edges from
  // cut_vertices[h] to cut_vertices[h+1].
  std::vector<int> cut_vertices;
  std::vector<std::vector<int>> modules;
};

struct Topology {
  enum Kind { Parallel, ChainOfParallel, SeriesParallel, General } kind = General;
  std::optional<ChainModules> chain;  // present for ChainOfParallel
};
Topology classify(const Network& net);

// Instance generators.
Network gen_braess(int k);
Network gen_pigou(long long n, long long p);

enum class ExampleName { fig2, fig3, wheatstone, seasonal_two_edge };
std::optional<ExampleName> example_by_name(const std::string& s);
Network gen_example(ExampleName which);

// Line-oriented text format. Directives: network, vertex, edge, source, dest,
// queue. Strict parse; errors carry file:line.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(std::string filename) : filename_(std::move(filename)) {}
  // Returns true when the directive was consumed, false when unknown to this
  // builder (the scenario parser layers its own directives on top).
  bool feed(const std::vector<std::string>& tokens, int line);
  Network finish(int line) const;  // validates structure; line = end-of-file marker
  [[noreturn]] void fail_at(int line, const std::string& msg) const;

 private:
  std::string filename_;
  Network net_;
  bool saw_network_ = false;
  bool saw_source_ = false;
  bool saw_dest_ = false;
  std::string source_name_, dest_name_;
  std::vector<std::pair<std::string, long long>> queues_;  // resolved in finish()
};

Network parse_network(std::istream& in, const std::string& filename = "<input>");
std::string emit_network(const Network& net);

std::vector<std::string> tokenize_line(const std::string& line);  // strips '#' comments

}  // namespace dynq::netcore
