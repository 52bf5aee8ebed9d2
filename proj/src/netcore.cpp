#include "dynq/netcore.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <istream>
#include <sstream>

namespace dynq::netcore {

int Network::vertex_index(const std::string& vname) const {
  for (int i = 0; i < (int)vertices.size(); ++i)
    if (vertices[i] == vname) return i;
  return -1;
}

int Network::edge_index(const std::string& id) const {
  for (int i = 0; i < (int)edges.size(); ++i)
    if (edges[i].id == id) return i;
  return -1;
}

int Network::add_vertex(const std::string& vname) {
  int i = vertex_index(vname);
  if (i >= 0) return i;
  vertices.push_back(vname);
  return (int)vertices.size() - 1;
}

int Network::add_edge(const std::string& id, const std::string& tail, const std::string& head,
                      long long transit, long long capacity) {
  if (edge_index(id) >= 0) fail(Errc::bad_argument, "duplicate edge id '" + id + "'");
  if (transit < 0) fail(Errc::bad_argument, "edge '" + id + "': transit must be >= 0");
  if (capacity < 1) fail(Errc::bad_argument, "edge '" + id + "': capacity must be >= 1");
  Edge e;
  e.id = id;
  e.tail = add_vertex(tail);
  e.head = add_vertex(head);
  e.transit = transit;
  e.capacity = capacity;
  edges.push_back(e);
  return (int)edges.size() - 1;
}

long long Network::initial_queue(int edge) const {
  auto it = initial_queues.find(edge);
  return it == initial_queues.end() ? 0 : it->second;
}

std::vector<std::vector<int>> Network::out_edges() const {
  std::vector<std::vector<int>> out(vertices.size());
  for (int i = 0; i < (int)edges.size(); ++i) out[edges[i].tail].push_back(i);
  return out;
}

std::vector<std::vector<int>> Network::in_edges() const {
  std::vector<std::vector<int>> in(vertices.size());
  for (int i = 0; i < (int)edges.size(); ++i) in[edges[i].head].push_back(i);
  return in;
}

std::string route_id(const Network& net, const Route& r) {
  std::string out;
  for (size_t i = 0; i < r.edges.size(); ++i) {
    if (i) out += ',';
    out += net.edges[r.edges[i]].id;
  }
  return out;
}

Route route_from_ids(const Network& net, const std::vector<std::string>& ids) {
  Route r;
  for (const auto& id : ids) {
    int e = net.edge_index(id);
    if (e < 0) fail(Errc::bad_argument, "unknown edge id '" + id + "'");
    r.edges.push_back(e);
  }
  return r;
}

long long route_transit(const Network& net, const Route& r) {
  long long total = 0;
  for (int e : r.edges) total = checked_add(total, net.edges[e].transit);
  return total;
}

std::vector<int> route_vertices(const Network& net, const Route& r) {
  std::vector<int> vs;
  if (r.edges.empty()) return vs;
  vs.push_back(net.edges[r.edges.front()].tail);
  for (int e : r.edges) vs.push_back(net.edges[e].head);
  return vs;
}

bool route_contains_vertex(const Network& net, const Route& r, int v) {
  for (int u : route_vertices(net, r))
    if (u == v) return true;
  return false;
}

std::string Violation::describe(const Network& net) const {
  auto vname = [&](int v) { return v >= 0 && v < (int)net.vertices.size() ? net.vertices[v] : "?"; };
  switch (kind) {
    case SourceHasIncoming: return "SourceHasIncoming";
    case DestHasOutgoing: return "DestHasOutgoing";
    case UnreachableVertex: return "UnreachableVertex(" + vname(vertex) + ")";
    case DeadEndVertex: return "DeadEndVertex(" + vname(vertex) + ")";
    case NoRoute: return "NoRoute";
  }
  return "?";
}

namespace {

std::vector<bool> reachable_from(const Network& net, int start, bool forward) {
  std::vector<bool> seen(net.vertices.size(), false);
  if (start < 0) return seen;
  std::deque<int> q{start};
  seen[start] = true;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (const Edge& e : net.edges) {
      int from = forward ? e.tail : e.head;
      int to = forward ? e.head : e.tail;
      if (from == u && !seen[to]) {
        seen[to] = true;
        q.push_back(to);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;
  if (net.source < 0 || net.destination < 0) {
    out.push_back({Violation::NoRoute, -1});
    return out;
  }
  for (const Edge& e : net.edges) {
    if (e.head == net.source) {
      out.push_back({Violation::SourceHasIncoming, net.source});
      break;
    }
  }
  for (const Edge& e : net.edges) {
    if (e.tail == net.destination) {
      out.push_back({Violation::DestHasOutgoing, net.destination});
      break;
    }
  }
  auto from_s = reachable_from(net, net.source, true);
  auto to_d = reachable_from(net, net.destination, false);
  for (int v = 0; v < (int)net.vertices.size(); ++v) {
    if (v == net.source || v == net.destination) continue;
    if (!from_s[v]) out.push_back({Violation::UnreachableVertex, v});
    if (!to_d[v]) out.push_back({Violation::DeadEndVertex, v});
  }
  if (!from_s[net.destination]) out.push_back({Violation::NoRoute, -1});
  return out;
}

void require_valid(const Network& net) {
  auto vs = validate(net);
  if (vs.empty()) return;
  std::string msg = "network '" + net.name + "' invalid:";
  for (const auto& v : vs) msg += " " + v.describe(net);
  fail(Errc::validation_error, msg);
}

std::vector<Route> enumerate_routes(const Network& net, const RouteLimits& limits) {
  std::vector<Route> out;
  auto out_of = net.out_edges();
  std::vector<bool> on_path(net.vertices.size(), false);
  std::vector<int> stack;

  // DFS trying out-edges in declared order yields lexicographically sorted
  // routes directly.
  std::function<void(int)> dfs = [&](int u) {
    if (u == net.destination) {
      out.push_back(Route{stack});
      if ((long long)out.size() > limits.max_routes)
        fail(Errc::route_explosion,
             "more than " + std::to_string(limits.max_routes) + " routes");
      return;
    }
    on_path[u] = true;
    for (int e : out_of[u]) {
      int v = net.edges[e].head;
      if (on_path[v]) continue;
      stack.push_back(e);
      dfs(v);
      stack.pop_back();
    }
    on_path[u] = false;
  };
  dfs(net.source);
  return out;
}

namespace {

// Edmonds-Karp on the unit-cost residual graph; arcs i and i^1 are paired.
struct ResidualGraph {
  struct Arc {
    int to;
    long long cap;
    int orig_edge;  // index into net.edges for forward arcs, -1 for reverse
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj;

  explicit ResidualGraph(const Network& net) : adj(net.vertices.size()) {
    for (int i = 0; i < (int)net.edges.size(); ++i) {
      const Edge& e = net.edges[i];
      adj[e.tail].push_back((int)arcs.size());
      arcs.push_back({e.head, e.capacity, i});
      adj[e.head].push_back((int)arcs.size());
      arcs.push_back({e.tail, 0, -1});
    }
  }

  long long max_flow(int s, int d) {
    long long total = 0;
    while (true) {
      std::vector<int> parent_arc(adj.size(), -1);
      std::deque<int> q{s};
      parent_arc[s] = -2;
      while (!q.empty() && parent_arc[d] == -1) {
        int u = q.front();
        q.pop_front();
        for (int a : adj[u]) {
          if (arcs[a].cap > 0 && parent_arc[arcs[a].to] == -1) {
            parent_arc[arcs[a].to] = a;
            q.push_back(arcs[a].to);
          }
        }
      }
      if (parent_arc[d] == -1) return total;
      long long push = -1;
      for (int v = d; v != s;) {
        int a = parent_arc[v];
        push = push < 0 ? arcs[a].cap : std::min(push, arcs[a].cap);
        v = arcs[a ^ 1].to;
      }
      for (int v = d; v != s;) {
        int a = parent_arc[v];
        arcs[a].cap -= push;
        arcs[a ^ 1].cap += push;
        v = arcs[a ^ 1].to;
      }
      total += push;
    }
  }

  std::vector<bool> source_side(int s) const {
    std::vector<bool> seen(adj.size(), false);
    std::deque<int> q{s};
    seen[s] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int a : adj[u]) {
        if (arcs[a].cap > 0 && !seen[arcs[a].to]) {
          seen[arcs[a].to] = true;
          q.push_back(arcs[a].to);
        }
      }
    }
    return seen;
  }
};

}  // namespace

CutResult min_cut(const Network& net) {
  require_valid(net);
  ResidualGraph rg(net);
  long long value = rg.max_flow(net.source, net.destination);
  auto s_side = rg.source_side(net.source);
  CutResult out;
  out.capacity = value;
  long long cut_cap = 0;
  for (int i = 0; i < (int)net.edges.size(); ++i) {
    const Edge& e = net.edges[i];
    if (s_side[e.tail] && !s_side[e.head]) {
      out.cut_edges.insert(i);
      cut_cap = checked_add(cut_cap, e.capacity);
    }
  }
  if (cut_cap != value)
    fail(Errc::validation_error, "max-flow/min-cut mismatch (internal)");
  return out;
}

namespace {

bool is_parallel(const Network& net) {
  for (const Edge& e : net.edges)
    if (e.tail != net.source || e.head != net.destination) return false;
  return !net.edges.empty();
}

std::optional<ChainModules> chain_decompose(const Network& net) {
  // Candidate cut vertices are those shared by every route, in travel order.
  auto routes = enumerate_routes(net);
  if (routes.empty()) return std::nullopt;
  auto first = route_vertices(net, routes.front());
  std::vector<int> common;
  for (int v : first) {
    bool everywhere = true;
    for (const auto& r : routes)
      if (!route_contains_vertex(net, r, v)) {
        everywhere = false;
        break;
      }
    if (everywhere) common.push_back(v);
  }
  // Every edge must connect consecutive common vertices.
  std::map<int, int> pos;
  for (int i = 0; i < (int)common.size(); ++i) pos[common[i]] = i;
  std::vector<std::vector<int>> modules(common.size() > 1 ? common.size() - 1 : 0);
  for (int i = 0; i < (int)net.edges.size(); ++i) {
    const Edge& e = net.edges[i];
    auto a = pos.find(e.tail);
    auto b = pos.find(e.head);
    if (a == pos.end() || b == pos.end() || b->second != a->second + 1) return std::nullopt;
    modules[a->second].push_back(i);
  }
  ChainModules cm;
  cm.cut_vertices = common;
  cm.modules = std::move(modules);
  if (cm.modules.size() < 2) return std::nullopt;  // single module = plain parallel
  return cm;
}

bool is_series_parallel(const Network& net) {
  // Standard reduction: collapse parallel edges and series vertices until a
  // single s-d edge remains.
  struct SEdge {
    int tail, head;
    bool alive = true;
  };
  std::vector<SEdge> es;
  for (const Edge& e : net.edges) es.push_back({e.tail, e.head});
  int alive = (int)es.size();
  bool changed = true;
  while (changed) {
    changed = false;
    // parallel reduction
    for (size_t i = 0; i < es.size(); ++i) {
      if (!es[i].alive) continue;
      for (size_t j = i + 1; j < es.size(); ++j) {
        if (!es[j].alive) continue;
        if (es[i].tail == es[j].tail && es[i].head == es[j].head) {
          es[j].alive = false;
          --alive;
          changed = true;
        }
      }
    }
    // series reduction at internal degree-(1,1) vertices
    for (int v = 0; v < (int)net.vertices.size(); ++v) {
      if (v == net.source || v == net.destination) continue;
      int in = -1, out = -1, ins = 0, outs = 0;
      for (size_t i = 0; i < es.size(); ++i) {
        if (!es[i].alive) continue;
        if (es[i].head == v) {
          ++ins;
          in = (int)i;
        }
        if (es[i].tail == v) {
          ++outs;
          out = (int)i;
        }
      }
      if (ins == 1 && outs == 1 && in != out) {
        es[in].head = es[out].head;
        es[out].alive = false;
        --alive;
        changed = true;
      }
    }
  }
  if (alive != 1) return false;
  for (const auto& e : es)
    if (e.alive) return e.tail == net.source && e.head == net.destination;
  return false;
}

}  // namespace

Topology classify(const Network& net) {
  require_valid(net);
  Topology t;
  if (is_parallel(net)) {
    t.kind = Topology::Parallel;
    return t;
  }
  if (auto cm = chain_decompose(net)) {
    t.kind = Topology::ChainOfParallel;
    t.chain = std::move(cm);
    return t;
  }
  t.kind = is_series_parallel(net) ? Topology::SeriesParallel : Topology::General;
  return t;
}

Network gen_braess(int k) {
  if (k < 1) fail(Errc::bad_argument, "gen_braess: k must be >= 1");
  Network net;
  net.name = "braess" + std::to_string(k);
  net.source = net.add_vertex("s");
  for (int i = 1; i <= k; ++i) net.add_vertex("v" + std::to_string(i));
  for (int i = 1; i <= k; ++i) net.add_vertex("w" + std::to_string(i));
  net.destination = net.add_vertex("d");
  auto v = [&](int i) { return "v" + std::to_string(i); };
  auto w = [&](int i) { return "w" + std::to_string(i); };
  for (int i = 1; i <= k; ++i) net.add_edge("s_" + v(i), "s", v(i), 0, 1);
  for (int i = 1; i <= k; ++i) net.add_edge(v(i) + "_" + w(i), v(i), w(i), 0, 1);
  for (int i = 1; i <= k; ++i) net.add_edge(w(i) + "_d", w(i), "d", 0, 1);
  for (int i = 2; i <= k; ++i) net.add_edge(v(i) + "_" + w(i - 1), v(i), w(i - 1), 1, 1);
  net.add_edge("v1_d", "v1", "d", 1, 1);
  net.add_edge("s_" + w(k), "s", w(k), 1, 1);
  return net;
}

Network gen_pigou(long long n, long long p) {
  if (n < 2 || p < 1) fail(Errc::bad_argument, "gen_pigou: need N >= 2 and p >= 1");
  long long wide = checked_pow(n, p);
  Network net;
  net.name = "pigou_" + std::to_string(n) + "_" + std::to_string(p);
  net.source = net.add_vertex("s");
  net.destination = net.add_vertex("d");
  net.add_edge("e1", "s", "d", 1, wide);
  net.add_edge("e2", "s", "d", n, 1);
  return net;
}

std::optional<ExampleName> example_by_name(const std::string& s) {
  if (s == "fig2") return ExampleName::fig2;
  if (s == "fig3") return ExampleName::fig3;
  if (s == "wheatstone") return ExampleName::wheatstone;
  if (s == "seasonal_two_edge" || s == "seasonal-two-edge") return ExampleName::seasonal_two_edge;
  return std::nullopt;
}

Network gen_example(ExampleName which) {
  Network net;
  switch (which) {
    case ExampleName::fig2: {
      // Three-edge module followed by a two-edge module, all unit capacities.
      net.name = "fig2";
      net.source = net.add_vertex("s");
      net.add_vertex("v");
      net.destination = net.add_vertex("d");
      net.add_edge("e1_1", "s", "v", 1, 1);
      net.add_edge("e2_1", "s", "v", 2, 1);
      net.add_edge("e3_1", "s", "v", 2, 1);
      net.add_edge("e1_2", "v", "d", 1, 1);
      net.add_edge("e2_2", "v", "d", 1, 1);
      break;
    }
    case ExampleName::fig3: {
      net.name = "fig3";
      net.source = net.add_vertex("s");
      net.add_vertex("v");
      net.destination = net.add_vertex("d");
      net.add_edge("e1", "s", "v", 0, 2);
      net.add_edge("e2", "v", "d", 0, 1);
      net.add_edge("e3", "v", "d", 1, 1);
      net.add_edge("e4", "s", "d", 1, 1);
      break;
    }
    case ExampleName::wheatstone: {
      net.name = "wheatstone";
      net.source = net.add_vertex("s");
      net.add_vertex("v");
      net.add_vertex("w");
      net.destination = net.add_vertex("d");
      net.add_edge("e1", "s", "v", 0, 1);
      net.add_edge("e2", "s", "w", 1, 1);
      net.add_edge("e3", "v", "w", 0, 1);
      net.add_edge("e4", "v", "d", 1, 1);
      net.add_edge("e5", "w", "d", 0, 1);
      break;
    }
    case ExampleName::seasonal_two_edge: {
      net.name = "seasonal_two_edge";
      net.source = net.add_vertex("s");
      net.destination = net.add_vertex("d");
      net.add_edge("e1", "s", "d", 1, 1);
      net.add_edge("e2", "s", "d", 2, 1);
      break;
    }
  }
  return net;
}

std::vector<std::string> tokenize_line(const std::string& line) {
  std::string body = line;
  auto hash = body.find('#');
  if (hash != std::string::npos) body.resize(hash);
  std::istringstream ss(body);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

namespace {

long long parse_uint_field(const NetworkBuilder& b, int line, const std::string& tok,
                           const std::string& key) {
  if (tok.rfind(key + "=", 0) != 0) b.fail_at(line, "expected '" + key + "=<uint>', got '" + tok + "'");
  std::string val = tok.substr(key.size() + 1);
  if (val.empty() || val.find_first_not_of("0123456789") != std::string::npos)
    b.fail_at(line, "bad unsigned integer in '" + tok + "'");
  return std::stoll(val);
}

long long parse_uint(const NetworkBuilder& b, int line, const std::string& tok) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    b.fail_at(line, "bad unsigned integer '" + tok + "'");
  return std::stoll(tok);
}

}  // namespace

void NetworkBuilder::fail_at(int line, const std::string& msg) const {
  fail(Errc::parse_error, filename_ + ":" + std::to_string(line) + ": " + msg);
}

bool NetworkBuilder::feed(const std::vector<std::string>& tokens, int line) {
  const std::string& d = tokens[0];
  if (d == "network") {
    if (tokens.size() != 2) fail_at(line, "usage: network <name>");
    if (saw_network_) fail_at(line, "duplicate 'network' directive");
    saw_network_ = true;
    net_.name = tokens[1];
    return true;
  }
  if (d == "vertex") {
    if (tokens.size() != 2) fail_at(line, "usage: vertex <id>");
    if (net_.vertex_index(tokens[1]) >= 0) fail_at(line, "duplicate vertex '" + tokens[1] + "'");
    net_.add_vertex(tokens[1]);
    return true;
  }
  if (d == "edge") {
    if (tokens.size() != 6) fail_at(line, "usage: edge <id> <tail> <head> tau=<uint> gamma=<uint>");
    if (net_.edge_index(tokens[1]) >= 0) fail_at(line, "duplicate edge '" + tokens[1] + "'");
    if (net_.vertex_index(tokens[2]) < 0) fail_at(line, "unknown vertex '" + tokens[2] + "'");
    if (net_.vertex_index(tokens[3]) < 0) fail_at(line, "unknown vertex '" + tokens[3] + "'");
    long long tau = parse_uint_field(*this, line, tokens[4], "tau");
    long long gamma = parse_uint_field(*this, line, tokens[5], "gamma");
    if (gamma < 1) fail_at(line, "edge '" + tokens[1] + "': gamma must be >= 1");
    net_.add_edge(tokens[1], tokens[2], tokens[3], tau, gamma);
    return true;
  }
  if (d == "source") {
    if (tokens.size() != 2) fail_at(line, "usage: source <vertex-id>");
    if (saw_source_) fail_at(line, "duplicate 'source' directive");
    saw_source_ = true;
    source_name_ = tokens[1];
    return true;
  }
  if (d == "dest") {
    if (tokens.size() != 2) fail_at(line, "usage: dest <vertex-id>");
    if (saw_dest_) fail_at(line, "duplicate 'dest' directive");
    saw_dest_ = true;
    dest_name_ = tokens[1];
    return true;
  }
  if (d == "queue") {
    if (tokens.size() != 3) fail_at(line, "usage: queue <edge-id> <uint>");
    queues_.emplace_back(tokens[1], parse_uint(*this, line, tokens[2]));
    return true;
  }
  return false;
}

Network NetworkBuilder::finish(int line) const {
  if (!saw_source_) fail_at(line, "missing 'source' directive");
  if (!saw_dest_) fail_at(line, "missing 'dest' directive");
  Network net = net_;
  net.source = net.vertex_index(source_name_);
  if (net.source < 0) fail_at(line, "source references unknown vertex '" + source_name_ + "'");
  net.destination = net.vertex_index(dest_name_);
  if (net.destination < 0) fail_at(line, "dest references unknown vertex '" + dest_name_ + "'");
  for (const auto& [id, len] : queues_) {
    int e = net.edge_index(id);
    if (e < 0) fail_at(line, "queue references unknown edge '" + id + "'");
    if (net.initial_queues.count(e)) fail_at(line, "duplicate queue for edge '" + id + "'");
    net.initial_queues[e] = len;
  }
  return net;
}

Network parse_network(std::istream& in, const std::string& filename) {
  NetworkBuilder builder(filename);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = tokenize_line(line);
    if (tokens.empty()) continue;
    if (!builder.feed(tokens, lineno))
      builder.fail_at(lineno, "unknown directive '" + tokens[0] + "'");
  }
  return builder.finish(lineno + 1);
}

std::string emit_network(const Network& net) {
  std::ostringstream out;
  out << "network " << net.name << "\n";
  for (const auto& v : net.vertices) out << "vertex " << v << "\n";
  for (const auto& e : net.edges)
    out << "edge " << e.id << " " << net.vertices[e.tail] << " " << net.vertices[e.head]
        << " tau=" << e.transit << " gamma=" << e.capacity << "\n";
  out << "source " << net.vertices[net.source] << "\n";
  out << "dest " << net.vertices[net.destination] << "\n";
  for (const auto& [e, len] : net.initial_queues)
    out << "queue " << net.edges[e].id << " " << len << "\n";
  return out.str();
}

}  // namespace dynq::netcore
