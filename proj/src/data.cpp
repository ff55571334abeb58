#include "smcc/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace smcc {
namespace {

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

}  // namespace

Adjacency build_adjacency(const GraphData& graph) {
  Adjacency adj;
  adj.n = graph.n;
  std::vector<int> degree(graph.n, 0);
  for (const auto& e : graph.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  adj.offsets.assign(graph.n + 1, 0);
  for (int v = 0; v < graph.n; ++v)
    adj.offsets[v + 1] = adj.offsets[v] + degree[v];
  adj.targets.assign(adj.offsets[graph.n], 0);
  adj.weights.assign(adj.offsets[graph.n], 1.0);
  std::vector<int> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& e : graph.edges) {
    adj.targets[cursor[e.u]] = e.v;
    adj.weights[cursor[e.u]++] = e.w;
    adj.targets[cursor[e.v]] = e.u;
    adj.weights[cursor[e.v]++] = e.w;
  }
  if (!graph.weighted) adj.weights.clear();
  return adj;
}

GraphData generate_ba(int n, int m, uint64_t seed) {
  if (m < 1 || m >= n)
    throw ValidationError("ba generator needs 1 <= m < n");
  GraphData g;
  g.n = n;
  RandomTape tape(seed);
  std::vector<int> targets(m);
  for (int i = 0; i < m; ++i) targets[i] = i;
  std::vector<int> repeated;  // endpoint appearances, degree-proportional
  repeated.reserve(2 * size_t(m) * (n - m));
  uint64_t draw = 0;
  for (int source = m; source < n; ++source) {
    for (int t : targets) {
      g.edges.push_back({source, t, 1.0});
      repeated.push_back(t);
      repeated.push_back(source);
    }
    if (source + 1 == n) break;
    std::vector<int> next;
    while (static_cast<int>(next.size()) < m) {
      int cand = repeated[tape.draw_int(draw++,
                                        static_cast<int>(repeated.size()))];
      if (std::find(next.begin(), next.end(), cand) == next.end())
        next.push_back(cand);
    }
    targets = std::move(next);
  }
  return g;
}

GraphData load_edge_list(const std::string& path, bool weighted) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  GraphData g;
  g.weighted = weighted;
  int max_id = -1;
  int header_n = -1;
  int dropped_loops = 0;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("n=");
      if (pos != std::string::npos) {
        try {
          header_n = std::stoi(line.substr(pos + 2));
        } catch (...) {
          throw ParseError(path + ":" + std::to_string(line_no) +
                           ": bad n= header");
        }
      }
      continue;
    }
    std::istringstream ss(line);
    long u, v;
    double w = 1.0;
    if (!(ss >> u >> v) || (weighted && !(ss >> w))) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": malformed edge line");
    }
    if (u < 0 || v < 0)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": negative node id");
    if (w < 0.0 || !std::isfinite(w))
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": edge weight must be finite and >= 0");
    if (u == v) {
      ++dropped_loops;
      continue;
    }
    g.edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
    max_id = std::max<int>(max_id, static_cast<int>(std::max(u, v)));
  }
  g.n = header_n >= 0 ? header_n : max_id + 1;
  if (max_id >= g.n)
    throw ParseError(path + ": node id exceeds declared n=" +
                     std::to_string(g.n));
  if (dropped_loops > 0)
    warn(path + ": dropped " + std::to_string(dropped_loops) + " self-loops");
  return g;
}

void write_edge_list(const std::string& path, const GraphData& graph) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "# n=" << graph.n << "\n";
  char buf[64];
  for (const auto& e : graph.edges) {
    if (graph.weighted) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", e.u, e.v, e.w);
    } else {
      std::snprintf(buf, sizeof(buf), "%d %d\n", e.u, e.v);
    }
    out << buf;
  }
}

SimilarityData load_similarity_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  int clamped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (...) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": bad numeric cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path + ":" + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  int n = static_cast<int>(rows.size());
  if (n > 0 && static_cast<int>(rows.front().size()) != n)
    throw ParseError(path + ": matrix must be square");

  SimilarityData sim;
  sim.n = n;
  sim.matrix.resize(size_t(n) * n);
  bool symmetric = true;
  bool unit_diag = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = rows[i][j];
      if (v < 0.0) {
        v = 0.0;
        ++clamped;
      }
      sim.matrix[size_t(i) * n + j] = v;
    }
  }
  for (int i = 0; i < n && (symmetric || unit_diag); ++i) {
    if (std::abs(sim.matrix[size_t(i) * n + i] - 1.0) > 1e-6)
      unit_diag = false;
    for (int j = i + 1; j < n; ++j)
      if (std::abs(sim.matrix[size_t(i) * n + j] -
                   sim.matrix[size_t(j) * n + i]) > 1e-6) {
        symmetric = false;
        break;
      }
  }
  if (clamped > 0)
    warn(path + ": clamped " + std::to_string(clamped) +
         " negative similarities to 0");
  if (!symmetric) warn(path + ": similarity matrix is not symmetric");
  if (!unit_diag) warn(path + ": similarity diagonal is not 1");
  return sim;
}

void write_similarity_csv(const std::string& path,
                          const SimilarityData& sim) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  char buf[32];
  for (int i = 0; i < sim.n; ++i) {
    for (int j = 0; j < sim.n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g", sim.matrix[size_t(i) * sim.n + j]);
      out << buf << (j + 1 == sim.n ? "\n" : ",");
    }
  }
}

SubmodularInstance generate_random_instance(const std::string& kind, int n,
                                            double density, uint64_t seed) {
  if (n < 0 || n > (1 << 20)) throw ValidationError("instance size out of range");
  RandomTape tape(seed);
  auto random_graph = [&](bool weighted) {
    GraphData g;
    g.n = n;
    g.weighted = weighted;
    uint64_t draw = 0;
    RandomTape edges = tape.child(1);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (edges.draw_unit(draw++) < density) {
          double w = weighted ? 0.05 + 0.95 * edges.draw_unit(draw) : 1.0;
          ++draw;
          g.edges.push_back({u, v, w});
        }
      }
    return g;
  };

  if (kind == "maxcover")
    return SubmodularInstance(make_max_cover(build_adjacency(random_graph(false))));
  if (kind == "influencemax")
    return SubmodularInstance(
        make_influence_max(build_adjacency(random_graph(false)), 0.01));
  if (kind == "revenuemax")
    return SubmodularInstance(
        make_revenue_max(build_adjacency(random_graph(true)), 0.3));
  if (kind == "imagesumm") {
    const int d = 6;
    std::vector<double> features(size_t(n) * d);
    RandomTape feats = tape.child(2);
    for (size_t i = 0; i < features.size(); ++i)
      features[i] = feats.draw_unit(i);
    return SubmodularInstance(make_image_summ_features(n, d, std::move(features)));
  }
  if (kind == "modular") {
    std::vector<double> w(n);
    RandomTape ws = tape.child(3);
    for (int i = 0; i < n; ++i) w[i] = ws.draw_unit(i);
    return SubmodularInstance(make_modular(std::move(w)));
  }
  throw ValidationError("unknown instance kind '" + kind + "'");
}

}  // namespace smcc
