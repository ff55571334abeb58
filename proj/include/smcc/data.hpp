#pragma once

#include <string>
#include <vector>

#include "smcc/oracle.hpp"
#include "smcc/randomness.hpp"

namespace smcc {

struct GraphData {
  int n = 0;
  struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
  };
  std::vector<Edge> edges;
  bool directed = false;
  bool weighted = false;
};

struct SimilarityData {
  int n = 0;
  std::vector<double> matrix;  // row-major n x n
};

// Symmetric CSR adjacency; each undirected edge contributes both directions.
Adjacency build_adjacency(const GraphData& graph);

// Preferential attachment: m attachments per new node, edge count m*(n-m).
GraphData generate_ba(int n, int m, uint64_t seed);

// One edge per line, "u v" or "u v w", 0-indexed; '#' lines are comments and
// a "# n=<N>" header overrides the node count. Self-loops dropped with a
// warning on stderr.
GraphData load_edge_list(const std::string& path, bool weighted);
void write_edge_list(const std::string& path, const GraphData& graph);

// Comma-separated n x n matrix; negatives clamped to 0 with a warning.
SimilarityData load_similarity_csv(const std::string& path);
void write_similarity_csv(const std::string& path, const SimilarityData& sim);

// Seeded fixtures for the property and ratio suites. `density` is the edge
// probability for the graph-backed objectives.
SubmodularInstance generate_random_instance(const std::string& kind, int n,
                                            double density, uint64_t seed);

}  // namespace smcc
