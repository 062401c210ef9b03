#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "textnet/corpus.hpp"
#include "textnet/graph.hpp"

namespace textnet {

struct MetricOptions {
    // Distances and betweenness run on the undirected unweighted view by
    // default; the directed variant is available for study.
    bool directed = false;
    // Recurrence intervals are measured on the filtered stream's own index
    // sequence unless this asks for original-text token positions.
    bool intermittency_original_positions = false;
    int threads = 1;
};

struct NodeMetrics {
    int frequency = 0;
    int degree = 0;
    std::optional<double> avg_shortest_path;
    double betweenness = 0.0;
    std::optional<double> intermittency;
};

struct NodeMetricTable {
    std::string document_id;
    std::vector<std::string> lemmas;  // node-index order
    std::vector<NodeMetrics> rows;
};

// Number of distinct neighbors in the undirected view (out-neighbors when
// directed). Unknown lemma raises DataError.
int degree(const CoocNetwork& net, const std::string& lemma, const MetricOptions& options = {});

// Mean BFS distance from the node, summed over reachable nodes (self
// included) and divided by the global node count; nullopt when the node
// reaches nothing else.
std::optional<double> avg_shortest_path(const CoocNetwork& net, const std::string& lemma,
                                        const MetricOptions& options = {});

// Shortest-path betweenness over ordered pairs, by Brandes' accumulation.
// Sources are processed in fixed blocks and block partials are added in
// index order, so the result is identical for any thread count.
std::vector<double> betweenness_all(const CoocNetwork& net, const MetricOptions& options = {});

// Coefficient of variation of the gaps between consecutive occurrences;
// nullopt with fewer than two occurrences. Absent lemma raises DataError.
std::optional<double> intermittency(const TokenStream& stream, const std::string& lemma,
                                    const MetricOptions& options = {});

// All four metrics plus frequency for every node. The network must have been
// built from the stream (lemma sets must match).
NodeMetricTable metric_table(const CoocNetwork& net, const TokenStream& stream,
                             const MetricOptions& options = {});

// Cache format: CSV `lemma,frequency,degree,avg_shortest_path,betweenness,
// intermittency`, empty fields for undefined values.
void write_metric_table(const NodeMetricTable& table, const std::filesystem::path& path);
NodeMetricTable read_metric_table(const std::filesystem::path& path, std::string document_id);

}  // namespace textnet
