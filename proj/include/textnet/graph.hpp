#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "textnet/corpus.hpp"

namespace textnet {

// Directed, integer-weighted word adjacency graph. Node indices follow first
// appearance in the stream; adjacency is sorted by target index so every
// traversal and serialization is deterministic.
struct CoocNetwork {
    std::vector<std::string> lemmas;                 // index -> lemma
    std::unordered_map<std::string, int> node_index; // lemma -> index
    std::vector<std::map<int, int>> out_edges;       // source -> {target -> weight}

    int node_count() const { return static_cast<int>(lemmas.size()); }
    int edge_count() const;
    long long total_weight() const;
    int find_node(const std::string& lemma) const;  // -1 when absent
};

struct GraphOptions {
    bool keep_self_loops = false;  // immediate repetitions; loops never appear in neighbor views
    // Original-token indices beginning each sentence; when non-empty, pairs
    // whose positions fall in different sentences are not linked.
    std::vector<int> sentence_starts;
};

// Links every consecutive lemma pair of the filtered stream in reading order,
// accumulating weights per ordered pair.
CoocNetwork build_network(const TokenStream& stream, const GraphOptions& options = {});

// Symmetric unweighted view: sorted neighbor lists, self excluded.
std::vector<std::vector<int>> undirected_adjacency(const CoocNetwork& net);
// Directed out-neighbor lists (sorted), self excluded.
std::vector<std::vector<int>> directed_adjacency(const CoocNetwork& net);

// Cache format: a node file `lemma<TAB>index` plus an edge file
// `source_lemma<TAB>target_lemma<TAB>weight`.
void write_network(const CoocNetwork& net,
                   const std::filesystem::path& node_path,
                   const std::filesystem::path& edge_path);
CoocNetwork read_network(const std::filesystem::path& node_path,
                         const std::filesystem::path& edge_path);

}  // namespace textnet
