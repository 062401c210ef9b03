#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "textnet/metrics.hpp"

namespace textnet {

enum class Metric { degree, avg_shortest_path, betweenness, intermittency };

const char* metric_name(Metric metric);
Metric metric_from_name(const std::string& name);  // ConfigError on unknown names

// Default ranking direction: larger-is-better for degree and betweenness,
// smaller-is-better for average shortest path and intermittency.
bool default_descending(Metric metric);

struct RankProfileOptions {
    int n = 100;
    bool descending;            // set from default_descending unless overridden
    int min_frequency = 2;      // intermittency eligibility (definitional floor)
    RankProfileOptions() : descending(true) {}
};

struct RankProfile {
    std::string document_id;
    Metric metric = Metric::degree;
    int n = 100;
    std::unordered_map<std::string, int> ranks;  // word -> rank in {1..n}
};

// Top-n words under one metric, rank n for the most extreme value down to 1
// (or down to n-m+1 when only m < n words are eligible). Undefined metric
// values are excluded. Ties: higher frequency first, then lexicographic.
RankProfile rank_profile(const NodeMetricTable& table, Metric metric, int n);
RankProfile rank_profile(const NodeMetricTable& table, Metric metric,
                         const RankProfileOptions& options);

// Rank-product similarity: sum over shared words of the product of ranks.
double similarity(const RankProfile& a, const RankProfile& b);

// Eq-style normalizer n(n+1)(2n+1)/6 == similarity of a full profile with itself.
long long self_norm(int n);

// 1 - similarity / self_norm(n); the nominal n is used even for short profiles.
double distance(const RankProfile& a, const RankProfile& b);

struct DistanceMatrix {
    std::vector<std::string> document_ids;
    std::vector<double> values;  // M*M row-major

    int size() const { return static_cast<int>(document_ids.size()); }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * size() + j]; }
    double& at(int i, int j) { return values[static_cast<size_t>(i) * size() + j]; }
};

// Symmetric pairwise distances with an exactly zero diagonal.
DistanceMatrix distance_matrix(const std::vector<RankProfile>& profiles, int threads = 1);

// CSV with the document ids on the first row and column.
void write_distance_csv(const DistanceMatrix& matrix, const std::filesystem::path& path);
DistanceMatrix read_distance_csv(const std::filesystem::path& path);
DistanceMatrix parse_distance_csv(const std::string& bytes);

}  // namespace textnet
