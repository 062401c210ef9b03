#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "textnet/similarity.hpp"

namespace textnet {

struct Embedding {
    std::vector<std::string> document_ids;
    int dims = 0;
    std::vector<double> coords;  // M*dims row-major
    double stress = 0.0;         // Kruskal stress-1 at this configuration
    std::string source_metric;

    int size() const { return static_cast<int>(document_ids.size()); }
    double at(int row, int d) const { return coords[static_cast<size_t>(row) * dims + d]; }
};

struct StressCurve {
    std::vector<std::pair<int, double>> points;  // (dimension, stress), dims from 1
};

struct MdsOptions {
    int max_iterations = 500;
    double tolerance = 1e-6;  // relative stress decrease
};

// Metric MDS minimizing Kruskal stress-1 by iterative majorization, run from
// a classical-scaling start and a seeded random start; the better final
// configuration wins. An all-zero matrix short-circuits to a zero embedding.
Embedding mds(const DistanceMatrix& matrix, int dims, uint64_t seed,
              const MdsOptions& options = {});

struct DimSearch {
    Embedding best;      // embedding at the chosen dimensionality
    StressCurve curve;   // stress for every dimensionality tried
    int dims = 1;
    bool threshold_met = true;
};

// Elbow rule: smallest dimensionality whose stress drops to `threshold` times
// the one-dimensional stress. Each dimensionality warm-starts from the
// previous solution padded with a zero coordinate, which keeps the curve
// non-increasing. Falls back to max_dims (threshold_met=false) if never met.
DimSearch choose_dim(const DistanceMatrix& matrix, double threshold, int max_dims,
                     uint64_t seed, const MdsOptions& options = {});

struct FeatureMatrix {
    std::vector<std::string> document_ids;
    int width = 0;
    std::vector<double> values;  // M*width row-major
};

// Joins per-metric subspaces head to tail: row i is the concatenation of row
// i of every embedding, in list order. Document ids must match exactly.
FeatureMatrix combine(const std::vector<Embedding>& embeddings);

// CSV `document_id,x1,...,xN` / `dimension,stress`.
void write_embedding_csv(const Embedding& embedding, const std::filesystem::path& path);
Embedding read_embedding_csv(const std::filesystem::path& path);
void write_stress_curve_csv(const StressCurve& curve, const std::filesystem::path& path);

}  // namespace textnet
