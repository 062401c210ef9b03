#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "textnet/classify.hpp"
#include "textnet/similarity.hpp"

namespace textnet {

// Flat key-value run configuration; every field maps to one config-file key.
// Unknown keys are errors. Relative paths are resolved against the config
// file's directory when loaded from disk.
struct RunConfig {
    std::string manifest;
    std::string stopwords;
    std::string lexicon;                // empty: identity lemmatizer
    std::string input_format = "text";  // text | lemmas (pre-lemmatized files)
    std::string output_dir = "out";
    uint64_t seed = 42;
    int threads = 0;  // 0: hardware concurrency

    bool keep_self_loops = false;
    bool sentence_boundaries = false;  // expects one sentence per input line

    bool directed_metrics = false;
    bool intermittency_original_positions = false;
    int intermittency_min_frequency = 2;

    int profile_size = 100;
    std::vector<Metric> metrics = {Metric::degree, Metric::avg_shortest_path,
                                   Metric::betweenness, Metric::intermittency};
    bool rank_descending_degree = true;
    bool rank_descending_avg_shortest_path = false;
    bool rank_descending_betweenness = true;
    bool rank_descending_intermittency = false;

    double mds_threshold = 0.10;
    int mds_max_dims = 0;  // 0: min(M-1, 20)

    std::vector<ClassifierKind> classifiers = {ClassifierKind::j48, ClassifierKind::knn,
                                               ClassifierKind::nb, ClassifierKind::rbfn};
    int knn_neighbors = 3;
    int rbfn_clusters = 8;
    int folds = 10;

    bool tfidf_smooth_idf = false;

    static RunConfig from_file(const std::filesystem::path& path);
    void write(const std::filesystem::path& path) const;
    void set(const std::string& key, const std::string& value);  // ConfigError on bad input
    void validate() const;

    bool rank_descending(Metric metric) const;
};

struct StageStats {
    int hits = 0;
    int misses = 0;
};

struct RunStats {
    std::map<std::string, StageStats> stages;
    std::vector<std::string> warnings;
};

struct RunOutcome {
    // configuration -> classifier -> CV accuracy
    std::map<std::string, std::map<std::string, double>> summary;
    std::map<std::string, int> feature_widths;  // per configuration
    int document_count = 0;
    RunStats stats;
};

// Full network pipeline: corpus -> networks -> metrics -> rank distances ->
// (MDS ->) classifiers. Emits per-metric distance matrices, embeddings,
// stress curves, CV reports and a summary grid under output_dir; every stage
// is cached under output_dir/cache keyed by a content hash of its inputs.
RunOutcome run_attribution(const RunConfig& config, bool with_mds = true,
                           bool without_mds = true);

// TF-IDF cosine distances fed through the same MDS and classifier machinery;
// its summary row lands next to the network method's.
RunOutcome run_baseline(const RunConfig& config);

// Plot-ready data plus minimal SVG renderings, derived from a finished run:
// per-document ranked metric values (top 20 labeled), distance heatmaps,
// 2D MDS scatter, and accuracy bars. `only_document` restricts the
// per-document rank exports.
void export_plots(const RunConfig& config, const std::string& only_document = "");

}  // namespace textnet
