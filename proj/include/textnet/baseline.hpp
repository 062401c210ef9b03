#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "textnet/corpus.hpp"
#include "textnet/similarity.hpp"

namespace textnet {

struct TfidfModel {
    std::vector<std::string> document_ids;
    std::vector<std::string> vocabulary;               // sorted
    std::unordered_map<std::string, int> vocab_index;
    std::vector<double> idf;                           // per vocabulary entry
    // per document: (column, tf*idf) sorted by column
    std::vector<std::vector<std::pair<int, double>>> doc_vectors;
};

// Raw term counts weighted by idf = ln(M/df); the smoothed variant uses
// ln(M/(1+df)) + 1. Consumes the same token streams as the network path.
TfidfModel tfidf_vectors(const std::vector<TokenStream>& streams, bool smooth_idf = false);

// D = 1 - cosine similarity; zero-norm vectors sit at distance 1 from
// everything and 0 from themselves.
DistanceMatrix cosine_distance_matrix(const TfidfModel& model, int threads = 1);

}  // namespace textnet
