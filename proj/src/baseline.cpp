#include "textnet/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "textnet/error.hpp"
#include "textnet/parallel.hpp"

namespace textnet {

TfidfModel tfidf_vectors(const std::vector<TokenStream>& streams, bool smooth_idf) {
    if (streams.empty()) throw DataError("empty corpus");
    const int m = static_cast<int>(streams.size());

    TfidfModel model;
    std::map<std::string, int> df;  // ordered, so the vocabulary comes out sorted
    std::vector<std::map<std::string, int>> tf(m);
    for (int d = 0; d < m; ++d) {
        model.document_ids.push_back(streams[d].document_id);
        for (const auto& token : streams[d].tokens) ++tf[d][token.lemma];
        for (const auto& [word, _] : tf[d]) ++df[word];
    }

    model.vocabulary.reserve(df.size());
    model.idf.reserve(df.size());
    for (const auto& [word, count] : df) {
        model.vocab_index.emplace(word, static_cast<int>(model.vocabulary.size()));
        model.vocabulary.push_back(word);
        model.idf.push_back(smooth_idf ? std::log(static_cast<double>(m) / (1.0 + count)) + 1.0
                                       : std::log(static_cast<double>(m) / count));
    }

    model.doc_vectors.resize(m);
    for (int d = 0; d < m; ++d) {
        auto& vec = model.doc_vectors[d];
        vec.reserve(tf[d].size());
        for (const auto& [word, count] : tf[d]) {
            int col = model.vocab_index.at(word);
            double w = count * model.idf[col];
            if (w != 0.0) vec.emplace_back(col, w);
        }
        std::sort(vec.begin(), vec.end());
    }
    return model;
}

static double sparse_dot(const std::vector<std::pair<int, double>>& a,
                         const std::vector<std::pair<int, double>>& b) {
    double sum = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) ++i;
        else if (a[i].first > b[j].first) ++j;
        else sum += a[i++].second * b[j++].second;
    }
    return sum;
}

DistanceMatrix cosine_distance_matrix(const TfidfModel& model, int threads) {
    const int m = static_cast<int>(model.document_ids.size());
    std::vector<double> norms(m, 0.0);
    for (int d = 0; d < m; ++d)
        norms[d] = std::sqrt(sparse_dot(model.doc_vectors[d], model.doc_vectors[d]));

    DistanceMatrix matrix;
    matrix.document_ids = model.document_ids;
    matrix.values.assign(static_cast<size_t>(m) * m, 0.0);
    parallel_for(m, threads, [&](int i) {
        for (int j = i + 1; j < m; ++j) {
            double d;
            if (norms[i] == 0.0 || norms[j] == 0.0) {
                d = 1.0;
            } else {
                double cos = sparse_dot(model.doc_vectors[i], model.doc_vectors[j]) /
                             (norms[i] * norms[j]);
                d = std::clamp(1.0 - cos, 0.0, 1.0);
            }
            matrix.at(i, j) = d;
        }
    });
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) matrix.at(i, j) = matrix.at(j, i);
    return matrix;
}

}  // namespace textnet
