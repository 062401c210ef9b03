#include "textnet/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "textnet/csv.hpp"
#include "textnet/error.hpp"
#include "textnet/parallel.hpp"

namespace textnet {

const char* metric_name(Metric metric) {
    switch (metric) {
        case Metric::degree: return "degree";
        case Metric::avg_shortest_path: return "avg_shortest_path";
        case Metric::betweenness: return "betweenness";
        case Metric::intermittency: return "intermittency";
    }
    return "?";
}

Metric metric_from_name(const std::string& name) {
    if (name == "degree") return Metric::degree;
    if (name == "avg_shortest_path") return Metric::avg_shortest_path;
    if (name == "betweenness") return Metric::betweenness;
    if (name == "intermittency") return Metric::intermittency;
    throw ConfigError("unknown metric: " + name);
}

bool default_descending(Metric metric) {
    return metric == Metric::degree || metric == Metric::betweenness;
}

RankProfile rank_profile(const NodeMetricTable& table, Metric metric, int n) {
    RankProfileOptions options;
    options.n = n;
    options.descending = default_descending(metric);
    return rank_profile(table, metric, options);
}

RankProfile rank_profile(const NodeMetricTable& table, Metric metric,
                         const RankProfileOptions& options) {
    if (options.n < 1) throw ConfigError("profile size must be >= 1");

    struct Candidate {
        double value;
        int frequency;
        const std::string* lemma;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(table.rows.size());
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const NodeMetrics& row = table.rows[i];
        double value;
        switch (metric) {
            case Metric::degree: value = row.degree; break;
            case Metric::betweenness: value = row.betweenness; break;
            case Metric::avg_shortest_path:
                if (!row.avg_shortest_path) continue;
                value = *row.avg_shortest_path;
                break;
            case Metric::intermittency:
                if (!row.intermittency) continue;
                if (row.frequency < options.min_frequency) continue;
                value = *row.intermittency;
                break;
        }
        candidates.push_back({value, row.frequency, &table.lemmas[i]});
    }

    const bool desc = options.descending;
    std::sort(candidates.begin(), candidates.end(), [desc](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return desc ? a.value > b.value : a.value < b.value;
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return *a.lemma < *b.lemma;
    });

    RankProfile profile;
    profile.document_id = table.document_id;
    profile.metric = metric;
    profile.n = options.n;
    const int m = std::min<int>(options.n, static_cast<int>(candidates.size()));
    for (int i = 0; i < m; ++i)
        profile.ranks.emplace(*candidates[i].lemma, options.n - i);
    return profile;
}

static void check_comparable(const RankProfile& a, const RankProfile& b) {
    if (a.metric != b.metric)
        throw ConfigError(std::string("profile metric mismatch: ") + metric_name(a.metric) +
                          " vs " + metric_name(b.metric));
    if (a.n != b.n)
        throw ConfigError("profile size mismatch: " + std::to_string(a.n) + " vs " +
                          std::to_string(b.n));
}

double similarity(const RankProfile& a, const RankProfile& b) {
    check_comparable(a, b);
    const RankProfile& small = a.ranks.size() <= b.ranks.size() ? a : b;
    const RankProfile& large = a.ranks.size() <= b.ranks.size() ? b : a;
    long long sum = 0;
    for (const auto& [word, rank] : small.ranks) {
        auto it = large.ranks.find(word);
        if (it != large.ranks.end()) sum += static_cast<long long>(rank) * it->second;
    }
    return static_cast<double>(sum);
}

long long self_norm(int n) {
    return static_cast<long long>(n) * (n + 1) * (2LL * n + 1) / 6;
}

double distance(const RankProfile& a, const RankProfile& b) {
    return 1.0 - similarity(a, b) / static_cast<double>(self_norm(a.n));
}

DistanceMatrix distance_matrix(const std::vector<RankProfile>& profiles, int threads) {
    const int m = static_cast<int>(profiles.size());
    for (int i = 1; i < m; ++i) check_comparable(profiles[0], profiles[i]);
    {
        std::unordered_set<std::string> ids;
        for (const auto& p : profiles)
            if (!ids.insert(p.document_id).second)
                throw DataError("duplicate document id: " + p.document_id);
    }
    DistanceMatrix matrix;
    matrix.document_ids.reserve(m);
    for (const auto& p : profiles) matrix.document_ids.push_back(p.document_id);
    matrix.values.assign(static_cast<size_t>(m) * m, 0.0);
    parallel_for(m, threads, [&](int i) {
        for (int j = i + 1; j < m; ++j) {
            double d = distance(profiles[i], profiles[j]);
            matrix.at(i, j) = d;
        }
    });
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) matrix.at(i, j) = matrix.at(j, i);
    return matrix;
}

void write_distance_csv(const DistanceMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write distance matrix: " + path.string());
    std::vector<std::string> header = {"document_id"};
    header.insert(header.end(), matrix.document_ids.begin(), matrix.document_ids.end());
    csv::write_row(out, header);
    for (int i = 0; i < matrix.size(); ++i) {
        std::vector<std::string> row = {matrix.document_ids[i]};
        for (int j = 0; j < matrix.size(); ++j)
            row.push_back(csv::format_double(matrix.at(i, j), 15));
        csv::write_row(out, row);
    }
}

static DistanceMatrix distance_from_rows(const std::vector<std::vector<std::string>>& rows,
                                         const std::string& origin) {
    if (rows.empty() || rows[0].empty() || rows[0][0] != "document_id")
        throw DataError("bad distance matrix header: " + origin);
    const int m = static_cast<int>(rows[0].size()) - 1;
    if (static_cast<int>(rows.size()) != m + 1)
        throw DataError("distance matrix is not square: " + origin);
    DistanceMatrix matrix;
    matrix.document_ids.assign(rows[0].begin() + 1, rows[0].end());
    matrix.values.assign(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(rows[i + 1].size()) != m + 1 ||
            rows[i + 1][0] != matrix.document_ids[i])
            throw DataError("distance matrix row/column ids disagree: " + origin);
        for (int j = 0; j < m; ++j)
            matrix.at(i, j) = csv::parse_double(rows[i + 1][j + 1]);
    }
    for (int i = 0; i < m; ++i) {
        if (matrix.at(i, i) != 0.0)
            throw DataError("distance matrix diagonal must be zero: " + origin);
        for (int j = 0; j < m; ++j) {
            double v = matrix.at(i, j);
            if (v < 0.0 || v > 1.0 || std::abs(v - matrix.at(j, i)) > 1e-12)
                throw DataError("distance matrix violates symmetry or [0,1] range: " + origin);
        }
    }
    return matrix;
}

DistanceMatrix read_distance_csv(const std::filesystem::path& path) {
    return distance_from_rows(csv::read(path), path.string());
}

DistanceMatrix parse_distance_csv(const std::string& bytes) {
    return distance_from_rows(csv::parse(bytes), "<memory>");
}

}  // namespace textnet
