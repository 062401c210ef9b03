#include "textnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "textnet/csv.hpp"
#include "textnet/error.hpp"
#include "textnet/parallel.hpp"

namespace textnet {

namespace {

std::vector<std::vector<int>> view_of(const CoocNetwork& net, const MetricOptions& options) {
    return options.directed ? directed_adjacency(net) : undirected_adjacency(net);
}

int require_node(const CoocNetwork& net, const std::string& lemma) {
    int idx = net.find_node(lemma);
    if (idx < 0) throw DataError("unknown node: " + lemma);
    return idx;
}

// Single-source BFS; fills dist with -1 for unreachable nodes and returns the
// visit order.
std::vector<int> bfs(const std::vector<std::vector<int>>& adj, int source,
                     std::vector<int>& dist) {
    dist.assign(adj.size(), -1);
    std::vector<int> order;
    order.reserve(adj.size());
    dist[source] = 0;
    order.push_back(source);
    for (size_t head = 0; head < order.size(); ++head) {
        int u = order[head];
        for (int v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                order.push_back(v);
            }
        }
    }
    return order;
}

// One Brandes source pass: accumulates dependencies into `partial` and
// returns the sum of finite distances from the source (for l_i reuse).
long long brandes_source(const std::vector<std::vector<int>>& adj, int source,
                         std::vector<double>& partial, std::vector<int>& dist,
                         std::vector<double>& sigma, std::vector<double>& delta,
                         std::vector<std::vector<int>>& preds) {
    const int n = static_cast<int>(adj.size());
    dist.assign(n, -1);
    sigma.assign(n, 0.0);
    delta.assign(n, 0.0);
    for (auto& p : preds) p.clear();

    std::vector<int> order;
    order.reserve(n);
    dist[source] = 0;
    sigma[source] = 1.0;
    order.push_back(source);
    long long dist_sum = 0;
    for (size_t head = 0; head < order.size(); ++head) {
        int u = order[head];
        dist_sum += dist[u];
        for (int v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                order.push_back(v);
            }
            if (dist[v] == dist[u] + 1) {
                sigma[v] += sigma[u];
                preds[v].push_back(u);
            }
        }
    }
    for (size_t i = order.size(); i-- > 0;) {
        int w = order[i];
        for (int p : preds[w]) delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
        if (w != source) partial[w] += delta[w];
    }
    return dist_sum;
}

constexpr int kSourceBlock = 32;

}  // namespace

int degree(const CoocNetwork& net, const std::string& lemma, const MetricOptions& options) {
    int idx = require_node(net, lemma);
    return static_cast<int>(view_of(net, options)[idx].size());
}

std::optional<double> avg_shortest_path(const CoocNetwork& net, const std::string& lemma,
                                        const MetricOptions& options) {
    int idx = require_node(net, lemma);
    auto adj = view_of(net, options);
    std::vector<int> dist;
    auto order = bfs(adj, idx, dist);
    if (order.size() <= 1) return std::nullopt;
    long long sum = 0;
    for (int node : order) sum += dist[node];
    return static_cast<double>(sum) / net.node_count();
}

std::vector<double> betweenness_all(const CoocNetwork& net, const MetricOptions& options) {
    const int n = net.node_count();
    std::vector<double> bc(n, 0.0);
    if (n == 0) return bc;
    auto adj = view_of(net, options);

    const int blocks = (n + kSourceBlock - 1) / kSourceBlock;
    std::vector<std::vector<double>> partials(blocks);
    parallel_for(blocks, options.threads, [&](int b) {
        std::vector<double>& partial = partials[b];
        partial.assign(n, 0.0);
        std::vector<int> dist;
        std::vector<double> sigma, delta;
        std::vector<std::vector<int>> preds(n);
        int lo = b * kSourceBlock;
        int hi = std::min(n, lo + kSourceBlock);
        for (int s = lo; s < hi; ++s)
            brandes_source(adj, s, partial, dist, sigma, delta, preds);
    });
    for (int b = 0; b < blocks; ++b)
        for (int v = 0; v < n; ++v) bc[v] += partials[b][v];
    return bc;
}

static std::optional<double> intermittency_from_positions(const std::vector<int>& positions) {
    if (positions.size() < 2) return std::nullopt;
    const size_t m = positions.size() - 1;
    double mean = 0.0;
    for (size_t i = 1; i < positions.size(); ++i) mean += positions[i] - positions[i - 1];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (size_t i = 1; i < positions.size(); ++i) {
        double d = (positions[i] - positions[i - 1]) - mean;
        var += d * d;
    }
    var /= static_cast<double>(m);
    return std::sqrt(var) / mean;
}

std::optional<double> intermittency(const TokenStream& stream, const std::string& lemma,
                                    const MetricOptions& options) {
    std::vector<int> positions;
    for (int i = 0; i < static_cast<int>(stream.tokens.size()); ++i) {
        if (stream.tokens[i].lemma == lemma)
            positions.push_back(options.intermittency_original_positions
                                    ? stream.tokens[i].position
                                    : i);
    }
    if (positions.empty()) throw DataError("lemma not in stream: " + lemma);
    return intermittency_from_positions(positions);
}

NodeMetricTable metric_table(const CoocNetwork& net, const TokenStream& stream,
                             const MetricOptions& options) {
    const int n = net.node_count();
    // occurrence positions per node, in stream order
    std::vector<std::vector<int>> positions(n);
    for (int i = 0; i < static_cast<int>(stream.tokens.size()); ++i) {
        int idx = net.find_node(stream.tokens[i].lemma);
        if (idx < 0)
            throw DataError("network/stream mismatch: stream lemma `" +
                            stream.tokens[i].lemma + "` missing from network");
        positions[idx].push_back(options.intermittency_original_positions
                                     ? stream.tokens[i].position
                                     : i);
    }
    for (int v = 0; v < n; ++v)
        if (positions[v].empty())
            throw DataError("network/stream mismatch: node `" + net.lemmas[v] +
                            "` never occurs in the stream");

    NodeMetricTable table;
    table.document_id = stream.document_id;
    table.lemmas = net.lemmas;
    table.rows.resize(n);

    auto adj = view_of(net, options);

    // Brandes gives the BFS distance sums as a byproduct, which covers l_i.
    std::vector<double> bc(n, 0.0);
    std::vector<long long> dist_sums(n, 0);
    std::vector<int> reach_counts(n, 0);
    const int blocks = (n + kSourceBlock - 1) / kSourceBlock;
    std::vector<std::vector<double>> partials(blocks);
    parallel_for(blocks, options.threads, [&](int b) {
        std::vector<double>& partial = partials[b];
        partial.assign(n, 0.0);
        std::vector<int> dist;
        std::vector<double> sigma, delta;
        std::vector<std::vector<int>> preds(n);
        int lo = b * kSourceBlock;
        int hi = std::min(n, lo + kSourceBlock);
        for (int s = lo; s < hi; ++s) {
            dist_sums[s] = brandes_source(adj, s, partial, dist, sigma, delta, preds);
            int reached = 0;
            for (int v = 0; v < n; ++v)
                if (dist[v] >= 0) ++reached;
            reach_counts[s] = reached;
        }
    });
    for (int b = 0; b < blocks; ++b)
        for (int v = 0; v < n; ++v) bc[v] += partials[b][v];

    for (int v = 0; v < n; ++v) {
        NodeMetrics& row = table.rows[v];
        row.frequency = static_cast<int>(positions[v].size());
        row.degree = static_cast<int>(adj[v].size());
        if (reach_counts[v] > 1)
            row.avg_shortest_path = static_cast<double>(dist_sums[v]) / n;
        row.betweenness = bc[v];
        row.intermittency = intermittency_from_positions(positions[v]);
    }
    return table;
}

void write_metric_table(const NodeMetricTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write metric table: " + path.string());
    out << "lemma,frequency,degree,avg_shortest_path,betweenness,intermittency\n";
    for (size_t i = 0; i < table.lemmas.size(); ++i) {
        const NodeMetrics& row = table.rows[i];
        csv::write_row(out, {table.lemmas[i],
                             std::to_string(row.frequency),
                             std::to_string(row.degree),
                             row.avg_shortest_path ? csv::format_double(*row.avg_shortest_path) : "",
                             csv::format_double(row.betweenness),
                             row.intermittency ? csv::format_double(*row.intermittency) : ""});
    }
}

NodeMetricTable read_metric_table(const std::filesystem::path& path, std::string document_id) {
    auto rows = csv::read(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"lemma", "frequency", "degree",
                                                            "avg_shortest_path", "betweenness",
                                                            "intermittency"})
        throw DataError("bad metric table header: " + path.string());
    NodeMetricTable table;
    table.document_id = std::move(document_id);
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 6)
            throw DataError("metric table row " + std::to_string(i + 1) + " needs 6 fields: " +
                            path.string());
        NodeMetrics m;
        m.frequency = std::stoi(rows[i][1]);
        m.degree = std::stoi(rows[i][2]);
        if (!rows[i][3].empty()) m.avg_shortest_path = csv::parse_double(rows[i][3]);
        m.betweenness = csv::parse_double(rows[i][4]);
        if (!rows[i][5].empty()) m.intermittency = csv::parse_double(rows[i][5]);
        table.lemmas.push_back(rows[i][0]);
        table.rows.push_back(m);
    }
    return table;
}

}  // namespace textnet
