#include "textnet/graph.hpp"

#include <algorithm>
#include <fstream>

#include "textnet/error.hpp"

namespace textnet {

int CoocNetwork::edge_count() const {
    int n = 0;
    for (const auto& adj : out_edges) n += static_cast<int>(adj.size());
    return n;
}

long long CoocNetwork::total_weight() const {
    long long sum = 0;
    for (const auto& adj : out_edges)
        for (const auto& [_, w] : adj) sum += w;
    return sum;
}

int CoocNetwork::find_node(const std::string& lemma) const {
    auto it = node_index.find(lemma);
    return it == node_index.end() ? -1 : it->second;
}

static int sentence_of(const std::vector<int>& starts, int position) {
    // index of the last start <= position
    auto it = std::upper_bound(starts.begin(), starts.end(), position);
    return static_cast<int>(it - starts.begin()) - 1;
}

CoocNetwork build_network(const TokenStream& stream, const GraphOptions& options) {
    CoocNetwork net;
    auto node_of = [&](const std::string& lemma) {
        auto it = net.node_index.find(lemma);
        if (it != net.node_index.end()) return it->second;
        int idx = net.node_count();
        net.node_index.emplace(lemma, idx);
        net.lemmas.push_back(lemma);
        net.out_edges.emplace_back();
        return idx;
    };
    const bool split = !options.sentence_starts.empty();
    int prev = -1;
    int prev_sentence = -1;
    for (const auto& token : stream.tokens) {
        int cur = node_of(token.lemma);
        int cur_sentence = split ? sentence_of(options.sentence_starts, token.position) : 0;
        if (prev >= 0 && (!split || cur_sentence == prev_sentence)) {
            if (prev != cur || options.keep_self_loops)
                net.out_edges[prev][cur] += 1;
        }
        prev = cur;
        prev_sentence = cur_sentence;
    }
    return net;
}

std::vector<std::vector<int>> undirected_adjacency(const CoocNetwork& net) {
    const int n = net.node_count();
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u)
        for (const auto& [v, _] : net.out_edges[u]) {
            if (u == v) continue;
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

std::vector<std::vector<int>> directed_adjacency(const CoocNetwork& net) {
    const int n = net.node_count();
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u)
        for (const auto& [v, _] : net.out_edges[u])
            if (u != v) adj[u].push_back(v);
    return adj;  // map keys are already sorted
}

void write_network(const CoocNetwork& net,
                   const std::filesystem::path& node_path,
                   const std::filesystem::path& edge_path) {
    std::ofstream nodes(node_path, std::ios::binary);
    if (!nodes) throw DataError("cannot write node file: " + node_path.string());
    for (int i = 0; i < net.node_count(); ++i)
        nodes << net.lemmas[i] << '\t' << i << '\n';
    std::ofstream edges(edge_path, std::ios::binary);
    if (!edges) throw DataError("cannot write edge file: " + edge_path.string());
    for (int u = 0; u < net.node_count(); ++u)
        for (const auto& [v, w] : net.out_edges[u])
            edges << net.lemmas[u] << '\t' << net.lemmas[v] << '\t' << w << '\n';
}

CoocNetwork read_network(const std::filesystem::path& node_path,
                         const std::filesystem::path& edge_path) {
    CoocNetwork net;
    {
        std::ifstream in(node_path);
        if (!in) throw DataError("cannot open node file: " + node_path.string());
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            size_t tab = line.find('\t');
            if (tab == std::string::npos)
                throw DataError("bad node file line " + std::to_string(line_no) + ": " +
                                node_path.string());
            std::string lemma = line.substr(0, tab);
            int idx = std::stoi(line.substr(tab + 1));
            if (idx != net.node_count())
                throw DataError("node file indices must be consecutive from 0: " +
                                node_path.string());
            net.node_index.emplace(lemma, idx);
            net.lemmas.push_back(std::move(lemma));
            net.out_edges.emplace_back();
        }
    }
    {
        std::ifstream in(edge_path);
        if (!in) throw DataError("cannot open edge file: " + edge_path.string());
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            size_t t1 = line.find('\t');
            size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
            if (t2 == std::string::npos)
                throw DataError("bad edge file line " + std::to_string(line_no) + ": " +
                                edge_path.string());
            int u = net.find_node(line.substr(0, t1));
            int v = net.find_node(line.substr(t1 + 1, t2 - t1 - 1));
            int w = std::stoi(line.substr(t2 + 1));
            if (u < 0 || v < 0 || w < 1)
                throw DataError("edge file references unknown node or weight < 1 (line " +
                                std::to_string(line_no) + "): " + edge_path.string());
            net.out_edges[u][v] += w;
        }
    }
    return net;
}

}  // namespace textnet
