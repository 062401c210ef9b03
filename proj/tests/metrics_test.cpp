#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "textnet/error.hpp"
#include "textnet/metrics.hpp"

using namespace textnet;

namespace {

TokenStream stream_of(std::initializer_list<std::string> lemmas) {
    TokenStream stream;
    stream.document_id = "doc";
    int pos = 0;
    for (const auto& l : lemmas) stream.tokens.push_back({l, pos++});
    stream.original_length = pos;
    return stream;
}

const TokenStream kTitle = stream_of(
    {"role", "word", "network", "structure", "text", "application", "author", "attribution"});

// Spearman rank correlation with mid-ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        const int n = static_cast<int>(v.size());
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        int i = 0;
        while (i < n) {
            int j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            double mid = (i + j) / 2.0;
            for (int k = i; k <= j; ++k) r[idx[k]] = mid;
            i = j + 1;
        }
        return r;
    };
    auto rx = ranks(x);
    auto ry = ranks(y);
    double mx = 0, my = 0;
    for (size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= rx.size();
    my /= ry.size();
    double num = 0, dx = 0, dy = 0;
    for (size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

}  // namespace

TEST_CASE("degree on the title path") {
    CoocNetwork net = build_network(kTitle);
    CHECK(degree(net, "network") == 2);
    CHECK(degree(net, "role") == 1);
    CHECK_THROWS_AS(degree(net, "nosuch"), DataError);

    // isolated node in a synthetic network
    CoocNetwork isolated = oracle::network_from({{1}, {0}, {}});
    MetricOptions options;
    CHECK(degree(isolated, "w2", options) == 0);
}

TEST_CASE("avg_shortest_path on the title path") {
    CoocNetwork net = build_network(kTitle);
    CHECK(*avg_shortest_path(net, "role") == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(*avg_shortest_path(net, "text") == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(avg_shortest_path(net, "nosuch"), DataError);
}

TEST_CASE("avg_shortest_path on disconnected components") {
    // two disconnected 2-node components, global N in the denominator
    CoocNetwork net = oracle::network_from({{1}, {0}, {3}, {2}});
    CHECK(*avg_shortest_path(net, "w0") == doctest::Approx(0.25).epsilon(1e-15));

    CoocNetwork with_isolated = oracle::network_from({{1}, {0}, {}});
    CHECK(!avg_shortest_path(with_isolated, "w2").has_value());
}

TEST_CASE("betweenness on paths and cycles") {
    // 8-node path: interior node at index 3 sees 3*4 ordered pairs each way
    std::vector<std::vector<int>> path(8);
    for (int i = 0; i + 1 < 8; ++i) {
        path[i].push_back(i + 1);
        path[i + 1].push_back(i);
    }
    auto bc = betweenness_all(oracle::network_from(path));
    CHECK(bc[3] == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(bc[0] == doctest::Approx(0.0));
    CHECK(bc[7] == doctest::Approx(0.0));

    std::vector<std::vector<int>> cycle = {{1, 3}, {0, 2}, {1, 3}, {2, 0}};
    auto cycle_bc = betweenness_all(oracle::network_from(cycle));
    for (int v = 0; v < 4; ++v) CHECK(cycle_bc[v] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("betweenness and distances match the brute-force oracles") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 7);
        auto adj = oracle::random_graph(rng, n, 0.45);
        CoocNetwork net = oracle::network_from(adj);

        auto bc = betweenness_all(net);
        auto expected = oracle::betweenness(adj);
        for (int v = 0; v < n; ++v) CHECK(bc[v] == doctest::Approx(expected[v]).epsilon(1e-9));

        for (int v = 0; v < n; ++v) {
            double want = oracle::avg_shortest_path(adj, v);
            auto got = avg_shortest_path(net, "w" + std::to_string(v));
            if (want < 0) CHECK(!got.has_value());
            else CHECK(*got == want);
        }
    }
}

TEST_CASE("betweenness is identical across thread counts") {
    std::mt19937_64 rng(5);
    auto adj = oracle::random_graph(rng, 40, 0.15);
    CoocNetwork net = oracle::network_from(adj);
    MetricOptions one, four;
    one.threads = 1;
    four.threads = 4;
    auto a = betweenness_all(net, one);
    auto b = betweenness_all(net, four);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("intermittency hand cases") {
    SUBCASE("equal spacing gives zero") {
        TokenStream stream;
        for (int i = 0; i < 45; ++i)
            stream.tokens.push_back({i % 10 == 0 ? "x" : "f" + std::to_string(i), i});
        stream.original_length = 45;
        CHECK(*intermittency(stream, "x") == 0.0);
    }
    SUBCASE("intervals {1,10}") {
        // occurrences at filtered indices 0, 1, 11
        TokenStream stream;
        stream.tokens.push_back({"x", 0});
        stream.tokens.push_back({"x", 1});
        for (int i = 2; i < 11; ++i) stream.tokens.push_back({"f" + std::to_string(i), i});
        stream.tokens.push_back({"x", 11});
        stream.original_length = 12;
        double value = *intermittency(stream, "x");
        CHECK(std::abs(value - 9.0 / 11.0) < 1e-12);
        CHECK(value == doctest::Approx(0.8182).epsilon(1e-4));
    }
    SUBCASE("single occurrence undefined, absent lemma errors") {
        TokenStream stream = stream_of({"a", "b"});
        CHECK(!intermittency(stream, "a").has_value());
        CHECK_THROWS_AS(intermittency(stream, "zz"), DataError);
    }
    SUBCASE("original-position mode uses the stored positions") {
        TokenStream stream;
        stream.tokens = {{"x", 0}, {"x", 5}, {"x", 10}};  // equal original gaps
        stream.original_length = 11;
        MetricOptions options;
        options.intermittency_original_positions = true;
        CHECK(*intermittency(stream, "x", options) == 0.0);
        CHECK(*intermittency(stream, "x") == 0.0);  // filtered indices 0,1,2
    }
}

TEST_CASE("metric_table assembles all metrics") {
    SUBCASE("title stream: all frequencies 1, intermittency undefined") {
        CoocNetwork net = build_network(kTitle);
        NodeMetricTable table = metric_table(net, kTitle);
        REQUIRE(table.rows.size() == 8);
        for (const auto& row : table.rows) {
            CHECK(row.frequency == 1);
            CHECK(!row.intermittency.has_value());
        }
    }
    SUBCASE("a,b,a,b") {
        TokenStream stream = stream_of({"a", "b", "a", "b"});
        CoocNetwork net = build_network(stream);
        NodeMetricTable table = metric_table(net, stream);
        int a = net.find_node("a");
        CHECK(table.rows[a].frequency == 2);
        CHECK(table.rows[a].degree == 1);
        CHECK(*table.rows[a].intermittency == 0.0);
    }
    SUBCASE("row count equals node count") {
        std::mt19937_64 rng(9);
        TokenStream stream;
        for (int i = 0; i < 200; ++i)
            stream.tokens.push_back({"w" + std::to_string(rng() % 25), i});
        stream.original_length = 200;
        CoocNetwork net = build_network(stream);
        NodeMetricTable table = metric_table(net, stream);
        CHECK(static_cast<int>(table.rows.size()) == net.node_count());
    }
    SUBCASE("mismatched stream errors") {
        CoocNetwork net = build_network(kTitle);
        TokenStream other = stream_of({"completely", "different"});
        CHECK_THROWS_AS(metric_table(net, other), DataError);
    }
}

TEST_CASE("metric table CSV round-trip keeps undefined cells") {
    TokenStream stream = stream_of({"a", "b", "a", "c"});
    CoocNetwork net = build_network(stream);
    NodeMetricTable table = metric_table(net, stream);

    namespace fs = std::filesystem;
    fs::path file = fs::temp_directory_path() / "textnet_metric_table.csv";
    write_metric_table(table, file);
    NodeMetricTable back = read_metric_table(file, "doc");
    REQUIRE(back.rows.size() == table.rows.size());
    for (size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(back.lemmas[i] == table.lemmas[i]);
        CHECK(back.rows[i].frequency == table.rows[i].frequency);
        CHECK(back.rows[i].degree == table.rows[i].degree);
        CHECK(back.rows[i].betweenness == table.rows[i].betweenness);
        CHECK(back.rows[i].intermittency.has_value() ==
              table.rows[i].intermittency.has_value());
        if (table.rows[i].avg_shortest_path)
            CHECK(*back.rows[i].avg_shortest_path == *table.rows[i].avg_shortest_path);
    }
}

TEST_CASE("degree correlates with frequency on a zipfian document") {
    std::mt19937_64 rng(31);
    // zipf-ish draws over 120 words
    std::vector<double> cumulative(120);
    double total = 0;
    for (int i = 0; i < 120; ++i) {
        total += 1.0 / (i + 1);
        cumulative[i] = total;
    }
    std::uniform_real_distribution<double> uniform(0.0, total);
    TokenStream stream;
    for (int i = 0; i < 4000; ++i) {
        double u = uniform(rng);
        int w = static_cast<int>(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                                 cumulative.begin());
        stream.tokens.push_back({"w" + std::to_string(w), i});
    }
    stream.original_length = 4000;
    CoocNetwork net = build_network(stream);
    NodeMetricTable table = metric_table(net, stream);
    std::vector<double> freq, deg;
    for (const auto& row : table.rows) {
        freq.push_back(row.frequency);
        deg.push_back(row.degree);
    }
    CHECK(spearman(freq, deg) > 0.5);
}

TEST_CASE("duplicating a stream preserves degree and neighbors") {
    // streams that end where they start, so doubling adds no new pair
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        TokenStream stream;
        int length = 3 + static_cast<int>(rng() % 20);
        for (int i = 0; i < length; ++i)
            stream.tokens.push_back({"w" + std::to_string(rng() % 6), i});
        stream.tokens.push_back({stream.tokens[0].lemma, length});
        stream.original_length = length + 1;

        TokenStream doubled = stream;
        for (const auto& t : stream.tokens)
            doubled.tokens.push_back({t.lemma, t.position + stream.original_length});
        doubled.original_length = 2 * stream.original_length;

        auto adj = undirected_adjacency(build_network(stream));
        auto adj2 = undirected_adjacency(build_network(doubled));
        CHECK(adj == adj2);
    }
}

TEST_CASE("intermittency is non-negative and zero only for equal gaps") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        TokenStream stream;
        int length = 10 + static_cast<int>(rng() % 60);
        for (int i = 0; i < length; ++i)
            stream.tokens.push_back({"w" + std::to_string(rng() % 5), i});
        stream.original_length = length;
        CoocNetwork net = build_network(stream);
        NodeMetricTable table = metric_table(net, stream);
        for (int v = 0; v < net.node_count(); ++v) {
            if (!table.rows[v].intermittency) continue;
            CHECK(*table.rows[v].intermittency >= 0.0);
        }
    }
}
