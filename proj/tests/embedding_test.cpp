#include <doctest.h>

#include <cmath>
#include <random>

#include "textnet/embedding.hpp"
#include "textnet/error.hpp"

using namespace textnet;

namespace {

DistanceMatrix matrix_of(int m) {
    DistanceMatrix matrix;
    for (int i = 0; i < m; ++i) matrix.document_ids.push_back("doc" + std::to_string(i));
    matrix.values.assign(static_cast<size_t>(m) * m, 0.0);
    return matrix;
}

// distance matrix from random points in dimension d (scaled into [0,1])
DistanceMatrix from_points(std::mt19937_64& rng, int m, int d,
                           std::vector<std::vector<double>>* points_out = nullptr) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<std::vector<double>> points(m, std::vector<double>(d));
    for (auto& p : points)
        for (double& x : p) x = uniform(rng);
    DistanceMatrix matrix = matrix_of(m);
    double max_dist = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double sum = 0;
            for (int k = 0; k < d; ++k) {
                double diff = points[i][k] - points[j][k];
                sum += diff * diff;
            }
            max_dist = std::max(max_dist, std::sqrt(sum));
        }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double sum = 0;
            for (int k = 0; k < d; ++k) {
                double diff = points[i][k] - points[j][k];
                sum += diff * diff;
            }
            matrix.at(i, j) = std::sqrt(sum) / max_dist;
        }
    if (points_out) *points_out = points;
    return matrix;
}

double embedded_distance(const Embedding& e, int i, int j) {
    double sum = 0;
    for (int d = 0; d < e.dims; ++d) {
        double diff = e.at(i, d) - e.at(j, d);
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

}  // namespace

TEST_CASE("three equidistant points embed as an equilateral triangle") {
    DistanceMatrix matrix = matrix_of(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) matrix.at(i, j) = 1.0;
    Embedding e = mds(matrix, 2, 42);
    CHECK(e.stress < 1e-6);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK(embedded_distance(e, i, j) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("planar distances are recovered at dims=2") {
    std::mt19937_64 rng(7);
    DistanceMatrix matrix = from_points(rng, 30, 2);
    Embedding e = mds(matrix, 2, 11);
    CHECK(e.stress < 1e-4);
    for (int i = 0; i < 30; ++i)
        for (int j = i + 1; j < 30; ++j) {
            double want = matrix.at(i, j);
            double got = embedded_distance(e, i, j);
            CHECK(got == doctest::Approx(want).epsilon(1e-3));
        }

    Embedding line = mds(matrix, 1, 11);
    CHECK(line.stress > e.stress);
}

TEST_CASE("choose_dim finds the generating dimension") {
    std::mt19937_64 rng(19);
    DistanceMatrix matrix = from_points(rng, 40, 2);
    DimSearch search = choose_dim(matrix, 0.10, 6, 3);
    CHECK(search.threshold_met);
    CHECK(search.dims == 2);
    CHECK(search.best.dims == 2);
    REQUIRE(search.curve.points.size() >= 2);
    CHECK(search.curve.points[0].first == 1);
}

TEST_CASE("stress curve never increases with dimensionality") {
    std::mt19937_64 rng(23);
    DistanceMatrix matrix = from_points(rng, 25, 4);
    DimSearch search = choose_dim(matrix, 0.01, 8, 5);
    for (size_t i = 1; i < search.curve.points.size(); ++i)
        CHECK(search.curve.points[i].second <= search.curve.points[i - 1].second + 1e-9);
}

TEST_CASE("all-zero matrix short-circuits") {
    DistanceMatrix matrix = matrix_of(5);
    Embedding e = mds(matrix, 3, 1);
    CHECK(e.stress == 0.0);
    for (double c : e.coords) CHECK(c == 0.0);

    DimSearch search = choose_dim(matrix, 0.10, 4, 1);
    CHECK(search.dims == 1);
    CHECK(search.threshold_met);
    CHECK(search.curve.points.size() == 1);
    CHECK(search.curve.points[0].second == 0.0);
}

TEST_CASE("invalid inputs error") {
    DistanceMatrix matrix = matrix_of(3);
    matrix.at(0, 1) = 0.4;  // asymmetric on purpose
    CHECK_THROWS_AS(mds(matrix, 2, 1), DataError);

    DistanceMatrix ok = matrix_of(2);
    ok.at(0, 1) = ok.at(1, 0) = 1.0;
    CHECK_THROWS_AS(mds(ok, 0, 1), ConfigError);
    CHECK_THROWS_AS(choose_dim(ok, 1.5, 3, 1), ConfigError);
}

TEST_CASE("fixed seeds reproduce stress and distances") {
    std::mt19937_64 rng(4);
    DistanceMatrix matrix = from_points(rng, 20, 3);
    Embedding a = mds(matrix, 2, 77);
    Embedding b = mds(matrix, 2, 77);
    CHECK(a.stress == b.stress);
    for (int i = 0; i < 20; ++i)
        for (int j = i + 1; j < 20; ++j)
            CHECK(embedded_distance(a, i, j) == embedded_distance(b, i, j));
}

TEST_CASE("combine concatenates rows head to tail") {
    Embedding a;
    a.document_ids = {"x", "y"};
    a.dims = 3;
    a.coords = {1, 2, 3, 4, 5, 6};
    Embedding b;
    b.document_ids = {"x", "y"};
    b.dims = 2;
    b.coords = {7, 8, 9, 10};

    FeatureMatrix f = combine({a, b});
    CHECK(f.width == 5);
    CHECK(f.values == std::vector<double>{1, 2, 3, 7, 8, 4, 5, 6, 9, 10});

    FeatureMatrix single = combine({a});
    CHECK(single.width == 3);
    CHECK(single.values == a.coords);

    Embedding c = b;
    c.document_ids = {"y", "x"};
    CHECK_THROWS_AS(combine({a, c}), DataError);

    // four six-dimensional embeddings give the 24-wide composed space
    Embedding six;
    six.document_ids = {"x", "y"};
    six.dims = 6;
    six.coords.assign(12, 0.5);
    FeatureMatrix four = combine({six, six, six, six});
    CHECK(four.width == 24);
}

TEST_CASE("embedding CSV round-trip") {
    std::mt19937_64 rng(2);
    DistanceMatrix matrix = from_points(rng, 8, 2);
    Embedding e = mds(matrix, 2, 5);
    e.source_metric = "betweenness";

    namespace fs = std::filesystem;
    fs::path file = fs::temp_directory_path() / "textnet_embedding.csv";
    write_embedding_csv(e, file);
    Embedding back = read_embedding_csv(file);
    CHECK(back.document_ids == e.document_ids);
    CHECK(back.dims == e.dims);
    REQUIRE(back.coords.size() == e.coords.size());
    for (size_t i = 0; i < e.coords.size(); ++i) CHECK(back.coords[i] == e.coords[i]);
}
