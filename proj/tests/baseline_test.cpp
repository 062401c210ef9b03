#include <doctest.h>

#include <cmath>

#include "textnet/baseline.hpp"
#include "textnet/error.hpp"

using namespace textnet;

namespace {

TokenStream stream_of(const std::string& doc_id, std::initializer_list<std::string> lemmas) {
    TokenStream stream;
    stream.document_id = doc_id;
    int pos = 0;
    for (const auto& l : lemmas) stream.tokens.push_back({l, pos++});
    stream.original_length = pos;
    return stream;
}

}  // namespace

TEST_CASE("idf follows ln(M/df)") {
    std::vector<TokenStream> streams;
    for (int i = 0; i < 80; ++i) {
        if (i == 0) streams.push_back(stream_of("doc0", {"shared", "rare"}));
        else streams.push_back(stream_of("doc" + std::to_string(i), {"shared"}));
    }
    TfidfModel model = tfidf_vectors(streams);
    int shared = model.vocab_index.at("shared");
    int rare = model.vocab_index.at("rare");
    CHECK(model.idf[shared] == 0.0);
    CHECK(model.idf[rare] == doctest::Approx(std::log(80.0)).epsilon(1e-12));
    CHECK(model.idf[rare] == doctest::Approx(4.382).epsilon(1e-3));
    // zero-weight terms are not materialized
    for (const auto& [col, w] : model.doc_vectors[3]) CHECK(col != shared);
}

TEST_CASE("single-document corpus degenerates to all-zero vectors") {
    TfidfModel model = tfidf_vectors({stream_of("only", {"a", "b", "a"})});
    for (double v : model.idf) CHECK(v == 0.0);
    CHECK(model.doc_vectors[0].empty());
    DistanceMatrix matrix = cosine_distance_matrix(model);
    CHECK(matrix.at(0, 0) == 0.0);
}

TEST_CASE("empty corpus errors") {
    CHECK_THROWS_AS(tfidf_vectors({}), DataError);
}

TEST_CASE("cosine distances: identical, disjoint, proportional") {
    auto a = stream_of("a", {"x", "y", "x"});
    auto b = stream_of("b", {"x", "y", "x"});
    auto c = stream_of("c", {"p", "q"});
    // d = a twice over: proportional tf, cosine distance 0
    auto d = stream_of("d", {"x", "y", "x", "x", "y", "x"});
    TfidfModel model = tfidf_vectors({a, b, c, d});
    DistanceMatrix matrix = cosine_distance_matrix(model);
    CHECK(matrix.at(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(matrix.at(0, 3) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(matrix.at(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero-norm vectors sit at distance 1 from everything") {
    // `everywhere` appears in all docs -> idf 0 -> doc2's vector is all zero
    auto a = stream_of("a", {"everywhere", "one"});
    auto b = stream_of("b", {"everywhere", "two"});
    auto c = stream_of("c", {"everywhere"});
    TfidfModel model = tfidf_vectors({a, b, c});
    CHECK(model.doc_vectors[2].empty());
    DistanceMatrix matrix = cosine_distance_matrix(model);
    CHECK(matrix.at(2, 0) == 1.0);
    CHECK(matrix.at(2, 1) == 1.0);
    CHECK(matrix.at(2, 2) == 0.0);
}

TEST_CASE("cosine matrix satisfies the distance-matrix invariants") {
    std::vector<TokenStream> streams;
    const char* words[] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta"};
    for (int d = 0; d < 10; ++d) {
        TokenStream s;
        s.document_id = "doc" + std::to_string(d);
        for (int i = 0; i < 50; ++i)
            s.tokens.push_back({words[(d * 7 + i * i) % 6], i});
        s.original_length = 50;
        streams.push_back(s);
    }
    DistanceMatrix matrix = cosine_distance_matrix(tfidf_vectors(streams), 2);
    for (int i = 0; i < matrix.size(); ++i) {
        CHECK(matrix.at(i, i) == 0.0);
        for (int j = 0; j < matrix.size(); ++j) {
            CHECK(matrix.at(i, j) == matrix.at(j, i));
            CHECK(matrix.at(i, j) >= 0.0);
            CHECK(matrix.at(i, j) <= 1.0);
        }
    }
}

TEST_CASE("smoothed idf variant") {
    auto a = stream_of("a", {"x"});
    auto b = stream_of("b", {"x", "y"});
    TfidfModel model = tfidf_vectors({a, b}, true);
    int x = model.vocab_index.at("x");
    int y = model.vocab_index.at("y");
    CHECK(model.idf[x] == doctest::Approx(std::log(2.0 / 3.0) + 1.0).epsilon(1e-12));
    CHECK(model.idf[y] == doctest::Approx(std::log(2.0 / 2.0) + 1.0).epsilon(1e-12));
}
