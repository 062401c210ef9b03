#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "textnet/error.hpp"
#include "textnet/pipeline.hpp"
#include "textnet/synthetic.hpp"

using namespace textnet;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("textnet_pipe_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// report files (everything except the cache and the resolved config, whose
// output_dir line legitimately differs between output directories)
std::map<std::string, std::string> report_snapshot(const fs::path& outdir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(outdir)) {
        if (!entry.is_regular_file()) continue;
        std::string rel = fs::relative(entry.path(), outdir).generic_string();
        if (rel.rfind("cache/", 0) == 0) continue;
        if (rel == "config_resolved.txt") continue;
        files[rel] = slurp(entry.path());
    }
    return files;
}

SyntheticSpec mini_spec() {
    SyntheticSpec spec;
    spec.authors = 3;
    spec.docs_per_author = 4;
    spec.tokens_per_doc = 1200;
    spec.vocabulary = 220;
    spec.vocab_overlap = 0.5;
    spec.seed = 5;
    return spec;
}

RunConfig mini_config(const fs::path& corpus, const fs::path& outdir) {
    RunConfig config;
    config.manifest = (corpus / "manifest.csv").string();
    config.stopwords = (corpus / "stopwords.txt").string();
    config.output_dir = outdir.string();
    config.profile_size = 60;
    config.folds = 4;
    config.rbfn_clusters = 3;
    config.seed = 11;
    config.threads = 2;
    return config;
}

}  // namespace

TEST_CASE("config files parse, serialize and reject unknown keys") {
    fs::path dir = fresh_dir("config");
    {
        std::ofstream out(dir / "run.cfg");
        out << "# comment line\n"
            << "manifest = corpus/manifest.csv\n"
            << "stopwords = corpus/stopwords.txt\n"
            << "profile_size = 80\n"
            << "metrics = betweenness,degree\n"
            << "classifiers = knn,nb\n"
            << "mds_threshold = 0.2\n"
            << "seed = 9\n";
    }
    RunConfig config = RunConfig::from_file(dir / "run.cfg");
    CHECK(config.profile_size == 80);
    CHECK(config.metrics == std::vector<Metric>{Metric::betweenness, Metric::degree});
    CHECK(config.classifiers ==
          std::vector<ClassifierKind>{ClassifierKind::knn, ClassifierKind::nb});
    CHECK(config.seed == 9);
    // relative paths resolve against the config location
    CHECK(fs::path(config.manifest).is_absolute());

    config.write(dir / "out.cfg");
    RunConfig back = RunConfig::from_file(dir / "out.cfg");
    CHECK(back.profile_size == config.profile_size);
    CHECK(back.metrics == config.metrics);
    CHECK(back.mds_threshold == config.mds_threshold);

    {
        std::ofstream out(dir / "bad.cfg");
        out << "no_such_key = 1\n";
    }
    CHECK_THROWS_WITH_AS(RunConfig::from_file(dir / "bad.cfg"),
                         doctest::Contains("no_such_key"), ConfigError);
    {
        std::ofstream out(dir / "bad2.cfg");
        out << "profile_size = many\n";
    }
    CHECK_THROWS_AS(RunConfig::from_file(dir / "bad2.cfg"), ConfigError);

    RunConfig invalid;
    invalid.manifest = "m.csv";
    invalid.stopwords = "s.txt";
    invalid.folds = 1;
    CHECK_THROWS_AS(invalid.validate(), ConfigError);
}

TEST_CASE("synthetic corpus generation is deterministic") {
    fs::path a = fresh_dir("gen_a");
    fs::path b = fresh_dir("gen_b");
    SyntheticSpec spec = mini_spec();
    generate_synthetic_corpus(spec, a);
    generate_synthetic_corpus(spec, b);
    CHECK(slurp(a / "manifest.csv") == slurp(b / "manifest.csv"));
    CHECK(slurp(a / "texts" / "author01_doc01.txt") == slurp(b / "texts" / "author01_doc01.txt"));
    CHECK(slurp(a / "texts" / "author03_doc04.txt") == slurp(b / "texts" / "author03_doc04.txt"));
    // different seeds give different texts
    spec.seed = 6;
    fs::path c = fresh_dir("gen_c");
    generate_synthetic_corpus(spec, c);
    CHECK(slurp(a / "texts" / "author01_doc01.txt") != slurp(c / "texts" / "author01_doc01.txt"));
    CHECK_THROWS_AS(generate_synthetic_corpus(SyntheticSpec{.authors = 1}, fresh_dir("gen_d")),
                    ConfigError);
}

TEST_CASE("end-to-end run emits every artifact and caches soundly") {
    fs::path corpus = fresh_dir("e2e_corpus");
    generate_synthetic_corpus(mini_spec(), corpus);
    fs::path outdir = fresh_dir("e2e_out");
    RunConfig config = mini_config(corpus, outdir);

    RunOutcome first = run_attribution(config);
    const int m = 12;
    CHECK(first.document_count == m);
    CHECK(first.feature_widths.at("without_mds") == 4 * m);
    CHECK(first.feature_widths.at("using_mds") >= 4);
    CHECK(first.summary.at("using_mds").count("knn") == 1);
    CHECK(first.summary.at("without_mds").size() == 4);

    for (const char* name :
         {"dist_degree.csv", "dist_avg_shortest_path.csv", "dist_betweenness.csv",
          "dist_intermittency.csv", "embedding_degree.csv", "embedding_betweenness.csv",
          "stress_degree.csv", "cv_using_mds.csv", "cv_without_mds.csv",
          "confusion_using_mds_knn.csv", "summary.csv", "config_resolved.txt"})
        CHECK(fs::exists(outdir / name));
    CHECK(fs::exists(outdir / "metrics" / "author01_doc01.csv"));

    // a cold run misses every stage
    CHECK(first.stats.stages.at("tokens").misses == m);
    CHECK(first.stats.stages.at("networks").misses == m);
    CHECK(first.stats.stages.at("metrics").misses == m);

    auto snapshot = report_snapshot(outdir);

    // warm rerun: all hits, byte-identical outputs
    RunOutcome second = run_attribution(config);
    CHECK(second.stats.stages.at("tokens").hits == m);
    CHECK(second.stats.stages.at("networks").hits == m);
    CHECK(second.stats.stages.at("metrics").hits == m);
    CHECK(second.stats.stages.at("distances").hits == 4);
    CHECK(second.stats.stages.at("embeddings").hits == 4);
    CHECK(report_snapshot(outdir) == snapshot);

    // deleting one cached stage regenerates it (and only it, since the
    // regenerated bytes hash identically for the downstream keys)
    fs::remove_all(outdir / "cache" / "networks");
    fs::create_directories(outdir / "cache" / "networks");
    RunOutcome third = run_attribution(config);
    CHECK(third.stats.stages.at("tokens").hits == m);
    CHECK(third.stats.stages.at("networks").misses == m);
    CHECK(third.stats.stages.at("metrics").hits == m);
    CHECK(report_snapshot(outdir) == snapshot);

    // a fresh output directory reproduces the same reports
    fs::path outdir2 = fresh_dir("e2e_out2");
    RunConfig config2 = config;
    config2.output_dir = outdir2.string();
    run_attribution(config2);
    CHECK(report_snapshot(outdir2) == snapshot);
}

TEST_CASE("restricting the metric set restricts the artifacts") {
    fs::path corpus = fresh_dir("single_corpus");
    SyntheticSpec spec = mini_spec();
    spec.docs_per_author = 3;
    spec.tokens_per_doc = 800;
    generate_synthetic_corpus(spec, corpus);
    fs::path outdir = fresh_dir("single_out");
    RunConfig config = mini_config(corpus, outdir);
    config.metrics = {Metric::betweenness};
    config.folds = 3;

    RunOutcome outcome = run_attribution(config);
    CHECK(outcome.feature_widths.at("without_mds") == 9);
    CHECK(fs::exists(outdir / "dist_betweenness.csv"));
    CHECK(!fs::exists(outdir / "dist_degree.csv"));
    CHECK(!fs::exists(outdir / "embedding_degree.csv"));
    CHECK(fs::exists(outdir / "embedding_betweenness.csv"));
}

TEST_CASE("baseline lands next to the network summary") {
    fs::path corpus = fresh_dir("base_corpus");
    generate_synthetic_corpus(mini_spec(), corpus);
    fs::path outdir = fresh_dir("base_out");
    RunConfig config = mini_config(corpus, outdir);

    run_attribution(config);
    RunOutcome baseline = run_baseline(config);
    CHECK(baseline.summary.count("tfidf_mds") == 1);
    CHECK(fs::exists(outdir / "dist_tfidf.csv"));
    CHECK(fs::exists(outdir / "embedding_tfidf.csv"));

    auto rows = [&] {
        std::ifstream in(outdir / "summary.csv");
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
        return lines;
    }();
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "configuration,j48,knn,nb,rbfn");
    CHECK(rows[1].rfind("without_mds,", 0) == 0);
    CHECK(rows[2].rfind("using_mds,", 0) == 0);
    CHECK(rows[3].rfind("tfidf_mds,", 0) == 0);
}

TEST_CASE("export_plots needs run artifacts and then produces plot files") {
    fs::path corpus = fresh_dir("plot_corpus");
    SyntheticSpec spec = mini_spec();
    spec.docs_per_author = 3;
    spec.tokens_per_doc = 600;
    generate_synthetic_corpus(spec, corpus);
    fs::path outdir = fresh_dir("plot_out");
    RunConfig config = mini_config(corpus, outdir);
    config.folds = 3;

    CHECK_THROWS_WITH_AS(export_plots(config), doctest::Contains("run"), DataError);

    run_attribution(config);
    run_baseline(config);
    export_plots(config, "author01_doc01");

    fs::path plots = outdir / "plots";
    CHECK(fs::exists(plots / "rank_betweenness_author01_doc01.csv"));
    CHECK(fs::exists(plots / "rank_betweenness_author01_doc01.svg"));
    CHECK(!fs::exists(plots / "rank_betweenness_author01_doc02.csv"));
    CHECK(fs::exists(plots / "heatmap_degree.csv"));
    CHECK(fs::exists(plots / "heatmap_tfidf.svg"));
    CHECK(fs::exists(plots / "accuracy.csv"));
    CHECK(fs::exists(plots / "accuracy.svg"));

    // heatmap grid matches the exported distance matrix byte for byte
    CHECK(slurp(plots / "heatmap_degree.csv") == slurp(outdir / "dist_degree.csv"));

    // the scatter export always carries exactly two coordinates per document
    std::ifstream scatter(plots / "scatter_betweenness.csv");
    std::string header;
    std::getline(scatter, header);
    CHECK(header == "document_id,author,x,y");
    int rows = 0;
    std::string line;
    while (std::getline(scatter, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 9);

    // rank 1 row carries the top word of the metric
    std::ifstream rank_csv(plots / "rank_betweenness_author01_doc01.csv");
    std::getline(rank_csv, header);
    CHECK(header == "rank,lemma,value");
    std::getline(rank_csv, line);
    CHECK(line.rfind("1,", 0) == 0);
}

TEST_CASE("pre-lemmatized input feeds the same pipeline") {
    fs::path dir = fresh_dir("lemmas_mode");
    fs::create_directories(dir / "docs");
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir / "docs" / name, std::ios::binary);
        out << content;
    };
    // four tiny documents, two "authors" with distinct vocabularies
    write("a1.lemmas", "sun\t0\nmoon\t2\nsun\t4\nstar\t6\nmoon\t8\nsun\t10\n");
    write("a2.lemmas", "moon\t1\nsun\t3\nstar\t5\nsun\t7\nmoon\t9\nstar\t11\n");
    write("b1.lemmas", "iron\t0\ncoal\t2\niron\t4\nsteel\t6\ncoal\t8\niron\t10\n");
    write("b2.lemmas", "coal\t1\niron\t3\nsteel\t5\niron\t7\ncoal\t9\nsteel\t11\n");
    {
        std::ofstream manifest(dir / "manifest.csv");
        manifest << "author,document_id,path\n"
                 << "A,a1,docs/a1.lemmas\nA,a2,docs/a2.lemmas\n"
                 << "B,b1,docs/b1.lemmas\nB,b2,docs/b2.lemmas\n";
    }
    RunConfig config;
    config.manifest = (dir / "manifest.csv").string();
    config.input_format = "lemmas";
    config.output_dir = (dir / "out").string();
    config.profile_size = 4;
    config.folds = 2;
    config.metrics = {Metric::degree};
    config.classifiers = {ClassifierKind::knn};
    config.knn_neighbors = 1;
    config.rbfn_clusters = 2;

    RunOutcome outcome = run_attribution(config, false, true);
    CHECK(outcome.summary.at("without_mds").at("knn") == 1.0);
}
