#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "textnet/error.hpp"
#include "textnet/pipeline.hpp"
#include "textnet/synthetic.hpp"

namespace {

// Config file first, then explicit flags on top.
void add_override_flags(CLI::App* cmd, textnet::RunConfig& config,
                        std::map<std::string, std::string>& overrides) {
    static const char* keys[] = {"manifest",
                                 "stopwords",
                                 "lexicon",
                                 "input_format",
                                 "output_dir",
                                 "seed",
                                 "threads",
                                 "keep_self_loops",
                                 "sentence_boundaries",
                                 "directed_metrics",
                                 "intermittency_original_positions",
                                 "intermittency_min_frequency",
                                 "profile_size",
                                 "metrics",
                                 "rank_descending_degree",
                                 "rank_descending_avg_shortest_path",
                                 "rank_descending_betweenness",
                                 "rank_descending_intermittency",
                                 "mds_threshold",
                                 "mds_max_dims",
                                 "classifiers",
                                 "knn_neighbors",
                                 "rbfn_clusters",
                                 "folds",
                                 "tfidf_smooth_idf"};
    for (const char* key : keys) {
        std::string flag = "--" + std::string(key);
        for (char& c : flag)
            if (c == '_') c = '-';
        cmd->add_option_function<std::string>(
            flag, [key, &overrides](const std::string& v) { overrides[key] = v; },
            "override config key `" + std::string(key) + "`");
    }
    (void)config;
}

textnet::RunConfig resolve_config(const std::string& config_path,
                                  const std::map<std::string, std::string>& overrides) {
    textnet::RunConfig config;
    if (!config_path.empty()) config = textnet::RunConfig::from_file(config_path);
    for (const auto& [key, value] : overrides) config.set(key, value);
    return config;
}

void print_summary(const textnet::RunOutcome& outcome) {
    for (const auto& [configuration, accs] : outcome.summary) {
        std::printf("%s:", configuration.c_str());
        for (const auto& [classifier, acc] : accs)
            std::printf("  %s=%.4f", classifier.c_str(), acc);
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"word co-occurrence network authorship attribution pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::string> overrides;
    textnet::RunConfig scratch;

    auto* run = app.add_subcommand("run", "full network pipeline (distances, MDS, classifiers)");
    bool no_mds = false, mds_only = false;
    run->add_option("--config", config_path, "run configuration file");
    run->add_flag("--no-mds", no_mds, "classify on raw distance rows only (skip MDS)");
    run->add_flag("--mds-only", mds_only, "skip the raw-distance-row configuration");
    add_override_flags(run, scratch, overrides);

    auto* baseline = app.add_subcommand("baseline", "TF-IDF cosine baseline through MDS");
    baseline->add_option("--config", config_path, "run configuration file");
    add_override_flags(baseline, scratch, overrides);

    auto* plots = app.add_subcommand("export-plots", "plot-ready CSVs and SVG renderings");
    std::string only_document;
    plots->add_option("--config", config_path, "run configuration file");
    plots->add_option("--doc", only_document, "restrict per-document rank exports to one id");
    add_override_flags(plots, scratch, overrides);

    auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic Markov-source corpus");
    textnet::SyntheticSpec spec;
    std::string gen_out = "synthetic_corpus";
    gen->add_option("--out", gen_out, "corpus output directory");
    gen->add_option("--authors", spec.authors, "number of authors");
    gen->add_option("--docs-per-author", spec.docs_per_author, "documents per author");
    gen->add_option("--tokens", spec.tokens_per_doc, "content tokens per document");
    gen->add_option("--vocabulary", spec.vocabulary, "per-author vocabulary size");
    gen->add_option("--overlap", spec.vocab_overlap, "vocabulary overlap fraction [0,1]");
    gen->add_option("--transition-bias", spec.transition_bias,
                    "probability of following the author transition table");
    gen->add_option("--min-branch", spec.min_branch, "minimum successors per word");
    gen->add_option("--max-branch", spec.max_branch, "maximum successors per word");
    gen->add_option("--stopword-rate", spec.stopword_rate, "stopword sprinkling rate");
    gen->add_flag("--ordering-only", spec.ordering_only,
                  "authors share vocabulary and frequencies, differ in word order");
    gen->add_option("--seed", spec.seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            if (no_mds && mds_only) throw textnet::ConfigError("--no-mds conflicts with --mds-only");
            auto config = resolve_config(config_path, overrides);
            auto outcome = textnet::run_attribution(config, !no_mds, !mds_only);
            print_summary(outcome);
        } else if (baseline->parsed()) {
            auto config = resolve_config(config_path, overrides);
            auto outcome = textnet::run_baseline(config);
            print_summary(outcome);
        } else if (plots->parsed()) {
            auto config = resolve_config(config_path, overrides);
            textnet::export_plots(config, only_document);
            std::printf("plots written to %s/plots\n", config.output_dir.c_str());
        } else if (gen->parsed()) {
            textnet::generate_synthetic_corpus(spec, gen_out);
            std::printf("synthetic corpus written to %s\n", gen_out.c_str());
        }
    } catch (const textnet::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const textnet::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const textnet::NumericError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 0;
}
