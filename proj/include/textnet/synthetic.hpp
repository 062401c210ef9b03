#pragma once

#include <cstdint>
#include <filesystem>

namespace textnet {

// Per-author first-order Markov word sources. Each author draws from a
// vocabulary that overlaps the others by `vocab_overlap`, and from its own
// successor table: every word gets a random set of followers whose size and
// identity are author-specific (members sampled by frequency, so the
// frequency profile stays roughly stationary; the step within a set is
// uniform). At each step the next word follows the author's successor table
// with probability `transition_bias`, otherwise the frequency profile.
// `doc_topic_jitter` perturbs the frequency profile per document (lognormal
// sigma), modelling document-level topic emphasis that varies within an
// author. Stopwords are sprinkled in so preprocessing has work to do.
//
// `ordering_only` makes all authors share one vocabulary and one frequency
// profile, so they differ only in word-ordering statistics.
struct SyntheticSpec {
    int authors = 8;
    int docs_per_author = 10;
    int tokens_per_doc = 20000;  // content tokens, before stopword sprinkling
    int vocabulary = 1500;       // per-author vocabulary size
    double vocab_overlap = 0.6;
    double transition_bias = 0.6;
    double doc_topic_jitter = 0.0;
    int min_branch = 2;
    int max_branch = 40;
    double stopword_rate = 0.3;
    bool ordering_only = false;
    uint64_t seed = 1;
};

// Writes texts/<author>_<doc>.txt, manifest.csv, stopwords.txt and a
// ready-to-run config.txt into out_dir.
void generate_synthetic_corpus(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

}  // namespace textnet
