#include "textnet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "textnet/error.hpp"
#include "textnet/pipeline.hpp"
#include "textnet/seeds.hpp"

namespace textnet {

namespace {

// Pronounceable pseudo-words: bijective consonant-vowel syllable encoding of
// the global word id. Two syllables minimum keeps them clear of the short
// function words used for sprinkling.
std::string make_word(int id) {
    static const char* consonants = "bdfgklmnprstvz";
    static const char* vowels = "aeiou";
    const int syllable_count = 14 * 5;
    std::string word;
    int value = id;
    int digits = 2;
    long long capacity = syllable_count * syllable_count;
    while (value >= capacity) {
        value -= static_cast<int>(capacity);
        ++digits;
        capacity *= syllable_count;
    }
    for (int i = 0; i < digits; ++i) {
        int syl = value % syllable_count;
        value /= syllable_count;
        word += consonants[syl / 5];
        word += vowels[syl % 5];
    }
    return word;
}

const std::vector<std::string> kSprinkleStopwords = {
    "the", "of", "and", "a", "to", "in", "is", "it", "was", "he",
    "she", "for", "on", "with", "as", "at", "by", "that", "this", "but"};

// Cumulative-weight sampler over word slots.
struct WeightedSampler {
    std::vector<double> cumulative;

    explicit WeightedSampler(const std::vector<double>& weights) {
        cumulative.resize(weights.size());
        double total = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) {
            total += weights[i];
            cumulative[i] = total;
        }
    }
    int draw(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> uniform(0.0, cumulative.back());
        double u = uniform(rng);
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        return static_cast<int>(it - cumulative.begin());
    }
};

struct AuthorModel {
    std::vector<int> vocab;                    // global word ids, author-rank order
    std::vector<double> zipf;                  // weight per author-rank slot
    std::vector<std::vector<int>> successors;  // per slot, author-rank slots
};

AuthorModel build_author(const SyntheticSpec& spec, int author) {
    const int v = spec.vocabulary;
    const int shared = std::clamp(static_cast<int>(std::lround(v * spec.vocab_overlap)), 0, v);
    const int own = v - shared;

    AuthorModel model;
    model.vocab.resize(v);
    for (int i = 0; i < shared; ++i) model.vocab[i] = i;
    for (int i = 0; i < own; ++i) model.vocab[shared + i] = shared + author * own + i;

    std::mt19937_64 rng(derive_seed(spec.seed, "author:" + std::to_string(author)));
    if (!spec.ordering_only) {
        // which words are frequent is author-specific too
        std::shuffle(model.vocab.begin(), model.vocab.end(), rng);
    }
    model.zipf.resize(v);
    for (int r = 0; r < v; ++r) model.zipf[r] = 1.0 / (r + 1.0);

    std::uniform_int_distribution<int> branch(spec.min_branch,
                                              std::max(spec.min_branch, spec.max_branch));
    WeightedSampler marginal(model.zipf);
    model.successors.resize(v);
    model.successor_samplers.reserve(v);
    for (int w = 0; w < v; ++w) {
        int want = std::min(branch(rng), v - 1);
        std::vector<int>& succ = model.successors[w];
        int attempts = 0;
        while (static_cast<int>(succ.size()) < want && attempts < want * 50) {
            ++attempts;
            int cand = marginal.draw(rng);
            if (cand == w) continue;
            if (std::find(succ.begin(), succ.end(), cand) != succ.end()) continue;
            succ.push_back(cand);
        }
        std::vector<double> weights;
        weights.reserve(succ.size());
        for (int s : succ) weights.push_back(model.zipf[s]);
        model.successor_samplers.emplace_back(weights);
    }
    return model;
}

std::string render_document(const SyntheticSpec& spec, const AuthorModel& author,
                            std::mt19937_64& rng) {
    WeightedSampler marginal(author.zipf);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uniform_int_distribution<int> stop_pick(0,
                                                 static_cast<int>(kSprinkleStopwords.size()) - 1);
    std::uniform_int_distribution<int> sentence_len(8, 18);

    std::string text;
    int words_in_sentence = 0;
    int next_sentence_end = sentence_len(rng);
    auto emit = [&](const std::string& word) {
        if (!text.empty()) text += ' ';
        text += word;
        if (++words_in_sentence >= next_sentence_end) {
            text += ".\n";
            words_in_sentence = 0;
            next_sentence_end = sentence_len(rng);
        }
    };

    int current = marginal.draw(rng);
    for (int t = 0; t < spec.tokens_per_doc; ++t) {
        emit(make_word(author.vocab[current]));
        for (int s = 0; s < 2 && uniform(rng) < spec.stopword_rate; ++s)
            emit(kSprinkleStopwords[stop_pick(rng)]);
        bool follow = uniform(rng) < spec.transition_bias &&
                      !author.successors[current].empty();
        current = follow ? author.successors[current][author.successor_samplers[current].draw(rng)]
                         : marginal.draw(rng);
    }
    if (words_in_sentence > 0) text += ".\n";
    return text;
}

}  // namespace

void generate_synthetic_corpus(const SyntheticSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.authors < 2) throw ConfigError("need at least 2 authors");
    if (spec.docs_per_author < 1 || spec.tokens_per_doc < 2 || spec.vocabulary < 10)
        throw ConfigError("degenerate synthetic corpus parameters");
    if (spec.vocab_overlap < 0.0 || spec.vocab_overlap > 1.0)
        throw ConfigError("vocab_overlap must lie in [0,1]");

    std::filesystem::create_directories(out_dir / "texts");

    std::ofstream manifest(out_dir / "manifest.csv", std::ios::binary);
    if (!manifest) throw DataError("cannot write manifest: " + (out_dir / "manifest.csv").string());
    manifest << "author,document_id,path\n";

    for (int a = 0; a < spec.authors; ++a) {
        AuthorModel author = build_author(spec.ordering_only ? [&] {
            SyntheticSpec s = spec;
            s.vocab_overlap = 1.0;
            return s;
        }() : spec, a);
        char author_label[32];
        std::snprintf(author_label, sizeof(author_label), "author%02d", a + 1);
        for (int d = 0; d < spec.docs_per_author; ++d) {
            char doc_id[64];
            std::snprintf(doc_id, sizeof(doc_id), "%s_doc%02d", author_label, d + 1);
            std::mt19937_64 rng(
                derive_seed(spec.seed, "doc:" + std::to_string(a) + ":" + std::to_string(d)));
            std::string text = render_document(spec, author, rng);
            std::filesystem::path rel = std::filesystem::path("texts") / (std::string(doc_id) + ".txt");
            std::ofstream out(out_dir / rel, std::ios::binary);
            if (!out) throw DataError("cannot write text: " + (out_dir / rel).string());
            out << text;
            manifest << author_label << ',' << doc_id << ',' << rel.generic_string() << '\n';
        }
    }

    {
        std::ofstream stops(out_dir / "stopwords.txt", std::ios::binary);
        for (const auto& w : kSprinkleStopwords) stops << w << '\n';
    }
    {
        RunConfig config;
        config.manifest = (out_dir / "manifest.csv").string();
        config.stopwords = (out_dir / "stopwords.txt").string();
        config.output_dir = (out_dir / "out").string();
        config.seed = spec.seed;
        config.write(out_dir / "config.txt");
    }
}

}  // namespace textnet
