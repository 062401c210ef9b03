#include "textnet/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "textnet/baseline.hpp"
#include "textnet/corpus.hpp"
#include "textnet/csv.hpp"
#include "textnet/embedding.hpp"
#include "textnet/error.hpp"
#include "textnet/graph.hpp"
#include "textnet/metrics.hpp"
#include "textnet/parallel.hpp"
#include "textnet/seeds.hpp"

namespace textnet {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// RunConfig

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key `" + key + "` expects true/false, got `" + value + "`");
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key `" + key + "` expects an integer, got `" + value + "`");
    }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key `" + key + "` expects an unsigned integer, got `" + value +
                          "`");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key `" + key + "` expects a number, got `" + value + "`");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string cur;
    for (char c : value) {
        if (c == ',') {
            if (!cur.empty()) items.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) items.push_back(cur);
    return items;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ',';
        out += s;
    }
    return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "manifest") manifest = value;
    else if (key == "stopwords") stopwords = value;
    else if (key == "lexicon") lexicon = value;
    else if (key == "input_format") {
        if (value != "text" && value != "lemmas")
            throw ConfigError("input_format must be `text` or `lemmas`");
        input_format = value;
    } else if (key == "output_dir") output_dir = value;
    else if (key == "seed") seed = parse_u64(key, value);
    else if (key == "threads") threads = parse_int(key, value);
    else if (key == "keep_self_loops") keep_self_loops = parse_bool(key, value);
    else if (key == "sentence_boundaries") sentence_boundaries = parse_bool(key, value);
    else if (key == "directed_metrics") directed_metrics = parse_bool(key, value);
    else if (key == "intermittency_original_positions")
        intermittency_original_positions = parse_bool(key, value);
    else if (key == "intermittency_min_frequency")
        intermittency_min_frequency = parse_int(key, value);
    else if (key == "profile_size") profile_size = parse_int(key, value);
    else if (key == "metrics") {
        metrics.clear();
        for (const auto& name : split_list(value)) metrics.push_back(metric_from_name(name));
        if (metrics.empty()) throw ConfigError("metric set must not be empty");
    } else if (key == "rank_descending_degree") rank_descending_degree = parse_bool(key, value);
    else if (key == "rank_descending_avg_shortest_path")
        rank_descending_avg_shortest_path = parse_bool(key, value);
    else if (key == "rank_descending_betweenness")
        rank_descending_betweenness = parse_bool(key, value);
    else if (key == "rank_descending_intermittency")
        rank_descending_intermittency = parse_bool(key, value);
    else if (key == "mds_threshold") mds_threshold = parse_real(key, value);
    else if (key == "mds_max_dims") mds_max_dims = parse_int(key, value);
    else if (key == "classifiers") {
        classifiers.clear();
        for (const auto& name : split_list(value))
            classifiers.push_back(classifier_from_name(name));
        if (classifiers.empty()) throw ConfigError("classifier set must not be empty");
    } else if (key == "knn_neighbors") knn_neighbors = parse_int(key, value);
    else if (key == "rbfn_clusters") rbfn_clusters = parse_int(key, value);
    else if (key == "folds") folds = parse_int(key, value);
    else if (key == "tfidf_smooth_idf") tfidf_smooth_idf = parse_bool(key, value);
    else throw ConfigError("unknown config key: " + key);
}

RunConfig RunConfig::from_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not `key = value`: " + path.string());
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t");
            size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty config key on line " + std::to_string(line_no));
        config.set(key, value);
    }
    // resolve paths against the config file location
    auto base = path.parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) p = (base / p).lexically_normal().string();
    };
    resolve(config.manifest);
    resolve(config.stopwords);
    resolve(config.lexicon);
    resolve(config.output_dir);
    return config;
}

void RunConfig::write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write config: " + path.string());
    std::vector<std::string> metric_names, classifier_names;
    for (Metric m : metrics) metric_names.push_back(metric_name(m));
    for (ClassifierKind c : classifiers) classifier_names.push_back(classifier_name(c));
    out << "manifest = " << manifest << '\n'
        << "stopwords = " << stopwords << '\n'
        << "lexicon = " << lexicon << '\n'
        << "input_format = " << input_format << '\n'
        << "output_dir = " << output_dir << '\n'
        << "seed = " << seed << '\n'
        << "threads = " << threads << '\n'
        << "keep_self_loops = " << bool_str(keep_self_loops) << '\n'
        << "sentence_boundaries = " << bool_str(sentence_boundaries) << '\n'
        << "directed_metrics = " << bool_str(directed_metrics) << '\n'
        << "intermittency_original_positions = " << bool_str(intermittency_original_positions)
        << '\n'
        << "intermittency_min_frequency = " << intermittency_min_frequency << '\n'
        << "profile_size = " << profile_size << '\n'
        << "metrics = " << join_list(metric_names) << '\n'
        << "rank_descending_degree = " << bool_str(rank_descending_degree) << '\n'
        << "rank_descending_avg_shortest_path = " << bool_str(rank_descending_avg_shortest_path)
        << '\n'
        << "rank_descending_betweenness = " << bool_str(rank_descending_betweenness) << '\n'
        << "rank_descending_intermittency = " << bool_str(rank_descending_intermittency) << '\n'
        << "mds_threshold = " << csv::format_double(mds_threshold) << '\n'
        << "mds_max_dims = " << mds_max_dims << '\n'
        << "classifiers = " << join_list(classifier_names) << '\n'
        << "knn_neighbors = " << knn_neighbors << '\n'
        << "rbfn_clusters = " << rbfn_clusters << '\n'
        << "folds = " << folds << '\n'
        << "tfidf_smooth_idf = " << bool_str(tfidf_smooth_idf) << '\n';
}

void RunConfig::validate() const {
    if (manifest.empty()) throw ConfigError("manifest path is required");
    if (stopwords.empty() && input_format == "text")
        throw ConfigError("stopword file is required for raw text input");
    if (profile_size < 1) throw ConfigError("profile_size must be >= 1");
    if (mds_threshold <= 0.0 || mds_threshold >= 1.0)
        throw ConfigError("mds_threshold must lie in (0,1)");
    if (mds_max_dims < 0) throw ConfigError("mds_max_dims must be >= 0");
    if (knn_neighbors < 1) throw ConfigError("knn_neighbors must be >= 1");
    if (rbfn_clusters < 1) throw ConfigError("rbfn_clusters must be >= 1");
    if (folds < 2) throw ConfigError("folds must be >= 2");
    if (intermittency_min_frequency < 2)
        throw ConfigError("intermittency_min_frequency must be >= 2");
    if (sentence_boundaries && input_format == "lemmas")
        throw ConfigError("sentence_boundaries needs raw text input");
    if (threads < 0) throw ConfigError("threads must be >= 0");
}

bool RunConfig::rank_descending(Metric metric) const {
    switch (metric) {
        case Metric::degree: return rank_descending_degree;
        case Metric::avg_shortest_path: return rank_descending_avg_shortest_path;
        case Metric::betweenness: return rank_descending_betweenness;
        case Metric::intermittency: return rank_descending_intermittency;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Stage plumbing

namespace {

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_bytes(const fs::path& path, const std::string& bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write file: " + tmp.string());
        out << bytes;
    }
    fs::rename(tmp, path);
}

std::string hex_key(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

template <typename Fn>
auto with_stage(const std::string& stage, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError("[" + stage + "] " + e.what());
    } catch (const DataError& e) {
        throw DataError("[" + stage + "] " + e.what());
    } catch (const NumericError& e) {
        throw NumericError("[" + stage + "] " + e.what());
    }
}

struct Corpus {
    std::vector<std::string> doc_ids;
    std::vector<std::string> authors;       // per document
    std::vector<std::string> author_names;  // sorted unique
    std::vector<int> labels;                // per document
    std::vector<std::string> paths;         // input file per document
};

Corpus load_manifest(const RunConfig& config) {
    CorpusManifest manifest = read_manifest(config.manifest);
    Corpus corpus;
    for (const auto& e : manifest.entries) {
        corpus.doc_ids.push_back(e.document_id);
        corpus.authors.push_back(e.author);
        corpus.paths.push_back(e.path);
    }
    corpus.author_names = corpus.authors;
    std::sort(corpus.author_names.begin(), corpus.author_names.end());
    corpus.author_names.erase(
        std::unique(corpus.author_names.begin(), corpus.author_names.end()),
        corpus.author_names.end());
    if (corpus.author_names.size() < 2)
        throw DataError("attribution needs at least 2 distinct authors, got " +
                        std::to_string(corpus.author_names.size()));
    for (const auto& a : corpus.authors)
        corpus.labels.push_back(static_cast<int>(
            std::lower_bound(corpus.author_names.begin(), corpus.author_names.end(), a) -
            corpus.author_names.begin()));
    return corpus;
}

struct Pipeline {
    const RunConfig& config;
    Corpus corpus;
    fs::path outdir;
    fs::path cachedir;
    RunStats stats;
    int threads;

    // cached token/sentence file content per document, filled by token_stage
    std::vector<std::string> token_bytes;
    std::vector<std::vector<int>> sentence_starts;

    explicit Pipeline(const RunConfig& cfg)
        : config(cfg), corpus(load_manifest(cfg)), outdir(cfg.output_dir),
          cachedir(outdir / "cache"), threads(resolve_threads(cfg.threads)) {
        fs::create_directories(cachedir / "tokens");
        fs::create_directories(cachedir / "networks");
        fs::create_directories(cachedir / "metrics");
        fs::create_directories(cachedir / "distances");
        fs::create_directories(cachedir / "embeddings");
        fs::create_directories(outdir / "metrics");
        config.write(outdir / "config_resolved.txt");
    }

    int doc_count() const { return static_cast<int>(corpus.doc_ids.size()); }

    void warn(const std::string& message) {
        stats.warnings.push_back(message);
        std::cerr << "warning: " << message << '\n';
    }

    void count(const std::string& stage, bool hit) {
        StageStats& s = stats.stages[stage];
        if (hit) ++s.hits;
        else ++s.misses;
    }

    // ---- tokens ----------------------------------------------------------

    std::string token_flags() const {
        return "fmt=" + config.input_format +
               ";sent=" + bool_str(config.sentence_boundaries);
    }

    void token_stage() {
        with_stage("tokens", [&] {
            std::string stop_hash, lex_hash;
            StopwordList stops;
            LemmaLexicon lexicon;
            if (config.input_format == "text") {
                std::string stop_bytes = read_bytes(config.stopwords);
                stop_hash = hex_key(fnv1a64(stop_bytes));
                stops = StopwordList::from_file(config.stopwords);
                if (!config.lexicon.empty()) {
                    std::string lex_bytes = read_bytes(config.lexicon);
                    lex_hash = hex_key(fnv1a64(lex_bytes));
                    lexicon = LemmaLexicon::from_file(config.lexicon);
                }
            }

            const int m = doc_count();
            token_bytes.assign(m, "");
            sentence_starts.assign(m, {});
            std::vector<std::string> keys(m);
            std::vector<char> hit(m, 0);
            std::vector<std::string> raw(m);
            for (int i = 0; i < m; ++i) {
                raw[i] = read_bytes(corpus.paths[i]);
                keys[i] = hex_key(fnv1a64(raw[i] + "|" + stop_hash + "|" + lex_hash + "|" +
                                          token_flags()));
                hit[i] = fs::exists(cachedir / "tokens" / (keys[i] + ".tsv")) ? 1 : 0;
            }
            parallel_for(m, threads, [&](int i) {
                if (hit[i]) return;
                fs::path file = cachedir / "tokens" / (keys[i] + ".tsv");
                TokenStream stream;
                std::vector<int> starts;
                if (config.input_format == "lemmas") {
                    // the input already is the token-file format; normalize it
                    fs::path tmp = file;
                    tmp += ".in";
                    write_bytes(tmp, raw[i]);
                    stream = read_token_stream(tmp, corpus.doc_ids[i]);
                    fs::remove(tmp);
                } else if (config.sentence_boundaries) {
                    TokenizedText toks = tokenize_sentences(raw[i]);
                    stream = preprocess(toks.tokens, stops, lexicon, corpus.doc_ids[i]);
                    starts = toks.sentence_starts;
                } else {
                    stream = preprocess(tokenize(raw[i]), stops, lexicon, corpus.doc_ids[i]);
                }
                std::ostringstream buf;
                for (const auto& t : stream.tokens) buf << t.lemma << '\t' << t.position << '\n';
                write_bytes(file, buf.str());
                if (config.sentence_boundaries) {
                    std::ostringstream sbuf;
                    for (int s : starts) sbuf << s << '\n';
                    write_bytes(cachedir / "tokens" / (keys[i] + ".sent"), sbuf.str());
                }
            });
            for (int i = 0; i < m; ++i) {
                count("tokens", hit[i]);
                token_bytes[i] = read_bytes(cachedir / "tokens" / (keys[i] + ".tsv"));
                if (config.sentence_boundaries) {
                    std::istringstream in(
                        read_bytes(cachedir / "tokens" / (keys[i] + ".sent")));
                    int v;
                    while (in >> v) sentence_starts[i].push_back(v);
                }
            }
        });
    }

    TokenStream stream_of(int i) const {
        TokenStream stream;
        stream.document_id = corpus.doc_ids[i];
        std::istringstream in(token_bytes[i]);
        std::string line;
        int prev = -1;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            size_t tab = line.find('\t');
            std::string lemma = line.substr(0, tab);
            int pos = std::stoi(line.substr(tab + 1));
            stream.tokens.push_back({std::move(lemma), pos});
            prev = pos;
        }
        stream.original_length = prev + 1;
        return stream;
    }

    // ---- networks + metrics ----------------------------------------------

    std::string graph_flags() const {
        return "loops=" + bool_str(config.keep_self_loops) +
               ";sent=" + bool_str(config.sentence_boundaries);
    }

    std::string metric_flags() const {
        return "directed=" + bool_str(config.directed_metrics) +
               ";origpos=" + bool_str(config.intermittency_original_positions);
    }

    MetricOptions metric_options() const {
        MetricOptions options;
        options.directed = config.directed_metrics;
        options.intermittency_original_positions = config.intermittency_original_positions;
        options.threads = 1;  // documents already run in parallel
        return options;
    }

    // returns per-document metric-table bytes
    std::vector<std::string> metric_stage() {
        const int m = doc_count();

        // networks
        std::vector<std::string> net_keys(m);
        std::vector<char> net_hit(m, 0);
        with_stage("networks", [&] {
            for (int i = 0; i < m; ++i) {
                std::string sent_tag;
                for (int s : sentence_starts[i]) sent_tag += std::to_string(s) + ",";
                net_keys[i] =
                    hex_key(fnv1a64(token_bytes[i] + "|" + graph_flags() + "|" + sent_tag));
                net_hit[i] = fs::exists(cachedir / "networks" / (net_keys[i] + ".edges"));
            }
            parallel_for(m, threads, [&](int i) {
                if (net_hit[i]) return;
                GraphOptions options;
                options.keep_self_loops = config.keep_self_loops;
                options.sentence_starts = sentence_starts[i];
                CoocNetwork net = build_network(stream_of(i), options);
                write_network(net, cachedir / "networks" / (net_keys[i] + ".nodes"),
                              cachedir / "networks" / (net_keys[i] + ".edges"));
            });
            for (int i = 0; i < m; ++i) count("networks", net_hit[i]);
        });

        // metric tables
        std::vector<std::string> table_bytes(m);
        with_stage("metrics", [&] {
            std::vector<std::string> keys(m);
            std::vector<char> hit(m, 0);
            for (int i = 0; i < m; ++i) {
                std::string net_bytes =
                    read_bytes(cachedir / "networks" / (net_keys[i] + ".nodes")) +
                    read_bytes(cachedir / "networks" / (net_keys[i] + ".edges"));
                keys[i] = hex_key(fnv1a64(net_bytes + "|" + token_bytes[i] + "|" + metric_flags()));
                hit[i] = fs::exists(cachedir / "metrics" / (keys[i] + ".csv"));
            }
            parallel_for(m, threads, [&](int i) {
                if (hit[i]) return;
                CoocNetwork net = read_network(cachedir / "networks" / (net_keys[i] + ".nodes"),
                                               cachedir / "networks" / (net_keys[i] + ".edges"));
                NodeMetricTable table = metric_table(net, stream_of(i), metric_options());
                write_metric_table(table, cachedir / "metrics" / (keys[i] + ".csv"));
            });
            for (int i = 0; i < m; ++i) {
                count("metrics", hit[i]);
                table_bytes[i] = read_bytes(cachedir / "metrics" / (keys[i] + ".csv"));
                // visible copy, consumed by export-plots
                write_bytes(outdir / "metrics" / (corpus.doc_ids[i] + ".csv"), table_bytes[i]);
            }
        });
        return table_bytes;
    }

    // ---- rank distances ----------------------------------------------------

    RankProfileOptions profile_options(Metric metric) const {
        RankProfileOptions options;
        options.n = config.profile_size;
        options.descending = config.rank_descending(metric);
        options.min_frequency = config.intermittency_min_frequency;
        return options;
    }

    std::string distance_stage(Metric metric, const std::vector<std::string>& table_bytes) {
        return with_stage("distances:" + std::string(metric_name(metric)), [&] {
            std::string all;
            for (const auto& b : table_bytes) all += b;
            std::string flags = std::string(metric_name(metric)) +
                                ";n=" + std::to_string(config.profile_size) +
                                ";desc=" + bool_str(config.rank_descending(metric)) +
                                ";minfreq=" + std::to_string(config.intermittency_min_frequency);
            std::string key = hex_key(fnv1a64(all + "|" + flags));
            fs::path file =
                cachedir / "distances" / (std::string(metric_name(metric)) + "_" + key + ".csv");
            bool hit = fs::exists(file);
            count("distances", hit);
            if (!hit) {
                std::vector<RankProfile> profiles(doc_count());
                parallel_for(doc_count(), threads, [&](int i) {
                    NodeMetricTable table = read_metric_table(
                        outdir / "metrics" / (corpus.doc_ids[i] + ".csv"), corpus.doc_ids[i]);
                    profiles[i] = rank_profile(table, metric, profile_options(metric));
                });
                for (const auto& p : profiles)
                    if (static_cast<int>(p.ranks.size()) < config.profile_size)
                        warn("document " + p.document_id + " has a short " +
                             metric_name(metric) + " profile (" +
                             std::to_string(p.ranks.size()) + " < " +
                             std::to_string(config.profile_size) + " eligible words)");
                DistanceMatrix matrix = distance_matrix(profiles, threads);
                write_distance_csv(matrix, file);
            }
            std::string bytes = read_bytes(file);
            write_bytes(outdir / (std::string("dist_") + metric_name(metric) + ".csv"), bytes);
            return bytes;
        });
    }

    // ---- MDS ---------------------------------------------------------------

    int max_dims() const {
        if (config.mds_max_dims > 0) return config.mds_max_dims;
        return std::max(1, std::min(doc_count() - 1, 20));
    }

    Embedding embedding_stage(const std::string& label, const std::string& dist_bytes) {
        return with_stage("mds:" + label, [&] {
            uint64_t seed = derive_seed(config.seed, "mds:" + label);
            std::string flags = "threshold=" + csv::format_double(config.mds_threshold) +
                                ";maxdims=" + std::to_string(max_dims()) +
                                ";seed=" + std::to_string(seed);
            std::string key = hex_key(fnv1a64(dist_bytes + "|" + flags));
            fs::path emb_file = cachedir / "embeddings" / (label + "_" + key + ".csv");
            fs::path stress_file = cachedir / "embeddings" / (label + "_" + key + ".stress.csv");
            bool hit = fs::exists(emb_file) && fs::exists(stress_file);
            count("embeddings", hit);
            if (!hit) {
                DistanceMatrix matrix = parse_distance_csv(dist_bytes);
                DimSearch search = choose_dim(matrix, config.mds_threshold, max_dims(), seed);
                if (!search.threshold_met)
                    warn("MDS elbow threshold not reached for " + label + " within " +
                         std::to_string(max_dims()) + " dimensions");
                search.best.source_metric = label;
                write_embedding_csv(search.best, emb_file);
                write_stress_curve_csv(search.curve, stress_file);
            }
            write_bytes(outdir / ("embedding_" + label + ".csv"), read_bytes(emb_file));
            write_bytes(outdir / ("stress_" + label + ".csv"), read_bytes(stress_file));
            Embedding embedding = read_embedding_csv(emb_file);
            embedding.source_metric = label;
            return embedding;
        });
    }

    // ---- classification ----------------------------------------------------

    LabeledDataset dataset_from(const FeatureMatrix& features) const {
        if (features.document_ids != corpus.doc_ids)
            throw DataError("feature rows do not match the manifest order");
        LabeledDataset data;
        data.document_ids = corpus.doc_ids;
        data.feature_count = features.width;
        data.features = features.values;
        data.labels = corpus.labels;
        data.class_count = static_cast<int>(corpus.author_names.size());
        return data;
    }

    std::map<std::string, double> classify_stage(const std::string& configuration,
                                                 const LabeledDataset& data) {
        return with_stage("classify:" + configuration, [&] {
            std::map<std::string, double> accuracies;
            std::ofstream folds_csv(outdir / ("cv_" + configuration + ".csv"), std::ios::binary);
            folds_csv << "classifier,fold,accuracy\n";
            for (ClassifierKind kind : config.classifiers) {
                ClassifierSpec spec;
                spec.kind = kind;
                spec.knn_k = config.knn_neighbors;
                spec.rbfn_clusters = config.rbfn_clusters;
                uint64_t seed = derive_seed(config.seed,
                                            "cv:" + configuration + ":" + classifier_name(kind));
                CVReport report = cross_validate(data, spec, config.folds, seed);
                if (report.folds_used < config.folds)
                    warn("folds reduced to " + std::to_string(report.folds_used) + " for " +
                         configuration + "/" + report.classifier);
                for (size_t f = 0; f < report.fold_accuracies.size(); ++f)
                    folds_csv << report.classifier << ',' << f << ','
                              << csv::format_double(report.fold_accuracies[f], 15) << '\n';
                std::ofstream confusion(
                    outdir / ("confusion_" + configuration + "_" + report.classifier + ".csv"),
                    std::ios::binary);
                std::vector<std::string> header = {"true\\predicted"};
                header.insert(header.end(), corpus.author_names.begin(),
                              corpus.author_names.end());
                csv::write_row(confusion, header);
                for (int r = 0; r < report.class_count; ++r) {
                    std::vector<std::string> row = {corpus.author_names[r]};
                    for (int c = 0; c < report.class_count; ++c)
                        row.push_back(std::to_string(
                            report.confusion[static_cast<size_t>(r) * report.class_count + c]));
                    csv::write_row(confusion, row);
                }
                accuracies[report.classifier] = report.accuracy;
            }
            return accuracies;
        });
    }

    // ---- summary -----------------------------------------------------------

    void upsert_summary(const std::map<std::string, std::map<std::string, double>>& rows) {
        fs::path file = outdir / "summary.csv";
        std::map<std::string, std::map<std::string, std::string>> table;
        if (fs::exists(file)) {
            auto existing = csv::read(file);
            for (size_t i = 1; i < existing.size(); ++i)
                for (size_t j = 1; j < existing[i].size() && j < existing[0].size(); ++j)
                    if (!existing[i][j].empty())
                        table[existing[i][0]][existing[0][j]] = existing[i][j];
        }
        for (const auto& [configuration, accs] : rows)
            for (const auto& [classifier, acc] : accs)
                table[configuration][classifier] = csv::format_double(acc, 15);

        static const std::vector<std::string> order = {"without_mds", "using_mds", "tfidf_mds"};
        static const std::vector<std::string> columns = {"j48", "knn", "nb", "rbfn"};
        std::ofstream out(file, std::ios::binary);
        std::vector<std::string> header = {"configuration"};
        header.insert(header.end(), columns.begin(), columns.end());
        csv::write_row(out, header);
        for (const auto& configuration : order) {
            auto it = table.find(configuration);
            if (it == table.end()) continue;
            std::vector<std::string> row = {configuration};
            for (const auto& c : columns) {
                auto jt = it->second.find(c);
                row.push_back(jt == it->second.end() ? "" : jt->second);
            }
            csv::write_row(out, row);
        }
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Entry points

RunOutcome run_attribution(const RunConfig& config, bool with_mds, bool without_mds) {
    config.validate();
    if (!with_mds && !without_mds)
        throw ConfigError("nothing to run: both MDS and no-MDS paths disabled");

    Pipeline pipeline(config);
    pipeline.token_stage();
    std::vector<std::string> table_bytes = pipeline.metric_stage();

    std::vector<std::string> dist_bytes;
    for (Metric metric : config.metrics)
        dist_bytes.push_back(pipeline.distance_stage(metric, table_bytes));

    RunOutcome outcome;
    outcome.document_count = pipeline.doc_count();

    if (without_mds) {
        // features are the concatenated distance rows, metric after metric
        const int m = pipeline.doc_count();
        FeatureMatrix features;
        features.document_ids = pipeline.corpus.doc_ids;
        features.width = static_cast<int>(config.metrics.size()) * m;
        features.values.resize(static_cast<size_t>(m) * features.width);
        for (size_t k = 0; k < config.metrics.size(); ++k) {
            DistanceMatrix matrix = parse_distance_csv(dist_bytes[k]);
            if (matrix.document_ids != pipeline.corpus.doc_ids)
                throw DataError("distance matrix ids do not match the manifest");
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    features.values[static_cast<size_t>(i) * features.width + k * m + j] =
                        matrix.at(i, j);
        }
        outcome.feature_widths["without_mds"] = features.width;
        outcome.summary["without_mds"] =
            pipeline.classify_stage("without_mds", pipeline.dataset_from(features));
    }

    if (with_mds) {
        std::vector<Embedding> embeddings;
        for (size_t k = 0; k < config.metrics.size(); ++k)
            embeddings.push_back(
                pipeline.embedding_stage(metric_name(config.metrics[k]), dist_bytes[k]));
        FeatureMatrix features = combine(embeddings);
        outcome.feature_widths["using_mds"] = features.width;
        outcome.summary["using_mds"] =
            pipeline.classify_stage("using_mds", pipeline.dataset_from(features));
    }

    pipeline.upsert_summary(outcome.summary);
    outcome.stats = pipeline.stats;
    return outcome;
}

RunOutcome run_baseline(const RunConfig& config) {
    config.validate();
    Pipeline pipeline(config);
    pipeline.token_stage();

    std::string dist = with_stage("tfidf", [&]() -> std::string {
        std::string all;
        for (const auto& b : pipeline.token_bytes) all += b;
        std::string key = hex_key(
            fnv1a64(all + "|smooth=" + (config.tfidf_smooth_idf ? "true" : "false")));
        fs::path file = pipeline.cachedir / "distances" / ("tfidf_" + key + ".csv");
        bool hit = fs::exists(file);
        pipeline.count("distances", hit);
        if (!hit) {
            std::vector<TokenStream> streams;
            for (int i = 0; i < pipeline.doc_count(); ++i) streams.push_back(pipeline.stream_of(i));
            TfidfModel model = tfidf_vectors(streams, config.tfidf_smooth_idf);
            bool all_zero = true;
            for (const auto& vec : model.doc_vectors)
                if (!vec.empty()) all_zero = false;
            if (all_zero)
                pipeline.warn("all TF-IDF vectors are zero (degenerate corpus); "
                              "distances carry no signal");
            DistanceMatrix matrix = cosine_distance_matrix(model, pipeline.threads);
            write_distance_csv(matrix, file);
        }
        std::string bytes = read_bytes(file);
        write_bytes(pipeline.outdir / "dist_tfidf.csv", bytes);
        return bytes;
    });

    RunOutcome outcome;
    outcome.document_count = pipeline.doc_count();
    Embedding embedding = pipeline.embedding_stage("tfidf", dist);
    FeatureMatrix features = combine({embedding});
    outcome.feature_widths["tfidf_mds"] = features.width;
    outcome.summary["tfidf_mds"] =
        pipeline.classify_stage("tfidf_mds", pipeline.dataset_from(features));
    pipeline.upsert_summary(outcome.summary);
    outcome.stats = pipeline.stats;
    return outcome;
}

}  // namespace textnet
