#include "textnet/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "textnet/error.hpp"
#include "textnet/seeds.hpp"

namespace textnet {

void validate_dataset(const LabeledDataset& data) {
    if (data.size() == 0) throw DataError("empty dataset");
    if (data.class_count < 1) throw DataError("dataset needs at least one class");
    if (data.size() < data.class_count)
        throw DataError("fewer rows than classes");
    if (data.features.size() != static_cast<size_t>(data.size()) * data.feature_count)
        throw DataError("feature matrix shape mismatch");
    for (int label : data.labels)
        if (label < 0 || label >= data.class_count) throw DataError("label out of range");
    for (double v : data.features)
        if (!std::isfinite(v)) throw DataError("feature matrix has non-finite entries");
}

static double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

int knn_classify(const LabeledDataset& train, std::span<const double> query, int k) {
    if (train.size() == 0) throw DataError("empty training set");
    if (k < 1) throw ConfigError("k must be >= 1");
    k = std::min(k, train.size());

    std::vector<std::pair<double, int>> order(train.size());
    for (int i = 0; i < train.size(); ++i)
        order[i] = {squared_distance(train.row(i), query), i};
    std::partial_sort(order.begin(), order.begin() + k, order.end());

    std::vector<int> votes(train.class_count, 0);
    for (int i = 0; i < k; ++i) ++votes[train.labels[order[i].second]];
    int best_votes = *std::max_element(votes.begin(), votes.end());
    // first of the nearest neighbors whose class holds the top vote count
    for (int i = 0; i < k; ++i) {
        int label = train.labels[order[i].second];
        if (votes[label] == best_votes) return label;
    }
    return train.labels[order[0].second];
}

NaiveBayesModel train_naive_bayes(const LabeledDataset& train) {
    validate_dataset(train);
    const int c = train.class_count;
    const int f = train.feature_count;
    std::vector<int> counts(c, 0);
    for (int label : train.labels) ++counts[label];
    for (int k = 0; k < c; ++k)
        if (counts[k] < 1) throw DataError("class " + std::to_string(k) + " has no samples");

    NaiveBayesModel model;
    model.feature_count = f;
    model.class_count = c;
    model.log_priors.resize(c);
    model.means.assign(static_cast<size_t>(c) * f, 0.0);
    model.variances.assign(static_cast<size_t>(c) * f, 0.0);
    for (int k = 0; k < c; ++k)
        model.log_priors[k] = std::log(static_cast<double>(counts[k]) / train.size());

    std::vector<double> global_mean(f, 0.0), global_var(f, 0.0);
    for (int i = 0; i < train.size(); ++i) {
        auto row = train.row(i);
        for (int j = 0; j < f; ++j) global_mean[j] += row[j];
    }
    for (int j = 0; j < f; ++j) global_mean[j] /= train.size();
    for (int i = 0; i < train.size(); ++i) {
        auto row = train.row(i);
        for (int j = 0; j < f; ++j) {
            double d = row[j] - global_mean[j];
            global_var[j] += d * d;
        }
    }
    for (int j = 0; j < f; ++j) global_var[j] /= train.size();

    for (int i = 0; i < train.size(); ++i) {
        auto row = train.row(i);
        double* mean = model.means.data() + static_cast<size_t>(train.labels[i]) * f;
        for (int j = 0; j < f; ++j) mean[j] += row[j];
    }
    for (int k = 0; k < c; ++k) {
        double* mean = model.means.data() + static_cast<size_t>(k) * f;
        for (int j = 0; j < f; ++j) mean[j] /= counts[k];
    }
    for (int i = 0; i < train.size(); ++i) {
        auto row = train.row(i);
        int k = train.labels[i];
        const double* mean = model.means.data() + static_cast<size_t>(k) * f;
        double* var = model.variances.data() + static_cast<size_t>(k) * f;
        for (int j = 0; j < f; ++j) {
            double d = row[j] - mean[j];
            var[j] += d * d;
        }
    }
    for (int k = 0; k < c; ++k) {
        double* var = model.variances.data() + static_cast<size_t>(k) * f;
        for (int j = 0; j < f; ++j) {
            if (global_var[j] <= 0.0) {
                var[j] = 0.0;  // constant feature: carries no information
            } else {
                var[j] = std::max(var[j] / counts[k], 1e-9 * global_var[j]);
            }
        }
    }
    return model;
}

int predict(const NaiveBayesModel& model, std::span<const double> query) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < model.class_count; ++k) {
        double score = model.log_priors[k];
        const double* mean = model.means.data() + static_cast<size_t>(k) * model.feature_count;
        const double* var = model.variances.data() + static_cast<size_t>(k) * model.feature_count;
        for (int j = 0; j < model.feature_count; ++j) {
            if (var[j] <= 0.0) continue;
            double d = query[j] - mean[j];
            score += -0.5 * std::log(2.0 * M_PI * var[j]) - d * d / (2.0 * var[j]);
        }
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }
    return best;
}

namespace {

// Lloyd iterations from a seeded Forgy start; empty clusters keep their
// previous center. Converges when assignments stop changing.
std::vector<double> kmeans_centers(const LabeledDataset& data, int clusters, uint64_t seed) {
    const int m = data.size();
    const int f = data.feature_count;
    std::vector<int> pick(m);
    std::iota(pick.begin(), pick.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(pick.begin(), pick.end(), rng);

    std::vector<double> centers(static_cast<size_t>(clusters) * f);
    for (int c = 0; c < clusters; ++c) {
        auto row = data.row(pick[c]);
        std::copy(row.begin(), row.end(), centers.begin() + static_cast<size_t>(c) * f);
    }
    std::vector<int> assignment(m, -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < m; ++i) {
            auto row = data.row(i);
            int best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (int c = 0; c < clusters; ++c) {
                double dist = squared_distance(
                    row, {centers.data() + static_cast<size_t>(c) * f, static_cast<size_t>(f)});
                if (dist < best_dist) {
                    best_dist = dist;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        std::vector<double> sums(static_cast<size_t>(clusters) * f, 0.0);
        std::vector<int> counts(clusters, 0);
        for (int i = 0; i < m; ++i) {
            auto row = data.row(i);
            double* sum = sums.data() + static_cast<size_t>(assignment[i]) * f;
            for (int j = 0; j < f; ++j) sum[j] += row[j];
            ++counts[assignment[i]];
        }
        for (int c = 0; c < clusters; ++c) {
            if (counts[c] == 0) continue;
            double* center = centers.data() + static_cast<size_t>(c) * f;
            const double* sum = sums.data() + static_cast<size_t>(c) * f;
            for (int j = 0; j < f; ++j) center[j] = sum[j] / counts[c];
        }
    }
    return centers;
}

void rbf_activations(const RbfnModel& model, std::span<const double> query, double* out) {
    for (int c = 0; c < model.clusters; ++c) {
        double dist = squared_distance(
            query, {model.centers.data() + static_cast<size_t>(c) * model.feature_count,
                    static_cast<size_t>(model.feature_count)});
        out[c] = std::exp(-dist / (2.0 * model.widths[c] * model.widths[c]));
    }
}

}  // namespace

RbfnModel train_rbfn(const LabeledDataset& train, int clusters, uint64_t seed) {
    validate_dataset(train);
    if (clusters < 1) throw ConfigError("clusters must be >= 1");
    if (clusters > train.size())
        throw ConfigError("clusters (" + std::to_string(clusters) + ") exceed training rows (" +
                          std::to_string(train.size()) + ")");

    RbfnModel model;
    model.feature_count = train.feature_count;
    model.clusters = clusters;
    model.class_count = train.class_count;
    model.centers = kmeans_centers(train, clusters, seed);
    model.widths.resize(clusters);
    for (int c = 0; c < clusters; ++c) {
        double sum = 0.0;
        for (int o = 0; o < clusters; ++o) {
            if (o == c) continue;
            sum += std::sqrt(squared_distance(
                {model.centers.data() + static_cast<size_t>(c) * model.feature_count,
                 static_cast<size_t>(model.feature_count)},
                {model.centers.data() + static_cast<size_t>(o) * model.feature_count,
                 static_cast<size_t>(model.feature_count)}));
        }
        double width = clusters > 1 ? sum / (clusters - 1) : 1.0;
        model.widths[c] = std::max(width, 1e-8);
    }

    const int m = train.size();
    Eigen::MatrixXd phi(m, clusters);
    std::vector<double> acts(clusters);
    for (int i = 0; i < m; ++i) {
        rbf_activations(model, train.row(i), acts.data());
        for (int c = 0; c < clusters; ++c) phi(i, c) = acts[c];
    }
    Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(m, train.class_count);
    for (int i = 0; i < m; ++i) targets(i, train.labels[i]) = 1.0;

    Eigen::MatrixXd gram = phi.transpose() * phi;
    gram.diagonal().array() += 1e-8;
    Eigen::MatrixXd weights = gram.ldlt().solve(phi.transpose() * targets);
    if (!weights.allFinite()) throw NumericError("RBFN weight solve produced non-finite values");

    model.weights.resize(static_cast<size_t>(clusters) * train.class_count);
    for (int c = 0; c < clusters; ++c)
        for (int k = 0; k < train.class_count; ++k)
            model.weights[static_cast<size_t>(k) * clusters + c] = weights(c, k);
    return model;
}

int predict(const RbfnModel& model, std::span<const double> query) {
    std::vector<double> acts(model.clusters);
    rbf_activations(model, query, acts.data());
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < model.class_count; ++k) {
        const double* w = model.weights.data() + static_cast<size_t>(k) * model.clusters;
        double score = 0.0;
        for (int c = 0; c < model.clusters; ++c) score += w[c] * acts[c];
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }
    return best;
}

namespace {

double entropy(const std::vector<int>& counts, int total) {
    double h = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct TreeBuilder {
    const LabeledDataset& data;
    DecisionTree tree;

    int majority(const std::vector<int>& rows) const {
        std::vector<int> counts(data.class_count, 0);
        for (int r : rows) ++counts[data.labels[r]];
        return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    }

    bool pure(const std::vector<int>& rows) const {
        for (size_t i = 1; i < rows.size(); ++i)
            if (data.labels[rows[i]] != data.labels[rows[0]]) return false;
        return true;
    }

    // Best (feature, threshold) by gain ratio among positive-gain splits;
    // ties keep the earlier feature / lower threshold.
    bool find_split(const std::vector<int>& rows, int* feature, double* threshold) const {
        const int total = static_cast<int>(rows.size());
        std::vector<int> all_counts(data.class_count, 0);
        for (int r : rows) ++all_counts[data.labels[r]];
        const double base_entropy = entropy(all_counts, total);

        double best_ratio = 0.0;
        bool found = false;
        std::vector<std::pair<double, int>> sorted(rows.size());
        for (int f = 0; f < data.feature_count; ++f) {
            for (size_t i = 0; i < rows.size(); ++i)
                sorted[i] = {data.row(rows[i])[f], data.labels[rows[i]]};
            std::sort(sorted.begin(), sorted.end());

            std::vector<int> left_counts(data.class_count, 0);
            int left = 0;
            for (size_t i = 0; i + 1 < sorted.size(); ++i) {
                ++left_counts[sorted[i].second];
                ++left;
                if (sorted[i].first == sorted[i + 1].first) continue;
                int right = total - left;
                std::vector<int> right_counts(data.class_count);
                for (int c = 0; c < data.class_count; ++c)
                    right_counts[c] = all_counts[c] - left_counts[c];
                double cond = (static_cast<double>(left) / total) * entropy(left_counts, left) +
                              (static_cast<double>(right) / total) * entropy(right_counts, right);
                double gain = base_entropy - cond;
                if (gain <= 1e-12) continue;
                double pl = static_cast<double>(left) / total;
                double split_info = -(pl * std::log2(pl) + (1 - pl) * std::log2(1 - pl));
                double ratio = gain / split_info;
                if (ratio > best_ratio + 1e-12) {
                    best_ratio = ratio;
                    *feature = f;
                    *threshold = (sorted[i].first + sorted[i + 1].first) / 2.0;
                    found = true;
                }
            }
        }
        return found;
    }

    int build(const std::vector<int>& rows) {
        int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[id].label = majority(rows);
        if (rows.size() < 2 || pure(rows)) return id;

        int feature;
        double threshold;
        if (!find_split(rows, &feature, &threshold)) return id;

        std::vector<int> left, right;
        for (int r : rows)
            (data.row(r)[feature] <= threshold ? left : right).push_back(r);
        int left_id = build(left);
        int right_id = build(right);
        tree.nodes[id].feature = feature;
        tree.nodes[id].threshold = threshold;
        tree.nodes[id].left = left_id;
        tree.nodes[id].right = right_id;
        return id;
    }
};

}  // namespace

DecisionTree train_decision_tree(const LabeledDataset& train) {
    validate_dataset(train);
    TreeBuilder builder{train, {}};
    std::vector<int> rows(train.size());
    std::iota(rows.begin(), rows.end(), 0);
    builder.build(rows);
    return builder.tree;
}

int DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    std::function<int(int)> walk = [&](int id) -> int {
        const Node& node = nodes[id];
        if (node.feature < 0) return 0;
        return 1 + std::max(walk(node.left), walk(node.right));
    };
    return walk(0);
}

int predict(const DecisionTree& tree, std::span<const double> query) {
    if (tree.nodes.empty()) throw DataError("empty decision tree");
    int id = 0;
    while (tree.nodes[id].feature >= 0)
        id = query[tree.nodes[id].feature] <= tree.nodes[id].threshold ? tree.nodes[id].left
                                                                       : tree.nodes[id].right;
    return tree.nodes[id].label;
}

const char* classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::j48: return "j48";
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::nb: return "nb";
        case ClassifierKind::rbfn: return "rbfn";
    }
    return "?";
}

ClassifierKind classifier_from_name(const std::string& name) {
    if (name == "j48") return ClassifierKind::j48;
    if (name == "knn") return ClassifierKind::knn;
    if (name == "nb") return ClassifierKind::nb;
    if (name == "rbfn") return ClassifierKind::rbfn;
    throw ConfigError("unknown classifier: " + name);
}

namespace {

LabeledDataset subset(const LabeledDataset& data, const std::vector<int>& rows) {
    LabeledDataset out;
    out.feature_count = data.feature_count;
    out.class_count = data.class_count;
    out.features.reserve(rows.size() * data.feature_count);
    for (int r : rows) {
        out.document_ids.push_back(data.document_ids.empty() ? std::string()
                                                             : data.document_ids[r]);
        auto row = data.row(r);
        out.features.insert(out.features.end(), row.begin(), row.end());
        out.labels.push_back(data.labels[r]);
    }
    return out;
}

}  // namespace

CVReport cross_validate_with(const LabeledDataset& data, const PredictorFactory& factory,
                             std::string classifier_label, int folds, uint64_t seed) {
    validate_dataset(data);
    if (folds < 2) throw ConfigError("folds must be >= 2");

    std::vector<int> class_sizes(data.class_count, 0);
    for (int label : data.labels) ++class_sizes[label];
    int min_class = *std::min_element(class_sizes.begin(), class_sizes.end());
    if (min_class < 2)
        throw DataError("stratified folds need at least 2 rows per class");
    int folds_used = std::min(folds, min_class);

    // stratified assignment: per class, shuffled rows are dealt round-robin
    CVReport report;
    report.classifier = std::move(classifier_label);
    report.class_count = data.class_count;
    report.folds_used = folds_used;
    report.seed = seed;
    report.fold_of.assign(data.size(), 0);
    std::mt19937_64 rng(derive_seed(seed, "cv-split"));
    for (int c = 0; c < data.class_count; ++c) {
        std::vector<int> rows;
        for (int i = 0; i < data.size(); ++i)
            if (data.labels[i] == c) rows.push_back(i);
        std::shuffle(rows.begin(), rows.end(), rng);
        for (size_t j = 0; j < rows.size(); ++j)
            report.fold_of[rows[j]] = static_cast<int>(j % folds_used);
    }

    report.confusion.assign(static_cast<size_t>(data.class_count) * data.class_count, 0);
    int total_correct = 0;
    for (int fold = 0; fold < folds_used; ++fold) {
        std::vector<int> train_rows, test_rows;
        for (int i = 0; i < data.size(); ++i)
            (report.fold_of[i] == fold ? test_rows : train_rows).push_back(i);
        LabeledDataset train = subset(data, train_rows);
        auto predictor = factory(train, derive_seed(seed, "fold:" + std::to_string(fold)));
        int correct = 0;
        for (int r : test_rows) {
            int predicted = predictor(data.row(r));
            if (predicted == data.labels[r]) ++correct;
            ++report.confusion[static_cast<size_t>(data.labels[r]) * data.class_count + predicted];
        }
        total_correct += correct;
        report.fold_accuracies.push_back(static_cast<double>(correct) / test_rows.size());
    }
    report.accuracy = static_cast<double>(total_correct) / data.size();
    return report;
}

CVReport cross_validate(const LabeledDataset& data, const ClassifierSpec& spec, int folds,
                        uint64_t seed) {
    PredictorFactory factory;
    switch (spec.kind) {
        case ClassifierKind::knn:
            factory = [&spec](const LabeledDataset& train, uint64_t) {
                auto shared = std::make_shared<LabeledDataset>(train);
                int k = spec.knn_k;
                return [shared, k](std::span<const double> q) {
                    return knn_classify(*shared, q, k);
                };
            };
            break;
        case ClassifierKind::nb:
            factory = [](const LabeledDataset& train, uint64_t) {
                auto model = std::make_shared<NaiveBayesModel>(train_naive_bayes(train));
                return [model](std::span<const double> q) { return predict(*model, q); };
            };
            break;
        case ClassifierKind::rbfn:
            factory = [&spec](const LabeledDataset& train, uint64_t fold_seed) {
                int clusters = std::min(spec.rbfn_clusters, train.size());
                auto model = std::make_shared<RbfnModel>(train_rbfn(train, clusters, fold_seed));
                return [model](std::span<const double> q) { return predict(*model, q); };
            };
            break;
        case ClassifierKind::j48:
            factory = [](const LabeledDataset& train, uint64_t) {
                auto model = std::make_shared<DecisionTree>(train_decision_tree(train));
                return [model](std::span<const double> q) { return predict(*model, q); };
            };
            break;
    }
    return cross_validate_with(data, factory, classifier_name(spec.kind), folds, seed);
}

}  // namespace textnet
