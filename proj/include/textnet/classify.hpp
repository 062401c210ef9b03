#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace textnet {

struct LabeledDataset {
    std::vector<std::string> document_ids;
    int feature_count = 0;
    std::vector<double> features;  // M*feature_count row-major
    std::vector<int> labels;       // values in [0, class_count)
    int class_count = 0;

    int size() const { return static_cast<int>(labels.size()); }
    std::span<const double> row(int i) const {
        return {features.data() + static_cast<size_t>(i) * feature_count,
                static_cast<size_t>(feature_count)};
    }
};

void validate_dataset(const LabeledDataset& data);

// Majority label among the k Euclidean-nearest rows. Distance ties prefer
// the lower row index; vote ties go to the nearest neighbor whose label is
// among the tied classes.
int knn_classify(const LabeledDataset& train, std::span<const double> query, int k = 3);

// Gaussian Naive Bayes; class-conditional variances floored at 1e-9 times
// the feature's global variance, features constant over the whole training
// set are skipped as uninformative.
struct NaiveBayesModel {
    std::vector<double> log_priors;
    std::vector<double> means;      // class*feature_count + feature
    std::vector<double> variances;  // same layout; <=0 marks a skipped feature
    int feature_count = 0;
    int class_count = 0;
};
NaiveBayesModel train_naive_bayes(const LabeledDataset& train);
int predict(const NaiveBayesModel& model, std::span<const double> query);

// Radial basis function network: k-means centers, Gaussian activations with
// width = mean distance to the other centers (floored at 1e-8), and a linear
// output layer fitted to one-hot targets by ridge regression (1e-8).
struct RbfnModel {
    std::vector<double> centers;  // clusters*feature_count
    std::vector<double> widths;   // per center
    std::vector<double> weights;  // clusters*class_count, column-major by class
    int feature_count = 0;
    int clusters = 0;
    int class_count = 0;
};
RbfnModel train_rbfn(const LabeledDataset& train, int clusters, uint64_t seed);
int predict(const RbfnModel& model, std::span<const double> query);

// C4.5-style binary tree on numeric thresholds chosen by gain ratio; split
// candidates are midpoints of consecutive distinct feature values; a node
// becomes a leaf when pure, smaller than 2 rows, or without a positive-gain
// split.
struct DecisionTree {
    struct Node {
        int feature = -1;       // -1 marks a leaf
        double threshold = 0.0;
        int label = 0;          // leaf majority
        int left = -1, right = -1;
    };
    std::vector<Node> nodes;  // nodes[0] is the root

    int depth() const;
};
DecisionTree train_decision_tree(const LabeledDataset& train);
int predict(const DecisionTree& tree, std::span<const double> query);

enum class ClassifierKind { j48, knn, nb, rbfn };
const char* classifier_name(ClassifierKind kind);
ClassifierKind classifier_from_name(const std::string& name);

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::knn;
    int knn_k = 3;
    int rbfn_clusters = 8;
};

struct CVReport {
    std::string classifier;
    std::vector<double> fold_accuracies;
    double accuracy = 0.0;
    std::vector<int> confusion;  // class_count*class_count, rows = true class
    int class_count = 0;
    std::vector<int> fold_of;    // fold id per row of the dataset
    int folds_used = 0;
    uint64_t seed = 0;
};

// Seeded stratified k-fold cross-validation; folds are reduced (with the
// report recording the final count) when the smallest class has fewer rows
// than requested folds.
CVReport cross_validate(const LabeledDataset& data, const ClassifierSpec& spec, int folds,
                        uint64_t seed);

// Test / extension hook: any train-then-predict procedure can run through the
// same fold machinery.
using PredictorFactory = std::function<std::function<int(std::span<const double>)>(
    const LabeledDataset& train, uint64_t fold_seed)>;
CVReport cross_validate_with(const LabeledDataset& data, const PredictorFactory& factory,
                             std::string classifier_label, int folds, uint64_t seed);

}  // namespace textnet
