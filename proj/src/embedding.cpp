#include "textnet/embedding.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "textnet/csv.hpp"
#include "textnet/error.hpp"
#include "textnet/seeds.hpp"

namespace textnet {

namespace {

using Eigen::MatrixXd;

void check_matrix(const DistanceMatrix& matrix) {
    const int m = matrix.size();
    if (static_cast<size_t>(m) * m != matrix.values.size())
        throw DataError("distance matrix is not square");
    for (int i = 0; i < m; ++i) {
        if (matrix.at(i, i) != 0.0) throw DataError("distance matrix diagonal must be zero");
        for (int j = i + 1; j < m; ++j)
            if (std::abs(matrix.at(i, j) - matrix.at(j, i)) > 1e-12)
                throw DataError("distance matrix must be symmetric");
    }
}

double stress1(const MatrixXd& delta, const MatrixXd& coords) {
    const int m = static_cast<int>(delta.rows());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            double d = (coords.row(i) - coords.row(j)).norm();
            double diff = delta(i, j) - d;
            num += diff * diff;
            den += d * d;
        }
    }
    if (den <= 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

// One Guttman transform step: X' = B(X) X / M.
MatrixXd guttman_step(const MatrixXd& delta, const MatrixXd& coords) {
    const int m = static_cast<int>(delta.rows());
    MatrixXd b = MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            double d = (coords.row(i) - coords.row(j)).norm();
            double v = d > 0.0 ? -delta(i, j) / d : 0.0;
            b(i, j) = v;
            b(j, i) = v;
            b(i, i) -= v;
            b(j, j) -= v;
        }
    }
    return b * coords / static_cast<double>(m);
}

MatrixXd run_smacof(const MatrixXd& delta, MatrixXd coords, const MdsOptions& options,
                    double* final_stress) {
    double prev = stress1(delta, coords);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        MatrixXd next = guttman_step(delta, coords);
        double cur = stress1(delta, next);
        if (!std::isfinite(cur)) throw NumericError("MDS stress became non-finite");
        coords = std::move(next);
        if (std::abs(prev - cur) < options.tolerance * std::max(prev, 1e-15)) {
            prev = cur;
            break;
        }
        prev = cur;
    }
    *final_stress = prev;
    return coords;
}

// Torgerson double centering: eigen-decompose -J D^2 J / 2 and keep the top
// positive components.
MatrixXd classical_start(const MatrixXd& delta, int dims) {
    const int m = static_cast<int>(delta.rows());
    MatrixXd sq = delta.array().square();
    MatrixXd j = MatrixXd::Identity(m, m) - MatrixXd::Constant(m, m, 1.0 / m);
    MatrixXd gram = -0.5 * j * sq * j;
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(gram);
    MatrixXd coords = MatrixXd::Zero(m, dims);
    // eigenvalues come back ascending
    for (int d = 0; d < dims; ++d) {
        int idx = m - 1 - d;
        if (idx < 0) break;
        double lambda = solver.eigenvalues()(idx);
        if (lambda <= 0.0) break;
        coords.col(d) = solver.eigenvectors().col(idx) * std::sqrt(lambda);
    }
    return coords;
}

MatrixXd random_start(int m, int dims, double scale, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-0.5, 0.5);
    MatrixXd coords(m, dims);
    for (int i = 0; i < m; ++i)
        for (int d = 0; d < dims; ++d) coords(i, d) = uniform(rng) * scale;
    return coords;
}

MatrixXd to_eigen(const DistanceMatrix& matrix) {
    const int m = matrix.size();
    MatrixXd delta(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) delta(i, j) = matrix.at(i, j);
    return delta;
}

Embedding make_embedding(const DistanceMatrix& matrix, const MatrixXd& coords, int dims,
                         double stress) {
    Embedding e;
    e.document_ids = matrix.document_ids;
    e.dims = dims;
    e.stress = stress;
    e.coords.resize(static_cast<size_t>(matrix.size()) * dims);
    for (int i = 0; i < matrix.size(); ++i)
        for (int d = 0; d < dims; ++d)
            e.coords[static_cast<size_t>(i) * dims + d] = coords(i, d);
    return e;
}

// Runs SMACOF from every start and keeps the lowest-stress final
// configuration. Starts listed first win ties.
Embedding best_of(const DistanceMatrix& matrix, const MatrixXd& delta,
                  const std::vector<MatrixXd>& starts, int dims, const MdsOptions& options,
                  bool include_raw_starts) {
    double best_stress = std::numeric_limits<double>::infinity();
    MatrixXd best_coords;
    for (const MatrixXd& start : starts) {
        if (include_raw_starts) {
            double raw = stress1(delta, start);
            if (raw < best_stress) {
                best_stress = raw;
                best_coords = start;
            }
        }
        double stress = 0.0;
        MatrixXd coords = run_smacof(delta, start, options, &stress);
        if (stress < best_stress) {
            best_stress = stress;
            best_coords = std::move(coords);
        }
    }
    return make_embedding(matrix, best_coords, dims, best_stress);
}

}  // namespace

Embedding mds(const DistanceMatrix& matrix, int dims, uint64_t seed, const MdsOptions& options) {
    if (dims < 1) throw ConfigError("dims must be >= 1");
    check_matrix(matrix);
    const int m = matrix.size();
    if (m == 0) throw DataError("empty distance matrix");

    MatrixXd delta = to_eigen(matrix);
    double max_delta = delta.maxCoeff();
    if (max_delta == 0.0) {
        Embedding e = make_embedding(matrix, MatrixXd::Zero(m, dims), dims, 0.0);
        return e;
    }
    std::vector<MatrixXd> starts = {classical_start(delta, dims),
                                    random_start(m, dims, max_delta, seed)};
    return best_of(matrix, delta, starts, dims, options, false);
}

DimSearch choose_dim(const DistanceMatrix& matrix, double threshold, int max_dims,
                     uint64_t seed, const MdsOptions& options) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw ConfigError("elbow threshold must lie in (0,1)");
    if (max_dims < 1) throw ConfigError("max_dims must be >= 1");
    check_matrix(matrix);
    const int m = matrix.size();
    if (m == 0) throw DataError("empty distance matrix");

    MatrixXd delta = to_eigen(matrix);
    double max_delta = delta.maxCoeff();

    DimSearch result;
    if (max_delta == 0.0) {
        result.best = make_embedding(matrix, MatrixXd::Zero(m, 1), 1, 0.0);
        result.curve.points.push_back({1, 0.0});
        result.dims = 1;
        return result;
    }

    double stress_one = 0.0;
    Embedding previous;
    for (int dims = 1; dims <= max_dims; ++dims) {
        std::vector<MatrixXd> starts;
        starts.push_back(classical_start(delta, dims));
        starts.push_back(random_start(m, dims, max_delta, splitmix64(seed + dims)));
        bool include_raw = false;
        if (dims > 1) {
            // previous solution padded with a zero coordinate: same distances,
            // so keeping it as a candidate makes the curve non-increasing
            MatrixXd padded = MatrixXd::Zero(m, dims);
            for (int i = 0; i < m; ++i)
                for (int d = 0; d < dims - 1; ++d) padded(i, d) = previous.at(i, d);
            starts.push_back(std::move(padded));
            include_raw = true;
        }
        Embedding e = best_of(matrix, delta, starts, dims, options, include_raw);
        result.curve.points.push_back({dims, e.stress});
        previous = e;
        if (dims == 1) stress_one = e.stress;
        if (e.stress <= threshold * stress_one) {
            result.best = std::move(e);
            result.dims = dims;
            result.threshold_met = true;
            return result;
        }
    }
    result.best = std::move(previous);
    result.dims = max_dims;
    result.threshold_met = false;
    return result;
}

FeatureMatrix combine(const std::vector<Embedding>& embeddings) {
    if (embeddings.empty()) throw DataError("no embeddings to combine");
    FeatureMatrix features;
    features.document_ids = embeddings[0].document_ids;
    for (const auto& e : embeddings) {
        if (e.document_ids != features.document_ids)
            throw DataError("embeddings disagree on document ids or order");
        features.width += e.dims;
    }
    const int m = static_cast<int>(features.document_ids.size());
    features.values.resize(static_cast<size_t>(m) * features.width);
    for (int i = 0; i < m; ++i) {
        size_t col = 0;
        for (const auto& e : embeddings)
            for (int d = 0; d < e.dims; ++d)
                features.values[static_cast<size_t>(i) * features.width + col++] = e.at(i, d);
    }
    return features;
}

void write_embedding_csv(const Embedding& embedding, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write embedding: " + path.string());
    std::vector<std::string> header = {"document_id"};
    for (int d = 1; d <= embedding.dims; ++d) header.push_back("x" + std::to_string(d));
    csv::write_row(out, header);
    for (int i = 0; i < embedding.size(); ++i) {
        std::vector<std::string> row = {embedding.document_ids[i]};
        for (int d = 0; d < embedding.dims; ++d)
            row.push_back(csv::format_double(embedding.at(i, d)));
        csv::write_row(out, row);
    }
}

Embedding read_embedding_csv(const std::filesystem::path& path) {
    auto rows = csv::read(path);
    if (rows.empty() || rows[0].empty() || rows[0][0] != "document_id")
        throw DataError("bad embedding header: " + path.string());
    Embedding e;
    e.dims = static_cast<int>(rows[0].size()) - 1;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw DataError("ragged embedding row: " + path.string());
        e.document_ids.push_back(rows[i][0]);
        for (int d = 0; d < e.dims; ++d) e.coords.push_back(csv::parse_double(rows[i][d + 1]));
    }
    return e;
}

void write_stress_curve_csv(const StressCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write stress curve: " + path.string());
    out << "dimension,stress\n";
    for (const auto& [dims, stress] : curve.points)
        out << dims << ',' << csv::format_double(stress) << '\n';
}

}  // namespace textnet
