#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "textnet/corpus.hpp"
#include "textnet/csv.hpp"
#include "textnet/embedding.hpp"
#include "textnet/error.hpp"
#include "textnet/metrics.hpp"
#include "textnet/pipeline.hpp"
#include "textnet/seeds.hpp"
#include "textnet/svg.hpp"

namespace textnet {

namespace fs = std::filesystem;

namespace {

std::string read_bytes_or_stage(const fs::path& path, const std::string& stage_hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("missing artifact " + path.string() + " — rerun `" + stage_hint +
                        "` first");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << bytes;
}

struct RankedWord {
    std::string lemma;
    double value;
};

// Eligible words for one metric, most extreme first (same ordering rule as
// the rank profiles).
std::vector<RankedWord> ranked_words(const NodeMetricTable& table, Metric metric,
                                     bool descending, int min_frequency) {
    struct Entry {
        double value;
        int frequency;
        const std::string* lemma;
    };
    std::vector<Entry> entries;
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const NodeMetrics& row = table.rows[i];
        double value;
        switch (metric) {
            case Metric::degree: value = row.degree; break;
            case Metric::betweenness: value = row.betweenness; break;
            case Metric::avg_shortest_path:
                if (!row.avg_shortest_path) continue;
                value = *row.avg_shortest_path;
                break;
            case Metric::intermittency:
                if (!row.intermittency || row.frequency < min_frequency) continue;
                value = *row.intermittency;
                break;
        }
        entries.push_back({value, row.frequency, &table.lemmas[i]});
    }
    std::sort(entries.begin(), entries.end(), [descending](const Entry& a, const Entry& b) {
        if (a.value != b.value) return descending ? a.value > b.value : a.value < b.value;
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return *a.lemma < *b.lemma;
    });
    std::vector<RankedWord> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back({*e.lemma, e.value});
    return out;
}

void render_rank_plot(const std::vector<RankedWord>& words, const std::string& title,
                      const fs::path& path) {
    const double width = 820, height = 420, margin = 50;
    SvgCanvas canvas(width, height);
    canvas.text(margin, 20, title, 13.0, "#111111");
    if (!words.empty()) {
        double vmin = words.front().value, vmax = words.front().value;
        for (const auto& w : words) {
            vmin = std::min(vmin, w.value);
            vmax = std::max(vmax, w.value);
        }
        double span = vmax > vmin ? vmax - vmin : 1.0;
        const int n = static_cast<int>(words.size());
        canvas.line(margin, height - margin, width - 20, height - margin, "#888888");
        canvas.line(margin, height - margin, margin, 30, "#888888");
        for (int i = 0; i < n; ++i) {
            double x = margin + (width - margin - 30) * (n == 1 ? 0.0 : i / double(n - 1));
            double y = height - margin -
                       (height - margin - 40) * ((words[i].value - vmin) / span);
            canvas.circle(x, y, 2.0, "#1f77b4");
            if (i < 20)
                canvas.text(x + 2, y - 4, words[i].lemma, 9.0, "#333333",
                            "transform=\"rotate(-40 " + std::to_string(x + 2) + " " +
                                std::to_string(y - 4) + ")\"");
        }
        canvas.text(width - 70, height - margin + 24, "rank", 10.0);
    }
    write_text(path, canvas.finish());
}

void render_heatmap(const DistanceMatrix& matrix, const std::string& title,
                    const fs::path& path) {
    const int m = matrix.size();
    const double cell = std::max(2.0, std::min(10.0, 600.0 / std::max(1, m)));
    const double margin = 40;
    SvgCanvas canvas(margin * 2 + m * cell, margin * 2 + m * cell + 10);
    canvas.text(margin, 22, title, 13.0, "#111111");
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            canvas.rect(margin + j * cell, margin + i * cell, cell, cell,
                        SvgCanvas::heat_color(matrix.at(i, j)));
    write_text(path, canvas.finish());
}

void render_scatter(const Embedding& embedding, const std::vector<std::string>& authors,
                    const std::vector<std::string>& author_names, const std::string& title,
                    const fs::path& path) {
    const double size = 540, margin = 45, legend_width = 150;
    SvgCanvas canvas(size + legend_width, size);
    canvas.text(margin, 22, title, 13.0, "#111111");
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    for (int i = 0; i < embedding.size(); ++i) {
        xmin = std::min(xmin, embedding.at(i, 0));
        xmax = std::max(xmax, embedding.at(i, 0));
        ymin = std::min(ymin, embedding.at(i, 1));
        ymax = std::max(ymax, embedding.at(i, 1));
    }
    double xspan = xmax > xmin ? xmax - xmin : 1.0;
    double yspan = ymax > ymin ? ymax - ymin : 1.0;
    std::map<std::string, int> author_idx;
    for (size_t a = 0; a < author_names.size(); ++a)
        author_idx[author_names[a]] = static_cast<int>(a);
    for (int i = 0; i < embedding.size(); ++i) {
        double x = margin + (size - 2 * margin) * ((embedding.at(i, 0) - xmin) / xspan);
        double y = size - margin - (size - 2 * margin) * ((embedding.at(i, 1) - ymin) / yspan);
        canvas.circle(x, y, 4.0, SvgCanvas::palette_color(author_idx[authors[i]]));
        canvas.text(x + 5, y + 3, std::to_string(i), 8.0, "#555555");
    }
    for (size_t a = 0; a < author_names.size(); ++a) {
        double y = 40 + 16.0 * a;
        canvas.circle(size + 14, y - 3, 4.0, SvgCanvas::palette_color(static_cast<int>(a)));
        canvas.text(size + 24, y, author_names[a], 10.0);
    }
    write_text(path, canvas.finish());
}

void render_accuracy_bars(const std::vector<std::vector<std::string>>& summary_rows,
                          const fs::path& path) {
    // summary_rows: header + one row per configuration
    const auto& header = summary_rows[0];
    const int groups = static_cast<int>(summary_rows.size()) - 1;
    const int bars = static_cast<int>(header.size()) - 1;
    const double bar_w = 26, gap = 40, margin = 50, height = 320;
    const double width = margin * 2 + groups * (bars * bar_w + gap);
    SvgCanvas canvas(width, height + 60);
    canvas.text(margin, 22, "cross-validated accuracy", 13.0, "#111111");
    canvas.line(margin, height, width - 20, height, "#888888");
    for (double tick = 0.0; tick <= 1.0001; tick += 0.25) {
        double y = height - tick * (height - 60);
        canvas.line(margin - 4, y, margin, y, "#888888");
        canvas.text(8, y + 3, csv::format_double(tick, 3), 9.0);
    }
    for (int g = 0; g < groups; ++g) {
        const auto& row = summary_rows[g + 1];
        double gx = margin + g * (bars * bar_w + gap);
        for (int b = 0; b < bars; ++b) {
            if (row[b + 1].empty()) continue;
            double acc = csv::parse_double(row[b + 1]);
            double h = acc * (height - 60);
            canvas.rect(gx + b * bar_w + 2, height - h, bar_w - 4, h,
                        SvgCanvas::palette_color(b));
            canvas.text(gx + b * bar_w + 3, height - h - 4, csv::format_double(acc, 3), 8.0);
        }
        canvas.text(gx, height + 16, row[0], 10.0);
    }
    for (int b = 0; b < bars; ++b) {
        double x = margin + b * 70;
        canvas.rect(x, height + 28, 10, 10, SvgCanvas::palette_color(b));
        canvas.text(x + 14, height + 37, header[b + 1], 10.0);
    }
    write_text(path, canvas.finish());
}

}  // namespace

void export_plots(const RunConfig& config, const std::string& only_document) {
    config.validate();
    fs::path outdir(config.output_dir);
    fs::path plots = outdir / "plots";
    fs::create_directories(plots);

    CorpusManifest manifest = read_manifest(config.manifest);
    std::vector<std::string> doc_ids, authors;
    for (const auto& e : manifest.entries) {
        doc_ids.push_back(e.document_id);
        authors.push_back(e.author);
    }
    std::vector<std::string> author_names = authors;
    std::sort(author_names.begin(), author_names.end());
    author_names.erase(std::unique(author_names.begin(), author_names.end()),
                       author_names.end());
    if (!only_document.empty() &&
        std::find(doc_ids.begin(), doc_ids.end(), only_document) == doc_ids.end())
        throw DataError("unknown document id: " + only_document);

    // per-document ranked metric values, top 20 labeled in the rendering
    for (Metric metric : config.metrics) {
        for (const auto& doc_id : doc_ids) {
            if (!only_document.empty() && doc_id != only_document) continue;
            fs::path table_file = outdir / "metrics" / (doc_id + ".csv");
            read_bytes_or_stage(table_file, "run");
            NodeMetricTable table = read_metric_table(table_file, doc_id);
            auto words = ranked_words(table, metric, config.rank_descending(metric),
                                      config.intermittency_min_frequency);
            std::ostringstream csv_out;
            csv_out << "rank,lemma,value\n";
            for (size_t r = 0; r < words.size(); ++r) {
                csv::write_row(csv_out, {std::to_string(r + 1), words[r].lemma,
                                         csv::format_double(words[r].value, 15)});
            }
            std::string base = std::string("rank_") + metric_name(metric) + "_" + doc_id;
            write_text(plots / (base + ".csv"), csv_out.str());
            render_rank_plot(words, std::string(metric_name(metric)) + " — " + doc_id,
                             plots / (base + ".svg"));
        }
    }

    // distance heatmaps (network metrics plus TF-IDF when present)
    std::vector<std::string> matrix_labels;
    for (Metric metric : config.metrics) matrix_labels.push_back(metric_name(metric));
    if (fs::exists(outdir / "dist_tfidf.csv")) matrix_labels.push_back("tfidf");
    for (const auto& label : matrix_labels) {
        fs::path dist_file = outdir / ("dist_" + label + ".csv");
        std::string stage = label == "tfidf" ? "baseline" : "run";
        std::string bytes = read_bytes_or_stage(dist_file, stage);
        write_text(plots / ("heatmap_" + label + ".csv"), bytes);
        DistanceMatrix matrix = parse_distance_csv(bytes);
        render_heatmap(matrix, label + " distances", plots / ("heatmap_" + label + ".svg"));

        // dedicated 2-dimensional MDS for the visual mapping
        Embedding plane = mds(matrix, 2, derive_seed(config.seed, "plot2d:" + label));
        std::ostringstream scatter_csv;
        scatter_csv << "document_id,author,x,y\n";
        std::map<std::string, std::string> author_of;
        for (size_t i = 0; i < doc_ids.size(); ++i) author_of[doc_ids[i]] = authors[i];
        std::vector<std::string> plane_authors;
        for (int i = 0; i < plane.size(); ++i) {
            auto it = author_of.find(plane.document_ids[i]);
            std::string author = it == author_of.end() ? "?" : it->second;
            plane_authors.push_back(author);
            csv::write_row(scatter_csv, {plane.document_ids[i], author,
                                         csv::format_double(plane.at(i, 0), 15),
                                         csv::format_double(plane.at(i, 1), 15)});
        }
        write_text(plots / ("scatter_" + label + ".csv"), scatter_csv.str());
        render_scatter(plane, plane_authors, author_names, label + " — 2D MDS",
                       plots / ("scatter_" + label + ".svg"));
    }

    // accuracy bars from the summary grid
    std::string summary_bytes = read_bytes_or_stage(outdir / "summary.csv", "run or baseline");
    auto summary_rows = csv::parse(summary_bytes);
    if (summary_rows.size() < 2) throw DataError("summary.csv has no result rows — rerun `run`");
    std::ostringstream acc_csv;
    acc_csv << "configuration,classifier,accuracy\n";
    for (size_t i = 1; i < summary_rows.size(); ++i)
        for (size_t j = 1; j < summary_rows[i].size(); ++j)
            if (!summary_rows[i][j].empty())
                csv::write_row(acc_csv,
                               {summary_rows[i][0], summary_rows[0][j], summary_rows[i][j]});
    write_text(plots / "accuracy.csv", acc_csv.str());
    render_accuracy_bars(summary_rows, plots / "accuracy.svg");
}

}  // namespace textnet
