#include "textnet/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace textnet {

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

static std::string escape_text(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void SvgCanvas::rect(double x, double y, double w, double h, const std::string& fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
             "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::circle(double cx, double cy, double r, const std::string& fill) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
             "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
             "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(stroke_width) + "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& content, double size,
                     const std::string& fill, const std::string& extra_attrs) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
             "\" font-family=\"sans-serif\" fill=\"" + fill + "\"" +
             (extra_attrs.empty() ? "" : " " + extra_attrs) + ">" + escape_text(content) +
             "</text>\n";
}

std::string SvgCanvas::finish() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" "
           "width=\"" + num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " +
           num(width_) + " " + num(height_) + "\">\n<rect width=\"100%\" height=\"100%\" "
           "fill=\"white\"/>\n" + body_ + "</svg>\n";
}

std::string SvgCanvas::heat_color(double value) {
    value = std::clamp(value, 0.0, 1.0);
    // light yellow -> dark red
    int r = static_cast<int>(255 - 128 * value);
    int g = static_cast<int>(240 - 200 * value);
    int b = static_cast<int>(200 - 170 * value);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string SvgCanvas::palette_color(int index) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[index % 10];
}

}  // namespace textnet
