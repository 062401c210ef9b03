#pragma once

#include <string>

namespace textnet {

// Tiny static-SVG builder for the plot exports. Shapes are appended in call
// order; no layout logic beyond what the callers compute.
class SvgCanvas {
public:
    SvgCanvas(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill);
    void circle(double cx, double cy, double r, const std::string& fill);
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0);
    void text(double x, double y, const std::string& content, double size = 10.0,
              const std::string& fill = "#333333", const std::string& extra_attrs = "");

    std::string finish() const;

    // Color helpers shared by the exports.
    static std::string heat_color(double value);         // 0 (light) .. 1 (dark)
    static std::string palette_color(int index);         // categorical palette

private:
    double width_, height_;
    std::string body_;
};

}  // namespace textnet
