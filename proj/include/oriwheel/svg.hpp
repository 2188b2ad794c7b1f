#ifndef ORIWHEEL_SVG_HPP
#define ORIWHEEL_SVG_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oriwheel/errors.hpp"
#include "oriwheel/pattern.hpp"

namespace oriwheel {

namespace detail {

inline std::string fmt_mm(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    std::string s = os.str();
    // trim trailing zeros
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

} // namespace detail

/// Crease-pattern SVG, 1 user unit = 1 mm. Creases are grouped by kind into
/// <g> layers named "mountain", "valley" and "border"; mountains are solid,
/// valleys dashed, borders solid black. The y axis is flipped so the pattern
/// appears with +y up.
inline void export_pattern(const CreasePattern& pattern, const std::string& path) {
    if (path.empty()) throw IoError("empty SVG output path");
    Vec2 lo = pattern.bbox_min(), hi = pattern.bbox_max();
    const double pad = 5.0;
    double w = hi.x - lo.x + 2 * pad, h = hi.y - lo.y + 2 * pad;
    auto X = [&](double x) { return x - lo.x + pad; };
    auto Y = [&](double y) { return hi.y - y + pad; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt_mm(w)
        << "mm\" height=\"" << detail::fmt_mm(h) << "mm\" viewBox=\"0 0 "
        << detail::fmt_mm(w) << " " << detail::fmt_mm(h) << "\">\n";

    struct Layer {
        CreaseKind kind;
        const char* style;
    };
    const Layer layers[] = {
        {CreaseKind::Mountain, "stroke=\"#c62828\" stroke-width=\"0.5\" fill=\"none\""},
        {CreaseKind::Valley,
         "stroke=\"#1565c0\" stroke-width=\"0.5\" stroke-dasharray=\"3 2\" fill=\"none\""},
        {CreaseKind::Border, "stroke=\"#000000\" stroke-width=\"0.7\" fill=\"none\""},
    };
    for (const auto& layer : layers) {
        out << "  <g id=\"" << to_string(layer.kind) << "\">\n";
        for (const auto& e : pattern.edges) {
            if (e.kind != layer.kind) continue;
            const Vec2& p0 = pattern.vertices[e.v0];
            const Vec2& p1 = pattern.vertices[e.v1];
            out << "    <path d=\"M " << detail::fmt_mm(X(p0.x)) << " " << detail::fmt_mm(Y(p0.y))
                << " L " << detail::fmt_mm(X(p1.x)) << " " << detail::fmt_mm(Y(p1.y)) << "\" "
                << layer.style << "/>\n";
        }
        out << "  </g>\n";
    }
    out << "</svg>\n";

    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << out.str();
    if (!f) throw IoError("write failed: " + path);
}

/// Vertex and edge CSV dumps (id,x_mm,y_mm and v0,v1,kind).
inline void export_pattern_csv(const CreasePattern& pattern, const std::string& vertices_path,
                               const std::string& edges_path) {
    if (vertices_path.empty() || edges_path.empty()) throw IoError("empty CSV output path");
    std::ofstream fv(vertices_path);
    if (!fv) throw IoError("cannot open for writing: " + vertices_path);
    fv << "id,x_mm,y_mm\n";
    fv.precision(9);
    for (size_t i = 0; i < pattern.vertices.size(); ++i)
        fv << i << "," << pattern.vertices[i].x << "," << pattern.vertices[i].y << "\n";
    if (!fv) throw IoError("write failed: " + vertices_path);

    std::ofstream fe(edges_path);
    if (!fe) throw IoError("cannot open for writing: " + edges_path);
    fe << "v0,v1,kind\n";
    for (const auto& e : pattern.edges)
        fe << e.v0 << "," << e.v1 << "," << to_string(e.kind) << "\n";
    if (!fe) throw IoError("write failed: " + edges_path);
}

/// Minimal polyline plot (used for sinkage-vs-travel curves).
struct PlotSeries {
    std::string label;
    std::string color = "#1565c0";
    std::vector<Vec2> points;
};

inline void export_line_plot(const std::vector<PlotSeries>& series, const std::string& x_label,
                             const std::string& y_label, const std::string& path) {
    if (path.empty()) throw IoError("empty SVG output path");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    if (xmin > xmax) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

    const double W = 640, H = 400, m = 50;
    auto X = [&](double x) { return m + (x - xmin) / (xmax - xmin) * (W - 2 * m); };
    auto Y = [&](double y) { return H - m - (y - ymin) / (ymax - ymin) * (H - 2 * m); };

    std::ostringstream out;
    out.precision(4);
    out << std::fixed;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "  <rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
        << "  <g stroke=\"#444\" stroke-width=\"1\">\n"
        << "    <line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\""
        << H - m << "\"/>\n"
        << "    <line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m
        << "\"/>\n  </g>\n"
        << "  <text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" font-size=\"13\" text-anchor=\"middle\">"
        << x_label << "</text>\n"
        << "  <text x=\"14\" y=\"" << H / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 14 " << H / 2 << ")\">" << y_label << "</text>\n";
    int li = 0;
    for (const auto& s : series) {
        out << "  <polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : s.points) out << X(p.x) << "," << Y(p.y) << " ";
        out << "\"/>\n";
        out << "  <text x=\"" << W - m - 4 << "\" y=\"" << m + 16 * li << "\" font-size=\"12\" "
            << "text-anchor=\"end\" fill=\"" << s.color << "\">" << s.label << "</text>\n";
        ++li;
    }
    out << "</svg>\n";

    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << out.str();
    if (!f) throw IoError("write failed: " + path);
}

} // namespace oriwheel

#endif // ORIWHEEL_SVG_HPP
