#include "ssa/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace ssa::plot {

namespace {

class Svg {
public:
    Svg(double w, double h) : w_(w), h_(h) {}

    void line(double x1, double y1, double x2, double y2, const char* stroke, double width = 1) {
        body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2) << "\" y2=\"" << fmt(y2)
              << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width) << "\"/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke, double width = 1) {
        body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width) << "\" points=\"";
        for (const auto& [x, y] : pts) body_ << fmt(x) << ',' << fmt(y) << ' ';
        body_ << "\"/>\n";
    }
    void circle(double cx, double cy, double r, const char* fill) {
        body_ << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r) << "\" fill=\"" << fill
              << "\"/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 11, const char* anchor = "start") {
        body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\"sans-serif\" font-size=\"" << size
              << "\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
    }
    void rect(double x, double y, double w, double h, const char* stroke) {
        body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
              << "\" fill=\"none\" stroke=\"" << stroke << "\"/>\n";
    }
    std::string str() const {
        std::ostringstream out;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w_) << "\" height=\"" << fmt(h_)
            << "\" viewBox=\"0 0 " << fmt(w_) << ' ' << fmt(h_) << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body_.str() << "</svg>\n";
        return out.str();
    }

private:
    static std::string fmt(double v) {
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(2);
        s << v;
        return s.str();
    }
    double w_, h_;
    std::ostringstream body_;
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    return colors[i % 7];
}

}  // namespace

std::string diagnostics_svg(const MultivariateSeries& series, const std::vector<IntervalRecord>& records) {
    const double width = 900, panel_h = 160, margin = 40;
    const Index p = series.dim();
    const Index T = series.length();
    Svg svg(width, margin + static_cast<double>(p) * panel_h);
    const double plot_w = width - 2 * margin;

    for (Index j = 0; j < p; ++j) {
        const double top = margin / 2 + static_cast<double>(j) * panel_h;
        const double ph = panel_h - 30;
        const auto col = series.values().col(j);
        const double lo = col.minCoeff(), hi = col.maxCoeff();
        const double span = hi > lo ? hi - lo : 1.0;
        auto xpos = [&](double t) { return margin + plot_w * (t - 1) / static_cast<double>(std::max<Index>(T - 1, 1)); };
        auto ypos = [&](double v) { return top + ph * (hi - v) / span; };

        svg.rect(margin, top, plot_w, ph, "#999");
        svg.text(margin, top - 4, series.names()[static_cast<std::size_t>(j)]);
        std::vector<std::pair<double, double>> pts;
        const Index stride = std::max<Index>(1, T / 2000);
        for (Index t = 0; t < T; t += stride) pts.emplace_back(xpos(static_cast<double>(t + 1)), ypos(col(t)));
        svg.polyline(pts, "#bbbbbb", 0.6);

        for (const auto& r : records) {
            if (r.channel != j + 1) continue;
            const double mid = 0.5 * static_cast<double>(r.start + r.end - 1);
            const double cx = xpos(mid), cy = ypos(r.mean);
            const double half_height = 0.5 * r.variance * ph / span;
            svg.line(cx, cy - half_height, cx, cy + half_height, "#d62728", 2);
            const double half_width = 0.5 * std::abs(r.autocov) * plot_w * static_cast<double>(r.end - r.start) /
                                      static_cast<double>(T);
            svg.line(cx - half_width, cy, cx + half_width, cy, "#1f77b4", 2);
            svg.circle(cx, cy, 3, "black");
            svg.line(xpos(static_cast<double>(r.start)), top, xpos(static_cast<double>(r.start)), top + ph, "#dddddd");
        }
    }
    return svg.str();
}

std::string screeplot_svg(const std::vector<std::pair<Index, double>>& points, const std::string& title) {
    const double width = 520, height = 360, margin = 50;
    Svg svg(width, height);
    svg.text(width / 2, 20, title, 13, "middle");
    if (points.empty()) return svg.str();
    double hi = 0, lo = 0;
    for (const auto& [i, v] : points) {
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    if (hi == lo) hi = lo + 1;
    const double pw = width - 2 * margin, ph = height - 2 * margin;
    const auto n = static_cast<double>(points.size());
    auto xpos = [&](double i) { return margin + pw * (n > 1 ? (i - 1) / (n - 1) : 0.5); };
    auto ypos = [&](double v) { return margin + ph * (hi - v) / (hi - lo); };
    svg.rect(margin, margin, pw, ph, "#999");
    std::vector<std::pair<double, double>> pts;
    for (const auto& [i, v] : points) pts.emplace_back(xpos(static_cast<double>(i)), ypos(v));
    svg.polyline(pts, "black", 1.5);
    for (const auto& [i, v] : points) {
        svg.circle(xpos(static_cast<double>(i)), ypos(v), 3.5, "black");
        svg.text(xpos(static_cast<double>(i)), height - margin + 16, std::to_string(i), 10, "middle");
    }
    svg.text(margin - 6, ypos(hi) + 4, num(hi), 10, "end");
    svg.text(margin - 6, ypos(lo) + 4, num(lo), 10, "end");
    return svg.str();
}

std::string experiment_svg(const std::vector<AggregateRow>& agg) {
    std::set<int> settings;
    std::set<Index> ks;
    std::set<int> methods;
    double tmin = 1e300, tmax = 0, dmax = 0;
    for (const auto& a : agg) {
        settings.insert(a.setting);
        ks.insert(a.K);
        methods.insert(static_cast<int>(a.method));
        tmin = std::min(tmin, static_cast<double>(a.T));
        tmax = std::max(tmax, static_cast<double>(a.T));
        if (!std::isnan(a.mean_d2_n)) dmax = std::max(dmax, a.mean_d2_n);
    }
    if (dmax <= 0) dmax = 1;
    const double pw = 240, ph = 180, gap = 60;
    const double width = gap + static_cast<double>(ks.size()) * (pw + gap) + 100;
    const double height = gap + static_cast<double>(settings.size()) * (ph + gap);
    Svg svg(width, height);

    std::size_t row = 0;
    for (int s : settings) {
        std::size_t colno = 0;
        for (Index K : ks) {
            const double left = gap + static_cast<double>(colno) * (pw + gap);
            const double top = gap / 2 + static_cast<double>(row) * (ph + gap);
            svg.rect(left, top, pw, ph, "#999");
            svg.text(left, top - 6, "Setting " + std::to_string(s) + ", K=" + std::to_string(K));
            auto xpos = [&](double T) {
                return tmax > tmin ? left + pw * (std::log(T) - std::log(tmin)) / (std::log(tmax) - std::log(tmin))
                                   : left + pw / 2;
            };
            auto ypos = [&](double d) { return top + ph * (1 - d / dmax); };
            std::size_t mi = 0;
            for (int m : methods) {
                std::vector<std::pair<double, double>> pts;
                for (const auto& a : agg)
                    if (a.setting == s && a.K == K && static_cast<int>(a.method) == m && !std::isnan(a.mean_d2_n))
                        pts.emplace_back(xpos(static_cast<double>(a.T)), ypos(a.mean_d2_n));
                std::sort(pts.begin(), pts.end());
                svg.polyline(pts, palette(mi), 1.5);
                ++mi;
            }
            svg.text(left - 4, top + 10, num(dmax), 9, "end");
            svg.text(left - 4, top + ph, "0", 9, "end");
            ++colno;
        }
        ++row;
    }
    std::size_t mi = 0;
    const double lx = width - 90;
    for (int m : methods) {
        svg.line(lx, 40 + 16.0 * static_cast<double>(mi), lx + 20, 40 + 16.0 * static_cast<double>(mi), palette(mi), 2);
        svg.text(lx + 26, 44 + 16.0 * static_cast<double>(mi), to_string(static_cast<Method>(m)));
        ++mi;
    }
    return svg.str();
}

}  // namespace ssa::plot
