#include "qimpc/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qimpc {

namespace {

constexpr double kW = 860, kH = 520;
constexpr double kLeft = 72, kRight = 24, kTop = 44, kBottom = 52;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                          "#d62728", "#9467bd", "#8c564b"};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct Series {
    std::string label;
    std::vector<double> mean;
    std::vector<double> sdev;  // empty when only one seed
};

struct Figure {
    std::string title;
    std::string y_label;
    bool log_scale = false;
    std::vector<Series> series;
};

// mean and (population) standard deviation across seeds, per step
Series reduce(const std::string& label,
              const std::vector<std::vector<double>>& per_seed) {
    Series s;
    s.label = label;
    const std::size_t steps = per_seed.front().size();
    s.mean.resize(steps, 0.0);
    for (const auto& v : per_seed) {
        for (std::size_t k = 0; k < steps; ++k) s.mean[k] += v[k];
    }
    for (double& m : s.mean) m /= static_cast<double>(per_seed.size());
    if (per_seed.size() > 1) {
        s.sdev.assign(steps, 0.0);
        for (const auto& v : per_seed) {
            for (std::size_t k = 0; k < steps; ++k) {
                const double d = v[k] - s.mean[k];
                s.sdev[k] += d * d;
            }
        }
        for (double& d : s.sdev) {
            d = std::sqrt(d / static_cast<double>(per_seed.size()));
        }
    }
    return s;
}

void render(const Figure& fig, const std::filesystem::path& path) {
    const std::size_t steps = fig.series.front().mean.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double pos_floor = std::numeric_limits<double>::infinity();
    for (const Series& s : fig.series) {
        for (std::size_t k = 0; k < steps; ++k) {
            const double d = s.sdev.empty() ? 0.0 : s.sdev[k];
            lo = std::min(lo, s.mean[k] - d);
            hi = std::max(hi, s.mean[k] + d);
            if (s.mean[k] > 0.0) pos_floor = std::min(pos_floor, s.mean[k]);
        }
    }
    if (!std::isfinite(pos_floor)) pos_floor = 1e-12;
    const double log_clamp = pos_floor * 1e-3;
    const auto tf = [&](double v) {
        return fig.log_scale ? std::log10(std::max(v, log_clamp)) : v;
    };
    double ylo = tf(lo), yhi = tf(hi);
    if (fig.log_scale) {
        ylo = tf(std::max(lo, log_clamp));
    }
    if (!(yhi > ylo)) {
        const double pad = std::max(1.0, std::abs(yhi));
        ylo -= pad;
        yhi += pad;
    } else {
        const double pad = 0.05 * (yhi - ylo);
        ylo -= pad;
        yhi += pad;
    }
    const double xmax = steps > 1 ? static_cast<double>(steps - 1) : 1.0;
    const auto px = [&](double k) {
        return kLeft + (kW - kLeft - kRight) * (k / xmax);
    };
    const auto py = [&](double v) {
        return kH - kBottom - (kH - kTop - kBottom) * ((tf(v) - ylo) / (yhi - ylo));
    };
    const auto py_t = [&](double t) {
        return kH - kBottom - (kH - kTop - kBottom) * ((t - ylo) / (yhi - ylo));
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
        << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
        << "\">\n";
    out << "<!-- series data (step, mean[, sdev]) per series\n";
    for (const Series& s : fig.series) {
        out << s.label << ":";
        for (std::size_t k = 0; k < steps; ++k) {
            out << ' ' << fmt(s.mean[k]);
            if (!s.sdev.empty()) out << '/' << fmt(s.sdev[k]);
        }
        out << '\n';
    }
    out << "-->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << fig.title << "</text>\n";

    // axes and ticks
    out << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">"
        << "<path d=\"M" << kLeft << ' ' << kTop << " V" << kH - kBottom << " H"
        << kW - kRight << "\"/></g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int t = 0; t <= 5; ++t) {
        const double k = xmax * t / 5.0;
        out << "<text x=\"" << fmt(px(k), "%.2f") << "\" y=\"" << kH - kBottom + 16
            << "\" text-anchor=\"middle\">" << fmt(k, "%.4g") << "</text>\n";
        out << "<line x1=\"" << fmt(px(k), "%.2f") << "\" y1=\"" << kH - kBottom
            << "\" x2=\"" << fmt(px(k), "%.2f") << "\" y2=\"" << kH - kBottom + 4
            << "\" stroke=\"#444\"/>\n";
    }
    for (int t = 0; t <= 5; ++t) {
        const double yt = ylo + (yhi - ylo) * t / 5.0;
        const double label = fig.log_scale ? std::pow(10.0, yt) : yt;
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py_t(yt) + 4, "%.2f")
            << "\" text-anchor=\"end\">" << fmt(label, "%.3g") << "</text>\n";
        out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << fmt(py_t(yt), "%.2f")
            << "\" x2=\"" << kLeft << "\" y2=\"" << fmt(py_t(yt), "%.2f")
            << "\" stroke=\"#444\"/>\n";
    }
    out << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 12
        << "\" text-anchor=\"middle\">iteration</text>\n";
    out << "<text x=\"16\" y=\"" << (kTop + kH - kBottom) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (kTop + kH - kBottom) / 2 << ")\">" << fig.y_label << "</text>\n";
    out << "</g>\n";

    for (std::size_t si = 0; si < fig.series.size(); ++si) {
        const Series& s = fig.series[si];
        const char* color = kPalette[si % 6];
        if (!s.sdev.empty()) {
            out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" "
                   "stroke=\"none\" points=\"";
            for (std::size_t k = 0; k < steps; ++k) {
                out << fmt(px(static_cast<double>(k)), "%.2f") << ','
                    << fmt(py(s.mean[k] + s.sdev[k]), "%.2f") << ' ';
            }
            for (std::size_t k = steps; k-- > 0;) {
                out << fmt(px(static_cast<double>(k)), "%.2f") << ','
                    << fmt(py(s.mean[k] - s.sdev[k]), "%.2f") << ' ';
            }
            out << "\"/>\n";
        }
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t k = 0; k < steps; ++k) {
            out << fmt(px(static_cast<double>(k)), "%.2f") << ','
                << fmt(py(s.mean[k]), "%.2f") << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << kW - kRight - 8 << "\" y=\""
            << kTop + 16 + 16 * static_cast<double>(si)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"12\" fill=\""
            << color << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("plots: cannot write " + tmp.string());
        f << out.str();
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw std::runtime_error("plots: rename failed for " + path.string() +
                                 ": " + ec.message());
    }
}

}  // namespace

void emit_plots(const std::vector<TrajectoryLog>& logs,
                const std::filesystem::path& out_dir,
                const std::string& experiment, const PlotOptions& opts) {
    std::vector<const TrajectoryLog*> ok;
    for (const auto& l : logs) {
        if (!l.steps.empty()) ok.push_back(&l);
    }
    if (ok.empty()) {
        throw std::invalid_argument("emit_plots: needs at least one non-empty log");
    }
    std::size_t steps = ok.front()->steps.size();
    for (const auto* l : ok) steps = std::min(steps, l->steps.size());
    const int s_dim = ok.front()->state_dim;
    const int m_dim = ok.front()->control_dim;

    const auto column = [&](auto&& getter) {
        std::vector<std::vector<double>> per_seed;
        for (const auto* l : ok) {
            std::vector<double> v(steps);
            for (std::size_t k = 0; k < steps; ++k) v[k] = getter(l->steps[k]);
            per_seed.push_back(std::move(v));
        }
        return per_seed;
    };

    Figure controls{experiment + ": control signals", "control", false, {}};
    for (int i = 0; i < m_dim; ++i) {
        controls.series.push_back(reduce(
            "u_" + std::to_string(i + 1),
            column([i](const TrajectoryStep& r) { return r.u_clip[i]; })));
    }
    Figure states{experiment + ": state trajectories", "state", false, {}};
    for (int i = 0; i < s_dim; ++i) {
        states.series.push_back(
            reduce("x_" + std::to_string(i + 1),
                   column([i](const TrajectoryStep& r) { return r.x[i]; })));
    }
    Figure loss{experiment + ": loss", "stage loss", opts.loss_log_scale, {}};
    loss.series.push_back(reduce(
        "loss", column([](const TrajectoryStep& r) { return r.loss; })));

    std::filesystem::create_directories(out_dir);
    render(controls, out_dir / (experiment + "_controls.svg"));
    render(states, out_dir / (experiment + "_states.svg"));
    render(loss, out_dir / (experiment + "_loss.svg"));
}

}  // namespace qimpc
