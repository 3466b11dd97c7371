#pragma once

#include "alhazen/caustic.hpp"
#include "alhazen/smetric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alhazen {
namespace io {

// 17 significant digits reproduce any double exactly on reparse
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

// canonical complex literal: <re>(+|-)<|im|>i
inline std::string format_complex(Complex z) {
    std::string s = format_double(z.real());
    s += std::signbit(z.imag()) ? '-' : '+';
    s += format_double(std::abs(z.imag()));
    s += 'i';
    return s;
}

inline double parse_double(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw std::invalid_argument("bad numeric literal: '" + std::string(text) + "'");
    return value;
}

// accepts re+imi, re-imi, bare re, and bare imi forms
inline Complex parse_complex(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty complex literal");
    if (text.back() != 'i') return Complex{parse_double(text), 0.0};
    const std::string_view body = text.substr(0, text.size() - 1);
    if (body.empty()) throw std::invalid_argument("bad complex literal: '" + std::string(text) + "'");
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        const char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) return Complex{0.0, parse_double(body)};
    return Complex{parse_double(body.substr(0, split)), parse_double(body.substr(split))};
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string caustic_csv(const caustic::CausticCurve& curve) {
    std::string out = "phi,re,im\n";
    for (const caustic::CausticSample& s : curve.samples) {
        out += format_double(s.phi);
        out += ',';
        out += format_double(s.point.real());
        out += ',';
        out += format_double(s.point.imag());
        out += '\n';
    }
    return out;
}

// one blank-line-separated block per level
inline std::string levelset_csv(const std::vector<smetric::LevelSet>& family) {
    std::string out = "level,re,im\n";
    bool first = true;
    for (const smetric::LevelSet& ls : family) {
        if (!first) out += '\n';
        first = false;
        for (Complex p : ls.points) {
            out += format_double(ls.level);
            out += ',';
            out += format_double(p.real());
            out += ',';
            out += format_double(p.imag());
            out += '\n';
        }
    }
    return out;
}

struct Polyline {
    std::vector<Complex> points;
    bool closed = false;
};

// chains of consecutively sampled points; a gap in the cyclic parameter
// grid splits the curve, no gap at all closes it
inline std::vector<Polyline> cyclic_chains(const std::vector<Complex>& points,
                                           const std::vector<double>& params, double max_gap,
                                           double period) {
    std::vector<Polyline> chains;
    const std::size_t n = points.size();
    if (n == 0) return chains;
    std::vector<std::size_t> breaks;
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (params[k + 1] - params[k] > max_gap) breaks.push_back(k + 1);
    const bool wrap_gap = (params.front() + period - params.back()) > max_gap;
    if (breaks.empty()) {
        chains.push_back({points, !wrap_gap});
        return chains;
    }
    std::vector<Complex> run;
    const std::size_t start = breaks.front();
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = (start + j) % n;
        if (j > 0 && std::find(breaks.begin(), breaks.end(), k) != breaks.end()) {
            chains.push_back({run, false});
            run.clear();
        }
        if (j > 0 && k == 0 && wrap_gap) {
            chains.push_back({run, false});
            run.clear();
        }
        run.push_back(points[k]);
    }
    if (!run.empty()) chains.push_back({run, false});
    return chains;
}

inline std::vector<Polyline> caustic_polylines(const caustic::CausticCurve& curve, int n) {
    std::vector<Complex> pts;
    std::vector<double> phis;
    for (const caustic::CausticSample& s : curve.samples) {
        pts.push_back(s.point);
        phis.push_back(s.phi);
    }
    const double step = 2.0 * std::numbers::pi / n;
    return cyclic_chains(pts, phis, 1.75 * step, 2.0 * std::numbers::pi);
}

inline std::vector<Polyline> levelset_polylines(const smetric::LevelSet& ls, int nrays) {
    std::vector<double> angles;
    std::size_t miss = 0;
    for (int k = 0; k < nrays; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / nrays;
        if (miss < ls.unresolved_rays.size() && std::abs(ls.unresolved_rays[miss] - ang) < 1e-9) {
            ++miss;
            continue;
        }
        angles.push_back(ang);
    }
    if (angles.size() != ls.points.size()) {
        // parameter reconstruction failed; fall back to one open chain
        return {Polyline{ls.points, false}};
    }
    const double step = 2.0 * std::numbers::pi / nrays;
    return cyclic_chains(ls.points, angles, 1.5 * step, 2.0 * std::numbers::pi);
}

// polylines only; viewBox from data bounds with a 5% margin, y axis flipped
inline std::string svg_document(const std::vector<Polyline>& curves) {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const Polyline& c : curves)
        for (Complex p : c.points) {
            xmin = std::min(xmin, p.real());
            xmax = std::max(xmax, p.real());
            ymin = std::min(ymin, -p.imag());
            ymax = std::max(ymax, -p.imag());
        }
    if (!(xmin <= xmax)) {
        xmin = ymin = -1.0;
        xmax = ymax = 1.0;
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double margin = 0.05 * span;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    out += format_double(xmin - margin) + " " + format_double(ymin - margin) + " " +
           format_double(xmax - xmin + 2.0 * margin) + " " +
           format_double(ymax - ymin + 2.0 * margin) + "\">\n";
    const std::string width = format_double(0.004 * span);
    for (const Polyline& c : curves) {
        if (c.points.empty()) continue;
        out += "  <polyline fill=\"none\" stroke=\"#1a1a1a\" stroke-width=\"" + width +
               "\" points=\"";
        bool first = true;
        auto emit = [&](Complex p) {
            if (!first) out += ' ';
            first = false;
            out += format_double(p.real()) + "," + format_double(-p.imag());
        };
        for (Complex p : c.points) emit(p);
        if (c.closed) emit(c.points.front());
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace io
} // namespace alhazen
