#include <cmath>
#include <cstdio>
#include <sstream>

#include "cutoffprobe/cutoff.hpp"
#include "cutoffprobe/error.hpp"
#include "cutoffprobe/io.hpp"

namespace cutoffprobe {

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string format_float(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string curve_csv(const RelativeCurve& curve) {
    std::string out = "month,mean_ppl,trimmed_mean_ppl,relative_ppl,n_docs\n";
    for (std::size_t i = 0; i < curve.months.size(); ++i) {
        out += curve.months[i].str();
        out += ',' + format_float(curve.means[i]);
        out += ',' + format_float(curve.trimmed_means[i]);
        out += ',' + format_float(curve.values[i]);
        out += ',' + std::to_string(curve.n_docs[i]) + '\n';
    }
    return out;
}

RelativeCurve parse_curve_csv(std::string_view content) {
    RelativeCurve curve;
    bool header = true;
    for (const auto& line : io::split_records(content)) {
        if (header) {
            if (line.text != "month,mean_ppl,trimmed_mean_ppl,relative_ppl,n_docs") {
                throw config_error("curve CSV line " + std::to_string(line.number) + ": unexpected header");
            }
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line.text);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 5) {
            throw config_error("curve CSV line " + std::to_string(line.number) + ": expected 5 columns");
        }
        try {
            curve.months.push_back(MonthStamp::parse(cells[0]));
            curve.means.push_back(std::stod(cells[1]));
            curve.trimmed_means.push_back(std::stod(cells[2]));
            curve.values.push_back(std::stod(cells[3]));
            curve.n_docs.push_back(std::stoul(cells[4]));
        } catch (const std::exception& e) {
            throw config_error("curve CSV line " + std::to_string(line.number) + ": " + e.what());
        }
    }
    return curve;
}

std::string series_csv(const PerplexitySeries& series) {
    std::string out = "month,perplexity,doc_key\n";
    char buf[32];
    for (const auto& [month, ms] : series.measurements) {
        for (const auto& m : ms) {
            std::snprintf(buf, sizeof buf, "%.17g", m.perplexity);
            out += month.str() + "," + buf + "," + m.doc_key + "\n";
        }
    }
    return out;
}

PerplexitySeries parse_series_csv(std::string_view content, std::string_view source) {
    PerplexitySeries series;
    bool header = true;
    for (const auto& line : io::split_records(content)) {
        const std::string where = std::string(source) + ":" + std::to_string(line.number);
        if (header) {
            if (line.text != "month,perplexity,doc_key") throw config_error(where + ": unexpected header");
            header = false;
            continue;
        }
        const auto a = line.text.find(',');
        const auto b = a == std::string::npos ? a : line.text.find(',', a + 1);
        if (b == std::string::npos) throw config_error(where + ": expected 3 columns");
        try {
            std::size_t used = 0;
            const std::string num = line.text.substr(a + 1, b - a - 1);
            const double ppl = std::stod(num, &used);
            if (used != num.size() || !std::isfinite(ppl) || ppl <= 0) throw std::invalid_argument("bad perplexity");
            series.add(MonthStamp::parse(line.text.substr(0, a)), line.text.substr(b + 1), ppl);
        } catch (const Error& e) {
            throw config_error(where + ": " + e.what());
        } catch (const std::exception& e) {
            throw config_error(where + ": " + e.what());
        }
    }
    return series;
}

nlohmann::ordered_json estimate_json(const CutoffEstimate& estimate) {
    nlohmann::ordered_json j;
    j["argmin_month"] = estimate.argmin_month.str();
    j["band"] = nlohmann::ordered_json::array();
    for (const auto& m : estimate.band) j["band"].push_back(m.str());
    j["epsilon"] = estimate.epsilon;
    return j;
}

std::string curve_svg(const CutoffEstimate& estimate, std::string_view title) {
    constexpr double kWidth = 800, kHeight = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
    const auto& c = estimate.curve;
    const std::size_t n = c.months.size();
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto x_at = [&](std::size_t i) { return kLeft + (n > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(n - 1) : plot_w / 2); };
    auto y_at = [&](double v) { return kTop + plot_h * (1.0 - v); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << xml_escape(title) << "</text>\n";
    // epsilon band
    for (std::size_t i = 0; i < n; ++i) {
        if (c.values[i] > estimate.epsilon) continue;
        const double half = n > 1 ? plot_w / static_cast<double>(n - 1) / 2 : 4;
        os << "<rect x=\"" << num(x_at(i) - half) << "\" y=\"" << num(kTop) << "\" width=\"" << num(2 * half)
           << "\" height=\"" << num(plot_h) << "\" fill=\"#e8eef8\"/>\n";
    }
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
       << kTop + plot_h << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
       << "\" stroke=\"black\"/>\n";
    for (double tick : {0.0, 0.5, 1.0}) {
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y_at(tick) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(tick) << "</text>\n";
    }
    const std::size_t label_every = n > 12 ? (n + 11) / 12 : 1;
    for (std::size_t i = 0; i < n; i += label_every) {
        os << "<text x=\"" << num(x_at(i)) << "\" y=\"" << kHeight - kBottom + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << c.months[i].str()
           << "</text>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
        if (i) os << ' ';
        os << num(x_at(i)) << ',' << num(y_at(c.values[i]));
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (c.months[i] != estimate.argmin_month) continue;
        os << "<circle cx=\"" << num(x_at(i)) << "\" cy=\"" << num(y_at(c.values[i]))
           << "\" r=\"5\" fill=\"#c0392b\"/>\n";
        os << "<text x=\"" << num(x_at(i)) << "\" y=\"" << num(y_at(c.values[i]) - 10)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#c0392b\">"
           << c.months[i].str() << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace cutoffprobe
