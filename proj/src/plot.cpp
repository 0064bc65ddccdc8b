#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "pfoco/harness.hpp"
#include "pfoco/metrics.hpp"

namespace pfoco {

namespace {

struct Series {
  std::string label;
  std::vector<double> x, mean, lo, hi;
};

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::vector<Series> collect(const std::vector<RunSummary>& rows, double RunSummary::*field) {
  std::map<std::string, std::map<std::size_t, std::vector<double>>> grouped;
  for (const auto& r : rows) grouped[r.algorithm][r.T].push_back(r.*field);
  std::vector<Series> out;
  for (const auto& [alg, byT] : grouped) {
    Series s{alg, {}, {}, {}, {}};
    for (const auto& [T, vals] : byT) {
      const auto st = sample_stats(vals);
      s.x.push_back(static_cast<double>(T));
      s.mean.push_back(st.mean);
      s.lo.push_back(st.min);
      s.hi.push_back(st.max);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Log-scaled x axis; the y axis is logarithmic only when every plotted value is positive.
std::string render(const std::vector<Series>& series, const std::string& title, const std::string& ylabel,
                   bool allow_log_y) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min({ymin, s.lo[i], s.mean[i]});
      ymax = std::max({ymax, s.hi[i], s.mean[i]});
    }
  }
  if (!std::isfinite(xmin)) xmin = 1, xmax = 10, ymin = 0, ymax = 1;
  const bool log_y = allow_log_y && ymin > 0.0;
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  if (lx1 - lx0 < 1e-9) lx0 -= 0.5, lx1 += 0.5;
  double y0 = ty(ymin), y1 = ty(ymax);
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (std::log10(x) - lx0) / (lx1 - lx0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
  svg += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     kLeft + pw / 2, title);
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     kLeft, kTop, pw, ph);

  // x ticks at the observed horizons
  std::vector<double> xt;
  for (const auto& s : series) xt.insert(xt.end(), s.x.begin(), s.x.end());
  std::sort(xt.begin(), xt.end());
  xt.erase(std::unique(xt.begin(), xt.end()), xt.end());
  for (double x : xt) {
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>\n", px(x),
                       kTop + ph, kTop + ph + 5);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:g}</text>\n", px(x),
                       kTop + ph + 20, x);
  }
  for (int i = 0; i <= 4; ++i) {
    const double yv = y0 + (y1 - y0) * i / 4.0;
    const double ypix = kTop + (1.0 - i / 4.0) * ph;
    const double label = log_y ? std::pow(10.0, yv) : yv;
    svg += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n", kLeft, ypix,
                       kLeft + pw, ypix);
    svg += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n", kLeft - 6, ypix + 4,
                       label);
  }
  if (!log_y && y0 < 0.0 && y1 > 0.0) {
    svg += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#888\" "
                       "stroke-dasharray=\"4 3\"/>\n",
                       kLeft, py(0.0), kLeft + pw, py(0.0));
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">T (log scale)</text>\n", kLeft + pw / 2,
                     kHeight - 15);
  svg += fmt::format("<text transform=\"translate(18,{}) rotate(-90)\" text-anchor=\"middle\">{}{}</text>\n",
                     kTop + ph / 2, ylabel, log_y ? " (log scale)" : "");

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % std::size(kColors)];
    if (s.x.size() > 1) {
      std::string band;
      for (std::size_t i = 0; i < s.x.size(); ++i) band += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.hi[i]));
      for (std::size_t i = s.x.size(); i-- > 0;) band += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.lo[i]));
      svg += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.18\" stroke=\"none\"/>\n", band,
                         color);
    }
    std::string line;
    for (std::size_t i = 0; i < s.x.size(); ++i) line += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.mean[i]));
    svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", line, color);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(s.x[i]), py(s.mean[i]),
                         color);
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(si);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                       kLeft + pw + 12, ly, kLeft + pw + 32, color);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kLeft + pw + 38, ly + 4, s.label);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

std::vector<std::filesystem::path> write_plots(const std::vector<RunSummary>& rows,
                                               const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> paths;
  auto emit = [&](const char* file, double RunSummary::*field, const char* title, const char* ylabel,
                  bool allow_log_y) {
    const auto path = out_dir / file;
    write_text(path, render(collect(rows, field), title, ylabel, allow_log_y));
    paths.push_back(path);
  };
  emit("regret.svg", &RunSummary::regret, "Regret(T), seed mean with min-max band", "regret", true);
  // Violations straddle zero, so a log y axis would drop most of the data.
  emit("violation.svg", &RunSummary::violation, "Violation(T), seed mean with min-max band", "violation",
       false);
  emit("cumulative_violation.svg", &RunSummary::cumulative_violation,
       "Cumulative violation(T), seed mean with min-max band", "cumulative violation", true);
  return paths;
}

}  // namespace pfoco
