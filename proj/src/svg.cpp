#include "bagstab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace bagstab {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 770.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 440.0;
constexpr std::size_t kBins = 30;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const std::string& title) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n"
         "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
         escape(title) + "</text>\n";
}

std::string axes(const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(kRight) + "\" y2=\"" + num(kBottom) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kBottom) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(0.5 * (kLeft + kRight)) + "\" y=\"485\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">" + escape(xlabel) + "</text>\n";
  s += "<text x=\"18\" y=\"" + num(0.5 * (kTop + kBottom)) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\" transform=\"rotate(-90 18 " + num(0.5 * (kTop + kBottom)) + ")\">" + escape(ylabel) +
       "</text>\n";
  return s;
}

std::string tick_text(double x, double y, const std::string& text, const char* anchor) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(text) + "</text>\n";
}

std::string legend(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string s;
  double y = kTop + 10.0;
  for (const auto& [name, style] : entries) {
    s += "<line x1=\"600\" y1=\"" + num(y) + "\" x2=\"630\" y2=\"" + num(y) + "\" " + style + "/>\n";
    s += tick_text(638.0, y + 4.0, name, "start");
    y += 18.0;
  }
  return s;
}

}  // namespace

std::string histogram_svg(std::span<const double> base, std::span<const double> bagged, const std::string& title) {
  double top = 0.0;
  for (double v : base) top = std::max(top, v);
  for (double v : bagged) top = std::max(top, v);
  if (top <= 0.0) top = 1.0;
  const double width = top / static_cast<double>(kBins);
  auto counts = [&](std::span<const double> values) {
    std::vector<std::size_t> c(kBins, 0);
    for (double v : values) c[std::min(kBins - 1, static_cast<std::size_t>(v / width))] += 1;
    return c;
  };
  const auto cb = counts(base);
  const auto cg = counts(bagged);
  std::size_t peak = 1;
  for (std::size_t k = 0; k < kBins; ++k) peak = std::max({peak, cb[k], cg[k]});

  std::string s = header(title);
  s += axes("leave-one-out distance", "count");
  const double bar = (kRight - kLeft) / static_cast<double>(kBins);
  auto bars = [&](const std::vector<std::size_t>& c, const char* color) {
    std::string out;
    for (std::size_t k = 0; k < kBins; ++k) {
      if (c[k] == 0) continue;
      const double h = (kBottom - kTop) * static_cast<double>(c[k]) / static_cast<double>(peak);
      out += "<rect x=\"" + num(kLeft + bar * static_cast<double>(k)) + "\" y=\"" + num(kBottom - h) + "\" width=\"" +
             num(bar) + "\" height=\"" + num(h) + "\" fill=\"" + color + "\" fill-opacity=\"0.5\"/>\n";
    }
    return out;
  };
  s += bars(cb, "#1f77b4");
  s += bars(cg, "#ff7f0e");
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    s += tick_text(kLeft + f * (kRight - kLeft), kBottom + 16.0, label(f * top), "middle");
    s += tick_text(kLeft - 6.0, kBottom - f * (kBottom - kTop) + 4.0, label(f * static_cast<double>(peak)), "end");
  }
  s += legend({{"base", "stroke=\"#1f77b4\" stroke-width=\"6\""}, {"bagged", "stroke=\"#ff7f0e\" stroke-width=\"6\""}});
  s += "</svg>\n";
  return s;
}

std::string tail_svg(std::span<const double> epsilons, std::span<const double> base, std::span<const double> bagged,
                     std::span<const double> bound, const std::string& title) {
  double lo = INFINITY;
  double hi = 0.0;
  for (double e : epsilons) {
    if (e > 0.0) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  }
  if (!(lo < hi)) {
    lo = 1e-3;
    hi = 1.0;
  }
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  auto px = [&](double e) { return kLeft + (std::log10(e) - llo) / (lhi - llo) * (kRight - kLeft); };
  auto py = [&](double d) { return kBottom - std::clamp(d, 0.0, 1.0) * (kBottom - kTop); };
  auto curve = [&](std::span<const double> deltas, const std::string& style) {
    std::string pts;
    for (std::size_t k = 0; k < epsilons.size() && k < deltas.size(); ++k) {
      if (epsilons[k] <= 0.0) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(px(epsilons[k])) + "," + num(py(deltas[k]));
    }
    return "<polyline fill=\"none\" " + style + " points=\"" + pts + "\"/>\n";
  };

  std::string s = header(title);
  s += axes("epsilon (log scale)", "delta");
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    s += tick_text(kLeft + f * (kRight - kLeft), kBottom + 16.0, label(std::pow(10.0, llo + f * (lhi - llo))),
                   "middle");
    s += tick_text(kLeft - 6.0, py(f) + 4.0, label(f), "end");
  }
  const std::string base_style = "stroke=\"#1f77b4\" stroke-width=\"2\"";
  const std::string bagged_style = "stroke=\"#ff7f0e\" stroke-width=\"2\"";
  const std::string bound_style = "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"";
  s += curve(base, base_style);
  s += curve(bagged, bagged_style);
  std::vector<std::pair<std::string, std::string>> entries{{"base", base_style}, {"bagged", bagged_style}};
  if (!bound.empty()) {
    s += curve(bound, bound_style);
    entries.emplace_back("bound", bound_style);
  }
  s += legend(entries);
  s += "</svg>\n";
  return s;
}

}  // namespace bagstab
