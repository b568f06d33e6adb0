#include "evoscore/charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace evoscore {

namespace {

constexpr double kPi = 3.14159265358979323846;

const char* kConceptColors[kConceptCount] = {
    "#4e79a7", "#59a14f", "#9c755f", "#f28e2b", "#edc948",
    "#76b7b2", "#e15759", "#b07aa1", "#ff9da7"};

const char* kModelColors[kReasoningModelCount] = {"#4e79a7", "#f28e2b",
                                                  "#e15759", "#bab0ac"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void open_svg(std::string& out, int width, int height, const char* title) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "  <text x=\"" + std::to_string(width / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">";
  out += title;
  out += "</text>\n";
}

void text_at(std::string& out, double x, double y, const std::string& s,
             const char* anchor, int size) {
  out += "  <text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" +
         anchor + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\">" + s + "</text>\n";
}

}  // namespace

std::string render_bar_chart(const ReportSection& section) {
  const int width = 720, height = 420;
  const double left = 60, right = 20, top = 50, bottom = 110;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::string out;
  open_svg(out, width, height, "Concept detection (% of responses)");

  for (int tick = 0; tick <= 100; tick += 25) {
    const double y = top + plot_h * (1.0 - tick / 100.0);
    out += "  <line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(left + plot_w) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\"/>\n";
    text_at(out, left - 8, y + 4, std::to_string(tick), "end", 11);
  }

  const double slot = plot_w / kConceptCount;
  const double bar_w = slot * 0.62;
  for (std::size_t c = 0; c < kConceptCount; ++c) {
    const double pct = section.concept_presence_pct[c];
    const double h = plot_h * pct / 100.0;
    const double x = left + slot * static_cast<double>(c) + (slot - bar_w) / 2;
    const double y = top + plot_h - h;
    out += "  <rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
           num(bar_w) + "\" height=\"" + num(h) + "\" fill=\"" +
           kConceptColors[c] + "\"/>\n";
    text_at(out, x + bar_w / 2, y - 4, num(pct), "middle", 10);
    const double lx = x + bar_w / 2;
    const double ly = top + plot_h + 12;
    out += "  <text x=\"" + num(lx) + "\" y=\"" + num(ly) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\""
           " transform=\"rotate(-45 " + num(lx) + " " + num(ly) + ")\">" +
           std::string(concept_name(static_cast<ConceptId>(c))) + "</text>\n";
  }
  out += "  <line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) +
         "\" x2=\"" + num(left + plot_w) + "\" y2=\"" + num(top + plot_h) +
         "\" stroke=\"black\"/>\n";
  out += "</svg>\n";
  return out;
}

std::string render_pie_chart(const ReportSection& section) {
  const int width = 520, height = 400;
  const double cx = 190, cy = 215, radius = 140;

  std::string out;
  open_svg(out, width, height, "Reasoning model distribution");

  const double total = static_cast<double>(section.n_responses);
  std::size_t nonzero = 0;
  for (std::size_t m = 0; m < kReasoningModelCount; ++m) {
    if (section.model_counts[m] > 0) ++nonzero;
  }

  double angle = -kPi / 2;  // start at 12 o'clock
  for (std::size_t m = 0; m < kReasoningModelCount; ++m) {
    const std::size_t count = section.model_counts[m];
    if (count == 0) continue;
    if (nonzero == 1) {
      out += "  <circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" +
             num(radius) + "\" fill=\"" + kModelColors[m] + "\"/>\n";
      break;
    }
    const double sweep = 2 * kPi * static_cast<double>(count) / total;
    const double x1 = cx + radius * std::cos(angle);
    const double y1 = cy + radius * std::sin(angle);
    const double x2 = cx + radius * std::cos(angle + sweep);
    const double y2 = cy + radius * std::sin(angle + sweep);
    const int large = sweep > kPi ? 1 : 0;
    out += "  <path d=\"M " + num(cx) + " " + num(cy) + " L " + num(x1) + " " +
           num(y1) + " A " + num(radius) + " " + num(radius) + " 0 " +
           std::to_string(large) + " 1 " + num(x2) + " " + num(y2) +
           " Z\" fill=\"" + kModelColors[m] + "\" stroke=\"white\"/>\n";
    angle += sweep;
  }

  double ly = 120;
  for (std::size_t m = 0; m < kReasoningModelCount; ++m) {
    out += "  <rect x=\"370\" y=\"" + num(ly - 11) +
           "\" width=\"14\" height=\"14\" fill=\"" + kModelColors[m] + "\"/>\n";
    text_at(out, 390, ly,
            std::string(model_name(static_cast<ReasoningModel>(m))) + " (" +
                std::to_string(section.model_counts[m]) + ")",
            "start", 12);
    ly += 24;
  }
  out += "</svg>\n";
  return out;
}

std::string render_bubble_chart(const ReportSection& section) {
  const int width = 640, height = 400;
  const double left = 70, right = 30, top = 50, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const int max_key = 6, max_naive = 3;

  std::string out;
  open_svg(out, width, height, "Concept use patterns");

  const auto x_of = [&](int key) {
    return left + plot_w * static_cast<double>(key) / max_key;
  };
  const auto y_of = [&](int naive) {
    return top + plot_h * (1.0 - static_cast<double>(naive) / max_naive);
  };

  for (int key = 0; key <= max_key; ++key) {
    out += "  <line x1=\"" + num(x_of(key)) + "\" y1=\"" + num(top) +
           "\" x2=\"" + num(x_of(key)) + "\" y2=\"" + num(top + plot_h) +
           "\" stroke=\"#eeeeee\"/>\n";
    text_at(out, x_of(key), top + plot_h + 20, std::to_string(key), "middle", 11);
  }
  for (int naive = 0; naive <= max_naive; ++naive) {
    out += "  <line x1=\"" + num(left) + "\" y1=\"" + num(y_of(naive)) +
           "\" x2=\"" + num(left + plot_w) + "\" y2=\"" + num(y_of(naive)) +
           "\" stroke=\"#eeeeee\"/>\n";
    text_at(out, left - 10, y_of(naive) + 4, std::to_string(naive), "end", 11);
  }
  text_at(out, left + plot_w / 2, static_cast<double>(height) - 14,
          "key concepts per response", "middle", 12);
  out += "  <text x=\"18\" y=\"" + num(top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
         " transform=\"rotate(-90 18 " + num(top + plot_h / 2) + ")\">"
         "naive ideas per response</text>\n";

  std::size_t max_count = 1;
  for (const BubbleCell& cell : section.bubble) {
    max_count = std::max(max_count, cell.count);
  }
  const double max_r = std::min(plot_w / max_key, plot_h / max_naive) * 0.45;
  for (const BubbleCell& cell : section.bubble) {
    const double r = max_r * std::sqrt(static_cast<double>(cell.count) /
                                       static_cast<double>(max_count));
    out += "  <circle cx=\"" + num(x_of(cell.key_total)) + "\" cy=\"" +
           num(y_of(cell.naive_total)) + "\" r=\"" + num(r) +
           "\" fill=\"#4e79a7\" fill-opacity=\"0.7\"/>\n";
    text_at(out, x_of(cell.key_total), y_of(cell.naive_total) + 4,
            std::to_string(cell.count), "middle", 10);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace evoscore
