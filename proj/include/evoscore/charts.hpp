#pragma once

#include <string>

#include "evoscore/report.hpp"

namespace evoscore {

// Standalone SVG documents built from one report section.
std::string render_bar_chart(const ReportSection& section);     // concept %
std::string render_pie_chart(const ReportSection& section);     // model mix
std::string render_bubble_chart(const ReportSection& section);  // key x naive

}  // namespace evoscore
