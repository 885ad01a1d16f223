#pragma once

#include <string>
#include <string_view>

#include "asrsel/lexical.hpp"

namespace asrsel {

struct SvgOptions {
  int width = 640;
  int height = 640;
  std::string title;
};

/// Renders a standalone SVG document: log-count scatter with the all-words
/// fit in red, the filtered fit in blue, and labels on the thinned subset.
std::string render_scatter_svg(const ScatterData& data, const SvgOptions& options = {});

std::string xml_escape(std::string_view text);

}  // namespace asrsel
