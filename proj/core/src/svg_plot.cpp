#include "asrsel/svg_plot.hpp"

#include <algorithm>
#include <cmath>

#include "asrsel/io.hpp"

namespace asrsel {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

std::string num(double v) { return io::fixed(v, 2); }

class Canvas {
 public:
  Canvas(const SvgOptions& o, double max_value)
      : left_(70), right_(o.width - 20), top_(50), bottom_(o.height - 60), max_(max_value) {}

  double x(double v) const { return left_ + (right_ - left_) * v / max_; }
  double y(double v) const { return bottom_ - (bottom_ - top_) * v / max_; }
  double left() const { return left_; }
  double right() const { return right_; }
  double top() const { return top_; }
  double bottom() const { return bottom_; }
  double max() const { return max_; }

 private:
  double left_, right_, top_, bottom_, max_;
};

// Clips y = a + b x to the square [0, max]^2; returns false if it misses.
bool clip_line(const FittedLine& line, double max, double& x0, double& y0, double& x1, double& y1) {
  double lo = 0.0;
  double hi = max;
  if (line.slope != 0.0) {
    double xa = (0.0 - line.intercept) / line.slope;
    double xb = (max - line.intercept) / line.slope;
    if (xa > xb) std::swap(xa, xb);
    lo = std::max(lo, xa);
    hi = std::min(hi, xb);
  } else if (line.intercept < 0.0 || line.intercept > max) {
    return false;
  }
  if (lo >= hi) return false;
  x0 = lo;
  x1 = hi;
  y0 = line.intercept + line.slope * lo;
  y1 = line.intercept + line.slope * hi;
  return true;
}

}  // namespace

std::string render_scatter_svg(const ScatterData& data, const SvgOptions& options) {
  double max_value = 1.0;
  for (const auto& p : data.points) max_value = std::max({max_value, p.log_manual, p.log_automatic});
  max_value = std::ceil(max_value * 2.0) / 2.0;
  const Canvas c(options, max_value);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\"" +
       std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + " " +
       std::to_string(options.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string title = options.title.empty() ? data.title : options.title;
  s += "<text x=\"" + num(options.width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
       xml_escape(title) + "</text>\n";

  // Axes, ticks every 0.5 log10 units.
  s += "<g stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + num(c.left()) + "\" y1=\"" + num(c.bottom()) + "\" x2=\"" + num(c.right()) + "\" y2=\"" +
       num(c.bottom()) + "\"/>\n";
  s += "<line x1=\"" + num(c.left()) + "\" y1=\"" + num(c.bottom()) + "\" x2=\"" + num(c.left()) + "\" y2=\"" +
       num(c.top()) + "\"/>\n";
  s += "</g>\n<g text-anchor=\"middle\">\n";
  const int ticks = static_cast<int>(std::lround(max_value * 2.0));
  for (int k = 0; k <= ticks; ++k) {
    const double v = k * 0.5;
    s += "<text x=\"" + num(c.x(v)) + "\" y=\"" + num(c.bottom() + 16) + "\">" + io::fixed(v, 1) + "</text>\n";
    s += "<text x=\"" + num(c.left() - 18) + "\" y=\"" + num(c.y(v) + 4) + "\">" + io::fixed(v, 1) + "</text>\n";
  }
  s += "</g>\n";
  s += "<text x=\"" + num((c.left() + c.right()) / 2) + "\" y=\"" + num(c.bottom() + 40) +
       "\" text-anchor=\"middle\">log10(manual count + 1)</text>\n";
  s += "<text x=\"20\" y=\"" + num((c.top() + c.bottom()) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
       num((c.top() + c.bottom()) / 2) + ")\">log10(automatic count + 1)</text>\n";

  s += "<g fill=\"black\" fill-opacity=\"0.6\">\n";
  for (const auto& p : data.points) {
    s += "<circle cx=\"" + num(c.x(p.log_manual)) + "\" cy=\"" + num(c.y(p.log_automatic)) + "\" r=\"2.5\"/>\n";
  }
  s += "</g>\n<g font-size=\"9\">\n";
  for (const auto& p : data.points) {
    if (!p.labeled) continue;
    s += "<text x=\"" + num(c.x(p.log_manual) + 4) + "\" y=\"" + num(c.y(p.log_automatic) - 4) + "\">" +
         xml_escape(p.lemma) + "</text>\n";
  }
  s += "</g>\n";

  auto draw = [&](const std::optional<FittedLine>& line, const char* color, const std::string& legend, int row) {
    if (!line) return;
    double x0, y0, x1, y1;
    if (clip_line(*line, c.max(), x0, y0, x1, y1)) {
      s += "<line x1=\"" + num(c.x(x0)) + "\" y1=\"" + num(c.y(y0)) + "\" x2=\"" + num(c.x(x1)) + "\" y2=\"" +
           num(c.y(y1)) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    }
    const std::string r = line->r ? io::fixed(*line->r, 2) : std::string("\xE2\x80\x94");
    s += "<text x=\"" + num(c.left() + 10) + "\" y=\"" + num(c.top() + 14.0 * row) + "\" fill=\"" + color + "\">" +
         xml_escape(legend) + ": r = " + r + " (n = " + std::to_string(line->n) + ")</text>\n";
  };
  draw(data.all_line, "red", "all words", 1);
  draw(data.filtered_line, "blue", "automatic count >= " + std::to_string(data.min_auto_count), 2);
  s += "</svg>\n";
  return s;
}

}  // namespace asrsel
