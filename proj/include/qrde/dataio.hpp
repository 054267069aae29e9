#pragma once

// Sample ingestion (plain, csv, json) and export of density curves, quantile
// tables and comparisons. Numbers are written in their shortest round-trip
// decimal form; output uses LF line endings.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "qrde/compare.hpp"
#include "qrde/error.hpp"
#include "qrde/qrde.hpp"
#include "qrde/sample.hpp"

namespace qrde {

enum class SampleFormat { plain, csv, json };
enum class CurveFormat { csv, json, svg };
enum class TableFormat { csv, json };

inline SampleFormat parse_sample_format(std::string_view name) {
  if (name == "plain") return SampleFormat::plain;
  if (name == "csv") return SampleFormat::csv;
  if (name == "json") return SampleFormat::json;
  throw DomainError("unknown sample format '" + std::string(name) + "'");
}

/// Format implied by a file extension; plain when unrecognised.
inline SampleFormat sample_format_for_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return SampleFormat::plain;
  std::string ext(path.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "csv") return SampleFormat::csv;
  if (ext == "json") return SampleFormat::json;
  return SampleFormat::plain;
}

/// Shortest decimal that parses back to the same double; "inf"/"-inf"/"nan"
/// for non-finite values.
inline std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view token, std::size_t line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(line, "value '" + std::string(token) + "' is out of range");
  }
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line, "'" + std::string(token) + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "value '" + std::string(token) + "' is not finite");
  }
  return value;
}

inline Sample read_lines(std::istream& in, bool csv) {
  std::vector<double> values;
  std::string line;
  std::size_t number = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (csv && first_content && text == "x") {
      first_content = false;
      continue;
    }
    first_content = false;
    if (csv && text.find(',') != std::string_view::npos) {
      throw ParseError(number, "expected a single column");
    }
    values.push_back(parse_number(text, number));
  }
  if (values.empty()) throw ParseError(number, "input contains no values");
  return Sample(std::move(values));
}

/// Collects the numbers of a flat JSON array. Structural errors, including
/// numbers that overflow a double, arrive through parse_error() with a
/// position; wrong element types stop the parse and are reported by index.
class JsonSampleReader : public nlohmann::json_sax<nlohmann::json> {
public:
  bool null() override { return wrong_type("null"); }
  bool boolean(bool) override { return wrong_type("a boolean"); }
  bool number_integer(number_integer_t v) override { return push(static_cast<double>(v)); }
  bool number_unsigned(number_unsigned_t v) override { return push(static_cast<double>(v)); }
  bool number_float(number_float_t v, const string_t&) override { return push(v); }
  bool string(string_t&) override { return wrong_type("a string"); }
  bool binary(binary_t&) override { return wrong_type("binary data"); }
  bool start_object(std::size_t) override { return wrong_type("an object"); }
  bool key(string_t&) override { return false; }
  bool end_object() override { return false; }
  bool start_array(std::size_t) override {
    if (depth_++ == 0) {
      seen_array_ = true;
      return true;
    }
    return wrong_type("an array");
  }
  bool end_array() override {
    --depth_;
    return true;
  }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception& e) override {
    error_ = ParseError(line_from(e), std::string("invalid JSON: ") + e.what());
    return false;
  }

  void set_position_source(const std::string& text) { text_ = &text; }

  std::vector<double> take() {
    if (error_) throw *error_;
    if (depth_ != 0 || !seen_array_) throw ParseError(1, "JSON input must be an array of numbers");
    if (values_.empty()) throw ParseError(1, "input contains no values");
    return std::move(values_);
  }

private:
  bool push(double v) {
    if (depth_ == 0) return wrong_type("a bare number");
    if (!std::isfinite(v)) {
      error_ = ParseError(ParseError::Element{values_.size() + 1}, "value is not finite");
      return false;
    }
    values_.push_back(v);
    return true;
  }

  bool wrong_type(const char* what) {
    if (depth_ == 0) {
      error_ = ParseError(1, "JSON input must be an array of numbers");
    } else {
      error_ = ParseError(ParseError::Element{values_.size() + 1},
                          std::string("expected a number, found ") + what);
    }
    return false;
  }

  std::size_t line_from(const nlohmann::detail::exception& e) const {
    // parse_error exceptions carry a byte offset; out_of_range ones do not.
    const auto* pe = dynamic_cast<const nlohmann::detail::parse_error*>(&e);
    if (pe == nullptr || text_ == nullptr) return last_line();
    const auto offset = std::min<std::size_t>(pe->byte, text_->size());
    return 1 + static_cast<std::size_t>(
                   std::count(text_->begin(), text_->begin() + offset - (offset > 0), '\n'));
  }

  std::size_t last_line() const {
    if (text_ == nullptr) return 1;
    // Locate the first token that does not fit in a double.
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text_->size()) {
      const char c = (*text_)[i];
      if (c == '\n') {
        ++line;
        ++i;
        continue;
      }
      if (c == '-' || (c >= '0' && c <= '9')) {
        std::size_t j = i;
        while (j < text_->size() && std::string_view("+-.eE0123456789").find((*text_)[j]) !=
                                        std::string_view::npos) {
          ++j;
        }
        const std::string token = text_->substr(i, j - i);
        if (std::isinf(std::strtod(token.c_str(), nullptr))) return line;
        i = j;
        continue;
      }
      ++i;
    }
    return line;
  }

  std::vector<double> values_;
  std::optional<ParseError> error_;
  const std::string* text_ = nullptr;
  int depth_ = 0;
  bool seen_array_ = false;
};

inline Sample read_json(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  JsonSampleReader reader;
  reader.set_position_source(text);
  nlohmann::json::sax_parse(text, &reader);
  return Sample(reader.take());
}

}  // namespace detail

/// Parses and sorts a sample. plain: one number per line; csv: one column
/// with an optional "x" header; json: flat array. Blank lines are ignored.
inline Sample read_sample(std::istream& in, SampleFormat format) {
  switch (format) {
    case SampleFormat::plain:
      return detail::read_lines(in, false);
    case SampleFormat::csv:
      return detail::read_lines(in, true);
    case SampleFormat::json:
      return detail::read_json(in);
  }
  throw DomainError("unknown sample format");
}

inline Sample read_sample(std::string_view text, SampleFormat format) {
  std::istringstream in{std::string(text)};
  return read_sample(in, format);
}

inline void write_sample(std::ostream& out, const Sample& sample, SampleFormat format) {
  switch (format) {
    case SampleFormat::plain:
      for (double x : sample) out << format_number(x) << '\n';
      break;
    case SampleFormat::csv:
      out << "x\n";
      for (double x : sample) out << format_number(x) << '\n';
      break;
    case SampleFormat::json: {
      out << '[';
      bool first = true;
      for (double x : sample) {
        out << (first ? "" : ",") << format_number(x);
        first = false;
      }
      out << "]\n";
      break;
    }
  }
}

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const CurvePoint&) const = default;
};

/// Step outline of a pseudo-histogram: every edge twice, heights twice,
/// closed by y = 0 at both ends. 2k + 2 points for k bins.
using DensityCurve = std::vector<CurvePoint>;

/// Outline of bins [first_bin, last_bin] (0-based, inclusive). Degenerate
/// bins appear with infinite height.
inline DensityCurve make_density_curve(const PseudoHistogram& ph, std::size_t first_bin,
                                       std::size_t last_bin) {
  if (first_bin > last_bin || last_bin >= ph.bins()) {
    throw UsageError("bin range is empty or outside the histogram");
  }
  const auto edges = ph.edges();
  const auto heights = ph.heights();
  DensityCurve curve;
  curve.reserve(2 * (last_bin - first_bin + 1) + 2);
  curve.push_back({edges[first_bin], 0.0});
  for (std::size_t i = first_bin; i <= last_bin; ++i) {
    curve.push_back({edges[i], heights[i]});
    curve.push_back({edges[i + 1], heights[i]});
  }
  curve.push_back({edges[last_bin + 1], 0.0});
  return curve;
}

inline DensityCurve make_density_curve(const PseudoHistogram& ph) {
  return make_density_curve(ph, 0, ph.bins() - 1);
}

namespace detail {

inline std::string svg_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline void write_svg(std::ostream& out, const DensityCurve& curve) {
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double margin = 40.0;
  double x_min = curve.front().x;
  double x_max = curve.front().x;
  double y_max = 0.0;
  for (const auto& p : curve) {
    if (!std::isfinite(p.y)) throw UsageError("cannot plot a curve with unbounded heights");
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
    y_max = std::max(y_max, p.y);
  }
  const double x_span = x_max > x_min ? x_max - x_min : 1.0;
  const double y_span = y_max > 0.0 ? y_max : 1.0;
  auto sx = [&](double x) { return margin + (x - x_min) / x_span * (width - 2 * margin); };
  auto sy = [&](double y) { return height - margin - y / y_span * (height - 2 * margin); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\" width=\"640\" "
         "height=\"400\">\n";
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << (i ? " " : "") << svg_coord(sx(curve[i].x)) << ',' << svg_coord(sy(curve[i].y));
  }
  out << "\"/>\n";
  const std::string base = svg_coord(height - margin + 16);
  out << "<text x=\"" << svg_coord(margin) << "\" y=\"" << base
      << "\" text-anchor=\"start\" font-size=\"12\">" << format_number(x_min) << "</text>\n";
  out << "<text x=\"" << svg_coord(width - margin) << "\" y=\"" << base
      << "\" text-anchor=\"end\" font-size=\"12\">" << format_number(x_max) << "</text>\n";
  out << "<text x=\"4\" y=\"" << svg_coord(height - margin)
      << "\" font-size=\"12\">0</text>\n";
  out << "<text x=\"4\" y=\"" << svg_coord(margin) << "\" font-size=\"12\">"
      << format_number(y_max) << "</text>\n";
  out << "</svg>\n";
}

inline std::string json_number(double v) {
  return std::isfinite(v) ? format_number(v) : "null";
}

}  // namespace detail

/// Writes a curve. Non-finite heights become "inf" in csv and null in json;
/// svg rejects them.
inline void write_curve(std::ostream& out, const DensityCurve& curve, CurveFormat format) {
  switch (format) {
    case CurveFormat::csv:
      out << "x,y\n";
      for (const auto& p : curve) out << format_number(p.x) << ',' << format_number(p.y) << '\n';
      break;
    case CurveFormat::json:
      out << '[';
      for (std::size_t i = 0; i < curve.size(); ++i) {
        out << (i ? "," : "") << '[' << detail::json_number(curve[i].x) << ','
            << detail::json_number(curve[i].y) << ']';
      }
      out << "]\n";
      break;
    case CurveFormat::svg:
      if (curve.empty()) throw UsageError("cannot plot an empty curve");
      detail::write_svg(out, curve);
      break;
  }
}

inline void write_density_curve(std::ostream& out, const PseudoHistogram& ph,
                                CurveFormat format) {
  if (ph.degenerate()) {
    throw UsageError("cannot export a histogram with degenerate bins");
  }
  write_curve(out, make_density_curve(ph), format);
}

inline std::string write_density_curve(const PseudoHistogram& ph, CurveFormat format) {
  std::ostringstream out;
  write_density_curve(out, ph, format);
  return out.str();
}

/// (p, q) table in input order.
inline void write_quantiles(std::ostream& out, std::span<const double> ps,
                            std::span<const double> qs, TableFormat format) {
  if (ps.size() != qs.size()) {
    throw UsageError("probability and quantile lists differ in length");
  }
  if (format == TableFormat::csv) {
    out << "p,q\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
      out << format_number(ps[i]) << ',' << format_number(qs[i]) << '\n';
    }
    return;
  }
  out << '[';
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out << (i ? "," : "") << '[' << detail::json_number(ps[i]) << ','
        << detail::json_number(qs[i]) << ']';
  }
  out << "]\n";
}

inline std::string write_quantiles(std::span<const double> ps, std::span<const double> qs,
                                   TableFormat format) {
  std::ostringstream out;
  write_quantiles(out, ps, qs, format);
  return out.str();
}

inline std::string median_summary(const DensityComparison& c) {
  return "median hd=" + format_number(c.qrde_median) + " hf7=" + format_number(c.hf7_median) +
         " kde=" + format_number(c.kde_median) +
         " histogram=" + format_number(c.histogram_median) +
         " divergence(hf7,kde)=" + format_number(c.median_divergence());
}

/// csv: header "x,qrde_hd,kde,histogram", one row per grid point, then a
/// "# median ..." summary line. json: one object with the same content.
inline void write_comparison(std::ostream& out, const DensityComparison& c, TableFormat format) {
  if (format == TableFormat::csv) {
    out << "x,qrde_hd,kde,histogram\n";
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      out << format_number(c.x[i]) << ',' << format_number(c.qrde[i]) << ','
          << format_number(c.kde[i]) << ',' << format_number(c.histogram[i]) << '\n';
    }
    out << "# " << median_summary(c) << '\n';
    return;
  }
  auto array = [&](const std::vector<double>& v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << detail::json_number(v[i]);
    out << ']';
  };
  out << "{\"x\":";
  array(c.x);
  out << ",\"qrde_hd\":";
  array(c.qrde);
  out << ",\"kde\":";
  array(c.kde);
  out << ",\"histogram\":";
  array(c.histogram);
  out << ",\"bandwidth\":" << format_number(c.bandwidth) << ",\"hist_bins\":" << c.hist_bins
      << ",\"medians\":{\"hd\":" << format_number(c.qrde_median)
      << ",\"hf7\":" << format_number(c.hf7_median) << ",\"kde\":" << format_number(c.kde_median)
      << ",\"histogram\":" << format_number(c.histogram_median)
      << "},\"median_divergence\":" << format_number(c.median_divergence()) << "}\n";
}

}  // namespace qrde
