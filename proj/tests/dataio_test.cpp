#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrde/dataio.hpp"
#include "support/random.hpp"

namespace qrde {
namespace {

std::vector<double> values_of(const Sample& s) { return {s.begin(), s.end()}; }

PseudoHistogram histogram(std::vector<double> edges) {
  return PseudoHistogram::from_edges(std::move(edges));
}

std::size_t parse_error_line(std::string_view text, SampleFormat format) {
  try {
    read_sample(text, format);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(ReadSample, Examples) {
  EXPECT_EQ(values_of(read_sample("1\n2\n3\n", SampleFormat::plain)),
            (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(values_of(read_sample("x\n3\n1\n2\n", SampleFormat::csv)),
            (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(values_of(read_sample("[3, 1.5, -2e-3]", SampleFormat::json)),
            (std::vector<double>{-0.002, 1.5, 3}));
}

TEST(ReadSample, Whitespace) {
  EXPECT_EQ(values_of(read_sample("  4\r\n\n 2 \n\n", SampleFormat::plain)),
            (std::vector<double>{2, 4}));
  EXPECT_EQ(values_of(read_sample("3\n1\n", SampleFormat::csv)), (std::vector<double>{1, 3}));
  EXPECT_EQ(values_of(read_sample("+1.5e2\n", SampleFormat::plain)), (std::vector<double>{150}));
}

TEST(ReadSample, Errors) {
  EXPECT_THROW(read_sample("", SampleFormat::plain), ParseError);
  EXPECT_THROW(read_sample("\n  \n", SampleFormat::plain), ParseError);
  EXPECT_THROW(read_sample("x\n", SampleFormat::csv), ParseError);
  EXPECT_THROW(read_sample("[]", SampleFormat::json), ParseError);
  EXPECT_THROW(read_sample("{}", SampleFormat::json), ParseError);
  EXPECT_THROW(read_sample("[1, 1e400]", SampleFormat::json), ParseError);
  EXPECT_THROW(read_sample("[1, -1e400]", SampleFormat::json), ParseError);
  EXPECT_THROW(read_sample("[1, \"2\"]", SampleFormat::json), ParseError);
  EXPECT_THROW(read_sample("[[1]]", SampleFormat::json), ParseError);
  EXPECT_THROW(read_sample("[1, 2", SampleFormat::json), ParseError);
  EXPECT_THROW(read_sample("1\ninf\n", SampleFormat::plain), ParseError);
  EXPECT_THROW(read_sample("1\nnan\n", SampleFormat::plain), ParseError);
  EXPECT_THROW(read_sample("1e400\n", SampleFormat::plain), ParseError);
  EXPECT_THROW(read_sample("x\n1,2\n", SampleFormat::csv), ParseError);
  EXPECT_THROW(read_sample("1 2\n", SampleFormat::plain), ParseError);
}

TEST(ReadSample, ErrorsCarryTheLine) {
  EXPECT_EQ(parse_error_line("1\n2\nabc\n4\n", SampleFormat::plain), 3u);
  EXPECT_EQ(parse_error_line("x\n1\n\n1e999\n", SampleFormat::csv), 4u);
  EXPECT_EQ(parse_error_line("[1,\n 1e400,\n 2]", SampleFormat::json), 2u);
  EXPECT_EQ(parse_error_line("[1,\n 2,\n oops]", SampleFormat::json), 3u);
  try {
    read_sample("[1, 2, null]", SampleFormat::json);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.element(), 3u);
  }
}

TEST(SampleFormat, Names) {
  EXPECT_EQ(parse_sample_format("plain"), SampleFormat::plain);
  EXPECT_EQ(parse_sample_format("json"), SampleFormat::json);
  EXPECT_THROW(parse_sample_format("xml"), DomainError);
  EXPECT_EQ(sample_format_for_path("data/a.csv"), SampleFormat::csv);
  EXPECT_EQ(sample_format_for_path("a.JSON"), SampleFormat::json);
  EXPECT_EQ(sample_format_for_path("a.txt"), SampleFormat::plain);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.002), "-0.002");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(format_number(0.25 / (2.0 - 1.9)), "2.499999999999998");
  EXPECT_EQ(format_number(PseudoHistogram::kUnbounded), "inf");
}

TEST(WriteDensityCurve, TwoBinCsv) {
  EXPECT_EQ(write_density_curve(histogram({0, 0.5, 1}), CurveFormat::csv),
            "x,y\n0,0\n0,1\n0.5,1\n0.5,1\n1,1\n1,0\n");
}

TEST(WriteDensityCurve, SingleBin) {
  const auto curve = make_density_curve(histogram({0, 1}));
  ASSERT_EQ(curve.size(), 4u);
  EXPECT_EQ(curve[0], (CurvePoint{0, 0}));
  EXPECT_EQ(curve[1], (CurvePoint{0, 1}));
  EXPECT_EQ(curve[2], (CurvePoint{1, 1}));
  EXPECT_EQ(curve[3], (CurvePoint{1, 0}));
}

TEST(WriteDensityCurve, Json) {
  EXPECT_EQ(write_density_curve(histogram({0, 0.5, 1}), CurveFormat::json),
            "[[0,0],[0,1],[0.5,1],[0.5,1],[1,1],[1,0]]\n");
}

TEST(WriteDensityCurve, Svg) {
  const std::string svg = write_density_curve(histogram({0, 0.5, 1}), CurveFormat::svg);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("viewBox=\"0 0 640 400\""), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("points=\"40.000,360.000 40.000,40.000 320.000,40.000"),
            std::string::npos);
  EXPECT_NE(svg.find(">1</text>"), std::string::npos);
  EXPECT_NE(svg.find("</svg>\n"), std::string::npos);
}

TEST(WriteDensityCurve, DegenerateHistogramIsRejected) {
  const auto ph = histogram({1, 2, 2, 3});
  ASSERT_TRUE(ph.degenerate());
  EXPECT_THROW(write_density_curve(ph, CurveFormat::csv), UsageError);
}

TEST(WriteDensityCurve, BinWindow) {
  const auto curve = make_density_curve(histogram({0, 1, 3, 4}), 1, 1);
  ASSERT_EQ(curve.size(), 4u);
  EXPECT_EQ(curve.front(), (CurvePoint{1, 0}));
  EXPECT_EQ(curve[1], (CurvePoint{1, 1.0 / 6.0}));
  EXPECT_EQ(curve.back(), (CurvePoint{3, 0}));
  EXPECT_THROW(make_density_curve(histogram({0, 1}), 0, 1), UsageError);
}

TEST(WriteQuantiles, Examples) {
  const std::vector<double> p = {0.5};
  const std::vector<double> q = {2.0};
  EXPECT_EQ(write_quantiles(p, q, TableFormat::csv), "p,q\n0.5,2\n");
  const std::vector<double> ps = {0, 1};
  const std::vector<double> qs = {1, 3};
  EXPECT_EQ(write_quantiles(ps, qs, TableFormat::json), "[[0,1],[1,3]]\n");
  EXPECT_EQ(write_quantiles({}, {}, TableFormat::csv), "p,q\n");
  EXPECT_THROW(write_quantiles(ps, q, TableFormat::csv), UsageError);
}

TEST(WriteSample, Formats) {
  const Sample s{0.1, 2, -3};
  std::ostringstream plain, csv, json;
  write_sample(plain, s, SampleFormat::plain);
  write_sample(csv, s, SampleFormat::csv);
  write_sample(json, s, SampleFormat::json);
  EXPECT_EQ(plain.str(), "-3\n0.1\n2\n");
  EXPECT_EQ(csv.str(), "x\n-3\n0.1\n2\n");
  EXPECT_EQ(json.str(), "[-3,0.1,2]\n");
}

// Property checks.

TEST(DataioProperties, PlainTextRoundTripIsBitExact) {
  testing::Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> values =
        rng.normals(rng.index(1, 200), 0.0, std::pow(10.0, trial % 12 - 6));
    values.push_back(std::nextafter(1.0, 2.0));
    values.push_back(5e-324);
    const Sample s(values);
    for (auto format : {SampleFormat::plain, SampleFormat::csv, SampleFormat::json}) {
      std::ostringstream out;
      write_sample(out, s, format);
      ASSERT_EQ(read_sample(out.str(), format), s);
    }
  }
}

TEST(DataioProperties, CurveLayout) {
  testing::Rng rng(4321);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> edges = rng.uniforms(rng.index(2, 60), -10, 10);
    std::sort(edges.begin(), edges.end());
    const auto ph = histogram(edges);
    if (ph.degenerate()) continue;
    const auto curve = make_density_curve(ph);
    const std::size_t k = ph.bins();
    ASSERT_EQ(curve.size(), 2 * k + 2);
    ASSERT_EQ(curve.front().y, 0.0);
    ASSERT_EQ(curve.back().y, 0.0);
    for (std::size_t i = 0; i <= k; ++i) {
      ASSERT_EQ(curve[2 * i].x, edges[i]);
      ASSERT_EQ(curve[2 * i + 1].x, edges[i]);
    }
    for (std::size_t i = 0; i < k; ++i) {
      ASSERT_EQ(curve[2 * i + 1].y, ph.heights()[i]);
      ASSERT_EQ(curve[2 * i + 2].y, ph.heights()[i]);
    }
    // The csv export parses back to the same points.
    std::istringstream csv(write_density_curve(ph, CurveFormat::csv));
    std::string line;
    std::getline(csv, line);
    ASSERT_EQ(line, "x,y");
    for (const auto& p : curve) {
      ASSERT_TRUE(std::getline(csv, line));
      const auto comma = line.find(',');
      ASSERT_EQ(std::stod(line.substr(0, comma)), p.x);
      ASSERT_EQ(std::stod(line.substr(comma + 1)), p.y);
    }
    // So does the json export.
    const auto doc = nlohmann::json::parse(write_density_curve(ph, CurveFormat::json));
    ASSERT_EQ(doc.size(), curve.size());
    ASSERT_EQ(doc[3][1].get<double>(), curve[3].y);
  }
}

}  // namespace
}  // namespace qrde
