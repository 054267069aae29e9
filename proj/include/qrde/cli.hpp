#pragma once

// `qrde` command-line front end. run() takes its arguments and streams
// explicitly so it can be driven in-process.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage or input error,
// 3 degenerate bins in strict mode.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "qrde/compare.hpp"
#include "qrde/dataio.hpp"
#include "qrde/error.hpp"
#include "qrde/estimators.hpp"
#include "qrde/jitter.hpp"
#include "qrde/qrde.hpp"

namespace qrde::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegenerate = 3;

namespace detail {

struct InputOptions {
  std::string path;  // empty: stdin
  std::string format;

  void add_to(CLI::App& cmd) {
    cmd.add_option("-i,--input", path, "Sample file (default: stdin)");
    cmd.add_option("--input-format", format,
                   "plain | csv | json (default: from the file extension, else plain)")
        ->check(CLI::IsMember({"plain", "csv", "json"}));
  }

  SampleFormat resolved_format() const {
    if (!format.empty()) return parse_sample_format(format);
    return path.empty() ? SampleFormat::plain : sample_format_for_path(path);
  }

  Sample read(std::istream& in) const {
    if (path.empty()) return read_sample(in, resolved_format());
    std::ifstream file(path);
    if (!file) throw UsageError("cannot open input file '" + path + "'");
    return read_sample(file, resolved_format());
  }
};

struct EstimatorOptions {
  std::string name = "hd";
  std::optional<double> trim_width;

  void add_to(CLI::App& cmd) {
    cmd.add_option("-e,--estimator", name, "hd | thd | hf7")
        ->check(CLI::IsMember({"hd", "thd", "hf7"}))
        ->capture_default_str();
    cmd.add_option("--trim-width", trim_width,
                   "THD window width D in (0, 1] (default: 1/sqrt(n))");
  }

  Estimator build() const {
    std::optional<TrimWidth> width;
    if (trim_width) width = TrimWidth(*trim_width);
    return Estimator::from_name(name, width);
  }
};

inline TableFormat table_format(const std::string& name) {
  return name == "json" ? TableFormat::json : TableFormat::csv;
}

inline int report_degenerate(const DegenerateBinReport& report, std::ostream& err) {
  err << "error: " << report.message() << '\n';
  return kExitDegenerate;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Quantile-respectful density estimation toolkit", "qrde"};
  app.require_subcommand(1);

  // quantile
  auto* quantile = app.add_subcommand("quantile", "Estimate quantiles at the given probabilities");
  detail::InputOptions q_input;
  detail::EstimatorOptions q_estimator;
  std::vector<double> q_ps;
  std::string q_format = "csv";
  q_input.add_to(*quantile);
  q_estimator.add_to(*quantile);
  quantile->add_option("-p,--p", q_ps, "Comma-separated probabilities")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  quantile->add_option("-f,--format", q_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // density
  auto* density = app.add_subcommand("density", "Build the quantile-respectful density");
  detail::InputOptions d_input;
  detail::EstimatorOptions d_estimator;
  std::size_t d_bins = kDefaultBins;
  double d_p_lo = 0.0;
  double d_p_hi = 1.0;
  bool d_permissive = false;
  std::string d_format = "csv";
  d_input.add_to(*density);
  d_estimator.add_to(*density);
  density->add_option("-k,--bins", d_bins, "Number of pseudo-histogram bins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  density->add_option("--p-lo", d_p_lo, "Lower end of the probability window to print")
      ->check(CLI::Range(0.0, 1.0));
  density->add_option("--p-hi", d_p_hi, "Upper end of the probability window to print")
      ->check(CLI::Range(0.0, 1.0));
  density->add_flag("--permissive", d_permissive,
                    "Emit degenerate bins with unbounded height instead of failing");
  density->add_option("-f,--format", d_format, "csv | json | svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();

  // jitter
  auto* jit = app.add_subcommand("jitter", "Spread tied values deterministically");
  detail::InputOptions j_input;
  double j_resolution = 0.0;
  j_input.add_to(*jit);
  jit->add_option("-s,--resolution", j_resolution, "Measurement resolution s > 0")->required();

  // compare
  auto* compare = app.add_subcommand("compare", "QRDE-HD vs Gaussian KDE vs equal-width histogram");
  detail::InputOptions c_input;
  ComparisonOptions c_options;
  std::optional<double> c_bandwidth;
  std::optional<std::size_t> c_hist_bins;
  std::string c_format = "csv";
  c_input.add_to(*compare);
  compare->add_option("-k,--bins", c_options.qrde_bins, "QRDE bins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare->add_option("--bandwidth", c_bandwidth, "KDE bandwidth (default: Silverman's rule)");
  compare->add_option("--hist-bins", c_hist_bins, "Histogram bins (default: ceil(sqrt(n)))");
  compare->add_option("--grid", c_options.grid_points, "Number of grid points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare->add_option("-f,--format", c_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "run 'qrde " << sub->get_name() << " --help' for usage\n";
    } else {
      err << "run 'qrde --help' for usage\n";
    }
    return kExitUsage;
  }

  try {
    if (quantile->parsed()) {
      const Sample sample = q_input.read(in);
      const Estimator estimator = q_estimator.build();
      std::vector<double> qs;
      qs.reserve(q_ps.size());
      for (double p : q_ps) qs.push_back(estimator(sample, p));
      write_quantiles(out, q_ps, qs, detail::table_format(q_format));
      return kExitOk;
    }

    if (density->parsed()) {
      if (!(d_p_lo < d_p_hi)) throw UsageError("--p-lo must be smaller than --p-hi");
      const Sample sample = d_input.read(in);
      const Estimator estimator = d_estimator.build();
      const auto mode = d_permissive ? DegenerateMode::permissive : DegenerateMode::strict;
      auto built = build_qrde(sample, estimator, d_bins, mode);
      if (const auto* report = std::get_if<DegenerateBinReport>(&built)) {
        return detail::report_degenerate(*report, err);
      }
      const auto& ph = std::get<PseudoHistogram>(built);
      if (ph.degenerate()) {
        err << "warning: " << DegenerateBinReport{{ph.degenerate_bins().begin(),
                                                   ph.degenerate_bins().end()}}
                                  .message()
            << '\n';
      }
      // Bins entirely inside [p_lo, p_hi]; heights are not rescaled.
      const auto k = static_cast<double>(ph.bins());
      const double first = std::ceil(d_p_lo * k - 1e-9);
      const double stop = std::floor(d_p_hi * k + 1e-9);
      if (!(stop > first)) throw UsageError("probability window contains no complete bin");
      const auto curve = make_density_curve(ph, static_cast<std::size_t>(first),
                                            static_cast<std::size_t>(stop) - 1);
      const auto format = d_format == "json" ? CurveFormat::json
                          : d_format == "svg" ? CurveFormat::svg
                                              : CurveFormat::csv;
      write_curve(out, curve, format);
      return kExitOk;
    }

    if (jit->parsed()) {
      const Resolution resolution(j_resolution);
      const Sample sample = j_input.read(in);
      write_sample(out, jitter(sample, resolution), j_input.resolved_format());
      return kExitOk;
    }

    if (compare->parsed()) {
      const Sample sample = c_input.read(in);
      c_options.bandwidth = c_bandwidth;
      c_options.hist_bins = c_hist_bins;
      const auto result = compare_estimates(sample, c_options);
      if (const auto* report = std::get_if<DegenerateBinReport>(&result)) {
        return detail::report_degenerate(*report, err);
      }
      write_comparison(out, std::get<DensityComparison>(result), detail::table_format(c_format));
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "error: input " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
               std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), in, out, err);
}

}  // namespace qrde::cli
