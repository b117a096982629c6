#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "blindinv/bench.hpp"
#include "blindinv/error.hpp"
#include "csv_util.hpp"

namespace blindinv {

namespace {

struct ReferenceCell {
  ModelChoice model;
  double eps;
  double delta;
  double rmise;
};

// Published Monte Carlo RMISE values for the two reference experiments.
constexpr ReferenceCell kReference[] = {
    {ModelChoice::Heat, 1e-4, 1e-4, 0.5728}, {ModelChoice::Heat, 1e-6, 1e-4, 0.3173},
    {ModelChoice::Heat, 1e-8, 1e-4, 0.5656}, {ModelChoice::Heat, 1e-4, 1e-6, 0.5515},
    {ModelChoice::Heat, 1e-6, 1e-6, 0.3353}, {ModelChoice::Heat, 1e-8, 1e-6, 0.0545},
    {ModelChoice::Heat, 1e-4, 1e-8, 0.5548}, {ModelChoice::Heat, 1e-6, 1e-8, 0.3269},
    {ModelChoice::Heat, 1e-8, 1e-8, 0.0512}, {ModelChoice::Deconvolution, 1e-2, 1e-2, 0.1142},
    {ModelChoice::Deconvolution, 1e-3, 1e-3, 0.0174},
};

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

std::optional<double> reference_rmise(ModelChoice model, double eps, double delta) {
  for (const auto& r : kReference) {
    if (r.model == model && close(r.eps, eps) && close(r.delta, delta)) return r.rmise;
  }
  return std::nullopt;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + p.string());
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& p) {
  os.flush();
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + p.string());
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_rmise_csv(std::ostream& os, const ExperimentReport& report) {
  os << "eps,delta,rmise_post,rmise_galerkin,rmse_theta,n_mc\n";
  for (const auto& c : report.cells) {
    os << format_double(c.eps) << ',' << format_double(c.delta) << ',' << format_double(c.rmise_post) << ','
       << format_double(c.rmise_galerkin) << ',' << format_double(c.rmse_theta) << ',' << c.n_mc << '\n';
  }
}

std::vector<RmiseRow> read_rmise_csv(std::istream& is) {
  std::vector<RmiseRow> out;
  for (const auto& row : detail::read_csv(is, {"eps", "delta", "rmise_post", "rmise_galerkin", "rmse_theta", "n_mc"})) {
    out.push_back({detail::parse_double(row[0]), detail::parse_double(row[1]), detail::parse_double(row[2]),
                   detail::parse_double(row[3]), detail::parse_double(row[4]),
                   static_cast<int>(detail::parse_size(row[5]))});
  }
  return out;
}

void write_level_histogram_csv(std::ostream& os, const ExperimentReport& report) {
  std::map<int, int> total;
  for (const auto& c : report.cells) {
    for (const auto& [level, count] : c.level_hist) total[level] += count;
  }
  os << "level,count\n";
  for (const auto& [level, count] : total) os << level << ',' << count << '\n';
}

std::string render_cell_svg(const CellResult& cell, std::size_t n_points, std::size_t n_draws) {
  std::ostringstream os;
  constexpr double width = 640, height = 400, margin = 40;
  if (!cell.example) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\"></svg>\n";
    return os.str();
  }
  const CellExample& ex = *cell.example;
  std::vector<std::pair<std::vector<GridPoint>, std::string>> curves;
  const auto draws = std::min(n_draws, ex.draws.size());
  for (std::size_t i = 0; i < draws; ++i) {
    curves.emplace_back(evaluate_on_grid(ex.draws[i], n_points),
                        "stroke=\"#d62728\" stroke-width=\"0.6\" stroke-dasharray=\"2,2\" stroke-opacity=\"0.7\"");
  }
  // The truth is drawn from its closed form; the other curves are series syntheses.
  std::vector<GridPoint> truth(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n_points - 1);
    truth[i] = {x, f0_value(x)};
  }
  curves.emplace_back(std::move(truth), "stroke=\"black\" stroke-width=\"1.5\"");
  curves.emplace_back(evaluate_on_grid(ex.galerkin, n_points), "stroke=\"#1f77b4\" stroke-width=\"1.2\"");
  curves.emplace_back(evaluate_on_grid(ex.posterior_mean, n_points), "stroke=\"#d62728\" stroke-width=\"1.5\"");

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& [pts, style] : curves) {
    for (const auto& p : pts) {
      if (std::isfinite(p.value)) {
        lo = std::min(lo, p.value);
        hi = std::max(hi, p.value);
      }
    }
  }
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  auto sx = [&](double x) { return margin + x * (width - 2 * margin); };
  auto sy = [&](double y) { return height - margin - (y - lo) / (hi - lo) * (height - 2 * margin); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n"
     << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n"
     << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"13\">eps=" << short_num(cell.eps)
     << " delta=" << short_num(cell.delta) << " level=" << ex.posterior_mean.level() << "</text>\n"
     << "<line x1=\"" << coord(sx(0)) << "\" y1=\"" << coord(sy(0)) << "\" x2=\"" << coord(sx(1)) << "\" y2=\""
     << coord(sy(0)) << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
  for (const auto& [pts, style] : curves) {
    os << "<polyline fill=\"none\" " << style << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << coord(sx(pts[i].x)) << ',' << coord(sy(pts[i].value));
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                               unsigned formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  if (formats & kReportCsv) {
    {
      const auto p = dir / "rmise.csv";
      auto os = open_out(p);
      write_rmise_csv(os, report);
      finish(os, p);
      written.push_back(p);
    }
    {
      const auto p = dir / "lepski_hist.csv";
      auto os = open_out(p);
      write_level_histogram_csv(os, report);
      finish(os, p);
      written.push_back(p);
    }
    {
      const auto p = dir / "config.txt";
      auto os = open_out(p);
      os << report.config.echo();
      finish(os, p);
      written.push_back(p);
    }
    {
      const auto p = dir / "replications.csv";
      auto os = open_out(p);
      os << "eps,delta,replication,seed,level,err2_post,err2_galerkin,err2_theta,acceptance,cutoff\n";
      for (const auto& c : report.cells) {
        for (const auto& r : c.records) {
          os << format_double(c.eps) << ',' << format_double(c.delta) << ',' << r.replication << ',' << r.seed << ','
             << r.level << ',' << format_double(r.err2_post) << ',' << format_double(r.err2_galerkin) << ','
             << format_double(r.err2_theta) << ',' << format_double(r.acceptance) << ','
             << (r.cutoff_tripped ? 1 : 0) << '\n';
        }
      }
      finish(os, p);
      written.push_back(p);
    }
    {
      // Run metadata that is not reproducible byte for byte lives here only.
      const auto p = dir / "summary.txt";
      auto os = open_out(p);
      os << "wall_seconds = " << report.wall_seconds << '\n' << "partial = " << (report.partial ? 1 : 0) << '\n';
      for (const auto& c : report.cells) {
        os << "cell eps=" << short_num(c.eps) << " delta=" << short_num(c.delta) << " rmise_post=" << c.rmise_post;
        if (const auto ref = reference_rmise(report.config.pipeline(), c.eps, c.delta)) {
          const double dev = std::abs(c.rmise_post - *ref) / *ref;
          os << " reference=" << *ref << " deviation=" << dev << (dev > 0.5 ? " FLAG" : "");
        }
        os << '\n';
      }
      finish(os, p);
      written.push_back(p);
    }
  }
  if (formats & kReportSvg) {
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
      const auto& c = report.cells[i];
      const auto p = dir / ("cell_" + std::to_string(i) + "_eps" + short_num(c.eps) + "_delta" + short_num(c.delta) + ".svg");
      auto os = open_out(p);
      os << render_cell_svg(c);
      finish(os, p);
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace blindinv
