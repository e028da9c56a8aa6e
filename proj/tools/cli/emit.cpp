#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "escort/error.hpp"
#include "execute.hpp"

namespace escort::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + p.string());
  f.precision(std::numeric_limits<double>::max_digits10);
  return f;
}

// ray.csv columns: t_level, t_base, re, im, residual. Symbolic points leave re, im empty.
void write_ray_csv(const fs::path& p, const std::vector<RayPoint>& line) {
  auto f = open(p);
  f << "t_level,t_base,re,im,residual\n";
  for (const auto& pt : line) {
    f << pt.potential.level() << ',' << static_cast<double>(pt.potential.base()) << ',';
    if (pt.coordinate)
      f << static_cast<double>(pt.coordinate->real()) << ',' << static_cast<double>(pt.coordinate->imag());
    else
      f << ',';
    f << ',' << static_cast<double>(pt.residual) << '\n';
  }
}

void write_convergence_csv(const fs::path& p, const std::vector<StepReport>& history) {
  auto f = open(p);
  f << "iteration,displacement,ratio,residual\n";
  for (const auto& s : history) {
    f << s.iteration << ',' << static_cast<double>(s.displacement) << ',';
    if (s.ratio) f << static_cast<double>(*s.ratio);
    f << ',' << static_cast<double>(s.solver_residual) << '\n';
  }
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  void add(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  bool empty() const { return !(x0 <= x1); }
};

class Svg {
 public:
  Svg(Box b, double size) : box_(b), size_(size) {
    if (box_.empty()) box_ = Box{-1, 1, -1, 1};
    const double pad = 0.05 * std::max({box_.x1 - box_.x0, box_.y1 - box_.y0, 1e-9});
    box_.x0 -= pad;
    box_.x1 += pad;
    box_.y0 -= pad;
    box_.y1 += pad;
    scale_ = size_ / std::max(box_.x1 - box_.x0, box_.y1 - box_.y0);
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_ << "\" height=\"" << size_ << "\">\n";
  }
  double X(double x) const { return (x - box_.x0) * scale_; }
  double Y(double y) const { return (box_.y1 - y) * scale_; }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* colour) {
    out_ << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : pts)
      if (std::isfinite(x) && std::isfinite(y)) out_ << X(x) << ',' << Y(y) << ' ';
    out_ << "\"/>\n";
  }
  void circle(double x, double y, double r_px, const char* colour, bool filled) {
    out_ << "<circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"" << r_px << "\" stroke=\"" << colour
         << "\" fill=\"" << (filled ? colour : "none") << "\"/>\n";
  }
  void disk(double r, const char* colour) {
    out_ << "<circle cx=\"" << X(0) << "\" cy=\"" << Y(0) << "\" r=\"" << r * scale_ << "\" stroke=\"" << colour
         << "\" stroke-dasharray=\"4 3\" fill=\"none\"/>\n";
  }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  Box box_;
  double size_;
  double scale_ = 1;
  std::ostringstream out_;
};

void write_geometry_svg(const fs::path& p, const RunReport& r) {
  Box b;
  for (const auto& line : r.rays)
    for (const auto& pt : line)
      if (pt.coordinate) b.add(static_cast<double>(pt.coordinate->real()), static_cast<double>(pt.coordinate->imag()));
  if (r.spider) {
    for (const auto& leg : r.spider->legs)
      for (const auto& v : leg.vertices) b.add(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    if (r.spider->rho) {
      const auto rho = static_cast<double>(*r.spider->rho);
      b.add(-rho, -rho);
      b.add(rho, rho);
    }
  }
  Svg svg(b, 800);
  for (const auto& line : r.rays) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& pt : line)
      if (pt.coordinate)
        pts.emplace_back(static_cast<double>(pt.coordinate->real()), static_cast<double>(pt.coordinate->imag()));
    svg.polyline(pts, "steelblue");
    for (const auto& [x, y] : pts) svg.circle(x, y, 2, "steelblue", true);
  }
  if (r.spider) {
    for (const auto& leg : r.spider->legs) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& v : leg.vertices) pts.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
      svg.polyline(pts, "darkgreen");
    }
    for (const auto& lp : r.spider->points)
      svg.circle(static_cast<double>(lp.position.real()), static_cast<double>(lp.position.imag()), 3, "crimson", true);
    if (r.spider->rho) svg.disk(static_cast<double>(*r.spider->rho), "gray");
  }
  open(p) << svg.finish();
}

// Displacement on a log10 scale against the iteration count.
void write_convergence_svg(const fs::path& p, const std::vector<StepReport>& history) {
  Box b;
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : history) {
    const double y = std::log10(std::max(static_cast<double>(s.displacement), 1e-300));
    pts.emplace_back(s.iteration, y);
    b.add(s.iteration, y);
  }
  Svg svg(b, 600);
  svg.polyline(pts, "steelblue");
  for (const auto& [x, y] : pts) svg.circle(x, y, 2, "steelblue", true);
  open(p) << svg.finish();
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "records") return Format::Records;
  if (name == "csv") return Format::Csv;
  if (name == "svg") return Format::Svg;
  throw Error(ErrorKind::Validation, "unknown format '" + std::string(name) + "' (valid: records, csv, svg)");
}

std::vector<fs::path> emit(const RunReport& report, Format format, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  switch (format) {
    case Format::Records: {
      auto f = open(dir / "records.jsonl");
      for (const auto& r : report.records) f << r.dump() << '\n';
      written.push_back(dir / "records.jsonl");
      break;
    }
    case Format::Csv: {
      if (report.rays.empty()) {
        write_ray_csv(dir / "ray.csv", {});
        written.push_back(dir / "ray.csv");
      }
      for (std::size_t i = 0; i < report.rays.size(); ++i) {
        const auto name = i == 0 ? std::string("ray.csv") : "ray_" + std::to_string(i) + ".csv";
        write_ray_csv(dir / name, report.rays[i]);
        written.push_back(dir / name);
      }
      write_convergence_csv(dir / "convergence.csv", report.history ? *report.history : std::vector<StepReport>{});
      written.push_back(dir / "convergence.csv");
      break;
    }
    case Format::Svg: {
      const bool geometry = !report.rays.empty() || report.spider.has_value();
      if (!geometry && !report.history)
        throw Error(ErrorKind::Validation,
                    "svg needs a ray, spider or convergence payload; '" + report.command + "' produced none");
      if (geometry) {
        write_geometry_svg(dir / "plot.svg", report);
        written.push_back(dir / "plot.svg");
      }
      if (report.history) {
        write_convergence_svg(dir / "convergence.svg", *report.history);
        written.push_back(dir / "convergence.svg");
      }
      break;
    }
  }
  return written;
}

}  // namespace escort::cli
