#include "curvlab/domain.hpp"

#include <fstream>
#include <sstream>

namespace curvlab {

FourierProfile FourierProfile::constant(double radius) {
  FourierProfile p;
  p.cos_coeffs = Eigen::VectorXd::Constant(1, radius);
  return p;
}

double FourierProfile::value(double t) const {
  double v = 0.0;
  for (int m = 0; m < cos_coeffs.size(); ++m) v += cos_coeffs[m] * std::cos(m * t);
  for (int m = 0; m < sin_coeffs.size(); ++m) v += sin_coeffs[m] * std::sin((m + 1) * t);
  return v;
}

double FourierProfile::deriv(double t) const {
  double v = 0.0;
  for (int m = 1; m < cos_coeffs.size(); ++m) v -= m * cos_coeffs[m] * std::sin(m * t);
  for (int m = 0; m < sin_coeffs.size(); ++m) v += (m + 1) * sin_coeffs[m] * std::cos((m + 1) * t);
  return v;
}

double FourierProfile::second_deriv(double t) const {
  double v = 0.0;
  for (int m = 1; m < cos_coeffs.size(); ++m) v -= m * m * cos_coeffs[m] * std::cos(m * t);
  for (int m = 0; m < sin_coeffs.size(); ++m)
    v -= (m + 1) * (m + 1) * sin_coeffs[m] * std::sin((m + 1) * t);
  return v;
}

double FourierProfile::min_value(int samples) const {
  double m = value(0.0);
  for (int i = 1; i < samples; ++i) m = std::min(m, value(2.0 * M_PI * i / samples));
  return m;
}

double FourierProfile::max_value(int samples) const {
  double m = value(0.0);
  for (int i = 1; i < samples; ++i) m = std::max(m, value(2.0 * M_PI * i / samples));
  return m;
}

double boundary_curvature(const DomainSpec& d, double t) {
  const double rho = d.profile.value(t);
  const double rho1 = d.profile.deriv(t);
  const double rho2 = d.profile.second_deriv(t);
  const double th = warp(d.surface.curvature, rho);
  const double th1 = warp_deriv(d.surface.curvature, rho);
  const double speed = std::sqrt(rho1 * rho1 + th * th);
  // kappa = (Theta^2 Theta' + 2 Theta' rho'^2 - Theta rho'') / speed^3,
  // the curvature of r = rho(t) in the metric dr^2 + Theta(r)^2 dt^2.
  return (th * th * th1 + 2.0 * th1 * rho1 * rho1 - th * rho2) / (speed * speed * speed);
}

BoundaryPoint boundary_point(const DomainSpec& d, double t) {
  BoundaryPoint bp;
  bp.t = t;
  const double rho = d.profile.value(t);
  const double rho1 = d.profile.deriv(t);
  const double th = warp(d.surface.curvature, rho);
  const double speed = std::sqrt(rho1 * rho1 + th * th);
  bp.position = chart_from_polar(d.surface, d.pole, rho, t);
  const Matrix2d J = polar_chart_jacobian(d.surface, d.pole, rho, t);
  // Velocity (rho', 1) and unit outward normal (Theta/speed, -rho'/(Theta*speed))
  // in the (d/dr, d/dt) polar frame.
  bp.unit_tangent = {bp.position, J * Vector2d(rho1 / speed, 1.0 / speed)};
  bp.outward_normal = {bp.position, J * Vector2d(th / speed, -rho1 / (th * speed))};
  bp.curvature = boundary_curvature(d, t);
  return bp;
}

HypothesesReport check_hypotheses(const DomainSpec& d) {
  HypothesesReport rep;
  const int n = 1024;
  double kmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) kmin = std::min(kmin, boundary_curvature(d, 2.0 * M_PI * i / n));
  rep.min_curvature = kmin;
  rep.curvature_positive = kmin > 0.0;

  std::ostringstream detail;
  detail << "min boundary curvature " << kmin;

  switch (d.surface.curvature) {
    case Curvature::Flat:
      rep.ok = rep.curvature_positive;
      break;
    case Curvature::Sphere: {
      const int m = 512;
      std::vector<Vector3d> pts(m);
      for (int i = 0; i < m; ++i) {
        const double t = 2.0 * M_PI * i / m;
        pts[i] = s2_embed(chart_from_polar(d.surface, d.pole, d.profile.value(t), t));
      }
      double diam = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          diam = std::max(diam, std::acos(std::clamp(pts[i].dot(pts[j]), -1.0, 1.0)));
      rep.diameter = diam;
      rep.diameter_ok = diam < M_PI_2;
      rep.ok = rep.curvature_positive && rep.diameter_ok;
      detail << "; diameter " << diam << (rep.diameter_ok ? " < pi/2" : " >= pi/2");
      break;
    }
    case Curvature::Hyperbolic:
      rep.horoconvex = kmin >= 1.0 - 1e-12;
      rep.ok = rep.horoconvex;
      detail << (rep.horoconvex ? "; horoconvex" : "; not horoconvex");
      break;
  }
  if (!rep.curvature_positive) detail << "; boundary not strictly convex";
  rep.detail = detail.str();
  return rep;
}

int count_boundary_tangencies(const DomainSpec& d, const KillingField& K, int samples) {
  std::vector<double> g(samples);
  double scale = 0.0, kscale = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * M_PI * i / samples;
    const BoundaryPoint bp = boundary_point(d, t);
    const Vector2d kv = killing_value(K, bp.position);
    const Matrix2d metric = metric_at(d.surface, bp.position);
    g[i] = inner(metric, kv, bp.outward_normal.components);
    scale = std::max(scale, std::abs(g[i]));
    kscale = std::max(kscale, std::sqrt(inner(metric, kv, kv)));
  }
  if (scale < 1e-10 * std::max(kscale, 1e-300))
    throw Error(ErrorCode::DegenerateTangency, "K is tangent to the boundary everywhere");
  int count = 0;
  for (int i = 0; i < samples; ++i) {
    const double a = g[i], b = g[(i + 1) % samples];
    if (a == 0.0 || a * b < 0.0) ++count;
  }
  // A local minimum of |g| well below scale without a sign change indicates a
  // non-transversal tangency at this resolution.
  for (int i = 0; i < samples; ++i) {
    const double prev = g[(i + samples - 1) % samples], cur = g[i], next = g[(i + 1) % samples];
    if (std::abs(cur) <= std::abs(prev) && std::abs(cur) <= std::abs(next) &&
        std::abs(cur) < 1e-7 * scale && prev * cur > 0.0 && cur * next > 0.0) {
      std::ostringstream msg;
      msg << "non-transversal tangency near t = " << 2.0 * M_PI * i / samples;
      throw Error(ErrorCode::DegenerateTangency, msg.str());
    }
  }
  return count;
}

namespace {

DomainSpec make_domain(const ModelSurface& s, const ChartPoint& pole, std::vector<double> cosc,
                       std::vector<double> sinc, const std::string& label) {
  DomainSpec d;
  d.surface = s;
  d.pole = pole;
  d.profile.cos_coeffs = Eigen::Map<Eigen::VectorXd>(cosc.data(), cosc.size());
  d.profile.sin_coeffs = Eigen::Map<Eigen::VectorXd>(sinc.data(), sinc.size());
  d.label = label;
  return d;
}

}  // namespace

std::vector<DomainSpec> builtin_domains() {
  const ModelSurface r2 = ModelSurface::R2();
  const ModelSurface s2 = ModelSurface::S2();
  const ModelSurface h2 = ModelSurface::H2();
  const ChartPoint origin(r2, 0.0, 0.0);
  const ChartPoint equator(s2, M_PI_2, M_PI);
  const ChartPoint disk_center(h2, 0.0, 0.0);

  std::vector<DomainSpec> cat;
  // Euclidean: disc and two strictly convex ovals.
  cat.push_back(make_domain(r2, origin, {1.0}, {}, "euclid_disc_R1"));
  cat.push_back(make_domain(r2, origin, {1.0, 0.0, 0.15}, {}, "euclid_oval"));
  cat.push_back(make_domain(r2, origin, {1.0, 0.08, 0.08}, {}, "euclid_egg"));
  // Non-convex control: kappa < 0 on two arcs.
  cat.push_back(make_domain(r2, origin, {1.0, 0.0, 0.35}, {}, "euclid_nonconvex"));

  // Spherical caps and ovals about an equator point (away from chart poles).
  cat.push_back(make_domain(s2, equator, {0.6}, {}, "sphere_cap_r0.6"));
  cat.push_back(make_domain(s2, equator, {0.5}, {}, "sphere_cap_r0.5"));
  cat.push_back(make_domain(s2, equator, {0.5, 0.0, 0.06}, {}, "sphere_oval"));
  cat.push_back(make_domain(s2, equator, {M_PI / 3.0}, {}, "sphere_cap_diam_violation"));
  cat.push_back(make_domain(s2, equator, {M_PI_2}, {}, "sphere_hemisphere"));

  // Hyperbolic: geodesic discs (always horoconvex), one horoconvex oval, and
  // one convex-but-not-horoconvex elongated domain.
  cat.push_back(make_domain(h2, disk_center, {1.0}, {}, "hyp_disc_r1"));
  cat.push_back(make_domain(h2, disk_center, {2.0}, {}, "hyp_disc_r2"));
  cat.push_back(make_domain(h2, disk_center, {0.8, 0.0, 0.04}, {}, "hyp_oval"));
  cat.push_back(make_domain(h2, disk_center, {1.4, 0.0, 0.35}, {}, "hyp_convex_not_horo"));
  return cat;
}

DomainSpec builtin_domain(const std::string& label) {
  for (auto& d : builtin_domains())
    if (d.label == label) return d;
  throw Error(ErrorCode::InvalidArgument, "unknown catalogue domain '" + label + "'");
}

std::string serialize_domain(const DomainSpec& d) {
  std::ostringstream out;
  out.precision(17);
  out << "surface = " << d.surface.name() << "\n";
  out << "pole = " << d.pole.x() << " " << d.pole.y() << "\n";
  out << "fourier_cos =";
  for (int i = 0; i < d.profile.cos_coeffs.size(); ++i) out << " " << d.profile.cos_coeffs[i];
  out << "\nfourier_sin =";
  for (int i = 0; i < d.profile.sin_coeffs.size(); ++i) out << " " << d.profile.sin_coeffs[i];
  out << "\nlabel = " << d.label << "\n";
  return out.str();
}

namespace {

std::vector<double> parse_numbers(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

DomainSpec parse_domain(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string surface_name, label;
  std::vector<double> pole, cosc, sinc;
  bool have_surface = false, have_cos = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    val.erase(0, val.find_first_not_of(" \t"));
    val.erase(val.find_last_not_of(" \t\r") + 1);
    if (key == "surface") {
      surface_name = val;
      have_surface = true;
    } else if (key == "pole") {
      pole = parse_numbers(val);
    } else if (key == "fourier_cos") {
      cosc = parse_numbers(val);
      have_cos = true;
    } else if (key == "fourier_sin") {
      sinc = parse_numbers(val);
    } else if (key == "label") {
      label = val;
    }
  }
  if (!have_surface || pole.size() != 2 || !have_cos || cosc.empty())
    throw Error(ErrorCode::InvalidArgument, "domain record needs surface, pole and fourier_cos");
  DomainSpec d = make_domain(surface_from_name(surface_name),
                             ChartPoint(surface_from_name(surface_name), pole[0], pole[1]), cosc,
                             sinc, label.empty() ? "unnamed" : label);
  const double rmin = d.profile.min_value();
  if (rmin <= 0.0) throw Error(ErrorCode::InvalidArgument, "profile must stay positive");
  if (d.surface.curvature == Curvature::Sphere && d.profile.max_value() >= M_PI)
    throw Error(ErrorCode::InvalidArgument, "spherical profile must stay below pi");
  return d;
}

DomainSpec load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open domain file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_domain(buf.str());
}

}  // namespace curvlab
