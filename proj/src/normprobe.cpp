#include "quadscat/normprobe.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "quadscat/spectral.hpp"

namespace quadscat {

ExponentTuple parse_exponent_tuple(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("exponent tuple: '" + item + "' is not a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(x)) {
      throw std::invalid_argument("exponent tuple: '" + item + "' is not a number");
    }
    v.push_back(x);
  }
  if (v.size() != 6) throw std::invalid_argument("exponent tuple needs six values a1,b1,a2,b2,a,b (got '" + text + "')");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

std::string to_string(const ExponentTuple& s) {
  std::ostringstream out;
  out << s.a1 << ',' << s.b1 << ',' << s.a2 << ',' << s.b2 << ',' << s.a << ',' << s.b;
  return out.str();
}

bool region_mainthm(const ExponentTuple& s, int m) {
  const double amin = std::min(s.a1, s.a2), bmin = std::min(s.b1, s.b2);
  return 0.0 < s.a && s.a < m + 0.5 + amin && s.a <= s.a1 + s.a2 - 0.5 && 0.0 <= s.b && s.b < 1.0 + bmin &&
         s.b + m <= s.b1 + s.b2 && s.a + s.b < 0.5 + amin + bmin;
}

bool region_A(const ExponentTuple& s, int m) {
  const double amin = std::min(s.a1, s.a2), bmin = std::min(s.b1, s.b2);
  return 0.0 <= s.a && s.a < m + 1.0 + amin && s.a <= s.a1 + s.a2 && s.b < m + 1.0 + bmin && s.b <= s.b1 + s.b2 &&
         s.a + s.b < m + 1.0 + amin + bmin;
}

bool region_S(double a1, double a2, double a, int m) { return a < m + 1.0 + std::min(a1, a2) && a <= a1 + a2; }

std::vector<ExponentTuple> sigma_lattice(const ExponentTuple& center, double da, double db) {
  std::vector<ExponentTuple> out;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      ExponentTuple s = center;
      s.a += i * da;
      s.b += j * db;
      out.push_back(s);
    }
  return out;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Translate: return "translate";
    case FamilyKind::Dilate: return "dilate";
    case FamilyKind::Modulate: return "modulate";
  }
  return "?";
}

FamilyKind family_from_string(const std::string& text) {
  if (text == "translate") return FamilyKind::Translate;
  if (text == "dilate") return FamilyKind::Dilate;
  if (text == "modulate") return FamilyKind::Modulate;
  throw std::invalid_argument("unknown witness family '" + text + "' (translate, dilate, modulate)");
}

std::string to_string(ProbeOperator op) { return op == ProbeOperator::B2 ? "B2" : "A"; }

std::vector<WitnessPair> witness_family(const FamilySpec& family) {
  std::vector<double> params = family.params;
  std::sort(params.begin(), params.end());
  const Vec3& d = family.direction;
  std::vector<WitnessPair> out;
  for (double p : params) {
    WitnessPair w{p, family.f, family.g, 1.0};
    switch (family.kind) {
      case FamilyKind::Translate:
        for (int i = 0; i < 3; ++i) {
          w.f.center[i] += p * d[i];
          w.g.center[i] += p * d[i];
        }
        break;
      case FamilyKind::Dilate:
        if (!(p > 0.0)) throw std::invalid_argument("witness_family: dilation factors must be positive");
        for (GaussianParams* q : {&w.f, &w.g}) {
          q->width /= p;
          for (int i = 0; i < 3; ++i) {
            q->center[i] /= p;
            q->modulation[i] *= p;
          }
        }
        w.box_scale = 1.0 / p;
        break;
      case FamilyKind::Modulate:
        for (int i = 0; i < 3; ++i) {
          w.f.modulation[i] += p * d[i];
          w.g.modulation[i] += p * d[i];
        }
        break;
    }
    out.push_back(w);
  }
  return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  }
  return fit;
}

double family_abscissa(FamilyKind kind, double param) {
  if (kind == FamilyKind::Dilate) return std::log(param);
  return 0.5 * std::log1p(param * param);
}

std::vector<RatioReport> ratio_sweep(const FamilySpec& family, const std::vector<ExponentTuple>& sigmas,
                                     const ProbeSetup& setup) {
  const std::vector<WitnessPair> members = witness_family(family);
  const SphereQuadrature quad = SphereQuadrature::product_gauss(setup.sphere_degree);

  std::vector<RatioReport> reports(sigmas.size());
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    reports[s].kind = family.kind;
    reports[s].sigma = sigmas[s];
    reports[s].op = setup.op;
    reports[s].m = setup.m;
  }

  for (const WitnessPair& w : members) {
    const double L = setup.L * w.box_scale;
    const GridSpec spec(setup.N, L);
    Diagnostics diag;
    const ScalarField f = sample_gaussian(spec, w.f, &diag);
    const bool same = w.f.center == w.g.center && w.f.width == w.g.width && w.f.modulation == w.g.modulation &&
                      w.f.amplitude == w.g.amplitude;
    const ScalarField g_store = same ? ScalarField(spec, Space::Position) : sample_gaussian(spec, w.g, &diag);
    const ScalarField& g = same ? f : g_store;

    PipelineConfig config = setup.pipeline;
    const std::size_t K = resolve_slice_index(f, g, config);

    std::optional<ScalarField> b2;
    std::optional<SpaceTimeField> A;
    if (setup.op == ProbeOperator::B2) b2.emplace(B2(f, g, quad, config, &diag));
    else A.emplace(A_time_route(f, g, quad, config, &diag));

    for (std::size_t s = 0; s < sigmas.size(); ++s) {
      const ExponentTuple& sig = sigmas[s];
      RatioRow row;
      row.param = w.param;
      row.L = L;
      row.K = K;
      row.norm_f = sobolev_norm(f, {sig.a1, sig.b1});
      row.norm_g = &f == &g && sig.a1 == sig.a2 && sig.b1 == sig.b2 ? row.norm_f : sobolev_norm(g, {sig.a2, sig.b2});
      if (b2) row.numerator = sobolev_norm(*b2, {sig.a, sig.b});
      else row.numerator = spacetime_sobolev_norm(*A, {sig.a, sig.b - setup.m}, TimeExtension::Odd);
      row.ratio = row.numerator / (row.norm_f * row.norm_g);
      reports[s].rows.push_back(row);
    }
    for (auto& r : reports) {
      for (const auto& msg : diag.warnings) {
        std::ostringstream tagged;
        tagged << "param " << w.param << ": " << msg;
        r.warnings.push_back(tagged.str());
      }
    }
  }

  for (auto& r : reports) {
    const std::size_t n = r.rows.size();
    if (n < 2) continue;
    const std::size_t use = setup.fit_points == 0 ? n : std::min(n, std::max<std::size_t>(2, setup.fit_points));
    std::vector<double> x, y;
    for (std::size_t i = n - use; i < n; ++i) {
      x.push_back(family_abscissa(r.kind, r.rows[i].param));
      y.push_back(std::log(r.rows[i].ratio));
    }
    const LineFit fit = fit_line(x, y);
    r.slope = fit.slope;
    r.slope_stderr = fit.slope_stderr;
  }
  return reports;
}

RatioReport ratio_sweep(const FamilySpec& family, const ExponentTuple& sigma, const ProbeSetup& setup) {
  return ratio_sweep(family, std::vector<ExponentTuple>{sigma}, setup).front();
}

void write_ratio_csv_header(std::ostream& out) {
  out << "family,param,a1,b1,a2,b2,a,b,in_main_region,in_A_region,ratio,slope,slope_stderr,warnings\n";
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void write_ratio_csv(std::ostream& out, const RatioReport& r) {
  std::string warnings;
  for (const auto& w : r.warnings) warnings += (warnings.empty() ? "" : "; ") + w;
  const auto& s = r.sigma;
  const std::ios_base::fmtflags flags = out.flags();
  out << std::setprecision(10);
  for (const auto& row : r.rows) {
    out << to_string(r.kind) << ',' << row.param << ',' << s.a1 << ',' << s.b1 << ',' << s.a2 << ',' << s.b2 << ','
        << s.a << ',' << s.b << ',' << (region_mainthm(s, r.m) ? "true" : "false") << ','
        << (region_A(s, r.m) ? "true" : "false") << ',' << row.ratio << ',' << r.slope << ',' << r.slope_stderr << ','
        << csv_quote(warnings) << '\n';
  }
  out.flags(flags);
}

FamilyProbe default_family_probe(FamilyKind kind) {
  FamilyProbe p;
  p.family.kind = kind;
  switch (kind) {
    case FamilyKind::Translate:
      p.family.f.width = p.family.g.width = 1.0;
      p.family.params = {4.0, 6.0, 8.0, 10.0, 12.0};
      p.setup.N = 64;
      p.setup.L = 20.0;
      p.setup.pipeline.K = 8;
      p.setup.op = ProbeOperator::B2;
      break;
    case FamilyKind::Modulate:
      p.family.f.width = p.family.g.width = 1.0;
      p.family.params = {1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
      p.setup.N = 80;
      p.setup.L = 10.0;
      p.setup.pipeline.K = 16;
      p.setup.op = ProbeOperator::A;
      break;
    case FamilyKind::Dilate:
      p.family.f.width = p.family.g.width = 1.0;
      p.family.params = {0.5, 0.7, 1.0, 1.4, 2.0};
      p.setup.N = 48;
      p.setup.L = 12.0;
      p.setup.op = ProbeOperator::B2;
      break;
  }
  return p;
}

void region_scan(std::ostream& out, const std::vector<ExponentTuple>& sigmas, const std::vector<FamilyProbe>& families) {
  write_ratio_csv_header(out);
  if (sigmas.empty()) return;
  for (const auto& fp : families) {
    for (const auto& report : ratio_sweep(fp.family, sigmas, fp.setup)) write_ratio_csv(out, report);
  }
}

}  // namespace quadscat
