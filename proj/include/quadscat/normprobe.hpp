#pragma once

// Exponent regions for the continuity estimates of B_2, A and S, and
// empirical norm-ratio probes along witness families of Gaussian pairs.

#include <iosfwd>
#include <string>
#include <vector>

#include "quadscat/backscatter.hpp"
#include "quadscat/grid.hpp"

namespace quadscat {

/// sigma = (a', b', a'', b'', a, b): inputs in H_(a',b') x H_(a'',b''), output in H_(a,b).
struct ExponentTuple {
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0, a = 0.0, b = 0.0;
};

/// Parses "a1,b1,a2,b2,a,b"; throws std::invalid_argument when malformed.
ExponentTuple parse_exponent_tuple(const std::string& text);
std::string to_string(const ExponentTuple& s);

/// 0 < a < m + 1/2 + min(a', a''),  a <= a' + a'' - 1/2,  0 <= b < 1 + min(b', b''),
/// b + m <= b' + b'',  a + b < 1/2 + min(a', a'') + min(b', b'').
bool region_mainthm(const ExponentTuple& s, int m);
/// 0 <= a < m + 1 + min(a', a''),  a <= a' + a'',  b < m + 1 + min(b', b''),  b <= b' + b'',
/// a + b < m + 1 + min(a', a'') + min(b', b'').
bool region_A(const ExponentTuple& s, int m);
/// a < m + 1 + min(a', a''),  a <= a' + a''.
bool region_S(double a1, double a2, double a, int m);

/// 3 x 3 lattice varying (a, b) of center by {-da, 0, da} x {-db, 0, db}.
std::vector<ExponentTuple> sigma_lattice(const ExponentTuple& center, double da, double db);

enum class FamilyKind { Translate, Dilate, Modulate };
std::string to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& text);

struct FamilySpec {
  FamilyKind kind = FamilyKind::Translate;
  GaussianParams f;
  GaussianParams g;
  std::vector<double> params;    ///< |v|, lambda or |k| per member
  Vec3 direction{1.0, 0.0, 0.0}; ///< unit direction of v or k
};

struct WitnessPair {
  double param = 0.0;
  GaussianParams f;
  GaussianParams g;
  double box_scale = 1.0;  ///< dilate members rescale the box by 1/lambda
};

/// translate: (f(. - v), g(. - v)); dilate: (f(lambda .), g(lambda .));
/// modulate: (e^{ik.x} f, e^{ik.x} g).
std::vector<WitnessPair> witness_family(const FamilySpec& family);

enum class ProbeOperator {
  B2,  ///< ||B_2(f, g)||_(a, b)
  A,   ///< ||A(f, g)||_(a, b - m) on R^4, odd in t
};
std::string to_string(ProbeOperator op);

struct ProbeSetup {
  std::size_t N = 64;
  double L = 20.0;
  int sphere_degree = 14;
  PipelineConfig pipeline;
  ProbeOperator op = ProbeOperator::B2;
  int m = 0;
  std::size_t fit_points = 4;  ///< fit the last fit_points members (all when 0)
};

struct RatioRow {
  double param = 0.0;
  double ratio = 0.0;
  double numerator = 0.0;
  double norm_f = 0.0;
  double norm_g = 0.0;
  double L = 0.0;
  std::size_t K = 0;
};

struct RatioReport {
  FamilyKind kind = FamilyKind::Translate;
  ExponentTuple sigma;
  ProbeOperator op = ProbeOperator::B2;
  int m = 0;
  std::vector<RatioRow> rows;
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::vector<std::string> warnings;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
/// Ordinary least squares y = intercept + slope x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Abscissa of the log-log fit: log<param> for translate and modulate, log lambda for dilate.
double family_abscissa(FamilyKind kind, double param);

/// One B_2 (or A) pipeline per member; all exponent tuples are evaluated on
/// the same member fields.  Rows are ordered by parameter.
std::vector<RatioReport> ratio_sweep(const FamilySpec& family, const std::vector<ExponentTuple>& sigmas,
                                     const ProbeSetup& setup);
RatioReport ratio_sweep(const FamilySpec& family, const ExponentTuple& sigma, const ProbeSetup& setup);

/// CSV: family,param,a1,b1,a2,b2,a,b,in_main_region,in_A_region,ratio,slope,slope_stderr,warnings
/// with one row per family member and tuple.
void write_ratio_csv_header(std::ostream& out);
void write_ratio_csv(std::ostream& out, const RatioReport& report);
struct FamilyProbe {
  FamilySpec family;
  ProbeSetup setup;
};

/// Default witness family and pipeline for each kind (used by the CLI and
/// the acceptance probes).
FamilyProbe default_family_probe(FamilyKind kind);

void region_scan(std::ostream& out, const std::vector<ExponentTuple>& sigmas, const std::vector<FamilyProbe>& families);

}  // namespace quadscat
