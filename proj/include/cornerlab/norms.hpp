#pragma once

#include "cornerlab/geometry.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace cornerlab {

/// Point cloud carrying f and optionally Df. Region tag 0 marks points on the
/// interface itself.
struct SampledField {
  std::vector<Point> points;
  std::vector<int> region;  // +1, -1 or 0
  std::vector<double> values;
  std::vector<Point> gradients;  // empty or one per point

  std::size_t size() const { return points.size(); }
  bool has_gradients() const { return !gradients.empty(); }
  void push_back(const Point& p, int tag, double value) {
    points.push_back(p);
    region.push_back(tag);
    values.push_back(value);
  }
  void push_back(const Point& p, int tag, double value, const Point& grad) {
    push_back(p, tag, value);
    gradients.push_back(grad);
  }
};

/// Keep only samples with the given region tag.
SampledField restrict_region(const SampledField& f, int tag);
/// Keep samples satisfying the predicate.
SampledField restrict_to(const SampledField& f, const std::function<bool(const Point&)>& keep);
/// Same samples with values (and gradients) multiplied by c.
SampledField scaled(const SampledField& f, double c);

/// Parameters of the weighted Hölder norm. Without an edge point the weight is
/// identically 1 and the norm is the plain Hölder norm.
struct NormParams {
  int k = 0;  // 0 or 1
  double alpha = 0.5;
  double tau = 0.0;
  std::optional<Point> edge_point = Point::Zero();
  std::vector<Point> extra_edge_points;  // distance is taken to the nearest of all edge points
};

enum class PairScope { All, SameRegion };

/// Controls the pairwise Hölder scan. Clouds up to `exhaustive_limit` points
/// are scanned over all pairs; larger clouds use random pairs, pairs of
/// spatial neighbours and a refinement sweep from the best endpoints.
struct PairOptions {
  std::size_t exhaustive_limit = 3000;
  bool force_randomized = false;
  std::size_t random_pairs = 400000;
  int neighbours = 12;
  int refine_endpoints = 48;
  std::uint64_t seed = 0x5eed;
  PairScope scope = PairScope::All;
  double min_distance = 1e-9;
};

struct HolderEstimate {
  double value = 0.0;
  std::pair<int, int> argmax{-1, -1};
  std::size_t pairs_evaluated = 0;
  bool exhaustive = true;
};

struct NormReport {
  std::vector<double> seminorm_k0;  // [f]_{i,0} for i = 0..k
  double seminorm_kalpha = 0.0;
  double total = 0.0;
  std::pair<int, int> argmax_pair{-1, -1};
  std::size_t pairs_evaluated = 0;
  bool exhaustive = true;
};

/// max over samples of delta^max(i + tau, 0) |D^i f|.
double weighted_seminorm_k0(const SampledField& f, const NormParams& np, int order);

/// Pairwise sup of delta_xy^max(k + alpha + tau, 0) |D^k f(x) - D^k f(y)| / |x - y|^alpha.
HolderEstimate weighted_seminorm_kalpha(const SampledField& f, const NormParams& np,
                                        const PairOptions& opt = {});

NormReport weighted_norm(const SampledField& f, const NormParams& np, const PairOptions& opt = {});

/// Diameter of the sample cloud.
double cloud_diameter(const SampledField& f);

/// sum_j d^j [f]_{j,0} + d^(k + alpha) [f]_{k,alpha} with unweighted seminorms
/// and d the cloud diameter.
double primed_norm(const SampledField& f, int k, double alpha, const PairOptions& opt = {});

struct YNormResult {
  double value = 0.0;
  double argmax_radius = 0.0;
  std::vector<std::size_t> sample_counts;  // per radius
};

/// sup over the given radii of r^(1-s) (mean over rD of |f|^p)^(1/p), where a
/// sample x lies in rD when x / r lies in D.
YNormResult y_norm(const SampledField& f, double s, double p, const std::vector<double>& radii,
                   const std::function<bool(const Point&)>& in_domain);

/// Monte-Carlo variant: draws `samples_per_radius` points uniformly from D (via
/// `sample_domain`) and evaluates f at r x for each radius.
YNormResult y_norm(const std::function<double(const Point&)>& f, double s, double p,
                   const std::vector<double>& radii,
                   const std::function<Point(std::uint64_t index)>& sample_domain,
                   std::size_t samples_per_radius);

/// Radii 2^{-j}, j = 0..levels-1.
std::vector<double> dyadic_radii(int levels);

/// CSV with columns `x,y,region,value[,gx,gy]`; region is +, - or 0.
SampledField read_field_csv(std::istream& is);
void write_field_csv(std::ostream& os, const SampledField& f, const char* value_name = "value");

void write_norm_report(std::ostream& os, const NormReport& r, const NormParams& np);
void write_norm_report_csv(std::ostream& os, const NormReport& r, const NormParams& np);

}  // namespace cornerlab
