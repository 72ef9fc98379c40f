#include "cornerlab/norms.hpp"

#include "cornerlab/errors.hpp"
#include "cornerlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace cornerlab {

SampledField restrict_to(const SampledField& f, const std::function<bool(const Point&)>& keep) {
  SampledField out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!keep(f.points[i])) continue;
    if (f.has_gradients()) {
      out.push_back(f.points[i], f.region[i], f.values[i], f.gradients[i]);
    } else {
      out.push_back(f.points[i], f.region[i], f.values[i]);
    }
  }
  return out;
}

SampledField restrict_region(const SampledField& f, int tag) {
  SampledField out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.region[i] != tag) continue;
    if (f.has_gradients()) {
      out.push_back(f.points[i], f.region[i], f.values[i], f.gradients[i]);
    } else {
      out.push_back(f.points[i], f.region[i], f.values[i]);
    }
  }
  return out;
}

SampledField scaled(const SampledField& f, double c) {
  SampledField out = f;
  for (double& v : out.values) v *= c;
  for (Point& g : out.gradients) g *= c;
  return out;
}

namespace {

void require_nonempty(const SampledField& f, std::size_t min_size) {
  if (f.size() < min_size) {
    throw InputError(min_size <= 1 ? "norm estimate needs a nonempty sample set"
                                   : "Hölder seminorm needs at least two samples");
  }
  if (f.region.size() != f.size() || f.values.size() != f.size()) {
    throw InputError("sampled field arrays have inconsistent lengths");
  }
}

void require_gradients(const SampledField& f) {
  if (!f.has_gradients() || f.gradients.size() != f.size()) {
    throw InputError("first-order norms need per-sample gradients");
  }
}

double weight(const NormParams& np, const Point& p, double exponent) {
  if (!np.edge_point || exponent <= 0.0) return 1.0;
  double d = delta_dist(p, *np.edge_point);
  for (const Point& e : np.extra_edge_points) d = std::min(d, delta_dist(p, e));
  return std::pow(d, exponent);
}

// Evaluates Hölder quotients for one cloud and keeps the running maxima.
class QuotientScan {
 public:
  QuotientScan(const SampledField& f, const NormParams& np, const PairOptions& opt)
      : f_(f), np_(np), opt_(opt), best_(f.size(), 0.0) {
    // min(d_x, d_y)^e = min(d_x^e, d_y^e) for e >= 0, so weights are per point.
    const double exponent = std::max(np.k + np.alpha + np.tau, 0.0);
    weight_.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) weight_[i] = weight(np, f.points[i], exponent);
    half_alpha_ = 0.5 * np.alpha;
    min_d2_ = opt.min_distance * opt.min_distance;
  }

  void visit(std::size_t i, std::size_t j) {
    if (i == j) return;
    if (opt_.scope == PairScope::SameRegion && f_.region[i] != f_.region[j]) return;
    const double d2 = (f_.points[i] - f_.points[j]).squaredNorm();
    if (d2 < min_d2_) return;
    ++result_.pairs_evaluated;
    const double diff = np_.k == 0 ? std::abs(f_.values[i] - f_.values[j])
                                   : (f_.gradients[i] - f_.gradients[j]).norm();
    if (diff == 0.0) return;
    const double q = std::min(weight_[i], weight_[j]) * diff / std::pow(d2, half_alpha_);
    best_[i] = std::max(best_[i], q);
    best_[j] = std::max(best_[j], q);
    if (q > result_.value) {
      result_.value = q;
      result_.argmax = {static_cast<int>(std::min(i, j)), static_cast<int>(std::max(i, j))};
    }
  }

  void scan_against_all(std::size_t i) {
    for (std::size_t j = 0; j < f_.size(); ++j) visit(i, j);
  }

  const std::vector<double>& best() const { return best_; }
  HolderEstimate& result() { return result_; }

 private:
  const SampledField& f_;
  const NormParams& np_;
  const PairOptions& opt_;
  double half_alpha_ = 0.0;
  double min_d2_ = 0.0;
  std::vector<double> weight_;
  std::vector<double> best_;
  HolderEstimate result_;
};

// All pairs inside the nodes of a median-split tree once a node holds at most
// 2 * leaf_size points; covers close pairs at every local sampling density.
void scan_tree_pairs(QuotientScan& scan, const SampledField& f, std::vector<std::size_t> ids, int axis,
                     std::size_t leaf_size) {
  struct Task {
    std::size_t begin, end;
    int axis;
  };
  std::vector<Task> stack{{0, ids.size(), axis}};
  while (!stack.empty()) {
    const Task t = stack.back();
    stack.pop_back();
    const std::size_t n = t.end - t.begin;
    if (n <= 2 * leaf_size) {
      for (std::size_t a = t.begin; a < t.end; ++a) {
        for (std::size_t b = a + 1; b < t.end; ++b) scan.visit(ids[a], ids[b]);
      }
      continue;
    }
    const std::size_t mid = t.begin + n / 2;
    std::nth_element(ids.begin() + t.begin, ids.begin() + mid, ids.begin() + t.end,
                     [&](std::size_t a, std::size_t b) { return f.points[a][t.axis] < f.points[b][t.axis]; });
    stack.push_back({t.begin, mid, 1 - t.axis});
    stack.push_back({mid, t.end, 1 - t.axis});
  }
}

}  // namespace

double weighted_seminorm_k0(const SampledField& f, const NormParams& np, int order) {
  require_nonempty(f, 1);
  if (order < 0 || order > 1) throw InputError("derivative order must be 0 or 1");
  if (order == 1) require_gradients(f);
  const double exponent = std::max(order + np.tau, 0.0);
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double mag = order == 0 ? std::abs(f.values[i]) : f.gradients[i].norm();
    best = std::max(best, weight(np, f.points[i], exponent) * mag);
  }
  return best;
}

HolderEstimate weighted_seminorm_kalpha(const SampledField& f, const NormParams& np, const PairOptions& opt) {
  require_nonempty(f, 2);
  if (np.k < 0 || np.k > 1) throw InputError("derivative order must be 0 or 1");
  if (!(np.alpha > 0.0 && np.alpha < 1.0)) throw InputError("Hölder exponent alpha must lie in (0, 1)");
  if (np.k == 1) require_gradients(f);

  QuotientScan scan(f, np, opt);
  const std::size_t n = f.size();
  if (!opt.force_randomized && n <= opt.exhaustive_limit) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) scan.visit(i, j);
    }
    scan.result().exhaustive = true;
    return scan.result();
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t m = 0; m < opt.random_pairs; ++m) scan.visit(pick(rng), pick(rng));

  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  const auto leaf = static_cast<std::size_t>(std::max(opt.neighbours, 2));
  scan_tree_pairs(scan, f, ids, 0, leaf);
  scan_tree_pairs(scan, f, ids, 1, leaf);

  std::vector<bool> done(n, false);
  for (int round = 0; round < 2; ++round) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i]) order.push_back(i);
    }
    const auto& best = scan.best();
    const std::size_t take = std::min(order.size(), static_cast<std::size_t>(opt.refine_endpoints));
    std::partial_sort(order.begin(), order.begin() + take, order.end(),
                      [&](std::size_t a, std::size_t b) { return best[a] > best[b]; });
    order.resize(take);
    for (std::size_t i : order) {
      done[i] = true;
      scan.scan_against_all(i);
    }
  }
  scan.result().exhaustive = false;
  return scan.result();
}

NormReport weighted_norm(const SampledField& f, const NormParams& np, const PairOptions& opt) {
  NormReport r;
  for (int i = 0; i <= np.k; ++i) r.seminorm_k0.push_back(weighted_seminorm_k0(f, np, i));
  const HolderEstimate h = weighted_seminorm_kalpha(f, np, opt);
  r.seminorm_kalpha = h.value;
  r.argmax_pair = h.argmax;
  r.pairs_evaluated = h.pairs_evaluated;
  r.exhaustive = h.exhaustive;
  r.total = std::accumulate(r.seminorm_k0.begin(), r.seminorm_k0.end(), 0.0) + r.seminorm_kalpha;
  return r;
}

double cloud_diameter(const SampledField& f) {
  require_nonempty(f, 1);
  std::vector<Point> pts = f.points;
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  std::vector<Point> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t start = hull.size();
    for (const Point& p : pts) {
      while (hull.size() >= start + 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0) hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  if (hull.empty()) hull.push_back(pts.front());
  double d = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) d = std::max(d, (hull[i] - hull[j]).norm());
  }
  return d;
}

double primed_norm(const SampledField& f, int k, double alpha, const PairOptions& opt) {
  NormParams np;
  np.k = k;
  np.alpha = alpha;
  np.tau = 0.0;
  np.edge_point.reset();
  const double d = cloud_diameter(f);
  double total = 0.0;
  for (int j = 0; j <= k; ++j) total += std::pow(d, j) * weighted_seminorm_k0(f, np, j);
  if (f.size() >= 2) total += std::pow(d, k + alpha) * weighted_seminorm_kalpha(f, np, opt).value;
  return total;
}

namespace {

void check_y_params(double s, double p, const std::vector<double>& radii) {
  if (!(s > 0.0)) throw InputError("Y-norm exponent s must be positive");
  if (!(p > 1.0) || !std::isfinite(p)) throw InputError("Y-norm integrability p must lie in (1, inf)");
  if (radii.empty()) throw InputError("Y-norm needs at least one radius");
  for (double r : radii) {
    if (!(r > 0.0 && r <= 1.0)) throw InputError("Y-norm radii must lie in (0, 1]");
  }
}

}  // namespace

YNormResult y_norm(const SampledField& f, double s, double p, const std::vector<double>& radii,
                   const std::function<bool(const Point&)>& in_domain) {
  check_y_params(s, p, radii);
  require_nonempty(f, 1);
  YNormResult out;
  const double r_min = *std::min_element(radii.begin(), radii.end());
  for (double r : radii) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!in_domain(f.points[i] / r)) continue;
      sum += std::pow(std::abs(f.values[i]), p);
      ++count;
    }
    out.sample_counts.push_back(count);
    if (count == 0) {
      std::ostringstream os;
      os << "no samples inside rD for r = " << r << (r == r_min ? " (smallest radius)" : "");
      throw InputError(os.str());
    }
    const double v = std::pow(r, 1.0 - s) * std::pow(sum / static_cast<double>(count), 1.0 / p);
    if (v > out.value || out.argmax_radius == 0.0) {
      out.value = std::max(out.value, v);
      out.argmax_radius = r;
    }
  }
  return out;
}

YNormResult y_norm(const std::function<double(const Point&)>& f, double s, double p,
                   const std::vector<double>& radii,
                   const std::function<Point(std::uint64_t index)>& sample_domain,
                   std::size_t samples_per_radius) {
  check_y_params(s, p, radii);
  if (samples_per_radius == 0) throw InputError("Y-norm needs at least one sample per radius");
  YNormResult out;
  for (double r : radii) {
    double sum = 0.0;
    for (std::size_t i = 0; i < samples_per_radius; ++i) {
      sum += std::pow(std::abs(f(r * sample_domain(i))), p);
    }
    out.sample_counts.push_back(samples_per_radius);
    const double v = std::pow(r, 1.0 - s) * std::pow(sum / static_cast<double>(samples_per_radius), 1.0 / p);
    if (v > out.value || out.argmax_radius == 0.0) {
      out.value = std::max(out.value, v);
      out.argmax_radius = r;
    }
  }
  return out;
}

std::vector<double> dyadic_radii(int levels) {
  std::vector<double> radii;
  for (int j = 0; j < levels; ++j) radii.push_back(std::ldexp(1.0, -j));
  return radii;
}

SampledField read_field_csv(std::istream& is) {
  const CsvTable table = read_csv(is);
  const auto col = [&](const std::string& name, bool required) -> int {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (table.header[c] == name) return static_cast<int>(c);
    }
    if (required) throw InputError("field CSV is missing column `" + name + "`");
    return -1;
  };
  const int cx = col("x", true);
  const int cy = col("y", true);
  const int cr = col("region", true);
  int cv = col("value", false);
  if (cv < 0) cv = col("u", false);
  if (cv < 0) throw InputError("field CSV is missing column `value`");
  const int cgx = col("gx", false);
  const int cgy = col("gy", false);
  const bool grads = cgx >= 0 && cgy >= 0;

  SampledField f;
  for (const auto& row : table.rows) {
    const Point p(parse_double(row.at(cx)), parse_double(row.at(cy)));
    const std::string& tag = row.at(cr);
    int region = 0;
    if (tag == "+" || tag == "1" || tag == "+1") {
      region = 1;
    } else if (tag == "-" || tag == "-1") {
      region = -1;
    } else if (tag != "0") {
      throw InputError("field CSV: unknown region tag `" + tag + "`");
    }
    const double v = parse_double(row.at(cv));
    if (grads) {
      f.push_back(p, region, v, Point(parse_double(row.at(cgx)), parse_double(row.at(cgy))));
    } else {
      f.push_back(p, region, v);
    }
  }
  return f;
}

void write_field_csv(std::ostream& os, const SampledField& f, const char* value_name) {
  os << "x,y,region," << value_name << (f.has_gradients() ? ",gx,gy" : "") << '\n';
  for (std::size_t i = 0; i < f.size(); ++i) {
    const char tag = f.region[i] > 0 ? '+' : (f.region[i] < 0 ? '-' : '0');
    os << fmt_double(f.points[i].x()) << ',' << fmt_double(f.points[i].y()) << ',' << tag << ','
       << fmt_double(f.values[i]);
    if (f.has_gradients()) {
      os << ',' << fmt_double(f.gradients[i].x()) << ',' << fmt_double(f.gradients[i].y());
    }
    os << '\n';
  }
}

void write_norm_report(std::ostream& os, const NormReport& r, const NormParams& np) {
  os << "k = " << np.k << '\n'
     << "alpha = " << fmt_double(np.alpha) << '\n'
     << "tau = " << fmt_double(np.tau) << '\n'
     << "weighted = " << (np.edge_point ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < r.seminorm_k0.size(); ++i) {
    os << "seminorm_" << i << "_0 = " << fmt_double(r.seminorm_k0[i]) << '\n';
  }
  os << "seminorm_k_alpha = " << fmt_double(r.seminorm_kalpha) << '\n'
     << "total = " << fmt_double(r.total) << '\n'
     << "argmax_pair = " << r.argmax_pair.first << ' ' << r.argmax_pair.second << '\n'
     << "pairs_evaluated = " << r.pairs_evaluated << '\n'
     << "exhaustive = " << (r.exhaustive ? "true" : "false") << '\n';
}

void write_norm_report_csv(std::ostream& os, const NormReport& r, const NormParams& np) {
  os << "k,alpha,tau,weighted,seminorm_0,seminorm_1,seminorm_kalpha,total,pairs_evaluated,exhaustive\n";
  os << np.k << ',' << fmt_double(np.alpha) << ',' << fmt_double(np.tau) << ',' << (np.edge_point ? 1 : 0)
     << ',' << fmt_double(r.seminorm_k0.at(0)) << ','
     << (r.seminorm_k0.size() > 1 ? fmt_double(r.seminorm_k0[1]) : std::string()) << ','
     << fmt_double(r.seminorm_kalpha) << ',' << fmt_double(r.total) << ',' << r.pairs_evaluated << ','
     << (r.exhaustive ? 1 : 0) << '\n';
}

}  // namespace cornerlab
