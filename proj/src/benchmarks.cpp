#include "vmof/benchmarks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include "vmof/dominance.hpp"

namespace vmof {

namespace {

void check_unit_box(std::span<const double> x) {
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0)) throw OutOfBounds("decision variable outside [0, 1]");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Vector sp1_evaluate(std::span<const double> x) {
  if (x.size() < 2) throw DimensionMismatch("sp1 needs at least two variables");
  check_unit_box(x);
  double tail = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) tail += x[i];
  const double g = 1.0 + 9.0 * tail / static_cast<double>(x.size() - 1);
  const double f1 = x[0];
  return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

Vector sp2_evaluate(std::span<const double> x) {
  if (x.size() < 3) throw DimensionMismatch("sp2 needs at least three variables");
  check_unit_box(x);
  double g = 0.0;
  for (std::size_t i = 2; i < x.size(); ++i) g += (x[i] - 0.5) * (x[i] - 0.5);
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double a = x[0] * half_pi;
  const double b = x[1] * half_pi;
  return {(1.0 + g) * std::cos(a) * std::cos(b), (1.0 + g) * std::cos(a) * std::sin(b),
          (1.0 + g) * std::sin(a)};
}

Problem make_sp1(std::size_t dim) {
  if (dim < 2) throw ConfigInvalid("sp1 needs d >= 2");
  Problem p;
  p.name = "sp1:d=" + std::to_string(dim);
  p.dim = dim;
  p.n_obj = 2;
  p.lower.assign(dim, 0.0);
  p.upper.assign(dim, 1.0);
  p.evaluate = sp1_evaluate;
  p.pf_sampler = [](std::size_t k) {
    k = std::max<std::size_t>(k, 2);
    std::vector<Vector> pts;
    pts.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double f1 = static_cast<double>(i) / static_cast<double>(k - 1);
      pts.push_back({f1, 1.0 - std::sqrt(f1)});
    }
    return pts;
  };
  p.hv_reference = {1.1, 1.1};
  return p;
}

Problem make_sp2(std::size_t dim) {
  if (dim < 3) throw ConfigInvalid("sp2 needs d >= 3");
  Problem p;
  p.name = "sp2:d=" + std::to_string(dim);
  p.dim = dim;
  p.n_obj = 3;
  p.lower.assign(dim, 0.0);
  p.upper.assign(dim, 1.0);
  p.evaluate = sp2_evaluate;
  p.pf_sampler = [](std::size_t k) {
    std::size_t h = 1;
    while ((h + 2) * (h + 3) / 2 <= k) ++h;
    std::vector<Vector> pts;
    for (std::size_t i = 0; i <= h; ++i) {
      for (std::size_t j = 0; i + j <= h; ++j) {
        Vector w{static_cast<double>(i), static_cast<double>(j), static_cast<double>(h - i - j)};
        const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        for (double& c : w) c /= norm;
        pts.push_back(std::move(w));
      }
    }
    return pts;
  };
  p.hv_reference = {1.1, 1.1, 1.1};
  return p;
}

// ---------------------------------------------------------------------------

ProblemDescriptor ProblemDescriptor::parse(std::string_view text) {
  ProblemDescriptor d;
  const auto colon = text.find(':');
  d.family = trim(text.substr(0, colon));
  std::transform(d.family.begin(), d.family.end(), d.family.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (d.family.empty()) throw UnknownProblem("empty problem descriptor");
  if (colon == std::string_view::npos) return d;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ConfigInvalid("malformed descriptor parameter: " + std::string(item));
    d.params[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return d;
}

std::string ProblemDescriptor::str() const {
  std::string out = family;
  char sep = ':';
  for (const auto& [k, v] : params) {
    out += sep;
    out += k + "=" + v;
    sep = ',';
  }
  return out;
}

std::size_t ProblemDescriptor::get_size(const std::string& key, std::size_t fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::size_t value = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigInvalid("parameter " + key + " is not a non-negative integer: " + s);
  return value;
}

ProblemRegistry::ProblemRegistry() {
  factories_["sp1"] = [](const ProblemDescriptor& d) { return make_sp1(d.get_size("d", 30)); };
  factories_["sp2"] = [](const ProblemDescriptor& d) { return make_sp2(d.get_size("d", 12)); };
}

ProblemRegistry& ProblemRegistry::instance() {
  static ProblemRegistry registry;
  return registry;
}

namespace {
std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void ProblemRegistry::register_family(const std::string& family, ProblemFactory factory) {
  std::lock_guard lock(registry_mutex());
  factories_[family] = std::move(factory);
}

bool ProblemRegistry::contains(const std::string& family) const {
  std::lock_guard lock(registry_mutex());
  return factories_.count(family) > 0;
}

Problem ProblemRegistry::make(const ProblemDescriptor& desc) const {
  ProblemFactory factory;
  {
    std::lock_guard lock(registry_mutex());
    const auto it = factories_.find(desc.family);
    if (it == factories_.end()) throw UnknownProblem("unknown problem family: " + desc.family);
    factory = it->second;
  }
  Problem p = factory(desc);
  p.validate();
  return p;
}

Problem load_external_problem(std::string_view descriptor) {
  return ProblemRegistry::instance().make(ProblemDescriptor::parse(descriptor));
}

// ---------------------------------------------------------------------------

ReferenceFront sample_reference_front(const Problem& problem, std::size_t k) {
  if (!problem.has_front())
    throw NoAnalyticFront("problem " + problem.name + " has no analytic front");
  return {problem.pf_sampler(k), FrontSource::analytic};
}

ReferenceFront default_reference_front(const Problem& problem) {
  return sample_reference_front(problem, problem.n_obj == 2 ? 1000 : 990);
}

Vector default_hv_reference(const Problem& problem, const ReferenceFront& front) {
  if (!problem.hv_reference.empty()) return problem.hv_reference;
  Vector ref(problem.n_obj, -std::numeric_limits<double>::infinity());
  for (const auto& p : front.points)
    for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = std::max(ref[i], p[i]);
  for (double& r : ref) r *= 1.1;
  return ref;
}

double igd(const ReferenceFront& front, const std::vector<Vector>& approx) {
  if (front.points.empty() || approx.empty())
    throw DimensionMismatch("igd needs non-empty reference and approximation sets");
  const std::size_t m = front.points.front().size();
  for (const auto& a : approx)
    if (a.size() != m) throw DimensionMismatch("approximation point has wrong length");
  double total = 0.0;
  for (const auto& r : front.points) {
    if (r.size() != m) throw DimensionMismatch("reference point has wrong length");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : approx) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) d2 += (r[i] - a[i]) * (r[i] - a[i]);
      best = std::min(best, d2);
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(front.points.size());
}

namespace {

// Dominated area of a 2-D staircase against (r1, r2), maintained under
// insertion. Keys are f1, values f2; f2 strictly decreases with f1.
class Staircase {
 public:
  Staircase(double r1, double r2) : r1_(r1), r2_(r2) {}

  void insert(double a, double b) {
    auto it = steps_.lower_bound(a);
    if (it != steps_.end() && it->first == a && it->second <= b) return;
    const bool has_pred = it != steps_.begin();
    Map::iterator pred;
    if (has_pred) {
      pred = std::prev(it);
      if (pred->second <= b) return;
      area_ -= term(pred);
    }
    // Remove points dominated by (a, b).
    while (it != steps_.end() && it->second >= b) {
      area_ -= term(it);
      it = steps_.erase(it);
    }
    const auto inserted = steps_.emplace_hint(it, a, b);
    area_ += term(inserted);
    if (has_pred) area_ += term(pred);
  }

  double area() const { return area_; }

 private:
  using Map = std::map<double, double>;
  double term(Map::const_iterator it) const {
    const auto next = std::next(it);
    const double right = next == steps_.end() ? r1_ : next->first;
    return (right - it->first) * (r2_ - it->second);
  }

  double r1_, r2_;
  Map steps_;
  double area_ = 0.0;
};

}  // namespace

double hypervolume(const std::vector<Vector>& approx, std::span<const double> ref_point) {
  const std::size_t m = ref_point.size();
  if (m < 2 || m > 3)
    throw UnsupportedObjectiveCount("exact hypervolume supports two or three objectives");
  std::vector<const Vector*> pts;
  for (const auto& p : approx) {
    if (p.size() != m) throw DimensionMismatch("point and reference differ in length");
    bool inside = true;
    for (std::size_t i = 0; i < m; ++i) inside = inside && p[i] < ref_point[i];
    if (inside) pts.push_back(&p);
  }
  if (pts.empty()) return 0.0;

  if (m == 2) {
    Staircase stairs(ref_point[0], ref_point[1]);
    for (const Vector* p : pts) stairs.insert((*p)[0], (*p)[1]);
    return stairs.area();
  }

  std::sort(pts.begin(), pts.end(),
            [](const Vector* a, const Vector* b) { return (*a)[2] < (*b)[2]; });
  Staircase stairs(ref_point[0], ref_point[1]);
  double volume = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    stairs.insert((*pts[i])[0], (*pts[i])[1]);
    const double top = i + 1 < pts.size() ? (*pts[i + 1])[2] : ref_point[2];
    volume += stairs.area() * (top - (*pts[i])[2]);
  }
  return volume;
}

MonteCarloEstimate hypervolume_monte_carlo(const std::vector<Vector>& approx,
                                           std::span<const double> ref_point,
                                           std::size_t samples, Rng& rng) {
  const std::size_t m = ref_point.size();
  std::vector<Vector> pts;
  for (const auto& p : approx) {
    if (p.size() != m) throw DimensionMismatch("point and reference differ in length");
    bool inside = true;
    for (std::size_t i = 0; i < m; ++i) inside = inside && p[i] < ref_point[i];
    if (inside) pts.push_back(p);
  }
  if (pts.empty() || samples == 0) return {};
  Vector lo(ref_point.begin(), ref_point.end());
  for (const auto& p : pts)
    for (std::size_t i = 0; i < m; ++i) lo[i] = std::min(lo[i], p[i]);
  double box = 1.0;
  for (std::size_t i = 0; i < m; ++i) box *= ref_point[i] - lo[i];

  std::size_t hits = 0;
  Vector s(m);
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t i = 0; i < m; ++i) s[i] = lo[i] + uniform01(rng) * (ref_point[i] - lo[i]);
    for (const auto& p : pts) {
      bool covers = true;
      for (std::size_t i = 0; i < m && covers; ++i) covers = p[i] <= s[i];
      if (covers) {
        ++hits;
        break;
      }
    }
  }
  const double n = static_cast<double>(samples);
  const double frac = static_cast<double>(hits) / n;
  return {box * frac, box * std::sqrt(frac * (1.0 - frac) / n)};
}

void write_front_csv(const std::filesystem::path& path, const std::vector<Vector>& points) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  if (!points.empty()) {
    for (std::size_t i = 0; i < points.front().size(); ++i)
      out << (i ? "," : "") << 'f' << (i + 1);
    out << '\n';
  }
  for (const auto& p : points) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
    out << '\n';
  }
}

std::vector<Vector> read_front_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Vector> points;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    Vector row;
    bool numeric = true;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const std::string c = trim(cell);
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) continue;
    if (!points.empty() && row.size() != points.front().size())
      throw DimensionMismatch("front file rows differ in length");
    points.push_back(std::move(row));
  }
  return points;
}

// ---------------------------------------------------------------------------

MetricTracker::MetricTracker(const Problem& problem) {
  if (!problem.has_front()) return;
  front_ = default_reference_front(problem);
  ref_ = default_hv_reference(problem, front_);
}

void MetricTracker::observe(const Vector& f) {
  for (const auto& a : archive_) {
    if (a == f || dominates(a, f)) return;
  }
  std::erase_if(archive_, [&](const Vector& a) { return dominates(f, a); });
  archive_.push_back(f);
}

double MetricTracker::igd() const {
  if (!enabled() || archive_.empty()) return std::numeric_limits<double>::quiet_NaN();
  return vmof::igd(front_, archive_);
}

double MetricTracker::hv() const {
  if (!enabled() || archive_.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (ref_.size() > 3) return std::numeric_limits<double>::quiet_NaN();
  return hypervolume(archive_, ref_);
}

}  // namespace vmof
