#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vmof/core.hpp"

namespace vmof {

class UnknownProblem : public Error {
 public:
  using Error::Error;
};

class NoAnalyticFront : public Error {
 public:
  using Error::Error;
};

class UnsupportedObjectiveCount : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Test problems
// ---------------------------------------------------------------------------

/// Bi-objective, convex front f2 = 1 - sqrt(f1), optimal iff x[1..] = 0.
Vector sp1_evaluate(std::span<const double> x);

/// Tri-objective, unit-sphere front, optimal iff x[2..] = 0.5.
Vector sp2_evaluate(std::span<const double> x);

Problem make_sp1(std::size_t dim);
Problem make_sp2(std::size_t dim);

// ---------------------------------------------------------------------------
// Problem registry: descriptors look like "name:key=value,key=value"
// ---------------------------------------------------------------------------

struct ProblemDescriptor {
  std::string family;
  std::map<std::string, std::string> params;

  static ProblemDescriptor parse(std::string_view text);
  std::string str() const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
};

using ProblemFactory = std::function<Problem(const ProblemDescriptor&)>;

/// Ships with sp1 and sp2; external suites register their own families.
class ProblemRegistry {
 public:
  static ProblemRegistry& instance();

  void register_family(const std::string& family, ProblemFactory factory);
  bool contains(const std::string& family) const;
  Problem make(const ProblemDescriptor& desc) const;

 private:
  ProblemRegistry();
  std::map<std::string, ProblemFactory> factories_;
};

/// Throws UnknownProblem for unregistered families.
Problem load_external_problem(std::string_view descriptor);

// ---------------------------------------------------------------------------
// Reference fronts and indicators
// ---------------------------------------------------------------------------

enum class FrontSource { analytic, file };

struct ReferenceFront {
  std::vector<Vector> points;
  FrontSource source = FrontSource::analytic;
};

/// SP1: uniform grid in f1. SP2: simplex lattice projected on the sphere,
/// with the largest lattice that has at most k points.
ReferenceFront sample_reference_front(const Problem& problem, std::size_t k);

/// 1000 points for two objectives, 990 for three.
ReferenceFront default_reference_front(const Problem& problem);

/// 1.1 times the per-objective maximum of the reference front unless the
/// problem supplies its own point.
Vector default_hv_reference(const Problem& problem, const ReferenceFront& front);

/// Mean distance from each reference point to its nearest approximation point.
double igd(const ReferenceFront& front, const std::vector<Vector>& approx);

/// Exact hypervolume for two or three objectives.
double hypervolume(const std::vector<Vector>& approx, std::span<const double> ref_point);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Hit-or-miss estimate inside [min(approx), ref_point]; any objective count.
MonteCarloEstimate hypervolume_monte_carlo(const std::vector<Vector>& approx,
                                           std::span<const double> ref_point,
                                           std::size_t samples, Rng& rng);

// Front CSV: one point per row, f1..fm; '#' comments and non-numeric header
// lines are skipped.
void write_front_csv(const std::filesystem::path& path, const std::vector<Vector>& points);
std::vector<Vector> read_front_csv(const std::filesystem::path& path);

/// Running non-dominated closure of every objective vector seen; used for
/// anytime IGD/HV histories.
class MetricTracker {
 public:
  explicit MetricTracker(const Problem& problem);

  bool enabled() const { return !front_.points.empty(); }
  void observe(const Vector& f);
  double igd() const;
  double hv() const;
  std::size_t archive_size() const { return archive_.size(); }
  const ReferenceFront& front() const { return front_; }
  const Vector& hv_reference() const { return ref_; }

 private:
  ReferenceFront front_;
  Vector ref_;
  std::vector<Vector> archive_;
};

}  // namespace vmof
