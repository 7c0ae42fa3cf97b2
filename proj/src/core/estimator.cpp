#include "core/estimator.hpp"

#include <algorithm>

#include "core/error.hpp"
#include "core/histogram.hpp"

namespace dentropy {

std::string_view to_string(EstimatorKind k) {
  return k == EstimatorKind::Histogram ? "histogram" : "kde";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "histogram") return EstimatorKind::Histogram;
  if (name == "kde") return EstimatorKind::Kde;
  throw InvalidArgument("unknown estimator '" + std::string(name) + "' (valid: histogram, kde)");
}

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::Auto:
      return "auto";
    case Geometry::Full:
      return "full";
    case Geometry::Radial:
      return "radial";
  }
  return "auto";
}

Geometry parse_geometry(std::string_view name) {
  if (name == "auto") return Geometry::Auto;
  if (name == "full") return Geometry::Full;
  if (name == "radial") return Geometry::Radial;
  throw InvalidArgument("unknown geometry '" + std::string(name) + "' (valid: auto, full, radial)");
}

std::string EstimatorSpec::label() const {
  if (kind == EstimatorKind::Histogram) return "histogram";
  return "kde-" + std::string(to_string(kernel));
}

Geometry EstimatorSpec::resolved_geometry(int dim) const {
  if (dim == 1) return Geometry::Full;
  if (geometry != Geometry::Auto) return geometry;
  return kind == EstimatorKind::Histogram ? Geometry::Full : Geometry::Radial;
}

PreparedSample::PreparedSample(const Sample& sample, const EstimatorSpec& spec) : spec_(spec) {
  if (sample.empty()) throw InvalidArgument("sample is empty");
  if (spec.resolved_geometry(sample.dim) == Geometry::Radial) {
    working_ = radial_reduce(sample);
    offset_ = mean_log_shell_area(working_, sample.dim);
  } else {
    working_ = sample;
  }
  if (spec.kind == EstimatorKind::Kde) {
    points_ = KdePoints::from(working_);
  } else if (working_.dim == 1) {
    sorted_ = working_.data;
    std::sort(sorted_.begin(), sorted_.end());
  }
}

double PreparedSample::entropy_at(double param) const {
  if (!(param > 0.0) || !std::isfinite(param))
    throw InvalidArgument("smoothing parameter must be positive and finite");
  if (spec_.kind == EstimatorKind::Histogram) {
    const double s = working_.dim == 1 ? histogram_entropy_sorted_1d(sorted_, param)
                                       : histogram_entropy_fast(working_, param);
    return s + offset_;
  }
  const KdeEstimate est(points_, Kernel{spec_.kernel}, param);
  return kde_entropy(est, spec_.method, spec_.kde_options) + offset_;
}

}  // namespace dentropy
