#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "core/kde.hpp"
#include "core/sample.hpp"

namespace dentropy {

enum class EstimatorKind { Histogram, Kde };

/// How a d > 1 sample is handed to the estimator.
///   Full    estimate in all d coordinates.
///   Radial  estimate the density of |x| in 1D and add the mean log shell
///           area, which gives the entropy of the matching isotropic density.
///   Auto    Full for histograms, Radial for kernel estimates.
enum class Geometry { Auto, Full, Radial };

std::string_view to_string(EstimatorKind k);
EstimatorKind parse_estimator_kind(std::string_view name);
std::string_view to_string(Geometry g);
Geometry parse_geometry(std::string_view name);

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Histogram;
  KernelId kernel = KernelId::Epanechnikov;
  EntropyMethod method = EntropyMethod::Quadrature;
  Geometry geometry = Geometry::Auto;
  KdeOptions kde_options;

  /// "histogram" or "kde-<kernel>", used in file names and reports.
  std::string label() const;
  /// Geometry after resolving Auto for a sample of dimension dim.
  Geometry resolved_geometry(int dim) const;
};

/// A sample preprocessed once (sorted, or radially reduced and sorted) so the
/// entropy can be evaluated at many smoothing parameters.
class PreparedSample {
 public:
  PreparedSample(const Sample& sample, const EstimatorSpec& spec);

  /// Plug-in entropy (nats) at bin width or bandwidth `param`.
  double entropy_at(double param) const;

  /// The data the estimator actually sees: the sample itself, or its radii.
  const Sample& working() const noexcept { return working_; }
  /// Entropy offset added to the working-sample entropy (zero unless radial).
  double offset() const noexcept { return offset_; }
  const EstimatorSpec& spec() const noexcept { return spec_; }

 private:
  EstimatorSpec spec_;
  Sample working_;
  double offset_ = 0.0;
  std::shared_ptr<const KdePoints> points_;
  std::vector<double> sorted_;
};

}  // namespace dentropy
