#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/distributions.hpp"
#include "core/experiment.hpp"

namespace dentropy {

enum class Profile { Table1, Table2, Fig4, Fig5 };

std::string_view to_string(Profile p);
/// "table1", "table2", "fig4", "fig5"; anything else raises InvalidArgument
/// listing them.
Profile parse_profile(std::string_view name);

/// Replicate counts of the two scales.
inline constexpr std::size_t kCiReplicates = 20;
inline constexpr std::size_t kPaperReplicates = 50;

struct ReproduceOptions {
  Profile profile = Profile::Table1;
  std::uint64_t min_n = 1000;
  std::uint64_t max_n = 1000000;
  /// 0 picks kCiReplicates, or kPaperReplicates when full_scale is set.
  std::size_t replicates = 0;
  bool full_scale = false;
  std::uint64_t base_seed = 1;
  unsigned threads = 0;
  std::vector<DistributionId> distributions = all_distributions();
};

/// Reference row of the published tables: smoothing parameter, mean entropy
/// and its standard deviation at the derivative minimum.
struct PublishedRow {
  double param;
  double entropy;
  double sigma;
};

/// Published value for (histogram or kernel, distribution, N), if N is one
/// of 10^3..10^8.
std::optional<PublishedRow> published_row(EstimatorKind kind, DistributionId dist, std::uint64_t n);

/// Run configuration a profile uses for one distribution.
RunConfig profile_config(const ReproduceOptions& options, DistributionId dist);

struct ReproduceResult {
  std::vector<RunReport> reports;  // one per distribution, in option order
  std::string markdown;            // summary juxtaposed with published values
  std::string csv;                 // fig4 / fig5 series (empty for tables)
};

ReproduceResult reproduce(const ReproduceOptions& options);

/// Writes each report under dir/<distribution>/, plus summary.md and, for
/// the figure profiles, <profile>.csv.
void write_reproduction(const ReproduceResult& result, const ReproduceOptions& options,
                        const std::string& dir);

}  // namespace dentropy
