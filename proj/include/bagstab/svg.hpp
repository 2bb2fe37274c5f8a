#pragma once

// Self-contained SVG plots on a fixed 800x500 canvas.

#include <span>
#include <string>

namespace bagstab {

/// Overlaid histograms of base and bagged leave-one-out distances.
std::string histogram_svg(std::span<const double> base, std::span<const double> bagged, const std::string& title);

/// Tail curves delta(eps) on a log-scaled eps axis; `bound` may be empty.
/// Grid points with eps <= 0 are skipped.
std::string tail_svg(std::span<const double> epsilons, std::span<const double> base, std::span<const double> bagged,
                     std::span<const double> bound, const std::string& title);

}  // namespace bagstab
