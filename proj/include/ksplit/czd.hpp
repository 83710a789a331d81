#pragma once

// Dyadic Calderon-Zygmund decomposition of a fiber function at level lambda,
// stopping on averages with respect to the measure w mu.

#include <span>
#include <vector>

#include "ksplit/torus.hpp"
#include "ksplit/weights.hpp"

namespace ksplit {

struct CZResult {
  TorusFn1D good;
  TorusFn1D bad;
  /// Maximal aligned dyadic arcs where the w-average of |f| exceeds lambda,
  /// in increasing start order.
  std::vector<Arc> stopped;
  std::vector<char> in_omega;
  double lambda = 0.0;
  bool top_stopped = false;

  // Measured bullet constants.
  double f_l1 = 0.0;            // int |f| w
  double doubling_defect = 1;   // max over dyadic parent/child of w(parent)/w(child)
  double good_sup_ratio = 0.0;  // sup |good| / lambda
  double good_l1_ratio = 0.0;   // int |good| w / int |f| w
  double bad_l1_ratio = 0.0;    // int |bad| w / int |f| w
  double omega_measure = 0.0;   // (w mu)(Omega)
  double omega_ratio = 0.0;     // (w mu)(Omega) lambda / int |f| w
  double mean_zero_defect = 0.0;  // max over arcs |int_B bad w| / int_B |f| w
};

/// lambda must be positive; lambda = +infinity stops nothing.
CZResult cz_decompose(const TorusFn1D& f, const Weight1D& w, double lambda);

/// int_{T \ Omega} |P2^u bad| w / int |f| w, with P2^u the anti-analytic
/// projection framed by `frame`. Zero when the bad part vanishes.
double cz_tail_check(const CZResult& res, std::span<const double> frame,
                     const Weight1D& w);

/// Doubling defect of w mu on aligned dyadic arcs.
double dyadic_doubling_defect(const Weight1D& w);

}  // namespace ksplit
