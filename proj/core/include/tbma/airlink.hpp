#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "tbma/config.hpp"
#include "tbma/rng.hpp"

namespace tbma {

// One interval's matched-filter outputs at one cell: effective_levels()
// complex entries.
using ReceivedRow = std::vector<std::complex<double>>;

// One cell's samples across all intervals: l_intervals rows.
using CellObservation = std::vector<ReceivedRow>;

struct TrialObservation {
  CellObservation cell1;
  CellObservation cell2;
};

// Total active devices per cell in one interval.
struct IntervalCounts {
  long long cell1 = 0;
  long long cell2 = 0;
};

struct CollectionTrace {
  QoiPair qoi;
  std::vector<IntervalCounts> counts;  // one entry per interval
  TrialObservation received;
};

// Draws one interval's device activity and channel gains given the two cell
// states. Device symbol counts are shared between the two receivers (the
// same transmission reaches both); channel gains are independent per link.
// Under orthogonal reuse symbols are coarsened to M/2 levels and the
// cross-cell term is absent. Sampling order is fixed (counts, then cell 1
// samples, then cell 2 samples) so a given rng stream reproduces the draw.
// `counts`, when non-null, receives the per-cell device totals.
std::pair<ReceivedRow, ReceivedRow> simulate_interval(const SystemConfig& cfg,
                                                      QoiPair q, Rng& rng,
                                                      IntervalCounts* counts);
std::pair<ReceivedRow, ReceivedRow> simulate_interval(const SystemConfig& cfg,
                                                      QoiPair q, Rng& rng);

// L conditionally independent intervals at fixed states; observations only.
TrialObservation simulate_trial(const SystemConfig& cfg, QoiPair q, Rng& rng);

// Same draws as simulate_trial, additionally recording device counts.
CollectionTrace simulate_trace(const SystemConfig& cfg, QoiPair q, Rng& rng);

// Returns a copy of obs with white complex Gaussian distortion of the given
// per-sample total variance added, modelling lossy forwarding of the samples.
CellObservation add_forwarding_noise(const CellObservation& obs, double sigma2_q,
                                     Rng& rng);

// One row per interval per cell:
//   trial,interval,cell,re_1..re_M,im_1..im_M,theta1,theta2,n1,n2
// with a header naming every column; values at 17 significant digits.
void write_trace_csv(std::ostream& out, const std::vector<CollectionTrace>& traces);
void write_trace_csv(const std::string& path,
                     const std::vector<CollectionTrace>& traces);

}  // namespace tbma
