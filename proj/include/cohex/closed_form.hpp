#pragma once

#include <optional>
#include <vector>

#include "cohex/hilbert.hpp"
#include "cohex/protocols.hpp"

namespace cohex {

// Parameters of the generating series F and G. Indices are restricted to
// 0 <= k, k' <= d-1; G converges only for x < 1.
struct SeriesParams {
  long d = 1;
  long k = 0;
  long kp = 0;
  double x = 0.0;
  double rel_tol = 1e-14;
};

// F_{d;k,k'}(x) = e^{-x} sum_n x^{nd+(k+k')/2} / sqrt((nd+k)! (nd+k')!)
// Summation stops once a geometric tail bound certifies a relative
// truncation error below rel_tol.
double series_F(const SeriesParams& p);

// G_{d;k,k'}(x) = sum_n (x/4)^{nd+(k+k')/2} sqrt((2nd+2k)!(2nd+2k')!)
//                                             / ((nd+k)!(nd+k')!)
// Terms are built by iterative ratio updates (no raw factorials); the ratio
// of consecutive terms is majorized by x^d, which certifies the tail.
double series_G(const SeriesParams& p);

// |tr(D sigma)| for a coherent reservoir of amplitude a:
// e^{-a^2} sum_n a^{2n+1}/sqrt(n!(n+1)!)
double coherent_shift_overlap(double amplitude, double rel_tol = 1e-14);

// |tr(D sigma)| on the even-pair subladder of a squeezed vacuum:
// (1/cosh r) sum_n t^{2n+1} sqrt((2n)!(2n+2)!) / (2^{2n+1} n!(n+1)!)
double squeezed_shift_overlap(double r, double rel_tol = 1e-14);

// Closed-form amount extracted at step m for the given protocol and
// reservoir. For catalytic runs `u` supplies the 2x2 interaction unitary
// (Hadamard by default). Throws InvalidArgumentError for combinations with
// no closed form (d-level units, explicit reservoirs).
double predicted_amount(Protocol protocol, const ReservoirSpec& spec, long m,
                        const std::optional<ComplexMatrix>& u = std::nullopt,
                        double rel_tol = 1e-14);

// Largest useful l1 coherence storable in a register of M qubits:
// 2^M - (2M)! / (2^M (M!)^2).
double max_useful_coherence(long m_qubits);

enum class AsymptoteSeries { F, G };

struct AsymptoteReport {
  std::vector<double> grid;
  // max over valid (k,k') of |F - 1/d|, resp. |G sqrt(1-x) - 1/d|
  std::vector<double> max_distance;
  bool final_within_band = false;
  bool tail_non_increasing = false;
  bool passed = false;
};

// Evaluates the limit behaviour of F (x -> inf) or G sqrt(1-x) (x -> 1) on
// an increasing grid. Passes when the final distance is inside `band` and
// the distances are non-increasing over the last half of the grid.
AsymptoteReport asymptote_check(long d, AsymptoteSeries which,
                                const std::vector<double>& grid,
                                double band = 1e-2, double rel_tol = 1e-10);

}  // namespace cohex
