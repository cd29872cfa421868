#include "cohex/closed_form.hpp"

#include <cmath>
#include <numbers>

namespace cohex {

namespace {

constexpr long kMaxTerms = 500'000'000;

void validate_indices(const SeriesParams& p) {
  if (p.d < 1) throw InvalidArgumentError("series order d must be >= 1");
  if (p.k < 0 || p.kp < 0 || p.k > p.d - 1 || p.kp > p.d - 1) {
    throw InvalidArgumentError("series indices must satisfy 0 <= k,k' <= d-1");
  }
  if (!(p.rel_tol > 0.0)) throw InvalidArgumentError("rel_tol must be positive");
}

double log_factorial(long n) { return std::lgamma(double(n) + 1.0); }

}  // namespace

double series_F(const SeriesParams& p) {
  validate_indices(p);
  if (p.x < 0.0) throw InvalidArgumentError("F requires x >= 0");
  if (p.x == 0.0) return (p.k == 0 && p.kp == 0) ? 1.0 : 0.0;

  const double log_x = std::log(p.x);
  const double half_kk = 0.5 * double(p.k + p.kp);
  auto log_term = [&](long n) {
    const double nd = double(n) * double(p.d);
    return -p.x + (nd + half_kk) * log_x -
           0.5 * (log_factorial(n * p.d + p.k) + log_factorial(n * p.d + p.kp));
  };

  double sum = 0.0;
  double lt = log_term(0);
  for (long n = 0; n < kMaxTerms; ++n) {
    const double term = std::exp(lt);
    sum += term;
    const double lt_next = log_term(n + 1);
    const double ratio = std::exp(lt_next - lt);
    // Past the peak the term ratio decreases, so `ratio` bounds all later
    // ratios and the remaining tail is below term * ratio / (1 - ratio).
    if (ratio < 0.5 && sum > 0.0 &&
        term * ratio / (1.0 - ratio) <= p.rel_tol * sum) {
      return sum;
    }
    lt = lt_next;
  }
  throw DivergenceError("F series failed to certify truncation");
}

double series_G(const SeriesParams& p) {
  validate_indices(p);
  if (p.x < 0.0) throw InvalidArgumentError("G requires x >= 0");
  if (p.x >= 1.0) throw DivergenceError("G diverges for x >= 1");
  if (p.x == 0.0) return (p.k == 0 && p.kp == 0) ? 1.0 : 0.0;

  // t_n = x^{nd+(k+k')/2} u_{nd+k} u_{nd+k'} with u_j = sqrt((2j)!)/(2^j j!).
  const double log_x = std::log(p.x);
  auto log_u = [&](long j) {
    return 0.5 * log_factorial(2 * j) - double(j) * std::numbers::ln2 -
           log_factorial(j);
  };
  double term = std::exp((0.5 * double(p.k + p.kp)) * log_x + log_u(p.k) +
                         log_u(p.kp));
  const double xd = std::pow(p.x, double(p.d));
  // u_{j+1}/u_j = sqrt((2j+1)/(2j+2)) < 1, so every term ratio is < x^d.
  const double tail_factor = xd / (1.0 - xd);

  double sum = 0.0;
  for (long n = 0; n < kMaxTerms; ++n) {
    sum += term;
    if (term * tail_factor <= p.rel_tol * sum) return sum;
    double prod = 1.0;
    for (long step = 0; step < p.d; ++step) {
      const long jk = n * p.d + p.k + step;
      const long jkp = n * p.d + p.kp + step;
      prod *= double(2 * jk + 1) / double(2 * jk + 2);
      prod *= double(2 * jkp + 1) / double(2 * jkp + 2);
    }
    term *= xd * std::sqrt(prod);
  }
  throw DivergenceError("G series failed to certify truncation");
}

double coherent_shift_overlap(double amplitude, double rel_tol) {
  if (amplitude < 0.0) throw InvalidArgumentError("amplitude must be >= 0");
  if (amplitude == 0.0) return 0.0;
  const double x = amplitude * amplitude;
  // term_n = e^{-x} x^{n+1/2} / sqrt(n!(n+1)!); ratio x/sqrt((n+1)(n+2)).
  double term = std::exp(-x + 0.5 * std::log(x));
  double sum = 0.0;
  for (long n = 0; n < kMaxTerms; ++n) {
    sum += term;
    const double ratio = x / std::sqrt(double(n + 1) * double(n + 2));
    if (ratio < 0.5 && sum > 0.0 && term * ratio / (1.0 - ratio) <= rel_tol * sum) {
      return sum;
    }
    term *= ratio;
  }
  throw DivergenceError("overlap series failed to certify truncation");
}

double squeezed_shift_overlap(double r, double rel_tol) {
  if (r < 0.0) throw InvalidArgumentError("squeezing must be >= 0");
  if (r == 0.0) return 0.0;
  const double t = std::tanh(r);
  const double t2 = t * t;
  // term_n = t^{2n+1} sqrt((2n)!(2n+2)!) / (2^{2n+1} n!(n+1)!);
  // ratio = t^2 sqrt((2n+1)/(2n+2)) sqrt((2n+3)/(2n+4)) < t^2.
  double term = t * std::sqrt(2.0) / 2.0;
  const double tail_factor = t2 / (1.0 - t2);
  double sum = 0.0;
  for (long n = 0; n < kMaxTerms; ++n) {
    sum += term;
    if (term * tail_factor <= rel_tol * sum) return sum / std::cosh(r);
    term *= t2 * std::sqrt(double(2 * n + 1) / double(2 * n + 2)) *
            std::sqrt(double(2 * n + 3) / double(2 * n + 4));
  }
  throw DivergenceError("overlap series failed to certify truncation");
}

double max_useful_coherence(long m_qubits) {
  if (m_qubits < 1) throw InvalidArgumentError("register needs >= 1 qubit");
  const double capacity = std::ldexp(1.0, int(m_qubits));  // 2^M
  if (m_qubits <= 25) {
    // binom(2M, M) stays integral and exactly representable here.
    double binom = 1.0;
    for (long i = 1; i <= m_qubits; ++i) {
      binom = binom * double(m_qubits + i) / double(i);
    }
    return capacity - std::round(binom) / capacity;
  }
  const double log_binom = log_factorial(2 * m_qubits) -
                           2.0 * log_factorial(m_qubits);
  return capacity - std::exp(log_binom - double(m_qubits) * std::numbers::ln2);
}

double predicted_amount(Protocol protocol, const ReservoirSpec& spec, long m,
                        const std::optional<ComplexMatrix>& u, double rel_tol) {
  if (m < 1) throw InvalidArgumentError("step index must be >= 1");
  const auto* coherent = std::get_if<CoherentReservoir>(&spec.kind);
  const auto* squeezed = std::get_if<SqueezedReservoir>(&spec.kind);
  if (!coherent && !squeezed) {
    throw InvalidArgumentError("no closed form for explicit reservoirs");
  }

  switch (protocol) {
    case Protocol::Weak: {
      if (coherent) {
        const double a = coherent->amplitude;
        if (a == 0.0) return 0.0;
        return 2.0 * std::exp(-a * a + double(2 * m - 1) * std::log(a) -
                              0.5 * (log_factorial(m - 1) + log_factorial(m)));
      }
      const double t = std::tanh(squeezed->r);
      if (t == 0.0) return 0.0;
      const double log_amount =
          double(2 * m - 1) * std::log(t) - std::log(std::cosh(squeezed->r)) +
          0.5 * (log_factorial(2 * m - 2) + log_factorial(2 * m)) -
          double(2 * m - 1) * std::numbers::ln2 - log_factorial(m - 1) -
          log_factorial(m);
      return 2.0 * std::exp(log_amount);
    }
    case Protocol::Strong: {
      const long half = 1L << (m - 1);  // 2^{m-1}
      const long d = 2 * half;          // 2^m
      double sum = 0.0;
      if (coherent) {
        const double x = coherent->amplitude * coherent->amplitude;
        for (long k = 0; k < half; ++k) {
          sum += series_F({d, k, k + half, x, rel_tol});
        }
        return 2.0 * sum;
      }
      const double t = std::tanh(squeezed->r);
      for (long k = 0; k < half; ++k) {
        sum += series_G({d, k, k + half, t * t, rel_tol});
      }
      return 2.0 * sum / std::cosh(squeezed->r);
    }
    case Protocol::Catalytic: {
      double weight = 1.0;  // optimal 2|U00||U10|
      if (u.has_value()) {
        if (u->rows() != 2 || u->cols() != 2) {
          throw InvalidArgumentError("catalytic interaction needs a 2x2 unitary");
        }
        weight = 2.0 * std::abs((*u)(0, 0)) * std::abs((*u)(1, 0));
      }
      const double overlap =
          coherent ? coherent_shift_overlap(coherent->amplitude, rel_tol)
                   : squeezed_shift_overlap(squeezed->r, rel_tol);
      return weight * overlap;
    }
    case Protocol::DLevel:
      throw InvalidArgumentError("no closed form implemented for d-level runs");
  }
  throw InvalidArgumentError("unknown protocol");
}

AsymptoteReport asymptote_check(long d, AsymptoteSeries which,
                                const std::vector<double>& grid, double band,
                                double rel_tol) {
  if (d < 1) throw InvalidArgumentError("series order d must be >= 1");
  if (grid.size() < 2) throw InvalidArgumentError("grid needs >= 2 points");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw InvalidArgumentError("grid must be strictly increasing");
    }
  }
  AsymptoteReport report;
  report.grid = grid;
  const double target = 1.0 / double(d);
  for (double x : grid) {
    double worst = 0.0;
    for (long k = 0; k < d; ++k) {
      for (long kp = 0; kp < d; ++kp) {
        double value;
        if (which == AsymptoteSeries::F) {
          value = series_F({d, k, kp, x, rel_tol});
        } else {
          value = series_G({d, k, kp, x, rel_tol}) * std::sqrt(1.0 - x);
        }
        worst = std::max(worst, std::abs(value - target));
      }
    }
    report.max_distance.push_back(worst);
  }
  report.final_within_band = report.max_distance.back() < band;
  report.tail_non_increasing = true;
  for (size_t i = grid.size() / 2 + 1; i < grid.size(); ++i) {
    // allow float-level noise once the distances sit at rounding level
    if (report.max_distance[i] > report.max_distance[i - 1] + 1e-12) {
      report.tail_non_increasing = false;
    }
  }
  report.passed = report.final_within_band && report.tail_non_increasing;
  return report;
}

}  // namespace cohex
