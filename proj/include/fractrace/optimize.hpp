#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fractrace/extremizers.hpp"
#include "fractrace/field.hpp"

namespace fractrace {

/// Objectives the ascent can maximise.
enum class AscentKind { sobolev, trace_sobolev };

const char* to_string(AscentKind k);
AscentKind parse_ascent_kind(const std::string& s);

struct AscentConfig {
  int max_iters = 2000;
  double step = 1.0;         // largest trial step, measured in unit-D_alpha-norm radians
  double step_decay = 0.5;   // backtracking factor
  double grad_tol = 1e-9;    // on the relative preconditioned gradient norm
  double stall_tol = 1e-12;  // relative quotient gain counted as no progress
  int stall_window = 20;     // consecutive no-progress iterations that end the run
  int max_backtracks = 60;
  std::uint64_t seed = 42;

  void validate() const;
};

struct AscentTrace {
  std::vector<double> quotients;   // entry 0 is the start
  std::vector<double> grad_norms;  // relative preconditioned gradient norm per entry
  std::vector<double> steps;       // accepted step per entry (0 for the start)
  SpectralField final_field;       // physical view, unit D_alpha norm
  bool converged = false;
  int iterations_used = 0;
  std::string stop_reason;

  double final_quotient() const { return quotients.back(); }
  bool monotone() const;
};

/// Q(f) = numerator / ||f||_{D_alpha}^2 for the chosen objective.
double ascent_quotient(const SpectralField& f, const FracIndex& idx, AscentKind kind);

/// dQ/dRe fhat(k) + i dQ/dIm fhat(k) for every lattice coefficient, as a
/// frequency-view field.  The directional derivative along a coefficient
/// perturbation d is Re sum conj(G) d.
SpectralField quotient_gradient(const SpectralField& f, const FracIndex& idx, AscentKind kind);

/// Dual norm of the gradient in the D_alpha metric, relative to Q and taken
/// at unit D_alpha norm.  Scale invariant; zero exactly at critical points.
double relative_gradient_norm(const SpectralField& f, const FracIndex& idx, AscentKind kind);

/// Preconditioned projected gradient ascent on the unit D_alpha sphere.  The
/// k = 0 mode is removed (it carries no D_alpha weight) and iterates are kept
/// real by Hermitian projection.  Backtracking accepts only strict increases,
/// so the quotient sequence is non-decreasing.  Throws NumericalError when a
/// non-finite quotient appears; the partial trace is in the message.
AscentTrace ascend(const SpectralField& f0, const FracIndex& idx, AscentKind kind,
                   const AscentConfig& cfg = {});

/// Writes "iter,quotient,grad_norm,step" rows.
void write_trace_csv(const AscentTrace& trace, std::ostream& out);

struct ExtremizerFit {
  ExtremizerSpec spec;       // sobolev family; centre in box coordinates
  double offset = 0.0;       // constant B of the model A u + B
  double residual = 0.0;     // ||f - model||_2 / ||f||_2 over the fit window
};

/// Least-squares fit of A (gamma^2 + |x - a|^2)^{-(n - 2 alpha)/2} + B.  The
/// constant B absorbs the mean removed by a zero-mode-free optimiser; it is 0
/// to round-off for an exactly sampled extremizer.  The field is rotated to a
/// real positive peak, circularly shifted so the peak sits at the origin, and
/// (gamma, a) refined by coordinate-wise golden-section search starting from
/// the half-decay radius.  Throws DegenerateInputError if there is no clear
/// peak.  A positive window restricts the fit to lattice points within
/// window * min(L) of the peak, away from the periodic images.
ExtremizerFit fit_extremizer(const SpectralField& f, const FracIndex& idx, double window = 0.0);

}  // namespace fractrace
