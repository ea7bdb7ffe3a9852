#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "fixpoint/expr.hpp"
#include "fixpoint/grid.hpp"
#include "fixpoint/linalg.hpp"
#include "fixpoint/ode.hpp"

namespace fixpoint::hartman {

/// Autonomous vector field in dimension 1..3 with symbolic components.
/// Variables are x1..xn; x, y, z are accepted as aliases for x1, x2, x3.
class VectorFieldND {
public:
    static VectorFieldND parse(const std::vector<std::string>& component_sources);

    int dim() const { return static_cast<int>(components_.size()); }
    num::Vec eval(const num::Vec& p) const;

    /// Jacobian from symbolic derivatives; entries whose derivative is
    /// refused (abs) fall back to Richardson-extrapolated central differences.
    num::DenseMatrix jacobian_at(const num::Vec& p) const;

    /// Field of u |-> f(u + shift); components with shift exactly 0 are left
    /// untouched so an origin fixed point stays exact.
    VectorFieldND recentered(const num::Vec& shift) const;

    const expr::ExprAst& component(int i) const { return components_[static_cast<std::size_t>(i)]; }

    /// Adapter for the flow integrator.
    num::Rhs rhs() const;

private:
    std::vector<expr::ExprAst> components_;
};

/// Newton iteration for f(x) = 0 from `guess`. Returns once |f| <= tol;
/// a singular Jacobian or max_iter exhaustion raises ConvergenceError.
num::Vec find_fixed_point(const VectorFieldND& field, num::Vec guess,
                          double tol = 1e-12, int max_iter = 50);

struct HyperbolicityReport {
    std::vector<std::complex<double>> eigenvalues;
    bool hyperbolic = false;
    double min_abs_real = 0.0;
};

/// Eigenvalues of the Jacobian and whether every real part clears tol.
HyperbolicityReport check_hyperbolic(const num::DenseMatrix& jacobian, double tol = 1e-9);

/// Stable/unstable splitting of the linearization. B and C are the time-one
/// maps e^P and e^Q of the diagonal blocks; contraction requires |B| < 1 and
/// |C^-1| < 1 in the spectral norm.
struct SpectralSplit {
    num::SchurSplit schur;
    num::DenseMatrix stable_map;        // B = e^P
    num::DenseMatrix unstable_map;      // C = e^Q
    num::DenseMatrix stable_map_inv;    // B^-1
    num::DenseMatrix unstable_map_inv;  // C^-1
    double b = 0.0;                     // |B|
    double c = 0.0;                     // |C^-1|

    int dim() const { return schur.dim_stable + schur.dim_unstable; }
    int dim_stable() const { return schur.dim_stable; }
    int dim_unstable() const { return schur.dim_unstable; }

    num::Vec to_split(const num::Vec& x) const;    // adapted coordinates
    num::Vec from_split(const num::Vec& u) const;  // back to original

    /// Block-diagonal linear time-one map diag(B, C) in split coordinates.
    num::DenseMatrix linear_map() const;
};

/// Raises NonHyperbolicError when an eigenvalue real part is within tol of
/// zero, and CalibrationError when a time-one block fails to contract.
SpectralSplit spectral_split(const num::DenseMatrix& jacobian, double tol = 1e-9);

num::Vec time_one_map(const VectorFieldND& field, const num::Vec& x, double tol = 1e-10);
num::Vec inverse_time_one_map(const VectorFieldND& field, const num::Vec& x, double tol = 1e-10);

struct ErrorFieldValue {
    num::Vec stable_part;    // Ytil
    num::Vec unstable_part;  // Ztil
};

/// Nonlinear part of the time-one map in split coordinates:
/// split(phi_1(from_split(p))) - (B y, C z).
ErrorFieldValue error_fields(const VectorFieldND& field, const SpectralSplit& split,
                             const num::Vec& p, double flow_tol = 1e-10);

/// C^1 bump: 1 on [0, s0/2], 0 on [s0, inf), cubic in between.
double cutoff_q(double rho, double s0);

/// Error fields scaled by cutoff_q(|p|, s0); identically zero outside |p| < s0.
ErrorFieldValue truncated_error(const VectorFieldND& field, const SpectralSplit& split,
                                const num::Vec& p, double s0, double flow_tol = 1e-10);

struct ConjugacyConstants {
    double a = 0.0;        // sampled sup of the truncated error derivative
    double a_target = 0.0; // admissible ceiling min(1-b, 1/c-1, 1)/4
    double b = 0.0;
    double c = 0.0;
    double s0 = 0.0;       // cutoff radius
    double delta = 0.0;    // Holder exponent
    double r = 0.0;        // contraction factor c (2 max(a,b,c))^delta
    double holder_m = 0.0; // Holder constant of the fixed point
};

struct CalibrationOptions {
    double flow_tol = 1e-10;
    int samples_per_axis = 17;
    double min_s0 = 1e-6;
};

/// Halve s0 from 1 until the sampled derivative sup of the truncated error
/// meets a_target, then pick the largest delta in {0.9, ..., 0.1} with r < 1.
/// Failure of either stage raises CalibrationError.
ConjugacyConstants calibrate_cutoff(const VectorFieldND& field, const SpectralSplit& split,
                                    const CalibrationOptions& options = {});

struct ConjugacyOptions {
    int nodes_per_axis = 65;
    double stop_tol = 1e-4;
    int max_iterations = 200;
    double flow_tol = 1e-10;
    CalibrationOptions calibration{};
    double residual_radius_factor = 0.25;  // residual region radius as a fraction of s0
};

struct ConjugacyRun {
    ConjugacyConstants constants;
    std::vector<num::GridMapND> psi_iterates;  // unstable components, psi_0, psi_1, ...
    std::vector<num::GridMapND> phi_iterates;  // stable components
    std::vector<double> psi_gaps;              // sup node gaps between successive iterates
    std::vector<double> phi_gaps;
    num::GridMapND conjugacy;                  // H = (Phi, psi) on [-s0, s0]^n
    double residual = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Build H with H(T(p)) = L(H(p)) on the cutoff neighborhood by iterating
/// psi_{k+1} = C^-1 psi_k(T(p)) and Phi_{k+1} = B Phi_k(T^-1(p)) on a shared
/// grid over [-s0, s0]^n. `field` must already have its fixed point at the
/// origin.
ConjugacyRun build_conjugacy(const VectorFieldND& field, const SpectralSplit& split,
                             const ConjugacyOptions& options = {});

/// sup |H(T_flow(p)) - L(H(p))| over a sample of the ball of region_radius,
/// with T_flow the exact time-one map in split coordinates. The radius must
/// stay within s0/2 so the cutoff is inactive.
double conjugacy_residual(const std::function<num::Vec(const num::Vec&)>& conjugacy,
                          const VectorFieldND& field, const SpectralSplit& split,
                          double region_radius, double flow_tol = 1e-10,
                          int samples_per_axis = 17);
double conjugacy_residual(const num::GridMapND& conjugacy, const VectorFieldND& field,
                          const SpectralSplit& split, double region_radius,
                          double flow_tol = 1e-10, int samples_per_axis = 17);

struct HolderCheckReport {
    std::vector<bool> psi_ok;  // entry j-1 covers the step psi_{j-1} -> psi_j
    std::vector<bool> phi_ok;
    bool all_ok = true;
};

/// Check every iterate gap against M r^j (|y| + |z|)^delta nodewise.
HolderCheckReport verify_holder_bound(const ConjugacyRun& run, double slack = 1e-9);

}  // namespace fixpoint::hartman
