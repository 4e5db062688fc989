#pragma once

#include <vector>

#include "cbct/types.hpp"

namespace cbct {

/// qGGMRF regularizer parameters.  sigma_f sets the scale of differences,
/// c the transition sharpness, p in [1, 2] the near-edge growth.
struct PriorParams {
    double sigma_f = 1.0;
    double c = 1.0;
    double p = 1.2;
    int neighborhood = 26; // 6, 18, or 26 voxel neighbors

    void validate() const;
};

/// Symmetric neighbor stencil with weights inversely proportional to the
/// inter-voxel distance and normalized to sum to 1 over the neighborhood.
/// `full` lists all neighbors (for gradient gathers); `half` lists one
/// offset per unordered pair (for counting each pair once in the cost).
struct NeighborWeights {
    struct Offset {
        int dx = 0, dy = 0, dz = 0;
        double w = 0.0;
    };
    std::vector<Offset> full;
    std::vector<Offset> half;
};

NeighborWeights make_neighbor_weights(int neighborhood);

struct SolverParams {
    int max_iterations = 200;
    double lipschitz = 0.0;      // gradient Lipschitz bound; <= 0 means estimate
    enum class Init { zero, fdk } init = Init::fdk;
    int cost_log_interval = 10;  // iterations between cost-trace samples

    void validate() const;
};

/// Potential rho(delta) = |delta/sigma_f|^2 / (c + |delta/sigma_f|^(2-p)).
/// Even, zero at zero, nondecreasing on [0, inf) for p in [1, 2].
double rho(double delta, const PriorParams& params);

/// d rho / d delta, in closed form:
///   rho'(d) = (d/sigma_f^2) * [2c + p*|d/sigma_f|^(2-p)]
///             / (c + |d/sigma_f|^(2-p))^2
/// Odd, zero at zero; locked against a finite-difference oracle in tests.
double rho_prime(double delta, const PriorParams& params);

/// s(f) = sum over unordered in-grid neighbor pairs of w_jk * rho(f_j - f_k).
double prior_cost(const Volume& f, const PriorParams& params,
                  const NeighborWeights& weights);

/// Component j: sum over in-grid neighbors k of w_jk * rho'(f_j - f_k).
/// Components sum to zero (the prior ignores a global offset).
Volume prior_gradient(const Volume& f, const PriorParams& params,
                      const NeighborWeights& weights);

/// (1/2) sum_i W_ii (g_i - [Af]_i)^2.  Pixels with W_ii = 0 contribute
/// exactly zero and their g values are never read into the sum; a non-finite
/// g at a positive-weight pixel is rejected.
double data_cost(const Volume& f, const ProjectionStack& g, const WeightSet& W,
                 const ConeBeamGeometry& geom);

/// data_cost + prior_cost.
double total_cost(const Volume& f, const ProjectionStack& g, const WeightSet& W,
                  const ConeBeamGeometry& geom, const PriorParams& prior,
                  const NeighborWeights& weights);

/// grad = -A^T W (g - Af) + prior_gradient(f), using the matched
/// backprojector so the data term's gradient is exact for the discrete A.
Volume total_gradient(const Volume& f, const ProjectionStack& g, const WeightSet& W,
                      const ConeBeamGeometry& geom, const PriorParams& prior,
                      const NeighborWeights& weights);

/// Returned when the measurement operator and prior are both degenerate
/// (all-zero weights, no curvature): the gradient is identically zero, so
/// any positive step bound works; this keeps 1/L finite.
inline constexpr double kLipschitzFloor = 1.0;

/// Upper bound on the Lipschitz constant of the total-cost gradient:
/// lambda_max(A^T W A), via power iteration (up to 50 iterations, stopping
/// once the Rayleigh quotient's relative change is < 1e-4 and the residual
/// is small), plus the prior curvature bound 4/(c*sigma_f^2) [Gershgorin on
/// the prior Hessian with neighbor weights summing to 1].  The data part
/// returns rayleigh + ||Bv - rayleigh*v||, which dominates lambda_max once
/// the iteration has locked onto the dominant eigenvector.  prior = nullptr
/// bounds the pure weighted-least-squares gradient.  Degenerate all-zero
/// systems return kLipschitzFloor.
double estimate_lipschitz(const WeightSet& W, const ConeBeamGeometry& geom,
                          const VolumeGrid& grid, const PriorParams* prior);

struct CostSample {
    int iteration = 0;
    double data = 0.0;
    double prior = 0.0;
    double total = 0.0;
};

/// Solver state after the final iteration: f is the reconstruction f^(K).
struct OgmState {
    Volume f;
    Volume h;
    double t = 1.0;
    int k = 0;
    std::vector<CostSample> trace;
};

/// Accelerated gradient descent on total_cost with the fixed-step updates
///   h^(k+1) = f^(k) - (1/L) * grad(f^(k))
///   t^(k+1) = (1 + sqrt(1 + 4 t_k^2)) / 2
///   f^(k+1) = h^(k+1) + ((t_k - 1)/t^(k+1)) (h^(k+1) - h^(k))
///                     + (t_k / t^(k+1)) (h^(k+1) - f^(k))
/// with t^(0) = 1 and h^(0) = f^(0).  Not monotone per iteration; the final
/// cost is below the initial cost on every shipped scenario.  prior =
/// nullptr minimizes the pure weighted least squares.  init = nullptr
/// starts from zero (callers resolve SolverParams::Init::fdk by passing the
/// analytic reconstruction here).  Cost is sampled at iteration 0, every
/// cost_log_interval iterations, and at the final iterate; a non-finite cost
/// aborts with numeric_error naming the iteration.
OgmState ogm_reconstruct(const ProjectionStack& g, const WeightSet& W,
                         const ConeBeamGeometry& geom, const VolumeGrid& grid,
                         const PriorParams* prior, const SolverParams& solver,
                         const Volume* init = nullptr);

} // namespace cbct
