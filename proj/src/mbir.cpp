#include "cbct/mbir.hpp"

#include <cmath>
#include <sstream>

#include "cbct/geometry.hpp"
#include "cbct/parallel.hpp"
#include "cbct/random.hpp"

namespace cbct {

void PriorParams::validate() const {
    if (sigma_f <= 0.0) throw config_error("prior: sigma_f must be positive");
    if (c <= 0.0) throw config_error("prior: c must be positive");
    if (p < 1.0 || p > 2.0) throw config_error("prior: p must be in [1, 2]");
    if (neighborhood != 6 && neighborhood != 18 && neighborhood != 26)
        throw config_error("prior: neighborhood must be 6, 18, or 26");
}

void SolverParams::validate() const {
    if (max_iterations < 1)
        throw config_error("solver: max_iterations must be >= 1");
    if (cost_log_interval < 1)
        throw config_error("solver: cost_log_interval must be >= 1");
}

NeighborWeights make_neighbor_weights(int neighborhood) {
    if (neighborhood != 6 && neighborhood != 18 && neighborhood != 26)
        throw config_error("neighborhood must be 6, 18, or 26");
    NeighborWeights nw;
    double raw_sum = 0.0;
    for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int order = dx * dx + dy * dy + dz * dz; // 1, 2, or 3
                if (order == 0) continue;
                if (neighborhood == 6 && order > 1) continue;
                if (neighborhood == 18 && order > 2) continue;
                const double w = 1.0 / std::sqrt(static_cast<double>(order));
                nw.full.push_back({dx, dy, dz, w});
                raw_sum += w;
            }
        }
    }
    for (auto& o : nw.full) {
        o.w /= raw_sum;
        // Keep one orientation per unordered pair: lexicographically
        // positive offsets.
        if (o.dz > 0 || (o.dz == 0 && (o.dy > 0 || (o.dy == 0 && o.dx > 0))))
            nw.half.push_back(o);
    }
    return nw;
}

double rho(double delta, const PriorParams& params) {
    const double x = std::abs(delta / params.sigma_f);
    if (x == 0.0) return 0.0;
    return x * x / (params.c + std::pow(x, 2.0 - params.p));
}

double rho_prime(double delta, const PriorParams& params) {
    if (delta == 0.0) return 0.0;
    const double x = std::abs(delta / params.sigma_f);
    const double xp = std::pow(x, 2.0 - params.p);
    const double den = params.c + xp;
    return (delta / (params.sigma_f * params.sigma_f)) *
           (2.0 * params.c + params.p * xp) / (den * den);
}

double prior_cost(const Volume& f, const PriorParams& params,
                  const NeighborWeights& weights) {
    params.validate();
    const VolumeGrid& g = f.grid;
    return deterministic_sum(g.voxel_count(), [&](std::size_t j) {
        const int ix = static_cast<int>(j % static_cast<std::size_t>(g.nx));
        const int iy = static_cast<int>((j / static_cast<std::size_t>(g.nx)) %
                                        static_cast<std::size_t>(g.ny));
        const int iz = static_cast<int>(j / (static_cast<std::size_t>(g.nx) *
                                             static_cast<std::size_t>(g.ny)));
        double acc = 0.0;
        for (const auto& o : weights.half) {
            const int kx = ix + o.dx, ky = iy + o.dy, kz = iz + o.dz;
            if (kx < 0 || kx >= g.nx || ky < 0 || ky >= g.ny || kz < 0 || kz >= g.nz)
                continue;
            acc += o.w * rho(f.data[j] - f.at(kx, ky, kz), params);
        }
        return acc;
    });
}

Volume prior_gradient(const Volume& f, const PriorParams& params,
                      const NeighborWeights& weights) {
    params.validate();
    const VolumeGrid& g = f.grid;
    Volume grad(g);
    parallel_for(0, static_cast<std::size_t>(g.nz), [&](std::size_t szi) {
        const int iz = static_cast<int>(szi);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                double acc = 0.0;
                const double fj = f.at(ix, iy, iz);
                for (const auto& o : weights.full) {
                    const int kx = ix + o.dx, ky = iy + o.dy, kz = iz + o.dz;
                    if (kx < 0 || kx >= g.nx || ky < 0 || ky >= g.ny || kz < 0 ||
                        kz >= g.nz)
                        continue;
                    acc += o.w * rho_prime(fj - f.at(kx, ky, kz), params);
                }
                grad.at(ix, iy, iz) = acc;
            }
        }
    });
    return grad;
}

namespace {

void check_shapes(const ProjectionStack& g, const WeightSet& W,
                  const ConeBeamGeometry& geom) {
    if (!g.same_shape(W.w))
        throw config_error("mbir: data/weight shape mismatch");
    if (g.nviews != geom.view_count() || g.nrows != geom.det_rows ||
        g.ncols != geom.det_cols)
        throw config_error("mbir: data shape does not match geometry");
}

double weighted_residual_cost(const ProjectionStack& proj, const ProjectionStack& g,
                              const WeightSet& W) {
    return deterministic_sum(g.data.size(), [&](std::size_t i) {
        const double w = W.w.data[i];
        if (!(w > 0.0)) return 0.0;
        const double gi = g.data[i];
        if (!std::isfinite(gi))
            throw numeric_error("mbir: non-finite data value at a weighted pixel");
        const double r = gi - proj.data[i];
        return 0.5 * w * r * r;
    });
}

// Residual g - Af where W > 0, zero elsewhere (those pixels are skipped by
// the weighted backprojector anyway).
ProjectionStack masked_residual(const ProjectionStack& proj, const ProjectionStack& g,
                                const WeightSet& W) {
    ProjectionStack r(g.nviews, g.nrows, g.ncols);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        const double w = W.w.data[i];
        if (!(w > 0.0)) continue;
        const double gi = g.data[i];
        if (!std::isfinite(gi))
            throw numeric_error("mbir: non-finite data value at a weighted pixel");
        r.data[i] = gi - proj.data[i];
    }
    return r;
}

} // namespace

double data_cost(const Volume& f, const ProjectionStack& g, const WeightSet& W,
                 const ConeBeamGeometry& geom) {
    check_shapes(g, W, geom);
    const ProjectionStack proj = forward_project(f, geom);
    return weighted_residual_cost(proj, g, W);
}

double total_cost(const Volume& f, const ProjectionStack& g, const WeightSet& W,
                  const ConeBeamGeometry& geom, const PriorParams& prior,
                  const NeighborWeights& weights) {
    return data_cost(f, g, W, geom) + prior_cost(f, prior, weights);
}

Volume total_gradient(const Volume& f, const ProjectionStack& g, const WeightSet& W,
                      const ConeBeamGeometry& geom, const PriorParams& prior,
                      const NeighborWeights& weights) {
    check_shapes(g, W, geom);
    const ProjectionStack proj = forward_project(f, geom);
    const ProjectionStack r = masked_residual(proj, g, W);
    const Volume data_term = back_project_weighted(r, W.w, geom, f.grid);
    Volume grad = prior_gradient(f, prior, weights);
    for (std::size_t i = 0; i < grad.data.size(); ++i)
        grad.data[i] -= data_term.data[i];
    return grad;
}

double estimate_lipschitz(const WeightSet& W, const ConeBeamGeometry& geom,
                          const VolumeGrid& grid, const PriorParams* prior) {
    geom.validate();
    if (W.w.nviews != geom.view_count() || W.w.nrows != geom.det_rows ||
        W.w.ncols != geom.det_cols)
        throw config_error("estimate_lipschitz: weight shape mismatch");
    for (double w : W.w.data)
        if (w < 0.0) throw numeric_error("estimate_lipschitz: negative weight");

    double l_prior = 0.0;
    if (prior) {
        prior->validate();
        // sup|rho''| = 2/(c sigma^2) (curvature is largest at 0 for p in
        // [1,2]); Gershgorin over the prior Hessian with neighbor weights
        // summing to <= 1 doubles it.
        l_prior = 4.0 / (prior->c * prior->sigma_f * prior->sigma_f);
    }

    // Power iteration on B = A^T W A from a fixed pseudo-random start.
    const std::size_t n = grid.voxel_count();
    Volume v(grid);
    SplitMix64 rng(0x5eed5eed5eed5eedULL);
    for (std::size_t i = 0; i < n; ++i)
        v.data[i] = static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5;
    double vnorm = std::sqrt(deterministic_sum(n, [&](std::size_t i) {
        return v.data[i] * v.data[i];
    }));
    for (std::size_t i = 0; i < n; ++i) v.data[i] /= vnorm;

    double rayleigh = 0.0, resid = 0.0;
    double prev = 0.0;
    for (int it = 0; it < 50; ++it) {
        const ProjectionStack av = forward_project(v, geom);
        const Volume bv = back_project_weighted(av, W.w, geom, grid);
        rayleigh = deterministic_sum(n, [&](std::size_t i) {
            return v.data[i] * bv.data[i];
        });
        resid = std::sqrt(deterministic_sum(n, [&](std::size_t i) {
            const double r = bv.data[i] - rayleigh * v.data[i];
            return r * r;
        }));
        const double bnorm = std::sqrt(deterministic_sum(n, [&](std::size_t i) {
            return bv.data[i] * bv.data[i];
        }));
        if (bnorm <= 1e-300) { // zero operator (e.g. all-zero weights)
            rayleigh = 0.0;
            resid = 0.0;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) v.data[i] = bv.data[i] / bnorm;
        const bool settled = it >= 5 &&
                             std::abs(rayleigh - prev) <= 1e-4 * std::abs(rayleigh) &&
                             resid <= 0.02 * rayleigh;
        if (settled) break;
        prev = rayleigh;
    }

    const double l = rayleigh + resid + l_prior;
    return l > 0.0 ? l : kLipschitzFloor;
}

OgmState ogm_reconstruct(const ProjectionStack& g, const WeightSet& W,
                         const ConeBeamGeometry& geom, const VolumeGrid& grid,
                         const PriorParams* prior, const SolverParams& solver,
                         const Volume* init) {
    check_shapes(g, W, geom);
    solver.validate();
    NeighborWeights nw;
    if (prior) {
        prior->validate();
        nw = make_neighbor_weights(prior->neighborhood);
    }
    if (init && !(init->grid == grid))
        throw config_error("ogm: init volume grid mismatch");

    const double L = solver.lipschitz > 0.0
                         ? solver.lipschitz
                         : estimate_lipschitz(W, geom, grid, prior);

    OgmState st;
    st.f = init ? *init : Volume(grid);
    st.h = st.f;
    st.t = 1.0;
    st.k = 0;

    const std::size_t n = grid.voxel_count();
    auto cost_at = [&](const Volume& f, int k) {
        CostSample s;
        s.iteration = k;
        s.data = data_cost(f, g, W, geom);
        s.prior = prior ? prior_cost(f, *prior, nw) : 0.0;
        s.total = s.data + s.prior;
        if (!std::isfinite(s.total)) {
            std::ostringstream msg;
            msg << "ogm: non-finite cost at iteration " << k << " (data=" << s.data
                << ", prior=" << s.prior << ")";
            throw numeric_error(msg.str());
        }
        return s;
    };
    st.trace.push_back(cost_at(st.f, 0));

    Volume h_new(grid);
    Volume f_new(grid);
    for (int k = 0; k < solver.max_iterations; ++k) {
        const ProjectionStack proj = forward_project(st.f, geom);
        const ProjectionStack r = masked_residual(proj, g, W);
        const Volume data_term = back_project_weighted(r, W.w, geom, grid);
        Volume grad = prior ? prior_gradient(st.f, *prior, nw) : Volume(grid);
        for (std::size_t i = 0; i < n; ++i) grad.data[i] -= data_term.data[i];

        for (std::size_t i = 0; i < n; ++i)
            h_new.data[i] = st.f.data[i] - grad.data[i] / L;
        const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * st.t * st.t));
        const double a = (st.t - 1.0) / t_new;
        const double b = st.t / t_new;
        for (std::size_t i = 0; i < n; ++i) {
            const double hn = h_new.data[i];
            f_new.data[i] = hn + a * (hn - st.h.data[i]) + b * (hn - st.f.data[i]);
        }
        st.f.data.swap(f_new.data);
        st.h.data.swap(h_new.data);
        st.t = t_new;
        st.k = k + 1;
        if (st.k % solver.cost_log_interval == 0 || st.k == solver.max_iterations)
            st.trace.push_back(cost_at(st.f, st.k));
    }
    return st;
}

} // namespace cbct
