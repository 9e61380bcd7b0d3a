#pragma once

// Central tolerance table. Every bound check, certification and acceptance
// threshold in the library reads from here so that runs are reproducible.

namespace chernoff::tol {

// linalg
inline constexpr double norm_rel = 1e-12;
inline constexpr double expm_overflow_norm = 1e6;
inline constexpr double inverse_residual = 1e-10;
inline constexpr double max_condition = 1e14;
inline constexpr double hermitian_asym = 1e-10;

// numerical range geometry
inline constexpr double geo = 1e-9;
inline constexpr int default_boundary_points = 256;
inline constexpr int min_boundary_points = 16;
inline constexpr double semi_angle_abs = 1e-6;
inline constexpr double contraction_slack = 1e-9;

// produced operators must be contractions within this
inline constexpr double contraction_out = 1e-10;

// bound comparisons: empirical <= bound * (1 + slack_rel) + slack_abs
inline constexpr double slack_rel = 1e-8;
inline constexpr double slack_abs = 1e-10;

// Poisson series truncation (cumulative mass dropped)
inline constexpr double poisson_mass = 1e-14;

// contour quadrature
inline constexpr double contour_convergence = 1e-8;
inline constexpr int contour_node_cap = 200000;

// k_alpha minimisation
inline constexpr int k_alpha_grid = 2048;
inline constexpr double k_alpha_refine = 1e-8;

}  // namespace chernoff::tol
