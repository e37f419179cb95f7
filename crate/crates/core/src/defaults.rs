//! Named numerical defaults. Every tolerance used by the verification
//! suites is one of these constants or an explicit override.

/// Maximum Hermite degree accepted by [`crate::specfun::hermite_poly`] and
/// [`crate::basis::hermite_function`].
pub const MAX_HERMITE_DEGREE: usize = 512;

/// Bound on |Im z| for complex Hermite-function evaluation.
pub const MAX_IMAG_ARGUMENT: f64 = 4.0;

/// Largest Gauss-Hermite order.
pub const MAX_QUADRATURE_ORDER: usize = 1024;

/// Default truncation size of a biorthogonal system.
pub const TRUNCATION: usize = 16;

/// Extra Hermite coefficients carried by analytic bases beyond the
/// truncation, so smooth test functions can be expanded accurately.
pub const HERMITE_BASIS_MARGIN: usize = 64;

/// Quadrature order margin: order = 2N + margin.
pub const QUADRATURE_MARGIN: usize = 40;

/// Default cap on |a| for the translation generator Q = 2ia d/dx.
pub const TRANSLATION_CAP: f64 = 1.0;

/// Widened cap on |a| for the translation generator.
pub const TRANSLATION_CAP_WIDE: f64 = 2.0;

/// Oddness tolerance (max-norm on grid nodes) for multiplication generators.
pub const ODDNESS_TOL: f64 = 1e-12;

/// Minimum domain decay score for e^{±Q/2} e_n when building a system.
pub const DECAY_THRESHOLD: f64 = 0.9;

/// Fraction of the grid half-width treated as "outer" by the decay score.
pub const DECAY_OUTER_FRACTION: f64 = 0.1;

/// Biorthogonality tolerance.
pub const TOL_BIORTH: f64 = 1e-8;

/// J-orthonormality tolerance.
pub const TOL_KREIN: f64 = 1e-6;

/// Tolerance for Hermitian-ness of Gram matrices.
pub const TOL_HERMITIAN: f64 = 1e-10;

/// Partner formula tolerance.
pub const TOL_PARTNER: f64 = 1e-7;

/// C-symmetry identities (C² = I, split form, expansions).
pub const TOL_CSYM: f64 = 1e-8;

/// Agreement between Σ|c_n|² and the quadrature value of <G₀f, f>.
pub const TOL_G0: f64 = 1e-7;

/// Relative agreement between the closed-form overlap and quadrature.
pub const TOL_OVERLAP_REL: f64 = 1e-8;

/// Absolute bound on quadrature overlaps that must vanish by parity.
pub const TOL_OVERLAP_ODD: f64 = 1e-12;

/// Lower bound on ||[φ₀,φ₀]| - 1| that witnesses non-J-orthonormality.
pub const J_WITNESS_GAP: f64 = 0.18;

/// Eigen-residual tolerance for the harmonic finite-difference checks.
pub const TOL_EIGEN_RESIDUAL: f64 = 5e-3;

/// Eigen-residual tolerance for the perturbed anharmonic oscillator.
pub const TOL_EIGEN_RESIDUAL_ANHARMONIC: f64 = 1e-2;

/// Relative boundary magnitude allowed for Dirichlet residual checks.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Half-width of the finite-difference grid for Hamiltonian checks.
pub const FD_HALF_WIDTH: f64 = 12.0;

/// Number of interior points of the finite-difference grid.
pub const FD_POINTS: usize = 4000;

/// Minimum number of points for a finite-difference Hamiltonian.
pub const FD_MIN_POINTS: usize = 500;

/// Anharmonic basis grid half-width.
pub const ANHARMONIC_HALF_WIDTH: f64 = 8.0;

/// Anharmonic basis grid points.
pub const ANHARMONIC_POINTS: usize = 2000;

/// Parity residual allowed for numerically computed eigenvectors.
pub const TOL_PARITY: f64 = 1e-6;

/// Seed for the random coefficient vectors used by the suites.
pub const SEED: u64 = 0x5eed_2019;

/// Biorthogonality tolerance for systems over a numerically computed basis.
pub const TOL_BIORTH_NUMERIC: f64 = 1e-7;

/// Bound on the resolution-of-identity defects at the largest truncation
/// of the convergence sweep.
pub const TOL_GQ_BASIS: f64 = 1e-6;

/// Truncations of the resolution-of-identity convergence sweep.
pub const GQ_SWEEP: [usize; 3] = [8, 16, 32];

/// Accepted range of residual ratios under grid halving (second order).
pub const FD_RATIO_RANGE: (f64, f64) = (3.0, 5.0);

/// Random span functions used by the C-symmetry checks.
pub const RANDOM_SPAN_FUNCTIONS: usize = 10;

/// Random coefficient vectors used by the quadratic-form check.
pub const RANDOM_G0_VECTORS: usize = 50;

/// Highest index used in eigen-residual checks.
pub const EIGEN_CHECK_MAX_INDEX: usize = 3;

/// Largest index of the overlap table compared with the closed form.
pub const OVERLAP_TABLE_MAX: usize = 12;
