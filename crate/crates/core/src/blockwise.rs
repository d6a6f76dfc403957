//! Block-wise SVT on Casorati matrices of image series.
//!
//! A series of `t` frames of `nx × ny` pixels becomes an `(nx·ny) × t`
//! Casorati matrix whose column `j` is frame `j` vectorized in column-major
//! pixel order: pixel `(x, y)` lives in row `x + nx·y`. Stacked channels
//! occupy consecutive row bands of `nx·ny` rows each.
//!
//! The periodic tiling anchors one `k × k` block at every pixel, so every
//! pixel is covered by exactly `c = k²` blocks and `Σ_b R_bᴴR_b = c·I`.

use num_traits::{Float, Zero};
use rayon::prelude::*;

use crate::divergence::closed_form::{divergence, Divergence, DivergenceOptions};
use crate::divergence::sure::{check_tau, constant_term, SureReport};
use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix, SvdFactors};
use crate::scalar::{Field, RealScalar, Scalar};
use crate::spectral::{check_lambda, soft_threshold_scalar, SpectralFunction};

/// `t` frames of `nx × ny` pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSeries<T> {
    nx: usize,
    ny: usize,
    frames: Vec<Matrix<T>>,
}

impl<T: Scalar> ImageSeries<T> {
    pub fn new(frames: Vec<Matrix<T>>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::BadShape("series needs at least one frame".into()))?;
        let (nx, ny) = first.shape();
        if nx == 0 || ny == 0 {
            return Err(Error::BadShape(format!("{nx}x{ny} frames")));
        }
        for (j, f) in frames.iter().enumerate() {
            if f.shape() != (nx, ny) {
                return Err(Error::ShapeMismatch(format!(
                    "frame {j} is {}x{}, expected {nx}x{ny}",
                    f.rows(),
                    f.cols()
                )));
            }
            f.check_finite()?;
        }
        Ok(Self { nx, ny, frames })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Number of frames.
    pub fn t(&self) -> usize {
        self.frames.len()
    }

    pub fn field(&self) -> Field {
        T::FIELD
    }

    pub fn frames(&self) -> &[Matrix<T>] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Matrix<T>> {
        self.frames
    }
}

/// `(nx·ny) × t` Casorati matrix of the series.
pub fn casorati<T: Scalar>(series: &ImageSeries<T>) -> Matrix<T> {
    let (nx, ny) = (series.nx, series.ny);
    Matrix::from_fn(nx * ny, series.t(), |row, j| series.frames[j][(row % nx, row / nx)])
}

/// Inverse of [`casorati`].
pub fn inverse_casorati<T: Scalar>(x: &Matrix<T>, nx: usize, ny: usize) -> Result<ImageSeries<T>> {
    if nx == 0 || ny == 0 || x.rows() != nx * ny || x.cols() == 0 {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix is not the Casorati matrix of {nx}x{ny} frames",
            x.rows(),
            x.cols()
        )));
    }
    let frames = (0..x.cols())
        .map(|j| Matrix::from_fn(nx, ny, |px, py| x[(px + nx * py, j)]))
        .collect();
    ImageSeries::new(frames)
}

/// Block layout over the image domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tiling {
    /// One `k × k` block anchored at every pixel with wraparound; `c = k²`.
    Periodic,
    /// A single block holding the whole image; `c = 1`.
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockConfig {
    pub nx: usize,
    pub ny: usize,
    pub k: usize,
    /// Channels stacked as row bands of `nx·ny` rows.
    pub channels: usize,
    pub tiling: Tiling,
}

impl BlockConfig {
    /// Periodic tiling with `k × k` blocks.
    pub fn new(nx: usize, ny: usize, k: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::BadShape(format!("{nx}x{ny} image")));
        }
        if k == 0 || k > nx.min(ny) {
            return Err(Error::InvalidArgument(format!(
                "block size must be in 1..={} for a {nx}x{ny} image, got {k}",
                nx.min(ny)
            )));
        }
        Ok(Self {
            nx,
            ny,
            k,
            channels: 1,
            tiling: Tiling::Periodic,
        })
    }

    /// One block covering the whole image.
    pub fn single(nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::BadShape(format!("{nx}x{ny} image")));
        }
        Ok(Self {
            nx,
            ny,
            k: nx.max(ny),
            channels: 1,
            tiling: Tiling::Single,
        })
    }

    pub fn with_channels(self, channels: usize) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidArgument("channels must be positive".into()));
        }
        Ok(Self { channels, ..self })
    }

    /// Number of blocks covering each pixel.
    pub fn c(&self) -> usize {
        match self.tiling {
            Tiling::Periodic => self.k * self.k,
            Tiling::Single => 1,
        }
    }

    pub fn num_blocks(&self) -> usize {
        match self.tiling {
            Tiling::Periodic => self.nx * self.ny,
            Tiling::Single => 1,
        }
    }

    /// Rows of a Casorati matrix matching this configuration.
    pub fn rows(&self) -> usize {
        self.channels * self.nx * self.ny
    }

    pub fn block_rows_count(&self) -> usize {
        match self.tiling {
            Tiling::Periodic => self.channels * self.k * self.k,
            Tiling::Single => self.rows(),
        }
    }

    /// Casorati rows of the block anchored at pixel `anchor = x·ny + y`
    /// (row-major over pixels). Within the block, pixels `(x+dx, y+dy)` are
    /// listed row-major in `(dx, dy)`, wrapping periodically; channels are
    /// listed band by band.
    pub fn block_rows(&self, anchor: usize) -> Vec<usize> {
        let plane = self.nx * self.ny;
        match self.tiling {
            Tiling::Single => (0..self.rows()).collect(),
            Tiling::Periodic => {
                let (ax, ay) = (anchor / self.ny, anchor % self.ny);
                let mut rows = Vec::with_capacity(self.block_rows_count());
                for ch in 0..self.channels {
                    for dx in 0..self.k {
                        for dy in 0..self.k {
                            let px = (ax + dx) % self.nx;
                            let py = (ay + dy) % self.ny;
                            rows.push(ch * plane + px + self.nx * py);
                        }
                    }
                }
                rows
            }
        }
    }

    fn check_matrix<T: Scalar>(&self, x: &Matrix<T>) -> Result<()> {
        if x.rows() != self.rows() || x.cols() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for a configuration with {} rows",
                x.rows(),
                x.cols(),
                self.rows()
            )));
        }
        Ok(())
    }
}

/// `R_b x`: the rows of block `anchor`.
pub fn extract_block<T: Scalar>(x: &Matrix<T>, anchor: usize, cfg: &BlockConfig) -> Result<Matrix<T>> {
    cfg.check_matrix(x)?;
    if anchor >= cfg.num_blocks() {
        return Err(Error::ShapeMismatch(format!(
            "anchor {anchor} out of range for {} blocks",
            cfg.num_blocks()
        )));
    }
    Ok(x.select_rows(&cfg.block_rows(anchor)))
}

/// `out += R_bᴴ block`.
pub fn embed_block_add<T: Scalar>(out: &mut Matrix<T>, block: &Matrix<T>, anchor: usize, cfg: &BlockConfig) {
    for (r, &row) in cfg.block_rows(anchor).iter().enumerate() {
        for j in 0..out.cols() {
            out[(row, j)] += block[(r, j)];
        }
    }
}

/// SVDs of every block of a Casorati matrix, reusable across thresholds.
#[derive(Debug, Clone)]
pub struct BlockDecomposition<T: Scalar> {
    cfg: BlockConfig,
    cols: usize,
    factors: Vec<SvdFactors<T>>,
}

impl<T: Scalar> BlockDecomposition<T> {
    pub fn new(x: &Matrix<T>, cfg: &BlockConfig) -> Result<Self> {
        cfg.check_matrix(x)?;
        x.check_finite()?;
        let factors = (0..cfg.num_blocks())
            .into_par_iter()
            .map(|b| svd(&x.select_rows(&cfg.block_rows(b))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            cfg: *cfg,
            cols: x.cols(),
            factors,
        })
    }

    pub fn config(&self) -> &BlockConfig {
        &self.cfg
    }

    pub fn factors(&self) -> &[SvdFactors<T>] {
        &self.factors
    }

    /// Largest singular value over all blocks.
    pub fn sigma_max(&self) -> T::Real {
        self.factors
            .iter()
            .map(|f| f.sigma_max())
            .fold(T::Real::zero(), |a, b| a.max(b))
    }

    /// `c⁻¹ Σ_b R_bᴴ U_b diag(g(σ)) V_bᴴ`, accumulated in anchor order.
    fn assemble(&self, g: impl Fn(T::Real) -> T::Real + Sync) -> Matrix<T> {
        let parts: Vec<Matrix<T>> = self
            .factors
            .par_iter()
            .map(|f| f.compose(&f.sigma.iter().map(|&s| g(s)).collect::<Vec<_>>()))
            .collect();
        let mut out = Matrix::zeros(self.cfg.rows(), self.cols);
        for (b, part) in parts.iter().enumerate() {
            embed_block_add(&mut out, part, b, &self.cfg);
        }
        let c = T::Real::from_usize_lossy(self.cfg.c());
        out.scaled(c.recip())
    }

    /// Block-wise SVT at `lambda`.
    pub fn apply(&self, lambda: T::Real) -> Result<Matrix<T>> {
        check_lambda(lambda)?;
        Ok(self.assemble(|s| soft_threshold_scalar(s, lambda)))
    }

    /// `c⁻¹ Σ_b div svt(R_b x)`; flags are OR-ed over blocks.
    pub fn divergence(&self, lambda: T::Real, opts: &DivergenceOptions<T::Real>) -> Result<Divergence<T::Real>> {
        check_lambda(lambda)?;
        let f = SpectralFunction::SoftThreshold(lambda);
        let (m, n) = (self.cfg.block_rows_count(), self.cols);
        let parts: Vec<Result<Divergence<T::Real>>> = self
            .factors
            .par_iter()
            .map(|fac| divergence(&fac.sigma, m, n, &f, T::FIELD, opts))
            .collect();
        let mut total = Divergence {
            value: T::Real::zero(),
            repeated_spectrum: false,
            threshold_tie: false,
        };
        for p in parts {
            let p = p?;
            total.value += p.value;
            total.repeated_spectrum |= p.repeated_spectrum;
            total.threshold_tie |= p.threshold_tie;
        }
        total.value = total.value / T::Real::from_usize_lossy(self.cfg.c());
        Ok(total)
    }

    /// `‖x − bsvt(x)‖²_F = c⁻²‖Σ_b R_bᴴ U_b min(λ, Σ_b) V_bᴴ‖²_F`.
    pub fn residual(&self, lambda: T::Real) -> Result<T::Real> {
        check_lambda(lambda)?;
        Ok(self.assemble(|s| s.min(lambda)).frobenius_norm_sqr())
    }

    pub fn sure(
        &self,
        lambda: T::Real,
        tau: T::Real,
        opts: &DivergenceOptions<T::Real>,
    ) -> Result<SureReport<T::Real>> {
        check_tau(tau)?;
        let div = self.divergence(lambda, opts)?;
        let residual = self.residual(lambda)?;
        let constant = constant_term(T::FIELD, self.cfg.rows() * self.cols, tau);
        Ok(SureReport::assemble(Some(lambda), div, residual, constant, tau))
    }
}

/// `c⁻¹ Σ_b R_bᴴ svt(R_b x, λ)`. At `λ = 0` every block is returned as is,
/// the tiling averages back to `x`, and the input is returned unchanged.
pub fn bsvt<T: Scalar>(x: &Matrix<T>, cfg: &BlockConfig, lambda: T::Real) -> Result<Matrix<T>> {
    check_lambda(lambda)?;
    if lambda == T::Real::zero() {
        cfg.check_matrix(x)?;
        x.check_finite()?;
        return Ok(x.clone());
    }
    BlockDecomposition::new(x, cfg)?.apply(lambda)
}

/// Divergence of block-wise SVT.
pub fn div_bsvt<T: Scalar>(x: &Matrix<T>, cfg: &BlockConfig, lambda: T::Real) -> Result<T::Real> {
    check_lambda(lambda)?;
    Ok(BlockDecomposition::new(x, cfg)?
        .divergence(lambda, &DivergenceOptions::default())?
        .value)
}

/// SURE of block-wise SVT.
pub fn sure_bsvt<T: Scalar>(
    x: &Matrix<T>,
    cfg: &BlockConfig,
    lambda: T::Real,
    tau: T::Real,
) -> Result<SureReport<T::Real>> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    BlockDecomposition::new(x, cfg)?.sure(lambda, tau, &DivergenceOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::fd::fd_divergence;
    use crate::divergence::sure::sure_svt;
    use crate::spectral::svt;
    use crate::testutil::{random_matrix, seeded_rng};
    use num_complex::Complex64;

    #[test]
    fn casorati_columns_are_frames() {
        let frames = (0..3).map(|j| Matrix::<f64>::from_fn(2, 2, |_, _| j as f64)).collect();
        let s = ImageSeries::new(frames).unwrap();
        let c = casorati(&s);
        assert_eq!(c.shape(), (4, 3));
        for j in 0..3 {
            assert!(c.column(j).iter().all(|&v| v == j as f64));
        }
        assert_eq!(inverse_casorati(&c, 2, 2).unwrap(), s);
    }

    #[test]
    fn casorati_pixel_order_is_column_major() {
        let f = Matrix::<f64>::from_fn(2, 3, |x, y| (10 * x + y) as f64);
        let c = casorati(&ImageSeries::new(vec![f]).unwrap());
        assert_eq!(c.column(0), vec![0.0, 10.0, 1.0, 11.0, 2.0, 12.0]);
    }

    #[test]
    fn single_pixel_series_is_a_row() {
        let frames = (0..4).map(|j| Matrix::<f64>::from_fn(1, 1, |_, _| j as f64)).collect();
        let s = ImageSeries::new(frames).unwrap();
        let c = casorati(&s);
        assert_eq!(c.shape(), (1, 4));
        assert_eq!(inverse_casorati(&c, 1, 1).unwrap(), s);
        assert!(inverse_casorati(&c, 2, 1).is_err());
    }

    #[test]
    fn block_extraction() {
        let cfg = BlockConfig::new(2, 2, 2).unwrap();
        for b in 0..4 {
            let mut rows = cfg.block_rows(b);
            rows.sort();
            assert_eq!(rows, vec![0, 1, 2, 3]);
        }
        let cfg = BlockConfig::new(4, 4, 1).unwrap();
        for b in 0..16 {
            let (x, y) = (b / 4, b % 4);
            assert_eq!(cfg.block_rows(b), vec![x + 4 * y]);
        }
        let cfg = BlockConfig::new(3, 3, 2).unwrap();
        let anchor = 2 * 3 + 2;
        let px = |x: usize, y: usize| x + 3 * y;
        assert_eq!(cfg.block_rows(anchor), vec![px(2, 2), px(2, 0), px(0, 2), px(0, 0)]);
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(BlockConfig::new(3, 5, 4).is_err());
        assert!(BlockConfig::new(3, 5, 0).is_err());
        let cfg = BlockConfig::new(3, 3, 2).unwrap();
        let x = Matrix::<f64>::zeros(8, 2);
        assert!(extract_block(&x, 0, &cfg).is_err());
    }

    #[test]
    fn tiling_is_a_partition_of_unity() {
        for (nx, ny, k) in [(5, 4, 2), (6, 6, 3), (3, 7, 3)] {
            let cfg = BlockConfig::new(nx, ny, k).unwrap();
            let ones = Matrix::<f64>::from_fn(nx * ny, 2, |_, _| 1.0);
            let mut acc = Matrix::zeros(nx * ny, 2);
            for b in 0..cfg.num_blocks() {
                embed_block_add(&mut acc, &extract_block(&ones, b, &cfg).unwrap(), b, &cfg);
            }
            assert!(acc.as_slice().iter().all(|&v| v == (k * k) as f64));
        }
    }

    #[test]
    fn single_block_reduces_to_svt() {
        let mut rng = seeded_rng(21);
        let x: Matrix<Complex64> = random_matrix(&mut rng, 12, 5);
        let cfg = BlockConfig::single(4, 3).unwrap();
        let a = bsvt(&x, &cfg, 1.2).unwrap();
        let b = svt(&x, 1.2).unwrap();
        assert!((&a - &b).frobenius_norm() <= 1e-12 * b.frobenius_norm());
        let sa = sure_bsvt(&x, &cfg, 1.2, 0.3).unwrap();
        let sb = sure_svt(&x, 1.2, 0.3).unwrap();
        assert!((sa.sure - sb.sure).abs() <= 1e-12 * sb.sure.abs());
    }

    #[test]
    fn full_size_blocks_reduce_to_svt() {
        let mut rng = seeded_rng(22);
        let x: Matrix<f64> = random_matrix(&mut rng, 9, 4);
        let cfg = BlockConfig::new(3, 3, 3).unwrap();
        let a = bsvt(&x, &cfg, 0.9).unwrap();
        let b = svt(&x, 0.9).unwrap();
        assert!((&a - &b).frobenius_norm() <= 1e-12 * b.frobenius_norm());
    }

    #[test]
    fn zero_threshold_is_identity() {
        let mut rng = seeded_rng(23);
        let x: Matrix<f64> = random_matrix(&mut rng, 20, 4);
        let cfg = BlockConfig::new(5, 4, 2).unwrap();
        assert_eq!(bsvt(&x, &cfg, 0.0).unwrap(), x);
        let dec = BlockDecomposition::new(&x, &cfg).unwrap();
        assert!((&dec.apply(0.0).unwrap() - &x).max_abs() < 1e-12);
        let d = div_bsvt(&x, &cfg, 0.0).unwrap();
        assert!((d - 80.0).abs() < 1e-9, "{d}");
        let r = sure_bsvt(&x, &cfg, 0.0, 0.5).unwrap();
        assert!((r.sure - 80.0 * 0.25).abs() < 1e-9);
    }

    #[test]
    fn large_threshold_is_zero() {
        let mut rng = seeded_rng(24);
        let x: Matrix<f64> = random_matrix(&mut rng, 16, 3);
        let cfg = BlockConfig::new(4, 4, 2).unwrap();
        let dec = BlockDecomposition::new(&x, &cfg).unwrap();
        let l = dec.sigma_max() * 1.01;
        assert_eq!(dec.apply(l).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn residual_matches_direct_difference() {
        let mut rng = seeded_rng(25);
        let x: Matrix<Complex64> = random_matrix(&mut rng, 20, 6);
        let cfg = BlockConfig::new(4, 5, 2).unwrap();
        let dec = BlockDecomposition::new(&x, &cfg).unwrap();
        let direct = (&x - &dec.apply(0.8).unwrap()).frobenius_norm_sqr();
        assert!((dec.residual(0.8).unwrap() - direct).abs() <= 1e-10 * direct);
    }

    #[test]
    fn divergence_matches_fd_on_small_series() {
        let mut rng = seeded_rng(26);
        let x: Matrix<f64> = random_matrix(&mut rng, 36, 4);
        let cfg = BlockConfig::new(6, 6, 2).unwrap();
        let closed = div_bsvt(&x, &cfg, 0.5).unwrap();
        let fd = fd_divergence(&x, 1e-5, |z| bsvt(z, &cfg, 0.5)).unwrap();
        assert!((closed - fd).abs() <= 1e-3 * closed.abs().max(1.0), "{closed} vs {fd}");
    }

    #[test]
    fn stacked_channels() {
        let mut rng = seeded_rng(27);
        let cfg = BlockConfig::new(3, 3, 2).unwrap().with_channels(2).unwrap();
        assert_eq!(cfg.block_rows_count(), 8);
        let x: Matrix<f64> = random_matrix(&mut rng, 18, 5);
        let d = div_bsvt(&x, &cfg, 0.0).unwrap();
        assert!((d - 90.0).abs() < 1e-9);
        assert!(cfg.block_rows(4).iter().filter(|&&r| r >= 9).count() == 4);
    }

    #[test]
    fn is_non_expansive() {
        let mut rng = seeded_rng(28);
        let cfg = BlockConfig::new(4, 3, 2).unwrap();
        for _ in 0..50 {
            let a: Matrix<f64> = random_matrix(&mut rng, 12, 3);
            let b: Matrix<f64> = random_matrix(&mut rng, 12, 3);
            let d = (&bsvt(&a, &cfg, 0.7).unwrap() - &bsvt(&b, &cfg, 0.7).unwrap()).frobenius_norm();
            assert!(d <= (&a - &b).frobenius_norm() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn deterministic_output() {
        let mut rng = seeded_rng(29);
        let x: Matrix<Complex64> = random_matrix(&mut rng, 25, 4);
        let cfg = BlockConfig::new(5, 5, 3).unwrap();
        assert_eq!(bsvt(&x, &cfg, 0.4).unwrap(), bsvt(&x, &cfg, 0.4).unwrap());
    }
}
