//! Non-Hermitian eigendecomposition of quaternionic matrices into standard
//! (upper-half-plane) eigenvalues with bi-orthogonal left/right eigenvector
//! systems and Kramers partners, and the direct overlap matrix.

use crate::cmat::{pauli_conj, vec_norm, CMat};
use crate::ensemble::QuaternionMatrix;
use crate::error::GinseError;
use crate::{C64, Result};

/// Relative tolerance below which two eigenvalues count as degenerate and a
/// draw is rejected as a measure-zero event.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Relative tolerance for the conjugate-partner match.
pub const PAIRING_TOL: f64 = 1e-8;

/// Eigenvalues with their bi-orthogonalized eigenvector system.
///
/// `values[k]` has `Im > 0`; right vectors occupy columns `(2k, 2k+1)` of
/// `right` as `(R_k, R_kbar)` with the partner built by the Pauli sandwich
/// `R_kbar = tau2 conj(R_k)`, never by a second decomposition. Left vectors
/// are stored as the rows of `left_rows` (row `i` is `L_i^dagger`), obtained
/// from one linear solve against the right system so that bi-orthogonality
/// holds to solver precision.
#[derive(Debug, Clone)]
pub struct SpectrumPairing {
    values: Vec<C64>,
    right: CMat,
    left_rows: CMat,
}

impl SpectrumPairing {
    pub fn n_pairs(&self) -> usize {
        self.values.len()
    }

    /// Upper-half-plane representatives, one per Kramers pair.
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Eigenvalue of extended index `m` in the interleaved order
    /// `(z_1, conj z_1, z_2, ...)`.
    pub fn value_ext(&self, m: usize) -> C64 {
        let z = self.values[m / 2];
        if m % 2 == 0 {
            z
        } else {
            z.conj()
        }
    }

    pub fn right(&self) -> &CMat {
        &self.right
    }

    pub fn left_rows(&self) -> &CMat {
        &self.left_rows
    }

    /// Applies the gauge change `(R_i, L_i) -> (c R_i, L_i / conj c)` on
    /// extended index `i`; overlaps must be invariant under it.
    pub fn rescale(&mut self, i: usize, c: C64) {
        let n2 = self.right.rows();
        for m in 0..n2 {
            self.right[(m, i)] *= c;
            self.left_rows[(i, m)] /= c;
        }
    }

    /// Conjugates the whole eigenvector system by a unitary matrix
    /// (`R -> U R`, `L^dag -> L^dag U^dag`); unitary-symplectic `U` must
    /// leave the overlap matrix unchanged.
    pub fn transform(&self, u: &CMat) -> SpectrumPairing {
        SpectrumPairing {
            values: self.values.clone(),
            right: u.mul(&self.right),
            left_rows: self.left_rows.mul(&u.adjoint()),
        }
    }

    /// Worst relative eigen-residual `max(|G R - z R|, |L^dag G - z L^dag|)`
    /// over all extended indices, relative to the spectral radius.
    pub fn residual(&self, g: &QuaternionMatrix) -> f64 {
        let m = g.entries();
        let n2 = 2 * self.n_pairs();
        let radius = self.values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        let gr = m.mul(&self.right);
        let lg = self.left_rows.mul(m);
        let mut worst: f64 = 0.0;
        for i in 0..n2 {
            let z = self.value_ext(i);
            let mut r = 0.0;
            let mut l = 0.0;
            for k in 0..n2 {
                r += (gr[(k, i)] - z * self.right[(k, i)]).norm_sqr();
                l += (lg[(i, k)] - z * self.left_rows[(i, k)]).norm_sqr();
            }
            let rn = vec_norm(self.right.col(i)).max(1e-300);
            let ln = (0..n2).map(|k| self.left_rows[(i, k)].norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(r.sqrt() / (radius * rn)).max(l.sqrt() / (radius * ln.max(1e-300)));
        }
        worst
    }

    /// Largest deviation of `L_i^dag . R_j` from the identity.
    pub fn biorthogonality_violation(&self) -> f64 {
        let prod = self.left_rows.mul(&self.right);
        let n2 = prod.rows();
        let mut worst: f64 = 0.0;
        for i in 0..n2 {
            for j in 0..n2 {
                let target = if i == j { C64::ONE } else { C64::ZERO };
                worst = worst.max((prod[(i, j)] - target).norm());
            }
        }
        worst
    }
}

/// Hermitian 2N x 2N matrix of overlaps, rows and columns in the interleaved
/// order `(1, 1bar, 2, 2bar, ...)`; entry `(i, j)` is
/// `O_ij = (L_i^dag . L_j)(R_j^dag . R_i)`.
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    n_pairs: usize,
    entries: CMat,
}

impl OverlapMatrix {
    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    /// Raw entry by extended indices.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    /// `O_{kl}` on unbarred pair indices.
    pub fn unbarred(&self, k: usize, l: usize) -> C64 {
        self.entries[(2 * k, 2 * l)]
    }

    /// `O_{k lbar}`.
    pub fn barred_col(&self, k: usize, l: usize) -> C64 {
        self.entries[(2 * k, 2 * l + 1)]
    }

    /// Diagonal overlap of pair `k` (real up to round-off).
    pub fn diag(&self, k: usize) -> f64 {
        self.entries[(2 * k, 2 * k)].re
    }

    /// Scale used by the relative violation measures.
    pub fn scale(&self) -> f64 {
        self.entries.max_norm().max(1e-300)
    }

    pub fn hermiticity_violation(&self) -> f64 {
        let n2 = 2 * self.n_pairs;
        let mut worst: f64 = 0.0;
        for i in 0..n2 {
            for j in i..n2 {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst / self.scale()
    }

    /// Largest `|O_{i ibar}|` relative to `O_ii`.
    pub fn pair_orthogonality_violation(&self) -> f64 {
        (0..self.n_pairs)
            .map(|k| self.entries[(2 * k, 2 * k + 1)].norm() / self.diag(k).abs().max(1e-300))
            .fold(0.0, f64::max)
    }

    /// Largest `|O_ii - O_{ibar ibar}|` relative to `O_ii`.
    pub fn diag_pair_violation(&self) -> f64 {
        (0..self.n_pairs)
            .map(|k| {
                (self.entries[(2 * k, 2 * k)] - self.entries[(2 * k + 1, 2 * k + 1)]).norm()
                    / self.diag(k).abs().max(1e-300)
            })
            .fold(0.0, f64::max)
    }

    /// Largest violation of the closure relation. The dyadic completeness of
    /// the quaternionic eigenvector system fixes the combined sums
    /// `sum_j (O_ij + O_{i jbar}) = 1` for every unbarred row `i`, and the
    /// barred-row counterpart; the two groups are not separately normalized
    /// draw by draw.
    pub fn row_sum_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.n_pairs {
            for row in [2 * k, 2 * k + 1] {
                let mut s = C64::ZERO;
                for l in 0..self.n_pairs {
                    s += self.entries[(row, 2 * l)] + self.entries[(row, 2 * l + 1)];
                }
                worst = worst.max((s - C64::ONE).norm());
            }
        }
        worst
    }

    /// Largest violation of the pair symmetries
    /// `O_{i jbar} = conj(O_{ibar j})` and `O_{ibar jbar} = conj(O_{ij})`.
    pub fn pair_symmetry_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n_pairs {
            for j in 0..self.n_pairs {
                let a = self.entries[(2 * i, 2 * j + 1)] - self.entries[(2 * i + 1, 2 * j)].conj();
                let b = self.entries[(2 * i + 1, 2 * j + 1)] - self.entries[(2 * i, 2 * j)].conj();
                worst = worst.max(a.norm()).max(b.norm());
            }
        }
        worst / self.scale()
    }
}

/// Decomposes a quaternionic matrix into standard eigenpairs.
///
/// Right eigenvectors come from the general non-symmetric solver and are
/// normalized to unit Euclidean norm; Kramers partners are built by the
/// Pauli sandwich; left vectors come from inverting the right system.
/// Measure-zero draws (real or degenerate eigenvalues, failed pairing) are
/// rejected so the caller can resample.
pub fn standard_eigenpairs(g: &QuaternionMatrix) -> Result<SpectrumPairing> {
    let n = g.dim_pairs();
    let n2 = 2 * n;
    let evd = g
        .entries()
        .to_faer()
        .eigen()
        .map_err(|e| GinseError::InvalidParams(format!("eigensolver failed: {e:?}")))?;
    let s = evd.S();
    let u = evd.U();

    let all: Vec<C64> = (0..n2).map(|i| s[i]).collect();
    let radius = all.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);

    let real_tol = DEGENERACY_TOL * radius;
    if let Some(z) = all.iter().find(|z| z.im.abs() < real_tol) {
        return Err(GinseError::RealEigenvalue(z.im.abs()));
    }
    let mut upper: Vec<usize> = (0..n2).filter(|&i| all[i].im > 0.0).collect();
    if upper.len() != n {
        return Err(GinseError::UnpairedEigenvalue(f64::NAN));
    }
    upper.sort_by(|&a, &b| (all[a].re, all[a].im).partial_cmp(&(all[b].re, all[b].im)).unwrap());

    for (a, &ia) in upper.iter().enumerate() {
        for &ib in upper.iter().skip(a + 1) {
            let d = (all[ia] - all[ib]).norm();
            if d < DEGENERACY_TOL * radius {
                return Err(GinseError::DegenerateSpectrum(d));
            }
        }
    }

    // greedy conjugate matching against the lower-half-plane values
    let lower: Vec<usize> = (0..n2).filter(|&i| all[i].im < 0.0).collect();
    let mut used = vec![false; lower.len()];
    for &iu in &upper {
        let target = all[iu].conj();
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (k, &il) in lower.iter().enumerate() {
            if used[k] {
                continue;
            }
            let d = (all[il] - target).norm();
            if d < best_d {
                best_d = d;
                best = Some(k);
            }
        }
        match best {
            Some(k) if best_d <= PAIRING_TOL * radius => used[k] = true,
            _ => return Err(GinseError::UnpairedEigenvalue(best_d)),
        }
    }

    let mut right = CMat::zeros(n2, n2);
    let mut values = Vec::with_capacity(n);
    for (k, &iu) in upper.iter().enumerate() {
        values.push(all[iu]);
        let col: Vec<C64> = (0..n2).map(|m| u[(m, iu)]).collect();
        let nrm = vec_norm(&col);
        let col: Vec<C64> = col.into_iter().map(|v| v / nrm).collect();
        let partner = pauli_conj(&col);
        for m in 0..n2 {
            right[(m, 2 * k)] = col[m];
            right[(m, 2 * k + 1)] = partner[m];
        }
    }

    let inv = invert(&right)?;
    Ok(SpectrumPairing { values, right, left_rows: inv })
}

fn invert(m: &CMat) -> Result<CMat> {
    use faer::linalg::solvers::DenseSolveCore;
    let lu = m.to_faer().partial_piv_lu();
    let inv = lu.inverse();
    let out = CMat::from_faer(&inv);
    if out.col(0).iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(GinseError::SingularMatrix(f64::NEG_INFINITY));
    }
    Ok(out)
}

/// Computes all `4 N^2` overlap entries
/// `O_ij = (L_i^dag . L_j)(R_j^dag . R_i)` from a pairing. The compensating
/// `L`/`R` combination makes the result gauge invariant by construction.
pub fn overlap_matrix(s: &SpectrumPairing) -> OverlapMatrix {
    let n2 = 2 * s.n_pairs();
    // (L L^dag)_ij = L_i^dag . L_j;  (R^dag R)_ji = R_j^dag . R_i
    let lgram = s.left_rows.mul(&s.left_rows.adjoint());
    let rgram = s.right.adjoint().mul(&s.right);
    let entries = CMat::from_fn(n2, n2, |i, j| lgram[(i, j)] * rgram[(j, i)]);
    OverlapMatrix { n_pairs: s.n_pairs(), entries }
}

/// Axis-aligned rectangle in the upper half-plane used to bin delta
/// functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Rect {
    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.x_lo && z.re < self.x_hi && z.im >= self.y_lo && z.im < self.y_hi
    }

    pub fn area(&self) -> f64 {
        (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)
    }

    pub fn center(&self) -> C64 {
        C64::new(0.5 * (self.x_lo + self.x_hi), 0.5 * (self.y_lo + self.y_hi))
    }
}

/// Per-sample contribution to the binned estimator of the overlap-weighted
/// two-point density, including the diagonal term.
///
/// Pair `(k, l)` contributes `Re(O_{kl} + O_{kbar l}) / (N a_1 a_2)` when
/// `z_l` falls in `x1_bin` and `z_k` in `x2_bin`; summing the second factor
/// over all of `x2` then reproduces the one-point density estimator exactly,
/// sample by sample, through the closure relation.
pub fn d_density_sample(
    s: &SpectrumPairing,
    o: &OverlapMatrix,
    x1_bin: Rect,
    x2_bin: Rect,
) -> f64 {
    let n = s.n_pairs();
    let norm = n as f64 * x1_bin.area() * x2_bin.area();
    let mut acc = 0.0;
    for l in 0..n {
        if !x1_bin.contains(s.values()[l]) {
            continue;
        }
        for k in 0..n {
            if x2_bin.contains(s.values()[k]) {
                acc += (o.entry(2 * k, 2 * l) + o.entry(2 * k + 1, 2 * l)).re;
            }
        }
    }
    acc / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_ginse, EnsembleParams, RngStream};

    fn draw(n: usize, seed: u64) -> QuaternionMatrix {
        let p = EnsembleParams::induced(n, 0.0, 1.0).unwrap();
        let mut s = seed;
        loop {
            match sample_ginse(&p, RngStream::new(s, 0)) {
                Ok(g) => return g,
                Err(_) => s += 1,
            }
        }
    }

    fn pairing(n: usize, seed: u64) -> (QuaternionMatrix, SpectrumPairing) {
        let mut s = seed;
        loop {
            let g = draw(n, s);
            match standard_eigenpairs(&g) {
                Ok(p) => return (g, p),
                Err(_) => s += 1,
            }
        }
    }

    #[test]
    fn diagonal_quaternion_matrix_is_fixed_point() {
        let zs = [C64::new(0.3, 0.9), C64::new(-1.1, 0.4)];
        let g = QuaternionMatrix::from_blocks(2, |i, j| {
            if i == j {
                (zs[i], C64::ZERO)
            } else {
                (C64::ZERO, C64::ZERO)
            }
        });
        let s = standard_eigenpairs(&g).unwrap();
        let mut got = s.values().to_vec();
        got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let mut want = zs.to_vec();
        want.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
        // eigenvectors are (phases of) Cartesian unit vectors
        for col in 0..4 {
            let c = s.right().col(col);
            let big = c.iter().filter(|v| v.norm() > 1e-9).count();
            assert_eq!(big, 1);
        }
    }

    #[test]
    fn single_block_eigenvalue_formula() {
        // [[a, b], [-conj b, conj a]] has standard eigenvalue
        // Re(a) + i sqrt(Im(a)^2 + |b|^2)
        let a = C64::new(0.7, -0.3);
        let b = C64::new(0.2, 0.5);
        let g = QuaternionMatrix::from_blocks(1, |_, _| (a, b));
        let s = standard_eigenpairs(&g).unwrap();
        let want = C64::new(a.re, (a.im * a.im + b.norm_sqr()).sqrt());
        assert!((s.values()[0] - want).norm() < 1e-12);
    }

    #[test]
    fn biorthogonality_all_pairs() {
        let (_, s) = pairing(5, 100);
        assert!(s.biorthogonality_violation() < 1e-8);
    }

    #[test]
    fn residuals_small() {
        let (g, s) = pairing(8, 200);
        assert!(s.residual(&g) < 1e-10, "residual {}", s.residual(&g));
    }

    #[test]
    fn residual_bound_at_n64() {
        let (g, s) = pairing(64, 6400);
        let r = s.residual(&g);
        assert!(r < 1e-10, "residual {r:e} at N=64");
        assert!(s.biorthogonality_violation() < 1e-8);
    }

    #[test]
    fn kramers_conjugation_closure() {
        let g = draw(3, 300);
        let f = g.entries().to_faer();
        let evd = f.eigen().unwrap();
        let s = evd.S();
        let vals: Vec<C64> = (0..6).map(|i| s[i]).collect();
        let radius = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for z in &vals {
            let best = vals.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10 * radius, "conjugate partner missing: {best:e}");
        }
    }

    #[test]
    fn overlap_identities() {
        let (_, s) = pairing(6, 400);
        let o = overlap_matrix(&s);
        assert!(o.hermiticity_violation() < 1e-10);
        assert!(o.pair_orthogonality_violation() < 1e-10);
        assert!(o.diag_pair_violation() < 1e-10);
        assert!(o.pair_symmetry_violation() < 1e-10);
        assert!(o.row_sum_violation() < 1e-6);
        for k in 0..6 {
            assert!(o.diag(k) >= 1.0 - 1e-9, "diagonal overlap >= 1");
        }
    }

    #[test]
    fn normal_matrix_gives_identity_overlaps() {
        // diagonal quaternionic matrix: left = right eigenvectors
        let zs = [C64::new(0.1, 0.6), C64::new(-0.4, 1.2), C64::new(0.9, 0.3)];
        let g = QuaternionMatrix::from_blocks(3, |i, j| {
            if i == j {
                (zs[i], C64::ZERO)
            } else {
                (C64::ZERO, C64::ZERO)
            }
        });
        let s = standard_eigenpairs(&g).unwrap();
        let o = overlap_matrix(&s);
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { C64::ONE } else { C64::ZERO };
                assert!((o.entry(i, j) - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rescaling_invariance() {
        let (_, s) = pairing(4, 500);
        let o0 = overlap_matrix(&s);
        let mut s2 = s.clone();
        s2.rescale(1, C64::new(-2.3, 0.7));
        s2.rescale(4, C64::new(0.05, -1.4));
        let o1 = overlap_matrix(&s2);
        let mut worst: f64 = 0.0;
        for i in 0..8 {
            for j in 0..8 {
                worst = worst.max((o0.entry(i, j) - o1.entry(i, j)).norm());
            }
        }
        assert!(worst < 1e-12 * o0.scale(), "worst {worst:e}");
    }

    #[test]
    fn symplectic_invariance() {
        use crate::schur::random_usp;
        let (_, s) = pairing(4, 600);
        let o0 = overlap_matrix(&s);
        let u = random_usp(4, RngStream::new(77, 0));
        let o1 = overlap_matrix(&s.transform(&u));
        let mut worst: f64 = 0.0;
        for i in 0..8 {
            for j in 0..8 {
                worst = worst.max((o0.entry(i, j) - o1.entry(i, j)).norm());
            }
        }
        assert!(worst < 1e-10 * o0.scale(), "worst {worst:e}");
    }

    #[test]
    fn d_density_bins() {
        let (_, s) = pairing(4, 700);
        let o = overlap_matrix(&s);
        // bin far from everything
        let empty = Rect { x_lo: 90.0, x_hi: 91.0, y_lo: 90.0, y_hi: 91.0 };
        assert_eq!(d_density_sample(&s, &o, empty, empty), 0.0);

        // same bin holding exactly one eigenvalue: diagonal term only
        let z = s.values()[0];
        let only: Vec<_> = s.values().iter().filter(|w| (*w - z).norm() < 0.05).collect();
        if only.len() == 1 {
            let b = Rect {
                x_lo: z.re - 0.025,
                x_hi: z.re + 0.025,
                y_lo: z.im - 0.025,
                y_hi: z.im + 0.025,
            };
            let v = d_density_sample(&s, &o, b, b);
            let want = o.diag(0) / (4.0 * b.area() * b.area());
            assert!((v - want).abs() < 1e-9 * want.abs());
        }

        // integrating over a grid of x2 bins covering the spectrum
        // reproduces the density estimator exactly (closure relation)
        let radius = s.values().iter().map(|z| z.norm()).fold(0.0, f64::max) * 1.5 + 1.0;
        let x1 = Rect { x_lo: z.re - 0.1, x_hi: z.re + 0.1, y_lo: z.im - 0.1, y_hi: z.im + 0.1 };
        let m = 24;
        let mut total = 0.0;
        for a in 0..m {
            for b in 0..m {
                let bin = Rect {
                    x_lo: -radius + 2.0 * radius * a as f64 / m as f64,
                    x_hi: -radius + 2.0 * radius * (a + 1) as f64 / m as f64,
                    y_lo: radius * b as f64 / m as f64,
                    y_hi: radius * (b + 1) as f64 / m as f64,
                };
                total += d_density_sample(&s, &o, x1, bin) * bin.area();
            }
        }
        let hits = s.values().iter().filter(|w| x1.contains(**w)).count();
        let density = hits as f64 / (4.0 * x1.area());
        assert!((total - density).abs() < 1e-8 * density.max(1.0), "{total} vs {density}");
    }
}
