//! Schur-decomposition route to the overlaps: quaternion-structure-preserving
//! Schur form, the forward recursions for the left-eigenvector coefficients,
//! overlap reconstruction from Schur data, and the closed-form averages over
//! the Gaussian strictly-upper-triangular matrix at fixed eigenvalues.

use crate::cmat::{dot_adj, pauli_conj, vec_norm, CMat};
use crate::eigen::standard_eigenpairs;
use crate::ensemble::{EigenvalueConfig, QuaternionMatrix, RngStream, UpperTriangularT};
use crate::error::GinseError;
use crate::{C64, Result};
use num_complex::Complex;

/// Denominators `z_i - z_j` below `NEAR_COLLISION_TOL * max |z|` reject the
/// configuration rather than regularizing it.
pub const NEAR_COLLISION_TOL: f64 = 1e-12;

/// Quaternionic Schur form `G = U Gtilde U^dagger`: diagonal blocks
/// `diag(z_k, conj z_k)` with `Im z_k > 0`, strictly upper-triangular
/// quaternionic `T`, unitary-symplectic `U`.
#[derive(Debug, Clone)]
pub struct SchurForm {
    z: EigenvalueConfig,
    t: UpperTriangularT,
    u: CMat,
}

impl SchurForm {
    /// Assembles a form from parts (used by the fixed-eigenvalue T averages,
    /// where `U` plays no role).
    pub fn from_parts(z: EigenvalueConfig, t: UpperTriangularT) -> Result<Self> {
        if z.n() != t.dim_pairs() {
            return Err(GinseError::InvalidParams("Z/T dimension mismatch".into()));
        }
        let n = z.n();
        Ok(Self { z, t, u: CMat::identity(2 * n) })
    }

    pub fn n_pairs(&self) -> usize {
        self.z.n()
    }

    pub fn eigenvalues(&self) -> &EigenvalueConfig {
        &self.z
    }

    pub fn t(&self) -> &UpperTriangularT {
        &self.t
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    /// Dense upper-triangular factor with the eigenvalue pairs on the
    /// diagonal.
    pub fn triangular(&self) -> CMat {
        let mut m = self.t.to_cmat();
        for (k, z) in self.z.points().iter().enumerate() {
            m[(2 * k, 2 * k)] = *z;
            m[(2 * k + 1, 2 * k + 1)] = z.conj();
        }
        m
    }

    /// `U Gtilde U^dagger`, for the reconstruction invariant.
    pub fn reconstruct(&self) -> CMat {
        self.u.mul(&self.triangular()).mul(&self.u.adjoint())
    }

    /// `max |U^dag U - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.u.adjoint().mul(&self.u);
        let n2 = p.rows();
        let mut worst: f64 = 0.0;
        for i in 0..n2 {
            for j in 0..n2 {
                let t = if i == j { C64::ONE } else { C64::ZERO };
                worst = worst.max((p[(i, j)] - t).norm());
            }
        }
        worst
    }

    /// Worst violation of the quaternion block structure of `U`
    /// (equivalently `tau2 conj(U) tau2^{-1} = U`).
    pub fn symplectic_error(&self) -> f64 {
        let n = self.n_pairs();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = self.u[(2 * i, 2 * j)];
                let b = self.u[(2 * i, 2 * j + 1)];
                let c = self.u[(2 * i + 1, 2 * j)];
                let d = self.u[(2 * i + 1, 2 * j + 1)];
                worst = worst.max((c + b.conj()).norm()).max((d - a.conj()).norm());
            }
        }
        worst
    }
}

/// Partner column completing a quaternion block pair: given column `u` the
/// pair `(u, -i tau2 conj u)` has the exact `[[a, b], [-conj b, conj a]]`
/// block layout.
fn quaternion_partner(u: &[C64]) -> Vec<C64> {
    pauli_conj(u).into_iter().map(|v| v * C64::new(0.0, -1.0)).collect()
}

/// Structure-preserving Gram-Schmidt over pair columns: orthonormalizes the
/// chain of right-eigenvector pair spans in the given order. Column phases
/// are fixed by making the largest-modulus component real positive, so an
/// already upper-triangular input reproduces the identity.
fn usp_from_pair_columns(cols: &[Vec<C64>]) -> Result<CMat> {
    let n = cols.len();
    let n2 = 2 * n;
    let mut u = CMat::zeros(n2, n2);
    for (k, base) in cols.iter().enumerate() {
        let mut v = base.clone();
        for _ in 0..2 {
            for built in 0..2 * k {
                let c = u.col(built);
                let proj = dot_adj(c, &v);
                for m in 0..n2 {
                    v[m] -= proj * c[m];
                }
            }
        }
        let nrm = vec_norm(&v);
        if nrm < 1e-10 * vec_norm(base).max(1e-300) {
            return Err(GinseError::DegenerateSpectrum(nrm));
        }
        // gauge: largest component real positive
        let (mut big, mut mag) = (0usize, 0.0f64);
        for (m, z) in v.iter().enumerate() {
            if z.norm() > mag {
                mag = z.norm();
                big = m;
            }
        }
        let phase = v[big] / v[big].norm();
        for z in v.iter_mut() {
            *z /= phase * nrm;
        }
        let partner = quaternion_partner(&v);
        for m in 0..n2 {
            u[(m, 2 * k)] = v[m];
            u[(m, 2 * k + 1)] = partner[m];
        }
    }
    Ok(u)
}

/// Random unitary-symplectic matrix (orthonormalized Gaussian quaternionic
/// columns); used by invariance tests.
pub fn random_usp(n_pairs: usize, rng: RngStream) -> CMat {
    use crate::ensemble::{sample_ginse, EnsembleParams};
    let p = EnsembleParams::induced(n_pairs, 0.0, 1.0).unwrap();
    let mut stream = rng;
    loop {
        let g = sample_ginse(&p, stream).unwrap();
        let cols: Vec<Vec<C64>> =
            (0..n_pairs).map(|k| g.entries().col(2 * k).to_vec()).collect();
        if let Ok(u) = usp_from_pair_columns(&cols) {
            return u;
        }
        stream = stream.with_stream(stream.stream_id + 1);
    }
}

/// Schur-decomposes a quaternionic matrix: eigenvalues first, then `U` by
/// orthonormalizing the chain of invariant pair subspaces in the sorted
/// eigenvalue order, then `T` read off `U^dag G U` block by block (the
/// quaternion block relations are imposed structurally).
pub fn schur_decompose(g: &QuaternionMatrix) -> Result<SchurForm> {
    let s = standard_eigenpairs(g)?;
    let n = g.dim_pairs();
    let cols: Vec<Vec<C64>> = (0..n).map(|k| s.right().col(2 * k).to_vec()).collect();
    let u = usp_from_pair_columns(&cols)?;
    let gt = u.adjoint().mul(g.entries()).mul(&u);
    let t = UpperTriangularT::from_blocks(n, |i, j| (gt[(2 * i, 2 * j)], gt[(2 * i, 2 * j + 1)]));
    let z = EigenvalueConfig::new(s.values().to_vec())?;
    Ok(SchurForm { z, t, u })
}

/// Left-eigenvector coefficients of the first two eigenvalues in the Schur
/// basis: `b` solves the forward recursion seeded by `b_1 = 1, b_1bar = 0`;
/// `d` the analogous recursion seeded at the second pair.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    /// `(b_p, b_pbar)` for p = 1..=N (0-based storage)
    pub b: Vec<(C64, C64)>,
    /// `(d_p, d_pbar)` for p = 1..=N; entries below the second pair are zero
    pub d: Vec<(C64, C64)>,
}

fn check_denominator(d: C64, scale: f64) -> Result<C64> {
    if d.norm() < NEAR_COLLISION_TOL * scale {
        Err(GinseError::NearCollision(d.norm()))
    } else {
        Ok(d)
    }
}

/// Forward recursion for the left coefficients of the pair at `base`
/// (0-based): `e_base = 1, e_basebar = 0`, and for `p > base`
/// `e_p = (sum_{k=base}^{p-1} e_k T_{k,p} + e_kbar T_{kbar,p}) / (z_base - z_p)`.
fn left_coefficients(form: &SchurForm, base: usize) -> Result<Vec<(C64, C64)>> {
    let n = form.n_pairs();
    let zs = form.eigenvalues().points();
    let scale = zs.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let zb = zs[base];
    let mut e = vec![(C64::ZERO, C64::ZERO); n];
    e[base] = (C64::ONE, C64::ZERO);
    for p in base + 1..n {
        let mut num = C64::ZERO;
        let mut num_bar = C64::ZERO;
        for k in base..p {
            let (ek, ekb) = e[k];
            num += ek * form.t.entry(k, false, p, false) + ekb * form.t.entry(k, true, p, false);
            num_bar +=
                ek * form.t.entry(k, false, p, true) + ekb * form.t.entry(k, true, p, true);
        }
        let dp = check_denominator(zb - zs[p], scale)?;
        let dpb = check_denominator(zb - zs[p].conj(), scale)?;
        e[p] = (num / dp, num_bar / dpb);
    }
    Ok(e)
}

/// Backward recursion for the right-eigenvector coefficients of pair `base`:
/// `r_base = 1, r_basebar = 0`, and for `q < base`
/// `r_q = (sum_{k=q+1}^{base} T_{q,k} r_k + T_{q,kbar} r_kbar) / (z_base - z_q)`.
fn right_coefficients(form: &SchurForm, base: usize) -> Result<Vec<(C64, C64)>> {
    let n = form.n_pairs();
    let zs = form.eigenvalues().points();
    let scale = zs.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let zb = zs[base];
    let mut r = vec![(C64::ZERO, C64::ZERO); n];
    r[base] = (C64::ONE, C64::ZERO);
    for q in (0..base).rev() {
        let mut num = C64::ZERO;
        let mut num_bar = C64::ZERO;
        for k in q + 1..=base {
            let (rk, rkb) = r[k];
            num += form.t.entry(q, false, k, false) * rk + form.t.entry(q, false, k, true) * rkb;
            num_bar +=
                form.t.entry(q, true, k, false) * rk + form.t.entry(q, true, k, true) * rkb;
        }
        let dq = check_denominator(zb - zs[q], scale)?;
        let dqb = check_denominator(zb - zs[q].conj(), scale)?;
        r[q] = (num / dq, num_bar / dqb);
    }
    Ok(r)
}

/// Coefficient tables `b` (first pair) and `d` (second pair).
pub fn coefficients(form: &SchurForm) -> Result<CoefficientTable> {
    let b = left_coefficients(form, 0)?;
    let d = if form.n_pairs() >= 2 {
        left_coefficients(form, 1)?
    } else {
        Vec::new()
    };
    Ok(CoefficientTable { b, d })
}

/// Overlaps of the leading eigenvalue pair reconstructed from Schur data.
#[derive(Debug, Clone, Copy)]
pub struct SchurOverlaps {
    /// `O_11 = sum_k |b_k|^2 + |b_kbar|^2`
    pub o11: f64,
    /// `O_12`; absent at N = 1
    pub o12: Option<C64>,
    /// `O_{1 2bar}`; absent at N = 1
    pub o1bar2: Option<C64>,
}

/// Evaluates `O_11`, `O_12` and `O_{1 2bar}` from the coefficient
/// recursions; these must match the corresponding entries of the direct
/// overlap matrix once eigenvalue indices are aligned.
pub fn overlaps_from_schur(form: &SchurForm) -> Result<SchurOverlaps> {
    let tbl = coefficients(form)?;
    let o11 = tbl.b.iter().map(|(x, y)| x.norm_sqr() + y.norm_sqr()).sum::<f64>();
    if form.n_pairs() < 2 {
        return Ok(SchurOverlaps { o11, o12: None, o1bar2: None });
    }
    let (b2, b2bar) = tbl.b[1];
    let mut s12 = C64::ZERO;
    let mut s1b2 = C64::ZERO;
    for k in 1..form.n_pairs() {
        let (bk, bkb) = tbl.b[k];
        let (dk, dkb) = tbl.d[k];
        s12 += bk * dk.conj() + bkb * dkb.conj();
        s1b2 += bk * dkb - bkb * dk;
    }
    Ok(SchurOverlaps { o11, o12: Some(-b2.conj() * s12), o1bar2: Some(b2bar.conj() * s1b2) })
}

/// All diagonal overlaps `O_ll` from Schur data:
/// `O_ll = |L_l|^2 |R_l|^2` with both coefficient recursions anchored at
/// pair `l` (bi-normalization `L_l^dag . R_l = 1` is automatic).
pub fn diag_overlaps_from_schur(form: &SchurForm) -> Result<Vec<f64>> {
    let n = form.n_pairs();
    let mut out = Vec::with_capacity(n);
    for l in 0..n {
        let e = left_coefficients(form, l)?;
        let r = right_coefficients(form, l)?;
        let ln: f64 = e.iter().map(|(x, y)| x.norm_sqr() + y.norm_sqr()).sum();
        let rn: f64 = r.iter().map(|(x, y)| x.norm_sqr() + y.norm_sqr()).sum();
        out.push(ln * rn);
    }
    Ok(out)
}

/// Which off-diagonal overlap a T-average refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffdiagKind {
    /// `<O_ij>_T` between two unbarred representatives.
    Plain,
    /// `<O_{i jbar}>_T`: the second index barred.
    Barred,
}

/// Closed-form T-average of the diagonal overlap at fixed eigenvalues:
/// `prod_{l != target} (1 + s2/(2|z_t - z_l|^2) + s2/(2|z_t - conj z_l|^2))`.
/// Always >= 1; invariant under conjugating any single `z_l`.
pub fn t_avg_diag(z: &EigenvalueConfig, target: usize, sigma_sq: f64) -> Result<f64> {
    let zs = z.points();
    let scale = zs.iter().map(|w| w.norm()).fold(0.0, f64::max).max(1e-300);
    let zt = zs[target];
    let mut prod = 1.0;
    for (l, &w) in zs.iter().enumerate() {
        if l == target {
            continue;
        }
        let d1 = (zt - w).norm_sqr();
        let d2 = (zt - w.conj()).norm_sqr();
        if d1.sqrt() < NEAR_COLLISION_TOL * scale || d2.sqrt() < NEAR_COLLISION_TOL * scale {
            return Err(GinseError::NearCollision(d1.min(d2).sqrt()));
        }
        prod *= 1.0 + sigma_sq / (2.0 * d1) + sigma_sq / (2.0 * d2);
    }
    Ok(prod)
}

/// Closed-form T-average of the off-diagonal overlap at fixed eigenvalues.
///
/// `Plain` is the unbarred expectation
/// `-s2/(2|z_i - z_j|^2) prod_{l != i,j} (1 + s2/(2 (z_i - z_l)(conj z_j - conj z_l))
///   + s2/(2 (z_i - conj z_l)(conj z_j - z_l)))`;
/// `Barred` substitutes `z_j -> conj z_j` throughout.
pub fn t_avg_offdiag(
    z: &EigenvalueConfig,
    i: usize,
    j: usize,
    kind: OffdiagKind,
    sigma_sq: f64,
) -> Result<C64> {
    if i == j {
        return Err(GinseError::InvalidParams("off-diagonal requires i != j".into()));
    }
    let zs = z.points();
    let scale = zs.iter().map(|w| w.norm()).fold(0.0, f64::max).max(1e-300);
    let zi = zs[i];
    let zj = match kind {
        OffdiagKind::Plain => zs[j],
        OffdiagKind::Barred => zs[j].conj(),
    };
    let gap = zi - zj;
    if gap.norm() < NEAR_COLLISION_TOL * scale {
        return Err(GinseError::NearCollision(gap.norm()));
    }
    let mut prod = C64::ONE;
    let half = Complex::from(sigma_sq / 2.0);
    for (l, &w) in zs.iter().enumerate() {
        if l == i || l == j {
            continue;
        }
        let d1 = (zi - w) * (zj.conj() - w.conj());
        let d2 = (zi - w.conj()) * (zj.conj() - w);
        if d1.norm() < NEAR_COLLISION_TOL * scale * scale
            || d2.norm() < NEAR_COLLISION_TOL * scale * scale
        {
            return Err(GinseError::NearCollision(d1.norm().min(d2.norm())));
        }
        prod *= C64::ONE + half / d1 + half / d2;
    }
    Ok(-Complex::from(sigma_sq / (2.0 * gap.norm_sqr())) * prod)
}

/// `<O_{ibar jbar}>_T = conj(<O_ij>_T)`, exposed as a derived accessor.
pub fn t_avg_offdiag_barbar(z: &EigenvalueConfig, i: usize, j: usize, sigma_sq: f64) -> Result<C64> {
    Ok(t_avg_offdiag(z, i, j, OffdiagKind::Plain, sigma_sq)?.conj())
}

/// `<O_{ibar j}>_T = conj(<O_{i jbar}>_T)`, exposed as a derived accessor.
pub fn t_avg_offdiag_barplain(
    z: &EigenvalueConfig,
    i: usize,
    j: usize,
    sigma_sq: f64,
) -> Result<C64> {
    Ok(t_avg_offdiag(z, i, j, OffdiagKind::Barred, sigma_sq)?.conj())
}
