//! Independent quadrature oracles used by the integration tests: nothing in
//! here touches the Gamma-function moment path it is checking.

use num_complex::Complex64;

/// Adaptive Simpson on `[a, b]` for complex-valued integrands.
pub fn adaptive_simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Complex64 {
    fn simpson(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
        (fa + 4.0 * fm + fb) * (h / 6.0)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        m: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
        force: u32,
    ) -> Complex64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || (force == 0 && delta.norm() <= 15.0 * tol) {
            return left + right + delta / 15.0;
        }
        let fnext = force.saturating_sub(1);
        rec(f, a, lm, m, fa, flm, fm, left, tol / 2.0, depth - 1, fnext)
            + rec(f, m, rm, b, fm, frm, fb, right, tol / 2.0, depth - 1, fnext)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    // a few forced levels guard against spurious early convergence on
    // oscillatory or near-symmetric integrands
    rec(f, a, m, b, fa, fm, fb, whole, tol, 48, 5)
}

/// 2D quadrature over the rectangle `[-r, r] x [-r, r]` by nested adaptive
/// Simpson.
pub fn quad_plane<F: Fn(Complex64) -> Complex64>(f: &F, r: f64, tol: f64) -> Complex64 {
    let outer = |x: f64| adaptive_simpson(&|y: f64| f(Complex64::new(x, y)), -r, r, tol);
    adaptive_simpson(&outer, -r, r, tol * 10.0)
}

/// 2D quadrature of a radially weighted integrand in polar form: trapezoid
/// over the angle (spectrally exact for trigonometric polynomials) times
/// adaptive Simpson over the radius.
pub fn quad_polar<F: Fn(Complex64) -> Complex64>(
    f: &F,
    r_max: f64,
    angular_points: usize,
    tol: f64,
) -> Complex64 {
    let k = angular_points;
    let radial = |r: f64| -> Complex64 {
        let mut s = Complex64::ZERO;
        for a in 0..k {
            let phi = 2.0 * std::f64::consts::PI * a as f64 / k as f64;
            s += f(Complex64::from_polar(r, phi));
        }
        s * (2.0 * std::f64::consts::PI / k as f64) * r
    };
    adaptive_simpson(&radial, 0.0, r_max, tol)
}
