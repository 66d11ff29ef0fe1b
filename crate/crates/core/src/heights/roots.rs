//! Simultaneous root finding by Aberth iteration, and a posteriori
//! inclusion disks for the roots of a squarefree polynomial.

use num_complex::{Complex, Complex64};
use num_traits::Float;

/// All complex roots of `coeffs[0] + coeffs[1] x + ... + coeffs[n] x^n`,
/// `coeffs[n] != 0`, by Aberth-Ehrlich iteration.
pub fn aberth<T: Float>(coeffs: &[T], max_iter: usize) -> Vec<Complex<T>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lc = coeffs[n];
    let mono: Vec<T> = coeffs.iter().map(|&c| c / lc).collect();
    // start on a circle whose radius is the geometric mean of the moduli
    let radius = {
        let r = mono[0].abs().powf(T::one() / T::from(n).unwrap());
        if r > T::zero() {
            r
        } else {
            T::one()
        }
    };
    let tau = T::from(std::f64::consts::TAU).unwrap();
    let offset = T::from(0.4).unwrap();
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let t = tau * T::from(k).unwrap() / T::from(n).unwrap() + offset;
            Complex::from_polar(radius, t)
        })
        .collect();
    let tiny = T::epsilon() * T::from(4).unwrap();
    for _ in 0..max_iter {
        let mut done = true;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&mono, z[i]);
            if p == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                if j != i {
                    s = s + (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] = z[i] - w;
            if w.norm() > tiny * z[i].norm().max(T::one()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    z
}

fn eval_with_derivative<T: Float>(c: &[T], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let mut p = zero;
    let mut dp = zero;
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(a, T::zero());
    }
    (p, dp)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl RootDisk {
    /// Bounds on `|z|` over the disk.
    pub fn modulus_range(&self) -> (f64, f64) {
        let m = self.center.norm();
        let slack = 4.0 * f64::EPSILON * m;
        ((m - self.radius - slack).max(0.0), m + self.radius + slack)
    }
}

/// Disks around `approx` that each contain exactly one root of the
/// polynomial with the given coefficients, or `None` when the disks from
/// the Weierstrass corrections overlap.
///
/// Uses the inclusion theorem: the union of the disks of radius
/// `n |W_i|` around the approximations contains all roots, and a connected
/// component made of `k` disks contains exactly `k` roots. Rounding in the
/// evaluation of `f(z_i)` and of the coefficients is bounded and added.
pub fn inclusion_disks(coeffs: &[f64], approx: &[Complex64]) -> Option<Vec<RootDisk>> {
    let n = approx.len();
    let lc = coeffs[n].abs();
    let u = f64::EPSILON;
    let mut out = Vec::with_capacity(n);
    for (i, &z) in approx.iter().enumerate() {
        let mut p = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let az = z.norm();
        for &a in coeffs.iter().rev() {
            p = p * z + a;
            abs_sum = abs_sum * az + a.abs();
        }
        let err = (8.0 * n as f64 + 8.0) * u * abs_sum * (1.0 + 1e-6);
        let mut den = lc;
        for (j, &w) in approx.iter().enumerate() {
            if j != i {
                den *= (z - w).norm();
            }
        }
        let den = den * (1.0 - (4.0 * n as f64 + 4.0) * u);
        if den <= 0.0 || !den.is_finite() {
            return None;
        }
        let r = n as f64 * (p.norm() + err) / den * (1.0 + 1e-9);
        if !r.is_finite() {
            return None;
        }
        out.push(RootDisk {
            center: z,
            radius: r,
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            if (out[i].center - out[j].center).norm() * (1.0 - 4.0 * u)
                <= out[i].radius + out[j].radius
            {
                return None;
            }
        }
    }
    Some(out)
}

/// One Newton step per root, used to tighten Aberth output.
pub fn newton_polish(coeffs: &[f64], z: &mut [Complex64]) {
    for zi in z.iter_mut() {
        let (p, dp) = eval_with_derivative(coeffs, *zi);
        if dp.norm() > 0.0 {
            let step = p / dp;
            if step.re.is_finite() && step.im.is_finite() {
                *zi -= step;
            }
        }
    }
}
