//! Roots of small complex polynomials.
//!
//! Simultaneous Aberth–Ehrlich iteration followed by a per-root Newton
//! polish. Degrees here never exceed `2L` for a range-`L` kernel, so no
//! effort is spent on large-degree scaling.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lattice::C64;

const MAX_ITER: usize = 500;

/// `Σ c_k z^k` with its derivative, by Horner's rule. `coeffs[k]` is the
/// coefficient of `z^k`.
pub fn eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[C64], z: C64) -> C64 {
    eval_with_derivative(coeffs, z).0
}

/// All roots of `Σ coeffs[k] z^k`, with multiplicity.
///
/// Leading coefficients that are exactly zero are dropped; trailing zero
/// coefficients produce exact roots at the origin.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let zero = C64::new(0.0, 0.0);
    let Some(top) = coeffs.iter().rposition(|&c| c != zero) else {
        return Err(Error::InvalidArgument("zero polynomial has no finite root set"));
    };
    let low = coeffs.iter().position(|&c| c != zero).unwrap();
    let mut out = vec![zero; low];
    let c = &coeffs[low..=top];
    let n = c.len() - 1;
    if n == 0 {
        return Ok(out);
    }
    if n == 1 {
        out.push(-c[0] / c[1]);
        return Ok(out);
    }
    // monic copy
    let lead = c[n];
    let a: Vec<C64> = c.iter().map(|&x| x / lead).collect();

    // Initial guesses on a circle sized by the Fujiwara bound, rotated off
    // the real axis to avoid symmetric stalls.
    let mut radius: f64 = 0.0;
    for k in 0..n {
        let r = a[k].norm().powf(1.0 / (n - k) as f64);
        radius = radius.max(if k == 0 { r / 2f64.powf(1.0 / n as f64) } else { r });
    }
    let radius = (2.0 * radius).max(f64::MIN_POSITIVE.sqrt());
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let th = 2.0 * core::f64::consts::PI * k as f64 / n as f64 + 0.4;
            C64::from_polar(radius, th)
        })
        .collect();

    let scale: f64 = a.iter().map(|x| x.norm()).sum();
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&a, z[i]);
            if p.norm() <= 4.0 * f64::EPSILON * scale * z[i].norm().max(1.0).powi(n as i32) {
                continue;
            }
            let ratio = p / dp;
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        // Accept when residuals are already at rounding level.
        let ok = z.iter().all(|&zi| {
            eval(&a, zi).norm() <= 1e-10 * scale * zi.norm().max(1.0).powi(n as i32)
        });
        if !ok {
            return Err(Error::RootFinding { degree: n });
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&a, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            let cand = *zi - step;
            if eval(&a, cand).norm() < p.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    out.extend(z);
    Ok(out)
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;
    use proptest::prelude::*;

    fn from_roots(r: &[C64]) -> Vec<C64> {
        let mut c = vec![C64::new(1.0, 0.0)];
        for &x in r {
            let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * x;
            }
            c = next;
        }
        c
    }

    fn matched(found: &[C64], expected: &[C64], tol: f64) -> bool {
        let mut used = vec![false; expected.len()];
        for f in found {
            let best = expected
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .min_by(|a, b| (a.1 - f).norm().total_cmp(&(b.1 - f).norm()));
            match best {
                Some((i, e)) if (e - f).norm() < tol => used[i] = true,
                _ => return false,
            }
        }
        found.len() == expected.len()
    }

    #[test]
    fn quadratic_roots() {
        // z² − 5z + 1 → (5 ± √21)/2
        let c = [C64::new(1.0, 0.0), C64::new(-5.0, 0.0), C64::new(1.0, 0.0)];
        let r = roots(&c).unwrap();
        let s = 21f64.sqrt();
        assert!(matched(&r, &[C64::new((5.0 + s) / 2.0, 0.0), C64::new((5.0 - s) / 2.0, 0.0)], 1e-13));
    }

    #[test]
    fn leading_and_trailing_zeros() {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        // z·(z − 2) padded with a zero leading coefficient
        let r = roots(&[z, -2.0 * one, one, z]).unwrap();
        assert!(matched(&r, &[z, 2.0 * one], 1e-14));
        assert!(roots(&[z, z]).is_err());
        assert!(roots(&[one]).unwrap().is_empty());
    }

    #[test]
    fn double_root_is_found_twice() {
        let r = roots(&from_roots(&[C64::new(1.0, 1.0), C64::new(1.0, 1.0), C64::new(-3.0, 0.0)])).unwrap();
        assert!(matched(&r, &[C64::new(1.0, 1.0), C64::new(1.0, 1.0), C64::new(-3.0, 0.0)], 1e-6));
    }

    proptest! {
        #[test]
        fn recovers_random_roots(parts in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..8)) {
            let expected: Vec<C64> = parts.iter().map(|&(a, b)| C64::new(a, b)).collect();
            // keep roots separated so the comparison is well conditioned
            for i in 0..expected.len() {
                for j in 0..i {
                    prop_assume!((expected[i] - expected[j]).norm() > 0.2);
                }
            }
            let found = roots(&from_roots(&expected)).unwrap();
            prop_assert!(matched(&found, &expected, 1e-8));
        }
    }
}
