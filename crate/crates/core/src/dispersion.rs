//! Band structure of a single-band lattice.
//!
//! `E(q) = −Σ_l κ_l e^{−iql}` and `v_g(q) = dE/dq = Σ_l i·l·κ_l e^{−iql}`.
//! Outside the band the same relation has only complex solutions `Q`;
//! with `z = e^{−iQ}` it becomes a polynomial of degree `2L` in `z`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lattice::{HoppingKernel, C64, I};
use crate::poly;

const BAND_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub energy: f64,
    pub group_velocity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandInfo {
    pub e_min: f64,
    pub e_max: f64,
    /// `e_max − e_min`
    pub width: f64,
    /// `max_q |dE/dq|`, the propagation speed bound.
    pub v_max: f64,
}

impl BandInfo {
    pub fn contains(&self, energy: f64) -> bool {
        energy >= self.e_min && energy <= self.e_max
    }

    /// Distance from `energy` to the closed band, zero inside.
    pub fn distance(&self, energy: f64) -> f64 {
        if energy < self.e_min {
            self.e_min - energy
        } else if energy > self.e_max {
            energy - self.e_max
        } else {
            0.0
        }
    }
}

/// `E(Q)` for complex `Q`; no hermiticity requirement.
pub fn energy_complex(kernel: &HoppingKernel, q: C64) -> C64 {
    -kernel.entries().map(|(l, k)| k * (-I * q * l as f64).exp()).sum::<C64>()
}

fn eval_complex(kernel: &HoppingKernel, q: f64) -> (C64, C64) {
    let mut e = C64::new(0.0, 0.0);
    let mut v = C64::new(0.0, 0.0);
    for (l, k) in kernel.entries() {
        let (s, c) = (q * l as f64).sin_cos();
        let phase = C64::new(c, -s);
        e -= k * phase;
        v += I * (l as f64) * k * phase;
    }
    (e, v)
}

/// Band energy and group velocity at real `q`.
pub fn band_eval(kernel: &HoppingKernel, q: f64) -> Result<BandPoint> {
    if !kernel.is_hermitian() {
        return Err(Error::NonHermitianKernel);
    }
    let (e, v) = eval_complex(kernel, q);
    Ok(BandPoint { energy: e.re, group_velocity: v.re })
}

/// Minimizes `f` on `[a, b]` by golden-section search.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    let fx = f(x);
    let best = [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap();
    best
}

/// Global minimum of a `2π`-periodic function: dense sampling, then
/// golden-section refinement around the best few samples.
fn periodic_min(f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * PI / BAND_SAMPLES as f64;
    let samples: Vec<f64> = (0..BAND_SAMPLES).map(|k| f(-PI + h * k as f64)).collect();
    let mut order: Vec<usize> = (0..BAND_SAMPLES)
        .filter(|&k| {
            let prev = samples[(k + BAND_SAMPLES - 1) % BAND_SAMPLES];
            let next = samples[(k + 1) % BAND_SAMPLES];
            samples[k] <= prev && samples[k] <= next
        })
        .collect();
    order.sort_by(|&a, &b| samples[a].total_cmp(&samples[b]));
    let mut best = f64::INFINITY;
    for &k in order.iter().take(4) {
        let q = -PI + h * k as f64;
        let (_, v) = golden_min(&f, q - h, q + h);
        best = best.min(v).min(samples[k]);
    }
    best
}

/// Band edges and maximal group velocity by sampling and golden-section
/// refinement.
pub fn band_info(kernel: &HoppingKernel) -> Result<BandInfo> {
    if !kernel.is_hermitian() {
        return Err(Error::NonHermitianKernel);
    }
    let e = |q: f64| eval_complex(kernel, q).0.re;
    let v = |q: f64| eval_complex(kernel, q).1.re;
    let e_min = periodic_min(e);
    let e_max = -periodic_min(|q| -e(q));
    let v_max = -periodic_min(|q| -v(q).abs());
    Ok(BandInfo { e_min, e_max, width: e_max - e_min, v_max })
}

/// Square lattice with nearest-neighbour hopping `κ`:
/// `E = −2κ(cos q_x + cos q_y)`, so the band is `[−4κ, 4κ]` and
/// `max |∇E| = 2√2·κ`.
pub fn square_lattice_band(kappa: f64) -> BandInfo {
    let k = kappa.abs();
    BandInfo { e_min: -4.0 * k, e_max: 4.0 * k, width: 8.0 * k, v_max: 2.0 * 2f64.sqrt() * k }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decay {
    /// `|e^{iQn}| → 0` as `n → +∞` (`|z| > 1`, `Im Q > 0`).
    Right,
    /// `|e^{iQn}| → 0` as `n → −∞`.
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochRoot {
    /// `z = e^{−iQ}`
    pub z: C64,
    /// `Q = i·ln z`, with `Re Q ∈ (−π, π]`.
    pub q: C64,
    /// `|ln|z||`
    pub decay_rate: f64,
    pub decay: Decay,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBlochSolution {
    pub energy: f64,
    pub roots: Vec<BlochRoot>,
    /// Slowest decay among right-decaying roots.
    pub decay_rate_right: f64,
    pub decay_rate_left: f64,
}

/// Complex wave numbers `Q` with `E(Q) = energy` for an energy outside the
/// band.
pub fn complex_bloch_roots(kernel: &HoppingKernel, energy: f64) -> Result<ComplexBlochSolution> {
    let band = band_info(kernel)?;
    if band.contains(energy) {
        return Err(Error::InsideBand { energy });
    }
    let l = kernel.range() as i64;
    let mut coeffs = alloc::vec![C64::new(0.0, 0.0); 2 * l as usize + 1];
    for (d, k) in kernel.entries() {
        coeffs[(d + l) as usize] += k;
    }
    coeffs[l as usize] += energy;
    let zs = poly::roots(&coeffs)?;
    let mut roots = Vec::with_capacity(zs.len());
    for z in zs {
        let r = z.norm();
        if z == C64::new(0.0, 0.0) || (r.ln()).abs() < 1e-12 {
            return Err(Error::RootFinding { degree: coeffs.len() - 1 });
        }
        let q = I * z.ln();
        roots.push(BlochRoot {
            z,
            q,
            decay_rate: r.ln().abs(),
            decay: if r > 1.0 { Decay::Right } else { Decay::Left },
        });
    }
    let slowest = |d: Decay| {
        roots
            .iter()
            .filter(|r| r.decay == d)
            .map(|r| r.decay_rate)
            .fold(f64::INFINITY, f64::min)
    };
    Ok(ComplexBlochSolution {
        energy,
        decay_rate_right: slowest(Decay::Right),
        decay_rate_left: slowest(Decay::Left),
        roots,
    })
}

/// Smallest right-going decay rate over scattered energies
/// `incident_energy + s` for the given shifts. Shifts landing inside the
/// band are rejected.
pub fn q_plus_min(kernel: &HoppingKernel, incident_energy: f64, shifts: &[f64]) -> Result<f64> {
    if shifts.is_empty() {
        return Err(Error::InvalidArgument("empty shift grid"));
    }
    let mut best = f64::INFINITY;
    for &s in shifts {
        let sol = complex_bloch_roots(kernel, incident_energy + s)?;
        best = best.min(sol.decay_rate_right);
    }
    Ok(best)
}

/// Uniform grid of `count ≥ 2` points on `[from, from + 10·width]`.
pub fn default_shift_grid(from: f64, width: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    let span = 10.0 * width;
    (0..count).map(|k| from + span * k as f64 / (count - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;
    use proptest::prelude::*;

    fn nn() -> HoppingKernel {
        HoppingKernel::nearest_neighbor(1.0).unwrap()
    }

    fn nnn() -> HoppingKernel {
        HoppingKernel::symmetric(&[1.0, 0.2]).unwrap()
    }

    #[test]
    fn nearest_neighbor_band_center() {
        let p = band_eval(&nn(), PI / 2.0).unwrap();
        assert!(p.energy.abs() < 1e-15);
        assert!((p.group_velocity - 2.0).abs() < 1e-15);
    }

    #[test]
    fn next_nearest_values() {
        let p = band_eval(&nnn(), 0.0).unwrap();
        assert!((p.energy + 2.4).abs() < 1e-15);
        let q = 1.234;
        let a = band_eval(&nnn(), q).unwrap().energy;
        let b = band_eval(&nnn(), q + 2.0 * PI).unwrap().energy;
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn band_info_values() {
        let b = band_info(&nn()).unwrap();
        assert!((b.width - 4.0).abs() < 1e-9 && (b.v_max - 2.0).abs() < 1e-9);
        let k = HoppingKernel::nearest_neighbor(0.35).unwrap();
        let b = band_info(&k).unwrap();
        assert!((b.width - 1.4).abs() < 1e-9 && (b.v_max - 0.7).abs() < 1e-9);
        let b = band_info(&nnn()).unwrap();
        assert!((b.width - 4.0).abs() < 1e-9);
        assert!((b.e_min + 2.4).abs() < 1e-9 && (b.e_max - 1.6).abs() < 1e-9);
        assert_eq!(square_lattice_band(1.0).width, 8.0);
    }

    #[test]
    fn non_hermitian_kernel_rejected() {
        let k = HoppingKernel::new(&[(1, C64::new(1.0, 0.0))], false).unwrap();
        assert_eq!(band_eval(&k, 0.0), Err(Error::NonHermitianKernel));
        assert!(band_info(&k).is_err());
    }

    #[test]
    fn nearest_neighbor_roots_closed_form() {
        let rate = 2.5f64.acosh();
        let s = complex_bloch_roots(&nn(), 5.0).unwrap();
        assert_eq!(s.roots.len(), 2);
        assert!((s.decay_rate_right - rate).abs() < 1e-12);
        assert!((s.decay_rate_left - rate).abs() < 1e-12);
        for r in &s.roots {
            assert!((r.q.re.abs() - PI).abs() < 1e-12);
        }
        let s = complex_bloch_roots(&nn(), -5.0).unwrap();
        assert!((s.decay_rate_right - rate).abs() < 1e-12);
        for r in &s.roots {
            assert!(r.q.re.abs() < 1e-12);
            assert!((r.q.im > 0.0) == (r.decay == Decay::Right));
        }
        assert!(matches!(complex_bloch_roots(&nn(), 1.0), Err(Error::InsideBand { .. })));
    }

    #[test]
    fn next_nearest_roots_match_grid_scan() {
        let k = nnn();
        let s = complex_bloch_roots(&k, 5.0).unwrap();
        assert_eq!(s.roots.len(), 4);
        for r in &s.roots {
            assert!((r.z.norm() - 1.0).abs() > 1e-3);
            assert!((energy_complex(&k, r.q) - 5.0).norm() < 1e-9);
        }
        // brute force: m(y) = min_x |E(x + iy) − 5|, first zero in y > 0
        let step = 1e-3;
        let profile: Vec<f64> = (1..=3000)
            .map(|j| {
                let y = j as f64 * step;
                (0..6284)
                    .map(|i| {
                        let x = -PI + i as f64 * step;
                        (energy_complex(&k, C64::new(x, y)) - 5.0).norm()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let first = (1..profile.len() - 1)
            .find(|&j| profile[j] < 0.05 && profile[j] <= profile[j - 1] && profile[j] <= profile[j + 1])
            .unwrap();
        let scanned = (first + 1) as f64 * step;
        assert!((scanned - s.decay_rate_right).abs() < 3e-3, "{scanned} vs {}", s.decay_rate_right);
    }

    #[test]
    fn decay_vanishes_at_band_edge() {
        let mut last = f64::INFINITY;
        for gap in [1.0, 1e-2, 1e-4, 1e-6] {
            let r = complex_bloch_roots(&nnn(), 1.6 + gap).unwrap().decay_rate_right;
            assert!(r < last);
            last = r;
        }
        assert!(last < 1e-2);
    }

    #[test]
    fn q_plus_min_takes_slowest_shift() {
        let shifts = [5.0, 18f64.sqrt()];
        let r = q_plus_min(&nn(), 0.0, &shifts).unwrap();
        assert!((r - (18f64.sqrt() / 2.0).acosh()).abs() < 1e-12);
        let grid = default_shift_grid(18f64.sqrt(), 4.0, 101);
        assert_eq!(grid.len(), 101);
        assert!((grid[100] - 18f64.sqrt() - 40.0).abs() < 1e-12);
        assert!((q_plus_min(&nn(), 0.0, &grid).unwrap() - r).abs() < 1e-12);
    }

    fn kernel_strategy() -> impl Strategy<Value = HoppingKernel> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..4).prop_filter_map("nonzero", |v| {
            let mut e = Vec::new();
            for (i, &(a, b)) in v.iter().enumerate() {
                let l = i as i64 + 1;
                e.push((l, C64::new(a, b)));
                e.push((-l, C64::new(a, -b)));
            }
            HoppingKernel::new(&e, true).ok()
        })
    }

    proptest! {
        #[test]
        fn band_is_real(k in kernel_strategy()) {
            for i in 0..4096 {
                let q = -PI + 2.0 * PI * i as f64 / 4096.0;
                prop_assert!(eval_complex(&k, q).0.im.abs() < 1e-12);
            }
        }

        #[test]
        fn roots_solve_dispersion(k in kernel_strategy(), gap in 0.01f64..5.0, above in any::<bool>()) {
            let b = band_info(&k).unwrap();
            let e = if above { b.e_max + gap } else { b.e_min - gap };
            let s = complex_bloch_roots(&k, e).unwrap();
            prop_assert_eq!(s.roots.len(), 2 * k.range());
            for r in &s.roots {
                prop_assert!((r.z.norm() - 1.0).abs() > 0.0);
                prop_assert!((energy_complex(&k, r.q) - e).norm() < 1e-9);
            }
        }
    }
}
