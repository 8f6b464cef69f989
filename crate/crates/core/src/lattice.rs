//! Lattice geometry, hopping kernels, modulations and perturbations.
//!
//! Amplitudes obey
//!
//! ```text
//! i dψ_n/dt = −Σ_l κ_{n−l} ψ_l + Σ_l V_{n,l}(t) ψ_l
//! ```
//!
//! with a finite-range kernel `κ` and a perturbation that factorizes as
//! `V_{n,m}(t) = R(t)·T_{n,m}`. Units are dimensionless (ħ = 1, unit lattice
//! spacing). Finite lattices either drop couplings that leave the lattice
//! (hard wall) or add a graded absorbing on-site term `−iη·ramp(n)` in the
//! outer layers.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Finite-range hopping amplitudes `κ_l`, `l ∈ {−L..L} \ {0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingKernel {
    range: usize,
    // index l + range; the l = 0 slot is always zero
    amplitudes: Vec<C64>,
    hermitian: bool,
}

impl HoppingKernel {
    /// Builds a kernel from `(l, κ_l)` pairs. When `hermitian` is set the
    /// pairs must satisfy `κ_{−l} = conj(κ_l)`.
    pub fn new(entries: &[(i64, C64)], hermitian: bool) -> Result<Self> {
        let mut range = 0usize;
        for &(l, k) in entries {
            if l == 0 {
                return Err(Error::InvalidKernel("on-site entry l = 0 is not a hopping"));
            }
            if !(k.re.is_finite() && k.im.is_finite()) {
                return Err(Error::InvalidKernel("non-finite amplitude"));
            }
            if k != C64::new(0.0, 0.0) {
                range = range.max(l.unsigned_abs() as usize);
            }
        }
        if range == 0 {
            return Err(Error::InvalidKernel("at least one amplitude must be nonzero"));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); 2 * range + 1];
        for &(l, k) in entries {
            if l.unsigned_abs() as usize <= range {
                amplitudes[(l + range as i64) as usize] += k;
            }
        }
        let kernel = Self { range, amplitudes, hermitian };
        if hermitian {
            let scale = kernel.amplitudes.iter().map(|k| k.norm()).fold(0.0, f64::max);
            for l in 1..=range as i64 {
                let d = kernel.amplitude(-l) - kernel.amplitude(l).conj();
                if d.norm() > 1e-14 * scale {
                    return Err(Error::InvalidKernel("hermitian kernel needs κ_{-l} = conj(κ_l)"));
                }
            }
        }
        Ok(kernel)
    }

    /// Real symmetric kernel with `κ_{±l} = amplitudes[l − 1]`.
    pub fn symmetric(amplitudes: &[f64]) -> Result<Self> {
        let mut entries = Vec::with_capacity(2 * amplitudes.len());
        for (i, &a) in amplitudes.iter().enumerate() {
            let l = i as i64 + 1;
            entries.push((l, C64::new(a, 0.0)));
            entries.push((-l, C64::new(a, 0.0)));
        }
        Self::new(&entries, true)
    }

    pub fn nearest_neighbor(kappa: f64) -> Result<Self> {
        Self::symmetric(&[kappa])
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `κ_l`, zero outside the range and at `l = 0`.
    pub fn amplitude(&self, l: i64) -> C64 {
        if l.unsigned_abs() as usize > self.range {
            return C64::new(0.0, 0.0);
        }
        self.amplitudes[(l + self.range as i64) as usize]
    }

    /// Nonzero `(l, κ_l)` pairs in increasing `l`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let r = self.range as i64;
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, &k)| (i as i64 - r, k))
            .filter(|&(_, k)| k != C64::new(0.0, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    HardWall,
    /// Graded loss `−iη·ramp(n)` over the outer `width` sites of each side.
    Absorbing { width: usize, strength: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice1D {
    sites: usize,
    origin: i64,
    kernel: HoppingKernel,
    boundary: Boundary,
}

impl Lattice1D {
    /// Sites are labelled `origin ..= origin + sites − 1`.
    pub fn new(sites: usize, origin: i64, kernel: HoppingKernel, boundary: Boundary) -> Result<Self> {
        if sites <= 2 * kernel.range() {
            return Err(Error::InvalidLattice("site count must exceed twice the kernel range"));
        }
        if let Boundary::Absorbing { width, strength } = boundary {
            if !(strength.is_finite() && strength >= 0.0) {
                return Err(Error::InvalidLattice("absorber strength must be finite and non-negative"));
            }
            if 2 * (width + kernel.range()) >= sites {
                return Err(Error::InvalidLattice("absorbing layers leave no interior"));
            }
        }
        Ok(Self { sites, origin, kernel, boundary })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn kernel(&self) -> &HoppingKernel {
        &self.kernel
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn label(&self, index: usize) -> i64 {
        self.origin + index as i64
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.sites).map(|i| self.label(i))
    }

    pub fn index_of(&self, site: i64) -> Option<usize> {
        let i = site - self.origin;
        (i >= 0 && (i as usize) < self.sites).then_some(i as usize)
    }

    pub fn absorber_width(&self) -> usize {
        match self.boundary {
            Boundary::HardWall => 0,
            Boundary::Absorbing { width, .. } => width,
        }
    }

    /// Ramp in `[0, 1]`: zero in the interior, rising monotonically to 1 on
    /// the outermost site of each absorbing layer.
    pub fn absorber_ramp(&self, index: usize) -> f64 {
        let w = self.absorber_width();
        if w == 0 {
            return 0.0;
        }
        let d = index.min(self.sites - 1 - index);
        if d >= w {
            0.0
        } else {
            let x = (w - d) as f64 / w as f64;
            x * x
        }
    }

    /// Closed label range of sites at least `L + w_a` away from both edges.
    pub fn interior(&self) -> (i64, i64) {
        let pad = (self.kernel.range() + self.absorber_width()) as i64;
        (self.origin + pad, self.origin + self.sites as i64 - 1 - pad)
    }

    pub fn in_interior(&self, site: i64) -> bool {
        let (a, b) = self.interior();
        site >= a && site <= b
    }
}

/// Square lattice with real nearest-neighbour hopping and hard walls.
/// States are flattened row-major: `index = (n − n₀)·ny + (m − m₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice2D {
    nx: usize,
    ny: usize,
    origin: (i64, i64),
    kappa: f64,
}

impl Lattice2D {
    pub fn new(nx: usize, ny: usize, origin: (i64, i64), kappa: f64) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::InvalidLattice("2D lattice needs at least 4 sites per axis"));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidLattice("2D hopping must be positive"));
        }
        Ok(Self { nx, ny, origin, kappa })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn origin(&self) -> (i64, i64) {
        self.origin
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, site: (i64, i64)) -> Option<usize> {
        let i = site.0 - self.origin.0;
        let j = site.1 - self.origin.1;
        (i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny)
            .then(|| i as usize * self.ny + j as usize)
    }

    pub fn label(&self, index: usize) -> (i64, i64) {
        (
            self.origin.0 + (index / self.ny) as i64,
            self.origin.1 + (index % self.ny) as i64,
        )
    }

    /// Interior excludes the outermost ring.
    pub fn in_interior(&self, site: (i64, i64)) -> bool {
        let (i, j) = (site.0 - self.origin.0, site.1 - self.origin.1);
        i >= 1 && j >= 1 && i < self.nx as i64 - 1 && j < self.ny as i64 - 1
    }

    pub fn is_edge(&self, index: usize) -> bool {
        let (i, j) = (index / self.ny, index % self.ny);
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicKind {
    /// `A·exp(iωt)`
    Exponential,
    /// `A·cos(ωt)`
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub amplitude: C64,
    pub frequency: f64,
    pub kind: HarmonicKind,
}

impl Harmonic {
    pub fn exp(amplitude: impl Into<C64>, frequency: f64) -> Self {
        Self { amplitude: amplitude.into(), frequency, kind: HarmonicKind::Exponential }
    }

    pub fn cos(amplitude: impl Into<C64>, frequency: f64) -> Self {
        Self { amplitude: amplitude.into(), frequency, kind: HarmonicKind::Cosine }
    }

    pub fn value(&self, t: f64) -> C64 {
        match self.kind {
            HarmonicKind::Exponential => {
                let (s, c) = (self.frequency * t).sin_cos();
                self.amplitude * C64::new(c, s)
            }
            HarmonicKind::Cosine => self.amplitude * (self.frequency * t).cos(),
        }
    }
}

/// Temporal modulation `R(t)` as a finite sum of harmonics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Modulation {
    terms: Vec<Harmonic>,
}

impl Modulation {
    pub fn new(terms: Vec<Harmonic>) -> Self {
        Self { terms }
    }

    /// `R(t) = a` for all `t`.
    pub fn constant(a: impl Into<C64>) -> Self {
        Self::new(vec![Harmonic::exp(a, 0.0)])
    }

    pub fn terms(&self) -> &[Harmonic] {
        &self.terms
    }

    pub fn value(&self, t: f64) -> C64 {
        self.terms.iter().map(|h| h.value(t)).sum()
    }

    /// Delta-support of the spectrum, sorted and deduplicated. Each
    /// exponential term contributes `{ω}`, each cosine `{ω, −ω}`; terms with
    /// zero amplitude contribute nothing.
    pub fn spectral_support(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for h in self.terms.iter().filter(|h| h.amplitude != C64::new(0.0, 0.0)) {
            out.push(h.frequency);
            if h.kind == HarmonicKind::Cosine {
                out.push(-h.frequency);
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// `ω₀`, the smallest frequency in the support.
    pub fn min_frequency(&self) -> Option<f64> {
        self.spectral_support().first().copied()
    }

    pub fn max_frequency(&self) -> Option<f64> {
        self.spectral_support().last().copied()
    }

    /// Largest `|ω|` present, zero for an empty modulation.
    pub fn max_abs_frequency(&self) -> f64 {
        self.terms.iter().map(|h| h.frequency.abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|h| h.amplitude == C64::new(0.0, 0.0))
    }

    /// Same harmonics with every amplitude multiplied by `a` and every
    /// frequency by `w`.
    pub fn rescaled(&self, a: f64, w: f64) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|h| Harmonic { amplitude: h.amplitude * a, frequency: h.frequency * w, kind: h.kind })
                .collect(),
        )
    }
}

/// Time-independent factor `T_{n,m}` of a factorized perturbation.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    /// Diagonal `T_{n,n} = V_n`.
    OnSite(Vec<(i64, C64)>),
    /// Off-diagonal bond modifications `(n, m, T_{n,m})`, `n ≠ m`.
    HoppingDefect(Vec<(i64, i64, C64)>),
    General(Vec<(i64, i64, C64)>),
}

/// `V_{n,m}(t) = R(t)·T_{n,m}` on a 1D lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    coupling: Coupling,
    modulation: Modulation,
}

impl Perturbation {
    pub fn new(coupling: Coupling, modulation: Modulation) -> Result<Self> {
        if let Coupling::HoppingDefect(entries) = &coupling {
            if entries.iter().any(|&(n, m, _)| n == m) {
                return Err(Error::InvalidArgument("hopping defect entries must be off-diagonal"));
            }
        }
        Ok(Self { coupling, modulation })
    }

    pub fn onsite(profile: Vec<(i64, C64)>, modulation: Modulation) -> Self {
        Self { coupling: Coupling::OnSite(profile), modulation }
    }

    /// `V_n = v0·exp(−((n − center)/width)²)`, truncated where the profile
    /// drops below `1e−16·|v0|`.
    pub fn gaussian_onsite(v0: impl Into<C64>, width: f64, center: i64, modulation: Modulation) -> Self {
        Self::onsite(gaussian_profile(v0.into(), width, center), modulation)
    }

    /// Symmetric bond defect `T_{a,b} = T_{b,a} = amplitude`, i.e. the
    /// hopping between `a` and `b` is changed by `R(t)·amplitude`.
    pub fn bond_defect(a: i64, b: i64, amplitude: impl Into<C64>, modulation: Modulation) -> Result<Self> {
        let v = amplitude.into();
        Self::new(Coupling::HoppingDefect(vec![(a, b, v), (b, a, v)]), modulation)
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn modulation(&self) -> &Modulation {
        &self.modulation
    }

    pub fn with_modulation(&self, modulation: Modulation) -> Self {
        Self { coupling: self.coupling.clone(), modulation }
    }

    /// `(row, column, T)` triples.
    pub fn entries(&self) -> Vec<(i64, i64, C64)> {
        match &self.coupling {
            Coupling::OnSite(p) => p.iter().map(|&(n, v)| (n, n, v)).collect(),
            Coupling::HoppingDefect(e) | Coupling::General(e) => e.clone(),
        }
    }

    /// Sites touched by a nonzero entry of `T`.
    pub fn support(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self
            .entries()
            .into_iter()
            .filter(|e| e.2 != C64::new(0.0, 0.0))
            .flat_map(|(n, m, _)| [n, m])
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Resolves site labels to lattice indices, checking that the support
    /// lies inside the interior.
    pub fn bind(&self, lattice: &Lattice1D) -> Result<BoundPerturbation> {
        let mut entries = Vec::new();
        for (n, m, v) in self.entries() {
            for s in [n, m] {
                if !lattice.in_interior(s) {
                    return Err(Error::SupportViolation { site: s });
                }
            }
            if v != C64::new(0.0, 0.0) {
                entries.push((lattice.index_of(n).unwrap(), lattice.index_of(m).unwrap(), v));
            }
        }
        Ok(BoundPerturbation { entries, modulation: self.modulation.clone() })
    }
}

pub(crate) fn gaussian_profile(v0: C64, width: f64, center: i64) -> Vec<(i64, C64)> {
    // exp(−x²) ≥ 1e−16  ⇔  |x| ≤ √(16 ln 10)
    let reach = (width * (16.0 * core::f64::consts::LN_10).sqrt()).floor() as i64;
    (-reach..=reach)
        .map(|d| {
            let x = d as f64 / width;
            (center + d, v0 * (-x * x).exp())
        })
        .collect()
}

/// A perturbation with its sparse `T` resolved to lattice indices. Only
/// `R(t)` is re-evaluated per step.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundPerturbation {
    entries: Vec<(usize, usize, C64)>,
    modulation: Modulation,
}

impl BoundPerturbation {
    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn modulation(&self) -> &Modulation {
        &self.modulation
    }

    /// `acc_n += scale·Σ_m T_{n,m} ψ_m`
    pub(crate) fn accumulate(&self, scale: C64, psi: &[C64], acc: &mut [C64]) {
        for &(n, m, v) in &self.entries {
            acc[n] += scale * v * psi[m];
        }
    }
}

/// On-site `V_{n,m}(t) = R(t)·V_{n,m}` on a square lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation2D {
    profile: Vec<((i64, i64), C64)>,
    modulation: Modulation,
}

impl Perturbation2D {
    pub fn onsite(profile: Vec<((i64, i64), C64)>, modulation: Modulation) -> Self {
        Self { profile, modulation }
    }

    /// `V = v0·exp(−((n−n_c)² + (m−m_c)²)/width²)`, truncated at `1e−16·|v0|`.
    pub fn gaussian(v0: impl Into<C64>, width: f64, center: (i64, i64), modulation: Modulation) -> Self {
        let v0 = v0.into();
        let reach = (width * (16.0 * core::f64::consts::LN_10).sqrt()).floor() as i64;
        let mut profile = Vec::new();
        for dn in -reach..=reach {
            for dm in -reach..=reach {
                let r2 = ((dn * dn + dm * dm) as f64) / (width * width);
                let v = (-r2).exp();
                if v >= 1e-16 {
                    profile.push(((center.0 + dn, center.1 + dm), v0 * v));
                }
            }
        }
        Self::onsite(profile, modulation)
    }

    pub fn profile(&self) -> &[((i64, i64), C64)] {
        &self.profile
    }

    pub fn modulation(&self) -> &Modulation {
        &self.modulation
    }

    pub fn with_modulation(&self, modulation: Modulation) -> Self {
        Self { profile: self.profile.clone(), modulation }
    }

    pub fn bind(&self, lattice: &Lattice2D) -> Result<BoundPerturbation> {
        let mut entries = Vec::with_capacity(self.profile.len());
        for &(site, v) in &self.profile {
            if !lattice.in_interior(site) {
                return Err(Error::SupportViolation2D { site });
            }
            let i = lattice.index_of(site).unwrap();
            if v != C64::new(0.0, 0.0) {
                entries.push((i, i, v));
            }
        }
        Ok(BoundPerturbation { entries, modulation: self.modulation.clone() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector1D {
    pub time: f64,
    pub amplitudes: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector2D {
    pub time: f64,
    pub nx: usize,
    pub ny: usize,
    pub amplitudes: Vec<C64>,
}

impl StateVector1D {
    pub fn new(time: f64, amplitudes: Vec<C64>) -> Result<Self> {
        check_finite(&amplitudes, time)?;
        Ok(Self { time, amplitudes })
    }

    pub fn zeros(lattice: &Lattice1D) -> Self {
        Self { time: 0.0, amplitudes: vec![C64::new(0.0, 0.0); lattice.sites()] }
    }
}

impl StateVector2D {
    pub fn new(time: f64, lattice: &Lattice2D, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != lattice.len() {
            return Err(Error::ShapeMismatch { expected: lattice.len(), found: amplitudes.len() });
        }
        check_finite(&amplitudes, time)?;
        Ok(Self { time, nx: lattice.nx(), ny: lattice.ny(), amplitudes })
    }
}

pub(crate) fn check_finite(v: &[C64], t: f64) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { t })
    }
}

/// Time-dependent Hamiltonian of a 1D lattice with an optional bound
/// perturbation. Implements [`crate::evolution::Dynamics`].
#[derive(Debug, Clone)]
pub struct LatticeHamiltonian<'a> {
    lattice: &'a Lattice1D,
    hops: Vec<(i64, C64)>,
    perturbation: Option<BoundPerturbation>,
}

impl<'a> LatticeHamiltonian<'a> {
    pub fn new(lattice: &'a Lattice1D, perturbation: Option<&Perturbation>) -> Result<Self> {
        let perturbation = perturbation.map(|p| p.bind(lattice)).transpose()?;
        Ok(Self { lattice, hops: lattice.kernel().entries().collect(), perturbation })
    }

    pub fn lattice(&self) -> &Lattice1D {
        self.lattice
    }

    pub fn perturbation(&self) -> Option<&BoundPerturbation> {
        self.perturbation.as_ref()
    }

    /// `acc = Hψ` at time `t` (overwrites `acc`), with `R(t)` scaled by `envelope`.
    pub(crate) fn apply(&self, t: f64, envelope: f64, psi: &[C64], acc: &mut [C64]) {
        let n = psi.len();
        for a in acc.iter_mut() {
            *a = C64::new(0.0, 0.0);
        }
        // −Σ_d κ_d ψ_{n−d}
        for &(d, k) in &self.hops {
            if d > 0 {
                let d = d as usize;
                for i in d..n {
                    acc[i] -= k * psi[i - d];
                }
            } else {
                let d = (-d) as usize;
                for i in 0..n - d {
                    acc[i] -= k * psi[i + d];
                }
            }
        }
        if let Some(p) = &self.perturbation {
            let r = p.modulation.value(t) * envelope;
            if r != C64::new(0.0, 0.0) {
                p.accumulate(r, psi, acc);
            }
        }
        if let Boundary::Absorbing { strength, .. } = self.lattice.boundary() {
            let w = self.lattice.absorber_width();
            let last = n - 1;
            for d in 0..w.min(n) {
                let x = (w - d) as f64 / w as f64;
                let loss = I * (-strength * x * x);
                acc[d] += loss * psi[d];
                if last - d != d {
                    acc[last - d] += loss * psi[last - d];
                }
            }
        }
    }
}

impl crate::evolution::Dynamics for LatticeHamiltonian<'_> {
    fn dimension(&self) -> usize {
        self.lattice.sites()
    }

    fn derivative(&self, t: f64, state: &[C64], out: &mut [C64]) {
        self.apply(t, 1.0, state, out);
        for o in out.iter_mut() {
            *o = -I * *o;
        }
    }
}

/// `dψ/dt = −i·H(t)ψ` for a 1D lattice.
pub fn apply_hamiltonian_1d(
    lattice: &Lattice1D,
    perturbation: Option<&Perturbation>,
    state: &StateVector1D,
    t: f64,
) -> Result<StateVector1D> {
    use crate::evolution::Dynamics;
    if state.amplitudes.len() != lattice.sites() {
        return Err(Error::ShapeMismatch { expected: lattice.sites(), found: state.amplitudes.len() });
    }
    let h = LatticeHamiltonian::new(lattice, perturbation)?;
    let mut out = vec![C64::new(0.0, 0.0); lattice.sites()];
    h.derivative(t, &state.amplitudes, &mut out);
    Ok(StateVector1D { time: t, amplitudes: out })
}

/// Square-lattice Hamiltonian `−κ·(4 neighbours) + R(t)·V_{n,m}`.
#[derive(Debug, Clone)]
pub struct SquareLatticeHamiltonian<'a> {
    lattice: &'a Lattice2D,
    perturbation: Option<BoundPerturbation>,
}

impl<'a> SquareLatticeHamiltonian<'a> {
    pub fn new(lattice: &'a Lattice2D, perturbation: Option<&Perturbation2D>) -> Result<Self> {
        let perturbation = perturbation.map(|p| p.bind(lattice)).transpose()?;
        Ok(Self { lattice, perturbation })
    }

    pub fn lattice(&self) -> &Lattice2D {
        self.lattice
    }

    pub(crate) fn apply(&self, t: f64, psi: &[C64], acc: &mut [C64]) {
        let (nx, ny) = (self.lattice.nx(), self.lattice.ny());
        let k = self.lattice.kappa();
        for i in 0..nx {
            let row = i * ny;
            for j in 0..ny {
                let mut s = C64::new(0.0, 0.0);
                if i > 0 {
                    s += psi[row - ny + j];
                }
                if i + 1 < nx {
                    s += psi[row + ny + j];
                }
                if j > 0 {
                    s += psi[row + j - 1];
                }
                if j + 1 < ny {
                    s += psi[row + j + 1];
                }
                acc[row + j] = -k * s;
            }
        }
        if let Some(p) = &self.perturbation {
            let r = p.modulation.value(t);
            if r != C64::new(0.0, 0.0) {
                p.accumulate(r, psi, acc);
            }
        }
    }
}

impl crate::evolution::Dynamics for SquareLatticeHamiltonian<'_> {
    fn dimension(&self) -> usize {
        self.lattice.len()
    }

    fn derivative(&self, t: f64, state: &[C64], out: &mut [C64]) {
        self.apply(t, state, out);
        for o in out.iter_mut() {
            *o = -I * *o;
        }
    }
}

pub fn apply_hamiltonian_2d(
    lattice: &Lattice2D,
    perturbation: Option<&Perturbation2D>,
    state: &StateVector2D,
    t: f64,
) -> Result<StateVector2D> {
    use crate::evolution::Dynamics;
    if state.amplitudes.len() != lattice.len() {
        return Err(Error::ShapeMismatch { expected: lattice.len(), found: state.amplitudes.len() });
    }
    let h = SquareLatticeHamiltonian::new(lattice, perturbation)?;
    let mut out = vec![C64::new(0.0, 0.0); lattice.len()];
    h.derivative(t, &state.amplitudes, &mut out);
    Ok(StateVector2D { time: t, nx: lattice.nx(), ny: lattice.ny(), amplitudes: out })
}
