//! Periodic position grids.
//!
//! Each dof lives on `N` points `x = kΔ`, `Δ = L/N`, of a circle of
//! length `L`. Modulation by `e^{−iax}` is single-valued when `a` is a
//! multiple of `2π/L`, and translation by `b` is a cyclic shift when `b`
//! is a multiple of `Δ`. With `a = 2πk/L` and `b = mΔ` the Weyl relation
//! holds exactly with `a·b = 2πkm/N`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::certificate::{builtin_mermin3, Certificate};
use crate::error::{Error, Result};
use crate::linalg::{simultaneous_eigenbasis, CMatrix, CVector};
use crate::monomial::WeylMonomial;
use crate::system::{same_system, DofSystem};

use super::{ClaimCheck, Tolerances};

/// Largest number of grid points `N^{n_dof}`.
pub const MAX_GRID_POINTS: usize = 1 << 22;

const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_dof: usize,
    /// Points per dof.
    pub n: usize,
    /// Period per dof.
    pub period: f64,
}

impl GridSpec {
    pub fn new(n_dof: usize, n: usize, period: f64) -> Result<Self> {
        if n_dof == 0 {
            return Err(Error::NoDofs);
        }
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::Grid(format!(
                "points per dof must be even and >= 2, got {n}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Grid(format!(
                "period must be positive, got {period}"
            )));
        }
        let total = (0..n_dof).try_fold(1usize, |acc, _| acc.checked_mul(n));
        match total {
            Some(t) if t <= MAX_GRID_POINTS => Ok(GridSpec { n_dof, n, period }),
            _ => Err(Error::DimensionTooLarge {
                dim: total.unwrap_or(usize::MAX),
                limit: MAX_GRID_POINTS,
            }),
        }
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    /// Total number of points, `N^{n_dof}`.
    pub fn n_points(&self) -> usize {
        self.n.pow(self.n_dof as u32)
    }

    /// Grid index of `a` in units of `2π/L`.
    fn modulation_units(&self, dof: usize, a: f64) -> Result<i64> {
        to_units(a * self.period / (2.0 * PI), "a", dof)
    }

    /// Grid index of `b` in units of `Δ`.
    fn shift_units(&self, dof: usize, b: f64) -> Result<i64> {
        to_units(b / self.spacing(), "b", dof)
    }

    fn strides(&self) -> Vec<usize> {
        (0..self.n_dof)
            .map(|j| self.n.pow((self.n_dof - 1 - j) as u32))
            .collect()
    }

    fn coords(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.n_dof];
        for j in (0..self.n_dof).rev() {
            out[j] = idx % self.n;
            idx /= self.n;
        }
        out
    }
}

fn to_units(x: f64, what: &'static str, dof: usize) -> Result<i64> {
    let r = x.round();
    if (x - r).abs() <= COMMENSURATE_TOL * (1.0 + x.abs()) && r.abs() < 1e15 {
        Ok(r as i64)
    } else {
        Err(Error::Incommensurate {
            what,
            dof: dof + 1,
            value: x,
        })
    }
}

/// Amplitudes on the grid, dof 1 most significant in the flat index.
#[derive(Clone, Debug, PartialEq)]
pub struct GridState {
    spec: GridSpec,
    amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct GridStateFile {
    n_dof: usize,
    n: usize,
    period: f64,
    amplitudes: Vec<(f64, f64)>,
}

impl GridState {
    pub fn new(spec: GridSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spec.n_points() {
            return Err(Error::Grid(format!(
                "expected {} amplitudes, got {}",
                spec.n_points(),
                amplitudes.len()
            )));
        }
        Ok(GridState { spec, amplitudes })
    }

    pub fn zeros(spec: &GridSpec) -> Self {
        GridState {
            amplitudes: vec![Complex64::zero(); spec.n_points()],
            spec: spec.clone(),
        }
    }

    /// Basis vector at the given per-dof indices.
    pub fn delta(spec: &GridSpec, at: &[usize]) -> Self {
        let mut s = Self::zeros(spec);
        let idx = at
            .iter()
            .zip(spec.strides())
            .map(|(k, st)| (k % spec.n) * st)
            .sum::<usize>();
        s.amplitudes[idx] = Complex64::new(1.0, 0.0);
        s
    }

    /// Normalized state with amplitudes drawn uniformly from the unit square.
    pub fn random(spec: &GridSpec, rng: &mut impl Rng) -> Self {
        let amplitudes = (0..spec.n_points())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut s = GridState {
            spec: spec.clone(),
            amplitudes,
        };
        let norm = s.norm();
        s.amplitudes.iter_mut().for_each(|z| *z /= norm);
        s
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `(Σ|ψ|² Δ^{n_dof})^{1/2}`.
    pub fn norm(&self) -> f64 {
        let sum: f64 = self.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        (sum * self.spec.spacing().powi(self.spec.n_dof as i32)).sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    /// `max |self − other|`.
    pub fn distance(&self, other: &GridState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(0.0, |a, (x, y)| a.max((x - y).norm()))
    }

    pub fn scale(&self, c: Complex64) -> GridState {
        GridState {
            spec: self.spec.clone(),
            amplitudes: self.amplitudes.iter().map(|z| z * c).collect(),
        }
    }

    /// `ψ(x) ↦ c · e^{−2πi Σ_j k_j x_j/L} ψ(x − m Δ)` in one pass.
    fn transform(&self, k: &[i64], m: &[i64], c: Complex64) -> GridState {
        let spec = &self.spec;
        let n = spec.n as i64;
        let strides = spec.strides();
        let twiddle: Vec<Complex64> = (0..spec.n)
            .map(|r| Complex64::from_polar(1.0, -2.0 * PI * r as f64 / spec.n as f64))
            .collect();
        let mut out = vec![Complex64::zero(); self.amplitudes.len()];
        for (idx, slot) in out.iter_mut().enumerate() {
            let x = spec.coords(idx);
            let mut src = 0usize;
            let mut phase = 0i64;
            for j in 0..spec.n_dof {
                let from = (x[j] as i64 - m[j]).rem_euclid(n) as usize;
                src += from * strides[j];
                phase += k[j].rem_euclid(n) * x[j] as i64;
            }
            *slot = c * twiddle[phase.rem_euclid(n) as usize] * self.amplitudes[src];
        }
        GridState {
            spec: spec.clone(),
            amplitudes: out,
        }
    }

    /// `(U_a ψ)(x) = e^{−i a·x} ψ(x)`.
    pub fn apply_u(&self, a: &[f64]) -> Result<GridState> {
        let k = self
            .check_len(a)?
            .iter()
            .enumerate()
            .map(|(j, &aj)| self.spec.modulation_units(j, aj))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.transform(&k, &vec![0; self.spec.n_dof], Complex64::new(1.0, 0.0)))
    }

    /// `(V_b ψ)(x) = ψ(x − b)`.
    pub fn apply_v(&self, b: &[f64]) -> Result<GridState> {
        let m = self
            .check_len(b)?
            .iter()
            .enumerate()
            .map(|(j, &bj)| self.spec.shift_units(j, bj))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.transform(&vec![0; self.spec.n_dof], &m, Complex64::new(1.0, 0.0)))
    }

    fn check_len<'a>(&self, v: &'a [f64]) -> Result<&'a [f64]> {
        if v.len() == self.spec.n_dof {
            Ok(v)
        } else {
            Err(Error::Grid(format!(
                "expected {} components, got {}",
                self.spec.n_dof,
                v.len()
            )))
        }
    }

    pub fn to_json(&self) -> String {
        let file = GridStateFile {
            n_dof: self.spec.n_dof,
            n: self.spec.n,
            period: self.spec.period,
            amplitudes: self.amplitudes.iter().map(|z| (z.re, z.im)).collect(),
        };
        serde_json::to_string(&file).expect("grid state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GridStateFile = serde_json::from_str(text)?;
        let spec = GridSpec::new(file.n_dof, file.n, file.period)?;
        let amps = file
            .amplitudes
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        GridState::new(spec, amps)
    }
}

/// Per-dof parameters `a_j = 2π k_j / L`, `b_j = m_j Δ`, stored as the
/// integers `k_j`, `m_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridBinding {
    pub k: Vec<i64>,
    pub m: Vec<i64>,
}

impl GridBinding {
    /// Converts real parameters, rejecting values off the grid lattice.
    pub fn from_real(spec: &GridSpec, a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != spec.n_dof || b.len() != spec.n_dof {
            return Err(Error::Grid("binding length differs from n_dof".into()));
        }
        Ok(GridBinding {
            k: a.iter()
                .enumerate()
                .map(|(j, &x)| spec.modulation_units(j, x))
                .collect::<Result<_>>()?,
            m: b.iter()
                .enumerate()
                .map(|(j, &x)| spec.shift_units(j, x))
                .collect::<Result<_>>()?,
        })
    }

    /// `k_j = 1`, `m_j = θ_j N/2`, so `a_j b_j = π θ_j` and all `a_j` agree.
    pub fn standard(spec: &GridSpec, system: &DofSystem) -> Result<Self> {
        if system.n_dof() != spec.n_dof {
            return Err(Error::Grid(format!(
                "system has {} dofs, grid has {}",
                system.n_dof(),
                spec.n_dof
            )));
        }
        let half = BigRational::new(BigInt::from(spec.n), BigInt::from(2));
        let m = system
            .theta()
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let m = t * &half;
                m.is_integer()
                    .then(|| m.to_integer().to_i64())
                    .flatten()
                    .ok_or(Error::Unrepresentable {
                        dof: j + 1,
                        theta: t.to_string(),
                        dim: spec.n,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GridBinding {
            k: vec![1; spec.n_dof],
            m,
        })
    }

    pub fn a(&self, spec: &GridSpec) -> Vec<f64> {
        self.k
            .iter()
            .map(|&k| 2.0 * PI * k as f64 / spec.period)
            .collect()
    }

    pub fn b(&self, spec: &GridSpec) -> Vec<f64> {
        self.m.iter().map(|&m| m as f64 * spec.spacing()).collect()
    }

    /// Exact `a_j b_j / π = 2 k_j m_j / N` per dof.
    pub fn realized_theta(&self, spec: &GridSpec) -> Vec<BigRational> {
        self.k
            .iter()
            .zip(&self.m)
            .map(|(&k, &m)| BigRational::new(BigInt::from(2 * k * m), BigInt::from(spec.n)))
            .collect()
    }

    /// The binding realizes every `θ_j` of `system`.
    pub fn check(&self, spec: &GridSpec, system: &DofSystem) -> Result<()> {
        if self.k.len() != system.n_dof() || spec.n_dof != system.n_dof() {
            return Err(Error::Grid(
                "binding, grid, and system disagree on n_dof".into(),
            ));
        }
        for (j, (got, want)) in self
            .realized_theta(spec)
            .iter()
            .zip(system.theta())
            .enumerate()
        {
            if got != want {
                return Err(Error::BindingMismatch {
                    dof: j + 1,
                    got: got.to_f64().unwrap_or(f64::NAN),
                    expected: want.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }
}

/// Applies `A = e^{iπq} ∏_j U_j^{m_j} V_j^{n_j}` right to left: shifts,
/// then modulations, then the phase.
pub fn apply_monomial(a: &WeylMonomial, binding: &GridBinding, s: &GridState) -> Result<GridState> {
    binding.check(&s.spec, a.system())?;
    Ok(apply_unchecked(a, binding, s))
}

fn apply_unchecked(a: &WeylMonomial, binding: &GridBinding, s: &GridState) -> GridState {
    let n = BigInt::from(s.spec.n);
    let reduce = |e: &BigInt, unit: i64| -> i64 {
        (e * BigInt::from(unit))
            .mod_floor(&n)
            .to_i64()
            .expect("reduced below N")
    };
    let k: Vec<i64> = a
        .u_exponents()
        .iter()
        .zip(&binding.k)
        .map(|(e, &u)| reduce(e, u))
        .collect();
    let m: Vec<i64> = a
        .v_exponents()
        .iter()
        .zip(&binding.m)
        .map(|(e, &u)| reduce(e, u))
        .collect();
    s.transform(&k, &m, a.phase().to_complex())
}

/// `A` as a dense matrix on the grid space.
pub fn monomial_matrix(
    a: &WeylMonomial,
    binding: &GridBinding,
    spec: &GridSpec,
) -> Result<CMatrix> {
    binding.check(spec, a.system())?;
    let dim = spec.n_points();
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut e = GridState::zeros(spec);
        e.amplitudes[col] = Complex64::new(1.0, 0.0);
        let img = apply_unchecked(a, binding, &e);
        for (row, z) in img.amplitudes.iter().enumerate() {
            out[(row, col)] = *z;
        }
    }
    Ok(out)
}

/// Amplitude 1 on every point with `x_1 − x_2 ≡ x0 (mod L)`.
pub fn make_epr_delta(spec: &GridSpec, x0: f64) -> Result<GridState> {
    if spec.n_dof != 2 {
        return Err(Error::Grid(format!(
            "EPR state needs 2 dofs, grid has {}",
            spec.n_dof
        )));
    }
    let offset = to_units(x0 / spec.spacing(), "x0", 0)?.rem_euclid(spec.n as i64) as usize;
    let mut s = GridState::zeros(spec);
    for x2 in 0..spec.n {
        let x1 = (x2 + offset) % spec.n;
        s.amplitudes[x1 * spec.n + x2] = Complex64::new(1.0, 0.0);
    }
    Ok(s)
}

/// Largest momentum-space amplitude off `p_1 + p_2 ≡ 0`, relative to the
/// largest amplitude overall.
pub fn epr_momentum_leakage(s: &GridState) -> Result<f64> {
    if s.spec.n_dof != 2 {
        return Err(Error::Grid("momentum check needs 2 dofs".into()));
    }
    let n = s.spec.n;
    let mut buf = s.amplitudes.clone();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    for row in buf.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex64::zero(); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = buf[r * n + c];
        }
        fft.process(&mut col);
        for r in 0..n {
            buf[r * n + c] = col[r];
        }
    }
    let peak = buf.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let mut off = 0.0f64;
    for p1 in 0..n {
        for p2 in 0..n {
            if (p1 + p2) % n != 0 {
                off = off.max(buf[p1 * n + p2].norm());
            }
        }
    }
    Ok(if peak == 0.0 { 0.0 } else { off / peak })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenCheck {
    pub is_eigen: bool,
    pub c: Complex64,
    pub residual: f64,
}

/// Fits `c` at the largest-magnitude amplitude of `s` and reports
/// `‖As − cs‖∞ / ‖s‖∞`.
pub fn check_eigenstate(
    s: &GridState,
    a: &WeylMonomial,
    binding: &GridBinding,
    tol: f64,
) -> Result<EigenCheck> {
    let image = apply_monomial(a, binding, s)?;
    let (peak_idx, peak) = s
        .amplitudes
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, z)| {
            if z.norm() > bv {
                (i, z.norm())
            } else {
                (bi, bv)
            }
        });
    if peak == 0.0 {
        return Err(Error::Grid("eigenstate check on the zero state".into()));
    }
    let c = image.amplitudes[peak_idx] / s.amplitudes[peak_idx];
    let residual = image.distance(&s.scale(c)) / peak;
    Ok(EigenCheck {
        is_eigen: residual <= tol,
        c,
        residual,
    })
}

#[derive(Clone, Debug)]
pub struct GhzState {
    pub state: GridState,
    pub eigenvalues: Vec<Complex64>,
    pub residual: f64,
}

/// Joint eigenstates of the four commuting triple products of the
/// three-dof obstruction, by simultaneous diagonalization of their grid
/// matrices.
pub fn find_ghz_analogues(
    spec: &GridSpec,
    binding: &GridBinding,
    seed: u64,
    tol: f64,
) -> Result<Vec<GhzState>> {
    let cert = builtin_mermin3();
    binding.check(spec, cert.system())?;
    let last = cert.contexts().len() - 1;
    let ops: Vec<WeylMonomial> = cert.members(last)?.into_iter().cloned().collect();
    let family = ops
        .iter()
        .map(|m| monomial_matrix(m, binding, spec))
        .collect::<Result<Vec<_>>>()?;
    let pairs = simultaneous_eigenbasis(&family, seed, tol)?;
    pairs
        .into_iter()
        .map(|p| {
            let state = GridState::new(spec.clone(), vector_amplitudes(&p.vector))?;
            let mut residual = 0.0f64;
            let mut eigenvalues = Vec::with_capacity(ops.len());
            for op in &ops {
                let chk = check_eigenstate(&state, op, binding, tol)?;
                residual = residual.max(chk.residual);
                eigenvalues.push(chk.c);
            }
            if residual > tol {
                return Err(Error::Diagonalization(format!(
                    "grid eigenstate residual {residual:.3e} exceeds {tol:.1e}"
                )));
            }
            Ok(GhzState {
                state,
                eigenvalues,
                residual,
            })
        })
        .collect()
}

fn vector_amplitudes(v: &CVector) -> Vec<Complex64> {
    v.iter().copied().collect()
}

/// Re-checks a certificate on random grid states: the Weyl relation per
/// dof, and each context's sequential action against its canonical product.
pub fn check_certificate(
    cert: &Certificate,
    spec: &GridSpec,
    binding: &GridBinding,
    n_states: usize,
    seed: u64,
    tol: Tolerances,
) -> Result<Vec<ClaimCheck>> {
    let system: &Arc<DofSystem> = cert.system();
    binding.check(spec, system)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<GridState> = (0..n_states)
        .map(|_| GridState::random(spec, &mut rng))
        .collect();
    let mut out = Vec::new();
    let (a, b) = (binding.a(spec), binding.b(spec));
    for j in 0..spec.n_dof {
        let mut aj = vec![0.0; spec.n_dof];
        let mut bj = vec![0.0; spec.n_dof];
        aj[j] = a[j];
        bj[j] = b[j];
        let phase = Complex64::from_polar(1.0, -a[j] * b[j]);
        let mut worst = 0.0f64;
        for s in &states {
            let uv = s.apply_v(&bj)?.apply_u(&aj)?;
            let vu = s.apply_u(&aj)?.apply_v(&bj)?.scale(phase);
            worst = worst.max(uv.distance(&vu));
        }
        out.push(ClaimCheck::new(
            format!("U{0} V{0} = e^(-i a b) V{0} U{0} on grid", j + 1),
            worst,
            tol.algebraic,
        ));
    }
    for (ci, ctx) in cert.contexts().iter().enumerate() {
        let members = cert.members(ci)?;
        let product = cert.context_product(ci)?;
        debug_assert!(same_system(product.system(), system));
        let mut worst = 0.0f64;
        for s in &states {
            let mut acc = s.clone();
            for m in members.iter().rev() {
                acc = apply_unchecked(m, binding, &acc);
            }
            worst = worst.max(acc.distance(&apply_unchecked(&product, binding, s)));
        }
        out.push(ClaimCheck::new(
            format!(
                "context {}: [{}] acts as {product} on {n_states} random states",
                ci + 1,
                ctx.members.join(", ")
            ),
            worst,
            tol.algebraic,
        ));
    }
    Ok(out)
}
