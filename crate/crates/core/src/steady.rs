//! Liouvillian construction, steady-state solve and time propagation.
//!
//! Density matrices are column-stacked: `vec(ρ)[i + D·j] = ρ_ij`.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{Operator, ONE, ZERO};
use crate::model::Channel;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;
pub const DEFAULT_DT: f64 = 1e-3;

/// Smallest acceptable ratio between the extreme LU pivots after the trace
/// row has been inserted.
const PIVOT_RATIO_MIN: f64 = 1e-12;
/// How many diagonal rows to try before declaring the steady state degenerate.
const MAX_ROW_ATTEMPTS: usize = 4;
const DRIFT_TOL: f64 = 1e-8;
/// Superoperators at least this large try the sparse factorisation first.
const SPARSE_MIN_ORDER: usize = 400;
/// Agreement required between the two sparse solves, and their residual.
const SPARSE_AGREEMENT_TOL: f64 = 1e-9;
const REFINE_STEPS: usize = 3;

/// Compressed sparse row storage; the superoperators here are very sparse.
#[derive(Debug, Clone)]
struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Csr {
    /// Duplicate entries are summed; explicit zeros are dropped.
    fn from_triples(n: usize, mut triples: Vec<(usize, usize, C64)>) -> Self {
        triples.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(triples.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triples.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triples {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                row_ptr[r + 1] += 1;
                cols.push(c);
                vals.push(v);
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        let mut out = Self { n, row_ptr, cols, vals };
        out.prune();
        out
    }

    fn prune(&mut self) {
        let mut row_ptr = vec![0; self.n + 1];
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.vals[k] != ZERO {
                    cols.push(self.cols[k]);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr[r + 1] = cols.len();
        }
        self.row_ptr = row_ptr;
        self.cols = cols;
        self.vals = vals;
    }

    fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    fn to_dense(&self) -> Mat<C64> {
        let mut m = Mat::<C64>::zeros(self.n, self.n);
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.cols[k])] = self.vals[k];
            }
        }
        m
    }
}

/// Generator of `vec(ρ̇) = L·vec(ρ)` for
/// `ρ̇ = −i[H, ρ] + Σ (rate/2)(2cρc† − c†cρ − ρc†c)`.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    sparse: Csr,
}

impl Liouvillian {
    /// The zero generator on a `dim`-dimensional Hilbert space.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            sparse: Csr::from_triples(dim * dim, Vec::new()),
        }
    }

    /// Hilbert-space dimension D; the superoperator is D²×D².
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals().len()
    }

    fn vals(&self) -> &[C64] {
        &self.sparse.vals
    }

    /// Dense copy of the superoperator.
    pub fn matrix(&self) -> Mat<C64> {
        self.sparse.to_dense()
    }

    /// Element `L[row, col]` of the superoperator.
    pub fn get(&self, row: usize, col: usize) -> C64 {
        let s = &self.sparse;
        (s.row_ptr[row]..s.row_ptr[row + 1])
            .find(|&k| s.cols[k] == col)
            .map_or(ZERO, |k| s.vals[k])
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        let n = self.dim * self.dim;
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let mut out = vec![ZERO; n];
        self.sparse.matvec_into(v, &mut out);
        Ok(out)
    }

    /// Positions of the diagonal entries of ρ inside `vec(ρ)`; summing them
    /// is the trace functional.
    pub fn trace_functional(&self) -> Vec<usize> {
        (0..self.dim).map(|k| k * (self.dim + 1)).collect()
    }
}

pub fn liouvillian(h: &Operator, channels: &[Channel]) -> Result<Liouvillian> {
    let d = h.dim();
    for ch in channels {
        ch.op.check_dim(d)?;
    }
    // H_eff = H − (i/2) Σ rate c†c carries both the commutator and the
    // anticommutator parts.
    let mut h_eff = h.clone();
    for ch in channels {
        let cdc = &ch.op.adjoint() * &ch.op;
        h_eff = &h_eff - &cdc.scale(C64::new(0.0, 0.5 * ch.rate));
    }

    let i = C64::new(0.0, 1.0);
    let mut triples = Vec::new();
    for (r, k, v) in h_eff.nonzeros() {
        for j in 0..d {
            // −i H_eff ρ
            triples.push((r + d * j, k + d * j, -i * v));
            // +i ρ H_eff†: (ρ H_eff†)_{j r} picks ρ_{j k} with conj(H_eff_{r k})
            triples.push((j + d * r, j + d * k, i * v.conj()));
        }
    }
    for ch in channels {
        if ch.rate == 0.0 {
            continue;
        }
        let nz = ch.op.nonzeros();
        for &(r, k, v) in &nz {
            for &(s, l, w) in &nz {
                triples.push((r + d * s, k + d * l, ch.rate * v * w.conj()));
            }
        }
    }
    Ok(Liouvillian {
        dim: d,
        sparse: Csr::from_triples(d * d, triples),
    })
}

/// Invariant diagnostics of a candidate density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    /// `max |ρ_ij − conj(ρ_ji)|`
    pub hermiticity: f64,
    /// `|Tr ρ − 1|`
    pub trace_error: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.hermiticity <= HERMITICITY_TOL
            && self.trace_error <= TRACE_TOL
            && self.min_eigenvalue >= -POSITIVITY_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: Operator,
}

impl DensityMatrix {
    /// Checks Hermiticity, trace and positivity at the crate tolerances.
    pub fn new(rho: Operator) -> Result<Self> {
        let out = Self { rho };
        let diag = out.diagnostics();
        if diag.is_valid() {
            Ok(out)
        } else {
            Err(Error::InvalidState(format!("{diag:?}")))
        }
    }

    /// `|0⟩⟨0|` in basis index 0 (the vacuum with all atoms in the ground state).
    pub fn vacuum(dim: usize) -> Self {
        Self {
            rho: Operator::from_fn(dim, |i, j| if i == 0 && j == 0 { ONE } else { ZERO }),
        }
    }

    fn from_vec_unchecked(dim: usize, v: &[C64]) -> Self {
        Self {
            rho: Operator::from_fn(dim, |i, j| v[i + dim * j]),
        }
    }

    pub fn to_vec(&self) -> Vec<C64> {
        let d = self.dim();
        let mut v = vec![ZERO; d * d];
        for j in 0..d {
            for i in 0..d {
                v[i + d * j] = self.rho.get(i, j);
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.rho
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rho.get(i, j)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.rho.max_abs_diff(&other.rho)
    }

    fn hermiticity(&self) -> f64 {
        self.rho.max_abs_diff(&self.rho.adjoint())
    }

    fn trace_error(&self) -> f64 {
        (self.rho.trace() - ONE).norm()
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        let herm = (&self.rho + &self.rho.adjoint()).scale(C64::new(0.5, 0.0));
        StateDiagnostics {
            hermiticity: self.hermiticity(),
            trace_error: self.trace_error(),
            min_eigenvalue: herm.hermitian_eigenvalues()[0],
        }
    }
}

/// Unique ρ with `L·vec(ρ) = 0` and `Tr ρ = 1`.
///
/// One equation of the singular system is swapped for the trace constraint.
/// The vacuum population row goes first: in the weak-drive regime every
/// other population is tiny and the equation it carries is the least
/// informative, so sacrificing it keeps the small populations accurate.
/// Further diagonal rows are tried when the pivots reveal rank deficiency.
/// Large systems go through a sparse factorisation first and fall back to
/// the dense one when its answer cannot be certified.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let d = l.dim();
    let n = d * d;
    if n >= SPARSE_MIN_ORDER {
        if let Some(rho) = sparse_steady_state(l) {
            return Ok(rho);
        }
    }
    dense_steady_state(l)
}

fn dense_steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let d = l.dim();
    let n = d * d;
    let base = l.matrix();
    let trace_cols = l.trace_functional();
    let mut rhs = Mat::<C64>::zeros(n, 1);

    for p in 0..d.min(MAX_ROW_ATTEMPTS) {
        let row = p * (d + 1);
        let mut m = base.clone();
        for c in 0..n {
            m[(row, c)] = ZERO;
        }
        for &c in &trace_cols {
            m[(row, c)] = ONE;
        }
        let lu = m.partial_piv_lu();
        let u = lu.U();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for k in 0..n {
            let mag = u[(k, k)].norm();
            lo = lo.min(mag);
            hi = hi.max(mag);
        }
        if !(hi > 0.0 && lo / hi >= PIVOT_RATIO_MIN) {
            continue;
        }
        rhs.fill(ZERO);
        rhs[(row, 0)] = ONE;
        let x = lu.solve(&rhs);
        let v: Vec<C64> = (0..n).map(|k| x[(k, 0)]).collect();
        return DensityMatrix::new(DensityMatrix::from_vec_unchecked(d, &v).rho);
    }
    Err(Error::DegenerateSteadyState)
}

/// Sparse LU has no pivot diagnostics, so uniqueness is certified instead by
/// solving with two different rows replaced: a unique steady state makes
/// both answers agree. `None` hands the decision to the dense path.
fn sparse_steady_state(l: &Liouvillian) -> Option<DensityMatrix> {
    let d = l.dim();
    let n = d * d;
    let trace_cols = l.trace_functional();
    let solve = |row: usize| -> Option<Vec<C64>> {
        let s = &l.sparse;
        let mut entries = Vec::with_capacity(s.vals.len() + d);
        for r in (0..n).filter(|&r| r != row) {
            for k in s.row_ptr[r]..s.row_ptr[r + 1] {
                entries.push(Triplet::new(r, s.cols[k], s.vals[k]));
            }
        }
        entries.extend(trace_cols.iter().map(|&c| Triplet::new(row, c, ONE)));
        let m = SparseColMat::<usize, C64>::try_new_from_triplets(n, n, &entries).ok()?;
        let lu = m.sp_lu().ok()?;
        let mut rhs = Mat::<C64>::zeros(n, 1);
        rhs[(row, 0)] = ONE;
        let x = lu.solve(&rhs);
        let mut v: Vec<C64> = (0..n).map(|k| x[(k, 0)]).collect();
        // Refinement against the bordered system recovers the small entries.
        let mut lv = vec![ZERO; n];
        for _ in 0..REFINE_STEPS {
            s.matvec_into(&v, &mut lv);
            let mut res = Mat::<C64>::from_fn(n, 1, |k, _| -lv[k]);
            res[(row, 0)] = ONE - trace_cols.iter().map(|&c| v[c]).sum::<C64>();
            let dx = lu.solve(&res);
            for k in 0..n {
                v[k] += dx[(k, 0)];
            }
        }
        v.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(v)
    };
    let first = solve(0)?;
    let second = solve(d + 1)?;
    let scale = first.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let spread = first.iter().zip(&second).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if !(scale > 0.0 && spread <= SPARSE_AGREEMENT_TOL * scale) {
        return None;
    }
    let mut residual = vec![ZERO; n];
    l.sparse.matvec_into(&first, &mut residual);
    let lnorm = l.vals().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if residual.iter().any(|z| z.norm() > SPARSE_AGREEMENT_TOL * lnorm * scale) {
        return None;
    }
    DensityMatrix::new(DensityMatrix::from_vec_unchecked(d, &first).rho).ok()
}

/// Fixed-step RK4 integration of `vec(ρ̇) = L·vec(ρ)` from `rho0` to
/// `t_final`. The step is shrunk slightly so it divides `t_final` exactly.
pub fn evolve(
    rho0: &DensityMatrix,
    l: &Liouvillian,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    let mut last = None;
    evolve_sampled(rho0, l, t_final, dt, 1, |_, rho| last = Some(rho.clone()))?;
    Ok(last.expect("final sample is always emitted"))
}

/// As [`evolve`], calling `observe(t, ρ(t))` at `samples` evenly spaced
/// times ending at `t_final`.
pub fn evolve_sampled(
    rho0: &DensityMatrix,
    l: &Liouvillian,
    t_final: f64,
    dt: f64,
    samples: usize,
    mut observe: impl FnMut(f64, &DensityMatrix),
) -> Result<()> {
    let d = l.dim();
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho0.dim(),
        });
    }
    if !(t_final >= 0.0 && t_final.is_finite() && dt > 0.0 && dt.is_finite()) || samples == 0 {
        return Err(Error::InvalidParams(format!(
            "evolve needs t_final >= 0, dt > 0 and samples >= 1 (t_final = {t_final}, dt = {dt}, samples = {samples})"
        )));
    }
    let steps = ((t_final / dt).ceil() as usize).max(samples);
    let h = if steps == 0 { 0.0 } else { t_final / steps as f64 };
    let n = d * d;
    let mut y = rho0.to_vec();
    let trace_idx = l.trace_functional();
    let trace0: C64 = trace_idx.iter().map(|&k| y[k]).sum();

    let (mut k1, mut k2, mut k3, mut k4) = (vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]);
    let mut tmp = vec![ZERO; n];
    let mut next_sample = 1;

    for step in 1..=steps {
        l.sparse.matvec_into(&y, &mut k1);
        axpy(&y, 0.5 * h, &k1, &mut tmp);
        l.sparse.matvec_into(&tmp, &mut k2);
        axpy(&y, 0.5 * h, &k2, &mut tmp);
        l.sparse.matvec_into(&tmp, &mut k3);
        axpy(&y, h, &k3, &mut tmp);
        l.sparse.matvec_into(&tmp, &mut k4);
        for k in 0..n {
            y[k] += (h / 6.0) * (k1[k] + 2.0 * (k2[k] + k3[k]) + k4[k]);
        }

        let t = h * step as f64;
        let trace: C64 = trace_idx.iter().map(|&k| y[k]).sum();
        if !trace.re.is_finite() || (trace - trace0).norm() > DRIFT_TOL {
            return Err(Error::IntegratorFailure {
                time: t,
                reason: format!("trace drifted to {trace}"),
            });
        }
        if step * samples >= next_sample * steps {
            let rho = DensityMatrix::from_vec_unchecked(d, &y);
            let herm_drift = rho.hermiticity() - rho0.hermiticity();
            if herm_drift > DRIFT_TOL {
                return Err(Error::IntegratorFailure {
                    time: t,
                    reason: format!("Hermiticity drifted by {herm_drift:e}"),
                });
            }
            observe(t, &rho);
            next_sample += 1;
        }
    }
    if steps == 0 {
        observe(0.0, rho0);
    }
    Ok(())
}

fn axpy(y: &[C64], a: f64, x: &[C64], out: &mut [C64]) {
    for ((o, yi), xi) in out.iter_mut().zip(y).zip(x) {
        *o = yi + a * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::fock_annihilation;
    use crate::model::{build_hamiltonian, collapse_operators, Drive, SystemParams};
    use crate::observables::g2_zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solve(params: &SystemParams) -> Result<DensityMatrix> {
        let h = build_hamiltonian(params)?;
        let l = liouvillian(&h, &collapse_operators(params)?)?;
        steady_state(&l)
    }

    #[test]
    fn single_photon_decay_rate() {
        let a = fock_annihilation(1).unwrap();
        let l = liouvillian(&Operator::zeros(2), &[Channel { op: a, rate: 0.7 }]).unwrap();
        // vec index of |1⟩⟨1| is 1 + 2·1
        assert!((l.get(3, 3) - C64::new(-0.7, 0.0)).norm() < 1e-15);
        assert!((l.get(0, 3) - C64::new(0.7, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trace_is_preserved() {
        let params = SystemParams {
            n_atoms: 2,
            g: 0.9,
            eta: 0.2,
            delta_a: 0.3,
            delta_c: -1.1,
            drive: Drive::Atom,
            n_max: 2,
            ..Default::default()
        };
        let h = build_hamiltonian(&params).unwrap();
        let l = liouvillian(&h, &collapse_operators(&params).unwrap()).unwrap();
        let d = l.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let raw = Operator::from_fn(d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let x = &raw + &raw.adjoint();
            let v = DensityMatrix { rho: x }.to_vec();
            let lv = l.apply(&v).unwrap();
            let tr: C64 = l.trace_functional().iter().map(|&k| lv[k]).sum();
            assert!(tr.norm() < 1e-12, "{tr}");
        }
    }

    #[test]
    fn steady_state_is_a_null_vector() {
        let params = SystemParams {
            g: 0.7071,
            ..Default::default()
        };
        let h = build_hamiltonian(&params).unwrap();
        let l = liouvillian(&h, &collapse_operators(&params).unwrap()).unwrap();
        let rho = steady_state(&l).unwrap();
        let res = l.apply(&rho.to_vec()).unwrap();
        let norm = res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm < 1e-10, "{norm}");
        assert!(rho.diagnostics().is_valid());
    }

    #[test]
    fn driven_cavity_photon_number() {
        let eta = 0.05;
        let params = SystemParams {
            g: 0.0,
            eta,
            n_max: 6,
            ..Default::default()
        };
        let rho = solve(&params).unwrap();
        let a = crate::model::Ladder::new(params.space().unwrap()).unwrap().a;
        let n_op = &a.adjoint() * &a;
        let n: C64 = (&n_op * rho.as_operator()).trace();
        assert!((n.re - 4.0 * eta * eta).abs() < 1e-9, "{n}");
    }

    #[test]
    fn dark_sector_is_degenerate() {
        let params = SystemParams {
            n_atoms: 2,
            g: 1.0,
            gamma: 0.0,
            eta: 0.0,
            n_max: 2,
            ..Default::default()
        };
        assert_eq!(solve(&params), Err(Error::DegenerateSteadyState));
    }

    #[test]
    fn large_dark_sector_is_still_degenerate() {
        let params = SystemParams {
            n_atoms: 2,
            g: 1.0,
            gamma: 0.0,
            eta: 0.0,
            n_max: 6,
            ..Default::default()
        };
        assert_eq!(solve(&params), Err(Error::DegenerateSteadyState));
    }

    #[test]
    fn sparse_path_matches_dense() {
        for (da, dc) in [(-10.0, 20.0), (2.5, 20.0), (0.0, 0.0)] {
            let params = SystemParams {
                n_atoms: 2,
                g: 5.0,
                eta: 0.01,
                delta_a: da,
                delta_c: dc,
                drive: Drive::Atom,
                n_max: 8,
                ..Default::default()
            };
            let l = liouvillian(&build_hamiltonian(&params).unwrap(), &collapse_operators(&params).unwrap()).unwrap();
            let sparse = sparse_steady_state(&l).expect("certified");
            let dense = dense_steady_state(&l).unwrap();
            // g² rests on two-photon populations of order 1e-16.
            let space = params.space().unwrap();
            let (a, b) = (g2_zero(&sparse, &space).unwrap(), g2_zero(&dense, &space).unwrap());
            assert!((a - b).abs() < 1e-8 * b, "{a} vs {b}");
        }
    }

    #[test]
    fn undriven_with_decay_relaxes_to_vacuum() {
        let params = SystemParams {
            n_atoms: 2,
            g: 1.0,
            eta: 0.0,
            n_max: 2,
            ..Default::default()
        };
        let rho = solve(&params).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::vacuum(rho.dim())) < 1e-12);
    }

    #[test]
    fn zero_generator_is_identity() {
        let rho = DensityMatrix::vacuum(4);
        let out = evolve(&rho, &Liouvillian::zero(4), 1.0, 0.1).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn propagation_reaches_steady_state() {
        let params = SystemParams {
            g: 0.7071,
            ..Default::default()
        };
        let h = build_hamiltonian(&params).unwrap();
        let l = liouvillian(&h, &collapse_operators(&params).unwrap()).unwrap();
        let ss = steady_state(&l).unwrap();
        let mut traces = Vec::new();
        let mut last = None;
        evolve_sampled(&DensityMatrix::vacuum(l.dim()), &l, 40.0, DEFAULT_DT, 20, |_, rho| {
            traces.push(rho.as_operator().trace());
            last = Some(rho.clone());
        })
        .unwrap();
        assert_eq!(traces.len(), 20);
        assert!(traces.iter().all(|t| (t - ONE).norm() < 1e-8));
        assert!(last.unwrap().max_abs_diff(&ss) < 1e-6);
    }

    #[test]
    fn unstable_step_is_reported() {
        let params = SystemParams {
            g: 3.0,
            delta_c: 40.0,
            eta: 0.5,
            ..Default::default()
        };
        let h = build_hamiltonian(&params).unwrap();
        let l = liouvillian(&h, &collapse_operators(&params).unwrap()).unwrap();
        let err = evolve(&DensityMatrix::vacuum(l.dim()), &l, 50.0, 0.5).unwrap_err();
        assert!(matches!(err, Error::IntegratorFailure { .. }), "{err:?}");
    }

    #[test]
    fn density_validation() {
        let bad = Operator::from_fn(2, |i, j| if i == j { C64::new(0.6, 0.0) } else { ZERO });
        assert!(matches!(DensityMatrix::new(bad), Err(Error::InvalidState(_))));
        let neg = Operator::from_fn(2, |i, j| match (i, j) {
            (0, 0) => C64::new(1.1, 0.0),
            (1, 1) => C64::new(-0.1, 0.0),
            _ => ZERO,
        });
        assert!(DensityMatrix::new(neg).is_err());
    }
}
