//! Truncated Hilbert space of one cavity mode and one or two two-level atoms.
//!
//! Subsystems are ordered cavity ⊗ atom 1 [⊗ atom 2] everywhere, and each
//! atom uses the basis order (|g⟩, |e⟩). A composite basis index is therefore
//! `n · 2^N + a₁ · 2^(N-1) + … + a_N` with `a_j = 0` for ground, `1` for
//! excited.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Shape of the truncated composite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    n_atoms: usize,
    n_max: usize,
}

impl SpaceSpec {
    pub fn new(n_atoms: usize, n_max: usize) -> Result<Self> {
        if !(1..=2).contains(&n_atoms) {
            return Err(Error::InvalidAtomCount(n_atoms));
        }
        if n_max < 1 {
            return Err(Error::InvalidTruncation(n_max));
        }
        Ok(Self { n_atoms, n_max })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// Highest retained Fock level.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn cavity_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn atomic_dim(&self) -> usize {
        1 << self.n_atoms
    }

    /// Total dimension `2^N · (n_max + 1)`.
    pub fn dim(&self) -> usize {
        self.atomic_dim() * self.cavity_dim()
    }

    /// Composite index of `|atoms, n⟩`; `atoms[j]` is the state of atom `j + 1`.
    pub fn index(&self, atoms: &[AtomState], n: usize) -> Result<usize> {
        if atoms.len() != self.n_atoms {
            return Err(Error::DimensionMismatch {
                expected: self.n_atoms,
                found: atoms.len(),
            });
        }
        if n > self.n_max {
            return Err(Error::DimensionMismatch {
                expected: self.n_max,
                found: n,
            });
        }
        let atomic = atoms
            .iter()
            .fold(0usize, |acc, a| (acc << 1) | usize::from(*a == AtomState::Excited));
        Ok(n * self.atomic_dim() + atomic)
    }

    /// Photon number and total excitation number of each basis index.
    pub fn excitations(&self, index: usize) -> (usize, usize) {
        let n = index / self.atomic_dim();
        let atomic = index % self.atomic_dim();
        (n, n + atomic.count_ones() as usize)
    }

    fn factor_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.cavity_dim()];
        dims.extend(std::iter::repeat_n(2, self.n_atoms));
        dims
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomState {
    Ground,
    Excited,
}

/// One tensor factor of the composite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Cavity,
    /// Atom number, starting at 1.
    Atom(usize),
}

impl Slot {
    fn position(self, spec: &SpaceSpec) -> Result<usize> {
        match self {
            Slot::Cavity => Ok(0),
            Slot::Atom(j) if (1..=spec.n_atoms).contains(&j) => Ok(j),
            Slot::Atom(_) => Err(Error::SlotOutOfRange {
                slot: format!("{self:?}"),
                n_atoms: spec.n_atoms,
            }),
        }
    }
}

/// Dense square complex matrix acting on a (sub)space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: Mat<C64>,
}

impl Operator {
    pub fn from_mat(matrix: Mat<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            matrix: Mat::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.matrix;
        Self::from_fn(self.dim(), |i, j| m[(j, i)].conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        let m = &self.matrix;
        Self::from_fn(self.dim(), |i, j| m[(i, j)] * factor)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Operator) -> Self {
        let (a, b) = (&self.matrix, &other.matrix);
        let db = other.dim();
        Self::from_fn(self.dim() * db, |i, j| a[(i / db, j / db)] * b[(i % db, j % db)])
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.check_dim(v.len())?;
        Ok((0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.matrix[(i, j)] * v[j]).sum())
            .collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }

    /// Exact entrywise Hermiticity, no tolerance.
    pub fn is_hermitian(&self) -> bool {
        let m = &self.matrix;
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| m[(i, j)] == m[(j, i)].conj()))
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        let (a, b) = (&self.matrix, &other.matrix);
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
        worst
    }

    /// Eigenvalues of a Hermitian operator in nondecreasing order.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .expect("self-adjoint eigen decomposition did not converge")
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            })
        }
    }

    /// Nonzero entries as `(row, col, value)` triples, column-major.
    pub(crate) fn nonzeros(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::new();
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                let v = self.matrix[(i, j)];
                if v != ZERO {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

/// Cavity annihilation operator on `n_max + 1` Fock levels: `⟨n-1|a|n⟩ = √n`.
pub fn fock_annihilation(n_max: usize) -> Result<Operator> {
    if n_max < 1 {
        return Err(Error::InvalidTruncation(n_max));
    }
    Ok(Operator::from_fn(n_max + 1, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    }))
}

/// Atomic lowering operator `|g⟩⟨e|` in the basis (|g⟩, |e⟩).
pub fn atom_lowering() -> Operator {
    Operator::from_fn(2, |i, j| if i == 0 && j == 1 { ONE } else { ZERO })
}

/// Lift a single-factor operator to the composite space.
pub fn embed(op: &Operator, slot: Slot, spec: &SpaceSpec) -> Result<Operator> {
    let position = slot.position(spec)?;
    let dims = spec.factor_dims();
    op.check_dim(dims[position])?;
    let before: usize = dims[..position].iter().product();
    let after: usize = dims[position + 1..].iter().product();
    Ok(Operator::identity(before)
        .kron(op)
        .kron(&Operator::identity(after)))
}

/// `|±, n⟩` for one Fock level of a two-atom space.
#[derive(Debug, Clone, PartialEq)]
pub struct DickePair {
    pub n: usize,
    pub plus: Vec<C64>,
    pub minus: Vec<C64>,
}

/// Symmetric and antisymmetric single-excitation Dicke vectors
/// `(|eg⟩ ± |ge⟩)/√2 ⊗ |n⟩` for every retained Fock level.
pub fn dicke_vectors(spec: &SpaceSpec) -> Result<Vec<DickePair>> {
    if spec.n_atoms != 2 {
        return Err(Error::NotTwoAtom);
    }
    (0..=spec.n_max)
        .map(|n| {
            Ok(DickePair {
                n,
                plus: state_vector(spec, &StateLabel::new(AtomicLabel::Plus, n))?,
                minus: state_vector(spec, &StateLabel::new(AtomicLabel::Minus, n))?,
            })
        })
        .collect()
}

/// Atomic part of a basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomicLabel {
    /// One atom.
    Single(AtomState),
    /// Two atoms in a product state `(atom 1, atom 2)`.
    Pair(AtomState, AtomState),
    Plus,
    Minus,
}

/// A basis state such as `g,1`, `gg,2`, `+,1` or `ee,0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateLabel {
    pub atoms: AtomicLabel,
    pub n: usize,
}

impl StateLabel {
    pub fn new(atoms: AtomicLabel, n: usize) -> Self {
        Self { atoms, n }
    }

    fn n_atoms(&self) -> usize {
        match self.atoms {
            AtomicLabel::Single(_) => 1,
            _ => 2,
        }
    }
}

fn state_char(s: AtomState) -> char {
    match s {
        AtomState::Ground => 'g',
        AtomState::Excited => 'e',
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.atoms {
            AtomicLabel::Single(a) => write!(f, "{},{}", state_char(a), self.n),
            AtomicLabel::Pair(a, b) => write!(f, "{}{},{}", state_char(a), state_char(b), self.n),
            AtomicLabel::Plus => write!(f, "+,{}", self.n),
            AtomicLabel::Minus => write!(f, "-,{}", self.n),
        }
    }
}

impl FromStr for StateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownLabel(s.to_string());
        let (atoms, n) = s.split_once(',').ok_or_else(unknown)?;
        let n: usize = n.trim().parse().map_err(|_| unknown())?;
        let state = |c: char| match c {
            'g' => Ok(AtomState::Ground),
            'e' => Ok(AtomState::Excited),
            _ => Err(unknown()),
        };
        let chars: Vec<char> = atoms.trim().chars().collect();
        let atoms = match chars.as_slice() {
            ['+'] => AtomicLabel::Plus,
            ['-'] => AtomicLabel::Minus,
            [a] => AtomicLabel::Single(state(*a)?),
            [a, b] => AtomicLabel::Pair(state(*a)?, state(*b)?),
            _ => return Err(unknown()),
        };
        Ok(StateLabel { atoms, n })
    }
}

/// Normalised composite vector for a basis label.
pub fn state_vector(spec: &SpaceSpec, label: &StateLabel) -> Result<Vec<C64>> {
    if label.n_atoms() != spec.n_atoms || label.n > spec.n_max {
        return Err(Error::UnknownLabel(label.to_string()));
    }
    let mut v = vec![ZERO; spec.dim()];
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    use AtomState::{Excited as E, Ground as G};
    match label.atoms {
        AtomicLabel::Single(a) => v[spec.index(&[a], label.n)?] = ONE,
        AtomicLabel::Pair(a, b) => v[spec.index(&[a, b], label.n)?] = ONE,
        AtomicLabel::Plus => {
            v[spec.index(&[E, G], label.n)?] = r;
            v[spec.index(&[G, E], label.n)?] = r;
        }
        AtomicLabel::Minus => {
            v[spec.index(&[E, G], label.n)?] = r;
            v[spec.index(&[G, E], label.n)?] = -r;
        }
    }
    Ok(v)
}

/// An orthonormal labelled basis of the whole space: product states for one
/// atom, `{gg, +, −, ee}` for two.
pub fn complete_labels(spec: &SpaceSpec) -> Vec<StateLabel> {
    use AtomState::{Excited as E, Ground as G};
    let atomic: Vec<AtomicLabel> = if spec.n_atoms == 1 {
        vec![AtomicLabel::Single(G), AtomicLabel::Single(E)]
    } else {
        vec![
            AtomicLabel::Pair(G, G),
            AtomicLabel::Plus,
            AtomicLabel::Minus,
            AtomicLabel::Pair(E, E),
        ]
    };
    (0..=spec.n_max)
        .flat_map(|n| atomic.iter().map(move |&a| StateLabel::new(a, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(dim: usize, k: usize) -> Vec<C64> {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        v
    }

    fn inner(a: &[C64], b: &[C64]) -> C64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    #[test]
    fn annihilation_entries() {
        let a1 = fock_annihilation(1).unwrap();
        assert_eq!(a1.dim(), 2);
        assert_eq!(a1.nonzeros(), vec![(0, 1, ONE)]);

        let a2 = fock_annihilation(2).unwrap();
        assert_eq!(a2.get(0, 1), ONE);
        assert_eq!(a2.get(1, 2), C64::new(2f64.sqrt(), 0.0));
        assert_eq!(a2.nonzeros().len(), 2);
    }

    #[test]
    fn truncation_must_be_positive() {
        assert_eq!(fock_annihilation(0), Err(Error::InvalidTruncation(0)));
        assert!(SpaceSpec::new(1, 0).is_err());
        assert_eq!(SpaceSpec::new(3, 2), Err(Error::InvalidAtomCount(3)));
    }

    #[test]
    fn number_operator() {
        let a = fock_annihilation(4).unwrap();
        let n = &a.adjoint() * &a;
        let out = n.apply(&basis(5, 2)).unwrap();
        for (x, y) in out.iter().zip(basis(5, 2)) {
            assert!((x - y * 2.0).norm() < 1e-14);
        }
        for i in 0..5 {
            for j in 0..5 {
                let expected = if i == j { i as f64 } else { 0.0 };
                assert!((n.get(i, j) - C64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn truncated_commutator() {
        for n_max in 1..8 {
            let a = fock_annihilation(n_max).unwrap();
            let c = a.commutator(&a.adjoint());
            for n in 0..n_max {
                assert!((c.get(n, n) - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn lowering_algebra() {
        let s = atom_lowering();
        assert_eq!(s.apply(&[ZERO, ONE]).unwrap(), vec![ONE, ZERO]);
        assert_eq!(s.apply(&[ONE, ZERO]).unwrap(), vec![ZERO, ZERO]);
        assert_eq!(&s * &s, Operator::zeros(2));
        let sd = s.adjoint();
        let proj_e = &sd * &s;
        assert_eq!(proj_e.nonzeros(), vec![(1, 1, ONE)]);
        assert_eq!(&proj_e + &(&s * &sd), Operator::identity(2));
    }

    #[test]
    fn embed_dimensions_and_commutation() {
        let one = SpaceSpec::new(1, 2).unwrap();
        let a = embed(&fock_annihilation(2).unwrap(), Slot::Cavity, &one).unwrap();
        assert_eq!(a.dim(), 6);

        let two = SpaceSpec::new(2, 3).unwrap();
        let s1 = embed(&atom_lowering(), Slot::Atom(1), &two).unwrap();
        assert_eq!(s1.dim(), 16);
        let a = embed(&fock_annihilation(3).unwrap(), Slot::Cavity, &two).unwrap();
        assert!(a.commutator(&s1).max_abs_diff(&Operator::zeros(16)) == 0.0);
    }

    #[test]
    fn embed_errors() {
        let spec = SpaceSpec::new(1, 2).unwrap();
        assert!(matches!(
            embed(&atom_lowering(), Slot::Atom(2), &spec),
            Err(Error::SlotOutOfRange { .. })
        ));
        assert!(matches!(
            embed(&atom_lowering(), Slot::Cavity, &spec),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn embed_follows_index_convention() {
        let spec = SpaceSpec::new(2, 2).unwrap();
        let s2 = embed(&atom_lowering(), Slot::Atom(2), &spec).unwrap();
        let ge1 = spec.index(&[AtomState::Ground, AtomState::Excited], 1).unwrap();
        let gg1 = spec.index(&[AtomState::Ground, AtomState::Ground], 1).unwrap();
        assert_eq!(ge1, 5);
        assert_eq!(s2.get(gg1, ge1), ONE);
    }

    #[test]
    fn dicke_orthonormal() {
        let spec = SpaceSpec::new(2, 2).unwrap();
        let pairs = dicke_vectors(&spec).unwrap();
        assert_eq!(pairs.len(), 3);
        for p in &pairs {
            assert!((inner(&p.plus, &p.plus) - ONE).norm() < 1e-15);
            assert!(inner(&p.plus, &p.minus).norm() < 1e-15);
        }
        let plus0 = &pairs[0].plus;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let eg = spec.index(&[AtomState::Excited, AtomState::Ground], 0).unwrap();
        let ge = spec.index(&[AtomState::Ground, AtomState::Excited], 0).unwrap();
        assert_eq!(plus0[eg], C64::new(r, 0.0));
        assert_eq!(plus0[ge], C64::new(r, 0.0));
    }

    #[test]
    fn collective_lowering_of_plus() {
        let spec = SpaceSpec::new(2, 1).unwrap();
        let s1 = embed(&atom_lowering(), Slot::Atom(1), &spec).unwrap();
        let s2 = embed(&atom_lowering(), Slot::Atom(2), &spec).unwrap();
        let plus = &dicke_vectors(&spec).unwrap()[0].plus;
        let out = (&s1 + &s2).apply(plus).unwrap();
        let gg = state_vector(&spec, &"gg,0".parse().unwrap()).unwrap();
        for (x, y) in out.iter().zip(&gg) {
            assert!((x - y * 2f64.sqrt()).norm() < 1e-15);
        }
    }

    #[test]
    fn dicke_requires_two_atoms() {
        let spec = SpaceSpec::new(1, 2).unwrap();
        assert_eq!(dicke_vectors(&spec), Err(Error::NotTwoAtom));
    }

    #[test]
    fn labels_parse_and_print() {
        for s in ["g,0", "e,3", "gg,2", "eg,1", "+,1", "-,0", "ee,0"] {
            let label: StateLabel = s.parse().unwrap();
            assert_eq!(label.to_string(), s);
        }
        for bad in ["x,1", "gg", "+,a", "ggg,0", ""] {
            assert!(matches!(bad.parse::<StateLabel>(), Err(Error::UnknownLabel(_))));
        }
    }

    #[test]
    fn complete_labels_are_orthonormal() {
        let spec = SpaceSpec::new(2, 2).unwrap();
        let labels = complete_labels(&spec);
        assert_eq!(labels.len(), spec.dim());
        let vecs: Vec<_> = labels.iter().map(|l| state_vector(&spec, l).unwrap()).collect();
        for (i, a) in vecs.iter().enumerate() {
            for (j, b) in vecs.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((inner(a, b) - C64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }
}
