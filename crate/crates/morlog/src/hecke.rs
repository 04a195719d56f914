//! The p-local Hecke algebra for GL_n, acting on formal sums of
//! finite-index sublattices of Z^n.
//!
//! A sublattice is stored by its canonical Hermite-form basis, so equality
//! of lattices is equality of matrices. The generator `T̃_{j,p}` sends a
//! lattice class [L] to the sum of its sublattices M with L/M elementary of
//! rank j; `T(p^k)` sums over all sublattices of index p^k with a `1/p^k`
//! normalization, and `T_{j,p} = (1/p^j) T̃_{j,p}`. Both normalizations are
//! exposed; nothing silently converts between them.
//!
//! The headline computation is `verify_euler_inverse`: the degree-n
//! operator polynomial with X^j coefficient `(-1)^j p^{j(j-1)/2} T_{j,p}`
//! multiplies the generating series `Σ_k T(p^k) X^k` to 1, and this module
//! checks the vanishing of each product coefficient on the standard
//! lattice by exhaustive enumeration.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{is_prime, BigRat};
use crate::intmat::{hnf, identity, mat_mul, snf_diag};
use crate::{Error, Result};

/// Default per-enumeration candidate bound.
pub const DEFAULT_MAX_WORK: u64 = 1 << 20;

/// A finite-index sublattice of Z^n, by its canonical (Hermite-form) basis:
/// upper triangular, positive diagonal, above-diagonal entries reduced.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lattice {
    rows: Vec<Vec<i64>>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L{:?}", self.rows)
    }
}

impl Lattice {
    /// Z^n itself.
    pub fn standard(n: usize) -> Lattice {
        assert!(n >= 1, "lattice rank must be >= 1");
        Lattice { rows: identity(n) }
    }

    /// Canonicalize a generating set; the span must have full rank.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Lattice> {
        if rows.is_empty() {
            return Err(Error::domain("empty generating set"));
        }
        let n = rows[0].len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::usage("generators must be nonempty rows of equal length"));
        }
        let h = hnf(rows, n);
        if h.len() != n {
            return Err(Error::domain("generators do not span a full-rank lattice"));
        }
        Ok(Lattice { rows: h })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `[Z^n : L]`, the determinant of the basis.
    pub fn index(&self) -> u128 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| r[i] as u128)
            .product()
    }

    /// Image under a unimodular change of coordinates on the ambient Z^n
    /// (right multiplication of basis rows).
    pub fn transform(&self, u: &[Vec<i64>]) -> Result<Lattice> {
        let n = self.rank();
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::usage("transform matrix has the wrong shape"));
        }
        if snf_diag(u, n) != vec![1; n] {
            return Err(Error::domain("transform matrix is not unimodular"));
        }
        Lattice::from_rows(&mat_mul(&self.rows, u, n))
    }
}

/// A finitely supported rational combination of lattice classes.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct LatticeVector {
    terms: BTreeMap<Lattice, BigRat>,
}

impl LatticeVector {
    pub fn zero() -> LatticeVector {
        LatticeVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(l: Lattice) -> LatticeVector {
        let mut v = LatticeVector::zero();
        v.add_term(l, &BigRat::one());
        v
    }

    pub fn coeff(&self, l: &Lattice) -> BigRat {
        self.terms.get(l).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Accumulate a coefficient, pruning zeros.
    pub fn add_term(&mut self, l: Lattice, c: &BigRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(l);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let new = e.get().clone() + c;
                if new.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = new;
                }
            }
        }
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), &(-c.clone()));
        }
        out
    }

    pub fn scale(&self, c: &BigRat) -> LatticeVector {
        let mut out = LatticeVector::zero();
        for (l, x) in &self.terms {
            out.add_term(l.clone(), &(x.clone() * c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Lattice, &BigRat)> {
        self.terms.iter()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> BigRat {
        self.terms.values().cloned().sum()
    }

    /// Apply a unimodular coordinate change to every support lattice.
    pub fn transform(&self, u: &[Vec<i64>]) -> Result<LatticeVector> {
        let mut out = LatticeVector::zero();
        for (l, c) in &self.terms {
            out.add_term(l.transform(u)?, c);
        }
        Ok(out)
    }
}

/// A symbolic polynomial in the commuting generators `T̃_{1,p}..T̃_{n,p}`,
/// with rational coefficients. Keys are exponent vectors of length n.
#[derive(Clone, PartialEq, Debug)]
pub struct HeckeOperator {
    n: usize,
    p: u64,
    terms: BTreeMap<Vec<u32>, BigRat>,
}

impl HeckeOperator {
    pub fn zero(n: usize, p: u64) -> HeckeOperator {
        HeckeOperator {
            n,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, p: u64) -> HeckeOperator {
        let mut op = HeckeOperator::zero(n, p);
        op.terms.insert(vec![0; n], BigRat::one());
        op
    }

    /// `T̃_{j,p}`, `1 <= j <= n`.
    pub fn generator_tilde(n: usize, p: u64, j: u32) -> Result<HeckeOperator> {
        if j == 0 || j as usize > n {
            return Err(Error::usage(format!(
                "generator index {j} out of range 1..={n}"
            )));
        }
        let mut op = HeckeOperator::zero(n, p);
        let mut e = vec![0u32; n];
        e[j as usize - 1] = 1;
        op.terms.insert(e, BigRat::one());
        Ok(op)
    }

    /// `T_{j,p} = (1/p^j) T̃_{j,p}` (`j = 0` is the identity).
    pub fn generator(n: usize, p: u64, j: u32) -> Result<HeckeOperator> {
        if j == 0 {
            return Ok(HeckeOperator::identity(n, p));
        }
        let t = HeckeOperator::generator_tilde(n, p, j)?;
        Ok(t.scale(&BigRat::new(BigInt::one(), BigInt::from(p).pow(j))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRat)> {
        self.terms.iter()
    }

    fn check_context(&self, other: &HeckeOperator) -> Result<()> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::usage(format!(
                "operator context mismatch: ({}, {}) vs ({}, {})",
                self.n, self.p, other.n, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HeckeOperator) -> Result<HeckeOperator> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_poly_term(&mut out.terms, e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HeckeOperator) -> Result<HeckeOperator> {
        self.add(&other.scale(&-BigRat::one()))
    }

    pub fn scale(&self, c: &BigRat) -> HeckeOperator {
        let mut out = HeckeOperator::zero(self.n, self.p);
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x.clone() * c);
        }
        out
    }

    /// Symbolic product; the generators commute, so this is ordinary
    /// polynomial multiplication.
    pub fn compose(&self, other: &HeckeOperator) -> Result<HeckeOperator> {
        self.check_context(other)?;
        let mut out = HeckeOperator::zero(self.n, self.p);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                add_poly_term(&mut out.terms, e, ca.clone() * cb);
            }
        }
        Ok(out)
    }
}

fn add_poly_term(terms: &mut BTreeMap<Vec<u32>, BigRat>, e: Vec<u32>, c: BigRat) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let new = o.get().clone() + c;
            if new.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = new;
            }
        }
    }
}

/// The degree-n operator polynomial whose X^j coefficient is
/// `(-1)^j p^{j(j-1)/2} T_{j,p}`.
pub struct EulerFactorPoly {
    pub coeffs: Vec<HeckeOperator>,
}

impl EulerFactorPoly {
    pub fn new(n: usize, p: u64) -> Result<EulerFactorPoly> {
        let mut coeffs = Vec::with_capacity(n + 1);
        for j in 0..=n as u32 {
            let base = HeckeOperator::generator(n, p, j)?;
            let mut scalar = BigRat::from(BigInt::from(p).pow(j * (j.max(1) - 1) / 2));
            if j % 2 == 1 {
                scalar = -scalar;
            }
            coeffs.push(base.scale(&scalar));
        }
        Ok(EulerFactorPoly { coeffs })
    }
}

/// Per-degree residuals of the Euler-factor inversion check.
#[derive(Clone, Debug)]
pub struct EulerInverseReport {
    pub n: usize,
    pub p: u64,
    pub degree: u32,
    /// Residual of the X^m product coefficient on [Z^n], for m = 1..=degree.
    pub residuals: Vec<LatticeVector>,
    pub pass: bool,
    pub first_failure: Option<u32>,
}

/// Shared enumeration parameters: rank, prime, and a work bound on the
/// number of Hermite-form candidates per enumeration call.
#[derive(Clone, Debug)]
pub struct HeckeContext {
    n: usize,
    p: u64,
    max_work: u64,
}

impl HeckeContext {
    pub fn new(n: usize, p: u64) -> Result<HeckeContext> {
        HeckeContext::with_max_work(n, p, DEFAULT_MAX_WORK)
    }

    pub fn with_max_work(n: usize, p: u64, max_work: u64) -> Result<HeckeContext> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if n == 0 || n > 8 {
            return Err(Error::usage("rank must be between 1 and 8"));
        }
        Ok(HeckeContext { n, p, max_work })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `[Z^n]`.
    pub fn standard_vector(&self) -> LatticeVector {
        LatticeVector::basis(Lattice::standard(self.n))
    }

    /// All sublattices `M ⊆ L` with `[L : M] = p^k`, canonical and
    /// duplicate-free.
    ///
    /// Candidates are Hermite forms H with p-power diagonal `(p^{a_0}, ...,
    /// p^{a_{n-1}})`, `Σ a_i = k`, and reduced above-diagonal entries; `M`
    /// has basis `H · basis(L)`. The candidate count is checked against the
    /// work bound before anything is materialized.
    pub fn enumerate_sublattices(&self, l: &Lattice, k: u32) -> Result<Vec<Lattice>> {
        if l.rank() != self.n {
            return Err(Error::usage("lattice rank does not match context"));
        }
        let n = self.n;
        let comps = compositions(k, n);
        let mut count: u128 = 0;
        for a in &comps {
            let mut c: u128 = 1;
            for (j, &aj) in a.iter().enumerate() {
                c = c.saturating_mul((self.p as u128).pow(aj * j as u32));
            }
            count = count.saturating_add(c);
        }
        if count > self.max_work as u128 {
            return Err(Error::resource(format!(
                "{count} sublattice candidates exceed the work bound {}",
                self.max_work
            )));
        }
        let mut out = Vec::with_capacity(count as usize);
        for a in &comps {
            let diag: Vec<i64> = a.iter().map(|&aj| (self.p as i64).pow(aj)).collect();
            // odometer over above-diagonal entries, column-major
            let mut free: Vec<(usize, usize, i64)> = Vec::new();
            for j in 0..n {
                for i in 0..j {
                    free.push((i, j, diag[j]));
                }
            }
            let mut vals = vec![0i64; free.len()];
            loop {
                let mut h = vec![vec![0i64; n]; n];
                for i in 0..n {
                    h[i][i] = diag[i];
                }
                for (slot, &(i, j, _)) in free.iter().enumerate() {
                    h[i][j] = vals[slot];
                }
                out.push(Lattice {
                    rows: hnf(&mat_mul(&h, l.basis(), n), n),
                });
                // increment
                let mut s = 0usize;
                loop {
                    if s == free.len() {
                        break;
                    }
                    vals[s] += 1;
                    if vals[s] < free[s].2 {
                        break;
                    }
                    vals[s] = 0;
                    s += 1;
                }
                if s == free.len() {
                    break;
                }
            }
        }
        let distinct: BTreeSet<&Lattice> = out.iter().collect();
        if distinct.len() != out.len() {
            return Err(Error::internal("sublattice enumeration produced duplicates"));
        }
        out.sort();
        Ok(out)
    }

    /// Sublattices with elementary quotient `L/M ≅ (Z/p)^j`, detected by
    /// the Smith form of the inclusion matrix.
    pub fn enumerate_elementary(&self, l: &Lattice, j: u32) -> Result<Vec<Lattice>> {
        let all = self.enumerate_sublattices(l, j)?;
        let p = self.p as i64;
        Ok(all
            .into_iter()
            .filter(|m| {
                let h = inclusion_matrix(l, m);
                snf_diag(&h, self.n)
                    .iter()
                    .all(|&d| d == 1 || d == p)
            })
            .collect())
    }

    /// `T̃_{j,p}` on a lattice vector: sum over elementary rank-j
    /// sublattices of each support lattice.
    pub fn apply_generator_tilde(&self, j: u32, v: &LatticeVector) -> Result<LatticeVector> {
        if j as usize > self.n {
            return Err(Error::usage(format!(
                "generator index {j} out of range 0..={}",
                self.n
            )));
        }
        let mut out = LatticeVector::zero();
        for (l, c) in v.iter() {
            for m in self.enumerate_elementary(l, j)? {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// `T_{j,p} = (1/p^j) T̃_{j,p}`.
    pub fn apply_generator(&self, j: u32, v: &LatticeVector) -> Result<LatticeVector> {
        let tilde = self.apply_generator_tilde(j, v)?;
        Ok(tilde.scale(&BigRat::new(BigInt::one(), BigInt::from(self.p).pow(j))))
    }

    /// `T(p^k)`: `1/p^k` times the sum over all index-p^k sublattices.
    pub fn t_pk(&self, k: u32, v: &LatticeVector) -> Result<LatticeVector> {
        let mut out = LatticeVector::zero();
        for (l, c) in v.iter() {
            for m in self.enumerate_sublattices(l, k)? {
                out.add_term(m, c);
            }
        }
        Ok(out.scale(&BigRat::new(BigInt::one(), BigInt::from(self.p).pow(k))))
    }

    /// Evaluate a symbolic operator, factor by factor.
    pub fn apply(&self, op: &HeckeOperator, v: &LatticeVector) -> Result<LatticeVector> {
        if op.n != self.n || op.p != self.p {
            return Err(Error::usage("operator context mismatch"));
        }
        let mut out = LatticeVector::zero();
        for (e, c) in op.terms() {
            let mut w = v.clone();
            for (slot, &mult) in e.iter().enumerate() {
                for _ in 0..mult {
                    w = self.apply_generator_tilde(slot as u32 + 1, &w)?;
                }
            }
            out = out.add(&w.scale(c));
        }
        Ok(out)
    }

    pub fn euler_factor(&self) -> Result<EulerFactorPoly> {
        EulerFactorPoly::new(self.n, self.p)
    }

    /// Multiply the Euler factor against `Σ_{k<=d} T(p^k) X^k` and check
    /// that every product coefficient X^m (1 <= m <= d) kills [Z^n].
    pub fn verify_euler_inverse(&self, d: u32) -> Result<EulerInverseReport> {
        let f = self.euler_factor()?;
        let std = self.standard_vector();
        let mut residuals = Vec::with_capacity(d as usize);
        let mut first_failure = None;
        for m in 1..=d {
            let mut acc = LatticeVector::zero();
            for j in 0..=(self.n as u32).min(m) {
                let tk = self.t_pk(m - j, &std)?;
                let term = self.apply(&f.coeffs[j as usize], &tk)?;
                acc = acc.add(&term);
            }
            if !acc.is_zero() && first_failure.is_none() {
                first_failure = Some(m);
            }
            residuals.push(acc);
        }
        Ok(EulerInverseReport {
            n: self.n,
            p: self.p,
            degree: d,
            pass: first_failure.is_none(),
            residuals,
            first_failure,
        })
    }
}

/// Basis of `m` written in the coordinates of `l` (the integral matrix H
/// with `basis(m) = H · basis(l)`), solved by back-substitution against
/// the triangular basis of `l`.
fn inclusion_matrix(l: &Lattice, m: &Lattice) -> Vec<Vec<i64>> {
    let n = l.rank();
    let mut h = Vec::with_capacity(n);
    for row in m.basis() {
        let mut rem = row.clone();
        let mut coords = vec![0i64; n];
        for i in 0..n {
            let pivot = l.basis()[i][i];
            debug_assert_eq!(rem[i] % pivot, 0, "not a sublattice");
            let q = rem[i] / pivot;
            coords[i] = q;
            for c in 0..n {
                rem[c] -= q * l.basis()[i][c];
            }
        }
        debug_assert!(rem.iter().all(|&x| x == 0), "not a sublattice");
        h.push(coords);
    }
    h
}

/// All ordered tuples of `parts` non-negative integers summing to `k`.
fn compositions(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(out, cur, pos + 1, left - v);
        }
    }
    rec(&mut out, &mut cur, 0, k);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::gaussian_binomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Classical recursion for the number of index-m sublattices of Z^n:
    /// sum over the index of the projection to the last coordinate.
    fn sublattice_count_oracle(n: usize, m: u64) -> u64 {
        if n == 1 {
            return 1;
        }
        let mut total = 0;
        for d in 1..=m {
            if m % d == 0 {
                total += d.pow(n as u32 - 1) * sublattice_count_oracle(n - 1, m / d);
            }
        }
        total
    }

    #[test]
    fn sublattice_counts_match_the_divisor_recursion() {
        for (n, p, kmax) in [(1usize, 2u64, 4u32), (2, 2, 3), (2, 3, 3), (3, 2, 3), (3, 3, 2)] {
            let ctx = HeckeContext::new(n, p).unwrap();
            let std = Lattice::standard(n);
            for k in 0..=kmax {
                let subs = ctx.enumerate_sublattices(&std, k).unwrap();
                assert_eq!(
                    subs.len() as u64,
                    sublattice_count_oracle(n, p.pow(k)),
                    "n={n} p={p} k={k}"
                );
            }
        }
    }

    #[test]
    fn known_small_counts() {
        let ctx = HeckeContext::new(2, 2).unwrap();
        let std = Lattice::standard(2);
        assert_eq!(ctx.enumerate_sublattices(&std, 1).unwrap().len(), 3);
        assert_eq!(ctx.enumerate_sublattices(&std, 2).unwrap().len(), 7);
        let ctx3 = HeckeContext::new(3, 2).unwrap();
        assert_eq!(
            ctx3.enumerate_sublattices(&Lattice::standard(3), 2)
                .unwrap()
                .len(),
            35
        );
    }

    #[test]
    fn enumerated_lattices_are_canonical_with_correct_index() {
        let ctx = HeckeContext::new(2, 3).unwrap();
        let base = Lattice::from_rows(&[vec![3, 1], vec![0, 2]]).unwrap();
        for k in 0..=2 {
            for m in ctx.enumerate_sublattices(&base, k).unwrap() {
                assert_eq!(m.index(), base.index() * 3u128.pow(k));
                // canonical: re-running HNF is a fixed point
                assert_eq!(Lattice::from_rows(m.basis()).unwrap(), m);
                // containment: every basis row of m lies in base
                for row in m.basis() {
                    assert!(crate::intmat::in_rowspan(base.basis(), row));
                }
            }
        }
    }

    #[test]
    fn elementary_counts_are_gaussian_binomials() {
        for (n, p) in [(2usize, 2u64), (2, 3), (3, 2)] {
            let ctx = HeckeContext::new(n, p).unwrap();
            let std = Lattice::standard(n);
            for j in 0..=n as u32 {
                let count = ctx.enumerate_elementary(&std, j).unwrap().len();
                assert_eq!(
                    BigRat::from(BigInt::from(count)),
                    gaussian_binomial(n as u32, j, p),
                    "n={n} p={p} j={j}"
                );
            }
            // the count is intrinsic: same on a non-standard lattice
            let skew = Lattice::from_rows(&[vec![2, 1], vec![0, 3]]);
            if n == 2 {
                let skew = skew.unwrap();
                for j in 0..=2u32 {
                    let count = ctx.enumerate_elementary(&skew, j).unwrap().len();
                    assert_eq!(
                        BigRat::from(BigInt::from(count)),
                        gaussian_binomial(2, j, p)
                    );
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let ctx = HeckeContext::new(2, 2).unwrap();
        let v = ctx.standard_vector();
        // j = 0: identity
        assert_eq!(ctx.apply_generator_tilde(0, &v).unwrap(), v);
        // j = n: the unique sublattice pL
        let top = ctx.apply_generator_tilde(2, &v).unwrap();
        let two_l = Lattice::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(top, LatticeVector::basis(two_l));
        // j = 1: the three index-2 sublattices, coefficient 1 each
        let mid = ctx.apply_generator_tilde(1, &v).unwrap();
        assert_eq!(mid.len(), 3);
        for (_, c) in mid.iter() {
            assert_eq!(*c, BigRat::one());
        }
        let all_index_2 = ctx.enumerate_sublattices(&Lattice::standard(2), 1).unwrap();
        for m in all_index_2 {
            assert_eq!(mid.coeff(&m), BigRat::one());
        }
    }

    #[test]
    fn generator_mass_is_the_gaussian_binomial() {
        for (n, p) in [(2usize, 2u64), (2, 3), (3, 2), (3, 3)] {
            let ctx = HeckeContext::new(n, p).unwrap();
            let v = ctx.standard_vector();
            for j in 0..=n as u32 {
                let mass = ctx.apply_generator_tilde(j, &v).unwrap().mass();
                assert_eq!(mass, gaussian_binomial(n as u32, j, p), "n={n} p={p} j={j}");
            }
        }
    }

    #[test]
    fn t_pk_examples() {
        // k = 0: identity
        let ctx = HeckeContext::new(2, 5).unwrap();
        let v = ctx.standard_vector();
        assert_eq!(ctx.t_pk(0, &v).unwrap(), v);
        // n = 1: single lattice, 1/p^k coefficient
        let ctx1 = HeckeContext::new(1, 3).unwrap();
        let w = ctx1.t_pk(2, &ctx1.standard_vector()).unwrap();
        let nine_z = Lattice::from_rows(&[vec![9]]).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.coeff(&nine_z), BigRat::new(BigInt::one(), BigInt::from(9)));
        // n = 2, p = 2, k = 2: 7 lattices at 1/4 each
        let ctx = HeckeContext::new(2, 2).unwrap();
        let w = ctx.t_pk(2, &ctx.standard_vector()).unwrap();
        assert_eq!(w.len(), 7);
        for (_, c) in w.iter() {
            assert_eq!(*c, BigRat::new(BigInt::one(), BigInt::from(4)));
        }
    }

    #[test]
    fn compose_is_evaluation_faithful_and_commutative() {
        for (n, p) in [(2usize, 2u64), (2, 3), (3, 2)] {
            let ctx = HeckeContext::new(n, p).unwrap();
            let v = ctx.standard_vector();
            let t1 = HeckeOperator::generator_tilde(n, p, 1).unwrap();
            let t2 = HeckeOperator::generator_tilde(n, p, 2).unwrap();
            let ab = t1.compose(&t2).unwrap();
            let ba = t2.compose(&t1).unwrap();
            assert_eq!(ab, ba);
            // symbolic product evaluates like sequential application,
            // in either order (total index p^3 here)
            let lhs = ctx.apply(&ab, &v).unwrap();
            let seq1 = ctx
                .apply_generator_tilde(1, &ctx.apply_generator_tilde(2, &v).unwrap())
                .unwrap();
            let seq2 = ctx
                .apply_generator_tilde(2, &ctx.apply_generator_tilde(1, &v).unwrap())
                .unwrap();
            assert_eq!(lhs, seq1, "n={n} p={p}");
            assert_eq!(seq1, seq2, "n={n} p={p}");
        }
    }

    #[test]
    fn identity_composition_is_neutral() {
        let t1 = HeckeOperator::generator_tilde(2, 2, 1).unwrap();
        let id = HeckeOperator::identity(2, 2);
        assert_eq!(t1.compose(&id).unwrap(), t1);
        assert_eq!(id.compose(&t1).unwrap(), t1);
    }

    #[test]
    fn rank_one_hecke_operators_telescope() {
        let p = 3u64;
        let ctx = HeckeContext::new(1, p).unwrap();
        let z = ctx.standard_vector();
        for k in 0..4u32 {
            let tk = ctx.t_pk(k, &z).unwrap();
            let lhs = ctx.apply_generator(1, &tk).unwrap();
            let rhs = ctx.t_pk(k + 1, &z).unwrap();
            assert_eq!(lhs, rhs, "k={k}");
        }
    }

    #[test]
    fn euler_inverse_for_the_standard_configurations() {
        for (n, p, d) in [
            (1usize, 2u64, 5u32),
            (1, 3, 5),
            (2, 2, 3),
            (2, 3, 2),
            (3, 2, 2),
        ] {
            let ctx = HeckeContext::new(n, p).unwrap();
            let report = ctx.verify_euler_inverse(d).unwrap();
            assert!(report.pass, "n={n} p={p} d={d}: {:?}", report.first_failure);
            for (idx, r) in report.residuals.iter().enumerate() {
                assert!(r.is_zero(), "n={n} p={p} residual at degree {}", idx + 1);
            }
        }
    }

    #[test]
    fn euler_factor_coefficients() {
        let f = EulerFactorPoly::new(2, 2).unwrap();
        assert_eq!(f.coeffs.len(), 3);
        assert_eq!(f.coeffs[0], HeckeOperator::identity(2, 2));
        // X^1: -T_{1,p} = -(1/p) T~_1
        let t1 = HeckeOperator::generator_tilde(2, 2, 1).unwrap();
        assert_eq!(
            f.coeffs[1],
            t1.scale(&BigRat::new(BigInt::from(-1), BigInt::from(2)))
        );
        // X^2: p * T_{2,p} = p/p^2 T~_2
        let t2 = HeckeOperator::generator_tilde(2, 2, 2).unwrap();
        assert_eq!(
            f.coeffs[2],
            t2.scale(&BigRat::new(BigInt::one(), BigInt::from(2)))
        );
    }

    fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
        let mut u = identity(n);
        for _ in 0..10 {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            let c = rng.gen_range(-2..=2i64);
            for k in 0..n {
                u[i][k] += c * u[j][k];
            }
            if rng.gen_bool(0.3) {
                u.swap(i, j);
            }
        }
        u
    }

    #[test]
    fn operators_commute_with_unimodular_coordinate_changes() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (n, p) in [(2usize, 2u64), (2, 3), (3, 2)] {
            let ctx = HeckeContext::new(n, p).unwrap();
            let base = if n == 2 {
                Lattice::from_rows(&[vec![2, 1], vec![0, 1]]).unwrap()
            } else {
                Lattice::standard(n)
            };
            let v = LatticeVector::basis(base);
            for _ in 0..5 {
                let u = random_unimodular(&mut rng, n);
                for j in 0..=2u32.min(n as u32) {
                    let lhs = ctx
                        .apply_generator_tilde(j, &v)
                        .unwrap()
                        .transform(&u)
                        .unwrap();
                    let rhs = ctx
                        .apply_generator_tilde(j, &v.transform(&u).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs, "n={n} p={p} j={j}");
                }
                let lhs = ctx.t_pk(2, &v).unwrap().transform(&u).unwrap();
                let rhs = ctx.t_pk(2, &v.transform(&u).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "t_pk n={n} p={p}");
            }
        }
    }

    #[test]
    fn work_bound_is_enforced() {
        let ctx = HeckeContext::with_max_work(3, 2, 10).unwrap();
        match ctx.enumerate_sublattices(&Lattice::standard(3), 2) {
            Err(Error::Resource(_)) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn context_mismatches_are_rejected() {
        let a = HeckeOperator::generator_tilde(2, 2, 1).unwrap();
        let b = HeckeOperator::generator_tilde(2, 3, 1).unwrap();
        assert!(a.compose(&b).is_err());
        assert!(a.add(&b).is_err());
        let ctx = HeckeContext::new(3, 2).unwrap();
        assert!(ctx.apply(&a, &ctx.standard_vector()).is_err());
    }

    #[test]
    fn lattice_canonicalization() {
        let a = Lattice::from_rows(&[vec![2, 5], vec![4, 2], vec![0, 4]]).unwrap();
        let b = Lattice::from_rows(&[vec![2, 1], vec![0, 4]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.index(), 8);
        assert!(Lattice::from_rows(&[vec![1, 2], vec![2, 4]]).is_err());
    }

    #[test]
    fn transform_requires_unimodularity() {
        let l = Lattice::standard(2);
        assert!(l.transform(&[vec![2, 0], vec![0, 1]]).is_err());
        assert!(l.transform(&[vec![1, 3], vec![0, 1]]).is_ok());
    }
}
