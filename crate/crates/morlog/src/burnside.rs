//! Burnside rings of finite abelian p-groups.
//!
//! Groups are products of cyclic p-power factors. Subgroups are
//! canonicalized as Hermite-normal-form lattices `M` with
//! `p^{r_i} Z^n ⊆ M ⊆ Z^n`, which fixes a deterministic ordering for
//! coefficient tables. On top of the subgroup table the module provides the
//! Moebius function of the subgroup lattice, the primitive rational
//! idempotents, the integral element `e` built from them, and the
//! restriction of coset classes along a distinguished order-p summand,
//! together with brute-force oracles for everything that has a closed form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{is_prime, rat_int, BigRat};
use crate::intmat;
use crate::{Error, Result};

/// Default cap on group order and on the subgroup-candidate enumeration.
pub const DEFAULT_MAX_WORK: u64 = 4096;

/// A finite abelian p-group `Π_i Z/p^{r_i}`.
///
/// The empty product (no factors) is the trivial group; it is allowed so
/// that degenerate level-structure inputs have somewhere to live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbPGroup {
    p: u64,
    ranks: Vec<u32>,
}

impl FinAbPGroup {
    pub fn new(p: u64, ranks: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        for &r in ranks {
            if r == 0 {
                return Err(Error::domain("cyclic factor exponents must be >= 1"));
            }
            if (p as f64).powi(r as i32) > (i64::MAX / 4) as f64 {
                return Err(Error::domain("cyclic factor too large"));
            }
        }
        Ok(FinAbPGroup {
            p,
            ranks: ranks.to_vec(),
        })
    }

    /// The trivial group, tagged with a prime.
    pub fn trivial(p: u64) -> Result<Self> {
        FinAbPGroup::new(p, &[])
    }

    /// Elementary abelian `(Z/p)^n`.
    pub fn elementary(p: u64, n: usize) -> Result<Self> {
        FinAbPGroup::new(p, &vec![1; n])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    /// Number of cyclic factors.
    pub fn num_factors(&self) -> usize {
        self.ranks.len()
    }

    /// `p^{r_i}`, the modulus of the i-th coordinate.
    pub fn modulus(&self, i: usize) -> i64 {
        (self.p as i64).pow(self.ranks[i])
    }

    pub fn order(&self) -> u128 {
        self.ranks
            .iter()
            .map(|&r| (self.p as u128).pow(r))
            .product()
    }

    pub fn identity(&self) -> Vec<i64> {
        vec![0; self.ranks.len()]
    }

    pub fn is_identity(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Normalize coordinates into `[0, p^{r_i})`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| x.rem_euclid(self.modulus(i)))
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        (0..self.ranks.len())
            .map(|i| (a[i] + b[i]).rem_euclid(self.modulus(i)))
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        (0..self.ranks.len())
            .map(|i| (-a[i]).rem_euclid(self.modulus(i)))
            .collect()
    }

    pub fn scalar(&self, k: i64, a: &[i64]) -> Vec<i64> {
        (0..self.ranks.len())
            .map(|i| (k * a[i]).rem_euclid(self.modulus(i)))
            .collect()
    }

    /// All elements, in row-major order (last coordinate fastest).
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let order = self.order();
        assert!(order <= usize::MAX as u128, "group too large to list");
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = self.identity();
        loop {
            out.push(cur.clone());
            // odometer increment
            let mut i = self.ranks.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.modulus(i) {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Position of an element in the `elements()` order.
    pub fn index_of(&self, v: &[i64]) -> usize {
        let v = self.reduce(v);
        let mut idx: usize = 0;
        for i in 0..self.ranks.len() {
            idx = idx * self.modulus(i) as usize + v[i] as usize;
        }
        idx
    }

    /// Elements killed by multiplication by p.
    pub fn p_torsion(&self) -> Vec<Vec<i64>> {
        self.elements()
            .into_iter()
            .filter(|v| self.is_identity(&self.scalar(self.p as i64, v)))
            .collect()
    }
}

/// A subgroup, stored as the HNF lattice `M` with `Λ_0 ⊆ M ⊆ Z^n` plus its
/// explicit element set (indices into the ambient `elements()` list).
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub hnf: Vec<Vec<i64>>,
    pub elems: Vec<usize>,
    pub order: u64,
    /// Smith form diagonal of `hnf`; describes the quotient G/S.
    pub snf: Vec<i64>,
}

impl Subgroup {
    /// If G/S is elementary abelian, its rank; otherwise None.
    pub fn elementary_rank(&self, p: u64) -> Option<u32> {
        let mut rank = 0;
        for &d in &self.snf {
            if d == 1 {
                continue;
            } else if d == p as i64 {
                rank += 1;
            } else {
                return None;
            }
        }
        Some(rank)
    }

    pub fn index_in(&self, group: &FinAbPGroup) -> u64 {
        (group.order() / self.order as u128) as u64
    }
}

/// The canonical subgroup list of a group, with containment precomputed.
#[derive(Clone, Debug)]
pub struct SubgroupTable {
    pub group: FinAbPGroup,
    pub subgroups: Vec<Subgroup>,
    containment: Vec<Vec<bool>>,
    by_elems: BTreeMap<Vec<usize>, usize>,
}

impl SubgroupTable {
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Is subgroup `c` contained in subgroup `b`?
    pub fn contains(&self, c: usize, b: usize) -> bool {
        self.containment[c][b]
    }

    pub fn find_by_elems(&self, elems: &[usize]) -> Option<usize> {
        self.by_elems.get(elems).copied()
    }

    /// Index of the trivial subgroup (always first in the canonical order).
    pub fn trivial_index(&self) -> usize {
        0
    }

    /// Index of the full group (always last in the canonical order).
    pub fn full_index(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// Moebius function of the subgroup lattice, by the defining recursion
    /// `Σ_{C ⊆ X ⊆ B} μ(X, B) = δ_{C,B}`.
    pub fn moebius(&self, c: usize, b: usize) -> Result<BigRat> {
        if !self.contains(c, b) {
            return Err(Error::domain(
                "moebius requires a nested pair of subgroups",
            ));
        }
        let col = self.moebius_column(b);
        Ok(BigRat::from(col[c].clone().expect("nested pair computed")))
    }

    /// All values `μ(·, b)` at once. Entries are None off the interval.
    pub fn moebius_column(&self, b: usize) -> Vec<Option<BigInt>> {
        let mut col: Vec<Option<BigInt>> = vec![None; self.subgroups.len()];
        // Process in descending order; every X with C ⊊ X ⊆ B is strictly
        // larger than C, hence already done.
        let mut idxs: Vec<usize> = (0..self.subgroups.len())
            .filter(|&x| self.contains(x, b))
            .collect();
        idxs.sort_by_key(|&x| std::cmp::Reverse(self.subgroups[x].order));
        for &c in &idxs {
            if c == b {
                col[c] = Some(BigInt::one());
                continue;
            }
            let mut acc = BigInt::zero();
            for &x in &idxs {
                if x != c && self.contains(c, x) {
                    acc += col[x].as_ref().expect("larger subgroup done first");
                }
            }
            col[c] = Some(-acc);
        }
        col
    }
}

/// Enumerate all subgroups of `group` via HNF candidates, canonically sorted
/// by (order, flattened basis matrix).
///
/// `max_work` caps both the group order and the number of HNF candidates
/// considered; exceeding it is a resource error, reported before any heavy
/// work starts.
pub fn enumerate_subgroups(group: &FinAbPGroup, max_work: u64) -> Result<SubgroupTable> {
    let order = group.order();
    if order > max_work as u128 {
        return Err(Error::resource(format!(
            "group order {order} exceeds work bound {max_work}"
        )));
    }
    let n = group.num_factors();
    let p = group.p as i64;

    let mut subgroups: Vec<Subgroup> = Vec::new();
    if n == 0 {
        subgroups.push(Subgroup {
            hnf: vec![],
            elems: vec![0],
            order: 1,
            snf: vec![],
        });
    } else {
        // Count candidates first: for a diagonal (p^{k_0},..,p^{k_{n-1}})
        // the free entries are the strictly-upper ones, entry (i,j) ranging
        // over [0, p^{k_j}), so column j contributes p^{k_j * j} choices.
        let mut total: u128 = 0;
        let mut diag_exponents = vec![0u32; n];
        loop {
            let mut count: u128 = 1;
            for (j, &k) in diag_exponents.iter().enumerate() {
                count = count.saturating_mul((p as u128).saturating_pow(k * j as u32));
            }
            total = total.saturating_add(count);
            if !next_exponent_vector(&mut diag_exponents, group.ranks()) {
                break;
            }
        }
        if total > max_work as u128 {
            return Err(Error::resource(format!(
                "subgroup candidate count {total} exceeds work bound {max_work}"
            )));
        }

        let lattice_gens: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut e = vec![0i64; n];
                e[i] = group.modulus(i);
                e
            })
            .collect();
        let elements = group.elements();

        let mut diag_exponents = vec![0u32; n];
        loop {
            let diag: Vec<i64> = diag_exponents.iter().map(|&k| p.pow(k)).collect();
            let mut free_positions: Vec<(usize, usize)> = Vec::new();
            for j in 0..n {
                for i in 0..j {
                    if diag[j] > 1 {
                        free_positions.push((i, j));
                    }
                }
            }
            let mut choice = vec![0i64; free_positions.len()];
            loop {
                let mut mat: Vec<Vec<i64>> = (0..n).map(|i| {
                    let mut row = vec![0i64; n];
                    row[i] = diag[i];
                    row
                }).collect();
                for (pos, &(i, j)) in free_positions.iter().enumerate() {
                    mat[i][j] = choice[pos];
                }
                if lattice_gens.iter().all(|g| intmat::in_rowspan(&mat, g)) {
                    let elems: Vec<usize> = elements
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| intmat::in_rowspan(&mat, v))
                        .map(|(i, _)| i)
                        .collect();
                    let snf = intmat::snf_diag(&mat, n);
                    let sub_order = elems.len() as u64;
                    debug_assert_eq!(
                        sub_order as u128,
                        order / mat.iter().enumerate().map(|(i, r)| r[i] as u128).product::<u128>()
                    );
                    subgroups.push(Subgroup {
                        hnf: mat,
                        elems,
                        order: sub_order,
                        snf,
                    });
                }
                // advance the free-entry odometer
                let mut pos = free_positions.len();
                loop {
                    if pos == 0 {
                        choice.clear();
                        break;
                    }
                    pos -= 1;
                    choice[pos] += 1;
                    if choice[pos] < diag[free_positions[pos].1] {
                        break;
                    }
                    choice[pos] = 0;
                }
                if choice.is_empty() {
                    break;
                }
            }
            if !next_exponent_vector(&mut diag_exponents, group.ranks()) {
                break;
            }
        }
    }

    subgroups.sort_by(|a, b| {
        (a.order, flat(&a.hnf)).cmp(&(b.order, flat(&b.hnf)))
    });

    let mut by_elems = BTreeMap::new();
    for (i, s) in subgroups.iter().enumerate() {
        by_elems.insert(s.elems.clone(), i);
    }
    let m = subgroups.len();
    let mut containment = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            containment[i][j] = sorted_subset(&subgroups[i].elems, &subgroups[j].elems);
        }
    }

    Ok(SubgroupTable {
        group: group.clone(),
        subgroups,
        containment,
        by_elems,
    })
}

fn flat(m: &[Vec<i64>]) -> Vec<i64> {
    m.iter().flatten().copied().collect()
}

fn sorted_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// Advance `exps` through the box `0..=ranks[i]`; false when exhausted.
fn next_exponent_vector(exps: &mut [u32], ranks: &[u32]) -> bool {
    let mut i = exps.len();
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        exps[i] += 1;
        if exps[i] <= ranks[i] {
            return true;
        }
        exps[i] = 0;
    }
}

/// Gaussian binomial `[n; j]_p = Π_{i<j} (p^n − p^i)/(p^j − p^i)`, exact.
///
/// Counts the subgroups of order `p^j` in `(Z/p)^n`. Returns 0 for `j > n`.
pub fn gaussian_binomial(n: u32, j: u32, p: u64) -> BigRat {
    if j > n {
        return BigRat::zero();
    }
    let p = BigInt::from(p);
    let mut acc = BigRat::one();
    for i in 0..j {
        let num = p.pow(n) - p.pow(i);
        let den = p.pow(j) - p.pow(i);
        acc *= BigRat::new(num, den);
    }
    acc
}

/// `Σ_j (−1)^j p^{j(j−1)/2} [n;j]_p`, which is 1 at n = 0 and 0 otherwise.
pub fn gaussian_alternating_sum(n: u32, p: u64) -> BigRat {
    let mut acc = BigRat::zero();
    for j in 0..=n {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let weight = BigInt::from(p).pow(j * j.saturating_sub(1) / 2);
        acc += BigRat::from(BigInt::from(sign) * weight) * gaussian_binomial(n, j, p);
    }
    acc
}

/// An element of the rational Burnside ring `A(G) ⊗ Q`, as a finitely
/// supported combination of transitive classes `[G/S]` indexed by position
/// in a `SubgroupTable`.
#[derive(Clone, Debug, PartialEq)]
pub struct BurnsideElem {
    coeffs: BTreeMap<usize, BigRat>,
}

impl BurnsideElem {
    pub fn zero() -> Self {
        BurnsideElem {
            coeffs: BTreeMap::new(),
        }
    }

    /// The transitive class `[G/S]` for subgroup index `s`.
    pub fn basis(s: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(s, BigRat::one());
        BurnsideElem { coeffs }
    }

    pub fn from_coeffs(pairs: impl IntoIterator<Item = (usize, BigRat)>) -> Self {
        let mut out = BurnsideElem::zero();
        for (k, v) in pairs {
            out.add_term(k, v);
        }
        out
    }

    pub fn coeff(&self, s: usize) -> BigRat {
        self.coeffs.get(&s).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigRat> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, s: usize, c: BigRat) {
        let entry = self.coeffs.entry(s).or_insert_with(BigRat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return BurnsideElem::zero();
        }
        BurnsideElem {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, v * c))
                .collect(),
        }
    }

    /// True if every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }
}

/// Product of two transitive classes by the abelian closed form
/// `[G/S][G/T] = [G : S+T] · [G/(S ∩ T)]`.
///
/// Returns the index multiplier and the subgroup index of `S ∩ T`.
pub fn transitive_mul(table: &SubgroupTable, s: usize, t: usize) -> (u64, usize) {
    let sg = &table.subgroups[s];
    let tg = &table.subgroups[t];
    let elements = table.group.elements();

    // S + T: all pairwise sums (already a subgroup, both factors are).
    let mut sum_set: Vec<usize> = Vec::new();
    for &a in &sg.elems {
        for &b in &tg.elems {
            let v = table.group.add(&elements[a], &elements[b]);
            sum_set.push(table.group.index_of(&v));
        }
    }
    sum_set.sort_unstable();
    sum_set.dedup();
    let sum_idx = table
        .find_by_elems(&sum_set)
        .expect("sum of subgroups is in the table");

    let inter: Vec<usize> = sg
        .elems
        .iter()
        .copied()
        .filter(|x| tg.elems.binary_search(x).is_ok())
        .collect();
    let inter_idx = table
        .find_by_elems(&inter)
        .expect("intersection of subgroups is in the table");

    let index = table.subgroups[sum_idx].index_in(&table.group);
    (index, inter_idx)
}

/// Bilinear Burnside multiplication via `transitive_mul`.
pub fn burnside_mul(
    table: &SubgroupTable,
    x: &BurnsideElem,
    y: &BurnsideElem,
) -> Result<BurnsideElem> {
    for elem in [x, y] {
        for &k in elem.coeffs.keys() {
            if k >= table.len() {
                return Err(Error::usage(
                    "Burnside element does not match the subgroup table",
                ));
            }
        }
    }
    let mut out = BurnsideElem::zero();
    for (&s, cs) in &x.coeffs {
        for (&t, ct) in &y.coeffs {
            let (index, inter) = transitive_mul(table, s, t);
            out.add_term(inter, cs * ct * rat_int(index as i64));
        }
    }
    Ok(out)
}

/// Ground-truth product of `[G/S]` and `[G/T]`: decompose the G-set
/// `(G/S) × (G/T)` into orbits and read off each orbit's stabilizer.
///
/// This is the oracle the closed form is checked against; it never uses the
/// index formula.
pub fn burnside_mul_orbitwise(table: &SubgroupTable, s: usize, t: usize) -> BurnsideElem {
    let g = &table.group;
    let elements = g.elements();
    let order = elements.len();

    let coset_map = |sub: &Subgroup| -> Vec<usize> {
        // elem index -> smallest elem index in its coset of `sub`
        (0..order)
            .map(|i| {
                sub.elems
                    .iter()
                    .map(|&a| g.index_of(&g.add(&elements[i], &elements[a])))
                    .min()
                    .expect("subgroup is nonempty")
            })
            .collect()
    };
    let cs = coset_map(&table.subgroups[s]);
    let ct = coset_map(&table.subgroups[t]);

    let mut seen: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let mut out = BurnsideElem::zero();
    for a in 0..order {
        for b in 0..order {
            let pt = (cs[a], ct[b]);
            if pt != (a, b) || seen.contains_key(&pt) {
                continue;
            }
            // orbit of pt under the diagonal translation action
            let mut orbit: Vec<(usize, usize)> = (0..order)
                .map(|gidx| {
                    let xa = g.index_of(&g.add(&elements[a], &elements[gidx]));
                    let xb = g.index_of(&g.add(&elements[b], &elements[gidx]));
                    (cs[xa], ct[xb])
                })
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for q in &orbit {
                seen.insert(*q, true);
            }
            // honest stabilizer of the representative
            let stab: Vec<usize> = (0..order)
                .filter(|&gidx| {
                    let xa = g.index_of(&g.add(&elements[a], &elements[gidx]));
                    let xb = g.index_of(&g.add(&elements[b], &elements[gidx]));
                    (cs[xa], ct[xb]) == pt
                })
                .collect();
            debug_assert_eq!(orbit.len() * stab.len(), order);
            let stab_idx = table
                .find_by_elems(&stab)
                .expect("stabilizer is in the table");
            out.add_term(stab_idx, BigRat::one());
        }
    }
    out
}

/// Fixed-point count homomorphism `d_A`: linear extension of
/// `d_A([G/B]) = [G:B]` if `A ⊆ B`, else 0.
pub fn fixed_points(table: &SubgroupTable, x: &BurnsideElem, a: usize) -> BigRat {
    let mut acc = BigRat::zero();
    for (&b, c) in &x.coeffs {
        if table.contains(a, b) {
            acc += c * rat_int(table.subgroups[b].index_in(&table.group) as i64);
        }
    }
    acc
}

/// The primitive idempotent `e_A = Σ_{B ⊆ A} μ(B, A)/[G:B] · [G/B]` of the
/// rational Burnside ring.
pub fn idempotent(table: &SubgroupTable, a: usize) -> BurnsideElem {
    let col = table.moebius_column(a);
    let mut out = BurnsideElem::zero();
    for b in 0..table.len() {
        if let Some(mu) = &col[b] {
            let index = table.subgroups[b].index_in(&table.group);
            out.add_term(b, BigRat::from(mu.clone()) / rat_int(index as i64));
        }
    }
    out
}

/// The element `e = p Σ_j (−1)^j p^{j(j−1)/2} e_j` with
/// `e_j = (1/p^j) Σ_{G/S elementary of rank j} [G/S]`, computed from that
/// displayed formula and checked integral.
pub fn element_e(table: &SubgroupTable) -> Result<BurnsideElem> {
    let p = table.group.p();
    let n = table.group.num_factors() as u32;
    let mut acc = BurnsideElem::zero();
    for j in 0..=n {
        let mut ej = BurnsideElem::zero();
        for (idx, s) in table.subgroups.iter().enumerate() {
            if s.elementary_rank(p) == Some(j) {
                ej.add_term(idx, BigRat::one());
            }
        }
        let scale = BigRat::from(BigInt::from(if j % 2 == 0 { 1 } else { -1 }))
            * BigRat::from(BigInt::from(p).pow(j * j.saturating_sub(1) / 2))
            / BigRat::from(BigInt::from(p).pow(j));
        acc = acc.add(&ej.scale(&scale));
    }
    let e = acc.scale(&rat_int(p as i64));
    if !e.is_integral() {
        return Err(Error::internal(
            "integral element e came out non-integral",
        ));
    }
    Ok(e)
}

/// Build the table for `(Z/p^r)^n` and the element `e` in one call.
pub fn element_e_for(n: usize, p: u64, r: u32, max_work: u64) -> Result<(SubgroupTable, BurnsideElem)> {
    let group = FinAbPGroup::new(p, &vec![r; n])?;
    let table = enumerate_subgroups(&group, max_work)?;
    let e = element_e(&table)?;
    Ok((table, e))
}

/// `d(j) p^j + d(j+1) p` with `d(j) = (−1)^j p^{(j−1)(j−2)/2}`; the
/// consecutive-term cancellation that makes certain exponent sums vanish.
pub fn exponent_cancellation(j: u32, p: u64) -> BigRat {
    let d = |j: i64| -> BigRat {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let exp = ((j - 1) * (j - 2) / 2) as u32;
        BigRat::from(BigInt::from(sign) * BigInt::from(p).pow(exp))
    };
    d(j as i64) * BigRat::from(BigInt::from(p).pow(j)) + d(j as i64 + 1) * rat_int(p as i64)
}

// ---------------------------------------------------------------------------
// Restriction of coset classes along a distinguished order-p summand.
//
// Everything below works in (Z/p)^n with the standard dot-product pairing
// between the group and its dual. U and V live on the dual side; the coset
// spaces s(U) = [pre-dual / U^perp] are acted on by the index-p subgroup
// T = annihilator of V, which is identified with (Z/p)^{n-1} through a
// deterministic basis.
// ---------------------------------------------------------------------------

/// Result of restricting the class `s(U)` to the hyperplane `T`.
pub struct Restriction {
    /// 1, or p when `V ⊆ U`.
    pub multiplicity: u64,
    /// `multiplicity · [T/(T ∩ Ū^⊥)]`, over `table_t`.
    pub class: BurnsideElem,
    /// Subgroup index of the stabilizer in `table_t`.
    pub stab_index: usize,
    /// The projected subgroup `Ū`, in complement coordinates.
    pub ubar: Vec<Vec<i64>>,
    /// Subgroup table of `(Z/p)^{n−1}` used to express the class.
    pub table_t: SubgroupTable,
}

/// The splitting `e_1 ⊕ span(e_2, …, e_n)` used by default.
pub fn standard_splitting(n: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let mut v0 = vec![0i64; n];
    v0[0] = 1;
    let w = (1..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        })
        .collect();
    (v0, w)
}

/// Closed form for the restriction: project `U` along `V` onto the chosen
/// complement to get `Ū`, then return
/// `multiplicity · [T/(T ∩ Ū^⊥)]` with multiplicity p exactly when `V ⊆ U`.
pub fn restrict_lambda_set(
    p: u64,
    n: usize,
    u_gens: &[Vec<i64>],
    v0: &[i64],
    w_basis: &[Vec<i64>],
    max_work: u64,
) -> Result<Restriction> {
    let (v0, w) = validate_splitting(p, n, v0, w_basis)?;
    let u_elems = modp_span(p, n, u_gens)?;

    let multiplicity = if u_elems.contains(&v0) { p } else { 1 };

    // Ū: coordinates of the projection of U in the w-basis.
    let mut basis_cols: Vec<Vec<i64>> = vec![v0.clone()];
    basis_cols.extend(w.iter().cloned());
    let mut ubar: Vec<Vec<i64>> = Vec::new();
    for u in &u_elems {
        let coords = modp_solve(p, &basis_cols, u)
            .ok_or_else(|| Error::internal("basis solve failed on a spanned element"))?;
        ubar.push(coords[1..].to_vec());
    }
    ubar.sort_unstable();
    ubar.dedup();

    // Pairing between T (in its chosen basis) and the complement.
    let tb = tbar_basis(p, n, &v0);
    let pairing: Vec<Vec<i64>> = tb
        .iter()
        .map(|t| w.iter().map(|wv| dot_mod(t, wv, p)).collect())
        .collect();

    // Stabilizer T ∩ Ū^⊥ in T-coordinates.
    let m = n - 1;
    let stab: Vec<Vec<i64>> = all_vectors(p, m)
        .into_iter()
        .filter(|xi| {
            ubar.iter().all(|b| {
                let mut acc = 0i64;
                for a in 0..m {
                    for c in 0..m {
                        acc = (acc + xi[a] * pairing[a][c] % p as i64 * b[c]) % p as i64;
                    }
                }
                acc.rem_euclid(p as i64) == 0
            })
        })
        .collect();

    let t_group = FinAbPGroup::elementary(p, m)?;
    let table_t = enumerate_subgroups(&t_group, max_work)?;
    let stab_ids: Vec<usize> = {
        let mut ids: Vec<usize> = stab.iter().map(|v| t_group.index_of(v)).collect();
        ids.sort_unstable();
        ids
    };
    let stab_index = table_t
        .find_by_elems(&stab_ids)
        .ok_or_else(|| Error::internal("stabilizer not found in subgroup table"))?;
    let class = BurnsideElem::basis(stab_index).scale(&rat_int(multiplicity as i64));

    Ok(Restriction {
        multiplicity,
        class,
        stab_index,
        ubar,
        table_t,
    })
}

/// Brute-force restriction: build the coset space `s(U)` pointwise, cut the
/// action down to `T`, decompose into orbits, and express each orbit by its
/// honestly computed stabilizer. Oracle for `restrict_lambda_set`.
pub fn restrict_orbitwise(
    p: u64,
    n: usize,
    u_gens: &[Vec<i64>],
    v0: &[i64],
    w_basis: &[Vec<i64>],
    max_work: u64,
) -> Result<(SubgroupTable, BurnsideElem)> {
    let (v0, _) = validate_splitting(p, n, v0, w_basis)?;
    let u_elems = modp_span(p, n, u_gens)?;

    let all = all_vectors(p, n);
    let idx = |v: &[i64]| -> usize {
        let mut acc = 0usize;
        for &x in v {
            acc = acc * p as usize + x as usize;
        }
        acc
    };
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + y).rem_euclid(p as i64))
            .collect()
    };

    // U^perp on the pre-dual side, then the coset space of it.
    let uperp: Vec<Vec<i64>> = all
        .iter()
        .filter(|x| u_elems.iter().all(|u| dot_mod(x, u, p) == 0))
        .cloned()
        .collect();
    let coset_of: Vec<usize> = all
        .iter()
        .map(|x| {
            uperp
                .iter()
                .map(|y| idx(&add(x, y)))
                .min()
                .expect("annihilator nonempty")
        })
        .collect();

    let tbar: Vec<Vec<i64>> = all
        .iter()
        .filter(|x| dot_mod(x, &v0, p) == 0)
        .cloned()
        .collect();
    let tb = tbar_basis(p, n, &v0);

    let m = n - 1;
    let t_group = FinAbPGroup::elementary(p, m)?;
    let table_t = enumerate_subgroups(&t_group, max_work)?;

    let mut seen = vec![false; all.len()];
    let mut out = BurnsideElem::zero();
    for rep in 0..all.len() {
        if coset_of[rep] != rep || seen[rep] {
            continue;
        }
        let mut orbit: Vec<usize> = tbar
            .iter()
            .map(|t| coset_of[idx(&add(&all[rep], t))])
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &q in &orbit {
            seen[q] = true;
        }
        let stab: Vec<&Vec<i64>> = tbar
            .iter()
            .filter(|t| coset_of[idx(&add(&all[rep], t))] == rep)
            .collect();
        debug_assert_eq!(orbit.len() * stab.len(), tbar.len());
        // express the stabilizer in T-coordinates
        let mut stab_ids: Vec<usize> = stab
            .iter()
            .map(|t| {
                let coords = modp_solve(p, &tb, t)
                    .expect("stabilizer element lies in the hyperplane");
                t_group.index_of(&coords)
            })
            .collect();
        stab_ids.sort_unstable();
        let stab_idx = table_t
            .find_by_elems(&stab_ids)
            .ok_or_else(|| Error::internal("orbit stabilizer not found in table"))?;
        out.add_term(stab_idx, BigRat::one());
    }
    Ok((table_t, out))
}

fn validate_splitting(
    p: u64,
    n: usize,
    v0: &[i64],
    w_basis: &[Vec<i64>],
) -> Result<(Vec<i64>, Vec<Vec<i64>>)> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if n == 0 || v0.len() != n {
        return Err(Error::domain("v0 must be a vector of length n >= 1"));
    }
    let v0: Vec<i64> = v0.iter().map(|x| x.rem_euclid(p as i64)).collect();
    if v0.iter().all(|&x| x == 0) {
        return Err(Error::domain("V must have order p: generator is zero"));
    }
    if w_basis.len() != n - 1 || w_basis.iter().any(|w| w.len() != n) {
        return Err(Error::domain("complement must consist of n-1 vectors"));
    }
    let w: Vec<Vec<i64>> = w_basis
        .iter()
        .map(|wv| wv.iter().map(|x| x.rem_euclid(p as i64)).collect())
        .collect();
    let mut cols = vec![v0.clone()];
    cols.extend(w.iter().cloned());
    if modp_rank(p, &cols) != n {
        return Err(Error::domain(
            "v0 and the complement do not form a basis (not a splitting)",
        ));
    }
    Ok((v0, w))
}

/// All vectors of `(Z/p)^m` in lexicographic order.
fn all_vectors(p: u64, m: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for v in &out {
            for x in 0..p as i64 {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn dot_mod(a: &[i64], b: &[i64], p: u64) -> i64 {
    a.iter()
        .zip(b)
        .fold(0i64, |acc, (x, y)| (acc + x * y) % p as i64)
        .rem_euclid(p as i64)
}

/// Subgroup of `(Z/p)^n` spanned by the given vectors, as a sorted element
/// list.
fn modp_span(p: u64, n: usize, gens: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    for g in gens {
        if g.len() != n {
            return Err(Error::domain("generator has wrong length"));
        }
    }
    let gens: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| g.iter().map(|x| x.rem_euclid(p as i64)).collect())
        .collect();
    let mut set: Vec<Vec<i64>> = vec![vec![0; n]];
    let mut frontier = set.clone();
    while let Some(v) = frontier.pop() {
        for g in &gens {
            let w: Vec<i64> = v
                .iter()
                .zip(g)
                .map(|(x, y)| (x + y).rem_euclid(p as i64))
                .collect();
            if !set.contains(&w) {
                set.push(w.clone());
                frontier.push(w);
            }
        }
    }
    set.sort_unstable();
    Ok(set)
}

/// Solve `cols · x = target` over `Z/p` (columns given as vectors).
fn modp_solve(p: u64, cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let p = p as i64;
    let n = target.len();
    let m = cols.len();
    // augmented matrix rows
    let mut mat: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = cols.iter().map(|c| c[i].rem_euclid(p)).collect();
            row.push(target[i].rem_euclid(p));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..m {
        if let Some(pr) = (r..n).find(|&i| mat[i][c] % p != 0) {
            mat.swap(r, pr);
            let inv = inv_mod(mat[r][c], p);
            for x in mat[r].iter_mut() {
                *x = (*x * inv).rem_euclid(p);
            }
            for i in 0..n {
                if i != r && mat[i][c] != 0 {
                    let f = mat[i][c];
                    for k in 0..=m {
                        mat[i][k] = (mat[i][k] - f * mat[r][k]).rem_euclid(p);
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    // consistency
    for i in r..n {
        if mat[i][m] % p != 0 {
            return None;
        }
    }
    let mut x = vec![0i64; m];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = mat[row][m];
    }
    Some(x)
}

fn modp_rank(p: u64, cols: &[Vec<i64>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let n = cols[0].len();
    let zero = vec![0i64; n];
    // rank = n - dim ker, but easier: count pivots solving against zero
    let p_i = p as i64;
    let mut mat: Vec<Vec<i64>> = (0..n)
        .map(|i| cols.iter().map(|c| c[i].rem_euclid(p_i)).collect())
        .collect();
    let _ = zero;
    let mut rank = 0;
    let mut row = 0;
    for c in 0..cols.len() {
        if let Some(pr) = (row..n).find(|&i| mat[i][c] % p_i != 0) {
            mat.swap(row, pr);
            let inv = inv_mod(mat[row][c], p_i);
            for x in mat[row].iter_mut() {
                *x = (*x * inv).rem_euclid(p_i);
            }
            for i in 0..n {
                if i != row && mat[i][c] != 0 {
                    let f = mat[i][c];
                    for k in 0..cols.len() {
                        mat[i][k] = (mat[i][k] - f * mat[row][k]).rem_euclid(p_i);
                    }
                }
            }
            rank += 1;
            row += 1;
        }
    }
    rank
}

fn inv_mod(a: i64, p: i64) -> i64 {
    // extended Euclid, p prime
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p, a.rem_euclid(p));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "inverse of a non-unit mod p");
    t.rem_euclid(p)
}

/// Deterministic basis of the hyperplane `v0^⊥` in `(Z/p)^n`: first
/// max-rank set of annihilating vectors in lexicographic order.
fn tbar_basis(p: u64, n: usize, v0: &[i64]) -> Vec<Vec<i64>> {
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for x in all_vectors(p, n) {
        if dot_mod(&x, v0, p) != 0 {
            continue;
        }
        let mut trial = basis.clone();
        trial.push(x.clone());
        if modp_rank(p, &trial) == trial.len() {
            basis.push(x);
        }
        if basis.len() == n - 1 {
            break;
        }
    }
    basis
}
