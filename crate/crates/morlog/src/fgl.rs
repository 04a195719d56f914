//! One-dimensional commutative formal group laws over an arbitrary
//! coefficient ring, to an explicit total-degree truncation.
//!
//! A law is a 2-variable truncated series `F(x,y)` satisfying the unit,
//! commutativity and associativity axioms; every constructor verifies all
//! three (associativity symbolically, in three polynomial variables). The
//! additive and multiplicative laws are exact polynomials; Honda laws of
//! height n are built from the logarithm `Σ T^{p^{ni}}/p^i` over the
//! rationals and mapped in after an integrality check.
//!
//! On top of the laws the module implements points of finite abelian
//! p-groups mapping into a law ("level structures") and the divisibility
//! criterion: the product `Π_{a ∈ A[p]} (T +_F point(a))` must divide the
//! [p]-series. Division is decided degree by degree when the divisor's
//! lowest coefficient is invertible; otherwise a root-splitting fallback
//! handles nilpotent points, and only ever asserts a *positive* verdict
//! after re-multiplying.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::burnside::FinAbPGroup;
use crate::exact::{is_prime, BigRat};
use crate::ring::{
    series_inverse, series_mul, ComRing, DegreeOverflow, MPolyRing, QuotientRing, Rationals,
    TruncSeries, TruncSeries2,
};
use crate::{Error, Result};

/// Which construction produced a law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FglKind {
    Additive,
    Multiplicative,
    Honda { n: u32 },
    Custom,
}

/// A formal group law to total degree `D`, over a coefficient ring.
///
/// `exact` records that the stored coefficients are the whole law (a
/// polynomial), in which case evaluation needs no nilpotence hypotheses.
#[derive(Clone)]
pub struct FormalGroupLaw<R: ComRing> {
    ring: R,
    p: u64,
    series: TruncSeries2<R>,
    kind: FglKind,
    exact: bool,
}

impl<R: ComRing> std::fmt::Debug for FormalGroupLaw<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FormalGroupLaw {{ p: {}, kind: {:?}, degree: {}, exact: {} }}",
            self.p,
            self.kind,
            self.series.deg() - 1,
            self.exact
        )
    }
}

impl<R: ComRing> FormalGroupLaw<R> {
    /// `F(x,y) = x + y`, exact.
    pub fn additive(ring: R, p: u64, d: usize) -> Result<Self> {
        check_params(p, d)?;
        let mut s = TruncSeries2::zero(&ring, d + 1);
        s.set_coeff(1, 0, ring.one());
        s.set_coeff(0, 1, ring.one());
        let law = FormalGroupLaw {
            ring,
            p,
            series: s,
            kind: FglKind::Additive,
            exact: true,
        };
        law.verify_axioms()?;
        Ok(law)
    }

    /// `F(x,y) = x + y + xy`, exact.
    pub fn multiplicative(ring: R, p: u64, d: usize) -> Result<Self> {
        check_params(p, d)?;
        if d < 2 {
            return Err(Error::usage("multiplicative law needs degree >= 2"));
        }
        let mut s = TruncSeries2::zero(&ring, d + 1);
        s.set_coeff(1, 0, ring.one());
        s.set_coeff(0, 1, ring.one());
        s.set_coeff(1, 1, ring.one());
        let law = FormalGroupLaw {
            ring,
            p,
            series: s,
            kind: FglKind::Multiplicative,
            exact: true,
        };
        law.verify_axioms()?;
        Ok(law)
    }

    /// Height-n Honda law: coefficients of `f^{-1}(f(x) + f(y))` with
    /// `f(T) = Σ_i T^{p^{ni}}/p^i`, computed over the rationals, checked
    /// integral, and mapped into the coefficient ring.
    pub fn honda(ring: R, p: u64, n: u32, d: usize) -> Result<Self> {
        check_params(p, d)?;
        if n == 0 {
            return Err(Error::domain("honda height must be >= 1"));
        }
        let pn = (p as u128).pow(n);
        if (d as u128) < pn + 1 {
            return Err(Error::usage(format!(
                "truncation {d} too small to see height {n}: need >= p^n + 1"
            )));
        }
        let q = Rationals;
        let trunc = d + 1;
        // logarithm
        let mut f = TruncSeries::zero(&q, trunc);
        let mut power = 1u128;
        let mut i = 0u32;
        while power <= d as u128 {
            f.coeffs[power as usize] =
                BigRat::new(BigInt::one(), BigInt::from(p).pow(i));
            i += 1;
            power = power.saturating_mul(pn);
        }
        let exp = crate::ring::series_compositional_inverse(&q, &f)?;
        // f(x) + f(y) in two variables
        let mut fxfy = TruncSeries2::zero(&q, trunc);
        for (k, c) in f.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k == 0 {
                fxfy.set_coeff(0, 0, c.clone());
                continue;
            }
            fxfy.set_coeff(k, 0, c.clone());
            fxfy.set_coeff(0, k, c.clone());
        }
        let law_q = compose_outer(&q, &exp, &fxfy)?;
        // integrality, then transport
        let mut series = TruncSeries2::zero(&ring, trunc);
        for (i, j, c) in law_q.iter_nonzero(&q) {
            if !c.is_integer() {
                return Err(Error::internal(format!(
                    "honda coefficient at ({i},{j}) is not integral: {c}"
                )));
            }
            series.set_coeff(i, j, ring.from_bigint(&c.to_integer()));
        }
        let law = FormalGroupLaw {
            ring,
            p,
            series,
            kind: FglKind::Honda { n },
            exact: false,
        };
        law.verify_axioms()?;
        Ok(law)
    }

    /// Wrap a caller-supplied series, verifying the axioms.
    pub fn custom(ring: R, p: u64, series: TruncSeries2<R>, exact: bool) -> Result<Self> {
        check_params(p, series.deg().saturating_sub(1))?;
        let law = FormalGroupLaw {
            ring,
            p,
            series,
            kind: FglKind::Custom,
            exact,
        };
        law.verify_axioms()?;
        Ok(law)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> &FglKind {
        &self.kind
    }

    /// Maximum total degree carried.
    pub fn degree(&self) -> usize {
        self.series.deg() - 1
    }

    pub fn series(&self) -> &TruncSeries2<R> {
        &self.series
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Unit, commutativity, and associativity checks, all to the carried
    /// degree. Associativity runs symbolically in three variables.
    pub fn verify_axioms(&self) -> Result<()> {
        let d = self.series.deg();
        let r = &self.ring;
        for i in 0..d {
            let cx = self.series.coeff(i, 0);
            let ok_x = if i == 1 {
                *cx == r.one()
            } else {
                r.is_zero(cx)
            };
            let cy = self.series.coeff(0, i);
            let ok_y = if i == 1 {
                *cy == r.one()
            } else {
                r.is_zero(cy)
            };
            if !ok_x || !ok_y {
                return Err(Error::verification(format!(
                    "unit axiom fails at degree {i}"
                )));
            }
        }
        if self.series != self.series.swap_vars() {
            return Err(Error::verification("law is not commutative"));
        }
        // associativity, total degree < d, in MPoly(x, y, z)
        let m = MPolyRing::new(r.clone(), 3, d - 1, DegreeOverflow::Truncate);
        let fm = self.series.map_coeffs(&m, |c| m.constant(c.clone()));
        let x = m.var(0);
        let y = m.var(1);
        let z = m.var(2);
        let xy = fm.eval(&m, &x, &y);
        let lhs = fm.eval(&m, &xy, &z);
        let yz = fm.eval(&m, &y, &z);
        let rhs = fm.eval(&m, &x, &yz);
        if !m.is_zero(&m.sub(&lhs, &rhs)) {
            return Err(Error::verification(
                "law is not associative to its truncation degree",
            ));
        }
        Ok(())
    }

    /// `a +_F b`, guaranteed exact: either the law is a polynomial, or both
    /// arguments are nilpotent with orders small enough that every truncated
    /// term vanishes.
    pub fn formal_add(&self, a: &R::Elem, b: &R::Elem) -> Result<R::Elem> {
        if !self.exact {
            let d = self.degree();
            let cap = d + 2;
            let na = self
                .ring
                .nilpotency_order(a, cap)
                .ok_or_else(|| not_nilpotent_err(cap))?;
            let nb = self
                .ring
                .nilpotency_order(b, cap)
                .ok_or_else(|| not_nilpotent_err(cap))?;
            if na + nb > d + 2 {
                return Err(Error::precision(format!(
                    "substitution exceeds truncation: nilpotency orders {na}+{nb} > degree {d}+2"
                )));
            }
        }
        Ok(self.series.eval(&self.ring, a, b))
    }

    /// The inverse series ι with `F(T, ι(T)) = 0`, solved degree by degree.
    pub fn inverse_series(&self) -> Result<TruncSeries<R>> {
        let d = self.series.deg();
        let fsw = self.series.swap_vars(); // F(y, x); substituting g for x gives F(T, g(T))
        let mut g = TruncSeries::zero(&self.ring, d);
        for m in 1..d {
            let cur = fsw.subst_x(&self.ring, &g)?;
            // the y-derivative of F at the origin is 1, so the T^m
            // coefficient moves one-for-one
            g.coeffs[m] = self.ring.sub(&g.coeffs[m], &cur.coeffs[m]);
        }
        let residue = fsw.subst_x(&self.ring, &g)?;
        if !residue.is_zero(&self.ring) {
            return Err(Error::internal("inverse series failed to close"));
        }
        Ok(g)
    }

    /// `ι_F` applied to a point; the point must be nilpotent below the
    /// truncation for the evaluation to be exact.
    pub fn formal_neg(&self, a: &R::Elem) -> Result<R::Elem> {
        let d = self.degree();
        let na = self
            .ring
            .nilpotency_order(a, d + 2)
            .ok_or_else(|| not_nilpotent_err(d + 2))?;
        if na > d + 1 {
            return Err(Error::precision(
                "nilpotency order exceeds the inverse-series truncation",
            ));
        }
        let inv = self.inverse_series()?;
        Ok(crate::ring::series_eval(&self.ring, &inv, a))
    }

    /// The k-fold formal sum of `T` with itself.
    pub fn mult_by(&self, k: u64) -> Result<TruncSeries<R>> {
        let d = self.series.deg();
        if k == 0 {
            return Ok(TruncSeries::zero(&self.ring, d));
        }
        let mut m = TruncSeries::var(&self.ring, d);
        for _ in 1..k {
            m = self.series.subst_x(&self.ring, &m)?;
        }
        Ok(m)
    }

    /// `[p]_F(T)`.
    pub fn p_series(&self) -> Result<TruncSeries<R>> {
        self.mult_by(self.p)
    }
}

fn check_params(p: u64, d: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if d < 1 {
        return Err(Error::usage("truncation degree must be >= 1"));
    }
    Ok(())
}

fn not_nilpotent_err(cap: usize) -> Error {
    Error::precision(format!(
        "argument is not nilpotent of order <= {cap}; substitution into a \
         truncated law would be inexact"
    ))
}

/// Compose a 1-variable series with a 2-variable one (zero constant term):
/// `outer(inner(x,y))`.
fn compose_outer<R: ComRing>(
    ring: &R,
    outer: &TruncSeries<R>,
    inner: &TruncSeries2<R>,
) -> Result<TruncSeries2<R>> {
    if !ring.is_zero(inner.coeff(0, 0)) {
        return Err(Error::domain(
            "inner series must have zero constant term",
        ));
    }
    let d = inner.deg();
    if outer.trunc() != d {
        return Err(Error::usage("mismatched truncations in composition"));
    }
    let mut acc = TruncSeries2::zero(ring, d);
    for k in (0..d).rev() {
        acc = acc.mul(ring, inner)?;
        let mut c = TruncSeries2::zero(ring, d);
        c.set_coeff(0, 0, outer.coeffs[k].clone());
        acc = acc.add(ring, &c)?;
    }
    Ok(acc)
}

/// A homomorphism from a finite abelian p-group into a formal group law:
/// one ring element per group element, compatible with the group law under
/// formal addition.
pub struct LevelStructureCandidate<R: ComRing> {
    pub law: FormalGroupLaw<R>,
    pub group: FinAbPGroup,
    /// Indexed by `group.elements()` order.
    pub points: Vec<R::Elem>,
}

/// Outcome of the divisibility check.
///
/// When `divides` is true the quotient satisfies
/// `quotient · divisor = [p]_F` to the carried truncation (re-multiplied and
/// checked, never assumed). On a negative verdict `obstruction_degree` is
/// the lowest degree at which division failed, when the division algorithm
/// pinpoints one.
pub struct DivisibilityReport<R: ComRing> {
    pub divides: bool,
    pub quotient: Option<TruncSeries<R>>,
    pub obstruction_degree: Option<usize>,
}

impl<R: ComRing> std::fmt::Debug for LevelStructureCandidate<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LevelStructureCandidate {{ law: {:?}, group: {:?}, points: {:?} }}",
            self.law, self.group, self.points
        )
    }
}

impl<R: ComRing> std::fmt::Debug for DivisibilityReport<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "DivisibilityReport {{ divides: {}, quotient: {:?}, obstruction_degree: {:?} }}",
            self.divides, self.quotient, self.obstruction_degree
        )
    }
}

impl<R: ComRing> LevelStructureCandidate<R> {
    /// Validates the shape: one point per group element, zero at the
    /// identity, and the homomorphism property under formal addition.
    pub fn new(
        law: FormalGroupLaw<R>,
        group: FinAbPGroup,
        points: Vec<R::Elem>,
    ) -> Result<Self> {
        if group.p() != law.prime() {
            return Err(Error::usage("group prime does not match the law"));
        }
        if points.len() as u128 != group.order() {
            return Err(Error::usage(format!(
                "expected {} points, got {}",
                group.order(),
                points.len()
            )));
        }
        let ring = law.ring().clone();
        let elements = group.elements();
        if !ring.is_zero(&points[group.index_of(&group.identity())]) {
            return Err(Error::domain(
                "point at the identity of A must be zero",
            ));
        }
        for a in &elements {
            for b in &elements {
                let lhs = law.formal_add(
                    &points[group.index_of(a)],
                    &points[group.index_of(b)],
                )?;
                let rhs = &points[group.index_of(&group.add(a, b))];
                if lhs != *rhs {
                    return Err(Error::domain(format!(
                        "points do not respect the group law at {a:?} + {b:?}"
                    )));
                }
            }
        }
        Ok(LevelStructureCandidate { law, group, points })
    }

    /// The torsion divisor `Π_{a ∈ A[p]} (T +_F point(a))`.
    ///
    /// For the trivial group this is the empty product 1. For a truncated
    /// (non-polynomial) law, nonzero points would make the top coefficients
    /// of each factor depend on discarded terms, so only zero points are
    /// accepted there.
    pub fn divisor(&self) -> Result<TruncSeries<R>> {
        let ring = self.law.ring().clone();
        let d = self.law.series().deg();
        if self.group.order() == 1 {
            return Ok(TruncSeries::one(&ring, d));
        }
        let torsion = self.group.p_torsion();
        let mut acc = TruncSeries::one(&ring, d);
        for a in &torsion {
            let pt = &self.points[self.group.index_of(a)];
            if !self.law.is_exact() && !ring.is_zero(pt) {
                return Err(Error::precision(
                    "nonzero points on a truncated law make the divisor inexact; \
                     use a polynomial law or zero points",
                ));
            }
            let factor = partial_eval_y(&ring, self.law.series(), pt);
            acc = series_mul(&ring, &acc, &factor)?;
        }
        Ok(acc)
    }

    /// Does the torsion divisor divide `[p]_F`, and with what quotient?
    pub fn check(&self) -> Result<DivisibilityReport<R>> {
        let ring = self.law.ring().clone();
        let d = self.law.degree();
        let torsion_count = if self.group.order() == 1 {
            0
        } else {
            self.group.p_torsion().len()
        };
        if torsion_count > d {
            return Err(Error::usage(format!(
                "truncation {d} cannot hold a divisor of degree {torsion_count}"
            )));
        }
        let divisor = self.divisor()?;
        let p_series = self.law.p_series()?;

        if p_series.is_zero(&ring) {
            // zero is divisible by everything
            return Ok(DivisibilityReport {
                divides: true,
                quotient: Some(TruncSeries::zero(&ring, d + 1)),
                obstruction_degree: None,
            });
        }
        let s = divisor
            .order(&ring)
            .ok_or_else(|| Error::internal("torsion divisor is identically zero"))?;

        if let Ok(lead_inv) = ring.invert(&divisor.coeffs[s]) {
            // Degree-by-degree division: sound in both directions because
            // divisor = T^s * unit.
            for k in 0..s {
                if !ring.is_zero(&p_series.coeffs[k]) {
                    return Ok(DivisibilityReport {
                        divides: false,
                        quotient: None,
                        obstruction_degree: Some(k),
                    });
                }
            }
            let mut q = TruncSeries::zero(&ring, d + 1);
            for k in 0..=(d - s) {
                let mut acc = p_series.coeffs[s + k].clone();
                for i in 1..=k {
                    let vi = &divisor.coeffs[s + i];
                    acc = ring.sub(&acc, &ring.mul(vi, &q.coeffs[k - i]));
                }
                q.coeffs[k] = ring.mul(&lead_inv, &acc);
            }
            let re = series_mul(&ring, &q, &divisor)?;
            if re != p_series {
                return Err(Error::internal("division closed but re-check failed"));
            }
            return Ok(DivisibilityReport {
                divides: true,
                quotient: Some(q),
                obstruction_degree: None,
            });
        }

        // Root-splitting fallback: divide [p]_F and the divisor by each
        // linear factor (T - root) with root = iota(point); both must be
        // exactly divisible. Positive verdicts are re-verified by
        // multiplication; an obstructed division here is reported as a
        // failure at its lowest surviving degree.
        let torsion = self.group.p_torsion();
        let mut roots = Vec::with_capacity(torsion.len());
        for a in &torsion {
            let pt = &self.points[self.group.index_of(a)];
            if ring.nilpotency_order(pt, d + 2).is_none() {
                return Err(Error::domain(
                    "cannot decide divisibility: divisor lead coefficient is not \
                     invertible and points are not nilpotent",
                ));
            }
            roots.push(self.law.formal_neg(pt)?);
        }
        let mut pw = p_series.coeffs.clone();
        for r in &roots {
            match synthetic_divide(&ring, &pw, r) {
                Some(next) => pw = next,
                None => {
                    return Ok(DivisibilityReport {
                        divides: false,
                        quotient: None,
                        obstruction_degree: None,
                    })
                }
            }
        }
        let mut vw = divisor.coeffs.clone();
        for r in &roots {
            vw = synthetic_divide(&ring, &vw, r).ok_or_else(|| {
                Error::verification(
                    "torsion divisor is obstructed against its own roots; \
                     divisibility undecided in this ring",
                )
            })?;
        }
        let unit_part = TruncSeries::from_coeffs(&ring, vw, d + 1);
        let unit_inv = series_inverse(&ring, &unit_part).map_err(|_| {
            Error::verification(
                "residual unit part is not invertible; divisibility undecided",
            )
        })?;
        let q = series_mul(
            &ring,
            &TruncSeries::from_coeffs(&ring, pw, d + 1),
            &unit_inv,
        )?;
        let re = series_mul(&ring, &q, &divisor)?;
        if re == p_series {
            Ok(DivisibilityReport {
                divides: true,
                quotient: Some(q),
                obstruction_degree: None,
            })
        } else {
            Err(Error::verification(
                "root division closed but re-multiplication failed; \
                 divisibility undecided in this ring",
            ))
        }
    }
}

/// Divide a polynomial (coefficient vector) by `T - r`; None if the
/// remainder is nonzero.
fn synthetic_divide<R: ComRing>(
    ring: &R,
    coeffs: &[R::Elem],
    r: &R::Elem,
) -> Option<Vec<R::Elem>> {
    let m = coeffs.len();
    if m == 0 {
        return None;
    }
    let mut q = vec![ring.zero(); m - 1];
    let mut carry = ring.zero();
    for k in (1..m).rev() {
        carry = ring.add(&coeffs[k], &ring.mul(r, &carry));
        q[k - 1] = carry.clone();
    }
    let rem = ring.add(&coeffs[0], &ring.mul(r, &carry));
    if ring.is_zero(&rem) {
        Some(q)
    } else {
        None
    }
}

/// `F(T, c)` as a series in `T`.
fn partial_eval_y<R: ComRing>(
    ring: &R,
    series: &TruncSeries2<R>,
    c: &R::Elem,
) -> TruncSeries<R> {
    let d = series.deg();
    let mut out = TruncSeries::zero(ring, d);
    for i in 0..d {
        let mut row = ring.zero();
        for j in (0..d - i).rev() {
            row = ring.mul(&row, c);
            row = ring.add(&row, series.coeff(i, j));
        }
        out.coeffs[i] = row;
    }
    out
}

/// Over a ring of characteristic p: does `T^{p^r}` divide `[p]_F`?
pub fn admits_trivial_level_structure<R: ComRing>(
    law: &FormalGroupLaw<R>,
    r: u32,
) -> Result<bool> {
    let ring = law.ring();
    if !ring.is_zero(&ring.from_i64(law.prime() as i64)) {
        return Err(Error::domain(
            "coefficient ring is not of characteristic p",
        ));
    }
    let bound = (law.prime() as u128).pow(r);
    if bound > (law.degree() as u128) + 1 {
        return Err(Error::usage(format!(
            "truncation {} too small to decide divisibility by T^(p^{r})",
            law.degree()
        )));
    }
    let ps = law.p_series()?;
    // all coefficients strictly below p^r must vanish
    Ok(ps.coeffs[..bound as usize].iter().all(|c| ring.is_zero(c)))
}

/// `Q[s]/Φ_p(1+s)`: the rationals with a primitive p-th root of unity
/// `ζ = 1 + s` adjoined (for p prime, `Φ_p(1+s) = ((1+s)^p − 1)/s`).
pub fn cyclotomic_shifted_ring(p: u64) -> QuotientRing<Rationals> {
    let mut modulus = Vec::new();
    let mut binom = BigInt::one();
    for i in 0..p {
        // C(p, i+1)
        binom = BigInt::from(p - i) * &binom / BigInt::from(i + 1);
        modulus.push(BigRat::from(binom.clone()));
    }
    QuotientRing::new(Rationals, modulus, "s")
}

/// The canonical full level structure on the multiplicative law: points
/// `ζ^i − 1` indexed by `Z/p`, over `Q(ζ)`.
pub fn cyclotomic_level_candidate(
    p: u64,
    d: usize,
) -> Result<LevelStructureCandidate<QuotientRing<Rationals>>> {
    let ring = cyclotomic_shifted_ring(p);
    let law = FormalGroupLaw::multiplicative(ring.clone(), p, d)?;
    let group = FinAbPGroup::new(p, &[1])?;
    let zeta = ring.add(&ring.one(), &ring.gen());
    let points = (0..p)
        .map(|i| ring.sub(&ring.pow_u(&zeta, i), &ring.one()))
        .collect();
    LevelStructureCandidate::new(law, group, points)
}
