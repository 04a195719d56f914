//! Logarithmic operations on rings with power-operation structure.
//!
//! The central objects are rings with a Frobenius lift `ψ` (satisfying
//! `ψ(x) = x^p + pθ(x)`) and, at higher height, a family of commuting
//! endomorphisms `ψ_A` indexed by subgroups `A ⊆ (Z/p)^n`. On top of these
//! the module provides:
//!
//! * `k1_log`: the height-one logarithm
//!   `ℓ(x) = Σ_{k≥1} (-1)^k (p^{k-1}/k) (θ(x)/x^p)^k = (1/p) log(x^p/ψ(x))`,
//!   summed until every remaining term's guaranteed valuation clears the
//!   requested precision (or the terms die by nilpotence);
//! * `morava_log`: the height-n analogue built from
//!   `1 + pM(x) = Π_j (Π_{|A|=p^j} ψ_A(x))^{(-1)^j p^{(j-1)(j-2)/2}}`,
//!   together with its Hecke-operator rewriting
//!   `ℓ(x) = Σ_j (-1)^j p^{j(j-1)/2} T_{j,p}(log x)`;
//! * Witt coordinates `Θ_i` against the ghost components `ψ^k(x)`, the
//!   Artin-Hasse exponential, and the exponential `e(α) = Π_i f(θ_i(α))`
//!   inverse to `k1_log`;
//! * the symmetric-function identity `Σ h_i t^i = exp(Σ ψ^k t^k / k)`
//!   relating Adams and symmetric power operations.
//!
//! Everything is exact: series are truncated only where a verified
//! nilpotence or valuation bound justifies it.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::burnside::{enumerate_subgroups, FinAbPGroup, SubgroupTable};
use crate::exact::{is_prime, BigRat};
use crate::ring::{
    series_exp, ComRing, DegreeOverflow, MPolyRing, QuotientRing, Rationals, TruncSeries, Zp,
};
use crate::{Error, Result};

/// Cap for nilpotency-order scans; every quotient ring in this crate has
/// nilpotents of far smaller order.
const SCAN_CAP: usize = 128;

pub type EndoFn<R> = Arc<dyn Fn(&<R as ComRing>::Elem) -> <R as ComRing>::Elem>;

/// A ring together with a Frobenius lift `ψ` and the derived (or supplied)
/// operation `θ` with `ψ(x) = x^p + pθ(x)`.
#[derive(Clone)]
pub struct PsiRing<R: ComRing> {
    ring: R,
    p: u64,
    psi: EndoFn<R>,
    theta: Option<EndoFn<R>>,
}

impl<R: ComRing> PsiRing<R> {
    /// θ is derived from ψ by exact division; the ring must be
    /// p-torsion-free for that to be well defined.
    pub fn new(ring: R, p: u64, psi: EndoFn<R>) -> Result<PsiRing<R>> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        Ok(PsiRing {
            ring,
            p,
            psi,
            theta: None,
        })
    }

    /// Use an explicit θ (for rings where division by p is unavailable).
    pub fn with_theta(ring: R, p: u64, psi: EndoFn<R>, theta: EndoFn<R>) -> Result<PsiRing<R>> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        Ok(PsiRing {
            ring,
            p,
            psi,
            theta: Some(theta),
        })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn psi(&self, x: &R::Elem) -> R::Elem {
        (self.psi)(x)
    }

    /// `θ(x) = (ψ(x) - x^p)/p`.
    pub fn theta(&self, x: &R::Elem) -> Result<R::Elem> {
        if let Some(t) = &self.theta {
            return Ok(t(x));
        }
        let xp = self.ring.pow_u(x, self.p);
        let diff = self.ring.sub(&self.psi(x), &xp);
        self.ring
            .div_exact_int(&diff, &BigInt::from(self.p))
            .map_err(|e| {
                Error::internal(format!(
                    "ψ(x) - x^p not divisible by p, so ψ is not a Frobenius lift: {e}"
                ))
            })
    }

    /// Check the homomorphism property of ψ and the Frobenius congruence
    /// on the given samples (all pairs).
    pub fn validate_on_samples(&self, samples: &[R::Elem]) -> Result<()> {
        let r = &self.ring;
        if self.psi(&r.one()) != r.one() {
            return Err(Error::verification("ψ(1) != 1"));
        }
        for a in samples {
            for b in samples {
                let s = self.psi(&r.add(a, b));
                if s != r.add(&self.psi(a), &self.psi(b)) {
                    return Err(Error::verification("ψ is not additive on samples"));
                }
                let m = self.psi(&r.mul(a, b));
                if m != r.mul(&self.psi(a), &self.psi(b)) {
                    return Err(Error::verification("ψ is not multiplicative on samples"));
                }
            }
            if self.theta(a).is_err() {
                return Err(Error::verification(
                    "ψ(x) - x^p is not divisible by p on samples; not a Frobenius lift",
                ));
            }
        }
        Ok(())
    }
}

/// `Z_p` with `ψ = id` (the canonical Frobenius lift on the p-adics).
pub fn psi_zp_identity(p: u64, precision: u32) -> Result<PsiRing<Zp>> {
    let ring = Zp::new(p, precision);
    PsiRing::new(ring, p, Arc::new(|x| x.clone()))
}

/// `Z_p[t]/(t^m)` with `ψ(t) = t^p`, coefficients fixed.
pub fn psi_zp_poly(p: u64, precision: u32, m: usize) -> Result<PsiRing<QuotientRing<Zp>>> {
    let ring = QuotientRing::monomial(Zp::new(p, precision), m, "t");
    let r = ring.clone();
    let psi: EndoFn<QuotientRing<Zp>> = Arc::new(move |f| {
        let mut out = r.zero();
        for (i, c) in f.iter().enumerate() {
            let k = i * p as usize;
            if k < out.len() {
                out[k] = r.base.add(&out[k], c);
            }
        }
        out
    });
    PsiRing::new(ring, p, psi)
}

/// `Z_p[ε]/ε²` with `ψ(ε) = p·c·ε`.
pub fn psi_square_zero(p: u64, precision: u32, c: i64) -> Result<PsiRing<QuotientRing<Zp>>> {
    let ring = QuotientRing::monomial(Zp::new(p, precision), 2, "e");
    let r = ring.clone();
    let scale = (p as i64) * c;
    let psi: EndoFn<QuotientRing<Zp>> = Arc::new(move |f| {
        vec![f[0].clone(), r.base.mul(&f[1], &r.base.from_i64(scale))]
    });
    PsiRing::new(ring, p, psi)
}

/// `Q[t]/(t^m)` with `ψ(t) = t^p`; used as a torsion-free oracle ring.
pub fn psi_rational_poly(p: u64, m: usize) -> Result<PsiRing<QuotientRing<Rationals>>> {
    let ring = QuotientRing::monomial(Rationals, m, "t");
    let r = ring.clone();
    let psi: EndoFn<QuotientRing<Rationals>> = Arc::new(move |f| {
        let mut out = r.zero();
        for (i, c) in f.iter().enumerate() {
            let k = i * p as usize;
            if k < out.len() {
                out[k] = r.base.add(&out[k], c);
            }
        }
        out
    });
    PsiRing::new(ring, p, psi)
}

/// Last term index whose guaranteed valuation `k - 1 - v_p(k)` may still be
/// below `precision`; all later terms are invisible at that precision.
fn series_term_bound(p: u64, precision: u32) -> u64 {
    let mut k: u64 = 1;
    loop {
        let mut log = 0u32;
        let mut acc = p;
        while acc <= k {
            log += 1;
            acc = acc.saturating_mul(p);
        }
        if (k - 1) as i64 - log as i64 >= precision as i64 {
            return k - 1;
        }
        k += 1;
    }
}

/// `(-1)^k p^{k-1} / k` (height-one series) or `(-1)^{k-1} p^{k-1} / k`
/// (Morava series), as an exact rational. The valuation is `k-1-v_p(k) >= 0`,
/// so the coefficient lands in any p-local ring.
fn log_series_coeff(p: u64, k: u64, morava_sign: bool) -> BigRat {
    let mut c = BigRat::new(BigInt::from(p).pow((k - 1) as u32), BigInt::from(k));
    let negate = if morava_sign { k % 2 == 0 } else { k % 2 == 1 };
    if negate {
        c = -c;
    }
    c
}

/// Sum `Σ_k coeff(k)·u^k`, stopping at nilpotence death or at the
/// precision-derived term bound.
fn sum_log_series<R: ComRing>(
    ring: &R,
    p: u64,
    u: &R::Elem,
    precision: u32,
    morava_sign: bool,
) -> Result<R::Elem> {
    let kmax = match ring.nilpotency_order(u, SCAN_CAP) {
        Some(m) => (m as u64).saturating_sub(1),
        None => series_term_bound(p, precision),
    };
    let mut acc = ring.zero();
    let mut upow = ring.one();
    for k in 1..=kmax {
        upow = ring.mul(&upow, u);
        if ring.is_zero(&upow) {
            break;
        }
        let c = ring.from_ratio(&log_series_coeff(p, k, morava_sign))?;
        acc = ring.add(&acc, &ring.mul(&c, &upow));
    }
    Ok(acc)
}

/// The height-one logarithm `ℓ(x) = Σ_{k≥1} (-1)^k (p^{k-1}/k)(θ(x)/x^p)^k`.
///
/// `precision` bounds the tail: the sum stops once every remaining term has
/// guaranteed valuation at least `precision` (immediately, in nilpotent
/// rings, once the powers of `θ(x)/x^p` vanish).
pub fn k1_log<R: ComRing>(pr: &PsiRing<R>, x: &R::Elem, precision: u32) -> Result<R::Elem> {
    let ring = pr.ring();
    let xp = ring.pow_u(x, pr.p());
    let xp_inv = ring
        .invert(&xp)
        .map_err(|e| Error::domain(format!("k1_log requires a unit argument: {e}")))?;
    let u = ring.mul(&pr.theta(x)?, &xp_inv);
    sum_log_series(ring, pr.p(), &u, precision, false)
}

/// `log(x) = Σ_{k≥1} (-1)^{k-1} (x-1)^k / k` for `x - 1` nilpotent; an
/// exact finite sum in any Q-algebra.
pub fn rational_log<R: ComRing>(ring: &R, x: &R::Elem) -> Result<R::Elem> {
    let z = ring.sub(x, &ring.one());
    let ord = ring
        .nilpotency_order(&z, SCAN_CAP)
        .ok_or_else(|| Error::domain("rational_log requires x - 1 nilpotent"))?;
    let mut acc = ring.zero();
    let mut zpow = ring.one();
    for k in 1..ord as u64 {
        zpow = ring.mul(&zpow, &z);
        let mut c = BigRat::new(BigInt::one(), BigInt::from(k));
        if k % 2 == 0 {
            c = -c;
        }
        acc = ring.add(&acc, &ring.mul(&ring.from_ratio(&c)?, &zpow));
    }
    Ok(acc)
}

/// A ring with commuting endomorphisms `ψ_A`, one per subgroup of
/// `(Z/p)^n`, with `ψ_0 = id`.
#[derive(Clone)]
pub struct PowerOpRing<R: ComRing> {
    ring: R,
    p: u64,
    n: u32,
    table: SubgroupTable,
    psis: Vec<EndoFn<R>>,
}

impl<R: ComRing> PowerOpRing<R> {
    /// `psis` is indexed like the subgroup table of `(Z/p)^n` (ascending
    /// order, trivial subgroup first); slot 0 must be the identity.
    pub fn new(ring: R, p: u64, n: u32, psis: Vec<EndoFn<R>>) -> Result<PowerOpRing<R>> {
        let group = FinAbPGroup::elementary(p, n as usize)?;
        let table = enumerate_subgroups(&group, crate::burnside::DEFAULT_MAX_WORK)?;
        if psis.len() != table.len() {
            return Err(Error::usage(format!(
                "(Z/{p})^{n} has {} subgroups but {} endomorphisms were supplied",
                table.len(),
                psis.len()
            )));
        }
        Ok(PowerOpRing {
            ring,
            p,
            n,
            table,
            psis,
        })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn table(&self) -> &SubgroupTable {
        &self.table
    }

    pub fn psi(&self, subgroup: usize, x: &R::Elem) -> Result<R::Elem> {
        if subgroup >= self.psis.len() {
            return Err(Error::usage(format!("no subgroup with index {subgroup}")));
        }
        Ok((self.psis[subgroup])(x))
    }

    /// ψ_0 = id, homomorphism property, and pairwise commutation, on all
    /// sample pairs.
    pub fn validate_on_samples(&self, samples: &[R::Elem]) -> Result<()> {
        let r = &self.ring;
        for a in samples {
            if self.psi(self.table.trivial_index(), a)? != *a {
                return Err(Error::verification("ψ for the trivial subgroup is not the identity"));
            }
        }
        for idx in 0..self.psis.len() {
            if self.psi(idx, &r.one())? != r.one() {
                return Err(Error::verification(format!("ψ_{idx}(1) != 1")));
            }
            for a in samples {
                for b in samples {
                    if self.psi(idx, &r.add(a, b))? != r.add(&self.psi(idx, a)?, &self.psi(idx, b)?)
                    {
                        return Err(Error::verification(format!("ψ_{idx} is not additive")));
                    }
                    if self.psi(idx, &r.mul(a, b))? != r.mul(&self.psi(idx, a)?, &self.psi(idx, b)?)
                    {
                        return Err(Error::verification(format!("ψ_{idx} is not multiplicative")));
                    }
                }
            }
            for jdx in idx + 1..self.psis.len() {
                for a in samples {
                    let ij = self.psi(idx, &self.psi(jdx, a)?)?;
                    let ji = self.psi(jdx, &self.psi(idx, a)?)?;
                    if ij != ji {
                        return Err(Error::verification(format!(
                            "ψ_{idx} and ψ_{jdx} do not commute"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn subgroup_rank(&self, idx: usize) -> u32 {
        let mut o = self.table.subgroups[idx].order;
        let mut j = 0;
        while o > 1 {
            o /= self.p;
            j += 1;
        }
        j
    }

    /// `M(x)` with `1 + pM(x) = Π_{j=0}^n (Π_{|A|=p^j} ψ_A(x))^{s_j}`,
    /// `s_j = (-1)^j p^{(j-1)(j-2)/2}`.
    pub fn morava_m(&self, x: &R::Elem) -> Result<R::Elem> {
        let r = &self.ring;
        let mut prod = r.one();
        for j in 0..=self.n {
            let mut inner = r.one();
            for idx in 0..self.psis.len() {
                if self.subgroup_rank(idx) == j {
                    inner = r.mul(&inner, &self.psi(idx, x)?);
                }
            }
            let e = ((j as i64 - 1) * (j as i64 - 2) / 2) as u32;
            let mut piece = r.pow_u(&inner, (self.p).pow(e));
            if j % 2 == 1 {
                piece = r.invert(&piece).map_err(|e| {
                    Error::domain(format!("ψ-product is not invertible: {e}"))
                })?;
            }
            prod = r.mul(&prod, &piece);
        }
        r.div_exact_int(&r.sub(&prod, &r.one()), &BigInt::from(self.p))
            .map_err(|e| {
                Error::domain(format!(
                    "the ψ-product is not congruent to 1 mod p; cannot form M: {e}"
                ))
            })
    }

    /// `ℓ(x) = Σ_{k≥1} (-1)^{k-1} (p^{k-1}/k) M(x)^k = (1/p) log(1 + pM(x))`.
    pub fn morava_log(&self, x: &R::Elem, precision: u32) -> Result<R::Elem> {
        let m = self.morava_m(x)?;
        sum_log_series(&self.ring, self.p, &m, precision, true)
    }

    /// Compare `morava_log` with its Hecke rewriting
    /// `Σ_j (-1)^j p^{j(j-1)/2} (1/p^j) Σ_{|A|=p^j} ψ_A(log x)`;
    /// requires a Q-algebra and `x - 1` nilpotent, so both sides are exact.
    pub fn hecke_form_check(&self, x: &R::Elem) -> Result<HeckeFormReport<R>> {
        let r = &self.ring;
        let lg = rational_log(r, x)?;
        let morava = self.morava_log(x, 1)?;
        let mut hecke = r.zero();
        for j in 0..=self.n {
            let mut sum = r.zero();
            for idx in 0..self.psis.len() {
                if self.subgroup_rank(idx) == j {
                    sum = r.add(&sum, &self.psi(idx, &lg)?);
                }
            }
            // (-1)^j p^{j(j-1)/2} / p^j
            let mut scalar = BigRat::new(
                BigInt::from(self.p).pow(j * (j.max(1) - 1) / 2),
                BigInt::from(self.p).pow(j),
            );
            if j % 2 == 1 {
                scalar = -scalar;
            }
            hecke = r.add(&hecke, &r.mul(&r.from_ratio(&scalar)?, &sum));
        }
        let matches = r.is_zero(&r.sub(&morava, &hecke));
        Ok(HeckeFormReport {
            morava,
            hecke,
            matches,
        })
    }
}

/// Both sides of the Hecke rewriting of the Morava logarithm.
pub struct HeckeFormReport<R: ComRing> {
    pub morava: R::Elem,
    pub hecke: R::Elem,
    pub matches: bool,
}

/// Substitution family on `B[ε]/(ε^m)`: `ψ_A(ε) = c_A·ε`, with `c` indexed
/// like the subgroup table and `c[trivial] = 1`.
pub fn epsilon_family<B>(
    ring: &QuotientRing<B>,
    p: u64,
    n: u32,
    scales: &[B::Elem],
) -> Result<PowerOpRing<QuotientRing<B>>>
where
    B: ComRing + 'static,
    B::Elem: 'static,
{
    if !ring.is_monomial_modulus() {
        return Err(Error::usage(
            "ε-substitution endomorphisms need a monomial modulus",
        ));
    }
    let group = FinAbPGroup::elementary(p, n as usize)?;
    let table = enumerate_subgroups(&group, crate::burnside::DEFAULT_MAX_WORK)?;
    if scales.len() != table.len() {
        return Err(Error::usage(format!(
            "expected {} scale factors, got {}",
            table.len(),
            scales.len()
        )));
    }
    if scales[table.trivial_index()] != ring.base.one() {
        return Err(Error::domain(
            "the trivial subgroup must act by the identity (scale 1)",
        ));
    }
    let mut psis: Vec<EndoFn<QuotientRing<B>>> = Vec::with_capacity(scales.len());
    for c in scales {
        let r = ring.clone();
        let c = c.clone();
        psis.push(Arc::new(move |f: &Vec<B::Elem>| {
            let mut out = Vec::with_capacity(f.len());
            let mut pw = r.base.one();
            for (i, coeff) in f.iter().enumerate() {
                if i > 0 {
                    pw = r.base.mul(&pw, &c);
                }
                out.push(r.base.mul(coeff, &pw));
            }
            out
        }));
    }
    PowerOpRing::new(ring.clone(), p, n, psis)
}

/// Witt components `Θ_0, ..., Θ_{m-1}` at a prime.
#[derive(Clone, Debug)]
pub struct WittVector<R: ComRing> {
    pub p: u64,
    pub components: Vec<R::Elem>,
}

impl<R: ComRing> WittVector<R> {
    pub fn new(p: u64, components: Vec<R::Elem>) -> WittVector<R> {
        WittVector { p, components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Ghost components `W_k = Σ_{i+j=k} p^i Θ_i^{p^j}`.
pub fn ghost_from_witt<R: ComRing>(ring: &R, w: &WittVector<R>) -> Vec<R::Elem> {
    let p = w.p;
    (0..w.len())
        .map(|k| {
            let mut acc = ring.zero();
            for i in 0..=k {
                let pi = ring.from_bigint(&BigInt::from(p).pow(i as u32));
                let pw = ring.pow_u(&w.components[i], (p as u64).pow((k - i) as u32));
                acc = ring.add(&acc, &ring.mul(&pi, &pw));
            }
            acc
        })
        .collect()
}

/// Recover Witt components from ghosts:
/// `Θ_k = (W_k - Σ_{i<k} p^i Θ_i^{p^{k-i}}) / p^k`, each division exact.
pub fn witt_from_ghost<R: ComRing>(ring: &R, p: u64, ghosts: &[R::Elem]) -> Result<WittVector<R>> {
    let mut comps: Vec<R::Elem> = Vec::with_capacity(ghosts.len());
    for (k, wk) in ghosts.iter().enumerate() {
        let mut rem = wk.clone();
        for (i, th) in comps.iter().enumerate() {
            let pi = ring.from_bigint(&BigInt::from(p).pow(i as u32));
            let pw = ring.pow_u(th, (p as u64).pow((k - i) as u32));
            rem = ring.sub(&rem, &ring.mul(&pi, &pw));
        }
        let th = ring
            .div_exact_int(&rem, &BigInt::from(p).pow(k as u32))
            .map_err(|e| {
                Error::domain(format!(
                    "ghost component {k} is not recoverable: division by p^{k} fails ({e})"
                ))
            })?;
        comps.push(th);
    }
    Ok(WittVector::new(p, comps))
}

/// `θ_0(x), ..., θ_{m-1}(x)`: the Witt coordinates of the ghost sequence
/// `(x, ψ(x), ψ²(x), ...)`. `θ_0 = x` and `θ_1 = θ(x)`; a division failure
/// flags a ψ that is not a Frobenius lift.
pub fn theta_tower<R: ComRing>(pr: &PsiRing<R>, x: &R::Elem, m: usize) -> Result<Vec<R::Elem>> {
    let mut ghosts = Vec::with_capacity(m);
    let mut cur = x.clone();
    for _ in 0..m {
        ghosts.push(cur.clone());
        cur = pr.psi(&cur);
    }
    Ok(witt_from_ghost(pr.ring(), pr.p(), &ghosts)?.components)
}

/// The Artin-Hasse exponential `f(T) = exp(Σ_{j≥0} T^{p^j}/p^j)` to degree
/// `d`, over the rationals.
pub fn artin_hasse(p: u64, d: usize) -> Result<TruncSeries<Rationals>> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if d < 1 {
        return Err(Error::usage("degree must be >= 1"));
    }
    let q = Rationals;
    let mut s = TruncSeries::zero(&q, d + 1);
    let mut power = 1u128;
    let mut j = 0u32;
    while power <= d as u128 {
        s.coeffs[power as usize] = BigRat::new(BigInt::one(), BigInt::from(p).pow(j));
        j += 1;
        power = power.saturating_mul(p as u128);
    }
    series_exp(&q, &s)
}

/// Termination evidence for `k1_exp`: the ghost chain `ψ^k(α)` must vanish
/// within `tower_len` steps, and every tower component must be nilpotent of
/// order at most `nilpotency_cap`.
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceWitness {
    pub tower_len: usize,
    pub nilpotency_cap: usize,
}

impl Default for ConvergenceWitness {
    fn default() -> Self {
        ConvergenceWitness {
            tower_len: 16,
            nilpotency_cap: SCAN_CAP,
        }
    }
}

/// The exponential `e(α) = Π_i f(θ_i(α))` (f the Artin-Hasse series),
/// inverse to `k1_log`.
///
/// The witness is verified, not assumed: the ghost chain must die inside
/// the bound (after which it stays zero, since ψ(0) = 0), and the tower is
/// extended to a length L with `p^{L-i}` at least the nilpotency order of
/// every surviving component θ_i. Past that point every later component is
/// forced to vanish by the Witt recursion, so the product
/// `Π_{i<L} f(θ_i(α))` is the whole thing, each factor a finite sum.
pub fn k1_exp<R: ComRing>(
    pr: &PsiRing<R>,
    alpha: &R::Elem,
    witness: ConvergenceWitness,
) -> Result<R::Elem> {
    let ring = pr.ring();
    let p = pr.p();
    if ring.is_zero(alpha) {
        return Ok(ring.one());
    }
    // ghost chain, up to its first zero
    let mut ghosts = Vec::new();
    let mut cur = alpha.clone();
    let mut died = false;
    for _ in 0..=witness.tower_len {
        if ring.is_zero(&cur) {
            died = true;
            break;
        }
        ghosts.push(cur.clone());
        cur = pr.psi(&cur);
    }
    if !died {
        return Err(Error::domain(
            "convergence witness fails: ψ^k(α) does not vanish within the bound",
        ));
    }
    let j0 = ghosts.len();
    // grow the tower until the closure condition p^{L-i} >= order(θ_i) holds
    let mut l = j0;
    let tower = loop {
        if l > witness.tower_len {
            return Err(Error::domain(
                "convergence witness fails: the θ-tower does not close within the bound",
            ));
        }
        let mut padded = ghosts.clone();
        padded.resize(l, ring.zero());
        let tower = theta_tower_from_ghosts(ring, p, &padded)?;
        let mut closed = true;
        for (i, th) in tower.iter().enumerate() {
            if ring.is_zero(th) {
                continue;
            }
            let ni = ring.nilpotency_order(th, witness.nilpotency_cap).ok_or_else(|| {
                Error::domain(
                    "convergence witness fails: a θ-tower component is not nilpotent \
                     within the stated cap",
                )
            })?;
            if (ni as u128) > (p as u128).pow((l - i) as u32) {
                closed = false;
                break;
            }
        }
        if closed {
            break tower;
        }
        l += 1;
    };
    // assemble the product of Artin-Hasse factors
    let mut max_order = 1usize;
    let mut orders = Vec::with_capacity(tower.len());
    for th in &tower {
        let o = if ring.is_zero(th) {
            1
        } else {
            ring.nilpotency_order(th, witness.nilpotency_cap)
                .expect("checked above")
        };
        max_order = max_order.max(o);
        orders.push(o);
    }
    let f = artin_hasse(p, max_order.max(2) - 1)?;
    let mut e = ring.one();
    for (th, &o) in tower.iter().zip(&orders) {
        if ring.is_zero(th) {
            continue;
        }
        let mut factor = ring.zero();
        let mut pw = ring.one();
        for k in 0..o {
            if k > 0 {
                pw = ring.mul(&pw, th);
            }
            factor = ring.add(&factor, &ring.mul(&ring.from_ratio(&f.coeffs[k])?, &pw));
        }
        e = ring.mul(&e, &factor);
    }
    Ok(e)
}

fn theta_tower_from_ghosts<R: ComRing>(
    ring: &R,
    p: u64,
    ghosts: &[R::Elem],
) -> Result<Vec<R::Elem>> {
    Ok(witt_from_ghost(ring, p, ghosts)?.components)
}

/// Per-degree outcome of the symmetric-function comparison.
#[derive(Clone, Debug)]
pub struct AdamsSymmetricReport {
    pub nvars: usize,
    pub degree: usize,
    pub per_degree_match: Vec<bool>,
    pub pass: bool,
}

/// Verify `Σ_{i} h_i t^i = exp(Σ_{k≥1} p_k t^k / k)` in `m` variables to
/// degree `d`: the left side enumerates complete homogeneous symmetric
/// polynomials directly, the right expands the exponential of weighted
/// power sums.
pub fn adams_to_symmetric(m: usize, d: usize) -> Result<AdamsSymmetricReport> {
    if m == 0 {
        return Err(Error::usage("need at least one variable"));
    }
    if d > m {
        return Err(Error::domain(format!(
            "degree {d} exceeds the variable count {m}; the comparison is only \
             faithful for degree <= m"
        )));
    }
    let ring = MPolyRing::new(Rationals, m, d.max(1), DegreeOverflow::Exact);
    // Σ p_k t^k / k
    let mut s = TruncSeries::zero(&ring, d + 1);
    for k in 1..=d {
        let mut pk = ring.zero();
        for i in 0..m {
            pk = ring.add(&pk, &ring.pow_u(&ring.var(i), k as u64));
        }
        let inv_k = ring.from_ratio(&BigRat::new(BigInt::one(), BigInt::from(k as u64)))?;
        s.coeffs[k] = ring.mul(&pk, &inv_k);
    }
    let rhs = series_exp(&ring, &s)?;
    let mut per_degree_match = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let h = complete_homogeneous(&ring, m, k);
        per_degree_match.push(h == rhs.coeffs[k]);
    }
    let pass = per_degree_match.iter().all(|&b| b);
    Ok(AdamsSymmetricReport {
        nvars: m,
        degree: d,
        per_degree_match,
        pass,
    })
}

/// Sum of all distinct monomials of total degree `k` in `m` variables.
fn complete_homogeneous(
    ring: &MPolyRing<Rationals>,
    m: usize,
    k: usize,
) -> <MPolyRing<Rationals> as ComRing>::Elem {
    let mut acc = ring.zero();
    let mut exps = vec![0u16; m];
    fn rec(
        ring: &MPolyRing<Rationals>,
        acc: &mut <MPolyRing<Rationals> as ComRing>::Elem,
        exps: &mut Vec<u16>,
        pos: usize,
        left: usize,
    ) {
        if pos + 1 == exps.len() {
            exps[pos] = left as u16;
            let mut mono = ring.one();
            for (i, &e) in exps.iter().enumerate() {
                mono = ring.mul(&mono, &ring.pow_u(&ring.var(i), e as u64));
            }
            *acc = ring.add(acc, &mono);
            return;
        }
        for v in 0..=left {
            exps[pos] = v as u16;
            rec(ring, acc, exps, pos + 1, left - v);
        }
    }
    if m == 1 {
        return ring.pow_u(&ring.var(0), k as u64);
    }
    rec(ring, &mut acc, &mut exps, 0, k);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::exact::{padic_log, padic_val, rat, PadicInt, Valuation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_zp_poly(
        rng: &mut ChaCha8Rng,
        ring: &QuotientRing<Zp>,
    ) -> Vec<PadicInt> {
        (0..ring.degree())
            .map(|_| ring.base.from_i64(rng.gen_range(-50i64..=50)))
            .collect()
    }

    #[test]
    fn theta_examples() {
        let pr = psi_zp_identity(2, 24).unwrap();
        let three = pr.ring().from_i64(3);
        assert_eq!(pr.theta(&three).unwrap(), pr.ring().from_i64(-3));
        assert_eq!(pr.theta(&pr.ring().one()).unwrap(), pr.ring().zero());

        let pr = psi_zp_poly(3, 20, 8).unwrap();
        assert_eq!(pr.theta(&pr.ring().one()).unwrap(), pr.ring().zero());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<_> = (0..12).map(|_| random_zp_poly(&mut rng, pr.ring())).collect();
        pr.validate_on_samples(&samples).unwrap();
    }

    #[test]
    fn a_non_homomorphism_psi_is_caught() {
        let ring = Zp::new(2, 16);
        let r = ring.clone();
        let bad: EndoFn<Zp> = Arc::new(move |x| r.add(x, &r.one()));
        let pr = PsiRing::new(ring.clone(), 2, bad).unwrap();
        let samples = vec![ring.from_i64(2), ring.from_i64(5)];
        assert!(pr.validate_on_samples(&samples).is_err());
    }

    #[test]
    fn k1_log_square_zero() {
        for p in [2u64, 3, 5] {
            for c in [0i64, 1, 2] {
                let pr = psi_square_zero(p, 24, c).unwrap();
                let ring = pr.ring().clone();
                let mut x = ring.one();
                x[1] = ring.base.one(); // 1 + ε
                let l = k1_log(&pr, &x, 20).unwrap();
                // ℓ(1+ε) = ε - θ(ε) = (1 - c)ε
                let eps = ring.gen();
                let expected = ring.sub(&eps, &pr.theta(&eps).unwrap());
                assert_eq!(l, expected, "p={p} c={c}");
                assert_eq!(
                    expected,
                    vec![ring.base.zero(), ring.base.from_i64(1 - c)],
                    "p={p} c={c}"
                );
            }
        }
    }

    #[test]
    fn k1_log_matches_the_padic_log_oracle() {
        // ψ = id on Z_2: ℓ(3) = (1/2) log(3) = (1/4) log(9)
        let pr = psi_zp_identity(2, 30).unwrap();
        let l = k1_log(&pr, &pr.ring().from_i64(3), 20).unwrap();
        let nine = PadicInt::new(2, 30, BigInt::from(9));
        let oracle = padic_log(&nine).unwrap().div_exact_by_p_pow(2).unwrap();
        assert_eq!(l.truncate_to(20), oracle.truncate_to(20));
    }

    #[test]
    fn k1_log_is_additive_on_units() {
        for p in [2u64, 3, 5] {
            let pr = psi_zp_identity(p, 28).unwrap();
            let ring = pr.ring().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(41 + p);
            for _ in 0..30 {
                let a = loop {
                    let c = ring.from_i64(rng.gen_range(-2000i64..=2000));
                    if ring.is_unit(&c) {
                        break c;
                    }
                };
                let b = loop {
                    let c = ring.from_i64(rng.gen_range(-2000i64..=2000));
                    if ring.is_unit(&c) {
                        break c;
                    }
                };
                let lhs = k1_log(&pr, &ring.mul(&a, &b), 20).unwrap();
                let rhs = ring.add(&k1_log(&pr, &a, 20).unwrap(), &k1_log(&pr, &b, 20).unwrap());
                assert_eq!(lhs.truncate_to(20), rhs.truncate_to(20), "p={p}");
            }
        }
    }

    #[test]
    fn k1_log_rejects_non_units() {
        let pr = psi_zp_identity(3, 16).unwrap();
        match k1_log(&pr, &pr.ring().from_i64(3), 8) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn rational_log_examples() {
        let q3 = QuotientRing::monomial(Rationals, 3, "e");
        assert!(q3.is_zero(&rational_log(&q3, &q3.one()).unwrap()));
        let mut x = q3.one();
        x[1] = BigRat::one();
        let l = rational_log(&q3, &x).unwrap();
        assert_eq!(l, vec![BigRat::zero(), BigRat::one(), rat(-1, 2)]);

        // additivity on random unipotents in Q[ε]/ε^5
        let q5 = QuotientRing::monomial(Rationals, 5, "e");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let mut a = q5.one();
            let mut b = q5.one();
            for i in 1..5 {
                a[i] = rat(rng.gen_range(-9i64..=9), 1 + rng.gen_range(0i64..4));
                b[i] = rat(rng.gen_range(-9i64..=9), 1 + rng.gen_range(0i64..4));
            }
            let lhs = rational_log(&q5, &q5.mul(&a, &b)).unwrap();
            let rhs = q5.add(&rational_log(&q5, &a).unwrap(), &rational_log(&q5, &b).unwrap());
            assert_eq!(lhs, rhs);
        }

        // non-nilpotent x - 1
        match rational_log(&q3, &q3.from_i64(2)) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    fn rational_epsilon_ring(m: usize) -> QuotientRing<Rationals> {
        QuotientRing::monomial(Rationals, m, "e")
    }

    #[test]
    fn morava_m_n1_is_the_psi_quotient() {
        let ring = rational_epsilon_ring(4);
        let p = 3u64;
        let scales = vec![BigRat::one(), rat(5, 1)];
        let por = epsilon_family(&ring, p, 1, &scales).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let mut x = ring.one();
            for i in 1..4 {
                x[i] = rat(rng.gen_range(-6i64..=6), 1 + rng.gen_range(0i64..3));
            }
            let m = por.morava_m(&x).unwrap();
            // 1 + pM = x^p / ψ(x)
            let lhs = ring.add(&ring.one(), &ring.mul(&ring.from_i64(p as i64), &m));
            let quo = ring.mul(
                &ring.pow_u(&x, p),
                &ring.invert(&por.psi(1, &x).unwrap()).unwrap(),
            );
            assert_eq!(lhs, quo);
        }
        assert!(ring.is_zero(&por.morava_m(&ring.one()).unwrap()));
    }

    #[test]
    fn morava_m_linearizes_in_a_square_zero_ring() {
        // n = 2, p = 2: M(1+ε) = ((Σ_j s_j σ_j)/p)·ε with s_j = (-1)^j p^{(j-1)(j-2)/2}
        let ring = rational_epsilon_ring(2);
        let p = 2u64;
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            // subgroup table of (Z/2)^2: trivial, three Z/2's, full
            let mut scales = vec![BigRat::one()];
            for _ in 0..4 {
                scales.push(rat(rng.gen_range(-9i64..=9), 1));
            }
            let por = epsilon_family(&ring, p, 2, &scales).unwrap();
            let mut x = ring.one();
            x[1] = BigRat::one();
            let m = por.morava_m(&x).unwrap();
            let sigma1: BigRat = scales[1].clone() + &scales[2] + &scales[3];
            let sigma2 = scales[4].clone();
            // s_0 = p, s_1 = -1, s_2 = +1
            let coeff = (BigRat::from(BigInt::from(p)) - sigma1 + sigma2)
                / BigRat::from(BigInt::from(p));
            assert_eq!(m, vec![BigRat::zero(), coeff]);
        }
    }

    #[test]
    fn morava_log_n1_reduces_to_k1_log() {
        for p in [2u64, 3] {
            for c in [0i64, 2, 7] {
                let pr = psi_square_zero(p, 24, c).unwrap();
                let ring = pr.ring().clone();
                // same ψ as a rank-one power-operation family
                let scales = vec![ring.base.one(), ring.base.from_i64(p as i64 * c)];
                let por = epsilon_family(&ring, p, 1, &scales).unwrap();
                let mut x = ring.one();
                x[1] = ring.base.one();
                let via_k1 = k1_log(&pr, &x, 20).unwrap();
                let via_morava = por.morava_log(&x, 20).unwrap();
                assert_eq!(via_k1, via_morava, "p={p} c={c}");
            }
        }
    }

    #[test]
    fn morava_log_is_additive() {
        let ring = rational_epsilon_ring(4);
        let p = 2u64;
        let scales = vec![
            BigRat::one(),
            rat(3, 1),
            rat(-2, 1),
            rat(7, 1),
            rat(4, 1),
        ];
        let por = epsilon_family(&ring, p, 2, &scales).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..15 {
            let mut x = ring.one();
            let mut y = ring.one();
            for i in 1..4 {
                x[i] = rat(rng.gen_range(-5i64..=5), 1 + rng.gen_range(0i64..3));
                y[i] = rat(rng.gen_range(-5i64..=5), 1 + rng.gen_range(0i64..3));
            }
            let lhs = por.morava_log(&ring.mul(&x, &y), 1).unwrap();
            let rhs = ring.add(&por.morava_log(&x, 1).unwrap(), &por.morava_log(&y, 1).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn power_op_validation() {
        let ring = rational_epsilon_ring(3);
        let scales = vec![BigRat::one(), rat(4, 1)];
        let por = epsilon_family(&ring, 2, 1, &scales).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<_> = (0..8)
            .map(|_| {
                let mut v = ring.zero();
                for i in 0..3 {
                    v[i] = rat(rng.gen_range(-5i64..=5), 1);
                }
                v
            })
            .collect();
        por.validate_on_samples(&samples).unwrap();
        // trivial slot must be the identity
        let bad = vec![rat(2, 1), rat(4, 1)];
        assert!(epsilon_family(&ring, 2, 1, &bad).is_err());
    }

    #[test]
    fn hecke_form_in_the_square_zero_case() {
        // n = 1, Q[ε]/ε²: both sides are ε - (1/p)ψ(ε)
        for p in [2u64, 3] {
            let ring = rational_epsilon_ring(2);
            let c = rat(7, 1);
            let scales = vec![BigRat::one(), c.clone()];
            let por = epsilon_family(&ring, p, 1, &scales).unwrap();
            let mut x = ring.one();
            x[1] = BigRat::one();
            let rep = por.hecke_form_check(&x).unwrap();
            assert!(rep.matches, "p={p}");
            let expected = vec![
                BigRat::zero(),
                BigRat::one() - c / BigRat::from(BigInt::from(p)),
            ];
            assert_eq!(rep.morava, expected, "p={p}");
        }
    }

    #[test]
    fn hecke_form_on_random_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for p in [2u64, 3] {
            for n in [1u32, 2] {
                let ring = rational_epsilon_ring(4);
                let group = FinAbPGroup::elementary(p, n as usize).unwrap();
                let table =
                    enumerate_subgroups(&group, crate::burnside::DEFAULT_MAX_WORK).unwrap();
                for _ in 0..8 {
                    let mut scales = vec![BigRat::one()];
                    for _ in 1..table.len() {
                        scales.push(rat(rng.gen_range(-9i64..=9), 1));
                    }
                    let por = epsilon_family(&ring, p, n, &scales).unwrap();
                    let mut x = ring.one();
                    for i in 1..4 {
                        x[i] = rat(rng.gen_range(-6i64..=6), 1 + rng.gen_range(0i64..3));
                    }
                    let rep = por.hecke_form_check(&x).unwrap();
                    assert!(rep.matches, "p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn hecke_form_symbolically_at_rank_one() {
        // coefficients in Q[a, c]: x = 1 + aε, ψ(ε) = cε
        let base = MPolyRing::new(Rationals, 2, 8, DegreeOverflow::Truncate);
        let ring = QuotientRing::monomial(base.clone(), 2, "e");
        let p = 2u64;
        let a = base.var(0);
        let c = base.var(1);
        let scales = vec![base.one(), c.clone()];
        let por = epsilon_family(&ring, p, 1, &scales).unwrap();
        let x = ring.from_coeffs(&[base.one(), a.clone()]);
        let rep = por.hecke_form_check(&x).unwrap();
        assert!(rep.matches);
        // both sides are (a - ac/p)·ε as polynomials
        let ac = base.mul(&a, &c);
        let expected_coeff = base.sub(
            &a,
            &base.div_exact_int(&ac, &BigInt::from(p)).unwrap(),
        );
        assert_eq!(rep.morava, vec![base.zero(), expected_coeff]);
    }

    #[test]
    fn witt_ghost_examples_and_roundtrip() {
        // Θ = (x, 0, 0) has ghosts x^{p^k}
        let q = Rationals;
        let w = WittVector::new(3, vec![rat(2, 1), BigRat::zero(), BigRat::zero()]);
        let g = ghost_from_witt(&q, &w);
        assert_eq!(g, vec![rat(2, 1), rat(8, 1), rat(2, 1).pow(9)]);

        // constant ghosts (3,3): Θ_1 = (3 - 9)/2 = -3, matching θ(3)
        let w = witt_from_ghost(&q, 2, &[rat(3, 1), rat(3, 1)]).unwrap();
        assert_eq!(w.components, vec![rat(3, 1), rat(-3, 1)]);

        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for p in [2u64, 3] {
            for _ in 0..20 {
                let comps: Vec<BigRat> =
                    (0..4).map(|_| rat(rng.gen_range(-20i64..=20), 1)).collect();
                let w = WittVector::new(p, comps.clone());
                let g = ghost_from_witt(&q, &w);
                let back = witt_from_ghost(&q, p, &g).unwrap();
                assert_eq!(back.components, comps, "p={p}");
            }
        }
    }

    #[test]
    fn witt_recovery_rejects_bad_ghosts() {
        // W_1 = 2 with W_0 = 0 would need Θ_1 = 2/3 in Z
        let zp = Zp::new(3, 10);
        match witt_from_ghost(&zp, 3, &[zp.zero(), zp.from_i64(2)]) {
            Err(Error::Domain(msg)) => assert!(msg.contains("ghost component 1")),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn theta_tower_low_components() {
        let pr = psi_zp_poly(2, 24, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..30 {
            let x = random_zp_poly(&mut rng, pr.ring());
            let tower = theta_tower(&pr, &x, 3).unwrap();
            assert_eq!(tower[0], x);
            assert_eq!(tower[1], pr.theta(&x).unwrap());
        }
    }

    #[test]
    fn theta_tower_is_integral_in_the_frobenius_polynomial_ring() {
        let pr = psi_zp_poly(2, 24, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..30 {
            let x = random_zp_poly(&mut rng, pr.ring());
            // the recursion succeeding IS the integrality statement
            let tower = theta_tower(&pr, &x, 4).unwrap();
            assert_eq!(tower.len(), 4);
        }
    }

    #[test]
    fn artin_hasse_small_coefficients() {
        for p in [2u64, 3, 5] {
            let f = artin_hasse(p, 6).unwrap();
            assert_eq!(f.coeffs[0], BigRat::one());
            assert_eq!(f.coeffs[1], BigRat::one());
        }
        let f = artin_hasse(2, 6).unwrap();
        assert_eq!(f.coeffs[2], BigRat::one());
        assert_eq!(f.coeffs[3], rat(2, 3));
    }

    #[test]
    fn artin_hasse_is_p_integral() {
        for p in [2u64, 3, 5] {
            let f = artin_hasse(p, 50).unwrap();
            for (k, c) in f.coeffs.iter().enumerate() {
                match padic_val(c, p) {
                    Valuation::Infinite => {}
                    Valuation::Finite(v) => {
                        assert!(v >= 0, "p={p}: coefficient of T^{k} has valuation {v}")
                    }
                }
            }
        }
    }

    #[test]
    fn artin_hasse_log_recovers_the_exponent_sum() {
        let f = artin_hasse(3, 30).unwrap();
        let lg = crate::ring::series_log(&Rationals, &f).unwrap();
        for (k, c) in lg.coeffs.iter().enumerate() {
            let expected = match k {
                1 => BigRat::one(),
                3 => rat(1, 3),
                9 => rat(1, 9),
                27 => rat(1, 27),
                _ => BigRat::zero(),
            };
            assert_eq!(*c, expected, "k={k}");
        }
    }

    #[test]
    fn k1_exp_unit_cases() {
        let pr = psi_square_zero(3, 16, 0).unwrap();
        let ring = pr.ring().clone();
        assert_eq!(k1_exp(&pr, &ring.zero(), ConvergenceWitness::default()).unwrap(), ring.one());
        // e(ε) = 1 + ε, and the log comes back
        let eps = ring.gen();
        let e = k1_exp(&pr, &eps, ConvergenceWitness::default()).unwrap();
        let mut expected = ring.one();
        expected[1] = ring.base.one();
        assert_eq!(e, expected);
        assert_eq!(k1_log(&pr, &e, 12).unwrap(), eps);
    }

    fn coeff_valuation_at_least(ring: &QuotientRing<Zp>, x: &Vec<PadicInt>, v: i64) -> bool {
        x.iter().all(|c| match c.truncate_to(v as u32).valuation() {
            Valuation::Infinite => true,
            Valuation::Finite(w) => w >= v,
        }) && ring.degree() > 0
    }

    #[test]
    fn k1_exp_round_trip_in_the_frobenius_polynomial_ring() {
        let pr = psi_zp_poly(2, 24, 8).unwrap();
        let ring = pr.ring().clone();
        let alpha = {
            let mut a = ring.zero();
            a[1] = ring.base.from_i64(2); // 2t
            a
        };
        // the tower is (2t, -t^2, -4t^4, 0, ...)
        let tower = theta_tower(&pr, &alpha, 4).unwrap();
        assert_eq!(tower[0], alpha);
        let mut t2 = ring.zero();
        t2[2] = ring.base.from_i64(-1);
        assert_eq!(tower[1], t2);
        let mut t4 = ring.zero();
        t4[4] = ring.base.from_i64(-4);
        assert_eq!(tower[2], t4);
        assert!(ring.is_zero(&tower[3]));

        let e = k1_exp(&pr, &alpha, ConvergenceWitness::default()).unwrap();

        // oracle: e(α) = exp(Σ_k ψ^k(α)/p^k) in Q[t]/t^8, mapped into Z_2
        let qr = psi_rational_poly(2, 8).unwrap();
        let qring = qr.ring().clone();
        let mut s = qring.zero();
        let mut cur = {
            let mut a = qring.zero();
            a[1] = rat(2, 1);
            a
        };
        let mut k = 0u32;
        while !qring.is_zero(&cur) {
            let scaled = qring
                .div_exact_int(&cur, &BigInt::from(2).pow(k))
                .unwrap();
            s = qring.add(&s, &scaled);
            cur = qr.psi(&cur);
            k += 1;
        }
        // exp of the nilpotent s as a finite sum
        let mut oracle = qring.one();
        let mut pw = qring.one();
        let mut fact = BigRat::one();
        for i in 1..8u64 {
            pw = qring.mul(&pw, &s);
            fact = fact * BigRat::from(BigInt::from(i));
            let term = qring.mul(
                &pw,
                &qring.from_ratio(&(BigRat::one() / fact.clone())).unwrap(),
            );
            oracle = qring.add(&oracle, &term);
        }
        let oracle_in_z2: Vec<PadicInt> = oracle
            .iter()
            .map(|c| PadicInt::from_ratio(2, 24, c).unwrap())
            .collect();
        assert_eq!(e, oracle_in_z2);

        // round trip at precision 2^{-16}
        let back = k1_log(&pr, &e, 16).unwrap();
        let diff = ring.sub(&back, &alpha);
        assert!(
            coeff_valuation_at_least(&ring, &diff, 16),
            "round trip drifted: {diff:?}"
        );
    }

    #[test]
    fn k1_exp_rejects_non_converging_input() {
        let pr = psi_zp_identity(2, 16).unwrap();
        match k1_exp(&pr, &pr.ring().from_i64(3), ConvergenceWitness::default()) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn adams_symmetric_identity() {
        let r = adams_to_symmetric(3, 3).unwrap();
        assert!(r.pass, "per-degree: {:?}", r.per_degree_match);
        let r = adams_to_symmetric(4, 2).unwrap();
        assert!(r.pass);
        let r = adams_to_symmetric(1, 1).unwrap();
        assert!(r.pass);
        match adams_to_symmetric(2, 3) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn adams_symmetric_h2_newton() {
        // h_2 = (p_1^2 + p_2)/2 in 4 variables
        let ring = MPolyRing::new(Rationals, 4, 2, DegreeOverflow::Exact);
        let mut p1 = ring.zero();
        let mut p2 = ring.zero();
        for i in 0..4 {
            p1 = ring.add(&p1, &ring.var(i));
            p2 = ring.add(&p2, &ring.pow_u(&ring.var(i), 2));
        }
        let newton = ring
            .div_exact_int(
                &ring.add(&ring.mul(&p1, &p1), &p2),
                &BigInt::from(2),
            )
            .unwrap();
        assert_eq!(complete_homogeneous(&ring, 4, 2), newton);
    }
}
