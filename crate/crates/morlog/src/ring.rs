//! Coefficient rings and truncated power series.
//!
//! Rings follow the context-object pattern: a [`ComRing`] value carries the
//! parameters (prime, precision, modulus, ...) and operates on plain element
//! data. This keeps runtime-parameterized rings like `Z_p` to precision `N`
//! or `Q[t]/(t^m)` out of the type system while staying fully generic.
//!
//! Series are dense with caller-supplied truncation; all convolutions are
//! quadratic, which is the right trade at the sizes used here (length <= 64).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{padic_val_int, BigRat, PadicInt};

/// Commutative ring interface. `Elem` is plain data; the ring object holds
/// the context and performs every operation.
pub trait ComRing: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// Multiplicative inverse, when one exists.
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.invert(a).is_ok()
    }

    /// Exact division by an integer; errors when the division is not exact.
    fn div_exact_int(&self, a: &Self::Elem, n: &BigInt) -> Result<Self::Elem> {
        if n.is_zero() {
            return Err(Error::domain("division by zero integer"));
        }
        let inv = self.invert(&self.from_bigint(n))?;
        Ok(self.mul(a, &inv))
    }

    /// Embed a rational, exactly, when the ring can represent it.
    fn from_ratio(&self, q: &BigRat) -> Result<Self::Elem> {
        self.div_exact_int(&self.from_bigint(q.numer()), q.denom())
    }

    fn pow_u(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Smallest `m <= cap` with `a^m = 0`, if any.
    fn nilpotency_order(&self, a: &Self::Elem, cap: usize) -> Option<usize> {
        let mut acc = a.clone();
        for m in 1..=cap {
            if self.is_zero(&acc) {
                return Some(m);
            }
            acc = self.mul(&acc, a);
        }
        None
    }

    fn name(&self) -> String;

    fn elem_string(&self, a: &Self::Elem) -> String;
}

/// The field of arbitrary-precision rationals.
#[derive(Debug, Clone, Default)]
pub struct Rationals;

impl ComRing for Rationals {
    type Elem = BigRat;

    fn zero(&self) -> BigRat {
        BigRat::zero()
    }
    fn one(&self) -> BigRat {
        BigRat::one()
    }
    fn add(&self, a: &BigRat, b: &BigRat) -> BigRat {
        a + b
    }
    fn neg(&self, a: &BigRat) -> BigRat {
        -a
    }
    fn mul(&self, a: &BigRat, b: &BigRat) -> BigRat {
        a * b
    }
    fn from_bigint(&self, n: &BigInt) -> BigRat {
        BigRat::from(n.clone())
    }
    fn invert(&self, a: &BigRat) -> Result<BigRat> {
        if a.is_zero() {
            Err(Error::domain("division by zero in Q"))
        } else {
            Ok(BigRat::one() / a)
        }
    }
    fn from_ratio(&self, q: &BigRat) -> Result<BigRat> {
        Ok(q.clone())
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
    fn elem_string(&self, a: &BigRat) -> String {
        format!("{a}")
    }
}

/// The p-adic integers at fixed precision: residues modulo `p^N`.
#[derive(Debug, Clone)]
pub struct Zp {
    pub p: u64,
    pub precision: u32,
}

impl Zp {
    pub fn new(p: u64, precision: u32) -> Zp {
        Zp { p, precision }
    }
}

impl ComRing for Zp {
    type Elem = PadicInt;

    fn zero(&self) -> PadicInt {
        PadicInt::zero(self.p, self.precision)
    }
    fn one(&self) -> PadicInt {
        PadicInt::one(self.p, self.precision)
    }
    fn add(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        a.add(b)
    }
    fn neg(&self, a: &PadicInt) -> PadicInt {
        a.neg()
    }
    fn mul(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        a.mul(b)
    }
    fn from_bigint(&self, n: &BigInt) -> PadicInt {
        PadicInt::new(self.p, self.precision, n.clone())
    }
    fn is_zero(&self, a: &PadicInt) -> bool {
        a.is_zero()
    }
    fn invert(&self, a: &PadicInt) -> Result<PadicInt> {
        a.invert()
    }
    fn div_exact_int(&self, a: &PadicInt, n: &BigInt) -> Result<PadicInt> {
        if n.is_zero() {
            return Err(Error::domain("division by zero integer"));
        }
        let v = padic_val_int(n, self.p)
            .finite()
            .expect("nonzero integer has finite valuation") as u32;
        let unit = n / BigInt::from(self.p).pow(v);
        let b = a.div_exact_by_p_pow(v)?;
        let unit_inv = PadicInt::new(self.p, b.precision(), unit).invert()?;
        Ok(b.mul(&unit_inv))
    }
    fn name(&self) -> String {
        format!("Z_{} (precision {})", self.p, self.precision)
    }
    fn elem_string(&self, a: &PadicInt) -> String {
        format!("{}", a.lift_signed())
    }
}

/// `base[t] / (modulus)` for a monic modulus polynomial.
///
/// Elements are coefficient vectors of length `deg(modulus)`. Inversion is
/// supported when the modulus is the monomial `t^m` (geometric series
/// against the nilpotent part) or when the base ring is a field
/// (polynomial extended Euclid).
#[derive(Clone)]
pub struct QuotientRing<R: ComRing> {
    pub base: R,
    modulus: Vec<R::Elem>,
    var: String,
}

impl<R: ComRing> QuotientRing<R> {
    /// `modulus` must be monic: its last coefficient is the leading one.
    pub fn new(base: R, modulus: Vec<R::Elem>, var: &str) -> QuotientRing<R> {
        assert!(modulus.len() >= 2, "modulus must have positive degree");
        assert!(
            modulus.last().map(|c| *c == base.one()).unwrap_or(false),
            "modulus must be monic"
        );
        QuotientRing {
            base,
            modulus,
            var: var.to_string(),
        }
    }

    /// `base[t]/(t^m)`.
    pub fn monomial(base: R, m: usize, var: &str) -> QuotientRing<R> {
        assert!(m >= 1);
        let mut modulus = vec![base.zero(); m + 1];
        modulus[m] = base.one();
        QuotientRing::new(base, modulus, var)
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn is_monomial_modulus(&self) -> bool {
        self.modulus[..self.degree()]
            .iter()
            .all(|c| self.base.is_zero(c))
    }

    /// The class of the variable.
    pub fn gen(&self) -> Vec<R::Elem> {
        let mut e = vec![self.base.zero(); self.degree()];
        if self.degree() >= 2 {
            e[1] = self.base.one();
        } else {
            // degree-1 modulus t + c: the class of t is -c
            e[0] = self.base.neg(&self.modulus[0]);
        }
        e
    }

    /// Element from low-to-high coefficients, reduced and padded.
    pub fn from_coeffs(&self, coeffs: &[R::Elem]) -> Vec<R::Elem> {
        self.reduce(coeffs.to_vec())
    }

    fn reduce(&self, mut poly: Vec<R::Elem>) -> Vec<R::Elem> {
        let d = self.degree();
        let mut i = poly.len();
        while i > d {
            i -= 1;
            let c = poly[i].clone();
            if !self.base.is_zero(&c) {
                for k in 0..=d {
                    let t = self.base.mul(&c, &self.modulus[k]);
                    poly[i - d + k] = self.base.sub(&poly[i - d + k], &t);
                }
            }
            poly.truncate(i);
        }
        poly.resize(d, self.base.zero());
        poly
    }
}

impl<R: ComRing> ComRing for QuotientRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Vec<R::Elem> {
        vec![self.base.zero(); self.degree()]
    }
    fn one(&self) -> Vec<R::Elem> {
        let mut e = self.zero();
        e[0] = self.base.one();
        e
    }
    fn add(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        let d = self.degree();
        let mut conv = vec![self.base.zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                conv[i + j] = self.base.add(&conv[i + j], &t);
            }
        }
        self.reduce(conv)
    }
    fn from_bigint(&self, n: &BigInt) -> Vec<R::Elem> {
        let mut e = self.zero();
        e[0] = self.base.from_bigint(n);
        e
    }
    fn is_zero(&self, a: &Vec<R::Elem>) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }

    fn invert(&self, a: &Vec<R::Elem>) -> Result<Vec<R::Elem>> {
        if self.is_monomial_modulus() {
            // a = a0 + n with n nilpotent: geometric series in -n/a0
            let a0inv = self.base.invert(&a[0]).map_err(|_| {
                Error::domain(format!(
                    "cannot invert in {}: constant coefficient is not a unit",
                    self.name()
                ))
            })?;
            let mut nil = a.clone();
            nil[0] = self.base.zero();
            let mut scaled0 = vec![self.base.zero(); self.degree()];
            for (i, c) in nil.iter().enumerate() {
                scaled0[i] = self.base.neg(&self.base.mul(c, &a0inv));
            }
            let mut acc = self.one();
            let mut term = self.one();
            for _ in 1..self.degree() {
                term = self.mul(&term, &scaled0);
                acc = self.add(&acc, &term);
            }
            Ok(acc.iter().map(|c| self.base.mul(c, &a0inv)).collect())
        } else {
            self.invert_xgcd(a)
        }
    }

    fn div_exact_int(&self, a: &Vec<R::Elem>, n: &BigInt) -> Result<Vec<R::Elem>> {
        a.iter().map(|c| self.base.div_exact_int(c, n)).collect()
    }

    fn name(&self) -> String {
        if self.is_monomial_modulus() {
            format!("{}[{}]/({}^{})", self.base.name(), self.var, self.var, self.degree())
        } else {
            format!("{}[{}]/(modulus)", self.base.name(), self.var)
        }
    }

    fn elem_string(&self, a: &Vec<R::Elem>) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if self.base.is_zero(c) {
                continue;
            }
            let cs = self.base.elem_string(c);
            parts.push(match i {
                0 => cs,
                1 => format!("({cs})*{}", self.var),
                _ => format!("({cs})*{}^{i}", self.var),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl<R: ComRing> QuotientRing<R> {
    /// Inverse by polynomial extended Euclid; needs every nonzero leading
    /// coefficient met along the way to be invertible (base is a field).
    fn invert_xgcd(&self, a: &Vec<R::Elem>) -> Result<Vec<R::Elem>> {
        let b = &self.base;
        let trim = |p: &[R::Elem]| {
            let mut v = p.to_vec();
            while v.len() > 1 && b.is_zero(v.last().unwrap()) {
                v.pop();
            }
            if v.is_empty() {
                v.push(b.zero());
            }
            v
        };
        let mut r0 = trim(&self.modulus);
        let mut r1 = trim(a);
        if r1.len() == 1 && b.is_zero(&r1[0]) {
            return Err(Error::domain(format!("cannot invert 0 in {}", self.name())));
        }
        let mut s0 = vec![b.zero()];
        let mut s1 = vec![b.one()];
        while !(r1.len() == 1 && b.is_zero(&r1[0])) {
            // divide r0 by r1
            let mut rem = r0.clone();
            let mut q = vec![b.zero(); rem.len().saturating_sub(r1.len()) + 1];
            let lead_inv = b.invert(r1.last().unwrap()).map_err(|_| {
                Error::domain(format!(
                    "polynomial gcd stuck: leading coefficient not invertible in {}",
                    b.name()
                ))
            })?;
            while rem.len() >= r1.len() && !(rem.len() == 1 && b.is_zero(&rem[0])) {
                let shift = rem.len() - r1.len();
                let c = b.mul(rem.last().unwrap(), &lead_inv);
                q[shift] = b.add(&q[shift], &c);
                for (k, m) in r1.iter().enumerate() {
                    let t = b.mul(&c, m);
                    rem[shift + k] = b.sub(&rem[shift + k], &t);
                }
                debug_assert!(b.is_zero(rem.last().unwrap()));
                rem.pop();
                rem = trim(&rem);
            }
            let rem = trim(&rem);
            // s_next = s0 - q * s1
            let mut qs1 = vec![b.zero(); q.len() + s1.len() - 1];
            for (i, x) in q.iter().enumerate() {
                for (j, y) in s1.iter().enumerate() {
                    let t = b.mul(x, y);
                    qs1[i + j] = b.add(&qs1[i + j], &t);
                }
            }
            let n = s0.len().max(qs1.len());
            let mut s_next = vec![b.zero(); n];
            for (i, c) in s0.iter().enumerate() {
                s_next[i] = c.clone();
            }
            for (i, c) in qs1.iter().enumerate() {
                s_next[i] = b.sub(&s_next[i], c);
            }
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = trim(&s_next);
        }
        // r0 is the gcd; invertible iff it is a unit constant
        if r0.len() != 1 {
            return Err(Error::domain(format!(
                "element shares a nontrivial factor with the modulus of {}",
                self.name()
            )));
        }
        let ginv = b.invert(&r0[0]).map_err(|_| {
            Error::domain(format!("gcd with modulus is a non-unit in {}", self.name()))
        })?;
        let scaled: Vec<R::Elem> = s0.iter().map(|c| b.mul(c, &ginv)).collect();
        Ok(self.reduce(scaled))
    }
}

/// Dense truncated power series in one variable: `coeffs[k]` is the
/// coefficient of `T^k`, and `coeffs.len()` is the truncation order.
#[derive(Clone)]
pub struct TruncSeries<R: ComRing> {
    pub coeffs: Vec<R::Elem>,
}

impl<R: ComRing> PartialEq for TruncSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: ComRing> std::fmt::Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TruncSeries{:?}", self.coeffs)
    }
}

impl<R: ComRing> TruncSeries<R> {
    pub fn zero(ring: &R, trunc: usize) -> Self {
        TruncSeries {
            coeffs: vec![ring.zero(); trunc],
        }
    }

    pub fn one(ring: &R, trunc: usize) -> Self {
        let mut s = Self::zero(ring, trunc);
        s.coeffs[0] = ring.one();
        s
    }

    pub fn var(ring: &R, trunc: usize) -> Self {
        assert!(trunc >= 2, "truncation too small to hold T");
        let mut s = Self::zero(ring, trunc);
        s.coeffs[1] = ring.one();
        s
    }

    pub fn from_coeffs(ring: &R, coeffs: Vec<R::Elem>, trunc: usize) -> Self {
        let mut c = coeffs;
        c.resize(trunc, ring.zero());
        TruncSeries { coeffs: c }
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self, ring: &R) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn order(&self, ring: &R) -> Option<usize> {
        self.coeffs.iter().position(|c| !ring.is_zero(c))
    }

    pub fn truncate_to(&self, ring: &R, trunc: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(trunc, ring.zero());
        TruncSeries { coeffs: c }
    }
}

fn check_same_trunc<R: ComRing>(a: &TruncSeries<R>, b: &TruncSeries<R>) -> Result<()> {
    if a.trunc() != b.trunc() {
        return Err(Error::usage(format!(
            "mismatched series truncations {} and {}",
            a.trunc(),
            b.trunc()
        )));
    }
    Ok(())
}

pub fn series_add<R: ComRing>(
    ring: &R,
    a: &TruncSeries<R>,
    b: &TruncSeries<R>,
) -> Result<TruncSeries<R>> {
    check_same_trunc(a, b)?;
    Ok(TruncSeries {
        coeffs: a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| ring.add(x, y))
            .collect(),
    })
}

pub fn series_neg<R: ComRing>(ring: &R, a: &TruncSeries<R>) -> TruncSeries<R> {
    TruncSeries {
        coeffs: a.coeffs.iter().map(|x| ring.neg(x)).collect(),
    }
}

pub fn series_sub<R: ComRing>(
    ring: &R,
    a: &TruncSeries<R>,
    b: &TruncSeries<R>,
) -> Result<TruncSeries<R>> {
    series_add(ring, a, &series_neg(ring, b))
}

pub fn series_scale<R: ComRing>(ring: &R, c: &R::Elem, a: &TruncSeries<R>) -> TruncSeries<R> {
    TruncSeries {
        coeffs: a.coeffs.iter().map(|x| ring.mul(c, x)).collect(),
    }
}

pub fn series_mul<R: ComRing>(
    ring: &R,
    a: &TruncSeries<R>,
    b: &TruncSeries<R>,
) -> Result<TruncSeries<R>> {
    check_same_trunc(a, b)?;
    let d = a.trunc();
    let mut out = TruncSeries::zero(ring, d);
    for (i, x) in a.coeffs.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if i + j >= d {
                break;
            }
            let t = ring.mul(x, y);
            out.coeffs[i + j] = ring.add(&out.coeffs[i + j], &t);
        }
    }
    Ok(out)
}

/// Multiplicative inverse; the constant term must be a unit.
pub fn series_inverse<R: ComRing>(ring: &R, a: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    let d = a.trunc();
    let c0 = ring.invert(&a.coeffs[0]).map_err(|_| {
        Error::domain("series inverse requires a unit constant term".to_string())
    })?;
    let mut out = TruncSeries::zero(ring, d);
    out.coeffs[0] = c0.clone();
    for k in 1..d {
        // sum_{i=1..k} a_i * out_{k-i} must cancel against a_0 * out_k
        let mut s = ring.zero();
        for i in 1..=k {
            let t = ring.mul(&a.coeffs[i], &out.coeffs[k - i]);
            s = ring.add(&s, &t);
        }
        out.coeffs[k] = ring.neg(&ring.mul(&c0, &s));
    }
    Ok(out)
}

/// Exponential of a series with zero constant term, via `b' = a' b`.
/// Needs exact division by integers up to the truncation.
pub fn series_exp<R: ComRing>(ring: &R, a: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    if !ring.is_zero(&a.coeffs[0]) {
        return Err(Error::domain(
            "series exp requires zero constant term".to_string(),
        ));
    }
    let d = a.trunc();
    let mut out = TruncSeries::zero(ring, d);
    out.coeffs[0] = ring.one();
    for n in 1..d {
        let mut s = ring.zero();
        for k in 1..=n {
            let t = ring.mul(&a.coeffs[k], &out.coeffs[n - k]);
            let t = ring.mul(&ring.from_i64(k as i64), &t);
            s = ring.add(&s, &t);
        }
        out.coeffs[n] = ring.div_exact_int(&s, &BigInt::from(n))?;
    }
    Ok(out)
}

/// Logarithm of a series with constant term 1, via `l' = a'/a` integrated.
pub fn series_log<R: ComRing>(ring: &R, a: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    if a.coeffs[0] != ring.one() {
        return Err(Error::domain(
            "series log requires constant term 1".to_string(),
        ));
    }
    let d = a.trunc();
    let mut out = TruncSeries::zero(ring, d);
    for n in 1..d {
        let mut s = ring.mul(&ring.from_i64(n as i64), &a.coeffs[n]);
        for k in 1..n {
            let t = ring.mul(&out.coeffs[k], &a.coeffs[n - k]);
            let t = ring.mul(&ring.from_i64(k as i64), &t);
            s = ring.sub(&s, &t);
        }
        out.coeffs[n] = ring.div_exact_int(&s, &BigInt::from(n))?;
    }
    Ok(out)
}

/// Composition `f(g)` for `g` with zero constant term.
pub fn series_compose<R: ComRing>(
    ring: &R,
    f: &TruncSeries<R>,
    g: &TruncSeries<R>,
) -> Result<TruncSeries<R>> {
    check_same_trunc(f, g)?;
    if !ring.is_zero(&g.coeffs[0]) {
        return Err(Error::domain(
            "series composition requires inner constant term 0".to_string(),
        ));
    }
    let d = f.trunc();
    // Horner from the top
    let mut out = TruncSeries::zero(ring, d);
    for k in (0..d).rev() {
        out = series_mul(ring, &out, g)?;
        out.coeffs[0] = ring.add(&out.coeffs[0], &f.coeffs[k]);
    }
    Ok(out)
}

/// Compositional inverse of `f = c1*T + ...` with `c1` a unit: the unique
/// `g` with `f(g) = T` to the common truncation.
pub fn series_compositional_inverse<R: ComRing>(
    ring: &R,
    f: &TruncSeries<R>,
) -> Result<TruncSeries<R>> {
    let d = f.trunc();
    if !ring.is_zero(&f.coeffs[0]) {
        return Err(Error::domain(
            "compositional inverse requires zero constant term".to_string(),
        ));
    }
    let c1_inv = ring.invert(&f.coeffs[1]).map_err(|_| {
        Error::domain("compositional inverse requires unit linear coefficient".to_string())
    })?;
    let mut g = TruncSeries::zero(ring, d);
    if d >= 2 {
        g.coeffs[1] = c1_inv.clone();
    }
    for n in 2..d {
        // coefficient of T^n in f(g) with g known below n must vanish
        let fg = series_compose(ring, f, &g)?;
        let err = fg.coeffs[n].clone();
        g.coeffs[n] = ring.neg(&ring.mul(&c1_inv, &err));
    }
    Ok(g)
}

/// Evaluate the truncated series at a ring element by plain summation.
/// Exact iff the dropped tail annihilates `x`; callers check that.
pub fn series_eval<R: ComRing>(ring: &R, f: &TruncSeries<R>, x: &R::Elem) -> R::Elem {
    let mut acc = ring.zero();
    for c in f.coeffs.iter().rev() {
        acc = ring.mul(&acc, x);
        acc = ring.add(&acc, c);
    }
    acc
}

/// Dense truncated series in two variables, truncated by total degree:
/// `coeff(i, j)` with `i + j < deg` is stored; everything else is zero.
#[derive(Clone)]
pub struct TruncSeries2<R: ComRing> {
    deg: usize,
    grid: Vec<R::Elem>, // row-major (deg x deg); entries with i+j >= deg stay zero
}

impl<R: ComRing> PartialEq for TruncSeries2<R> {
    fn eq(&self, other: &Self) -> bool {
        self.deg == other.deg && self.grid == other.grid
    }
}

impl<R: ComRing> std::fmt::Debug for TruncSeries2<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TruncSeries2(deg {}){:?}", self.deg, self.grid)
    }
}

impl<R: ComRing> TruncSeries2<R> {
    pub fn zero(ring: &R, deg: usize) -> Self {
        TruncSeries2 {
            deg,
            grid: vec![ring.zero(); deg * deg],
        }
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn coeff(&self, i: usize, j: usize) -> &R::Elem {
        &self.grid[i * self.deg + j]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, v: R::Elem) {
        assert!(i + j < self.deg, "coefficient outside truncation");
        self.grid[i * self.deg + j] = v;
    }

    pub fn var_x(ring: &R, deg: usize) -> Self {
        let mut s = Self::zero(ring, deg);
        s.set_coeff(1, 0, ring.one());
        s
    }

    pub fn var_y(ring: &R, deg: usize) -> Self {
        let mut s = Self::zero(ring, deg);
        s.set_coeff(0, 1, ring.one());
        s
    }

    pub fn add(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.deg != other.deg {
            return Err(Error::usage("mismatched 2-variable truncations"));
        }
        Ok(TruncSeries2 {
            deg: self.deg,
            grid: self
                .grid
                .iter()
                .zip(&other.grid)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.deg != other.deg {
            return Err(Error::usage("mismatched 2-variable truncations"));
        }
        Ok(TruncSeries2 {
            deg: self.deg,
            grid: self
                .grid
                .iter()
                .zip(&other.grid)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        })
    }

    pub fn mul(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.deg != other.deg {
            return Err(Error::usage("mismatched 2-variable truncations"));
        }
        let d = self.deg;
        let mut out = Self::zero(ring, d);
        for i1 in 0..d {
            for j1 in 0..d - i1 {
                let a = self.coeff(i1, j1);
                if ring.is_zero(a) {
                    continue;
                }
                for i2 in 0..d - i1 - j1 {
                    for j2 in 0..d - i1 - j1 - i2 {
                        let b = other.coeff(i2, j2);
                        if ring.is_zero(b) {
                            continue;
                        }
                        let t = ring.mul(a, b);
                        let cur = out.coeff(i1 + i2, j1 + j2).clone();
                        out.set_coeff(i1 + i2, j1 + j2, ring.add(&cur, &t));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, ring: &R) -> bool {
        self.grid.iter().all(|c| ring.is_zero(c))
    }

    pub fn swap_vars(&self) -> Self {
        let d = self.deg;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d - i {
                out.grid[j * d + i] = self.grid[i * d + j].clone();
            }
        }
        out
    }

    /// Substitute a one-variable series for `x` and the series variable
    /// itself for `y`: returns `F(g(T), T)` truncated at `deg`.
    pub fn subst_x(&self, ring: &R, g: &TruncSeries<R>) -> Result<TruncSeries<R>> {
        if g.trunc() != self.deg {
            return Err(Error::usage(
                "substitution truncation must match 2-variable truncation",
            ));
        }
        if !ring.is_zero(&g.coeffs[0]) {
            return Err(Error::domain(
                "substituted series must have zero constant term",
            ));
        }
        let d = self.deg;
        let mut out = TruncSeries::zero(ring, d);
        // Horner in x: rows are coefficients of x^i, each a series in y = T
        for i in (0..d).rev() {
            out = series_mul(ring, &out, g)?;
            let row = TruncSeries::from_coeffs(
                ring,
                (0..d).map(|j| self.coeff(i, j).clone()).collect(),
                d,
            );
            out = series_add(ring, &out, &row)?;
        }
        Ok(out)
    }

    /// Evaluate at a pair of ring elements by plain summation.
    pub fn eval(&self, ring: &R, x: &R::Elem, y: &R::Elem) -> R::Elem {
        let d = self.deg;
        let mut acc = ring.zero();
        for i in (0..d).rev() {
            acc = ring.mul(&acc, x);
            // row i evaluated at y, Horner
            let mut row = ring.zero();
            for j in (0..d - i).rev() {
                row = ring.mul(&row, y);
                row = ring.add(&row, self.coeff(i, j));
            }
            acc = ring.add(&acc, &row);
        }
        acc
    }

    pub fn map_coeffs<S: ComRing>(
        &self,
        _ring_out: &S,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> TruncSeries2<S> {
        TruncSeries2 {
            deg: self.deg,
            grid: self.grid.iter().map(|c| f(c)).collect(),
        }
    }

    pub fn iter_nonzero<'a>(
        &'a self,
        ring: &'a R,
    ) -> impl Iterator<Item = (usize, usize, &'a R::Elem)> + 'a {
        let d = self.deg;
        (0..d).flat_map(move |i| {
            (0..d - i).filter_map(move |j| {
                let c = self.coeff(i, j);
                if ring.is_zero(c) {
                    None
                } else {
                    Some((i, j, c))
                }
            })
        })
    }
}

/// Multivariate polynomials, dense-by-monomial up to a total-degree cap.
/// `Truncate` drops overflowing products (series semantics); `Exact` panics
/// on overflow, for computations that must stay exact polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeOverflow {
    Truncate,
    Exact,
}

#[derive(Clone)]
pub struct MPolyRing<R: ComRing> {
    pub base: R,
    pub nvars: usize,
    pub max_total_deg: usize,
    pub overflow: DegreeOverflow,
}

pub type MPoly<R> = std::collections::BTreeMap<Vec<u16>, <R as ComRing>::Elem>;

impl<R: ComRing> MPolyRing<R> {
    pub fn new(base: R, nvars: usize, max_total_deg: usize, overflow: DegreeOverflow) -> Self {
        MPolyRing {
            base,
            nvars,
            max_total_deg,
            overflow,
        }
    }

    pub fn var(&self, i: usize) -> MPoly<R> {
        assert!(i < self.nvars);
        let mut exp = vec![0u16; self.nvars];
        exp[i] = 1;
        let mut m = MPoly::<R>::new();
        m.insert(exp, self.base.one());
        m
    }

    pub fn constant(&self, c: R::Elem) -> MPoly<R> {
        let mut m = MPoly::<R>::new();
        if !self.base.is_zero(&c) {
            m.insert(vec![0; self.nvars], c);
        }
        m
    }

    fn insert_term(&self, m: &mut MPoly<R>, exp: Vec<u16>, c: R::Elem) {
        if self.base.is_zero(&c) {
            return;
        }
        let total: u32 = exp.iter().map(|&e| e as u32).sum();
        if total as usize > self.max_total_deg {
            match self.overflow {
                DegreeOverflow::Truncate => return,
                DegreeOverflow::Exact => panic!(
                    "exact multivariate polynomial exceeded degree cap {}",
                    self.max_total_deg
                ),
            }
        }
        match m.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.base.add(e.get(), &c);
                if self.base.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }
}

impl<R: ComRing> ComRing for MPolyRing<R> {
    type Elem = MPoly<R>;

    fn zero(&self) -> MPoly<R> {
        MPoly::<R>::new()
    }
    fn one(&self) -> MPoly<R> {
        self.constant(self.base.one())
    }
    fn add(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        let mut out = a.clone();
        for (exp, c) in b {
            self.insert_term(&mut out, exp.clone(), c.clone());
        }
        out
    }
    fn neg(&self, a: &MPoly<R>) -> MPoly<R> {
        a.iter()
            .map(|(e, c)| (e.clone(), self.base.neg(c)))
            .collect()
    }
    fn mul(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        let mut out = self.zero();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let exp: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = self.base.mul(ca, cb);
                self.insert_term(&mut out, exp, c);
            }
        }
        out
    }
    fn from_bigint(&self, n: &BigInt) -> MPoly<R> {
        self.constant(self.base.from_bigint(n))
    }
    fn is_zero(&self, a: &MPoly<R>) -> bool {
        a.is_empty()
    }
    fn invert(&self, a: &MPoly<R>) -> Result<MPoly<R>> {
        // only unit constants are invertible in a polynomial ring
        if a.len() == 1 {
            if let Some(c) = a.get(&vec![0u16; self.nvars]) {
                return Ok(self.constant(self.base.invert(c)?));
            }
        }
        Err(Error::domain(
            "only unit constants are invertible in a polynomial ring".to_string(),
        ))
    }
    fn div_exact_int(&self, a: &MPoly<R>, n: &BigInt) -> Result<MPoly<R>> {
        a.iter()
            .map(|(e, c)| Ok((e.clone(), self.base.div_exact_int(c, n)?)))
            .collect()
    }
    fn name(&self) -> String {
        format!("{}[x_1..x_{}]", self.base.name(), self.nvars)
    }
    fn elem_string(&self, a: &MPoly<R>) -> String {
        if a.is_empty() {
            return "0".to_string();
        }
        a.iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, k)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    self.base.elem_string(c)
                } else {
                    format!("({})*{}", self.base.elem_string(c), vars.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    fn qs(coeffs: &[i64], trunc: usize) -> TruncSeries<Rationals> {
        TruncSeries::from_coeffs(
            &Rationals,
            coeffs.iter().map(|&c| rat_int(c)).collect(),
            trunc,
        )
    }

    #[test]
    fn mul_matches_known_product() {
        let q = Rationals;
        let a = qs(&[1, 1, 1], 8);
        let b = qs(&[1, -1], 8);
        let prod = series_mul(&q, &a, &b).unwrap();
        assert_eq!(prod, qs(&[1, 0, 0, -1], 8));
    }

    #[test]
    fn mul_rejects_mismatched_truncations() {
        let q = Rationals;
        let a = qs(&[1], 4);
        let b = qs(&[1], 5);
        assert!(series_mul(&q, &a, &b).is_err());
    }

    #[test]
    fn geometric_series_inverse() {
        let q = Rationals;
        let a = qs(&[1, -1], 10);
        let inv = series_inverse(&q, &a).unwrap();
        assert_eq!(inv, qs(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1], 10));
        assert!(series_inverse(&q, &qs(&[0, 1], 10)).is_err());
    }

    #[test]
    fn exp_log_round_trips() {
        let q = Rationals;
        let t = qs(&[0, 1], 12);
        assert_eq!(series_log(&q, &series_exp(&q, &t).unwrap()).unwrap(), t);
        let one_plus_t = qs(&[1, 1], 12);
        assert_eq!(
            series_exp(&q, &series_log(&q, &one_plus_t).unwrap()).unwrap(),
            one_plus_t
        );
        // exp(t) has coefficients 1/k!
        let e = series_exp(&q, &t).unwrap();
        assert_eq!(e.coeffs[4], rat(1, 24));
        assert_eq!(e.coeffs[5], rat(1, 120));
    }

    #[test]
    fn compose_and_reverse() {
        let q = Rationals;
        // f = t + t^2, g its compositional inverse
        let f = qs(&[0, 1, 1], 10);
        let g = series_compositional_inverse(&q, &f).unwrap();
        let t = qs(&[0, 1], 10);
        assert_eq!(series_compose(&q, &f, &g).unwrap(), t);
        assert_eq!(series_compose(&q, &g, &f).unwrap(), t);
        // Catalan numbers with signs show up in g
        assert_eq!(g.coeffs[3], rat_int(2));
        assert_eq!(g.coeffs[4], rat_int(-5));
    }

    #[test]
    fn two_variable_mul() {
        let q = Rationals;
        let x = TruncSeries2::var_x(&q, 6);
        let y = TruncSeries2::var_y(&q, 6);
        let s = x.add(&q, &y).unwrap();
        let sq = s.mul(&q, &s).unwrap();
        assert_eq!(*sq.coeff(2, 0), rat_int(1));
        assert_eq!(*sq.coeff(1, 1), rat_int(2));
        assert_eq!(*sq.coeff(0, 2), rat_int(1));
        assert!(sq.swap_vars() == sq);
    }

    #[test]
    fn two_variable_substitution() {
        let q = Rationals;
        // F = x + y + xy (multiplicative law), substitute x = g(T) = T
        let mut f2 = TruncSeries2::zero(&q, 6);
        f2.set_coeff(1, 0, rat_int(1));
        f2.set_coeff(0, 1, rat_int(1));
        f2.set_coeff(1, 1, rat_int(1));
        let g = qs(&[0, 1], 6);
        let got = f2.subst_x(&q, &g).unwrap();
        // F(T, T) = 2T + T^2
        assert_eq!(got, qs(&[0, 2, 1], 6));
    }

    #[test]
    fn quotient_ring_truncates_powers() {
        let q = QuotientRing::monomial(Rationals, 3, "e");
        let one_plus_e = {
            let mut e = q.one();
            e[1] = rat_int(1);
            e
        };
        let p5 = q.pow_u(&one_plus_e, 5);
        assert_eq!(p5, vec![rat_int(1), rat_int(5), rat_int(10)]);
        assert_eq!(q.nilpotency_order(&q.gen(), 10), Some(3));
    }

    #[test]
    fn quotient_ring_geometric_inverse() {
        let q = QuotientRing::monomial(Rationals, 4, "e");
        let mut a = q.one();
        a[1] = rat_int(1);
        let inv = q.invert(&a).unwrap();
        assert_eq!(inv, vec![rat_int(1), rat_int(-1), rat_int(1), rat_int(-1)]);
        assert_eq!(q.mul(&a, &inv), q.one());
        assert!(q.invert(&q.gen()).is_err());
    }

    #[test]
    fn cyclotomic_quotient_has_root_of_unity() {
        for p in [2u64, 3, 5] {
            let q = crate::fgl::cyclotomic_shifted_ring(p);
            let zeta = q.add(&q.one(), &q.gen());
            assert_eq!(q.pow_u(&zeta, p), q.one(), "zeta^{p} != 1");
            let inv = q.invert(&zeta).unwrap();
            assert_eq!(q.mul(&zeta, &inv), q.one());
            assert_eq!(inv, q.pow_u(&zeta, p - 1));
        }
    }

    #[test]
    fn quotient_over_zp_inverts_units() {
        let zp = Zp::new(2, 12);
        let q = QuotientRing::monomial(zp.clone(), 4, "t");
        let mut a = q.one();
        a[1] = zp.from_i64(3);
        a[3] = zp.from_i64(-5);
        let inv = q.invert(&a).unwrap();
        assert_eq!(q.mul(&a, &inv), q.one());
        // constant term 2 is not a unit in Z_2
        let mut b = q.one();
        b[0] = zp.from_i64(2);
        assert!(q.invert(&b).is_err());
    }

    #[test]
    fn mpoly_arithmetic() {
        let r = MPolyRing::new(Rationals, 2, 8, DegreeOverflow::Exact);
        let x = r.var(0);
        let y = r.var(1);
        let s = r.add(&x, &y);
        let cube = r.pow_u(&s, 3);
        let mut xy2 = vec![0u16; 2];
        xy2[0] = 1;
        xy2[1] = 2;
        assert_eq!(cube.get(&xy2), Some(&rat_int(3)));
        let trunc = MPolyRing::new(Rationals, 2, 2, DegreeOverflow::Truncate);
        let cube_t = trunc.pow_u(&trunc.add(&trunc.var(0), &trunc.var(1)), 3);
        assert!(cube_t.is_empty());
    }

    #[test]
    fn series_over_quotient_coefficients() {
        // series with coefficients in Q[e]/e^2 exercise the generic path
        let q = QuotientRing::monomial(Rationals, 2, "e");
        let mut a = TruncSeries::zero(&q, 6);
        a.coeffs[0] = q.one();
        a.coeffs[1] = q.gen();
        let inv = series_inverse(&q, &a).unwrap();
        let prod = series_mul(&q, &a, &inv).unwrap();
        assert_eq!(prod, TruncSeries::one(&q, 6));
    }

    proptest! {
        #[test]
        fn series_ring_axioms(a in prop::collection::vec(-6i64..6, 6),
                              b in prop::collection::vec(-6i64..6, 6),
                              c in prop::collection::vec(-6i64..6, 6)) {
            let q = Rationals;
            let sa = qs(&a, 6);
            let sb = qs(&b, 6);
            let sc = qs(&c, 6);
            let ab = series_mul(&q, &sa, &sb).unwrap();
            let ba = series_mul(&q, &sb, &sa).unwrap();
            prop_assert_eq!(&ab, &ba);
            let ab_c = series_mul(&q, &ab, &sc).unwrap();
            let a_bc = series_mul(&q, &sa, &series_mul(&q, &sb, &sc).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let dist = series_mul(&q, &sa, &series_add(&q, &sb, &sc).unwrap()).unwrap();
            let dist2 = series_add(&q, &series_mul(&q, &sa, &sb).unwrap(),
                                   &series_mul(&q, &sa, &sc).unwrap()).unwrap();
            prop_assert_eq!(dist, dist2);
        }

        #[test]
        fn inverse_really_inverts(mut a in prop::collection::vec(-6i64..6, 8)) {
            a[0] = 1;
            let q = Rationals;
            let sa = qs(&a, 8);
            let inv = series_inverse(&q, &sa).unwrap();
            prop_assert_eq!(series_mul(&q, &sa, &inv).unwrap(), TruncSeries::one(&q, 8));
        }

        #[test]
        fn exp_log_inverse_pair(a in prop::collection::vec(-4i64..4, 7)) {
            let q = Rationals;
            let mut v: Vec<BigRat> = a.iter().map(|&c| rat(c, 3)).collect();
            v[0] = BigRat::zero();
            let s = TruncSeries::from_coeffs(&q, v, 7);
            let e = series_exp(&q, &s).unwrap();
            prop_assert_eq!(series_log(&q, &e).unwrap(), s);
        }

        #[test]
        fn quotient_ring_axioms(a in prop::collection::vec(-5i64..5, 3),
                                b in prop::collection::vec(-5i64..5, 3),
                                c in prop::collection::vec(-5i64..5, 3)) {
            let q = QuotientRing::monomial(Rationals, 3, "e");
            let ea: Vec<BigRat> = a.iter().map(|&x| rat_int(x)).collect();
            let eb: Vec<BigRat> = b.iter().map(|&x| rat_int(x)).collect();
            let ec: Vec<BigRat> = c.iter().map(|&x| rat_int(x)).collect();
            prop_assert_eq!(q.mul(&ea, &eb), q.mul(&eb, &ea));
            prop_assert_eq!(q.mul(&q.mul(&ea, &eb), &ec), q.mul(&ea, &q.mul(&eb, &ec)));
            prop_assert_eq!(q.mul(&ea, &q.add(&eb, &ec)),
                            q.add(&q.mul(&ea, &eb), &q.mul(&ea, &ec)));
        }
    }
}
