//! Typed entry points behind the CLI subcommands.
//!
//! Each function performs one verifiable computation and returns a
//! `Report`. The CLI binary adds argument parsing and process exit codes
//! on top; the C ABI crate adds a JSON request wrapper. Keeping the
//! computations here means every surface produces identical reports.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::burnside::{
    burnside_mul, enumerate_subgroups, fixed_points, gaussian_alternating_sum,
    gaussian_binomial, element_e_for, BurnsideElem, FinAbPGroup,
};
use crate::exact::{padic_val, rat_int, BigRat, PadicInt, Valuation};
use crate::fgl::{cyclotomic_level_candidate, FormalGroupLaw};
use crate::hecke::HeckeContext;
use crate::logops::{
    artin_hasse, epsilon_family, ghost_from_witt, k1_exp, k1_log, psi_square_zero,
    psi_zp_identity, psi_zp_poly, witt_from_ghost, ConvergenceWitness, PsiRing,
};
use crate::report::Report;
use crate::ring::{ComRing, QuotientRing, Rationals, TruncSeries, Zp};
use crate::selftest;
use crate::{Error, Result};

pub fn pseries(p: u64, law_name: &str, height: u32, degree: Option<usize>) -> Result<Report> {
    let ring = Rationals;
    let d = degree.unwrap_or_else(|| match law_name {
        "honda" => (p as usize).pow(height) + 2,
        _ => 8,
    });
    let law = match law_name {
        "additive" => FormalGroupLaw::additive(ring, p, d)?,
        "multiplicative" => FormalGroupLaw::multiplicative(ring, p, d)?,
        "honda" => FormalGroupLaw::honda(ring, p, height, d)?,
        other => {
            return Err(Error::usage(format!(
                "unknown law {other:?} (expected additive, multiplicative, or honda)"
            )))
        }
    };
    let ps = law.p_series()?;
    let mut rep = Report::new("pseries");
    rep.param("prime", p)
        .param("law", law_name)
        .param("degree", d);
    if law_name == "honda" {
        rep.param("height", height);
    }
    let coeffs: Vec<String> = ps.coeffs.iter().map(|c| format!("{c}")).collect();
    rep.result("p_series", coeffs);
    match law_name {
        "additive" => {
            let ok = ps.coeffs[1] == rat_int(p as i64)
                && ps.coeffs.iter().skip(2).all(|c| *c == rat_int(0));
            rep.check("p-series-shape", ok, "[p](T) = pT for the additive law");
        }
        "multiplicative" => {
            let mut ok = ps.coeffs[1] == rat_int(p as i64);
            for (k, c) in ps.coeffs.iter().enumerate().skip(1) {
                let expect = if k <= p as usize {
                    BigRat::from(binomial(p, k as u64))
                } else {
                    rat_int(0)
                };
                ok &= *c == expect;
            }
            rep.check(
                "p-series-shape",
                ok,
                "[p](T) = (1+T)^p - 1 for the multiplicative law",
            );
        }
        _ => {
            // height detection: v_p = 0 exactly at T^(p^height), positive below
            let ph = (p as usize).pow(height);
            let mut ok = ps.coeffs.len() > ph;
            for (k, c) in ps.coeffs.iter().enumerate().take(ph + 1).skip(1) {
                let v = match padic_val(c, p) {
                    Valuation::Infinite => i64::MAX,
                    Valuation::Finite(v) => v,
                };
                ok &= if k == ph { v == 0 } else { v >= 1 };
            }
            rep.check(
                "p-series-height",
                ok,
                format!("[p](T) is a unit times T^{ph} mod {p}"),
            );
        }
    }
    Ok(rep)
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k.min(n) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    if k > n {
        acc = BigInt::from(0);
    }
    acc
}

pub fn level_check(p: u64, degree: Option<usize>) -> Result<Report> {
    let d = degree.unwrap_or(p as usize + 2);
    let cand = cyclotomic_level_candidate(p, d)?;
    let report = cand.check()?;
    let ring = cand.law.ring().clone();
    let mut rep = Report::new("level-check");
    rep.param("prime", p).param("degree", d);
    let divisor = cand.divisor()?;
    rep.result(
        "divisor",
        divisor
            .coeffs
            .iter()
            .map(|c| ring.elem_string(c))
            .collect::<Vec<_>>(),
    );
    if let Some(q) = &report.quotient {
        rep.result(
            "quotient",
            q.coeffs.iter().map(|c| ring.elem_string(c)).collect::<Vec<_>>(),
        );
    }
    rep.check(
        "cyclotomic-level-divides",
        report.divides,
        format!(
            "product of (T + point) over Z/{p} divides the {p}-series of the multiplicative law"
        ),
    );
    if p % 2 == 1 {
        let one = TruncSeries::one(&ring, cand.law.degree() + 1);
        rep.check(
            "cyclotomic-quotient-is-one",
            report.quotient.as_ref() == Some(&one),
            "the quotient series is the constant 1",
        );
    }
    Ok(rep)
}

pub fn subgroups(p: u64, ranks: &[u32], max_work: u64) -> Result<Report> {
    let g = FinAbPGroup::new(p, ranks)?;
    let t = enumerate_subgroups(&g, max_work)?;
    let mut rep = Report::new("subgroups");
    rep.param("prime", p).param("ranks", format!("{ranks:?}"));
    rep.result("count", t.len() as u64);
    let orders: Vec<u64> = t.subgroups.iter().map(|s| s.order).collect();
    rep.result("orders", orders);
    if ranks.iter().all(|&r| r == 1) {
        let n = ranks.len() as u32;
        let mut ok = true;
        for j in 0..=n {
            let count = t
                .subgroups
                .iter()
                .filter(|s| s.order == p.pow(j))
                .count();
            ok &= rat_int(count as i64) == gaussian_binomial(n, j, p);
        }
        rep.check(
            "subgroup-counts-gaussian",
            ok,
            format!("rank-j subgroup counts of (Z/{p})^{n} match the Gaussian binomials"),
        );
    }
    Ok(rep)
}

pub fn gauss(p: u64, n: u32) -> Result<Report> {
    if !crate::exact::is_prime(p) {
        return Err(Error::usage(format!("{p} is not prime")));
    }
    let mut rep = Report::new("gauss");
    rep.param("prime", p).param("rank", n);
    let row: Vec<String> = (0..=n)
        .map(|j| format!("{}", gaussian_binomial(n, j, p)))
        .collect();
    rep.result("binomials", row);
    let s = gaussian_alternating_sum(n, p);
    rep.result("alternating_sum", format!("{s}"));
    let expect = if n == 0 { BigRat::one() } else { rat_int(0) };
    rep.check(
        "gaussian-alternating-sum",
        s == expect,
        format!("sum_j (-1)^j p^(j(j-1)/2) [{n};j]_{p} = {expect}"),
    );
    Ok(rep)
}

pub fn moebius(p: u64, ranks: &[u32], max_work: u64) -> Result<Report> {
    let g = FinAbPGroup::new(p, ranks)?;
    let t = enumerate_subgroups(&g, max_work)?;
    let mu = t.moebius(t.trivial_index(), t.full_index())?;
    let mut rep = Report::new("moebius");
    rep.param("prime", p).param("ranks", format!("{ranks:?}"));
    rep.result("mu", format!("{mu}"));
    let expect = if ranks.iter().all(|&r| r == 1) {
        let j = ranks.len() as u32;
        BigRat::from(
            BigInt::from(if j % 2 == 0 { 1 } else { -1 })
                * BigInt::from(p).pow(j * j.saturating_sub(1) / 2),
        )
    } else {
        rat_int(0)
    };
    rep.check(
        "moebius-closed-form",
        mu == expect,
        format!("mu(0, G) = {expect} for this group"),
    );
    Ok(rep)
}

pub fn burnside_e(p: u64, n: usize, max_work: u64) -> Result<Report> {
    let (t, e) = element_e_for(n, p, 1, max_work)?;
    let mut rep = Report::new("burnside-e");
    rep.param("prime", p).param("rank", n);
    let coeffs: Vec<String> = (0..t.len()).map(|i| format!("{}", e.coeff(i))).collect();
    rep.result("coefficients", coeffs);
    rep.check("e-integral", e.is_integral(), "all coefficients of e are integers");
    let de = fixed_points(&t, &e, t.full_index());
    rep.check("d-of-e", de == rat_int(p as i64), format!("d(e) = {de}, expected {p}"));
    let e2 = burnside_mul(&t, &e, &e)?;
    rep.check("e-squared", e2 == e.scale(&rat_int(p as i64)), "e^2 = p e");
    let mut all = true;
    for y in 0..t.len() {
        let yb = BurnsideElem::basis(y);
        let ye = burnside_mul(&t, &yb, &e)?;
        let dy = fixed_points(&t, &yb, t.full_index());
        all &= ye == e.scale(&dy);
    }
    rep.check(
        "transitive-multiplication",
        all,
        "y e = d(y) e for every transitive basis element",
    );
    Ok(rep)
}

pub fn hecke_verify(p: u64, n: usize, d: u32, max_work: u64) -> Result<Report> {
    let ctx = HeckeContext::with_max_work(n, p, max_work)?;
    let r = ctx.verify_euler_inverse(d)?;
    let mut rep = Report::new("hecke-verify");
    rep.param("prime", p).param("rank", n).param("degree", d);
    let residual_sizes: Vec<u64> = r.residuals.iter().map(|v| v.len() as u64).collect();
    rep.result("residual_term_counts", residual_sizes);
    rep.check(
        "euler-factor-inversion",
        r.pass,
        match r.first_failure {
            None => format!("operator inverse identity holds to degree {d}"),
            Some(m) => format!("first nonzero residual at degree {m}"),
        },
    );
    Ok(rep)
}

enum BuiltinPsi {
    Zp(PsiRing<Zp>),
    Quot(PsiRing<QuotientRing<Zp>>),
}

fn builtin_psi(
    p: u64,
    ring_name: &str,
    precision: u32,
    scale: i64,
    modulus_degree: usize,
) -> Result<BuiltinPsi> {
    match ring_name {
        "zp" => Ok(BuiltinPsi::Zp(psi_zp_identity(p, precision)?)),
        "eps" => Ok(BuiltinPsi::Quot(psi_square_zero(p, precision, scale)?)),
        "poly" => Ok(BuiltinPsi::Quot(psi_zp_poly(p, precision, modulus_degree)?)),
        other => Err(Error::usage(format!(
            "unknown ring {other:?} (expected zp, eps, or poly)"
        ))),
    }
}

fn quot_elem(ring: &QuotientRing<Zp>, coords: &[i64]) -> Result<Vec<PadicInt>> {
    if coords.len() > ring.degree() {
        return Err(Error::usage(format!(
            "value has {} coordinates but the ring has degree {}",
            coords.len(),
            ring.degree()
        )));
    }
    let mut v = ring.zero();
    for (i, &c) in coords.iter().enumerate() {
        v[i] = ring.base.from_i64(c);
    }
    Ok(v)
}

fn join_i64(coords: &[i64]) -> String {
    coords
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn k1_log_run(
    p: u64,
    ring_name: &str,
    coords: &[i64],
    precision: u32,
    scale: i64,
    modulus_degree: usize,
) -> Result<Report> {
    let mut rep = Report::new("k1-log");
    rep.param("prime", p)
        .param("ring", ring_name)
        .param("value", join_i64(coords))
        .param("precision", precision);
    let work_prec = precision + 8;
    match builtin_psi(p, ring_name, work_prec, scale, modulus_degree)? {
        BuiltinPsi::Zp(pr) => {
            if coords.len() != 1 {
                return Err(Error::usage("the zp ring takes a single integer value"));
            }
            let ring = pr.ring().clone();
            let x = ring.from_i64(coords[0]);
            let l = k1_log(&pr, &x, precision)?;
            rep.result("log", ring.elem_string(&l.truncate_to(precision)));
            if coords[0] == 1 {
                rep.check("log-of-one", ring.is_zero(&l), "k1_log(1) = 0");
            }
            let l2 = k1_log(&pr, &ring.mul(&x, &x), precision)?;
            let twice = ring.add(&l, &l);
            rep.check(
                "additivity-sample",
                l2.truncate_to(precision) == twice.truncate_to(precision),
                "k1_log(x^2) = 2 k1_log(x)",
            );
        }
        BuiltinPsi::Quot(pr) => {
            let ring = pr.ring().clone();
            if ring_name == "eps" {
                rep.param("scale", scale);
            } else {
                rep.param("modulus_degree", modulus_degree);
            }
            let x = quot_elem(&ring, coords)?;
            let l = k1_log(&pr, &x, precision)?;
            rep.result("log", ring.elem_string(&l));
            let x2 = ring.mul(&x, &x);
            let l2 = k1_log(&pr, &x2, precision)?;
            let twice = ring.add(&l, &l);
            rep.check("additivity-sample", l2 == twice, "k1_log(x^2) = 2 k1_log(x)");
        }
    }
    Ok(rep)
}

pub fn k1_exp_run(
    p: u64,
    ring_name: &str,
    coords: &[i64],
    precision: u32,
    scale: i64,
    modulus_degree: usize,
) -> Result<Report> {
    let mut rep = Report::new("k1-exp");
    rep.param("prime", p)
        .param("ring", ring_name)
        .param("value", join_i64(coords))
        .param("precision", precision);
    let work_prec = precision + 8;
    match builtin_psi(p, ring_name, work_prec, scale, modulus_degree)? {
        BuiltinPsi::Zp(_) => Err(Error::usage(
            "k1-exp needs a nilpotent argument; use the eps or poly ring",
        )),
        BuiltinPsi::Quot(pr) => {
            let ring = pr.ring().clone();
            if ring_name == "eps" {
                rep.param("scale", scale);
            } else {
                rep.param("modulus_degree", modulus_degree);
            }
            let alpha = quot_elem(&ring, coords)?;
            let e = k1_exp(&pr, &alpha, ConvergenceWitness::default())?;
            rep.result("exp", ring.elem_string(&e));
            let back = k1_log(&pr, &e, precision)?;
            let diff = ring.sub(&back, &alpha);
            let ok = diff.iter().all(|c| match c.truncate_to(precision).valuation() {
                Valuation::Infinite => true,
                Valuation::Finite(v) => v >= precision as i64,
            });
            rep.check(
                "exp-inverts-log",
                ok,
                format!("k1_log(k1_exp(a)) = a at precision {p}^-{precision}"),
            );
            Ok(rep)
        }
    }
}

pub fn artin_hasse_run(p: u64, d: usize) -> Result<Report> {
    let f = artin_hasse(p, d)?;
    let mut rep = Report::new("artin-hasse");
    rep.param("prime", p).param("degree", d);
    let coeffs: Vec<String> = f.coeffs.iter().map(|c| format!("{c}")).collect();
    rep.result("coefficients", coeffs);
    let integral = f.coeffs.iter().all(|c| match padic_val(c, p) {
        Valuation::Infinite => true,
        Valuation::Finite(v) => v >= 0,
    });
    rep.check(
        "p-integrality",
        integral,
        format!("all coefficients to degree {d} are {p}-integral"),
    );
    if p == 2 && d >= 3 {
        rep.check(
            "cubic-coefficient",
            f.coeffs[3] == BigRat::new(BigInt::from(2), BigInt::from(3)),
            "the T^3 coefficient at p = 2 is 2/3",
        );
    }
    Ok(rep)
}

pub fn witt_run(p: u64, ghost_vals: &[i64]) -> Result<Report> {
    if !crate::exact::is_prime(p) {
        return Err(Error::usage(format!("{p} is not prime")));
    }
    let q = Rationals;
    let gs: Vec<BigRat> = ghost_vals.iter().map(|&v| rat_int(v)).collect();
    let mut rep = Report::new("witt");
    rep.param("prime", p).param("ghosts", join_i64(ghost_vals));
    match witt_from_ghost(&q, p, &gs) {
        Ok(w) => {
            let comps: Vec<String> = w.components.iter().map(|c| format!("{c}")).collect();
            rep.result("components", comps);
            rep.result("integral", w.components.iter().all(|c| c.is_integer()));
            let round = ghost_from_witt(&q, &w);
            rep.check(
                "ghost-round-trip",
                round == gs,
                "W(theta(g)) reproduces the ghost components",
            );
        }
        Err(e) => {
            rep.check("ghost-round-trip", false, format!("not in the image: {e}"));
        }
    }
    Ok(rep)
}

pub fn hecke_form_run(p: u64, n: u32, trials: u32, seed: u64, max_work: u64) -> Result<Report> {
    let ring = QuotientRing::monomial(Rationals, 4, "e");
    let group = FinAbPGroup::elementary(p, n as usize)?;
    let table = enumerate_subgroups(&group, max_work)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    let mut first_failure: Option<u32> = None;
    for trial in 0..trials {
        let mut scales = vec![BigRat::one()];
        for _ in 1..table.len() {
            scales.push(rat_int(rng.gen_range(-9i64..=9)));
        }
        let por = epsilon_family(&ring, p, n, &scales)?;
        let mut x = ring.one();
        for i in 1..4 {
            x[i] = BigRat::new(
                BigInt::from(rng.gen_range(-6i64..=6)),
                BigInt::from(1 + rng.gen_range(0i64..4)),
            );
        }
        let check = por.hecke_form_check(&x)?;
        if !check.matches {
            all = false;
            first_failure.get_or_insert(trial);
        }
    }
    let mut rep = Report::new("hecke-form");
    rep.param("prime", p)
        .param("height", n)
        .param("trials", trials)
        .param("seed", seed);
    rep.check(
        "hecke-form-of-the-log",
        all,
        match first_failure {
            None => format!("{trials} random families matched in Q[e]/e^4"),
            Some(t) => format!("first mismatch at trial {t}"),
        },
    );
    Ok(rep)
}

/// Run the acceptance criteria. `only` limits to one criterion; `verbose`
/// prints a progress line per criterion to stderr.
pub fn selftest_run(only: Option<u32>, verbose: bool) -> Result<Report> {
    let outcomes = match only {
        Some(i) => vec![selftest::run(i)],
        None => selftest::run_all(),
    };
    let mut rep = Report::new("selftest");
    rep.param("criteria", outcomes.len());
    for o in &outcomes {
        if verbose {
            eprintln!(
                "criterion {:02} {} ... {}",
                o.index,
                o.anchor,
                if o.pass { "pass" } else { "FAIL" }
            );
        }
        rep.check(o.anchor, o.pass, format!("criterion {}: {}", o.index, o.detail));
    }
    Ok(rep)
}
