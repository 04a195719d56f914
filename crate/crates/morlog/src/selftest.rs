//! Acceptance criteria as callable runners.
//!
//! Each criterion is an exact, deterministic computation with a fixed
//! random seed where sampling is involved. The CLI `selftest` subcommand
//! and the acceptance test suite both dispatch through `run`, so the two
//! surfaces can never drift apart.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::burnside::{
    burnside_mul, burnside_mul_orbitwise, enumerate_subgroups, exponent_cancellation,
    fixed_points, gaussian_alternating_sum, element_e_for, restrict_lambda_set, restrict_orbitwise,
    standard_splitting, BurnsideElem, FinAbPGroup, DEFAULT_MAX_WORK,
};
use crate::exact::{padic_val, rat_int, BigRat, PadicInt, Valuation};
use crate::fgl::{
    admits_trivial_level_structure, cyclotomic_level_candidate, FormalGroupLaw,
    LevelStructureCandidate,
};
use crate::hecke::HeckeContext;
use crate::logops::{
    artin_hasse, epsilon_family, k1_exp, k1_log, psi_square_zero, psi_zp_identity, psi_zp_poly,
    theta_tower, ConvergenceWitness,
};
use crate::ring::{ComRing, DegreeOverflow, MPolyRing, QuotientRing, Rationals, TruncSeries, Zp};
use crate::{Error, Result};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub index: u32,
    pub anchor: &'static str,
    pub pass: bool,
    pub detail: String,
}

pub const NUM_CRITERIA: u32 = 13;

pub const ANCHORS: [&str; 13] = [
    "gaussian-alternating-sum",
    "moebius-elementary-values",
    "idempotent-element-e",
    "burnside-product-oracle",
    "euler-factor-inversion",
    "k1-log-additivity",
    "square-zero-log",
    "hecke-form-of-the-log",
    "theta-tower-integrality",
    "artin-hasse-integrality",
    "exp-inverts-log",
    "level-structure-divisibility",
    "restriction-and-cancellation",
];

/// Run one criterion (1-based index).
pub fn run(index: u32) -> CriterionOutcome {
    let r = match index {
        1 => c01_gaussian(),
        2 => c02_moebius(),
        3 => c03_idempotent(),
        4 => c04_burnside_oracle(),
        5 => c05_euler_inverse(),
        6 => c06_k1_additivity(),
        7 => c07_square_zero(),
        8 => c08_hecke_form(),
        9 => c09_theta_tower(),
        10 => c10_artin_hasse(),
        11 => c11_exp_inverse(),
        12 => c12_level_structures(),
        13 => c13_restriction(),
        _ => Err(Error::usage(format!(
            "criterion index {index} out of range 1..={NUM_CRITERIA}"
        ))),
    };
    let anchor = ANCHORS
        .get(index.saturating_sub(1) as usize)
        .copied()
        .unwrap_or("unknown");
    match r {
        Ok(detail) => CriterionOutcome {
            index,
            anchor,
            pass: true,
            detail,
        },
        Err(e) => CriterionOutcome {
            index,
            anchor,
            pass: false,
            detail: e.to_string(),
        },
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    (1..=NUM_CRITERIA).map(run).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::verification(msg()))
    }
}

/// Σ_j (−1)^j p^{j(j−1)/2} [n;j]_p = δ_{n,0} for p in {2,3,5}, n <= 5.
fn c01_gaussian() -> Result<String> {
    let mut cases = 0;
    for p in [2u64, 3, 5] {
        for n in 0..=5u32 {
            let s = gaussian_alternating_sum(n, p);
            let expect = if n == 0 { BigRat::one() } else { BigRat::from(BigInt::from(0)) };
            check(s == expect, || {
                format!("alternating sum at p={p}, n={n} is {s}, expected {expect}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (p, n) pairs, all exact"))
}

/// mu(0, G) = (−1)^j p^{j(j−1)/2} on (Z/p)^j and 0 on the non-elementary
/// test groups.
fn c02_moebius() -> Result<String> {
    let mut cases = 0;
    for p in [2u64, 3] {
        for j in 0..=3u32 {
            let g = FinAbPGroup::elementary(p, j as usize)?;
            let t = enumerate_subgroups(&g, DEFAULT_MAX_WORK)?;
            let mu = t.moebius(t.trivial_index(), t.full_index())?;
            let expect = BigRat::from(
                BigInt::from(if j % 2 == 0 { 1 } else { -1 })
                    * BigInt::from(p).pow(j * j.saturating_sub(1) / 2),
            );
            check(mu == expect, || {
                format!("mu for (Z/{p})^{j} is {mu}, expected {expect}")
            })?;
            cases += 1;
        }
        for ranks in [vec![2u32], vec![3], vec![2, 1]] {
            let g = FinAbPGroup::new(p, &ranks)?;
            let t = enumerate_subgroups(&g, DEFAULT_MAX_WORK)?;
            let mu = t.moebius(t.trivial_index(), t.full_index())?;
            check(mu == BigRat::from(BigInt::from(0)), || {
                format!("mu for p={p}, ranks {ranks:?} is {mu}, expected 0")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} groups, all values exact"))
}

/// e is integral, d(e) = p, e^2 = p e, and y e = d(y) e on every
/// transitive basis element.
fn c03_idempotent() -> Result<String> {
    let mut cases = 0;
    for (n, p) in [(1usize, 2u64), (2, 2), (3, 2), (1, 3), (2, 3)] {
        let (t, e) = element_e_for(n, p, 1, DEFAULT_MAX_WORK)?;
        check(e.is_integral(), || format!("e not integral for n={n}, p={p}"))?;
        let de = fixed_points(&t, &e, t.full_index());
        check(de == rat_int(p as i64), || {
            format!("d(e) = {de} for n={n}, p={p}, expected {p}")
        })?;
        let e2 = burnside_mul(&t, &e, &e)?;
        check(e2 == e.scale(&rat_int(p as i64)), || {
            format!("e^2 != p e for n={n}, p={p}")
        })?;
        for y in 0..t.len() {
            let yb = BurnsideElem::basis(y);
            let ye = burnside_mul(&t, &yb, &e)?;
            let dy = fixed_points(&t, &yb, t.full_index());
            check(ye == e.scale(&dy), || {
                format!("y e != d(y) e for n={n}, p={p}, y={y}")
            })?;
        }
        cases += 1;
    }
    Ok(format!("{cases} groups, full basis checked"))
}

/// Closed-form product [G/S][G/T] = [G:S+T][G/(S cap T)] against the
/// diagonal-orbit decomposition, for every subgroup pair.
fn c04_burnside_oracle() -> Result<String> {
    let mut pairs = 0;
    for (p, ranks) in [
        (2u64, vec![1u32, 1]),
        (2, vec![1, 1, 1]),
        (2, vec![2, 2]),
        (3, vec![2]),
    ] {
        let g = FinAbPGroup::new(p, &ranks)?;
        let t = enumerate_subgroups(&g, DEFAULT_MAX_WORK)?;
        for s in 0..t.len() {
            for u in 0..t.len() {
                let closed =
                    burnside_mul(&t, &BurnsideElem::basis(s), &BurnsideElem::basis(u))?;
                let oracle = burnside_mul_orbitwise(&t, s, u);
                check(closed == oracle, || {
                    format!("product mismatch at p={p}, ranks {ranks:?}, pair ({s}, {u})")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} subgroup pairs, closed form = orbit decomposition"))
}

/// Euler-factor inversion residuals vanish identically for the five
/// standard configurations.
fn c05_euler_inverse() -> Result<String> {
    for (n, p, d) in [(1usize, 2u64, 5u32), (1, 3, 5), (2, 2, 3), (2, 3, 2), (3, 2, 2)] {
        let ctx = HeckeContext::new(n, p)?;
        let rep = ctx.verify_euler_inverse(d)?;
        check(rep.pass, || {
            format!(
                "residual at degree {:?} for n={n}, p={p}, d={d}",
                rep.first_failure
            )
        })?;
    }
    Ok("residuals zero for (n,p,d) in {(1,2,5), (1,3,5), (2,2,3), (2,3,2), (3,2,2)}".to_string())
}

/// k1_log(xy) = k1_log(x) + k1_log(y) on 200 random unit pairs per prime,
/// at precision p^-20; k1_log(1) = 0 exactly.
fn c06_k1_additivity() -> Result<String> {
    let mut pairs = 0;
    for p in [2u64, 3, 5] {
        let pr = psi_zp_identity(p, 28)?;
        let ring = pr.ring().clone();
        let l1 = k1_log(&pr, &ring.one(), 20)?;
        check(ring.is_zero(&l1), || format!("k1_log(1) != 0 at p={p}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(600 + p);
        let unit = |rng: &mut ChaCha8Rng| loop {
            let c = ring.from_i64(rng.gen_range(-10_000i64..=10_000));
            if ring.is_unit(&c) {
                return c;
            }
        };
        for _ in 0..200 {
            let a = unit(&mut rng);
            let b = unit(&mut rng);
            let lhs = k1_log(&pr, &ring.mul(&a, &b), 20)?;
            let rhs = ring.add(&k1_log(&pr, &a, 20)?, &k1_log(&pr, &b, 20)?);
            check(lhs.truncate_to(20) == rhs.truncate_to(20), || {
                format!("additivity fails at p={p} for a={a:?}, b={b:?}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} unit pairs at precision p^-20, plus k1_log(1) = 0"))
}

/// k1_log(1 + eps) = eps - theta(eps) exactly in Z_p[eps]/eps^2, for the
/// built-in psi(eps) = p c eps choices.
fn c07_square_zero() -> Result<String> {
    let mut cases = 0;
    for p in [2u64, 3, 5] {
        for c in [-1i64, 0, 1, 2] {
            let pr = psi_square_zero(p, 24, c)?;
            let ring = pr.ring().clone();
            let mut x = ring.one();
            x[1] = ring.base.one();
            let l = k1_log(&pr, &x, 20)?;
            let eps = ring.gen();
            let expect = ring.sub(&eps, &pr.theta(&eps)?);
            check(l == expect, || format!("square-zero formula fails at p={p}, c={c}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (p, c) pairs, equality exact"))
}

/// hecke_form_check passes on random substitution families in Q[eps]/eps^4
/// for n in {1,2}, p in {2,3}; rank-one reduction 1 + pM(x) = x^p/psi(x)
/// holds with symbolic coefficients.
fn c08_hecke_form() -> Result<String> {
    let mut assignments = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for p in [2u64, 3] {
        for n in [1u32, 2] {
            let ring = QuotientRing::monomial(Rationals, 4, "e");
            let group = FinAbPGroup::elementary(p, n as usize)?;
            let table = enumerate_subgroups(&group, DEFAULT_MAX_WORK)?;
            for _ in 0..15 {
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
                let rep = por.hecke_form_check(&x)?;
                check(rep.matches, || {
                    format!("hecke form mismatch at p={p}, n={n}, scales {scales:?}")
                })?;
                assignments += 1;
            }
        }
    }
    // symbolic rank-one reduction over Q[a, c]
    for p in [2u64, 3] {
        let base = MPolyRing::new(Rationals, 2, 8, DegreeOverflow::Truncate);
        let ring = QuotientRing::monomial(base.clone(), 2, "e");
        let a = base.var(0);
        let c = base.var(1);
        let por = epsilon_family(&ring, p, 1, &[base.one(), c.clone()])?;
        let x = ring.from_coeffs(&[base.one(), a.clone()]);
        let m = por.morava_m(&x)?;
        let lhs = ring.add(&ring.one(), &ring.mul(&ring.from_i64(p as i64), &m));
        let rhs = ring.mul(&ring.pow_u(&x, p), &ring.invert(&por.psi(1, &x)?)?);
        check(lhs == rhs, || format!("1 + pM != x^p/psi(x) symbolically at p={p}"))?;
        let rep = por.hecke_form_check(&x)?;
        check(rep.matches, || format!("symbolic hecke form mismatch at p={p}"))?;
    }
    Ok(format!("{assignments} random families, plus the symbolic rank-one reduction"))
}

/// theta_i integral for i <= 3 on Z_2[t]/t^16 with psi(t) = t^2, 100 random
/// inputs; theta_0 = id and theta_1 = theta.
fn c09_theta_tower() -> Result<String> {
    let pr = psi_zp_poly(2, 24, 16)?;
    let ring = pr.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for trial in 0..100 {
        let x: Vec<PadicInt> = (0..ring.degree())
            .map(|_| ring.base.from_i64(rng.gen_range(-100i64..=100)))
            .collect();
        let tower = theta_tower(&pr, &x, 4)
            .map_err(|e| Error::verification(format!("tower failed on trial {trial}: {e}")))?;
        check(tower[0] == x, || format!("theta_0 != id on trial {trial}"))?;
        let th = pr.theta(&x)?;
        check(tower[1] == th, || format!("theta_1 != theta on trial {trial}"))?;
    }
    Ok("100 random inputs, tower depth 4, all divisions exact".to_string())
}

/// Artin-Hasse coefficients p-integral to degree 50 for p in {2,3,5};
/// coefficient of T^3 at p = 2 equals 2/3.
fn c10_artin_hasse() -> Result<String> {
    for p in [2u64, 3, 5] {
        let f = artin_hasse(p, 50)?;
        for (k, c) in f.coeffs.iter().enumerate() {
            let ok = match padic_val(c, p) {
                Valuation::Infinite => true,
                Valuation::Finite(v) => v >= 0,
            };
            check(ok, || format!("coefficient of T^{k} at p={p} is not {p}-integral"))?;
        }
    }
    let f = artin_hasse(2, 4)?;
    check(f.coeffs[3] == BigRat::new(BigInt::from(2), BigInt::from(3)), || {
        format!("T^3 coefficient at p=2 is {}, expected 2/3", f.coeffs[3])
    })?;
    Ok("coefficients p-integral to degree 50 for p in {2,3,5}; T^3 pin at p=2".to_string())
}

/// k1_log(k1_exp(alpha)) = alpha: at precision 2^-16 on Z_2[t]/t^8 for the
/// built-in convergent family, exactly in Z_p[eps]/eps^2.
fn c11_exp_inverse() -> Result<String> {
    let pr = psi_zp_poly(2, 24, 8)?;
    let ring = pr.ring().clone();
    let family: Vec<Vec<i64>> = vec![
        vec![0, 1, 0, 0, 0, 0, 0, 0],
        vec![0, 2, 0, 0, 0, 0, 0, 0],
        vec![0, 2, 2, 0, 0, 0, 0, 0],
        vec![0, 4, 0, 2, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0, 0, 0],
    ];
    for coeffs in &family {
        let alpha: Vec<PadicInt> = coeffs.iter().map(|&c| ring.base.from_i64(c)).collect();
        let e = k1_exp(&pr, &alpha, ConvergenceWitness::default())?;
        let back = k1_log(&pr, &e, 16)?;
        let diff = ring.sub(&back, &alpha);
        let ok = diff.iter().all(|c| match c.truncate_to(16).valuation() {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= 16,
        });
        check(ok, || format!("round trip drifted for alpha coefficients {coeffs:?}"))?;
    }
    for p in [2u64, 3] {
        let pr = psi_square_zero(p, 16, 0)?;
        let ring = pr.ring().clone();
        for k in [1i64, 2, 5] {
            let mut alpha = ring.zero();
            alpha[1] = ring.base.from_i64(k);
            let e = k1_exp(&pr, &alpha, ConvergenceWitness::default())?;
            let back = k1_log(&pr, &e, 12)?;
            check(back == alpha, || {
                format!("square-zero round trip not exact at p={p}, k={k}")
            })?;
        }
    }
    Ok("5 tower inputs at precision 2^-16, 6 square-zero inputs exact".to_string())
}

/// Cyclotomic level structure divides the p-series with quotient 1 for odd
/// p; all-zero points over Z/p^2 are obstructed; trivial level structures
/// exist exactly where the p-series degree allows.
fn c12_level_structures() -> Result<String> {
    for p in [3u64, 5] {
        let cand = cyclotomic_level_candidate(p, p as usize + 2)?;
        let rep = cand.check()?;
        check(rep.divides, || format!("cyclotomic divisor fails at p={p}"))?;
        let ring = cand.law.ring().clone();
        let one = TruncSeries::one(&ring, cand.law.degree() + 1);
        check(rep.quotient.as_ref() == Some(&one), || {
            format!("cyclotomic quotient at p={p} is not 1")
        })?;
        check(cand.divisor()? == cand.law.p_series()?, || {
            format!("divisor != p-series at p={p}")
        })?;
    }
    for p in [2u64, 3] {
        let ring = Zp::new(p, 2);
        let law = FormalGroupLaw::multiplicative(ring.clone(), p, p as usize + 2)?;
        let group = FinAbPGroup::new(p, &[1])?;
        let points = vec![ring.zero(); p as usize];
        let cand = LevelStructureCandidate::new(law, group, points)?;
        let rep = cand.check()?;
        check(!rep.divides, || format!("all-zero points over Z/{p}^2 were accepted"))?;
        check(rep.obstruction_degree == Some(1), || {
            format!("unexpected obstruction degree {:?} at p={p}", rep.obstruction_degree)
        })?;
    }
    let honda = FormalGroupLaw::honda(Zp::new(2, 1), 2, 2, 8)?;
    check(admits_trivial_level_structure(&honda, 1)?, || {
        "honda height 2 mod 2 should admit a trivial Z/2 level structure".to_string()
    })?;
    check(admits_trivial_level_structure(&honda, 2)?, || {
        "honda height 2 mod 2 should admit a trivial Z/4 level structure".to_string()
    })?;
    for p in [2u64, 3] {
        let mult = FormalGroupLaw::multiplicative(Zp::new(p, 1), p, p as usize + 2)?;
        check(admits_trivial_level_structure(&mult, 1)?, || {
            format!("multiplicative mod {p} should admit a trivial level structure at r=1")
        })?;
    }
    let mult2 = FormalGroupLaw::multiplicative(Zp::new(2, 1), 2, 6)?;
    check(!admits_trivial_level_structure(&mult2, 2)?, || {
        "multiplicative mod 2 admits no trivial Z/4 level structure".to_string()
    })?;
    Ok("cyclotomic quotient 1 at p in {3,5}; obstructions and trivial structures as pinned"
        .to_string())
}

/// Restriction closed form equals the orbit decomposition on (Z/2)^2 and
/// (Z/3)^2; the exponent combination d(j)p^j + d(j+1)p vanishes.
fn c13_restriction() -> Result<String> {
    let mut classes = 0;
    for p in [2u64, 3] {
        let n = 2;
        let g = FinAbPGroup::elementary(p, n)?;
        let dual = enumerate_subgroups(&g, DEFAULT_MAX_WORK)?;
        let elements = g.elements();
        let (v0, w) = standard_splitting(n);
        for u in &dual.subgroups {
            let u_gens: Vec<Vec<i64>> =
                u.elems.iter().map(|&e| elements[e].clone()).collect();
            let closed = restrict_lambda_set(p, n, &u_gens, &v0, &w, DEFAULT_MAX_WORK)?;
            let (_, oracle) = restrict_orbitwise(p, n, &u_gens, &v0, &w, DEFAULT_MAX_WORK)?;
            check(closed.class == oracle, || {
                format!("restriction mismatch at p={p}, U = {:?}", u.hnf)
            })?;
            classes += 1;
        }
    }
    for p in [2u64, 3, 5] {
        for j in 0..=6u32 {
            let v = exponent_cancellation(j, p);
            check(v == rat_int(0), || {
                format!("exponent combination at j={j}, p={p} is {v}, expected 0")
            })?;
        }
    }
    Ok(format!(
        "{classes} subgroup restrictions matched; exponent combination vanishes for j <= 6"
    ))
}
