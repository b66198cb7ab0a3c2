//! Acceptance criteria 1-12. Runs as a plain binary (no libtest harness) so
//! the per-criterion verdict lines always reach the test log; exits nonzero
//! if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use genhk::fit::{fit_quasi_polynomial, SampleSeries};
use genhk::frobenius::{
    fhk, hk_estimate, local_cohomology_length, refl_pair, theta, tor_frobenius_length,
};
use genhk::oracle::oracle_fhk;
use genhk::{PolyRing, PresentedModule, QuotientRing};
use num::{BigInt, BigRational};

type Check = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

fn ring(p: u64, vars: &[&str], rel: &[&str]) -> Arc<QuotientRing> {
    let r = PolyRing::new(p, vars).unwrap();
    if rel.is_empty() {
        QuotientRing::polynomial(r)
    } else {
        QuotientRing::parse(r, rel).unwrap()
    }
}

fn cyclic(base: &Arc<QuotientRing>, gens: &[&str]) -> PresentedModule {
    PresentedModule::parse_cyclic(base.clone(), gens).unwrap()
}

fn fermat() -> Arc<QuotientRing> {
    ring(2, &["x", "y", "z"], &["x^3+y^3+z^3"])
}

fn quartic() -> Arc<QuotientRing> {
    ring(3, &["x", "y", "z"], &["x^4+y^4-z^4"])
}

fn nonisolated() -> Arc<QuotientRing> {
    ring(2, &["x", "y", "t"], &["x^3+t*x*y+y^3"])
}

fn vanishing() -> Arc<QuotientRing> {
    ring(2, &["x", "y", "z"], &["x^2*y-z^2"])
}

fn quadric() -> Arc<QuotientRing> {
    ring(5, &["x", "y", "u", "v"], &["x*y-u*v"])
}

fn series(m: &PresentedModule, ns: std::ops::RangeInclusive<u32>) -> Vec<u64> {
    ns.map(|n| fhk(m, n).unwrap()).collect()
}

fn expect_series(
    label: &str,
    m: &PresentedModule,
    ns: std::ops::RangeInclusive<u32>,
    want: &[u64],
) -> Check {
    let got = series(m, ns);
    if got == want {
        Ok(format!("{label} {got:?}"))
    } else {
        Err(format!("{label} {got:?}, expected {want:?}"))
    }
}

fn oracle_agrees(label: &str, m: &PresentedModule, n: u32) -> Check {
    let g = fhk(m, n).map_err(|e| e.to_string())?;
    let o = oracle_fhk(m, n).map_err(|e| format!("{label}: oracle {e}"))?;
    if o.stable && o.value == g {
        Ok(format!("{label}={g}"))
    } else {
        Err(format!(
            "{label}: groebner {g}, oracle {} (stable {})",
            o.value, o.stable
        ))
    }
}

fn all(parts: Vec<Check>) -> Check {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for p in parts {
        match p {
            Ok(s) => ok.push(s),
            Err(s) => bad.push(s),
        }
    }
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        Err(bad.join("; "))
    }
}

fn c1() -> Check {
    let m = cyclic(&fermat(), &["x", "y+z"]);
    expect_series("fhk at q=2,4,8", &m, 1..=3, &[4, 20, 84])
}

fn c2() -> Check {
    let base = fermat();
    let m = cyclic(&base, &["x", "y+z"]);
    let a = cyclic(&base, &["x", "z^2", "y^2+y*z"]);
    let b = cyclic(&base, &["x", "y+z", "z^2"]);
    let c = cyclic(&base, &["x", "z^2"]);
    let (sm, sa, sb, sc) = (
        series(&m, 1..=3),
        series(&a, 1..=3),
        series(&b, 1..=3),
        series(&c, 1..=3),
    );
    let mut parts = vec![
        if sa == [20, 84, 340] {
            Ok(format!("A {sa:?}"))
        } else {
            Err(format!("A {sa:?}"))
        },
        if sb == [12, 52, 212] {
            Ok(format!("B {sb:?}"))
        } else {
            Err(format!("B {sb:?}"))
        },
        if sc == [24, 96, 384] {
            Ok(format!("C {sc:?}"))
        } else {
            Err(format!("C {sc:?}"))
        },
    ];
    let identity = (0..3).all(|i| 2 * sm[i] + sc[i] == sa[i] + sb[i]);
    parts.push(if identity {
        Ok("fhk_M = (A + B - C)/2 at q=2,4,8".into())
    } else {
        Err(format!("combination identity fails: M {sm:?}"))
    });
    for (label, x) in [("M", &m), ("A", &a), ("B", &b), ("C", &c)] {
        parts.push(oracle_agrees(&format!("oracle {label}@q=2"), x, 1));
    }
    all(parts)
}

fn c3() -> Check {
    let base = quartic();
    all(vec![
        expect_series(
            "R/(x,y^2-z^2) at q=3,9",
            &cyclic(&base, &["x", "y^2-z^2"]),
            1..=2,
            &[24, 240],
        ),
        expect_series(
            "R/(x,y-z) at q=3,9",
            &cyclic(&base, &["x", "y-z"]),
            1..=2,
            &[18, 180],
        ),
    ])
}

fn c4() -> Check {
    let base = nonisolated();
    all(vec![
        expect_series(
            "R/(x^3,y^3) at q=2,4,8",
            &cyclic(&base, &["x^3", "y^3"]),
            1..=3,
            &[15, 55, 207],
        ),
        expect_series(
            "R/(x^2,y^2,xy) at q=2,4,8",
            &cyclic(&base, &["x^2", "y^2", "x*y"]),
            1..=3,
            &[4, 18, 70],
        ),
    ])
}

fn c5() -> Check {
    let m = cyclic(&vanishing(), &["x", "z"]);
    expect_series("fhk at q=2,4,8,16", &m, 1..=4, &[0, 0, 0, 0])
}

fn tor_vs_syzygy(label: &str, m: &PresentedModule) -> Check {
    let syz = m.syzygy_module().map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for n in 1..=2 {
        let tor = tor_frobenius_length(m, 1, n)
            .and_then(|l| l.value())
            .map_err(|e| e.to_string())?;
        let direct = fhk(&syz, n).map_err(|e| e.to_string())?;
        parts.push(if tor == direct {
            Ok(format!("{label} n={n}: {tor}"))
        } else {
            Err(format!("{label} n={n}: Tor_1 {tor} vs fhk(syz) {direct}"))
        });
    }
    all(parts)
}

fn c6() -> Check {
    let q = quartic();
    all(vec![
        tor_vs_syzygy("cubic R/(x,y+z)", &cyclic(&fermat(), &["x", "y+z"])),
        tor_vs_syzygy("quartic R/(x,y^2-z^2)", &cyclic(&q, &["x", "y^2-z^2"])),
        tor_vs_syzygy("quartic R/(x,y-z)", &cyclic(&q, &["x", "y-z"])),
    ])
}

fn c7() -> Check {
    let m = cyclic(&fermat(), &["x", "y+z"]);
    let mut parts = Vec::new();
    for n in 1..=2 {
        let t = theta(&m, n).map_err(|e| e.to_string())?;
        parts.push(if t.tor_even == t.tor_odd {
            Ok(format!("q={}: Tor_4 = Tor_5 = {}", t.q, t.tor_even))
        } else {
            Err(format!(
                "q={}: Tor_4 {} vs Tor_5 {}",
                t.q, t.tor_even, t.tor_odd
            ))
        });
    }
    all(parts)
}

fn c8() -> Check {
    let m = cyclic(&fermat(), &["x"]);
    let mut parts = Vec::new();
    for i in 1..=2 {
        for n in 1..=2 {
            let l = tor_frobenius_length(&m, i, n).map_err(|e| e.to_string())?;
            parts.push(if l.length == Some(0) {
                Ok(format!("Tor_{i}@n={n}=0"))
            } else {
                Err(format!("Tor_{i}@n={n} = {:?}", l.length))
            });
        }
    }
    all(parts)
}

/// `(ℓ(H²_m(I^(e))), ℓ(H⁰_m(R/(x^e, v^e))))` for e = 2..8, frozen after the
/// oracle-confirmed e = 2 run.
const REFL_GOLDEN: [(u64, u64, u64); 7] = [
    (2, 1, 1),
    (3, 4, 4),
    (4, 10, 10),
    (5, 20, 20),
    (6, 35, 35),
    (7, 56, 56),
    (8, 84, 84),
];

fn c9() -> Check {
    let base = quadric();
    let r = base.ambient().clone();
    let (a, b) = (r.parse("x").unwrap(), r.parse("v").unwrap());
    let mut parts = Vec::new();
    // the bracket coordinate at e = 2 against the oracle
    parts.push(oracle_agrees(
        "oracle R/(x,v)@q=2",
        &cyclic(&base, &["x^2", "v^2"]),
        0,
    ));
    let h2_ring = local_cohomology_length(&PresentedModule::free(base.clone(), 1).unwrap(), 2, 0)
        .and_then(|l| l.value())
        .map_err(|e| e.to_string())?;
    let mut diffs = Vec::new();
    for &(e, h2, h0) in &REFL_GOLDEN {
        let pair = refl_pair(&base, &a, &b, e).map_err(|err| err.to_string())?;
        let got = (pair.h2_symbolic.length, pair.h0_bracket);
        if got != (Some(h2), h0) {
            parts.push(Err(format!("e={e}: got {got:?}, golden ({h2}, {h0})")));
        }
        diffs.push(
            pair.difference()
                .map_err(|err| err.to_string())?
                .unsigned_abs(),
        );
    }
    let bound = diffs[0] + h2_ring;
    let worst = *diffs.iter().max().unwrap();
    parts.push(if worst <= bound {
        Ok(format!(
            "goldens e=2..8 match; |difference| <= {worst} within bound {bound} (l(H^2_m(R)) = {h2_ring})"
        ))
    } else {
        Err(format!("|difference| {diffs:?} exceeds bound {bound}"))
    });
    all(parts)
}

fn c10() -> Check {
    let f = fermat();
    let q = quartic();
    let ni = nonisolated();
    let van = vanishing();
    let quad = quadric();
    let reg = ring(3, &["x", "y"], &[]);
    all(vec![
        oracle_agrees("cubic R/(x,y+z)@2", &cyclic(&f, &["x", "y+z"]), 1),
        oracle_agrees(
            "cubic R/(x,z^2,y^2+yz)@2",
            &cyclic(&f, &["x", "z^2", "y^2+y*z"]),
            1,
        ),
        oracle_agrees(
            "cubic R/(x,y+z,z^2)@2",
            &cyclic(&f, &["x", "y+z", "z^2"]),
            1,
        ),
        oracle_agrees("cubic R/(x,z^2)@2", &cyclic(&f, &["x", "z^2"]), 1),
        oracle_agrees("cubic R/(x)@2", &cyclic(&f, &["x"]), 1),
        oracle_agrees("quartic R/(x,y^2-z^2)@3", &cyclic(&q, &["x", "y^2-z^2"]), 1),
        oracle_agrees("quartic R/(x,y-z)@3", &cyclic(&q, &["x", "y-z"]), 1),
        oracle_agrees(
            "nonisolated R/(x^3,y^3)@2",
            &cyclic(&ni, &["x^3", "y^3"]),
            1,
        ),
        oracle_agrees(
            "nonisolated R/(x^2,y^2,xy)@2",
            &cyclic(&ni, &["x^2", "y^2", "x*y"]),
            1,
        ),
        oracle_agrees("R/(x,z) on x^2y=z^2 @2", &cyclic(&van, &["x", "z"]), 1),
        oracle_agrees("quadric R/(x,v)@5", &cyclic(&quad, &["x", "v"]), 1),
        oracle_agrees("regular k@3", &cyclic(&reg, &["x", "y"]), 1),
    ])
}

fn c11() -> Check {
    let m = cyclic(&fermat(), &["x", "y+z"]);
    let values: Vec<(u32, u64)> = (1..=4).map(|n| (n, fhk(&m, n).unwrap())).collect();
    let s = SampleSeries::from_values(2, 2, &values).map_err(|e| e.to_string())?;
    let rep = fit_quasi_polynomial(&s, 2, 1).map_err(|e| e.to_string())?;
    let form = rep.form.clone().ok_or("no model")?;
    let third = |k: i64| BigRational::new(BigInt::from(k), BigInt::from(3));
    let exact = form.period() == 1 && form.coefficients(0) == [third(-4), third(0), third(4)];
    let holdout = rep.holdout.len() == 1 && rep.holdout[0].sample.q == 16 && rep.verified();
    if exact && holdout {
        Ok(format!(
            "{form}, holdout q=16 value {} matches",
            rep.holdout[0].sample.value
        ))
    } else {
        Err(format!("model {form}, holdout {:?}", rep.holdout))
    }
}

fn c12() -> Check {
    let m = cyclic(&ring(3, &["x", "y"], &[]), &["x", "y"]);
    let one = BigRational::from_integer(BigInt::from(1));
    let est = hk_estimate(&m, 4, 3).map_err(|e| e.to_string())?;
    all(vec![
        expect_series("fhk at q=3,9,27", &m, 1..=3, &[9, 81, 729]),
        if est.limit.as_ref() == Some(&one) && est.ratios.ratios.iter().all(|r| *r == one) {
            Ok("hk_estimate limit 1".into())
        } else {
            Err(format!("hk_estimate limit {:?}", est.limit))
        },
    ])
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Fermat cubic fhk", c1),
        (2, "combination identity", c2),
        (3, "quartic fhk", c3),
        (4, "non-isolated fhk", c4),
        (5, "vanishing example", c5),
        (6, "Tor_1 vs syzygy", c6),
        (7, "theta vanishing", c7),
        (8, "finite projective dimension", c8),
        (9, "reflexive comparison", c9),
        (10, "oracle equivalence", c10),
        (11, "fit round-trip", c11),
        (12, "regular baseline", c12),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("criterion {n:>2} [{name}]: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} [{name}]: FAIL ({detail})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
