//! Exact fitting of sampled sequences `v(n)` at `q = p^n` to
//! quasi-polynomials `Σ_j c_j(n mod s) q^j`, plus ratio trends `v / q^d`.
//!
//! Everything is over `BigRational`; a fit either reproduces the samples
//! exactly or is rejected.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sample {
    pub n: u32,
    pub q: u64,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSeries {
    p: u32,
    dim: u32,
    samples: Vec<Sample>,
}

impl SampleSeries {
    pub fn new(p: u32, dim: u32, mut samples: Vec<Sample>) -> Result<Self> {
        samples.sort_by_key(|s| s.n);
        for w in samples.windows(2) {
            if w[0].n == w[1].n {
                if w[0].value != w[1].value {
                    return Err(Error::Inconsistent(format!(
                        "two values for n = {}",
                        w[0].n
                    )));
                }
                return Err(Error::InvalidArgument(format!(
                    "duplicate sample n = {}",
                    w[0].n
                )));
            }
        }
        for s in &samples {
            let q = (p as u64).checked_pow(s.n).ok_or(Error::ExponentOverflow)?;
            if q != s.q {
                return Err(Error::NotPowerOfP { q: s.q, p });
            }
        }
        Ok(SampleSeries { p, dim, samples })
    }

    /// Samples `(n, value)` with `q = p^n` filled in.
    pub fn from_values(p: u32, dim: u32, values: &[(u32, u64)]) -> Result<Self> {
        let samples = values
            .iter()
            .map(|&(n, value)| {
                let q = (p as u64).checked_pow(n).ok_or(Error::ExponentOverflow)?;
                Ok(Sample { n, q, value })
            })
            .collect::<Result<Vec<_>>>()?;
        SampleSeries::new(p, dim, samples)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn rat(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn q_pow(q: u64, j: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(q).pow(j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Constant,
    Increasing,
    Decreasing,
    Oscillating,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    /// `v / q^d` per sample.
    pub ratios: Vec<BigRational>,
    pub differences: Vec<BigRational>,
    pub trend: Trend,
}

/// `v / q^d` as exact rationals, with first differences and a trend label.
pub fn leading_ratio(series: &SampleSeries) -> Result<RatioReport> {
    if series.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let ratios: Vec<BigRational> = series
        .samples
        .iter()
        .map(|s| rat(s.value) / q_pow(s.q, series.dim))
        .collect();
    let differences: Vec<BigRational> = ratios.windows(2).map(|w| &w[1] - &w[0]).collect();
    let up = differences.iter().any(|d| d.is_positive());
    let down = differences.iter().any(|d| d.is_negative());
    let trend = match (up, down) {
        (false, false) => Trend::Constant,
        (true, false) => Trend::Increasing,
        (false, true) => Trend::Decreasing,
        (true, true) => Trend::Oscillating,
    };
    Ok(RatioReport {
        ratios,
        differences,
        trend,
    })
}

/// `Σ_j coeffs[n mod period][j] q^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    coeffs: Vec<Vec<BigRational>>,
}

impl QuasiPolynomial {
    /// One coefficient list (ascending powers of `q`) per residue class.
    pub fn new(mut coeffs: Vec<Vec<BigRational>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty quasi-polynomial".into()));
        }
        for c in &mut coeffs {
            while c.last().is_some_and(|x| x.is_zero()) {
                c.pop();
            }
        }
        // collapse a period whose classes all agree
        if coeffs.iter().all(|c| *c == coeffs[0]) {
            coeffs.truncate(1);
        }
        Ok(QuasiPolynomial { coeffs })
    }

    pub fn polynomial(coeffs: Vec<BigRational>) -> Self {
        QuasiPolynomial::new(vec![coeffs]).expect("one class")
    }

    pub fn period(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self, class: usize) -> &[BigRational] {
        &self.coeffs[class % self.coeffs.len()]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .filter_map(|c| c.len().checked_sub(1))
            .max()
    }

    pub fn eval(&self, n: u32, q: u64) -> BigRational {
        let c = self.coefficients(n as usize);
        let mut acc = BigRational::zero();
        for a in c.iter().rev() {
            acc = acc * rat(q) + a;
        }
        acc
    }

    /// Leading coefficient of `q^d`, when every class agrees on it.
    pub fn coefficient_of(&self, d: usize) -> Option<BigRational> {
        let first = self.coeffs[0]
            .get(d)
            .cloned()
            .unwrap_or_else(BigRational::zero);
        self.coeffs
            .iter()
            .all(|c| c.get(d).cloned().unwrap_or_else(BigRational::zero) == first)
            .then_some(first)
    }
}

fn fmt_poly(c: &[BigRational]) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let den = c.iter().fold(BigInt::one(), |l, x| {
        num::integer::lcm(l, x.denom().clone())
    });
    let mut s = String::new();
    for (j, a) in c.iter().enumerate().rev() {
        let k = (a * BigRational::from_integer(den.clone())).to_integer();
        if k.is_zero() {
            continue;
        }
        let neg = k.is_negative();
        let mag = k.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = match j {
            0 => String::new(),
            1 => "q".into(),
            _ => format!("q^{j}"),
        };
        if mono.is_empty() {
            s.push_str(&mag.to_string());
        } else if mag.is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("{mag}*{mono}"));
        }
    }
    if den.is_one() {
        s
    } else if c.iter().filter(|x| !x.is_zero()).count() == 1 && !s.starts_with('-') {
        format!("{s}/{den}")
    } else {
        format!("({s})/{den}")
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", fmt_poly(&self.coeffs[0]));
        }
        let s = self.coeffs.len();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(r, c)| format!("n%{s}={r}: {}", fmt_poly(c)))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Solve a square system exactly; `None` when singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for x in &mut a[col][col..] {
            *x = &*x * &inv;
        }
        b[col] = &b[col] * &inv;
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (x, y) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * y;
                }
                let sub = &f * &b[col];
                b[r] -= sub;
            }
        }
    }
    Some(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Polynomial,
    QuasiPolynomial,
    LeadingRatioOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoldoutCheck {
    pub sample: Sample,
    pub predicted: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitReport {
    pub kind: ModelKind,
    pub degree: u32,
    pub period: usize,
    /// `None` for a ratio-only report.
    pub form: Option<QuasiPolynomial>,
    pub fitted: Vec<Sample>,
    pub holdout: Vec<HoldoutCheck>,
}

impl FitReport {
    /// A model was found and every holdout sample matched.
    pub fn verified(&self) -> bool {
        self.form.is_some() && !self.holdout.is_empty() && self.holdout.iter().all(|h| h.pass)
    }
}

/// Fit `Σ_{j<=degree} c_j(n mod period) q^j`: the first `degree + 1`
/// samples of each residue class determine the coefficients, the rest are
/// held out.
pub fn fit_quasi_polynomial(
    series: &SampleSeries,
    degree: u32,
    period: usize,
) -> Result<FitReport> {
    if period == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    let need = degree as usize + 1;
    let mut classes: Vec<Vec<Sample>> = vec![Vec::new(); period];
    for s in &series.samples {
        classes[s.n as usize % period].push(*s);
    }
    let mut coeffs = Vec::with_capacity(period);
    let mut fitted = Vec::new();
    let mut held = Vec::new();
    for class in &classes {
        if class.len() < need {
            return Err(Error::Underdetermined);
        }
        let (fit, rest) = class.split_at(need);
        let a: Vec<Vec<BigRational>> = fit
            .iter()
            .map(|s| (0..need as u32).map(|j| q_pow(s.q, j)).collect())
            .collect();
        let b: Vec<BigRational> = fit.iter().map(|s| rat(s.value)).collect();
        let c = solve(a, b)
            .ok_or_else(|| Error::Inconsistent("singular interpolation system".into()))?;
        coeffs.push(c);
        fitted.extend_from_slice(fit);
        held.extend_from_slice(rest);
    }
    if held.is_empty() {
        return Err(Error::Underdetermined);
    }
    let form = QuasiPolynomial::new(coeffs)?;
    held.sort_by_key(|s| s.n);
    fitted.sort_by_key(|s| s.n);
    let holdout = held
        .into_iter()
        .map(|s| {
            let predicted = form.eval(s.n, s.q);
            HoldoutCheck {
                sample: s,
                pass: predicted == rat(s.value),
                predicted,
            }
        })
        .collect();
    Ok(FitReport {
        kind: if form.period() == 1 {
            ModelKind::Polynomial
        } else {
            ModelKind::QuasiPolynomial
        },
        degree,
        period,
        form: Some(form),
        fitted,
        holdout,
    })
}

/// Search periods `1..=max_period` (smallest first) and degrees `d`, then
/// `d - 1`; the first model passing every holdout wins. Falls back to a
/// ratio-only report.
pub fn best_fit(series: &SampleSeries, max_period: usize) -> Result<FitReport> {
    if series.is_empty() {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    let d = series.dim;
    let mut degrees = vec![d];
    if d > 0 {
        degrees.push(d - 1);
    }
    for s in 1..=max_period.max(1) {
        for &deg in &degrees {
            match fit_quasi_polynomial(series, deg, s) {
                Ok(r) if r.verified() => return Ok(r),
                Ok(_) | Err(Error::Underdetermined) | Err(Error::Inconsistent(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(FitReport {
        kind: ModelKind::LeadingRatioOnly,
        degree: d,
        period: 0,
        form: None,
        fitted: Vec::new(),
        holdout: Vec::new(),
    })
}

/// A closed form such as `(4*q^2-4)/3` or `n%2=0: (16*q^2-24)/5; n%2=1: (16*q^2-16)/5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    form: QuasiPolynomial,
}

impl ClosedForm {
    pub fn parse(text: &str) -> Result<Self> {
        let cases: Vec<&str> = text
            .split(';')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .collect();
        if cases.is_empty() {
            return Err(parse_err(0, "empty expression"));
        }
        if cases.len() == 1 && !cases[0].contains(':') {
            return Ok(ClosedForm {
                form: QuasiPolynomial::polynomial(parse_q_poly(cases[0])?),
            });
        }
        let mut by_class: Vec<Option<Vec<BigRational>>> = Vec::new();
        let mut period = None;
        for case in cases {
            let (head, body) = case
                .split_once(':')
                .ok_or_else(|| parse_err(0, "every case needs a `n%s=r:` or even/odd label"))?;
            let (s, r) = parse_case_label(head.trim())?;
            match period {
                None => {
                    period = Some(s);
                    by_class = vec![None; s];
                }
                Some(p) if p != s => return Err(parse_err(0, "cases use different periods")),
                _ => {}
            }
            if by_class[r].is_some() {
                return Err(parse_err(0, "residue class given twice"));
            }
            by_class[r] = Some(parse_q_poly(body)?);
        }
        let coeffs = by_class
            .into_iter()
            .enumerate()
            .map(|(r, c)| c.ok_or_else(|| parse_err(0, &format!("missing case for residue {r}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClosedForm {
            form: QuasiPolynomial::new(coeffs)?,
        })
    }

    pub fn form(&self) -> &QuasiPolynomial {
        &self.form
    }

    pub fn eval(&self, n: u32, q: u64) -> BigRational {
        self.form.eval(n, q)
    }
}

impl From<QuasiPolynomial> for ClosedForm {
    fn from(form: QuasiPolynomial) -> Self {
        ClosedForm { form }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.form.fmt(f)
    }
}

fn parse_err(column: usize, message: &str) -> Error {
    Error::Parse {
        column,
        message: message.to_string(),
    }
}

fn parse_case_label(head: &str) -> Result<(usize, usize)> {
    match head {
        "even" => return Ok((2, 0)),
        "odd" => return Ok((2, 1)),
        _ => {}
    }
    let compact: String = head.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact
        .strip_prefix("n%")
        .ok_or_else(|| parse_err(0, "case label must be even, odd, or n%s=r"))?;
    let (s, r) = rest
        .split_once('=')
        .ok_or_else(|| parse_err(0, "case label must be n%s=r"))?;
    let s: usize = s.parse().map_err(|_| parse_err(0, "bad period"))?;
    let r: usize = r.parse().map_err(|_| parse_err(0, "bad residue"))?;
    if s == 0 || r >= s {
        return Err(parse_err(0, "residue out of range"));
    }
    Ok((s, r))
}

/// Polynomials in `q` with rational coefficients: `+ - * / ^ ( )`, integer
/// literals, and the variable `q`. Division only by constants.
fn parse_q_poly(text: &str) -> Result<Vec<BigRational>> {
    let mut p = QParser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(parse_err(p.pos + 1, "unexpected trailing input"));
    }
    Ok(trim(v))
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

fn padd(a: &[BigRational], b: &[BigRational], sign: i32) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            if sign < 0 {
                x - y
            } else {
                x + y
            }
        })
        .collect()
}

fn pmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

struct QParser {
    chars: Vec<char>,
    pos: usize,
}

impl QParser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Vec<BigRational>> {
        let mut sign = 1;
        if let Some(c @ ('-' | '+' | '−')) = self.peek() {
            self.pos += 1;
            if c != '+' {
                sign = -1;
            }
        }
        let mut acc = padd(&[], &self.term()?, sign);
        while let Some(c @ ('+' | '-' | '−')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = padd(&acc, &t, if c == '+' { 1 } else { -1 });
        }
        Ok(trim(acc))
    }

    fn term(&mut self) -> Result<Vec<BigRational>> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = pmul(&acc, &self.power()?);
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = trim(self.power()?);
                    if d.len() != 1 {
                        return Err(parse_err(at + 1, "division by a non-constant or zero"));
                    }
                    let inv = d[0].recip();
                    acc = acc.iter().map(|x| x * &inv).collect();
                }
                Some(c) if c == '(' || c == 'q' || c.is_ascii_digit() => {
                    acc = pmul(&acc, &self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Vec<BigRational>> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| parse_err(start + 1, "expected exponent"))?;
            let mut out = vec![BigRational::one()];
            for _ in 0..e {
                out = pmul(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Vec<BigRational>> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(parse_err(self.pos + 1, "expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('q') => {
                self.pos += 1;
                Ok(vec![BigRational::zero(), BigRational::one()])
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let v: BigInt = s.parse().map_err(|_| parse_err(start + 1, "bad number"))?;
                Ok(vec![BigRational::from_integer(v)])
            }
            _ => Err(parse_err(self.pos + 1, "expected a number, q, or `(`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCheck {
    pub sample: Sample,
    pub expected: BigRational,
    pub pass: bool,
}

/// Exact comparison of every sample against the closed form.
pub fn verify_closed_form(series: &SampleSeries, form: &ClosedForm) -> Vec<SampleCheck> {
    series
        .samples
        .iter()
        .map(|s| {
            let expected = form.eval(s.n, s.q);
            SampleCheck {
                sample: *s,
                pass: expected == rat(s.value),
                expected,
            }
        })
        .collect()
}

/// Rational as `a` or `a/b`, lossless.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Approximate decimal for display only.
pub fn approx(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn fermat_series() -> SampleSeries {
        SampleSeries::from_values(2, 2, &[(1, 4), (2, 20), (3, 84), (4, 340)]).unwrap()
    }

    #[test]
    fn ratios_of_fermat_series() {
        let s = SampleSeries::from_values(2, 2, &[(1, 4), (2, 20), (3, 84)]).unwrap();
        let rep = leading_ratio(&s).unwrap();
        assert_eq!(rep.ratios, vec![r(1, 1), r(5, 4), r(21, 16)]);
        assert_eq!(rep.trend, Trend::Increasing);
    }

    #[test]
    fn ratio_edge_cases() {
        let sq = SampleSeries::from_values(3, 2, &[(1, 9), (2, 81)]).unwrap();
        let rep = leading_ratio(&sq).unwrap();
        assert_eq!(rep.ratios, vec![r(1, 1), r(1, 1)]);
        assert_eq!(rep.trend, Trend::Constant);
        let zero = SampleSeries::from_values(2, 2, &[(1, 0), (2, 0), (3, 0)]).unwrap();
        assert!(leading_ratio(&zero)
            .unwrap()
            .ratios
            .iter()
            .all(|x| x.is_zero()));
        let empty = SampleSeries::new(2, 2, vec![]).unwrap();
        assert!(leading_ratio(&empty).is_err());
    }

    #[test]
    fn fermat_fit_recovers_closed_form() {
        let rep = fit_quasi_polynomial(&fermat_series(), 2, 1).unwrap();
        let form = rep.form.clone().unwrap();
        assert_eq!(form.coefficients(0), &[r(-4, 3), r(0, 1), r(4, 3)]);
        assert_eq!(form.to_string(), "(4*q^2 - 4)/3");
        assert!(rep.verified());
        assert_eq!(rep.holdout[0].sample.q, 16);
    }

    #[test]
    fn monomial_and_zero_series() {
        let s = SampleSeries::from_values(2, 2, &[(1, 24), (2, 96), (3, 384), (4, 1536)]).unwrap();
        let rep = best_fit(&s, 3).unwrap();
        assert_eq!(rep.form.unwrap().to_string(), "6*q^2");
        let z = SampleSeries::from_values(2, 2, &[(1, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
        let rep = best_fit(&z, 3).unwrap();
        assert_eq!(rep.form.unwrap().to_string(), "0");
    }

    #[test]
    fn underdetermined_fit_rejected() {
        let s = SampleSeries::from_values(2, 2, &[(1, 4), (2, 20), (3, 84)]).unwrap();
        assert!(matches!(
            fit_quasi_polynomial(&s, 2, 1),
            Err(Error::Underdetermined)
        ));
    }

    #[test]
    fn inconsistent_samples_rejected() {
        let samples = vec![
            Sample {
                n: 1,
                q: 2,
                value: 4,
            },
            Sample {
                n: 1,
                q: 2,
                value: 5,
            },
        ];
        assert!(matches!(
            SampleSeries::new(2, 2, samples),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn parity_fit_found_when_needed() {
        // n even: q^2 + 1, n odd: q^2
        let vals: Vec<(u32, u64)> = (1..=8)
            .map(|n| {
                let q = 2u64.pow(n);
                (n, q * q + u64::from(n % 2 == 0))
            })
            .collect();
        let s = SampleSeries::from_values(2, 2, &vals).unwrap();
        let rep = best_fit(&s, 3).unwrap();
        assert_eq!(rep.period, 2);
        assert_eq!(rep.kind, ModelKind::QuasiPolynomial);
        assert!(rep.verified());
    }

    #[test]
    fn closed_forms_verify() {
        let quartic = SampleSeries::from_values(3, 2, &[(1, 24), (2, 240)]).unwrap();
        let f = ClosedForm::parse("3q^2-3").unwrap();
        assert!(verify_closed_form(&quartic, &f).iter().all(|c| c.pass));
        let nonis = SampleSeries::from_values(2, 2, &[(1, 15), (2, 55), (3, 207)]).unwrap();
        let f = ClosedForm::parse("3*q^2 + 2*q - 1").unwrap();
        assert!(verify_closed_form(&nonis, &f).iter().all(|c| c.pass));
        let bad = SampleSeries::from_values(2, 2, &[(1, 15), (2, 56), (3, 207)]).unwrap();
        let checks = verify_closed_form(&bad, &f);
        assert_eq!(
            checks.iter().map(|c| c.pass).collect::<Vec<_>>(),
            vec![true, false, true]
        );
    }

    #[test]
    fn closed_form_syntax() {
        let f = ClosedForm::parse("even: (16q^2-24)/5; odd: (16*q^2-16)/5").unwrap();
        assert_eq!(f.eval(2, 4), r(232, 5));
        assert_eq!(f.eval(1, 2), r(48, 5));
        let g = ClosedForm::parse("n%2=0: 9(q^2-1)/4; n%2=1: 9(q^2-1)/4").unwrap();
        assert_eq!(g.form().period(), 1);
        assert!(ClosedForm::parse("q/(q+1)").is_err());
        assert!(ClosedForm::parse("even: q").is_err());
        assert!(ClosedForm::parse("2q +").is_err());
        let h = ClosedForm::parse(&ClosedForm::parse("(4q^2 - 4)/3").unwrap().to_string()).unwrap();
        assert_eq!(h.eval(3, 8), r(84, 1));
    }

    proptest! {
        #[test]
        fn polynomial_round_trip(c0 in -50i64..50, c1 in -50i64..50, c2 in 1i64..50, den in 1i64..7) {
            let coeffs = vec![r(c0, den), r(c1, den), r(c2, den)];
            let form = QuasiPolynomial::polynomial(coeffs.clone());
            let mut samples = Vec::new();
            for n in 1..=5u32 {
                let q = 3u64.pow(n);
                let v = form.eval(n, q);
                prop_assume!(v.is_integer() && !v.is_negative());
                samples.push(Sample { n, q, value: v.to_integer().to_u64().unwrap() });
            }
            let s = SampleSeries::new(3, 2, samples).unwrap();
            let rep = fit_quasi_polynomial(&s, 2, 1).unwrap();
            prop_assert!(rep.verified());
            prop_assert_eq!(rep.form.unwrap(), form);
        }

        #[test]
        fn fits_reproduce_their_samples(vals in proptest::collection::vec(0u64..1000, 4..7)) {
            let pairs: Vec<(u32, u64)> = vals.iter().enumerate().map(|(i, &v)| (i as u32 + 1, v)).collect();
            let s = SampleSeries::from_values(2, 2, &pairs).unwrap();
            let rep = fit_quasi_polynomial(&s, 2, 1).unwrap();
            let form = rep.form.unwrap();
            for f in &rep.fitted {
                prop_assert_eq!(form.eval(f.n, f.q), rat(f.value));
            }
        }
    }
}
