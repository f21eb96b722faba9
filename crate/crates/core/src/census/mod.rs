//! Exhaustive classification of monic degree-n polynomials by whether
//! S(f) = t^{deg 𝒫(f)}, together with the auxiliary classes T₁–T₄ and the
//! counting bounds they satisfy.

mod kernel;

pub use kernel::{kernels, select_kernel, CensusKernel, Gf2Packed, Generic, Scanner, Signature};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{self, Factorization};
use crate::gf::FieldSpec;
use crate::limits::Limits;
use crate::poly::{valuation_of_factorial, Nat, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Tight,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::Tight => "tight",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Mode::Standard),
            "tight" => Ok(Mode::Tight),
            _ => Err(Error::Parse(format!("unknown mode '{s}' (expected standard or tight)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parses `r` given as an integer, decimal or `a/b` fraction.
pub fn parse_r(s: &str) -> Result<f64> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad r '{s}'")))?;
            let b: f64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad r '{s}'")))?;
            a / b
        }
        None => s.parse().map_err(|_| Error::Parse(format!("bad r '{s}'")))?,
    };
    if !value.is_finite() {
        return Err(Error::Parse(format!("bad r '{s}'")));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusParams {
    pub field: FieldSpec,
    pub n: usize,
    pub r: f64,
    pub mode: Mode,
}

impl CensusParams {
    pub fn new(field: &FieldSpec, n: usize, r: f64, mode: Mode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(r >= 1.0) {
            return Err(Error::InvalidArgument(format!("r = {r} must be at least 1")));
        }
        if mode == Mode::Tight && field.q() < 3 {
            return Err(Error::TightModeNeedsOddQ);
        }
        Ok(CensusParams { field: field.clone(), n, r, mode })
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds::new(self.field.q(), self.n, self.r, self.mode)
    }
}

/// `B` bounds ω for T₁, `D` separates small from large degrees for T₂, T₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

impl Thresholds {
    /// Natural logarithms: `ln ln q^n = ln(n ln q)`.
    pub fn new(q: u64, n: usize, r: f64, mode: Mode) -> Self {
        let ll = (n as f64 * (q as f64).ln()).ln();
        match mode {
            Mode::Standard => Thresholds { b: 3.0 * r * ll, d: 2.0 * r * ll },
            Mode::Tight => Thresholds { b: 2.0 * r * ll, d: r * ll },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Classification {
    pub in_t: bool,
    pub in_t1: bool,
    pub in_t2: bool,
    pub in_t3: bool,
    pub in_t4: bool,
    pub max_irr_deg: u32,
    pub omega: u32,
}

/// S(f) ≠ t^{deg 𝒫(f)}, using `v_P((t^m)!) = Σ_j ⌊q^m / q^{dj}⌋`.
pub fn in_t_signature(q: u64, sig: &Signature) -> bool {
    let m = match sig.iter().map(|x| x.0).max() {
        Some(m) => m,
        None => return false,
    };
    match q.checked_pow(m) {
        Some(qm) => sig.iter().any(|&(d, e)| crate::poly::valuation_of_factorial_u64(d, qm, q) < e as u64),
        None => {
            let qm = Nat::from(q).pow(m);
            sig.iter().any(|&(d, e)| valuation_of_factorial(d, &qm, q) < Nat::from(e))
        }
    }
}

pub fn classify_signature(q: u64, sig: &Signature, th: &Thresholds) -> Classification {
    let omega = sig.len() as u32;
    let max_irr_deg = sig.iter().map(|x| x.0).max().unwrap_or(0);
    let in_t = in_t_signature(q, sig);
    let in_t1 = omega as f64 > th.b;
    let in_t2 = sig.iter().any(|&(d, e)| e >= 2 && d as f64 > th.d);
    let in_t3 = sig.iter().any(|&(d, e)| e as f64 >= th.d && d as f64 <= th.d);
    let in_t4 = in_t && !(in_t1 || in_t2 || in_t3);
    Classification { in_t, in_t1, in_t2, in_t3, in_t4, max_irr_deg, omega }
}

/// `deg 𝒫(f) < D + ln D / ln q`.
pub fn lemma_s4_holds(q: u64, max_irr_deg: u32, th: &Thresholds) -> bool {
    (max_irr_deg as f64) < th.d + th.d.ln() / (q as f64).ln()
}

fn monic_signature(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    factor::factorize(f)
}

/// Membership in T(n) via the factorial valuation shortcut.
pub fn in_t(f: &Poly) -> Result<bool> {
    let fz = monic_signature(f)?;
    Ok(in_t_signature(f.field().q(), &fz.signature()))
}

pub fn classify(f: &Poly, params: &CensusParams) -> Result<Classification> {
    if !f.field().same_field(&params.field) {
        return Err(Error::FieldMismatch);
    }
    let fz = monic_signature(f)?;
    if f.deg() != params.n {
        return Err(Error::DegreeMismatch { expected: params.n, found: f.deg() });
    }
    Ok(classify_signature(f.field().q(), &fz.signature(), &params.thresholds()))
}

/// `deg 𝒫(f) < D + ln D / ln q` for a member of T₄; other inputs are rejected.
pub fn lemma_s4_check(f: &Poly, params: &CensusParams) -> Result<bool> {
    let c = classify(f, params)?;
    if !c.in_t4 {
        return Err(Error::NotInT4);
    }
    Ok(lemma_s4_holds(f.field().q(), c.max_irr_deg, &params.thresholds()))
}

/// Aggregated counts; merging is commutative and associative.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tally {
    pub total: u64,
    pub t: u64,
    pub t1: u64,
    pub t2: u64,
    pub t3: u64,
    pub t4: u64,
    pub s4_violations: u64,
    pub hist_max_irr_deg: Vec<u64>,
    pub hist_omega: Vec<u64>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally { hist_max_irr_deg: vec![0; n + 1], hist_omega: vec![0; n + 1], ..Tally::default() }
    }

    fn add(&mut self, c: &Classification, s4_ok: bool) {
        self.total += 1;
        self.t += c.in_t as u64;
        self.t1 += c.in_t1 as u64;
        self.t2 += c.in_t2 as u64;
        self.t3 += c.in_t3 as u64;
        self.t4 += c.in_t4 as u64;
        self.s4_violations += (c.in_t4 && !s4_ok) as u64;
        self.hist_max_irr_deg[c.max_irr_deg as usize] += 1;
        self.hist_omega[c.omega as usize] += 1;
    }

    pub fn merge(mut self, other: &Tally) -> Tally {
        self.total += other.total;
        self.t += other.t;
        self.t1 += other.t1;
        self.t2 += other.t2;
        self.t3 += other.t3;
        self.t4 += other.t4;
        self.s4_violations += other.s4_violations;
        for (a, b) in self.hist_max_irr_deg.iter_mut().zip(&other.hist_max_irr_deg) {
            *a += b;
        }
        for (a, b) in self.hist_omega.iter_mut().zip(&other.hist_omega) {
            *a += b;
        }
        self
    }
}

/// Contiguous blocks covering `[0, total)`, as even as possible.
pub fn shard_blocks(total: u64, shards: usize) -> Vec<(u64, u64)> {
    let shards = shards.max(1) as u64;
    (0..shards).map(|i| (total * i / shards, total * (i + 1) / shards)).collect()
}

fn census_total(field: &FieldSpec, n: usize, limits: &Limits) -> Result<u64> {
    let q = field.q();
    match q.checked_pow(n as u32) {
        Some(total) if total <= limits.census_cap => Ok(total),
        _ => Err(Error::cap("q^n", format!("{q}^{n}"), limits.census_cap)),
    }
}

/// One class bound: the value, whether its hypotheses hold, and
/// whether the measured count satisfies it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    pub applies: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdPairs {
    pub standard: Thresholds,
    pub tight: Option<Thresholds>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histograms {
    pub max_irr_deg: Vec<u64>,
    pub omega: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShardLayout {
    pub count: usize,
    pub blocks: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub q: u64,
    pub field: String,
    pub n: usize,
    pub r: f64,
    pub mode: Mode,
    pub kernel: String,
    pub total: u64,
    #[serde(rename = "T")]
    pub count_t: u64,
    #[serde(rename = "T1")]
    pub count_t1: u64,
    #[serde(rename = "T2")]
    pub count_t2: u64,
    #[serde(rename = "T3")]
    pub count_t3: u64,
    #[serde(rename = "T4")]
    pub count_t4: u64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub thresholds: ThresholdPairs,
    pub bound_t1: Bound,
    pub bound_t2: Bound,
    pub bound_t3: Bound,
    pub hyp_flags: String,
    pub histograms: Histograms,
    pub s4_violations: u64,
    pub wall_ms: u64,
    pub shards: ShardLayout,
}

pub const CSV_HEADER: &str =
    "q,n,r,mode,total,T,T1,T2,T3,T4,B,D,bound_T1,bound_T2,bound_T3,hyp_flags,s4_violations,wall_ms";

impl CensusReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{},{},{}",
            self.q,
            self.n,
            self.r,
            self.mode,
            self.total,
            self.count_t,
            self.count_t1,
            self.count_t2,
            self.count_t3,
            self.count_t4,
            self.b,
            self.d,
            self.bound_t1.value,
            self.bound_t2.value,
            self.bound_t3.value,
            self.hyp_flags,
            self.s4_violations,
            self.wall_ms
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Every applicable bound is met by the measured count.
    pub fn bounds_hold(&self) -> bool {
        [self.bound_t1, self.bound_t2, self.bound_t3].iter().all(|b| !b.applies || b.holds)
    }
}

fn bounds(params: &CensusParams, th: &Thresholds, tally: &Tally) -> (Bound, Bound, Bound, String) {
    let q = params.field.q();
    let n = params.n;
    let r = params.r;
    let qn = (q as f64).powi(n as i32);
    let base = qn / (n as f64 * (q as f64).ln()).powf(r);
    let tight = params.mode == Mode::Tight;
    let (t1_value, t1_applies, s1) = if tight {
        let ok = q >= 3 && n >= 4 && r >= 3.0;
        (base, ok, if ok { "tight" } else { "off" })
    } else if n >= 3 && r >= 2.0 {
        (base, true, "strong")
    } else {
        (3.0 * base, true, "weak")
    };
    let (d2, d3) = if tight { (12.0, 19.0) } else { (4.0, 8.0) };
    let t2_applies = th.d >= d2;
    let t3_applies = th.d >= d3;
    let mk = |value: f64, applies: bool, count: u64| Bound { value, applies, holds: (count as f64) < value };
    let flags = format!(
        "S1={s1}|S2={}|S3={}",
        if t2_applies { "on" } else { "off" },
        if t3_applies { "on" } else { "off" }
    );
    (mk(t1_value, t1_applies, tally.t1), mk(base, t2_applies, tally.t2), mk(base, t3_applies, tally.t3), flags)
}

/// Classifies every monic polynomial of degree `params.n`, splitting the
/// index range into `shards` contiguous blocks processed in parallel.
pub fn run_census(params: &CensusParams, shards: usize, kernel: &dyn CensusKernel, limits: &Limits) -> Result<CensusReport> {
    let start = Instant::now();
    let field = &params.field;
    let q = field.q();
    let total = census_total(field, params.n, limits)?;
    let scanner = kernel.prepare(field, params.n, limits)?;
    let th = params.thresholds();
    let blocks = shard_blocks(total, shards);
    let n = params.n;
    let tallies: Vec<Tally> = blocks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut tally = Tally::new(n);
            scanner.scan(lo..hi, &mut |_, sig| {
                let c = classify_signature(q, sig, &th);
                let ok = !c.in_t4 || lemma_s4_holds(q, c.max_irr_deg, &th);
                tally.add(&c, ok);
            });
            tally
        })
        .collect();
    let tally = tallies.iter().fold(Tally::new(n), |acc, t| acc.merge(t));
    let (bound_t1, bound_t2, bound_t3, hyp_flags) = bounds(params, &th, &tally);
    let standard = Thresholds::new(q, n, params.r, Mode::Standard);
    let tight = (q >= 3).then(|| Thresholds::new(q, n, params.r, Mode::Tight));
    Ok(CensusReport {
        q,
        field: field.to_string(),
        n,
        r: params.r,
        mode: params.mode,
        kernel: kernel.name().to_string(),
        total: tally.total,
        count_t: tally.t,
        count_t1: tally.t1,
        count_t2: tally.t2,
        count_t3: tally.t3,
        count_t4: tally.t4,
        b: th.b,
        d: th.d,
        thresholds: ThresholdPairs { standard, tight },
        bound_t1,
        bound_t2,
        bound_t3,
        hyp_flags,
        histograms: Histograms { max_irr_deg: tally.hist_max_irr_deg, omega: tally.hist_omega },
        s4_violations: tally.s4_violations,
        wall_ms: start.elapsed().as_millis() as u64,
        shards: ShardLayout { count: blocks.len(), blocks },
    })
}

/// `Σ τ(f)` over monic `f` of degree `n`, by enumeration.
pub fn tau_sum(field: &FieldSpec, n: usize, kernel: &dyn CensusKernel, limits: &Limits) -> Result<Nat> {
    let total = census_total(field, n, limits)?;
    let scanner = kernel.prepare(field, n, limits)?;
    let blocks = shard_blocks(total, rayon::current_num_threads());
    let sum: u128 = blocks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = 0u128;
            scanner.scan(lo..hi, &mut |_, sig| {
                acc += sig.iter().map(|&(_, e)| e as u128 + 1).product::<u128>();
            });
            acc
        })
        .sum();
    Ok(Nat::from(sum))
}

/// The monic degree-`n` polynomial with low-order index `idx`.
pub fn monic_from_index(field: &FieldSpec, n: usize, idx: u64) -> Poly {
    let q = field.q();
    Poly::from_delta(field, &(Nat::from(q).pow(n as u32) + idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn auto(field: &FieldSpec) -> &'static dyn CensusKernel {
        if field.q() == 2 {
            &Gf2Packed
        } else {
            &Generic
        }
    }

    #[test]
    fn in_t_examples() {
        let f = f2();
        assert!(in_t(&p(&f, "t^2")).unwrap());
        assert!(!in_t(&p(&f, "t^2+t")).unwrap());
        assert!(!in_t(&p(&f, "t^3+t+1")).unwrap());
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(in_t(&p(&f3, "2*t^2")), Err(Error::NotMonic));
    }

    #[test]
    fn thresholds_by_direct_evaluation() {
        let th = Thresholds::new(2, 4, 1.0, Mode::Standard);
        assert!((th.d - 2.0 * (16f64.ln()).ln()).abs() < 1e-12);
        assert!((th.d - 2.0396).abs() < 1e-3);
        let th = Thresholds::new(2, 2, 1.0, Mode::Standard);
        assert!((th.b - 0.9798).abs() < 1e-3);
    }

    #[test]
    fn classify_examples() {
        let f = f2();
        let p4 = CensusParams::new(&f, 4, 1.0, Mode::Standard).unwrap();
        assert!(classify(&p(&f, "t^4"), &p4).unwrap().in_t3);
        let p2 = CensusParams::new(&f, 2, 1.0, Mode::Standard).unwrap();
        let c = classify(&p(&f, "t^2+t"), &p2).unwrap();
        assert_eq!((c.in_t, c.in_t1, c.in_t2, c.in_t3, c.in_t4), (false, true, false, false, false));
        let c = classify(&p(&f, "t^4+t+1"), &p4).unwrap();
        assert!(!c.in_t && !c.in_t2 && !c.in_t3);
        assert!(matches!(classify(&p(&f, "t^3"), &p4), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn tight_needs_odd_q() {
        assert_eq!(CensusParams::new(&f2(), 4, 1.0, Mode::Tight), Err(Error::TightModeNeedsOddQ));
        assert!(CensusParams::new(&f2(), 4, 0.5, Mode::Standard).is_err());
    }

    #[test]
    fn degree_check_rejects_non_members() {
        let f = f2();
        let params = CensusParams::new(&f, 2, 1.0, Mode::Standard).unwrap();
        assert_eq!(lemma_s4_check(&p(&f, "t^2+t"), &params), Err(Error::NotInT4));
    }

    #[test]
    fn census_examples() {
        let f = f2();
        let limits = Limits::default();
        let count = |n| {
            let params = CensusParams::new(&f, n, 1.0, Mode::Standard).unwrap();
            run_census(&params, 1, &Gf2Packed, &limits).unwrap().count_t
        };
        assert_eq!(count(1), 0);
        assert_eq!(count(2), 2);
        assert_eq!(count(3), 4);
    }

    #[test]
    fn census_invariant_under_shards_and_kernels() {
        let limits = Limits::default();
        for (q, n) in [(2u64, 10usize), (3, 6)] {
            let field = FieldSpec::prime(q).unwrap();
            let params = CensusParams::new(&field, n, 1.0, Mode::Standard).unwrap();
            let mut reports: Vec<CensusReport> = [1, 2, 8]
                .iter()
                .map(|&s| run_census(&params, s, auto(&field), &limits).unwrap())
                .collect();
            reports.push(run_census(&params, 3, &Generic, &limits).unwrap());
            for r in &mut reports {
                r.wall_ms = 0;
                r.shards = ShardLayout { count: 0, blocks: Vec::new() };
                r.kernel.clear();
            }
            assert!(reports.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn census_cap_and_csv() {
        let f = f2();
        let params = CensusParams::new(&f, 8, 1.0, Mode::Standard).unwrap();
        let limits = Limits { census_cap: 100, ..Limits::default() };
        assert!(matches!(run_census(&params, 1, &Gf2Packed, &limits), Err(Error::CapExceeded { .. })));
        let mut report = run_census(&params, 1, &Gf2Packed, &Limits::default()).unwrap();
        report.wall_ms = 0;
        let row = report.csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("2,8,1,standard,256,"));
    }

    #[test]
    fn tau_sum_examples() {
        let limits = Limits::default();
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(tau_sum(&f2(), 2, &Gf2Packed, &limits).unwrap(), Nat::from(12u32));
        assert_eq!(tau_sum(&f3, 3, &Generic, &limits).unwrap(), Nat::from(108u32));
        assert_eq!(tau_sum(&f2(), 1, &Generic, &limits).unwrap(), Nat::from(4u32));
    }

    #[test]
    fn monic_index_order() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(monic_from_index(&f3, 2, 0), p(&f3, "t^2"));
        assert_eq!(monic_from_index(&f3, 2, 5), p(&f3, "t^2+t+2"));
    }
}
