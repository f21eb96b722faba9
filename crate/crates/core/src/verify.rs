//! Executable acceptance suites. Each criterion runs exhaustively over its
//! stated domain and is checked against its wall-clock budget.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::census::{
    self, in_t_signature, monic_from_index, run_census, select_kernel, CensusParams, CensusReport, Mode,
    ShardLayout,
};
use crate::error::Result;
use crate::factor::{
    count_monic_irreducibles, max_irreducible_factor, CachedFactorizer, CantorZassenhaus,
    IrreducibleTable, DEFAULT_SEED,
};
use crate::gf::FieldSpec;
use crate::limits::Limits;
use crate::poly::{factorial_direct, factorial_product, valuation, valuation_of_factorial, Nat, Poly};
use crate::smarandache::{
    self, check_delta_contraction_with, distance_to_fixed_with, inverse_image_prime_powers, oracle,
    repunit, s_prime_power, s_with, Contraction,
};

/// Counts every S output seen by the suites and how many have a non-zero
/// constant term.
#[derive(Debug, Default)]
pub struct ValueSetAudit {
    seen: AtomicU64,
    bad: AtomicU64,
}

impl ValueSetAudit {
    pub fn record(&self, g: &Poly) {
        self.seen.fetch_add(1, Ordering::Relaxed);
        if !g.divisible_by_t() {
            self.bad.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn seen(&self) -> u64 {
        self.seen.load(Ordering::Relaxed)
    }

    pub fn bad(&self) -> u64 {
        self.bad.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub limit_s: u64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {:<32} {:>8.2}s / {:>3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms as f64 / 1000.0,
            self.limit_s,
            self.detail
        )
    }
}

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Result<Check> {
    Ok(Check { ok, detail: detail.into() })
}

/// Shared state across suites.
pub struct Context {
    pub audit: ValueSetAudit,
    pub limits: Limits,
    factorizer: Arc<CachedFactorizer<CantorZassenhaus>>,
}

impl Default for Context {
    fn default() -> Self {
        Context::new(Limits::default())
    }
}

impl Context {
    pub fn new(limits: Limits) -> Self {
        Context {
            audit: ValueSetAudit::default(),
            limits,
            factorizer: Arc::new(CachedFactorizer::new(CantorZassenhaus::new(DEFAULT_SEED), 1 << 16)),
        }
    }

    fn s(&self, f: &Poly) -> Poly {
        let g = s_with(f, self.factorizer.as_ref()).expect("cantor-zassenhaus accepts every input");
        self.audit.record(&g);
        g
    }
}

pub const CRITERIA: [(u8, &str, u64); 14] = [
    (1, "factorial consistency", 60),
    (2, "factorial valuation formula", 120),
    (3, "S oracle equivalence", 120),
    (4, "prime-power closed form", 10),
    (5, "divisor-count sum identity", 60),
    (6, "fixed points", 10),
    (7, "iteration distance", 60),
    (8, "delta contraction", 60),
    (9, "prime-power inverse images", 30),
    (10, "census ground truth", 120),
    (11, "T4 max-degree bound", 120),
    (12, "T2 bound at reachable scale", 600),
    (13, "irreducible counts", 10),
    (14, "value set", 60),
];

fn field(q: u64) -> FieldSpec {
    FieldSpec::of_order(q).expect("built-in field")
}

fn delta_range(f: &FieldSpec, lo: u64, hi: u64) -> impl ParallelIterator<Item = Poly> + '_ {
    (lo..=hi).into_par_iter().map(move |m| Poly::from_delta_u64(f, m))
}

/// Polynomials of degree `1..=max_deg`, any leading coefficient.
fn nonconstant_up_to(f: &FieldSpec, max_deg: u32) -> impl ParallelIterator<Item = Poly> + '_ {
    let q = f.q();
    delta_range(f, q, q.pow(max_deg + 1) - 1)
}

fn c1_factorials(ctx: &Context) -> Result<Check> {
    let mut compared = 0;
    for q in [2, 3] {
        let f = field(q);
        let bad: Vec<String> = delta_range(&f, 0, 256)
            .filter_map(|g| match (factorial_direct(&g, &ctx.limits), factorial_product(&g, &ctx.limits)) {
                (Ok(a), Ok(b)) if a == b => None,
                (Ok(_), Ok(_)) => Some(format!("q={q} f={g}")),
                (Err(e), _) | (_, Err(e)) => Some(format!("q={q} f={g}: {e}")),
            })
            .collect();
        if !bad.is_empty() {
            return check(false, format!("mismatch at {}", bad[0]));
        }
        compared += 257;
    }
    check(true, format!("{compared} factorials agree"))
}

fn c2_valuations(ctx: &Context) -> Result<Check> {
    let mut pairs = 0u64;
    for q in [2, 3] {
        let f = field(q);
        let table = IrreducibleTable::build(&f, 4, &ctx.limits)?;
        let irr: Vec<Poly> = table.iter().cloned().collect();
        let results: Vec<std::result::Result<u64, String>> = delta_range(&f, 0, 256)
            .map(|g| {
                let fact = factorial_direct(&g, &ctx.limits).map_err(|e| e.to_string())?;
                let delta = g.delta();
                for p in &irr {
                    let direct = valuation(p, &fact).map_err(|e| e.to_string())?;
                    let formula = valuation_of_factorial(p.deg() as u32, &delta, q);
                    if direct != formula {
                        return Err(format!("q={q} f={g} P={p}: {direct} vs {formula}"));
                    }
                }
                Ok(irr.len() as u64)
            })
            .collect();
        for r in results {
            match r {
                Ok(n) => pairs += n,
                Err(e) => return check(false, e),
            }
        }
    }
    check(true, format!("{pairs} (f, P) pairs agree"))
}

fn c3_oracles(ctx: &Context) -> Result<Check> {
    let cap = ctx.limits.definition_oracle_cap;
    let vcap = ctx.limits.valuation_oracle_cap;
    let mut def = 0;
    let mut val = 0;
    for q in [2, 3] {
        let f = field(q);
        let bad = delta_range(&f, 1, 200).find_any(|g| {
            let want = ctx.s(g);
            oracle::s_oracle_definition_capped(g, cap).map(|o| o != want).unwrap_or(true)
        });
        if let Some(g) = bad {
            return check(false, format!("definition oracle differs at q={q} f={g}"));
        }
        def += 200;
        let bad = delta_range(&f, 1, 5000).find_any(|g| {
            let want = ctx.s(g);
            oracle::s_oracle_valuation_capped(g, vcap).map(|o| o != want).unwrap_or(true)
        });
        if let Some(g) = bad {
            return check(false, format!("valuation oracle differs at q={q} f={g}"));
        }
        val += 5000;
    }
    check(true, format!("{def} definition and {val} valuation comparisons"))
}

fn c4_prime_powers(ctx: &Context) -> Result<Check> {
    let mut count = 0;
    for q in [2, 3] {
        let f = field(q);
        let table = IrreducibleTable::build(&f, 3, &ctx.limits)?;
        let cases: Vec<(Poly, u32)> = table.iter().flat_map(|p| (1..=30).map(move |e| (p.clone(), e))).collect();
        let bad = cases.par_iter().find_any(|(p, e)| {
            let closed = s_prime_power(p, &Nat::from(*e)).expect("irreducible input");
            ctx.audit.record(&closed);
            oracle::s_oracle_valuation_capped(&p.pow(*e), ctx.limits.valuation_oracle_cap)
                .map(|o| o != closed)
                .unwrap_or(true)
        });
        if let Some((p, e)) = bad {
            return check(false, format!("q={q} P={p} e={e}"));
        }
        count += cases.len();
    }
    check(true, format!("{count} prime powers agree"))
}

fn c5_tau_sum(ctx: &Context) -> Result<Check> {
    let reg = census::kernels();
    for q in [2, 3, 5] {
        let f = field(q);
        let kernel = select_kernel(&reg, "auto", &f)?;
        for n in 1..=6usize {
            let got = census::tau_sum(&f, n, kernel, &ctx.limits)?;
            let want = Nat::from(n as u64 + 1) * Nat::from(q).pow(n as u32);
            if got != want {
                return check(false, format!("q={q} n={n}: {got} != {want}"));
            }
        }
    }
    check(true, "(n+1)q^n for q in {2,3,5}, n <= 6")
}

fn c6_fixed_points(ctx: &Context) -> Result<Check> {
    for q in [2, 3, 4, 5] {
        let f = field(q);
        let mut found: Vec<Poly> = delta_range(&f, 1, q.pow(4)).filter(|g| ctx.s(g) == *g).collect();
        found.sort();
        let want = smarandache::fixed_points(&f);
        if found != want {
            let lits: Vec<String> = found.iter().map(Poly::to_literal).collect();
            return check(false, format!("q={q}: found {lits:?}"));
        }
    }
    check(true, "{t, t^2} for q=2, {t} for q=3,4,5")
}

fn c7_distance(ctx: &Context) -> Result<Check> {
    let mut attained = false;
    for q in [2, 3] {
        let f = field(q);
        let factorizer = ctx.factorizer.as_ref();
        let bad = nonconstant_up_to(&f, 8).find_any(|g| {
            let n = distance_to_fixed_with(g, factorizer).expect("non-constant input");
            let mut cur = g.clone();
            for _ in 0..n {
                cur = ctx.s(&cur);
            }
            n > 1 + g.deg()
        });
        if let Some(g) = bad {
            return check(false, format!("q={q} f={g} exceeds 1 + deg f"));
        }
        if q == 3 {
            let table = IrreducibleTable::build(&f, 2, &ctx.limits)?;
            attained = table.degree(2).iter().any(|p| distance_to_fixed_with(p, factorizer).ok() == Some(3));
        }
    }
    check(attained, if attained { "bound holds; attained by a quadratic irreducible over F_3" } else { "bound never attained for q=3" })
}

fn c8_contraction(ctx: &Context) -> Result<Check> {
    let mut equalities = Vec::new();
    for (q, max_deg) in [(2u64, 8u32), (3, 8), (4, 5), (5, 5)] {
        let f = field(q);
        let factorizer = ctx.factorizer.as_ref();
        let results: Vec<(Poly, Contraction)> = nonconstant_up_to(&f, max_deg)
            .filter_map(|g| {
                ctx.s(&g);
                let c = check_delta_contraction_with(&g, factorizer).expect("non-constant input");
                matches!(c, Contraction::Equality | Contraction::Violation).then_some((g, c))
            })
            .collect();
        for (g, c) in results {
            if c == Contraction::Violation {
                return check(false, format!("q={q} f={g} violates q*delta(S(f)) <= delta(f)"));
            }
            equalities.push((q, g));
        }
    }
    equalities.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let want = [(2, Poly::t_pow(&field(2), 3)), (3, Poly::t_pow(&field(3), 3))];
    let ok = equalities == want;
    let lits: Vec<String> = equalities.iter().map(|(q, g)| format!("q={q}:{g}")).collect();
    check(ok, format!("equality set {lits:?}"))
}

fn c9_inverse_images(ctx: &Context) -> Result<Check> {
    let f = field(2);
    let table = IrreducibleTable::build(&f, 16, &ctx.limits)?;
    let pairs: Vec<(Poly, u32)> =
        table.iter().flat_map(|p| (1..=(16 / p.deg() as u32)).map(move |e| (p.clone(), e))).collect();
    let images: Vec<(Poly, u32, u64)> = pairs
        .par_iter()
        .map(|(p, e)| {
            let g = ctx.s(&p.pow(*e));
            (p.clone(), *e, g.delta_u64().unwrap_or(u64::MAX))
        })
        .collect();
    for m in 0..=16u64 {
        let target = Poly::from_delta_u64(&f, m);
        let brute: BTreeSet<(Poly, u32)> =
            images.iter().filter(|x| x.2 == m).map(|(p, e, _)| (p.clone(), *e)).collect();
        let mut listed = BTreeSet::new();
        for img in inverse_image_prime_powers(&target) {
            let lo: u64 = (&img.e_lo).try_into().unwrap_or(u64::MAX);
            let hi: u64 = (&img.e_hi).try_into().unwrap_or(u64::MAX);
            for p in table.degree(img.d as usize) {
                for e in lo..=hi.min(16 / img.d as u64) {
                    listed.insert((p.clone(), e as u32));
                }
            }
        }
        if brute != listed {
            return check(false, format!("delta(f)={m}: brute {} vs intervals {}", brute.len(), listed.len()));
        }
    }
    check(true, format!("{} prime powers scanned", pairs.len()))
}

fn strip_volatile(mut r: CensusReport) -> CensusReport {
    r.wall_ms = 0;
    r.shards = ShardLayout { count: 0, blocks: Vec::new() };
    r
}

fn c10_census(ctx: &Context) -> Result<Check> {
    let reg = census::kernels();
    let f2 = field(2);
    let kernel2 = select_kernel(&reg, "auto", &f2)?;
    for (n, want) in [(2usize, 2u64), (3, 4)] {
        let hand = (0..2u64.pow(n as u32))
            .filter(|&i| {
                let g = monic_from_index(&f2, n, i);
                let p = max_irreducible_factor(&g).expect("non-constant");
                ctx.s(&g) != Poly::t_pow(&f2, p.deg())
            })
            .count() as u64;
        let params = CensusParams::new(&f2, n, 1.0, Mode::Standard)?;
        let counted = run_census(&params, 1, kernel2, &ctx.limits)?.count_t;
        if hand != want || counted != want {
            return check(false, format!("|T({n})|: enumeration {hand}, census {counted}, expected {want}"));
        }
    }
    let mut members = 0;
    for (q, max_n) in [(2u64, 12usize), (3, 7)] {
        let f = field(q);
        let kernel = select_kernel(&reg, "auto", &f)?;
        for n in 1..=max_n {
            let scanner = kernel.prepare(&f, n, &ctx.limits)?;
            let mut shortcut = Vec::new();
            scanner.scan(0..q.pow(n as u32), &mut |i, sig| shortcut.push((i, in_t_signature(q, sig))));
            let bad = shortcut.par_iter().find_any(|&&(i, fast)| {
                let g = monic_from_index(&f, n, i);
                let p = max_irreducible_factor(&g).expect("non-constant");
                (ctx.s(&g) != Poly::t_pow(&f, p.deg())) != fast
            });
            if let Some((i, _)) = bad {
                return check(false, format!("dual path differs at q={q} {}", monic_from_index(&f, n, *i)));
            }
            members += shortcut.len();
            let params = CensusParams::new(&f, n, 1.0, Mode::Standard)?;
            let reports: Vec<CensusReport> = [1, 2, 8]
                .iter()
                .map(|&s| run_census(&params, s, kernel, &ctx.limits).map(strip_volatile))
                .collect::<Result<_>>()?;
            if reports.windows(2).any(|w| w[0] != w[1]) {
                return check(false, format!("shard counts disagree at q={q} n={n}"));
            }
        }
    }
    check(true, format!("|T(2)|=2, |T(3)|=4; {members} memberships agree; shards 1/2/8 identical"))
}

fn c11_t4_degree_bound(ctx: &Context) -> Result<Check> {
    let reg = census::kernels();
    let f2 = field(2);
    let kernel = select_kernel(&reg, "auto", &f2)?;
    let mut t4 = 0;
    for r in [1.0, 2.0] {
        for n in 1..=14 {
            let params = CensusParams::new(&f2, n, r, Mode::Standard)?;
            let report = run_census(&params, rayon::current_num_threads(), kernel, &ctx.limits)?;
            if report.s4_violations > 0 {
                return check(false, format!("n={n} r={r}: {} violations", report.s4_violations));
            }
            t4 += report.count_t4;
        }
    }
    check(true, format!("0 violations over {t4} T4 members"))
}

fn c12_t2_bound(ctx: &Context) -> Result<Check> {
    let reg = census::kernels();
    let f2 = field(2);
    let kernel = select_kernel(&reg, "auto", &f2)?;
    let mut rows = Vec::new();
    for n in 11..=20usize {
        let params = CensusParams::new(&f2, n, 1.0, Mode::Standard)?;
        let report = run_census(&params, 4 * rayon::current_num_threads(), kernel, &ctx.limits)?;
        let bound = 2f64.powi(n as i32) / (n as f64 * 2f64.ln());
        if report.d < 4.0 || !((report.count_t2 as f64) < bound) {
            return check(false, format!("n={n}: |T2|={} bound {bound:.1} D={:.3}", report.count_t2, report.d));
        }
        rows.push(format!("{}<{:.0}", report.count_t2, bound));
    }
    check(true, format!("|T2| vs bound for n=11..20: {}", rows.join(" ")))
}

fn c13_irreducible_counts(ctx: &Context) -> Result<Check> {
    for q in [2u64, 3] {
        let f = field(q);
        let table = IrreducibleTable::build(&f, 10, &ctx.limits)?;
        let mut cumulative = Nat::from(0u32);
        for n in 1..=10u32 {
            let formula = count_monic_irreducibles(&f, n)?;
            let sieved = Nat::from(table.degree(n as usize).len());
            if formula != sieved {
                return check(false, format!("q={q} n={n}: formula {formula}, sieve {sieved}"));
            }
            cumulative += sieved;
            if cumulative > Nat::from(q).pow(n) {
                return check(false, format!("q={q} n={n}: {cumulative} irreducibles of degree <= n"));
            }
        }
    }
    check(true, "formula = sieve and cumulative <= q^n for n <= 10")
}

fn c14_value_set(ctx: &Context) -> Result<Check> {
    let mut built = 0;
    for q in [2u64, 3] {
        let f = field(q);
        let qn = Nat::from(q);
        for m in (0..=64u64).filter(|m| m % q == 0) {
            let g = Poly::from_delta_u64(&f, m);
            let mut e = Nat::from(0u32);
            for (j, &digit) in g.coeffs().iter().enumerate() {
                e += Nat::from(digit) * repunit(&qn, j as u32);
            }
            let e: u32 = (&e).try_into().expect("small exponent");
            let s = ctx.s(&Poly::t_pow(&f, e as usize));
            if s != g {
                return check(false, format!("q={q} g={g}: S(t^{e}) = {s}"));
            }
            built += 1;
        }
    }
    let seen = ctx.audit.seen();
    let bad = ctx.audit.bad();
    check(bad == 0, format!("{built} preimages built; {bad} of {seen} audited S outputs have a constant term"))
}

type Suite = fn(&Context) -> Result<Check>;

const SUITES: [Suite; 14] = [
    c1_factorials,
    c2_valuations,
    c3_oracles,
    c4_prime_powers,
    c5_tau_sum,
    c6_fixed_points,
    c7_distance,
    c8_contraction,
    c9_inverse_images,
    c10_census,
    c11_t4_degree_bound,
    c12_t2_bound,
    c13_irreducible_counts,
    c14_value_set,
];

/// Runs criterion `id` (1-based) and applies its time budget.
pub fn run_criterion(id: u8, ctx: &Context) -> CriterionOutcome {
    let (_, name, limit_s) = CRITERIA[id as usize - 1];
    let start = Instant::now();
    let result = SUITES[id as usize - 1](ctx);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(c) => (c.ok, c.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > Duration::from_secs(limit_s) {
        passed = false;
        detail = format!("over time budget; {detail}");
    }
    CriterionOutcome { id, name, passed, detail, elapsed_ms: elapsed.as_millis() as u64, limit_s }
}

/// All criteria in order; the value-set audit in 14 covers 1 to 11.
pub fn run_all(ctx: &Context, mut on_result: impl FnMut(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    (1..=14)
        .map(|id| {
            let out = run_criterion(id, ctx);
            on_result(&out);
            out
        })
        .collect()
}
