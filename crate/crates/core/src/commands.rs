//! The work behind each CLI subcommand, returning emit-ready output.
//!
//! Nothing here depends on whether a table came from the cache, so repeated
//! runs with the same arguments render byte-identical output.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::conjectures::{
    asymptotic_report, check_equiv_lc, check_ultra_log_concave, find_ultra_lc_witness, invariant_lc_reports, mult_lc_report,
    p_k1_equality_pattern, ConjectureReport, Side, Verdict,
};
use crate::emit::{grid, Output, Table};
use crate::error::{Error, Result};
use crate::invariant::InvTable;
use crate::manin::manin_check;
use crate::recursion::RepTable;
use crate::symfun::{to_schur, Basis, Caps, IntSym};
use crate::trees::{count_trees, oracle_q, MAX_ORACLE_N};

fn rep_table(cache: Option<&Cache>, caps: Caps) -> Result<RepTable> {
    match cache {
        Some(c) => Ok(c.rep(caps)?.0),
        None => RepTable::compute(caps),
    }
}

fn inv_table(cache: Option<&Cache>, caps: Caps) -> Result<InvTable> {
    match cache {
        Some(c) => Ok(c.inv(caps)?.0),
        None => InvTable::compute(caps),
    }
}

/// Multiplicity of the trivial representation: every h_λ contains s_(n) once.
fn trivial_mult(f: &IntSym) -> BigInt {
    f.iter().map(|(_, _, c)| c.clone()).sum()
}

fn series_pieces(table: &RepTable, n: u32) -> [(&'static str, Vec<IntSym>); 3] {
    let caps = table.caps;
    let upto = |top: Option<u32>| top.map(|t| t.min(caps.k)).map_or(0..0, |t| 0..t + 1);
    [
        ("Q+", upto(n.checked_sub(1)).map(|k| table.qplus_nk(n, k)).collect()),
        ("Q", upto(n.checked_sub(2)).map(|k| table.q_nk(n, k)).collect()),
        ("P", upto(n.checked_sub(3)).map(|k| table.p_nk(n, k)).collect()),
    ]
}

/// Q⁺, Q, P up to the caps: one summary row per nonzero (series, n, k), plus
/// the full expansion of the series at `print` if requested.
pub fn cmd_rep(cache: Option<&Cache>, caps: Caps, print: Option<u32>, basis: Basis) -> Result<Output> {
    if basis == Basis::P {
        return Err(Error::InvalidArgument("tables print in the h or s basis".into()));
    }
    if let Some(n) = print {
        if n > caps.n {
            return Err(Error::TruncationOutOfRange { n, k: 0, caps });
        }
    }
    let table = rep_table(cache, caps)?;
    let mut summary = Table::new(format!("representation tables, caps ({}, {})", caps.n, caps.k), &["series", "n", "k", "schur_terms", "trivial_mult"]);
    let mut json_rows = Vec::new();
    let mut grid_q = Vec::new();
    let mut grid_p = Vec::new();
    for n in 1..=caps.n {
        for (name, pieces) in series_pieces(&table, n) {
            let mut trivial_row = Vec::new();
            for (k, f) in pieces.iter().enumerate() {
                let terms = to_schur(f)?.len();
                let triv = trivial_mult(f);
                trivial_row.push(triv.to_string());
                summary.push(vec![name.into(), n.to_string(), k.to_string(), terms.to_string(), triv.to_string()]);
                json_rows.push(json!({"series": name, "n": n, "k": k, "schur_terms": terms, "trivial_mult": triv.to_string()}));
            }
            match name {
                "Q" if !pieces.is_empty() => grid_q.push((n, trivial_row)),
                "P" if !pieces.is_empty() => grid_p.push((n, trivial_row)),
                _ => {}
            }
        }
    }
    let mut tables = vec![summary, grid("trivial multiplicity in Q_{n,k}", grid_q), grid("trivial multiplicity in P_{n,k}", grid_p)];
    let mut doc = json!({"command": "rep", "caps": caps, "summary": json_rows});
    if let Some(n) = print {
        let mut detail = Table::new(format!("terms of Q+_{n}, Q_{n}, P_{n} ({} basis)", basis.name()), &["series", "k", "lambda", "coeff"]);
        let mut detail_json = serde_json::Map::new();
        for (name, f) in [("qplus", &table.qplus[n as usize]), ("q", &table.q[n as usize]), ("p", &table.p[n as usize])] {
            let f = if basis == Basis::S { to_schur(f)? } else { f.clone() };
            let mut terms: Vec<_> = f.iter().collect();
            terms.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
            for (lambda, k, c) in terms {
                detail.push(vec![name.into(), k.to_string(), lambda.to_string(), c.to_string()]);
            }
            detail_json.insert(name.into(), serde_json::to_value(&f)?);
        }
        tables.push(detail);
        doc["detail"] = json!({"n": n, "basis": basis.name(), "series": detail_json});
    }
    Ok(Output { json: doc, tables })
}

/// 𝔭_n and 𝔮_n up to the caps, with per-row log-concavity.
pub fn cmd_inv(cache: Option<&Cache>, caps: Caps) -> Result<Output> {
    let inv = inv_table(cache, caps)?;
    if let Some((n, k)) = inv.verify_exponential_identity()? {
        return Err(Error::Mismatch(format!("invariant exponential identity fails at q^{n} t^{k}")));
    }
    let mut t = Table::new(format!("invariant Betti numbers, caps ({}, {})", caps.n, caps.k), &["n", "k", "p", "q"]);
    let mut rows = Vec::new();
    let mut grid_p = Vec::new();
    let mut grid_q = Vec::new();
    for n in 1..=caps.n {
        let p = inv.p_poly(n);
        let q = inv.q_poly(n);
        for k in 0..p.len().max(q.len()) {
            let get = |v: &[BigInt]| v.get(k).cloned().unwrap_or_else(BigInt::zero).to_string();
            t.push(vec![n.to_string(), k.to_string(), get(&p), get(&q)]);
        }
        let strs = |v: &[BigInt]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        rows.push(json!({"n": n, "p": strs(&p), "q": strs(&q)}));
        grid_p.push((n, strs(&p)));
        grid_q.push((n, strs(&q)));
    }
    let reports = invariant_lc_reports(&inv);
    let doc = json!({"command": "inv", "caps": caps, "series": rows, "log_concavity": reports});
    Ok(Output { json: doc, tables: vec![t, grid("p_{n,k}", grid_p), grid("q_{n,k}", grid_q), report_table(&reports)] })
}

/// Recursion against the tree oracle for 2 ≤ n ≤ n_max and every k.
pub fn cmd_oracle(cache: Option<&Cache>, n_max: u32) -> Result<Output> {
    if n_max > MAX_ORACLE_N {
        return Err(Error::OracleTooLarge { n: n_max, max: MAX_ORACLE_N });
    }
    let caps = Caps::new(n_max.max(2), n_max.saturating_sub(2));
    let table = rep_table(cache, caps)?;
    let mut t = Table::new(format!("tree oracle, n <= {n_max}"), &["n", "k", "trees", "h_terms", "status"]);
    let mut rows = Vec::new();
    for n in 2..=n_max {
        for k in 0..=n - 2 {
            let rec = table.q_nk(n, k);
            let orc = oracle_q(n, k, caps)?;
            if let Some((lambda, _, _)) = rec.sub(&orc)?.iter().next() {
                return Err(Error::Mismatch(format!(
                    "Q_{{{n},{k}}} at h_{lambda}: recursion {} vs oracle {}",
                    rec.coeff(lambda, 0),
                    orc.coeff(lambda, 0)
                )));
            }
            let trees = count_trees(n, k)?;
            t.push(vec![n.to_string(), k.to_string(), trees.to_string(), rec.len().to_string(), "match".into()]);
            rows.push(json!({"n": n, "k": k, "trees": trees, "h_terms": rec.len()}));
        }
    }
    let doc = json!({"command": "oracle", "n_max": n_max, "mismatches": 0, "cases": rows});
    Ok(Output { json: doc, tables: vec![t] })
}

pub fn report_table(reports: &[ConjectureReport]) -> Table {
    let mut t = Table::new("conjecture reports", &["conjecture", "n", "mode", "verdict", "tuples_checked", "witness"]);
    for r in reports {
        let verdict = serde_json::to_value(r.verdict).expect("serializable");
        t.push(vec![
            r.conjecture.clone(),
            r.n.to_string(),
            r.mode.clone(),
            verdict.as_str().unwrap_or_default().to_string(),
            r.tuples_checked.to_string(),
            r.witness.as_ref().map(Value::to_string).unwrap_or_default(),
        ]);
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// 𝔭_n and 𝔮_n log-concave for n ≤ cap.
    Lc,
    /// First n with ultra-log-concavity of 𝔮_n failing.
    Ultra,
    /// "Strict iff n even" at k = 1 for 𝔭.
    Pattern,
    /// Schur multiplicity sequences.
    Mult,
    /// Equivariant containment.
    Equiv,
    /// Ratio tables against their limits.
    Asymp,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lc" => Suite::Lc,
            "ultra" => Suite::Ultra,
            "pattern" => Suite::Pattern,
            "mult" => Suite::Mult,
            "equiv" => Suite::Equiv,
            "asymp" => Suite::Asymp,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidArgument(format!("unknown suite {other:?} (lc, ultra, pattern, mult, equiv, asymp, all)")))
            }
        })
    }
}

/// Knobs for `cmd_conj`. `n_max = None` picks each suite's default range.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjOptions {
    pub n_max: Option<u32>,
    pub side: Side,
    pub strong: bool,
    pub max_tuples: Option<usize>,
    pub k: u32,
    pub n_list: Vec<u32>,
}

impl Default for ConjOptions {
    fn default() -> Self {
        ConjOptions { n_max: None, side: Side::P, strong: true, max_tuples: None, k: 1, n_list: vec![100, 200, 300] }
    }
}

pub const DEFAULT_LC_N: u32 = 45;
pub const DEFAULT_ULTRA_N: u32 = 200;
pub const DEFAULT_MULT_N: u32 = 12;
pub const DEFAULT_EQUIV_N: u32 = 9;

pub fn cmd_conj(cache: Option<&Cache>, suite: Suite, opts: &ConjOptions) -> Result<Output> {
    let mut reports: Vec<ConjectureReport> = Vec::new();
    let mut asymp_rows = Vec::new();
    let run = |s: Suite| suite == s || suite == Suite::All;

    if run(Suite::Lc) {
        let n = opts.n_max.unwrap_or(DEFAULT_LC_N);
        let inv = inv_table(cache, Caps::new(n, n.saturating_sub(2)))?;
        reports.extend(invariant_lc_reports(&inv));
    }
    if run(Suite::Ultra) {
        let n = opts.n_max.unwrap_or(DEFAULT_ULTRA_N);
        let k = opts.k.max(1);
        let inv = inv_table(cache, Caps::new(n, k + 1))?;
        let found = find_ultra_lc_witness(&inv, k, n)?;
        let witness = found.map(|w| {
            let seq = inv.q_poly(w);
            let r = check_ultra_log_concave(&format!("q_{w}"), &seq, w - 2);
            json!({"n": w, "k": k, "sequence": seq.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "steps": r.steps})
        });
        reports.push(ConjectureReport {
            conjecture: "ultra_lc_q".into(),
            n,
            mode: format!("k={k}"),
            verdict: if witness.is_some() { Verdict::Fails } else { Verdict::Holds },
            tuples_checked: found.map_or(n.saturating_sub(k + 2), |w| w - k - 2) as u64,
            witness,
        });
    }
    if run(Suite::Pattern) {
        let n = opts.n_max.unwrap_or(41);
        let inv = inv_table(cache, Caps::new(n, 3))?;
        let bad = p_k1_equality_pattern(&inv, 5, n)?;
        reports.push(ConjectureReport {
            conjecture: "p_k1_strict_iff_even".into(),
            n,
            mode: "5..=n".into(),
            verdict: if bad.is_some() { Verdict::Fails } else { Verdict::Holds },
            tuples_checked: n.saturating_sub(4) as u64,
            witness: bad.map(|b| json!({"n": b})),
        });
    }
    if run(Suite::Mult) {
        let n_max = opts.n_max.unwrap_or(DEFAULT_MULT_N);
        let table = rep_table(cache, Caps::new(n_max, n_max.saturating_sub(2)))?;
        for n in 3..=n_max {
            reports.push(mult_lc_report(&table, n)?);
        }
    }
    if run(Suite::Equiv) {
        let n_max = opts.n_max.unwrap_or(DEFAULT_EQUIV_N);
        let table = rep_table(cache, Caps::new(n_max, n_max.saturating_sub(2)))?;
        for n in 3..=n_max {
            reports.push(check_equiv_lc(&table, n, opts.strong, opts.side, opts.max_tuples)?);
        }
    }
    if run(Suite::Asymp) {
        let n = opts.n_list.iter().copied().max().unwrap_or(3);
        let inv = inv_table(cache, Caps::new(n, opts.k + 1))?;
        asymp_rows = asymptotic_report(&inv, opts.k, &opts.n_list)?;
    }

    let mut tables = vec![report_table(&reports)];
    if !asymp_rows.is_empty() {
        let mut t = Table::new(format!("ratios at k = {}", opts.k), &["n", "q_lc", "p_lc", "q_ultra", "q_trend", "lc_limit", "ultra_limit"]);
        let f = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
        for r in &asymp_rows {
            t.push(vec![
                r.n.to_string(),
                f(r.q_lc_ratio),
                f(r.p_lc_ratio),
                f(r.q_ultra_ratio),
                format!("{:.6}", r.q_trend),
                format!("{:.6}", r.lc_target),
                format!("{:.6}", r.ultra_target),
            ]);
        }
        tables.push(t);
    }
    let doc = json!({"command": "conj", "reports": reports, "asymptotics": asymp_rows});
    Ok(Output { json: doc, tables })
}

/// φ by both routes plus the Euler identity. Disagreement is an engine
/// inconsistency.
pub fn cmd_manin(n_max: u32) -> Result<Output> {
    let report = manin_check(n_max)?;
    if let Some(n) = report.first_disagreement {
        return Err(Error::Mismatch(format!("φ_{n}: rank specialization and the functional equation disagree")));
    }
    if !report.euler_identity_holds {
        return Err(Error::Mismatch(format!("(1+χ)log(1+χ) = 2χ − q fails below q^{}", n_max + 1)));
    }
    let mut t = Table::new(format!("phi_n, n <= {n_max}"), &["n", "coefficients"]);
    for (i, p) in report.phi.iter().enumerate() {
        t.push(vec![(i + 1).to_string(), p.join(" ")]);
    }
    let doc = json!({"command": "manin", "report": report});
    Ok(Output { json: doc, tables: vec![t] })
}
