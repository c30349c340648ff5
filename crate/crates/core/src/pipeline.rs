//! Routing of a pair `(C, q)` and a parity of `k` through the sufficient
//! conditions for the asymptotic Fermat property, and the survey over
//! `C ≤ 70`, `q < 100`.
//!
//! 1. `Cqᵏ ≢ 7 (mod 8)` (or `C` even): the equation has no solutions with
//!    `z` even at all, the pair is [`Status::Vacuous`].
//! 2. A MAIN solution with `γ ≡ k (mod 2)` and `m > 6` obstructs.
//! 3. `k` odd: nothing else to check (path `a`).
//! 4. `k` even and `(−C/q) = −1`: path `b`.
//! 5. `k` even, `q ≢ 7 (mod 8)`: RN must have no solution (path `c`).
//! 6. `k` even, `q ≡ 7 (mod 8)`: RN and QPOW must have none (path `d`).
//!
//! Every "satisfied" verdict is relative to the search box.

use std::fmt;
use std::io::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::candidates::{realize_candidates, ShapeCase};
use crate::diophantine::{solve_main, solve_qpow, solve_rn, Equation, ObstructionSolution, THRESHOLD_M};
use crate::error::{Error, Result};
use crate::intmath::{is_prime_u64, legendre, primes_up_to, squarefree_check};
use crate::sieve::{galois_witness, WitnessOutcome, DEFAULT_WITNESS_BOUND};
use crate::Parity;

/// Exponent box `0 ≤ m ≤ m_max`, `0 ≤ γ ≤ gamma_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBox {
    pub m_max: u32,
    pub gamma_max: u32,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox {
            m_max: 200,
            gamma_max: 200,
        }
    }
}

/// Least `m` at which a QPOW solution obstructs.
///
/// `Strict` is `m > 6`, as for the other two equations. `Inclusive` also
/// counts `m = 6`, which moves two even pairs from satisfied to obstructed;
/// see the guide's survey chapter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QpowBoundary {
    #[default]
    Strict,
    Inclusive,
}

impl QpowBoundary {
    pub fn min_m(self) -> u32 {
        match self {
            QpowBoundary::Strict => THRESHOLD_M,
            QpowBoundary::Inclusive => THRESHOLD_M - 1,
        }
    }
}

impl std::str::FromStr for QpowBoundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(QpowBoundary::Strict),
            "inclusive" => Ok(QpowBoundary::Inclusive),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTask {
    pub c: u64,
    pub q: u64,
    pub parity: Parity,
    pub search_box: SearchBox,
    pub witness_bound: u64,
    pub qpow_boundary: QpowBoundary,
    /// Also run RN and QPOW on path `b`; the results go to the notes only.
    pub diagnose_b: bool,
    /// Look for Galois-sieve primes for the curves behind each witness.
    pub sieve_witnesses: bool,
}

impl PairTask {
    pub fn new(c: u64, q: u64, parity: Parity) -> Self {
        PairTask {
            c,
            q,
            parity,
            search_box: SearchBox::default(),
            witness_bound: DEFAULT_WITNESS_BOUND,
            qpow_boundary: QpowBoundary::Strict,
            diagnose_b: false,
            sieve_witnesses: false,
        }
    }

    pub fn with_box(mut self, m_max: u32, gamma_max: u32) -> Self {
        self.search_box = SearchBox { m_max, gamma_max };
        self
    }

    fn validate(&self) -> Result<()> {
        if self.c == 0 || !squarefree_check(self.c) {
            return Err(Error::NotSquarefree(self.c));
        }
        if self.q == 2 || !is_prime_u64(self.q) {
            return Err(Error::NotOddPrime(self.q.to_string()));
        }
        if self.c % self.q == 0 {
            return Err(Error::PairOutsideEnumeration(format!(
                "q = {} divides C = {}",
                self.q, self.c
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Vacuous,
    SatisfiedWithinBox,
    Obstructed,
    HypothesesFail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Vacuous => "VACUOUS",
            Status::SatisfiedWithinBox => "SATISFIED_WITHIN_BOX",
            Status::Obstructed => "OBSTRUCTED",
            Status::HypothesesFail => "HYPOTHESES_FAIL",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The step of the routing that decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    /// Congruence filter failed.
    Mod8,
    /// MAIN produced a witness.
    Main,
    A,
    B,
    C,
    D,
    /// The box cannot reach the threshold.
    Config,
}

impl Path {
    pub fn as_str(self) -> &'static str {
        match self {
            Path::Mod8 => "mod8",
            Path::Main => "main",
            Path::A => "a",
            Path::B => "b",
            Path::C => "c",
            Path::D => "d",
            Path::Config => "config",
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub c: u64,
    pub q: u64,
    pub parity: Parity,
    pub status: Status,
    pub path: Path,
    /// Solutions at or above the threshold that caused an obstruction.
    pub witnesses: Vec<ObstructionSolution>,
    /// Solutions found below the threshold or off parity; informational.
    pub below_threshold: Vec<ObstructionSolution>,
    pub notes: Vec<String>,
}

/// `C ≡ 7 (mod 8)` for even `k`, `Cq ≡ 7 (mod 8)` for odd `k`; even `C`
/// always fails.
pub fn mod8_filter(c: u64, q: u64, parity: Parity) -> bool {
    if c % 2 == 0 {
        return false;
    }
    let lhs = match parity {
        Parity::Even => c % 8,
        Parity::Odd => (c % 8) * (q % 8) % 8,
    };
    lhs == 7
}

struct Router<'a> {
    task: &'a PairTask,
    witnesses: Vec<ObstructionSolution>,
    below: Vec<ObstructionSolution>,
    notes: Vec<String>,
}

impl Router<'_> {
    /// Splits solutions into witnesses and the rest; true if any witness.
    fn absorb(&mut self, sols: Vec<ObstructionSolution>, min_m: u32) -> bool {
        let before = self.witnesses.len();
        for s in sols {
            if s.meets(min_m) {
                self.witnesses.push(s);
            } else {
                self.below.push(s);
            }
        }
        self.witnesses.len() > before
    }

    fn rn(&self) -> Vec<ObstructionSolution> {
        let b = self.task.search_box;
        solve_rn(self.task.c, self.task.q, b.m_max, b.gamma_max)
    }

    fn qpow(&mut self) -> Vec<ObstructionSolution> {
        let b = self.task.search_box;
        let found = solve_qpow(self.task.c, self.task.q, b.m_max, b.gamma_max);
        if !found.off_parity.is_empty() {
            self.notes.push(format!(
                "qpow: {} off-parity solution(s) ignored",
                found.off_parity.len()
            ));
            self.below.extend(found.off_parity);
        }
        found.conforming
    }

    fn finish(self, status: Status, path: Path) -> Verdict {
        Verdict {
            c: self.task.c,
            q: self.task.q,
            parity: self.task.parity,
            status,
            path,
            witnesses: self.witnesses,
            below_threshold: self.below,
            notes: self.notes,
        }
    }
}

/// Cases whose curves a solution of `eq` would realize.
fn cases_for(eq: Equation, parity: Parity) -> &'static [ShapeCase] {
    match (eq, parity) {
        (Equation::Main, Parity::Odd) => &[ShapeCase::A, ShapeCase::B],
        (Equation::Main, Parity::Even) => &[ShapeCase::BPrime, ShapeCase::EPrime],
        (Equation::Rn, _) => &[ShapeCase::CPrime, ShapeCase::DPrime],
        (Equation::Qpow, _) => &[ShapeCase::APrime, ShapeCase::FPrime],
    }
}

/// For each witness, the curves it realizes and whether a Galois-sieve
/// prime rules them out.
fn sieve_notes(task: &PairTask, witnesses: &[ObstructionSolution]) -> Vec<String> {
    let mut notes = Vec::new();
    let mut excluded: Vec<u64> = vec![2, task.q];
    excluded.extend(crate::intmath::prime_divisors_u64(task.c));
    for w in witnesses {
        for &case in cases_for(w.equation, task.parity) {
            let Ok(real) = realize_candidates(case, w, task.c, task.q) else {
                continue;
            };
            for cand in real.accepted {
                let outcome = galois_witness(task.c, task.q, task.parity, &cand.curve, task.witness_bound, &excluded);
                let verdict = match outcome {
                    WitnessOutcome::Found { ell } => format!("sieve prime {ell}"),
                    WitnessOutcome::Impossible { reason } => format!("no sieve prime: {reason}"),
                    WitnessOutcome::Exhausted { bound } => format!("no sieve prime below {bound}"),
                };
                notes.push(format!("{} case {case}: {}: {verdict}", w.triple(), cand.curve));
            }
        }
    }
    notes
}

pub fn check_pair(task: &PairTask) -> Result<Verdict> {
    task.validate()?;
    let mut r = Router {
        task,
        witnesses: Vec::new(),
        below: Vec::new(),
        notes: Vec::new(),
    };
    if !mod8_filter(task.c, task.q, task.parity) {
        return Ok(r.finish(Status::Vacuous, Path::Mod8));
    }
    let bx = task.search_box;
    if bx.m_max < THRESHOLD_M {
        r.notes.push(format!("m_max = {} cannot reach m > 6", bx.m_max));
        return Ok(r.finish(Status::HypothesesFail, Path::Config));
    }
    let main = solve_main(task.c, task.q, task.parity, bx.m_max, bx.gamma_max);
    let mut verdict = if r.absorb(main, THRESHOLD_M) {
        r.finish(Status::Obstructed, Path::Main)
    } else if task.parity == Parity::Odd {
        r.finish(Status::SatisfiedWithinBox, Path::A)
    } else if legendre(&-BigInt::from(task.c), task.q)? == -1 {
        if task.diagnose_b {
            let mut extra = r.rn();
            extra.extend(r.qpow());
            let hits: Vec<String> = extra
                .iter()
                .filter(|s| s.meets(task.qpow_boundary.min_m().min(THRESHOLD_M)))
                .map(|s| format!("{} {}", s.equation, s.triple()))
                .collect();
            if !hits.is_empty() {
                r.notes.push(format!("diagnostic under (b): {}", hits.join(", ")));
            }
        }
        r.finish(Status::SatisfiedWithinBox, Path::B)
    } else if task.q % 8 != 7 {
        let rn = r.rn();
        if r.absorb(rn, THRESHOLD_M) {
            r.finish(Status::Obstructed, Path::C)
        } else {
            r.finish(Status::SatisfiedWithinBox, Path::C)
        }
    } else {
        let rn = r.rn();
        let hit_rn = r.absorb(rn, THRESHOLD_M);
        let qp = r.qpow();
        let hit_qp = r.absorb(qp, task.qpow_boundary.min_m());
        if hit_rn || hit_qp {
            r.finish(Status::Obstructed, Path::D)
        } else {
            r.finish(Status::SatisfiedWithinBox, Path::D)
        }
    };
    for w in &verdict.witnesses {
        if !w.verify(task.c, task.q) {
            return Err(Error::Invariant(format!("witness {w} fails its identity")));
        }
    }
    if task.sieve_witnesses {
        let notes = sieve_notes(task, &verdict.witnesses);
        verdict.notes.extend(notes);
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyParams {
    #[serde(rename = "C_max")]
    pub c_max: u64,
    pub q_max: u64,
    #[serde(rename = "box")]
    pub search_box: SearchBox,
    #[serde(skip)]
    pub parities: Vec<Parity>,
    pub qpow_boundary: QpowBoundary,
    #[serde(skip)]
    pub witness_bound: u64,
}

impl Default for SurveyParams {
    fn default() -> Self {
        SurveyParams {
            c_max: 70,
            q_max: 97,
            search_box: SearchBox::default(),
            parities: vec![Parity::Even, Parity::Odd],
            qpow_boundary: QpowBoundary::Strict,
            witness_bound: DEFAULT_WITNESS_BOUND,
        }
    }
}

/// Pairs `(C, q, parity)` with `C` squarefree, `q` an odd prime not dividing
/// `C`, and the congruence filter passing, sorted.
pub fn enumerate_pairs(params: &SurveyParams) -> Vec<(u64, u64, Parity)> {
    let primes = primes_up_to(params.q_max);
    let mut out = Vec::new();
    for c in (1..=params.c_max).filter(|&c| squarefree_check(c)) {
        for q in primes.iter().filter(|&q| q != 2 && c % q != 0) {
            for &parity in &params.parities {
                if mod8_filter(c, q, parity) {
                    out.push((c, q, parity));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub pairs: usize,
    pub satisfied: usize,
    pub obstructed: usize,
    pub vacuous: usize,
}

impl Totals {
    fn of<'a>(rows: impl Iterator<Item = &'a Verdict>) -> Self {
        let mut t = Totals::default();
        for v in rows {
            t.pairs += 1;
            match v.status {
                Status::SatisfiedWithinBox => t.satisfied += 1,
                Status::Obstructed => t.obstructed += 1,
                Status::Vacuous => t.vacuous += 1,
                Status::HypothesesFail => {}
            }
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyReport {
    pub params: SurveyParams,
    pub rows: Vec<Verdict>,
}

impl SurveyReport {
    pub fn totals(&self) -> Totals {
        Totals::of(self.rows.iter())
    }

    pub fn totals_for(&self, parity: Parity) -> Totals {
        Totals::of(self.rows.iter().filter(|v| v.parity == parity))
    }

    pub fn row(&self, c: u64, q: u64, parity: Parity) -> Option<&Verdict> {
        self.rows.iter().find(|v| (v.c, v.q, v.parity) == (c, q, parity))
    }
}

/// Runs [`check_pair`] on every enumerated pair, in parallel, with rows in
/// `(C, q, parity)` order.
pub fn survey(params: &SurveyParams) -> Result<SurveyReport> {
    let tasks: Vec<PairTask> = enumerate_pairs(params)
        .into_iter()
        .map(|(c, q, parity)| PairTask {
            search_box: params.search_box,
            witness_bound: params.witness_bound,
            qpow_boundary: params.qpow_boundary,
            ..PairTask::new(c, q, parity)
        })
        .collect();
    let rows = tasks.par_iter().map(check_pair).collect::<Result<Vec<_>>>()?;
    Ok(SurveyReport {
        params: params.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "table" | "text-table" => Ok(ReportFormat::Table),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct WitnessOut {
    t: serde_json::Number,
    gamma: u32,
    m: u32,
    equation: Equation,
}

#[derive(Serialize)]
struct RowOut<'a> {
    #[serde(rename = "C")]
    c: u64,
    q: u64,
    parity: Parity,
    status: Status,
    hypothesis_path: Path,
    witnesses: Vec<WitnessOut>,
    notes: &'a [String],
}

#[derive(Serialize)]
struct ParityOut {
    parity: Parity,
    pairs: usize,
    satisfied: usize,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    params: &'a SurveyParams,
    rows: Vec<RowOut<'a>>,
    totals: Totals,
    by_parity: Vec<ParityOut>,
}

fn witness_out(w: &ObstructionSolution) -> Result<WitnessOut> {
    Ok(WitnessOut {
        t: w.t.to_string().parse().map_err(|e| Error::Render(format!("{e}")))?,
        gamma: w.gamma,
        m: w.m,
        equation: w.equation,
    })
}

fn witnesses_flat(v: &Verdict) -> String {
    v.witnesses
        .iter()
        .map(ObstructionSolution::triple)
        .collect::<Vec<_>>()
        .join(";")
}

fn render_json(report: &SurveyReport) -> Result<String> {
    let rows = report
        .rows
        .iter()
        .map(|v| {
            Ok(RowOut {
                c: v.c,
                q: v.q,
                parity: v.parity,
                status: v.status,
                hypothesis_path: v.path,
                witnesses: v.witnesses.iter().map(witness_out).collect::<Result<_>>()?,
                notes: &v.notes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let out = ReportOut {
        params: &report.params,
        rows,
        totals: report.totals(),
        by_parity: report
            .params
            .parities
            .iter()
            .map(|&p| {
                let t = report.totals_for(p);
                ParityOut {
                    parity: p,
                    pairs: t.pairs,
                    satisfied: t.satisfied,
                }
            })
            .collect(),
    };
    serde_json::to_string_pretty(&out)
        .map(|s| s + "\n")
        .map_err(|e| Error::Render(e.to_string()))
}

fn render_csv(report: &SurveyReport) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let err = |e: csv::Error| Error::Render(e.to_string());
    w.write_record(["C", "q", "parity", "status", "hypothesis_path", "witnesses", "notes"])
        .map_err(err)?;
    for v in &report.rows {
        w.write_record([
            v.c.to_string(),
            v.q.to_string(),
            v.parity.to_string(),
            v.status.to_string(),
            v.path.to_string(),
            witnesses_flat(v),
            v.notes.join(" | "),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Render(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| Error::Render(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Render(e.to_string()))
}

fn render_table(report: &SurveyReport) -> Result<String> {
    let mut out = Vec::new();
    let p = &report.params;
    let io = |e: std::io::Error| Error::Render(e.to_string());
    writeln!(
        out,
        "C <= {}, q <= {}, box m <= {}, gamma <= {}, qpow boundary {:?}",
        p.c_max, p.q_max, p.search_box.m_max, p.search_box.gamma_max, p.qpow_boundary
    )
    .map_err(io)?;
    writeln!(out, "{:<8} {:>6} {:>10}", "k", "pairs", "satisfied").map_err(io)?;
    for &parity in &p.parities {
        let t = report.totals_for(parity);
        writeln!(out, "{:<8} {:>6} {:>10}", parity.as_str(), t.pairs, t.satisfied).map_err(io)?;
    }
    let t = report.totals();
    writeln!(out, "{:<8} {:>6} {:>10}", "TOTAL", t.pairs, t.satisfied).map_err(io)?;
    let obstructed: Vec<String> = report
        .rows
        .iter()
        .filter(|v| v.status == Status::Obstructed)
        .map(|v| format!("({}, {}, {}) {} {}", v.c, v.q, v.parity, v.path, witnesses_flat(v)))
        .collect();
    if !obstructed.is_empty() {
        writeln!(out, "\nobstructed:").map_err(io)?;
        for line in obstructed {
            writeln!(out, "  {line}").map_err(io)?;
        }
    }
    String::from_utf8(out).map_err(|e| Error::Render(e.to_string()))
}

pub fn render_report(report: &SurveyReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => render_json(report),
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Table => render_table(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(v: &Verdict) -> Vec<(u64, u32, u32)> {
        use num_traits::ToPrimitive;
        v.witnesses
            .iter()
            .map(|w| (w.t.to_u64().unwrap(), w.gamma, w.m))
            .collect()
    }

    #[test]
    fn mod8_examples() {
        assert!(mod8_filter(7, 3, Parity::Even));
        assert!(!mod8_filter(7, 3, Parity::Odd));
        assert!(mod8_filter(3, 5, Parity::Odd));
        assert!(!mod8_filter(14, 3, Parity::Even));
    }

    #[test]
    fn check_pair_examples() {
        let v = check_pair(&PairTask::new(7, 3, Parity::Even)).unwrap();
        assert_eq!((v.status, v.path), (Status::Obstructed, Path::Main));
        assert!(triples(&v).contains(&(5, 4, 8)));

        let v = check_pair(&PairTask::new(7, 11, Parity::Even)).unwrap();
        assert_eq!(v.status, Status::Obstructed);
        assert!(triples(&v).contains(&(1, 2, 7)));

        // (−15/7) = −1, but 15·33² + 7² = 2¹⁴ obstructs before path b is reached.
        let v = check_pair(&PairTask::new(15, 7, Parity::Even)).unwrap();
        assert_eq!((v.status, v.path), (Status::Obstructed, Path::Main));
        assert_eq!(triples(&v), vec![(33, 2, 14)]);

        let v = check_pair(&PairTask::new(7, 17, Parity::Even)).unwrap();
        assert_eq!((v.status, v.path), (Status::SatisfiedWithinBox, Path::B));
    }

    #[test]
    fn check_pair_rejects_bad_input() {
        assert!(matches!(
            check_pair(&PairTask::new(21, 3, Parity::Odd)),
            Err(Error::PairOutsideEnumeration(_))
        ));
        assert_eq!(
            check_pair(&PairTask::new(12, 5, Parity::Odd)),
            Err(Error::NotSquarefree(12))
        );
        assert!(check_pair(&PairTask::new(7, 9, Parity::Odd)).is_err());
        assert!(check_pair(&PairTask::new(7, 2, Parity::Odd)).is_err());
    }

    #[test]
    fn vacuous_and_restricted() {
        let v = check_pair(&PairTask::new(7, 3, Parity::Odd)).unwrap();
        assert_eq!((v.status, v.path), (Status::Vacuous, Path::Mod8));
        let v = check_pair(&PairTask::new(7, 3, Parity::Even).with_box(6, 40)).unwrap();
        assert_eq!(v.status, Status::HypothesesFail);
    }

    #[test]
    fn qpow_boundary_policy() {
        // 7 + 2⁶ = 71 sits exactly on the boundary.
        let strict = check_pair(&PairTask::new(7, 71, Parity::Even)).unwrap();
        let mut task = PairTask::new(7, 71, Parity::Even);
        task.qpow_boundary = QpowBoundary::Inclusive;
        let inclusive = check_pair(&task).unwrap();
        assert_eq!(strict.path, Path::D);
        assert_eq!(strict.status, Status::SatisfiedWithinBox);
        assert_eq!(inclusive.status, Status::Obstructed);
        assert_eq!(triples(&inclusive), vec![(1, 1, 6)]);
    }

    #[test]
    fn pair_counts() {
        let pairs = enumerate_pairs(&SurveyParams::default());
        let even = pairs.iter().filter(|p| p.2 == Parity::Even).count();
        assert_eq!((even, pairs.len() - even), (158, 172));
    }

    #[test]
    fn renders() {
        let params = SurveyParams {
            c_max: 0,
            ..SurveyParams::default()
        };
        let empty = survey(&params).unwrap();
        let json = render_report(&empty, ReportFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rows"], serde_json::json!([]));
        assert_eq!(v["totals"]["pairs"], 0);

        let row = check_pair(&PairTask::new(7, 3, Parity::Even)).unwrap();
        let report = SurveyReport {
            params: SurveyParams::default(),
            rows: vec![row],
        };
        let csv = render_report(&report, ReportFormat::Csv).unwrap();
        let line = csv.lines().nth(1).unwrap();
        assert!(line.starts_with("7,3,even,OBSTRUCTED,main,(5;4;8)"), "{line}");
        let table = render_report(&report, ReportFormat::Table).unwrap();
        assert!(table.contains("TOTAL"));
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
