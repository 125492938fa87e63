//! Exact rational linear feasibility with Farkas certificates.
//!
//! A [`LinearSystem`] is a set of equality rows and `>=` inequality rows over
//! free rational variables. [`solve_feasibility`] either returns a point
//! satisfying every row exactly or a [`FarkasCertificate`]: multipliers,
//! nonnegative on the inequality rows, whose row combination has zero
//! coefficients everywhere but a strictly positive right-hand side. Both
//! outcomes are re-checked in exact arithmetic before they are returned.
//!
//! The core is a phase-1 simplex with Bland's rule on sparse rows. Two
//! standard reductions keep the tableaus small for the systems built here:
//! single-variable equality rows are substituted away up front, and
//! inequality rows enter the working set lazily, only once the current
//! candidate point violates them. Both reductions carry enough bookkeeping
//! to map certificates back to the original rows.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::time::Instant;

use crate::rat::{format_rational, parse_rational, rat, Rational};
use crate::setfn::{SetFunction, SubsetMask};
use crate::tensor::ProductGround;
use crate::{Error, Result};

/// One constraint row: sparse coefficients over variable indices and a
/// right-hand side. The sense (equality or `>=`) is carried by which list of
/// the owning [`LinearSystem`] the row lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    coeffs: Vec<(usize, Rational)>,
    rhs: Rational,
}

impl Row {
    /// Normalizes: merges duplicate indices, drops zeros, sorts by index.
    pub fn new(coeffs: Vec<(usize, Rational)>, rhs: Rational) -> Self {
        let mut coeffs = coeffs;
        coeffs.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(coeffs.len());
        for (i, c) in coeffs {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Row {
            coeffs: merged,
            rhs,
        }
    }

    pub fn coeffs(&self) -> &[(usize, Rational)] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, c) in &self.coeffs {
            acc += c * &point[*i];
        }
        acc
    }
}

/// An exact rational constraint system over free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub eq_rows: Vec<Row>,
    pub ineq_rows: Vec<Row>,
    /// Diagnostic names, one per variable.
    pub var_names: Vec<String>,
}

impl LinearSystem {
    pub fn new(num_vars: usize, var_names: Vec<String>) -> Self {
        debug_assert!(var_names.is_empty() || var_names.len() == num_vars);
        LinearSystem {
            num_vars,
            eq_rows: Vec::new(),
            ineq_rows: Vec::new(),
            var_names,
        }
    }

    pub fn push_eq(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) {
        self.eq_rows.push(Row::new(coeffs, rhs));
    }

    pub fn push_ineq(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) {
        self.ineq_rows.push(Row::new(coeffs, rhs));
    }

    pub fn num_rows(&self) -> usize {
        self.eq_rows.len() + self.ineq_rows.len()
    }

    /// SHA-256 over a canonical text encoding of the rows, so certificates
    /// and witnesses can be tied to the exact system they were issued for.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("vars {}\n", self.num_vars));
        for (tag, rows) in [("eq", &self.eq_rows), ("ge", &self.ineq_rows)] {
            for row in rows {
                h.update(tag);
                for (i, c) in &row.coeffs {
                    h.update(format!(" {}:{}", i, format_rational(c)));
                }
                h.update(format!(" rhs {}\n", format_rational(&row.rhs)));
            }
        }
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Multipliers over the rows of a system, equality rows first. Nonnegative
/// on inequality rows; combining the rows with them yields 0 >= c with c > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

/// Result of a feasibility run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

/// Knobs for long runs; the defaults solve unconditionally.
#[derive(Default)]
pub struct SolveOptions {
    /// Abort with [`Error::BudgetExceeded`] past this instant.
    pub deadline: Option<Instant>,
    /// Emit one progress line per working-set round to stderr.
    pub progress: bool,
}

/// Checks a claimed certificate against the system, in exact arithmetic:
/// lengths match, inequality multipliers are nonnegative, the combined
/// coefficient vector is zero, and the combined right-hand side is positive.
pub fn verify_certificate(sys: &LinearSystem, cert: &FarkasCertificate) -> Result<bool> {
    if cert.multipliers.len() != sys.num_rows() {
        return Err(Error::CertificateLength {
            expected: sys.num_rows(),
            got: cert.multipliers.len(),
        });
    }
    let (eq_mult, ineq_mult) = cert.multipliers.split_at(sys.eq_rows.len());
    if ineq_mult.iter().any(|m| m.is_negative()) {
        return Ok(false);
    }
    let mut combined = vec![Rational::zero(); sys.num_vars];
    let mut rhs = Rational::zero();
    let rows = sys.eq_rows.iter().chain(sys.ineq_rows.iter());
    for (row, m) in rows.zip(eq_mult.iter().chain(ineq_mult.iter())) {
        if m.is_zero() {
            continue;
        }
        for (i, c) in &row.coeffs {
            combined[*i] += m * c;
        }
        rhs += m * &row.rhs;
    }
    Ok(combined.iter().all(Rational::is_zero) && rhs.is_positive())
}

/// Checks a claimed feasible point against every row, exactly.
pub fn verify_point(sys: &LinearSystem, point: &[Rational]) -> Result<bool> {
    if point.len() != sys.num_vars {
        return Err(Error::PointLength {
            expected: sys.num_vars,
            got: point.len(),
        });
    }
    Ok(sys.eq_rows.iter().all(|r| r.eval(point) == r.rhs)
        && sys.ineq_rows.iter().all(|r| r.eval(point) >= r.rhs))
}

/// Decides feasibility with no time budget; see [`solve_feasibility_with`].
pub fn solve_feasibility(sys: &LinearSystem) -> Outcome {
    solve_feasibility_with(sys, &SolveOptions::default()).expect("no deadline set")
}

/// Decides feasibility of the system. The returned point satisfies every row
/// exactly; the returned certificate passes [`verify_certificate`]. Errors
/// only when the configured deadline runs out.
pub fn solve_feasibility_with(sys: &LinearSystem, opts: &SolveOptions) -> Result<Outcome> {
    let outcome = Solver::new(sys, opts).run()?;
    match &outcome {
        Outcome::Feasible(point) => {
            debug_assert!(verify_point(sys, point).unwrap());
        }
        Outcome::Infeasible(cert) => {
            assert!(
                verify_certificate(sys, cert).unwrap(),
                "internal error: simplex produced an invalid Farkas certificate"
            );
        }
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// presolve + row generation

/// Original row id: equality rows come first, like certificate order.
type OrigId = usize;

/// A row after substitution of fixed variables. `trace` records the equality
/// rows folded in: reduced = original + sum over trace of (multiplier * eq row).
#[derive(Clone, Debug)]
struct ReducedRow {
    coeffs: Vec<(usize, Rational)>,
    rhs: Rational,
    orig: OrigId,
    trace: Vec<(OrigId, Rational)>,
}

impl ReducedRow {
    fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, c) in &self.coeffs {
            acc += c * &point[*i];
        }
        acc
    }
}

/// The consumed defining row of a fixed variable.
#[derive(Clone, Debug)]
struct VarDef {
    value: Rational,
    /// Coefficient of the variable in its defining row.
    coeff: Rational,
    orig: OrigId,
    trace: Vec<(OrigId, Rational)>,
}

struct Solver<'a> {
    sys: &'a LinearSystem,
    opts: &'a SolveOptions,
    pivots: u64,
}

/// How many violated rows join the working set per round.
const BATCH: usize = 256;

impl<'a> Solver<'a> {
    fn new(sys: &'a LinearSystem, opts: &'a SolveOptions) -> Self {
        Solver {
            sys,
            opts,
            pivots: 0,
        }
    }

    fn certificate(&self, entries: Vec<(OrigId, Rational)>) -> FarkasCertificate {
        let mut multipliers = vec![Rational::zero(); self.sys.num_rows()];
        for (orig, m) in entries {
            multipliers[orig] += m;
        }
        FarkasCertificate { multipliers }
    }

    /// Certificate from multipliers over reduced rows.
    fn certificate_from_reduced(&self, rows: &[(&ReducedRow, Rational)]) -> FarkasCertificate {
        let mut entries = Vec::new();
        for (row, m) in rows {
            if m.is_zero() {
                continue;
            }
            entries.push((row.orig, m.clone()));
            for (orig, t) in &row.trace {
                entries.push((*orig, m * t));
            }
        }
        self.certificate(entries)
    }

    fn run(&mut self) -> Result<Outcome> {
        let n = self.sys.num_vars;
        let mut fixed: Vec<Option<Rational>> = vec![None; n];

        // reduce every row against the (initially empty) fixed set lazily:
        // rows are stored unreduced and substitutions are applied in passes
        let mut eqs: Vec<ReducedRow> = Vec::new();
        let mut ineqs: Vec<ReducedRow> = Vec::new();
        for (k, row) in self.sys.eq_rows.iter().enumerate() {
            eqs.push(ReducedRow {
                coeffs: row.coeffs.clone(),
                rhs: row.rhs.clone(),
                orig: k,
                trace: Vec::new(),
            });
        }
        let base = self.sys.eq_rows.len();
        for (k, row) in self.sys.ineq_rows.iter().enumerate() {
            ineqs.push(ReducedRow {
                coeffs: row.coeffs.clone(),
                rhs: row.rhs.clone(),
                orig: base + k,
                trace: Vec::new(),
            });
        }

        // substitute single-variable equality rows until none are left
        loop {
            let Some(pos) = eqs.iter().position(|r| r.coeffs.len() == 1) else {
                break;
            };
            let def_row = eqs.swap_remove(pos);
            let (var, coeff) = def_row.coeffs[0].clone();
            let value = &def_row.rhs / &coeff;
            debug_assert!(fixed[var].is_none(), "fixed variables are substituted");
            fixed[var] = Some(value.clone());
            let def = VarDef {
                value,
                coeff,
                orig: def_row.orig,
                trace: def_row.trace,
            };
            for row in eqs.iter_mut().chain(ineqs.iter_mut()) {
                substitute(row, var, &def);
            }
            // drop trivially satisfied equality rows; a contradictory one is
            // an immediate certificate
            let mut contradiction = None;
            eqs.retain(|r| {
                if !r.coeffs.is_empty() {
                    return true;
                }
                if !r.rhs.is_zero() && contradiction.is_none() {
                    contradiction = Some(r.clone());
                }
                false
            });
            if let Some(row) = contradiction {
                let m = row.rhs.recip();
                return Ok(Outcome::Infeasible(
                    self.certificate_from_reduced(&[(&row, m)]),
                ));
            }
        }

        // constant inequality rows: 0 >= rhs
        let mut contradiction = None;
        ineqs.retain(|r| {
            if !r.coeffs.is_empty() {
                return true;
            }
            if r.rhs.is_positive() && contradiction.is_none() {
                contradiction = Some(r.clone());
            }
            false
        });
        if let Some(row) = contradiction {
            return Ok(Outcome::Infeasible(
                self.certificate_from_reduced(&[(&row, rat(1))]),
            ));
        }

        // lazy working set over the reduced inequality rows
        let mut point: Vec<Rational> = (0..n)
            .map(|v| fixed[v].clone().unwrap_or_else(Rational::zero))
            .collect();
        let mut in_working = vec![false; ineqs.len()];
        let mut working: Vec<usize> = Vec::new();
        let mut round = 0u64;
        loop {
            round += 1;
            let lp_rows: Vec<(&ReducedRow, bool)> = eqs
                .iter()
                .map(|r| (r, true))
                .chain(working.iter().map(|&i| (&ineqs[i], false)))
                .collect();
            match self.phase1(&lp_rows)? {
                Phase1::Infeasible(mult) => {
                    let pairs: Vec<(&ReducedRow, Rational)> = lp_rows
                        .iter()
                        .map(|(r, _)| *r)
                        .zip(mult)
                        .collect();
                    return Ok(Outcome::Infeasible(self.certificate_from_reduced(&pairs)));
                }
                Phase1::Feasible(assignment) => {
                    for (v, val) in assignment {
                        point[v] = val;
                    }
                }
            }
            let mut violated: Vec<(usize, Rational)> = Vec::new();
            for (i, row) in ineqs.iter().enumerate() {
                if in_working[i] {
                    continue;
                }
                let gap = &row.rhs - row.eval(&point);
                if gap.is_positive() {
                    violated.push((i, gap));
                }
            }
            if violated.is_empty() {
                return Ok(Outcome::Feasible(point));
            }
            violated.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            for (i, _) in violated.iter().take(BATCH) {
                in_working[*i] = true;
                working.push(*i);
            }
            if self.opts.progress {
                eprintln!(
                    "feasibility round {round}: {} working rows (+{} violated), {} pivots",
                    working.len(),
                    violated.len().min(BATCH),
                    self.pivots
                );
            }
        }
    }

    /// Phase-1 simplex over the given rows (`true` marks equality rows).
    /// Feasible: sparse assignment for the variables appearing in the rows.
    /// Infeasible: one multiplier per input row, nonnegative on `>=` rows.
    fn phase1(&mut self, rows: &[(&ReducedRow, bool)]) -> Result<Phase1> {
        if rows.is_empty() {
            return Ok(Phase1::Feasible(Vec::new()));
        }
        // local column space: two columns per active variable
        let mut vars: Vec<usize> = rows
            .iter()
            .flat_map(|(r, _)| r.coeffs.iter().map(|(i, _)| *i))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        let col_of = |v: usize| -> usize { vars.binary_search(&v).expect("active var") };
        let nv = vars.len();
        let m = rows.len();
        let num_surplus = rows.iter().filter(|(_, is_eq)| !is_eq).count();
        let mut tab = Tableau::new(2 * nv + num_surplus + m);

        let mut surplus_at = 2 * nv;
        let mut artificial_at = 2 * nv + num_surplus;
        let mut id_col = Vec::with_capacity(m); // the column that is e_r
        let mut id_cost = Vec::with_capacity(m); // its phase-1 cost
        let mut flipped = Vec::with_capacity(m);
        for (row, is_eq) in rows {
            // flip so the rhs is nonnegative; for >= rows flip zero rhs too,
            // which lets the surplus column start basic
            let flip = row.rhs.is_negative() || (!is_eq && !row.rhs.is_positive());
            flipped.push(flip);
            let sign = if flip { -Rational::one() } else { Rational::one() };
            let mut entries: Vec<(usize, Rational)> = Vec::with_capacity(2 * row.coeffs.len() + 2);
            for (v, c) in &row.coeffs {
                let c = c * &sign;
                entries.push((2 * col_of(*v), c.clone()));
                entries.push((2 * col_of(*v) + 1, -c));
            }
            if !is_eq {
                entries.push((surplus_at, -&sign));
            }
            let rhs = &row.rhs * &sign;
            let basic = if !is_eq && flip {
                // surplus coefficient is +1 here
                surplus_at
            } else {
                entries.push((artificial_at, Rational::one()));
                artificial_at += 1;
                artificial_at - 1
            };
            if !is_eq {
                surplus_at += 1;
            }
            id_col.push(basic);
            id_cost.push(if basic >= 2 * nv + num_surplus {
                Rational::one()
            } else {
                Rational::zero()
            });
            tab.push_row(entries, rhs, basic);
        }
        tab.num_arts = artificial_at - (2 * nv + num_surplus);
        tab.init_phase1_objective(2 * nv + num_surplus);

        self.pivots += tab.solve(self.opts.deadline, self.pivots)?;

        if tab.obj_val.is_zero() {
            let mut assignment = Vec::with_capacity(nv);
            for (local, &v) in vars.iter().enumerate() {
                let plus = tab.basic_value(2 * local);
                let minus = tab.basic_value(2 * local + 1);
                assignment.push((v, plus - minus));
            }
            Ok(Phase1::Feasible(assignment))
        } else {
            // duals from the reduced costs under each row's identity column
            let mut mult = Vec::with_capacity(m);
            for r in 0..m {
                let y = &id_cost[r] - &tab.obj[id_col[r]];
                let y = if flipped[r] { -y } else { y };
                debug_assert!(rows[r].1 || !y.is_negative(), "dual sign on >= row");
                mult.push(y);
            }
            Ok(Phase1::Infeasible(mult))
        }
    }
}

enum Phase1 {
    Feasible(Vec<(usize, Rational)>),
    Infeasible(Vec<Rational>),
}

// ---------------------------------------------------------------------------
// sparse phase-1 tableau

struct Tableau {
    cols: usize,
    num_arts: usize,
    rows: Vec<Vec<(usize, Rational)>>, // sorted sparse rows
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    obj: Vec<Rational>, // dense reduced costs
    obj_val: Rational,
}

impl Tableau {
    fn new(cols: usize) -> Self {
        Tableau {
            cols,
            num_arts: 0,
            rows: Vec::new(),
            rhs: Vec::new(),
            basis: Vec::new(),
            obj: Vec::new(),
            obj_val: Rational::zero(),
        }
    }

    fn push_row(&mut self, mut entries: Vec<(usize, Rational)>, rhs: Rational, basic: usize) {
        entries.sort_by_key(|(c, _)| *c);
        entries.retain(|(_, v)| !v.is_zero());
        debug_assert!(!rhs.is_negative());
        self.rows.push(entries);
        self.rhs.push(rhs);
        self.basis.push(basic);
    }

    /// Reduced costs for min sum(artificials) with the initial basis:
    /// obj_j = c_j - sum over artificial-basic rows of a_rj.
    fn init_phase1_objective(&mut self, first_art: usize) {
        self.obj = vec![Rational::zero(); self.cols];
        for c in first_art..self.cols {
            self.obj[c] = Rational::one();
        }
        self.obj_val = Rational::zero();
        for r in 0..self.rows.len() {
            if self.basis[r] >= first_art {
                for (c, v) in &self.rows[r] {
                    self.obj[*c] -= v;
                }
                self.obj_val += &self.rhs[r];
            }
        }
    }

    fn get(&self, r: usize, c: usize) -> Option<&Rational> {
        self.rows[r]
            .binary_search_by_key(&c, |(i, _)| *i)
            .ok()
            .map(|k| &self.rows[r][k].1)
    }

    fn basic_value(&self, col: usize) -> Rational {
        for (r, &b) in self.basis.iter().enumerate() {
            if b == col {
                return self.rhs[r].clone();
            }
        }
        Rational::zero()
    }

    /// Bland's rule: entering column = smallest index with negative reduced
    /// cost; leaving row = min ratio, ties by smallest basic column index.
    fn solve(&mut self, deadline: Option<Instant>, pivot_base: u64) -> Result<u64> {
        let mut pivots = 0u64;
        loop {
            let Some(enter) = self.obj.iter().position(|c| c.is_negative()) else {
                return Ok(pivots);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let Some(a) = self.get(r, enter) else { continue };
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((leave, _)) = leave else {
                // phase-1 objective is bounded below by zero, so a column
                // with no positive entry cannot carry a negative reduced cost
                unreachable!("unbounded phase-1 objective");
            };
            self.pivot(leave, enter);
            pivots += 1;
            if pivots % 128 == 0 {
                if let Some(d) = deadline {
                    if Instant::now() > d {
                        return Err(Error::BudgetExceeded(pivot_base + pivots));
                    }
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, enter: usize) {
        let a = self
            .get(r, enter)
            .expect("pivot element present")
            .clone();
        if !a.is_one() {
            let inv = a.recip();
            for (_, v) in &mut self.rows[r] {
                *v *= &inv;
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let Some(c) = self.get(i, enter).cloned() else {
                continue;
            };
            self.rows[i] = axpy(&self.rows[i], &c, &pivot_row);
            self.rhs[i] -= &c * &pivot_rhs;
        }
        // objective row is dense; the objective moves by reduced cost * step
        let c = self.obj[enter].clone();
        if !c.is_zero() {
            for (col, v) in &pivot_row {
                self.obj[*col] -= &c * v;
            }
            self.obj_val += &c * &pivot_rhs;
        }
        self.basis[r] = enter;
    }
}

/// row - factor * pivot_row, merging sorted sparse vectors.
fn axpy(
    row: &[(usize, Rational)],
    factor: &Rational,
    pivot: &[(usize, Rational)],
) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                let v = vi - factor * vj;
                if !v.is_zero() {
                    out.push((*ci, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (Some(_), Some((cj, vj))) => {
                out.push((*cj, -(factor * vj)));
                j += 1;
            }
            (Some((ci, vi)), None) => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (None, Some((cj, vj))) => {
                out.push((*cj, -(factor * vj)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn substitute(row: &mut ReducedRow, var: usize, def: &VarDef) {
    let Ok(pos) = row.coeffs.binary_search_by_key(&var, |(i, _)| *i) else {
        return;
    };
    let c = row.coeffs.remove(pos).1;
    row.rhs -= &c * &def.value;
    let factor = -(&c / &def.coeff);
    row.trace.push((def.orig, factor.clone()));
    for (orig, t) in &def.trace {
        row.trace.push((*orig, &factor * t));
    }
}

// ---------------------------------------------------------------------------
// the tensor feasibility system

/// Largest base ground set for which the tensor feasibility system is built
/// (2^{3n} variables).
pub const MAX_TENSOR_LP: usize = 4;

/// Builds the feasibility system for "does f admit a tensor product with
/// U_{2,3}?": one variable g(S) per subset S of E x {1,2,3}, constrained by
/// g(empty) = 0, every elemental monotonicity/submodularity inequality on
/// the product ground set, and the product equalities
/// g(X x Y) = f(X) * u23(Y).
pub fn build_tensor_feasibility_system(f: &SetFunction) -> Result<LinearSystem> {
    let n = f.ground().n();
    if n > MAX_TENSOR_LP {
        return Err(Error::CapExceeded(format!(
            "tensor feasibility needs n <= {MAX_TENSOR_LP}, got {n}"
        )));
    }
    let pg = ProductGround::new(f.ground().clone())?;
    let pn = pg.ground().n();
    let size = 1usize << pn;
    let var_names = pg
        .ground()
        .masks()
        .map(|m| pg.ground().describe(m))
        .collect();
    let mut sys = LinearSystem::new(size, var_names);

    // g(empty) = 0
    sys.push_eq(vec![(0, rat(1))], rat(0));
    // product equalities over every (X, Y) pair
    let u = crate::corpus::u23();
    for x in f.ground().masks() {
        for y in u.ground().masks() {
            let m = crate::tensor::product_mask(x, y, n);
            sys.push_eq(vec![(m.bits() as usize, rat(1))], f.value(x) * u.value(y));
        }
    }
    // elemental rows: g(y : z | X) >= 0 with y = z allowed
    for xm in 0..size {
        let x = SubsetMask::from_bits(xm as u32);
        for y in 0..pn {
            if x.contains(y) {
                continue;
            }
            let xy = x.insert(y);
            // monotonicity: g(Xy) - g(X) >= 0
            sys.push_ineq(
                vec![(xy.bits() as usize, rat(1)), (xm, rat(-1))],
                rat(0),
            );
            for z in y + 1..pn {
                if x.contains(z) {
                    continue;
                }
                let xz = x.insert(z);
                let xyz = xy.insert(z);
                sys.push_ineq(
                    vec![
                        (xy.bits() as usize, rat(1)),
                        (xz.bits() as usize, rat(1)),
                        (xyz.bits() as usize, rat(-1)),
                        (xm, rat(-1)),
                    ],
                    rat(0),
                );
            }
        }
    }
    Ok(sys)
}

/// Reads a feasible tensor-system point back into a rank table on the
/// product ground set.
pub fn tensor_witness_to_set_function(f: &SetFunction, point: &[Rational]) -> Result<SetFunction> {
    let pg = ProductGround::new(f.ground().clone())?;
    if point.len() != pg.ground().num_subsets() {
        return Err(Error::PointLength {
            expected: pg.ground().num_subsets(),
            got: point.len(),
        });
    }
    SetFunction::new(pg.ground().clone(), point.to_vec())
}

// ---------------------------------------------------------------------------
// JSON documents

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    fingerprint: String,
    multipliers: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    fingerprint: String,
    point: Vec<String>,
}

pub fn certificate_to_json_value(sys: &LinearSystem, cert: &FarkasCertificate) -> serde_json::Value {
    serde_json::to_value(CertificateDoc {
        fingerprint: sys.fingerprint(),
        multipliers: cert.multipliers.iter().map(format_rational).collect(),
    })
    .expect("certificate serialization")
}

/// Parses a certificate document and checks it was issued for `sys`.
pub fn certificate_from_json(sys: &LinearSystem, s: &str) -> Result<FarkasCertificate> {
    let doc: CertificateDoc = serde_json::from_str(s)?;
    if doc.fingerprint != sys.fingerprint() {
        return Err(Error::FingerprintMismatch);
    }
    let multipliers = doc
        .multipliers
        .iter()
        .map(|m| parse_rational(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(FarkasCertificate { multipliers })
}

pub fn witness_to_json_value(sys: &LinearSystem, point: &[Rational]) -> serde_json::Value {
    serde_json::to_value(WitnessDoc {
        fingerprint: sys.fingerprint(),
        point: point.iter().map(format_rational).collect(),
    })
    .expect("witness serialization")
}

pub fn witness_from_json(sys: &LinearSystem, s: &str) -> Result<Vec<Rational>> {
    let doc: WitnessDoc = serde_json::from_str(s)?;
    if doc.fingerprint != sys.fingerprint() {
        return Err(Error::FingerprintMismatch);
    }
    doc.point.iter().map(|m| parse_rational(m)).collect()
}
