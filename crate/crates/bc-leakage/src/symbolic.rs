//! Symbolic linear rate inequalities over entropy/mutual-information
//! terms, a text grammar for them, exact Fourier-Motzkin elimination,
//! redundancy pruning, and numeric substitution.
//!
//! A row always has the normal form `sum(c_i * var_i) <= sum(d_j * sym_j)
//! + const` (strict `<` when marked). Rows written with `>=` or `>` are
//! negated into this form on parsing. Rate variables and information
//! symbols are both treated as nonnegative quantities when deciding
//! redundancy.

use crate::pmf::{JointPmf, PmfError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymbolicError {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no value supplied for symbol {0}")]
    MissingValue(String),
    #[error("infinite symbol {0} appears with a negative coefficient")]
    NegativeInfinite(String),
    #[error(transparent)]
    Pmf(#[from] PmfError),
}

/// An entropy, mutual-information, or leakage-budget symbol. Variable
/// groups are kept sorted and deduplicated, and the two sides of a
/// mutual information are ordered, so equal quantities compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InfoSymbol {
    Entropy {
        vars: Vec<String>,
        cond: Vec<String>,
    },
    MutualInfo {
        a: Vec<String>,
        b: Vec<String>,
        cond: Vec<String>,
    },
    Leakage(u8),
}

fn canon_group(mut g: Vec<String>) -> Vec<String> {
    g.sort();
    g.dedup();
    g
}

impl InfoSymbol {
    pub fn entropy(vars: &[&str], cond: &[&str]) -> Self {
        InfoSymbol::Entropy {
            vars: canon_group(vars.iter().map(|s| s.to_string()).collect()),
            cond: canon_group(cond.iter().map(|s| s.to_string()).collect()),
        }
    }

    pub fn mutual(a: &[&str], b: &[&str], cond: &[&str]) -> Self {
        let mut a = canon_group(a.iter().map(|s| s.to_string()).collect());
        let mut b = canon_group(b.iter().map(|s| s.to_string()).collect());
        if b < a {
            std::mem::swap(&mut a, &mut b);
        }
        InfoSymbol::MutualInfo {
            a,
            b,
            cond: canon_group(cond.iter().map(|s| s.to_string()).collect()),
        }
    }

    pub fn leakage(j: u8) -> Self {
        assert!(j == 1 || j == 2, "leakage index must be 1 or 2");
        InfoSymbol::Leakage(j)
    }

    /// Evaluate on a joint law, with the leakage budgets supplied
    /// separately (either may be `f64::INFINITY`).
    pub fn evaluate(&self, joint: &JointPmf, l1: f64, l2: f64) -> Result<f64, SymbolicError> {
        fn refs(g: &[String]) -> Vec<&str> {
            g.iter().map(|s| s.as_str()).collect()
        }
        match self {
            InfoSymbol::Entropy { vars, cond } => {
                Ok(joint.conditional_entropy(&refs(vars), &refs(cond))?)
            }
            InfoSymbol::MutualInfo { a, b, cond } => {
                Ok(joint.conditional_mutual_information(&refs(a), &refs(b), &refs(cond))?)
            }
            InfoSymbol::Leakage(1) => Ok(l1),
            InfoSymbol::Leakage(_) => Ok(l2),
        }
    }
}

impl fmt::Display for InfoSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = |f: &mut fmt::Formatter<'_>, cond: &[String]| {
            if cond.is_empty() {
                Ok(())
            } else {
                write!(f, "|{}", cond.join(","))
            }
        };
        match self {
            InfoSymbol::Entropy { vars, cond } => {
                write!(f, "H({}", vars.join(","))?;
                bar(f, cond)?;
                write!(f, ")")
            }
            InfoSymbol::MutualInfo { a, b, cond } => {
                write!(f, "I({};{}", a.join(","), b.join(","))?;
                bar(f, cond)?;
                write!(f, ")")
            }
            InfoSymbol::Leakage(j) => write!(f, "L{j}"),
        }
    }
}

/// One linear inequality in normal form (see module docs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub lhs: BTreeMap<String, BigRational>,
    pub rhs: BTreeMap<InfoSymbol, BigRational>,
    pub rhs_const: BigRational,
    pub strict: bool,
}

fn drop_zeros<K: Ord>(m: &mut BTreeMap<K, BigRational>) {
    m.retain(|_, c| !c.is_zero());
}

impl Inequality {
    pub fn new(
        lhs: BTreeMap<String, BigRational>,
        rhs: BTreeMap<InfoSymbol, BigRational>,
        rhs_const: BigRational,
        strict: bool,
    ) -> Self {
        let mut row = Inequality {
            lhs,
            rhs,
            rhs_const,
            strict,
        };
        drop_zeros(&mut row.lhs);
        drop_zeros(&mut row.rhs);
        row
    }

    /// `self + scale * other`, with `scale > 0` so the direction is kept;
    /// the sum is strict when either addend is.
    fn add_scaled(&self, other: &Inequality, self_scale: &BigRational, other_scale: &BigRational) -> Inequality {
        assert!(self_scale.is_positive() && other_scale.is_positive());
        let mut lhs = BTreeMap::new();
        let mut rhs = BTreeMap::new();
        for (v, c) in &self.lhs {
            *lhs.entry(v.clone()).or_insert_with(BigRational::zero) += c * self_scale;
        }
        for (v, c) in &other.lhs {
            *lhs.entry(v.clone()).or_insert_with(BigRational::zero) += c * other_scale;
        }
        for (s, c) in &self.rhs {
            *rhs.entry(s.clone()).or_insert_with(BigRational::zero) += c * self_scale;
        }
        for (s, c) in &other.rhs {
            *rhs.entry(s.clone()).or_insert_with(BigRational::zero) += c * other_scale;
        }
        let rhs_const = &self.rhs_const * self_scale + &other.rhs_const * other_scale;
        Inequality::new(lhs, rhs, rhs_const, self.strict || other.strict)
    }

    /// Divide through by the absolute value of the first nonzero
    /// coefficient (variables first, then symbols, then the constant), so
    /// positively-proportional rows become identical.
    fn canonical_scale(&self) -> Inequality {
        let pivot = self
            .lhs
            .values()
            .chain(self.rhs.values())
            .next()
            .cloned()
            .unwrap_or_else(|| {
                if self.rhs_const.is_zero() {
                    BigRational::one()
                } else {
                    self.rhs_const.clone()
                }
            });
        let scale = pivot.abs();
        if scale.is_zero() || scale.is_one() {
            return self.clone();
        }
        Inequality::new(
            self.lhs.iter().map(|(v, c)| (v.clone(), c / &scale)).collect(),
            self.rhs.iter().map(|(s, c)| (s.clone(), c / &scale)).collect(),
            &self.rhs_const / &scale,
            self.strict,
        )
    }

    /// True when the row holds for every nonnegative assignment: the
    /// variable side has no positive coefficient on a declared-nonnegative
    /// variable and the symbol side has no negative coefficient.
    fn is_tautology(&self, nonneg_vars: &BTreeSet<String>) -> bool {
        self.lhs
            .iter()
            .all(|(v, c)| c.is_negative() && nonneg_vars.contains(v))
            && self.rhs.values().all(|c| c.is_positive())
            && !self.rhs_const.is_negative()
    }

    /// True when `self` implies `other` for nonnegative variables and
    /// symbols: the variable side of `other` is dominated coefficientwise
    /// and its symbol side is weakly larger.
    fn implies(&self, other: &Inequality, nonneg_vars: &BTreeSet<String>) -> bool {
        let vars: BTreeSet<&String> = self.lhs.keys().chain(other.lhs.keys()).collect();
        for v in vars {
            let a = self.lhs.get(v).cloned().unwrap_or_else(BigRational::zero);
            let b = other.lhs.get(v).cloned().unwrap_or_else(BigRational::zero);
            if a == b {
                continue;
            }
            // a > b is only usable when v is known nonnegative
            if b > a || !nonneg_vars.contains(v) {
                return false;
            }
        }
        let syms: BTreeSet<&InfoSymbol> = self.rhs.keys().chain(other.rhs.keys()).collect();
        for s in syms {
            let a = self.rhs.get(s).cloned().unwrap_or_else(BigRational::zero);
            let b = other.rhs.get(s).cloned().unwrap_or_else(BigRational::zero);
            if b < a {
                return false;
            }
        }
        other.rhs_const >= self.rhs_const
    }

    fn sort_key(&self) -> (Vec<(String, BigRational)>, Vec<(InfoSymbol, BigRational)>, BigRational) {
        (
            self.lhs.iter().map(|(v, c)| (v.clone(), c.clone())).collect(),
            self.rhs.iter().map(|(s, c)| (s.clone(), c.clone())).collect(),
            self.rhs_const.clone(),
        )
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coef = |f: &mut fmt::Formatter<'_>, c: &BigRational, first: bool, name: &str| {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() || name.is_empty() {
                write!(f, "{mag}")?;
                if !name.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{name}")
        };
        if self.lhs.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (v, c)) in self.lhs.iter().enumerate() {
                coef(f, c, i == 0, v)?;
            }
        }
        write!(f, " {} ", if self.strict { "<" } else { "<=" })?;
        if self.rhs.is_empty() && self.rhs_const.is_zero() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (s, c) in &self.rhs {
                coef(f, c, first, &s.to_string())?;
                first = false;
            }
            if !self.rhs_const.is_zero() {
                coef(f, &self.rhs_const, first, "")?;
            }
        }
        Ok(())
    }
}

/// A system of inequalities plus the set of variables known to be
/// nonnegative (used for implicit bounds during elimination and for
/// redundancy pruning).
#[derive(Debug, Clone)]
pub struct IneqSystem {
    pub rows: Vec<Inequality>,
    pub nonneg_vars: BTreeSet<String>,
}

impl IneqSystem {
    pub fn new(rows: Vec<Inequality>, nonneg_vars: BTreeSet<String>) -> Self {
        IneqSystem { rows, nonneg_vars }
    }

    /// All variables appearing on the left-hand sides.
    pub fn variables(&self) -> BTreeSet<String> {
        self.rows
            .iter()
            .flat_map(|r| r.lhs.keys().cloned())
            .collect()
    }

    /// All information symbols appearing on the right-hand sides.
    pub fn symbols(&self) -> BTreeSet<InfoSymbol> {
        self.rows
            .iter()
            .flat_map(|r| r.rhs.keys().cloned())
            .collect()
    }

    /// Remove tautologies, duplicate rows, and rows pairwise implied by
    /// another row. Surviving rows are canonically scaled.
    pub fn pruned(&self) -> IneqSystem {
        let mut rows: Vec<Inequality> = self
            .rows
            .iter()
            .filter(|r| !r.is_tautology(&self.nonneg_vars))
            .map(|r| r.canonical_scale())
            .collect();
        // duplicates: keep the non-strict (weaker, closure) variant
        rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()).then(a.strict.cmp(&b.strict)));
        rows.dedup_by(|b, a| a.sort_key() == b.sort_key());
        let mut removed = vec![false; rows.len()];
        for i in 0..rows.len() {
            if removed[i] {
                continue;
            }
            for j in 0..rows.len() {
                if i != j && !removed[j] && rows[i].implies(&rows[j], &self.nonneg_vars) {
                    removed[j] = true;
                }
            }
        }
        let mut rows: Vec<Inequality> = rows
            .into_iter()
            .zip(removed)
            .filter(|(_, r)| !r)
            .map(|(row, _)| row)
            .collect();
        self.lp_prune(&mut rows);
        IneqSystem::new(rows, self.nonneg_vars.clone())
    }

    /// Exact redundancy elimination: a row is dropped when its left-hand
    /// side cannot exceed its bound anywhere on the polyhedron cut out by
    /// the other rows, treating rate variables and information symbols as
    /// independent nonnegative quantities. Decided by rational simplex.
    /// Skipped (conservatively keeping all rows) when a variable has no
    /// nonnegativity declaration or a bound constant is negative, since
    /// the test relies on the origin being feasible.
    fn lp_prune(&self, rows: &mut Vec<Inequality>) {
        let applicable = rows.iter().all(|r| {
            r.lhs.keys().all(|v| self.nonneg_vars.contains(v)) && !r.rhs_const.is_negative()
        });
        if !applicable || rows.len() < 2 {
            return;
        }
        let vars: Vec<String> = rows.iter().flat_map(|r| r.lhs.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
        let syms: Vec<InfoSymbol> = rows.iter().flat_map(|r| r.rhs.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
        // column vector of (lhs - rhs) coefficients over (vars, syms)
        let coeffs = |r: &Inequality| -> Vec<BigRational> {
            vars.iter()
                .map(|v| r.lhs.get(v).cloned().unwrap_or_else(BigRational::zero))
                .chain(syms.iter().map(|s| -r.rhs.get(s).cloned().unwrap_or_else(BigRational::zero)))
                .collect()
        };
        let mut i = 0;
        while i < rows.len() {
            let objective = coeffs(&rows[i]);
            let (a, b): (Vec<Vec<BigRational>>, Vec<BigRational>) = rows
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, r)| (coeffs(r), r.rhs_const.clone()))
                .unzip();
            match simplex_max(&a, &b, &objective) {
                Some(opt) if opt <= rows[i].rhs_const => {
                    rows.remove(i);
                }
                _ => i += 1,
            }
        }
    }

    /// Fourier-Motzkin elimination of one variable. Every pairing of an
    /// upper bound with a lower bound (including the implicit `var >= 0`
    /// when the variable is declared nonnegative) produces a child row
    /// that is strict when either parent is.
    pub fn eliminate(&self, var: &str) -> IneqSystem {
        let mut keep = Vec::new();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for row in &self.rows {
            match row.lhs.get(var) {
                None => keep.push(row.clone()),
                Some(c) if c.is_positive() => upper.push(row.clone()),
                Some(_) => lower.push(row.clone()),
            }
        }
        if self.nonneg_vars.contains(var) {
            let mut lhs = BTreeMap::new();
            lhs.insert(var.to_string(), -BigRational::one());
            lower.push(Inequality::new(lhs, BTreeMap::new(), BigRational::zero(), false));
        }
        for u in &upper {
            let cu = u.lhs[var].clone();
            for l in &lower {
                let cl = -l.lhs[var].clone();
                let child = u.add_scaled(l, &cl, &cu);
                debug_assert!(!child.lhs.contains_key(var));
                keep.push(child);
            }
        }
        let mut nonneg = self.nonneg_vars.clone();
        nonneg.remove(var);
        IneqSystem::new(keep, nonneg)
    }

    /// Eliminate several variables in the given order, pruning after
    /// each step to keep the row count in check.
    pub fn eliminate_all(&self, vars: &[&str]) -> IneqSystem {
        let mut sys = self.pruned();
        for v in vars {
            sys = sys.eliminate(v).pruned();
        }
        sys
    }

    /// Structural equality up to redundant rows, positive row scaling,
    /// row order, and strictness.
    pub fn canonical_equal(&self, other: &IneqSystem) -> bool {
        let key = |sys: &IneqSystem| {
            let mut keys: Vec<_> = sys.pruned().rows.iter().map(|r| r.sort_key()).collect();
            keys.sort();
            keys
        };
        key(self) == key(other)
    }

    /// Evaluate the right-hand sides numerically. Rows whose bound is
    /// `+inf` are dropped; an infinite symbol with a negative coefficient
    /// is an error since the bound would be `-inf`.
    pub fn substitute(
        &self,
        values: &BTreeMap<InfoSymbol, f64>,
    ) -> Result<Vec<NumericRow>, SymbolicError> {
        let mut out = Vec::new();
        'rows: for row in &self.rows {
            let mut rhs = self.rhs_const_f64(row);
            for (s, c) in &row.rhs {
                let v = *values
                    .get(s)
                    .ok_or_else(|| SymbolicError::MissingValue(s.to_string()))?;
                let c = c.to_f64().expect("finite rational");
                if v.is_infinite() {
                    if c > 0.0 {
                        continue 'rows; // unbounded row imposes nothing
                    }
                    return Err(SymbolicError::NegativeInfinite(s.to_string()));
                }
                rhs += c * v;
            }
            out.push(NumericRow {
                coeffs: row
                    .lhs
                    .iter()
                    .map(|(v, c)| (v.clone(), c.to_f64().expect("finite rational")))
                    .collect(),
                rhs,
            });
        }
        Ok(out)
    }

    /// Evaluate every symbol on a joint law and substitute.
    pub fn evaluate_on(
        &self,
        joint: &JointPmf,
        l1: f64,
        l2: f64,
    ) -> Result<Vec<NumericRow>, SymbolicError> {
        let mut values = BTreeMap::new();
        for s in self.symbols() {
            let v = s.evaluate(joint, l1, l2)?;
            values.insert(s, v);
        }
        self.substitute(&values)
    }

    fn rhs_const_f64(&self, row: &Inequality) -> f64 {
        row.rhs_const.to_f64().expect("finite rational")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for IneqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A numeric halfspace `sum(coeffs * vars) <= rhs` produced by
/// substitution; strictness is dropped since rate regions are closures.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericRow {
    pub coeffs: BTreeMap<String, f64>,
    pub rhs: f64,
}

/// Maximize `c . x` subject to `A x <= b`, `x >= 0`, with `b >= 0` so the
/// origin is a feasible starting basis. Returns the optimum, or `None`
/// when the objective is unbounded. Bland's rule prevents cycling.
fn simplex_max(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> Option<BigRational> {
    let m = a.len();
    let n = c.len();
    debug_assert!(b.iter().all(|v| !v.is_negative()));
    // tableau rows: [x columns | slack columns | rhs]; last row = -objective
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = vec![BigRational::zero(); width];
        r[..n].clone_from_slice(row);
        r[n + i] = BigRational::one();
        r[width - 1] = b[i].clone();
        t.push(r);
    }
    let mut obj = vec![BigRational::zero(); width];
    for (j, cj) in c.iter().enumerate() {
        obj[j] = -cj.clone();
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // entering column: smallest index with negative objective entry
        let Some(col) = (0..width - 1).find(|&j| t[m][j].is_negative()) else {
            return Some(t[m][width - 1].clone());
        };
        // leaving row: minimum ratio, ties by smallest basis index
        let mut pivot: Option<usize> = None;
        for i in 0..m {
            if t[i][col].is_positive() {
                let better = match pivot {
                    None => true,
                    Some(p) => {
                        let lhs = &t[i][width - 1] * &t[p][col];
                        let rhs = &t[p][width - 1] * &t[i][col];
                        lhs < rhs || (lhs == rhs && basis[i] < basis[p])
                    }
                };
                if better {
                    pivot = Some(i);
                }
            }
        }
        let Some(p) = pivot else {
            return None; // unbounded
        };
        let scale = t[p][col].clone();
        for x in t[p].iter_mut() {
            *x /= &scale;
        }
        for i in 0..=m {
            if i != p && !t[i][col].is_zero() {
                let f = t[i][col].clone();
                for j in 0..width {
                    let d = &f * &t[p][j];
                    t[i][j] -= d;
                }
            }
        }
        basis[p] = col;
    }
}

// ---------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------

/// Parse a system, one inequality per line. `#` starts a comment and
/// blank lines are skipped. Every variable that appears is recorded as
/// nonnegative, matching the rate-variable convention.
pub fn parse_system(text: &str) -> Result<IneqSystem, SymbolicError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        rows.push(parse_row(line).map_err(|msg| SymbolicError::Parse { line: i + 1, msg })?);
    }
    let nonneg: BTreeSet<String> = rows.iter().flat_map(|r| r.lhs.keys().cloned()).collect();
    Ok(IneqSystem::new(rows, nonneg))
}

fn parse_row(line: &str) -> Result<Inequality, String> {
    // find the comparator at paren depth zero
    let bytes = line.as_bytes();
    let mut depth = 0i32;
    let mut cmp: Option<(usize, usize, bool, bool)> = None; // (start, len, flip, strict)
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'<' | b'>' if depth == 0 => {
                let flip = bytes[i] == b'>';
                let len = if i + 1 < bytes.len() && bytes[i + 1] == b'=' { 2 } else { 1 };
                if cmp.is_some() {
                    return Err("more than one comparator".into());
                }
                cmp = Some((i, len, flip, len == 1));
                i += len;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    let (pos, len, flip, strict) = cmp.ok_or("missing comparator")?;
    let (var_side, sym_side) = (&line[..pos], &line[pos + len..]);
    let (mut lhs, lhs_syms, lhs_const) = parse_expr(var_side)?;
    let (rhs_vars, mut rhs, mut rhs_const) = parse_expr(sym_side)?;
    if !lhs_syms.is_empty() {
        return Err("information symbols are not allowed on the rate side".into());
    }
    if !rhs_vars.is_empty() {
        return Err("rate variables are not allowed on the symbol side".into());
    }
    rhs_const -= lhs_const;
    if flip {
        // a >= b is recorded as -a <= -b, keeping sides in role
        for c in lhs.values_mut() {
            *c = -c.clone();
        }
        for c in rhs.values_mut() {
            *c = -c.clone();
        }
        rhs_const = -rhs_const;
    }
    Ok(Inequality::new(lhs, rhs, rhs_const, strict))
}

type Expr = (
    BTreeMap<String, BigRational>,
    BTreeMap<InfoSymbol, BigRational>,
    BigRational,
);

fn parse_expr(text: &str) -> Result<Expr, String> {
    let mut vars: BTreeMap<String, BigRational> = BTreeMap::new();
    let mut syms: BTreeMap<InfoSymbol, BigRational> = BTreeMap::new();
    let mut konst = BigRational::zero();
    for (term, sign) in split_terms(text)? {
        let term = term.trim();
        if term.is_empty() {
            return Err("empty term".into());
        }
        let (coef, atom) = match top_level_star(term) {
            Some(p) => (parse_rational(term[..p].trim())?, term[p + 1..].trim()),
            None => (BigRational::one(), term),
        };
        let coef = if sign { -coef } else { coef };
        if atom.is_empty() {
            return Err(format!("dangling `*` in term `{term}`"));
        }
        if atom.chars().next().unwrap().is_ascii_digit() {
            konst += coef * parse_rational(atom)?;
        } else if atom.starts_with("H(") || atom.starts_with("I(") {
            *syms.entry(parse_symbol(atom)?).or_insert_with(BigRational::zero) += coef;
        } else if atom == "L1" || atom == "L2" {
            let j = if atom == "L1" { 1 } else { 2 };
            *syms
                .entry(InfoSymbol::leakage(j))
                .or_insert_with(BigRational::zero) += coef;
        } else {
            check_ident(atom)?;
            *vars.entry(atom.to_string()).or_insert_with(BigRational::zero) += coef;
        }
    }
    drop_zeros(&mut vars);
    drop_zeros(&mut syms);
    Ok((vars, syms, konst))
}

/// Split an affine expression into `(term, negated)` pieces at top-level
/// `+`/`-` signs.
fn split_terms(text: &str) -> Result<Vec<(String, bool)>, String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut seen_any = false;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                if seen_any && !cur.trim().is_empty() {
                    out.push((std::mem::take(&mut cur), neg));
                } else if seen_any && cur.trim().is_empty() {
                    return Err("consecutive signs".into());
                }
                neg = ch == '-';
                seen_any = true;
                continue;
            }
            _ => {}
        }
        if !ch.is_whitespace() || depth > 0 {
            cur.push(ch);
        }
        if !cur.is_empty() {
            seen_any = true;
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    if cur.trim().is_empty() {
        return Err("expression ends with a sign".into());
    }
    out.push((cur, neg));
    Ok(out)
}

fn top_level_star(term: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_rational(text: &str) -> Result<BigRational, String> {
    let parse_int = |s: &str| {
        s.parse::<BigInt>()
            .map_err(|_| format!("bad number `{s}`"))
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d.trim())?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(parse_int(n.trim())?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

fn check_ident(s: &str) -> Result<(), String> {
    if !s.is_empty()
        && s.chars().next().unwrap().is_ascii_alphabetic()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        Ok(())
    } else {
        Err(format!("bad identifier `{s}`"))
    }
}

fn parse_group(text: &str) -> Result<Vec<String>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            check_ident(s)?;
            Ok(s.to_string())
        })
        .collect()
}

/// Parse a single `H(...)`, `I(...)`, `L1`, or `L2` symbol.
pub fn parse_symbol(text: &str) -> Result<InfoSymbol, String> {
    let text = text.trim();
    if text == "L1" {
        return Ok(InfoSymbol::leakage(1));
    }
    if text == "L2" {
        return Ok(InfoSymbol::leakage(2));
    }
    let (kind, body) = match (text.strip_prefix("H("), text.strip_prefix("I(")) {
        (Some(b), _) => ('H', b),
        (_, Some(b)) => ('I', b),
        _ => return Err(format!("unknown symbol `{text}`")),
    };
    let body = body
        .strip_suffix(')')
        .ok_or_else(|| format!("missing `)` in `{text}`"))?;
    let (main, cond) = match body.split_once('|') {
        Some((m, c)) => (m, parse_group(c)?),
        None => (body, Vec::new()),
    };
    let cond: Vec<&str> = cond.iter().map(|s| s.as_str()).collect();
    if kind == 'H' {
        let vars = parse_group(main)?;
        let vars: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        Ok(InfoSymbol::entropy(&vars, &cond))
    } else {
        let (a, b) = main
            .split_once(';')
            .ok_or_else(|| format!("missing `;` in `{text}`"))?;
        let a = parse_group(a)?;
        let b = parse_group(b)?;
        let a: Vec<&str> = a.iter().map(|s| s.as_str()).collect();
        let b: Vec<&str> = b.iter().map(|s| s.as_str()).collect();
        Ok(InfoSymbol::mutual(&a, &b, &cond))
    }
}

// ---------------------------------------------------------------------
// Reference systems for the coding-scheme rate constraints
// ---------------------------------------------------------------------

/// Raw rate constraints of the double-binned Marton scheme, before any
/// auxiliary rate is eliminated. Variables: public/private splits `Rj0`,
/// `Rjj`, bin-index rates `Rpj`, and extra-layer rates `Rtj`.
pub const ACHIEVABILITY_ROWS: &str = "\
# message splits R_j = R_j0 + R_jj, as paired inequalities
R1 - R10 - R11 <= 0
R10 + R11 - R1 <= 0
R2 - R20 - R22 <= 0
R20 + R22 - R2 <= 0
# public parts are bounded by the message and the leakage budget
R10 - R1 <= 0
R20 - R2 <= 0
R10 <= L1
R20 <= L2
# joint-encoding (mutual covering) feasibility
Rp1 + Rp2 > I(U1;U2|U0)
# reliability at each decoder
R11 + Rp1 + Rt1 < I(U1;Y1|U0)
R0 + R20 + R1 + Rp1 + Rt1 < I(U0,U1;Y1)
R22 + Rp2 + Rt2 < I(U2;Y2|U0)
R0 + R10 + R2 + Rp2 + Rt2 < I(U0,U2;Y2)
# the opposite decoder resolves the extra bin layer
Rt1 < I(U1;Y2|U0,U2)
Rt2 < I(U2;Y1|U0,U1)
# leakage control
Rt1 + Rp1 - R10 > I(U1;Y2|U0,U2) + I(U1;U2|U0) - L1
Rp1 - R10 > I(U1;U2|U0) - L1
Rt2 + Rp2 - R20 > I(U2;Y1|U0,U1) + I(U1;U2|U0) - L2
Rp2 - R20 > I(U1;U2|U0) - L2
";

/// Order in which the auxiliary rates are eliminated.
pub const AUX_ELIMINATION_ORDER: [&str; 8] =
    ["Rt1", "Rt2", "Rp1", "Rp2", "R11", "R22", "R10", "R20"];

/// The projected inner-bound rows over (R0, R1, R2), minima expanded,
/// plus the input-law consistency row that elimination also produces.
pub const INNER_BOUND_ROWS: &str = "\
R1 <= I(U1;Y1|U0) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1
R0 + R1 <= I(U0,U1;Y1) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1
R0 + R1 <= I(U0,U1;Y1)
R2 <= I(U2;Y2|U0) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2
R0 + R2 <= I(U0,U2;Y2) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2
R0 + R2 <= I(U0,U2;Y2)
R0 + R1 + R2 <= I(U0,U1;Y1) + I(U2;Y2|U0) - I(U1;U2|U0) - I(U1;Y2|U0,U2) + L1
R0 + R1 + R2 <= I(U1;Y1|U0) + I(U0,U2;Y2) - I(U1;U2|U0) - I(U2;Y1|U0,U1) + L2
R0 + R1 + R2 <= I(U0,U1;Y1) + I(U2;Y2|U0) - I(U1;U2|U0)
R0 + R1 + R2 <= I(U1;Y1|U0) + I(U0,U2;Y2) - I(U1;U2|U0)
2*R0 + R1 + R2 <= I(U0,U1;Y1) + I(U0,U2;Y2) - I(U1;U2|U0)
0 <= I(U1;Y1|U0) + I(U2;Y2|U0) - I(U1;U2|U0)
";

/// The full coding-scheme system, parsed.
pub fn achievability_system() -> IneqSystem {
    let mut sys = parse_system(ACHIEVABILITY_ROWS).expect("static system parses");
    // R0, R1, R2 never appear alone on a lhs above, but they are rates too
    for v in ["R0", "R1", "R2"] {
        sys.nonneg_vars.insert(v.to_string());
    }
    sys
}

/// The projected inner-bound reference system, parsed.
pub fn inner_bound_system() -> IneqSystem {
    parse_system(INNER_BOUND_ROWS).expect("static system parses")
}
