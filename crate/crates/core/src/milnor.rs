//! Polynomial germs at the origin and their Milnor numbers.
//!
//! A germ enters as text over a declared variable list and becomes a sparse
//! [`LocalPoly`]. Its Milnor number is the colength of the Jacobian ideal,
//! computed degree by degree: d(D) is the dimension of the local ring modulo
//! the Jacobian plus all monomials of degree D and up, found by exact row
//! reduction over the rationals, and the first repeat d(D+1) = d(D)
//! certifies that the quotient has stopped growing (Nakayama), so d(D) is
//! the full colength.

use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{rat_int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { offset: usize, name: String },
    #[error("duplicate variable `{0}` in the variable list")]
    DuplicateVariable(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MilnorError {
    #[error("germ does not vanish at the origin")]
    NonzeroConstantTerm,
    #[error("degree cap must be at least 2, got {0}")]
    CapTooSmall(u32),
    #[error("smooth germ: a partial derivative is nonzero at the origin")]
    SmoothGerm,
    #[error(
        "quotient dimension did not stabilize below degree {degree_cap}; \
         the singularity may not be isolated"
    )]
    CapExceeded { degree_cap: u32 },
}

/// Multivariate polynomial over exact rationals in a fixed variable list,
/// viewed as a germ at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPoly {
    variables: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl LocalPoly {
    pub fn zero(variables: &[&str]) -> LocalPoly {
        LocalPoly {
            variables: variables.iter().map(|v| v.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_part(&self) -> Rat {
        self.coefficient(&vec![0; self.variables.len()])
    }

    fn constant(variables: &[String], value: Rat) -> LocalPoly {
        let mut p = LocalPoly {
            variables: variables.to_vec(),
            terms: BTreeMap::new(),
        };
        p.insert_term(vec![0; variables.len()], value);
        p
    }

    fn insert_term(&mut self, exps: Vec<u32>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    fn add(&self, other: &LocalPoly) -> LocalPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> LocalPoly {
        LocalPoly {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    fn mul(&self, other: &LocalPoly) -> LocalPoly {
        let mut out = LocalPoly {
            variables: self.variables.clone(),
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(exps, ca * cb);
            }
        }
        out
    }

    fn pow(&self, k: u32) -> LocalPoly {
        let mut out = LocalPoly::constant(&self.variables, rat_int(1));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to the i-th variable.
    pub fn partial(&self, i: usize) -> LocalPoly {
        let mut out = LocalPoly {
            variables: self.variables.clone(),
            terms: BTreeMap::new(),
        };
        for (exps, coeff) in &self.terms {
            if exps[i] == 0 {
                continue;
            }
            let mut e = exps.clone();
            e[i] -= 1;
            out.insert_term(e, coeff * rat_int(exps[i] as i64));
        }
        out
    }

    /// Human-readable monomial in this polynomial's variables.
    pub fn monomial_string(&self, exps: &[u32]) -> String {
        let mut parts = Vec::new();
        for (name, e) in self.variables.iter().zip(exps) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for LocalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        entries.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone()));
        let mut first = true;
        for (exps, coeff) in entries {
            let mono = self.monomial_string(exps);
            let abs = coeff.abs();
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono == "1" {
                write!(f, "{abs}")?;
            } else if abs == rat_int(1) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Parse a polynomial over the given variables.
///
/// Grammar: sums and differences of terms; a term is a `*`-product of
/// factors; a factor is an atom optionally raised to a natural power by `^`;
/// an atom is an integer or rational literal (`3`, `5/2`), a variable, or a
/// parenthesized expression. Whitespace is insignificant. Errors carry the
/// byte offset of the first offending character.
pub fn parse_poly(text: &str, variables: &[&str]) -> Result<LocalPoly, ParseError> {
    for (i, v) in variables.iter().enumerate() {
        if variables[..i].contains(v) {
            return Err(ParseError::DuplicateVariable(v.to_string()));
        }
    }
    let vars: Vec<String> = variables.iter().map(|v| v.to_string()).collect();
    let mut parser = Parser {
        text: text.as_bytes(),
        pos: 0,
        variables: &vars,
    };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.text.len() {
        return Err(parser.unexpected("'+', '-', '*', '^', or the end of input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    variables: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn expr(&mut self) -> Result<LocalPoly, ParseError> {
        self.skip_ws();
        let mut negate = false;
        if let Some(b'+') | Some(b'-') = self.peek() {
            negate = self.peek() == Some(b'-');
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LocalPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LocalPoly, ParseError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.natural()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<LocalPoly, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.unexpected("')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let value = self.rational()?;
                Ok(LocalPoly::constant(self.variables, value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.text[start..self.pos])
                    .expect("identifier bytes are ASCII")
                    .to_string();
                let Some(i) = self.variables.iter().position(|v| *v == name) else {
                    return Err(ParseError::UnknownVariable {
                        offset: start,
                        name,
                    });
                };
                let mut exps = vec![0; self.variables.len()];
                exps[i] = 1;
                let mut p = LocalPoly {
                    variables: self.variables.to_vec(),
                    terms: BTreeMap::new(),
                };
                p.insert_term(exps, rat_int(1));
                Ok(p)
            }
            _ => Err(self.unexpected("a number, a variable, or '('")),
        }
    }

    fn digits(&mut self) -> Result<num::BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.unexpected("a digit"));
        }
        Ok(num::BigInt::parse_bytes(&self.text[start..self.pos], 10).expect("digit run parses"))
    }

    fn rational(&mut self) -> Result<Rat, ParseError> {
        let numer = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den_offset = self.pos;
            let denom = self.digits()?;
            if denom.is_zero() {
                return Err(ParseError::Syntax {
                    offset: den_offset,
                    expected: "a nonzero denominator".to_string(),
                });
            }
            return Ok(Rat::new(numer, denom));
        }
        Ok(Rat::from(numer))
    }

    fn natural(&mut self) -> Result<u32, ParseError> {
        let offset = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.unexpected("an exponent"));
        }
        let digits = self.digits()?;
        u32::try_from(digits).map_err(|_| ParseError::Syntax {
            offset,
            expected: "an exponent that fits in 32 bits".to_string(),
        })
    }
}

/// Result of a stabilized colength computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorResult {
    pub mu: usize,
    pub stabilization_degree: u32,
    pub monomial_basis: Vec<Vec<u32>>,
}

/// The formal partial derivatives of `f`, one per variable, zeros included.
pub fn jacobian_ideal(f: &LocalPoly) -> Vec<LocalPoly> {
    (0..f.variables.len()).map(|i| f.partial(i)).collect()
}

/// All exponent vectors in `nvars` variables of total degree below `degree`,
/// ascending by (total degree, lexicographic).
fn monomials_below(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fn rec(i: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == current.len() {
            out.push(current.clone());
            return;
        }
        for e in 0..=left {
            current[i] = e;
            rec(i + 1, left - e, current, out);
        }
        current[i] = 0;
    }
    if degree > 0 {
        rec(0, degree - 1, &mut current, &mut out);
    }
    out.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    out
}

struct QuotientSnapshot {
    dim: usize,
    basis: Vec<Vec<u32>>,
}

/// Dimension and monomial basis of Q[z] / (span of all monomial-times-partial
/// products + all monomials of degree >= `degree`), by sparse exact row
/// reduction pivoting on the highest (degree, lex) monomial of each row.
fn quotient_below(partials: &[LocalPoly], nvars: usize, degree: u32) -> QuotientSnapshot {
    let monomials = monomials_below(nvars, degree);
    let index: BTreeMap<&[u32], usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();

    let mut pivots: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();
    for q in &monomials {
        for g in partials {
            let mut row: BTreeMap<usize, Rat> = BTreeMap::new();
            for (e, c) in &g.terms {
                let prod: Vec<u32> = q.iter().zip(e).map(|(x, y)| x + y).collect();
                if prod.iter().sum::<u32>() >= degree {
                    continue;
                }
                let i = index[prod.as_slice()];
                let entry = row.entry(i).or_insert_with(Rat::zero);
                *entry += c;
                if entry.is_zero() {
                    row.remove(&i);
                }
            }
            // Reduce against existing pivots from the top down, then either
            // vanish or become a new pivot row.
            while let Some((&lead, _)) = row.last_key_value() {
                let Some(pivot_row) = pivots.get(&lead) else {
                    let lead_coeff = row[&lead].clone();
                    let normalized: BTreeMap<usize, Rat> =
                        row.into_iter().map(|(i, c)| (i, c / &lead_coeff)).collect();
                    pivots.insert(lead, normalized);
                    break;
                };
                let factor = row[&lead].clone();
                for (i, c) in pivot_row {
                    let entry = row.entry(*i).or_insert_with(Rat::zero);
                    *entry -= &factor * c;
                    if entry.is_zero() {
                        row.remove(i);
                    }
                }
            }
        }
    }

    let basis: Vec<Vec<u32>> = monomials
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivots.contains_key(i))
        .map(|(_, e)| e.clone())
        .collect();
    QuotientSnapshot {
        dim: basis.len(),
        basis,
    }
}

/// d(D) for this germ: the dimension of the local ring modulo the Jacobian
/// ideal and all monomials of degree `degree` and up.
pub fn quotient_dimension(f: &LocalPoly, degree: u32) -> usize {
    let partials = jacobian_ideal(f);
    quotient_below(&partials, f.variables.len(), degree).dim
}

/// Milnor number of an isolated singularity germ as the colength of its
/// Jacobian ideal, with the monomial basis of the local quotient.
pub fn milnor_number(f: &LocalPoly, degree_cap: u32) -> Result<MilnorResult, MilnorError> {
    if degree_cap < 2 {
        return Err(MilnorError::CapTooSmall(degree_cap));
    }
    if !f.constant_part().is_zero() {
        return Err(MilnorError::NonzeroConstantTerm);
    }
    let partials = jacobian_ideal(f);
    if partials.iter().any(|g| !g.constant_part().is_zero()) {
        return Err(MilnorError::SmoothGerm);
    }
    let nvars = f.variables.len();
    let mut prev = quotient_below(&partials, nvars, 1);
    for d in 1..degree_cap {
        let next = quotient_below(&partials, nvars, d + 1);
        if next.dim == prev.dim {
            return Ok(MilnorResult {
                mu: prev.dim,
                stabilization_degree: d,
                monomial_basis: prev.basis,
            });
        }
        prev = next;
    }
    Err(MilnorError::CapExceeded { degree_cap })
}

/// `f` composed with a pseudo-random invertible linear substitution with
/// integer entries in [-2, 2]; draws are retried until the determinant is
/// nonzero, so the call always succeeds.
pub fn random_linear_change(f: &LocalPoly, seed: u64) -> LocalPoly {
    let m = f.variables.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let matrix: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        if determinant_nonzero(&matrix) {
            return linear_change(f, &matrix);
        }
    }
}

fn determinant_nonzero(matrix: &[Vec<i64>]) -> bool {
    let m = matrix.len();
    let mut rows: Vec<Vec<Rat>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| rat_int(x)).collect())
        .collect();
    for col in 0..m {
        let Some(p) = (col..m).find(|&r| !rows[r][col].is_zero()) else {
            return false;
        };
        rows.swap(col, p);
        let pivot_row = rows[col].clone();
        for row in rows.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (cell, pivot) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *cell -= &factor * pivot;
            }
        }
    }
    true
}

/// Substitute z_i -> sum_j matrix[i][j] z_j.
fn linear_change(f: &LocalPoly, matrix: &[Vec<i64>]) -> LocalPoly {
    let images: Vec<LocalPoly> = matrix
        .iter()
        .map(|row| {
            let mut form = LocalPoly {
                variables: f.variables.clone(),
                terms: BTreeMap::new(),
            };
            for (j, &entry) in row.iter().enumerate() {
                if entry != 0 {
                    let mut exps = vec![0; f.variables.len()];
                    exps[j] = 1;
                    form.insert_term(exps, rat_int(entry));
                }
            }
            form
        })
        .collect();
    let mut out = LocalPoly {
        variables: f.variables.clone(),
        terms: BTreeMap::new(),
    };
    for (exps, coeff) in &f.terms {
        let mut term = LocalPoly::constant(&f.variables, coeff.clone());
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = term.mul(&images[i].pow(e));
            }
        }
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn poly(text: &str, vars: &[&str]) -> LocalPoly {
        parse_poly(text, vars).unwrap()
    }

    #[test]
    fn parse_builds_sparse_terms() {
        let f = poly("z1^2 + z2^2 + z3^2", &["z1", "z2", "z3"]);
        assert_eq!(f.terms.len(), 3);
        assert_eq!(f.coefficient(&[2, 0, 0]), rat_int(1));
        assert_eq!(f.coefficient(&[0, 0, 2]), rat_int(1));

        let g = poly("x^3 + y^2", &["x", "y"]);
        assert_eq!(g.coefficient(&[3, 0]), rat_int(1));
        assert_eq!(g.coefficient(&[0, 2]), rat_int(1));
    }

    #[test]
    fn parse_handles_rationals_parens_and_signs() {
        let f = poly("1/2*x^2 - (x + y)^2", &["x", "y"]);
        assert_eq!(f.coefficient(&[2, 0]), rat(-1, 2));
        assert_eq!(f.coefficient(&[1, 1]), rat_int(-2));
        assert_eq!(f.coefficient(&[0, 2]), rat_int(-1));

        let g = poly("-x*y + 3", &["x", "y"]);
        assert_eq!(g.coefficient(&[1, 1]), rat_int(-1));
        assert_eq!(g.constant_part(), rat_int(3));

        // Cancellation drops the term entirely.
        let h = poly("x - x + y", &["x", "y"]);
        assert_eq!(h.terms.len(), 1);
    }

    #[test]
    fn parse_reports_offsets() {
        let err = parse_poly("x^^2", &["x"]).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                offset: 2,
                expected: "an exponent".to_string()
            }
        );
        assert!(matches!(
            parse_poly("x + ", &["x"]).unwrap_err(),
            ParseError::Syntax { offset: 4, .. }
        ));
        assert!(matches!(
            parse_poly("(x", &["x"]).unwrap_err(),
            ParseError::Syntax { offset: 2, .. }
        ));
        assert!(matches!(
            parse_poly("1/0", &["x"]).unwrap_err(),
            ParseError::Syntax { offset: 2, .. }
        ));
        assert!(matches!(
            parse_poly("x y", &["x", "y"]).unwrap_err(),
            ParseError::Syntax { offset: 2, .. }
        ));
    }

    #[test]
    fn parse_rejects_unknown_and_duplicate_variables() {
        assert_eq!(
            parse_poly("x + q^2", &["x", "y"]).unwrap_err(),
            ParseError::UnknownVariable {
                offset: 4,
                name: "q".to_string()
            }
        );
        assert_eq!(
            parse_poly("x", &["x", "x"]).unwrap_err(),
            ParseError::DuplicateVariable("x".to_string())
        );
    }

    #[test]
    fn jacobian_lists_one_partial_per_variable() {
        let f = poly("x^3 + y^2", &["x", "y"]);
        let jac = jacobian_ideal(&f);
        assert_eq!(jac.len(), 2);
        assert_eq!(jac[0], poly("3*x^2", &["x", "y"]));
        assert_eq!(jac[1], poly("2*y", &["x", "y"]));

        let smooth = poly("x", &["x"]);
        assert_eq!(jacobian_ideal(&smooth), vec![poly("1", &["x"])]);

        let squares = poly("z1^2 + z2^2", &["z1", "z2"]);
        let jac = jacobian_ideal(&squares);
        assert_eq!(jac[0], poly("2*z1", &["z1", "z2"]));
        assert_eq!(jac[1], poly("2*z2", &["z1", "z2"]));
    }

    #[test]
    fn sum_of_squares_has_mu_one() {
        for m in 1..=4 {
            let vars: Vec<String> = (1..=m).map(|i| format!("z{i}")).collect();
            let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
            let text = vars
                .iter()
                .map(|v| format!("{v}^2"))
                .collect::<Vec<_>>()
                .join(" + ");
            let res = milnor_number(&poly(&text, &var_refs), 30).unwrap();
            assert_eq!(res.mu, 1, "{m} squares");
            assert_eq!(res.monomial_basis, vec![vec![0; m]]);
            assert_eq!(res.stabilization_degree, 1);
        }
    }

    #[test]
    fn cusp_has_mu_two_with_basis_one_x() {
        let res = milnor_number(&poly("x^3 + y^2", &["x", "y"]), 30).unwrap();
        assert_eq!(res.mu, 2);
        assert_eq!(res.stabilization_degree, 2);
        assert_eq!(res.monomial_basis, vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn e8_matches_monomial_ideal_oracle() {
        // Jacobian of x^3 + y^5 is the monomial ideal (x^2, y^4), so the
        // quotient basis can be enumerated directly.
        let res = milnor_number(&poly("x^3 + y^5", &["x", "y"]), 30).unwrap();
        let mut expected = Vec::new();
        for a in 0..2u32 {
            for b in 0..4u32 {
                expected.push(vec![a, b]);
            }
        }
        expected.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
        assert_eq!(res.mu, 8);
        assert_eq!(res.monomial_basis, expected);
    }

    #[test]
    fn two_variable_bricks_match_enumeration() {
        // mu(x^a + y^b) counts monomials outside (x^(a-1), y^(b-1)).
        for a in 2..=5u32 {
            for b in 2..=5u32 {
                let f = poly(&format!("x^{a} + y^{b}"), &["x", "y"]);
                let mut count = 0;
                for i in 0..a - 1 {
                    for j in 0..b - 1 {
                        let _ = (i, j);
                        count += 1;
                    }
                }
                assert_eq!(
                    milnor_number(&f, 30).unwrap().mu as u32,
                    count,
                    "x^{a} + y^{b}"
                );
            }
        }
    }

    #[test]
    fn d4_and_e7_values() {
        let d4 = milnor_number(&poly("x^3 + x*y^2", &["x", "y"]), 30).unwrap();
        assert_eq!(d4.mu, 4);
        let e7 = milnor_number(&poly("x^3 + x*y^3", &["x", "y"]), 30).unwrap();
        assert_eq!(e7.mu, 7);
    }

    #[test]
    fn milnor_rejects_bad_inputs() {
        let f = poly("x^2", &["x"]);
        assert_eq!(
            milnor_number(&f, 1).unwrap_err(),
            MilnorError::CapTooSmall(1)
        );
        assert_eq!(
            milnor_number(&poly("1 + x^2", &["x"]), 30).unwrap_err(),
            MilnorError::NonzeroConstantTerm
        );
        assert_eq!(
            milnor_number(&poly("x + y^2", &["x", "y"]), 30).unwrap_err(),
            MilnorError::SmoothGerm
        );
        // A whole curve of critical points never stabilizes.
        assert_eq!(
            milnor_number(&poly("x^2*y^2", &["x", "y"]), 12).unwrap_err(),
            MilnorError::CapExceeded { degree_cap: 12 }
        );
    }

    #[test]
    fn quotient_dimension_is_nondecreasing() {
        let f = poly("x^3 + y^5", &["x", "y"]);
        let dims: Vec<usize> = (1..=8).map(|d| quotient_dimension(&f, d)).collect();
        for w in dims.windows(2) {
            assert!(w[0] <= w[1], "dims {dims:?}");
        }
        assert_eq!(*dims.last().unwrap(), 8);
    }

    #[test]
    fn identity_change_keeps_polynomial() {
        let f = poly("x^3 + x*y^2 - 2*y^4", &["x", "y"]);
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(linear_change(&f, &id), f);
    }

    #[test]
    fn linear_change_substitutes_rows() {
        // x -> x + y, y -> y turns y^2 into y^2 and x^2 into (x+y)^2.
        let f = poly("x^2", &["x", "y"]);
        let m = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(linear_change(&f, &m), poly("(x + y)^2", &["x", "y"]));
    }

    #[test]
    fn random_change_preserves_milnor_number() {
        let cusp = poly("x^3 + y^2", &["x", "y"]);
        for seed in 0..5u64 {
            let g = random_linear_change(&cusp, seed);
            assert_eq!(milnor_number(&g, 30).unwrap().mu, 2, "seed {seed}");
        }
        let node = poly("x^2 + y^2", &["x", "y"]);
        let g = random_linear_change(&node, 11);
        assert_eq!(milnor_number(&g, 30).unwrap().mu, 1);
    }

    #[test]
    fn display_orders_terms_by_degree() {
        let f = poly("x^3 + y^2 - x*y^2", &["x", "y"]);
        assert_eq!(f.to_string(), "y^2 - x*y^2 + x^3");
        assert_eq!(LocalPoly::zero(&["x"]).to_string(), "0");
    }
}
