//! Truncated graded polynomial rings over exact rationals, with the
//! characteristic-class constructions built on top of them.
//!
//! A [`Ring`] fixes named generators with positive integer degrees and a
//! truncation cutoff; a [`GradedClass`] stores a sparse map from exponent
//! vectors to rational coefficients, keeping only terms of total degree at
//! most its valid cutoff. The Todd-star series x/(e^x - 1) and the
//! exponential are generated by recurrence up to the cutoff at the point of
//! use, so every coefficient (1/720 and friends) is exact.
//!
//! [`SplitBundle`] names a subset of degree-1 generators as Chern roots and
//! carries the class constructions: `todd_star`, `chern_character`,
//! `lambda_chern_character`, `chern_class`, and the Koszul combinations
//! [`PClasses`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::rat::{factorial, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("a ring needs at least one generator")]
    EmptyGenerators,
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has degree 0; degrees must be positive")]
    ZeroDegree(String),
    #[error("cutoff {cutoff} is below the largest generator degree {max_degree}")]
    CutoffBelowGenerators { cutoff: u32, max_degree: u32 },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("root `{0}` must be a degree-1 generator")]
    RootNotDegreeOne(String),
    #[error("duplicate root `{0}`")]
    DuplicateRoot(String),
    #[error("classes belong to different rings")]
    RingMismatch,
    #[error("exponent vector has length {found}, ring has {expected} generators")]
    ExponentLength { expected: usize, found: usize },
    #[error("no exact quotient: {0}")]
    NotDivisible(String),
    #[error("series substitution needs a class with zero constant term")]
    NonzeroConstantTerm,
    #[error("exterior power {p} exceeds rank {rank}")]
    PowerOutOfRange { p: usize, rank: usize },
    #[error("Chern index {i} exceeds rank {rank}")]
    ChernOutOfRange { i: usize, rank: usize },
    #[error("coefficient extraction needs a single degree-1 generator, ring has {0}")]
    SingleGeneratorRequired(usize),
    #[error("degree {degree} exceeds the valid cutoff {cutoff}")]
    DegreeAboveCutoff { degree: u32, cutoff: u32 },
}

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    names: Vec<String>,
    degrees: Vec<u32>,
    cutoff: u32,
}

/// Handle to a truncated graded ring. Cheap to clone; two handles compare
/// equal when their generator lists and cutoffs agree.
#[derive(Debug, Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl Ring {
    /// Ring with the given `(name, degree)` generators and truncation cutoff.
    pub fn new(generators: &[(&str, u32)], cutoff: u32) -> Result<Ring, RingError> {
        if generators.is_empty() {
            return Err(RingError::EmptyGenerators);
        }
        let mut names = Vec::with_capacity(generators.len());
        let mut degrees = Vec::with_capacity(generators.len());
        for (name, degree) in generators {
            if *degree == 0 {
                return Err(RingError::ZeroDegree((*name).to_string()));
            }
            if names.iter().any(|n| n == name) {
                return Err(RingError::DuplicateGenerator((*name).to_string()));
            }
            names.push((*name).to_string());
            degrees.push(*degree);
        }
        let max_degree = degrees.iter().copied().max().unwrap();
        if cutoff < max_degree {
            return Err(RingError::CutoffBelowGenerators { cutoff, max_degree });
        }
        Ok(Ring(Arc::new(RingData {
            names,
            degrees,
            cutoff,
        })))
    }

    /// Convenience: degree-1 generators named as given.
    pub fn with_degree_one(names: &[&str], cutoff: u32) -> Result<Ring, RingError> {
        let gens: Vec<(&str, u32)> = names.iter().map(|n| (*n, 1)).collect();
        Ring::new(&gens, cutoff)
    }

    pub fn cutoff(&self) -> u32 {
        self.0.cutoff
    }

    pub fn generator_count(&self) -> usize {
        self.0.names.len()
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.0.names.iter().map(String::as_str)
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    fn term_degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.0.degrees).map(|(e, d)| e * d).sum()
    }

    pub fn zero(&self) -> GradedClass {
        GradedClass {
            ring: self.clone(),
            cutoff: self.cutoff(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, value: Rat) -> GradedClass {
        let mut c = self.zero();
        if !value.is_zero() {
            c.terms.insert(vec![0; self.generator_count()], value);
        }
        c
    }

    pub fn one(&self) -> GradedClass {
        self.constant(Rat::one())
    }

    /// The named generator as a class.
    pub fn generator(&self, name: &str) -> Result<GradedClass, RingError> {
        let i = self
            .index_of(name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))?;
        let mut exps = vec![0; self.generator_count()];
        exps[i] = 1;
        let mut c = self.zero();
        c.terms.insert(exps, Rat::one());
        Ok(c)
    }

    /// Class from explicit terms. Terms above the cutoff are discarded
    /// (truncation on entry); zero coefficients are dropped.
    pub fn class_from_terms(&self, terms: &[(Vec<u32>, Rat)]) -> Result<GradedClass, RingError> {
        let mut c = self.zero();
        for (exps, coeff) in terms {
            if exps.len() != self.generator_count() {
                return Err(RingError::ExponentLength {
                    expected: self.generator_count(),
                    found: exps.len(),
                });
            }
            if coeff.is_zero() || self.term_degree(exps) > self.cutoff() {
                continue;
            }
            let entry = c.terms.entry(exps.clone()).or_insert_with(Rat::zero);
            *entry += coeff;
            if entry.is_zero() {
                c.terms.remove(exps);
            }
        }
        Ok(c)
    }
}

/// Element of a truncated graded ring: sparse exponent-vector map with exact
/// rational coefficients, valid up to `cutoff`.
///
/// Equality compares the ring and the stored terms; the valid cutoff is
/// bookkeeping, not part of the value.
#[derive(Debug, Clone)]
pub struct GradedClass {
    ring: Ring,
    cutoff: u32,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &GradedClass) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for GradedClass {}

impl GradedClass {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Largest total degree whose coefficients are reliable. Equal to the
    /// ring cutoff except for quotients from [`GradedClass::divide_by`],
    /// which record the reduced cutoff.
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_part(&self) -> Rat {
        self.coefficient(&vec![0; self.ring.generator_count()])
    }

    /// Homogeneous part of the given total degree.
    pub fn graded_part(&self, degree: u32) -> GradedClass {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| self.ring.term_degree(e) == degree)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        GradedClass {
            ring: self.ring.clone(),
            cutoff: self.cutoff,
            terms,
        }
    }

    /// Copy restricted to total degree <= `cutoff`, with the valid cutoff
    /// lowered accordingly.
    pub fn truncated(&self, cutoff: u32) -> GradedClass {
        let cutoff = cutoff.min(self.cutoff);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| self.ring.term_degree(e) <= cutoff)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        GradedClass {
            ring: self.ring.clone(),
            cutoff,
            terms,
        }
    }

    pub fn scale(&self, factor: &Rat) -> GradedClass {
        if factor.is_zero() {
            return GradedClass {
                ring: self.ring.clone(),
                cutoff: self.cutoff,
                terms: BTreeMap::new(),
            };
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c * factor))
            .collect();
        GradedClass {
            ring: self.ring.clone(),
            cutoff: self.cutoff,
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> GradedClass {
        let mut acc = self.ring.one();
        acc.cutoff = self.cutoff;
        for _ in 0..k {
            acc = &acc * self;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// exp of a class with zero constant term (finite sum under truncation).
    pub fn exp(&self) -> Result<GradedClass, RingError> {
        series_at(self, &exp_series(self.cutoff))
    }

    /// Exact quotient by a divisor with zero constant term.
    ///
    /// Peels the lowest (total degree, lex) term of the running remainder
    /// against the lowest term of `den`; the quotient is valid up to
    /// `self.cutoff() - min_degree(den)` and that cutoff is recorded on the
    /// result. Multiplying back reproduces `self` up to the reduced cutoff.
    pub fn divide_by(&self, den: &GradedClass) -> Result<GradedClass, RingError> {
        if self.ring != den.ring {
            return Err(RingError::RingMismatch);
        }
        if den.is_zero() {
            return Err(RingError::NotDivisible("divisor is zero".to_string()));
        }
        if !den.constant_part().is_zero() {
            return Err(RingError::NotDivisible(
                "divisor has a nonzero degree-0 part".to_string(),
            ));
        }
        let ring = &self.ring;
        let work_cutoff = self.cutoff.min(den.cutoff);
        let (den_lt_exps, den_lt_coeff) = den
            .terms
            .iter()
            .min_by(|(a, _), (b, _)| monomial_order(ring, a, b))
            .map(|(e, c)| (e.clone(), c.clone()))
            .expect("nonzero divisor has a lowest term");
        let den_min_degree = ring.term_degree(&den_lt_exps);
        let quotient_cutoff = work_cutoff - den_min_degree;

        let mut remainder: BTreeMap<Vec<u32>, Rat> = self
            .terms
            .iter()
            .filter(|(e, _)| ring.term_degree(e) <= work_cutoff)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        let mut quotient: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();

        while let Some((t_exps, t_coeff)) = remainder
            .iter()
            .min_by(|(a, _), (b, _)| monomial_order(ring, a, b))
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            let Some(q_exps) = exps_sub(&t_exps, &den_lt_exps) else {
                return Err(RingError::NotDivisible(format!(
                    "term {} is not divisible by the divisor's lowest term {}",
                    monomial_string(ring, &t_exps),
                    monomial_string(ring, &den_lt_exps),
                )));
            };
            let q_coeff = &t_coeff / &den_lt_coeff;
            // remainder -= (q_coeff * x^q_exps) * den, truncated at work_cutoff
            for (d_exps, d_coeff) in &den.terms {
                let prod_exps = exps_add(&q_exps, d_exps);
                if ring.term_degree(&prod_exps) > work_cutoff {
                    continue;
                }
                let delta = &q_coeff * d_coeff;
                let entry = remainder.entry(prod_exps.clone()).or_insert_with(Rat::zero);
                *entry -= delta;
                if entry.is_zero() {
                    remainder.remove(&prod_exps);
                }
            }
            quotient.insert(q_exps, q_coeff);
        }

        Ok(GradedClass {
            ring: ring.clone(),
            cutoff: quotient_cutoff,
            terms: quotient,
        })
    }

    /// Coefficient of h^degree in a single-generator ring: integration over
    /// projective space of that dimension.
    pub fn integrate_pn(&self, degree: u32) -> Result<Rat, RingError> {
        let count = self.ring.generator_count();
        if count != 1 || self.ring.0.degrees[0] != 1 {
            return Err(RingError::SingleGeneratorRequired(count));
        }
        if degree > self.cutoff {
            return Err(RingError::DegreeAboveCutoff {
                degree,
                cutoff: self.cutoff,
            });
        }
        Ok(self.coefficient(&[degree]))
    }

    fn assert_same_ring(&self, other: &GradedClass) {
        assert!(
            self.ring == other.ring,
            "graded-class arithmetic across different rings"
        );
    }
}

fn exps_add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn exps_sub(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

/// Total order on monomials: total degree first, then exponent-vector lex.
fn monomial_order(ring: &Ring, a: &[u32], b: &[u32]) -> Ordering {
    ring.term_degree(a)
        .cmp(&ring.term_degree(b))
        .then_with(|| a.cmp(b))
}

fn monomial_string(ring: &Ring, exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.0.names[i].clone()),
            _ => parts.push(format!("{}^{}", ring.0.names[i], e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        entries.sort_by(|(a, _), (b, _)| monomial_order(&self.ring, a, b));
        let mut first = true;
        for (exps, coeff) in entries {
            let mono = monomial_string(&self.ring, exps);
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
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add for &GradedClass {
    type Output = GradedClass;

    fn add(self, rhs: &GradedClass) -> GradedClass {
        self.assert_same_ring(rhs);
        let cutoff = self.cutoff.min(rhs.cutoff);
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(&rhs.terms) {
            if self.ring.term_degree(e) > cutoff {
                continue;
            }
            let entry = terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        GradedClass {
            ring: self.ring.clone(),
            cutoff,
            terms,
        }
    }
}

impl Sub for &GradedClass {
    type Output = GradedClass;

    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self + &(-rhs)
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;

    fn neg(self) -> GradedClass {
        self.scale(&-Rat::one())
    }
}

impl Mul for &GradedClass {
    type Output = GradedClass;

    fn mul(self, rhs: &GradedClass) -> GradedClass {
        self.assert_same_ring(rhs);
        let cutoff = self.cutoff.min(rhs.cutoff);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = self.ring.term_degree(ea);
            if da > cutoff {
                continue;
            }
            for (eb, cb) in &rhs.terms {
                if da + self.ring.term_degree(eb) > cutoff {
                    continue;
                }
                let exps = exps_add(ea, eb);
                let entry = terms.entry(exps.clone()).or_insert_with(Rat::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    terms.remove(&exps);
                }
            }
        }
        GradedClass {
            ring: self.ring.clone(),
            cutoff,
            terms,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GradedClass {
            type Output = GradedClass;
            fn $method(self, rhs: GradedClass) -> GradedClass {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GradedClass> for GradedClass {
            type Output = GradedClass;
            fn $method(self, rhs: &GradedClass) -> GradedClass {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Taylor coefficients of x/(e^x - 1) up to x^cutoff, by inverting
/// sum_k x^k/(k+1)! term by term.
fn todd_star_series(cutoff: u32) -> Vec<Rat> {
    let m = cutoff as usize;
    let inv: Vec<Rat> = (0..=m)
        .map(|k| Rat::new(One::one(), factorial(k as u32 + 1)))
        .collect();
    let mut out = vec![Rat::zero(); m + 1];
    out[0] = Rat::one();
    for k in 1..=m {
        let mut acc = Rat::zero();
        for j in 1..=k {
            acc += &inv[j] * &out[k - j];
        }
        out[k] = -acc;
    }
    out
}

fn exp_series(cutoff: u32) -> Vec<Rat> {
    (0..=cutoff)
        .map(|k| Rat::new(One::one(), factorial(k)))
        .collect()
}

/// sum_k coeffs[k] * g^k for g with zero constant term.
fn series_at(g: &GradedClass, coeffs: &[Rat]) -> Result<GradedClass, RingError> {
    if !g.constant_part().is_zero() {
        return Err(RingError::NonzeroConstantTerm);
    }
    let mut acc = g.ring().constant(coeffs[0].clone());
    acc.cutoff = g.cutoff;
    let mut power = g.ring().one();
    power.cutoff = g.cutoff;
    for coeff in &coeffs[1..] {
        power = &power * g;
        if power.is_zero() {
            break;
        }
        acc = &acc + &power.scale(coeff);
    }
    Ok(acc)
}

/// The Koszul combinations Td*(F) * sum_p (-1)^p w(p) Ch(Lambda^p F) for the
/// weights w(p) = 1, p, p(p-1)/2.
pub struct PClasses {
    pub p: GradedClass,
    pub p_prime: GradedClass,
    pub p_double_prime: GradedClass,
}

/// A bundle split into Chern roots: distinct degree-1 generators of a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBundle {
    ring: Ring,
    roots: Vec<usize>,
}

impl SplitBundle {
    pub fn new(ring: &Ring, roots: &[&str]) -> Result<SplitBundle, RingError> {
        let mut indices = Vec::with_capacity(roots.len());
        for name in roots {
            let i = ring
                .index_of(name)
                .ok_or_else(|| RingError::UnknownGenerator((*name).to_string()))?;
            if ring.0.degrees[i] != 1 {
                return Err(RingError::RootNotDegreeOne((*name).to_string()));
            }
            if indices.contains(&i) {
                return Err(RingError::DuplicateRoot((*name).to_string()));
            }
            indices.push(i);
        }
        Ok(SplitBundle {
            ring: ring.clone(),
            roots: indices,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    /// The k-th Chern root as a class.
    pub fn root(&self, k: usize) -> GradedClass {
        let mut exps = vec![0; self.ring.generator_count()];
        exps[self.roots[k]] = 1;
        let mut c = self.ring.zero();
        c.terms.insert(exps, Rat::one());
        c
    }

    /// Product over roots of the x/(e^x - 1) series.
    pub fn todd_star(&self) -> GradedClass {
        let coeffs = todd_star_series(self.ring.cutoff());
        let mut acc = self.ring.one();
        for k in 0..self.rank() {
            let factor = series_at(&self.root(k), &coeffs).expect("roots have zero constant term");
            acc = &acc * &factor;
        }
        acc
    }

    /// sum_i exp(x_i); degree-0 part is the rank.
    pub fn chern_character(&self) -> GradedClass {
        let mut acc = self.ring.zero();
        for k in 0..self.rank() {
            acc = &acc + &self.root(k).exp().expect("roots have zero constant term");
        }
        acc
    }

    /// Chern character of the p-th exterior power:
    /// sum over p-element root subsets I of exp(sum_{i in I} x_i).
    pub fn lambda_chern_character(&self, p: usize) -> Result<GradedClass, RingError> {
        if p > self.rank() {
            return Err(RingError::PowerOutOfRange {
                p,
                rank: self.rank(),
            });
        }
        let mut acc = self.ring.zero();
        for subset in subsets_of_size(self.rank(), p) {
            let mut linear = self.ring.zero();
            for k in subset {
                linear = &linear + &self.root(k);
            }
            acc = &acc + &linear.exp().expect("roots have zero constant term");
        }
        Ok(acc)
    }

    /// i-th elementary symmetric polynomial in the roots.
    pub fn chern_class(&self, i: usize) -> Result<GradedClass, RingError> {
        if i > self.rank() {
            return Err(RingError::ChernOutOfRange {
                i,
                rank: self.rank(),
            });
        }
        let mut acc = self.ring.zero();
        for subset in subsets_of_size(self.rank(), i) {
            let mut exps = vec![0; self.ring.generator_count()];
            for k in subset {
                exps[self.roots[k]] += 1;
            }
            if self.ring.term_degree(&exps) <= self.ring.cutoff() {
                let entry = acc.terms.entry(exps).or_insert_with(Rat::zero);
                *entry += Rat::one();
            }
        }
        Ok(acc)
    }

    /// The (P, P', P'') triple. Results are valid up to the ring cutoff;
    /// a cutoff of at least rank + 2 shows every structurally interesting
    /// degree.
    pub fn p_classes(&self) -> PClasses {
        let td = self.todd_star();
        let mut s_plain = self.ring.zero();
        let mut s_weight_p = self.ring.zero();
        let mut s_weight_p2 = self.ring.zero();
        for p in 0..=self.rank() {
            let ch = self
                .lambda_chern_character(p)
                .expect("p ranges over 0..=rank");
            let sign = if p % 2 == 0 { 1 } else { -1 };
            let p_i64 = p as i64;
            s_plain = &s_plain + &ch.scale(&crate::rat::rat_int(sign));
            s_weight_p = &s_weight_p + &ch.scale(&crate::rat::rat_int(sign * p_i64));
            s_weight_p2 = &s_weight_p2 + &ch.scale(&crate::rat::rat(sign * p_i64 * (p_i64 - 1), 2));
        }
        PClasses {
            p: &td * &s_plain,
            p_prime: &td * &s_weight_p,
            p_double_prime: &td * &s_weight_p2,
        }
    }
}

/// All size-`k` subsets of 0..n, each as an index vector.
fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for i in start..=n.saturating_sub(needed) {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut current, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn single_root_ring(cutoff: u32) -> (Ring, SplitBundle) {
        let ring = Ring::with_degree_one(&["x"], cutoff).unwrap();
        let bundle = SplitBundle::new(&ring, &["x"]).unwrap();
        (ring, bundle)
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert_eq!(Ring::new(&[], 3).unwrap_err(), RingError::EmptyGenerators);
        assert_eq!(
            Ring::new(&[("x", 1), ("x", 1)], 2).unwrap_err(),
            RingError::DuplicateGenerator("x".to_string())
        );
        assert_eq!(
            Ring::new(&[("x", 0)], 2).unwrap_err(),
            RingError::ZeroDegree("x".to_string())
        );
        assert_eq!(
            Ring::new(&[("x", 3)], 2).unwrap_err(),
            RingError::CutoffBelowGenerators {
                cutoff: 2,
                max_degree: 3
            }
        );
    }

    #[test]
    fn rings_with_equal_data_compare_equal() {
        let a = Ring::with_degree_one(&["x", "y"], 4).unwrap();
        let b = Ring::with_degree_one(&["x", "y"], 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.one(), b.one());
        let c = Ring::with_degree_one(&["x", "y"], 5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn todd_star_single_root_frozen_series() {
        let (ring, bundle) = single_root_ring(4);
        let td = bundle.todd_star();
        let expected = ring
            .class_from_terms(&[
                (vec![0], rat_int(1)),
                (vec![1], rat(-1, 2)),
                (vec![2], rat(1, 12)),
                (vec![4], rat(-1, 720)),
            ])
            .unwrap();
        assert_eq!(td, expected);
    }

    #[test]
    fn todd_star_matches_long_division_oracle() {
        // Independent oracle: divide 1 by (e^x - 1)/x with schoolbook
        // ascending long division.
        let cutoff = 12usize;
        let den: Vec<Rat> = (0..=cutoff)
            .map(|k| Rat::new(One::one(), factorial(k as u32 + 1)))
            .collect();
        let mut rem = vec![Rat::zero(); cutoff + 1];
        rem[0] = Rat::one();
        let mut quot = vec![Rat::zero(); cutoff + 1];
        for k in 0..=cutoff {
            let q = rem[k].clone(); // den[0] = 1
            quot[k] = q.clone();
            for j in 0..=cutoff - k {
                let delta = &q * &den[j];
                rem[k + j] -= delta;
            }
        }
        let (_, bundle) = single_root_ring(cutoff as u32);
        let td = bundle.todd_star();
        for (k, expected) in quot.iter().enumerate() {
            assert_eq!(
                td.coefficient(&[k as u32]),
                *expected,
                "coefficient of x^{k}"
            );
        }
    }

    #[test]
    fn todd_star_empty_bundle_is_one() {
        let ring = Ring::with_degree_one(&["x"], 3).unwrap();
        let empty = SplitBundle::new(&ring, &[]).unwrap();
        assert_eq!(empty.todd_star(), ring.one());
        assert_eq!(empty.chern_character(), ring.zero());
    }

    #[test]
    fn todd_star_two_roots_degree_one_part() {
        let ring = Ring::with_degree_one(&["x", "y"], 3).unwrap();
        let bundle = SplitBundle::new(&ring, &["x", "y"]).unwrap();
        let part = bundle.todd_star().graded_part(1);
        let expected = ring
            .class_from_terms(&[(vec![1, 0], rat(-1, 2)), (vec![0, 1], rat(-1, 2))])
            .unwrap();
        assert_eq!(part, expected);
    }

    #[test]
    fn chern_character_single_root() {
        let (ring, bundle) = single_root_ring(2);
        let ch = bundle.chern_character();
        let expected = ring
            .class_from_terms(&[
                (vec![0], rat_int(1)),
                (vec![1], rat_int(1)),
                (vec![2], rat(1, 2)),
            ])
            .unwrap();
        assert_eq!(ch, expected);
    }

    #[test]
    fn chern_character_rank_two_low_parts() {
        let ring = Ring::with_degree_one(&["x", "y"], 3).unwrap();
        let bundle = SplitBundle::new(&ring, &["x", "y"]).unwrap();
        let ch = bundle.chern_character();
        assert_eq!(ch.constant_part(), rat_int(2));
        assert_eq!(ch.graded_part(1), bundle.chern_class(1).unwrap());
    }

    #[test]
    fn lambda_chern_character_edges() {
        let ring = Ring::with_degree_one(&["x", "y", "z"], 4).unwrap();
        let bundle = SplitBundle::new(&ring, &["x", "y", "z"]).unwrap();
        assert_eq!(bundle.lambda_chern_character(0).unwrap(), ring.one());
        assert_eq!(
            bundle.lambda_chern_character(1).unwrap(),
            bundle.chern_character()
        );
        assert_eq!(
            bundle.lambda_chern_character(4).unwrap_err(),
            RingError::PowerOutOfRange { p: 4, rank: 3 }
        );

        let pair = Ring::with_degree_one(&["x", "y"], 3).unwrap();
        let rank2 = SplitBundle::new(&pair, &["x", "y"]).unwrap();
        // Lambda^2 is the determinant line: degree-1 part is x + y.
        assert_eq!(
            rank2.lambda_chern_character(2).unwrap().graded_part(1),
            rank2.chern_class(1).unwrap()
        );
    }

    #[test]
    fn chern_classes_are_elementary_symmetric() {
        let ring = Ring::with_degree_one(&["x", "y", "z"], 3).unwrap();
        let bundle = SplitBundle::new(&ring, &["x", "y", "z"]).unwrap();
        assert_eq!(bundle.chern_class(0).unwrap(), ring.one());
        let c1 = ring
            .class_from_terms(&[
                (vec![1, 0, 0], rat_int(1)),
                (vec![0, 1, 0], rat_int(1)),
                (vec![0, 0, 1], rat_int(1)),
            ])
            .unwrap();
        assert_eq!(bundle.chern_class(1).unwrap(), c1);
        let c3 = ring
            .class_from_terms(&[(vec![1, 1, 1], rat_int(1))])
            .unwrap();
        assert_eq!(bundle.chern_class(3).unwrap(), c3);
        assert_eq!(
            bundle.chern_class(4).unwrap_err(),
            RingError::ChernOutOfRange { i: 4, rank: 3 }
        );

        let pair = Ring::with_degree_one(&["x", "y"], 2).unwrap();
        let rank2 = SplitBundle::new(&pair, &["x", "y"]).unwrap();
        let xy = pair.class_from_terms(&[(vec![1, 1], rat_int(1))]).unwrap();
        assert_eq!(rank2.chern_class(2).unwrap(), xy);
    }

    #[test]
    fn split_bundle_validates_roots() {
        let ring = Ring::new(&[("x", 1), ("t", 2)], 4).unwrap();
        assert_eq!(
            SplitBundle::new(&ring, &["q"]).unwrap_err(),
            RingError::UnknownGenerator("q".to_string())
        );
        assert_eq!(
            SplitBundle::new(&ring, &["t"]).unwrap_err(),
            RingError::RootNotDegreeOne("t".to_string())
        );
        assert_eq!(
            SplitBundle::new(&ring, &["x", "x"]).unwrap_err(),
            RingError::DuplicateRoot("x".to_string())
        );
    }

    #[test]
    fn p_class_of_line_bundle_is_minus_root() {
        let (ring, bundle) = single_root_ring(5);
        let classes = bundle.p_classes();
        let minus_x = ring.class_from_terms(&[(vec![1], rat_int(-1))]).unwrap();
        assert_eq!(classes.p, minus_x);
        assert!(classes.p_double_prime.is_zero());
    }

    #[test]
    fn p_prime_of_line_bundle_low_terms() {
        // P'(L) = -x e^x/(e^x - 1) = -1 - x/2 - x^2/12 + ...
        let (_, bundle) = single_root_ring(3);
        let p_prime = bundle.p_classes().p_prime;
        assert_eq!(p_prime.coefficient(&[0]), rat_int(-1));
        assert_eq!(p_prime.coefficient(&[1]), rat(-1, 2));
        assert_eq!(p_prime.coefficient(&[2]), rat(-1, 12));
    }

    #[test]
    fn p_prime_rank_two_lowest_terms() {
        let ring = Ring::with_degree_one(&["x", "y"], 4).unwrap();
        let bundle = SplitBundle::new(&ring, &["x", "y"]).unwrap();
        let p_prime = bundle.p_classes().p_prime;
        // Lowest terms: c1 + (2/2) c2 (even rank, so positive signs).
        assert_eq!(p_prime.graded_part(1), bundle.chern_class(1).unwrap());
        assert_eq!(p_prime.graded_part(2), bundle.chern_class(2).unwrap());
        assert!(p_prime.graded_part(0).is_zero());
    }

    #[test]
    fn koszul_identity_small_ranks() {
        for n in 1..=5u32 {
            let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let ring = Ring::with_degree_one(&name_refs, n).unwrap();
            let bundle = SplitBundle::new(&ring, &name_refs).unwrap();
            let p = bundle.p_classes().p;
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let expected = bundle
                .chern_class(n as usize)
                .unwrap()
                .scale(&rat_int(sign));
            assert_eq!(p, expected, "rank {n}");
        }
    }

    #[test]
    fn divide_todd_minus_one_by_root() {
        let (ring, bundle) = single_root_ring(4);
        let num = &bundle.todd_star() - &ring.one();
        let x = ring.generator("x").unwrap();
        let q = num.divide_by(&x).unwrap();
        assert_eq!(q.cutoff(), 3);
        let expected = ring
            .class_from_terms(&[
                (vec![0], rat(-1, 2)),
                (vec![1], rat(1, 12)),
                (vec![3], rat(-1, 720)),
            ])
            .unwrap();
        assert_eq!(q, expected);
        // Multiply back: matches the numerator up to the reduced cutoff.
        let back = &q * &x;
        assert_eq!(back.truncated(q.cutoff()), num.truncated(q.cutoff()));
    }

    #[test]
    fn divide_monomials_and_failures() {
        let (ring, _) = single_root_ring(4);
        let x = ring.generator("x").unwrap();
        let x2 = x.pow(2);
        assert_eq!(x2.divide_by(&x).unwrap(), x);

        let one_plus_x = &ring.one() + &x;
        assert!(matches!(
            one_plus_x.divide_by(&x),
            Err(RingError::NotDivisible(_))
        ));
        assert!(matches!(
            x.divide_by(&ring.zero()),
            Err(RingError::NotDivisible(_))
        ));
        // Divisor with a unit part is rejected.
        assert!(matches!(
            x.divide_by(&one_plus_x),
            Err(RingError::NotDivisible(_))
        ));

        let other = Ring::with_degree_one(&["y"], 4).unwrap();
        assert_eq!(
            x.divide_by(&other.generator("y").unwrap()).unwrap_err(),
            RingError::RingMismatch
        );
    }

    #[test]
    fn divide_in_two_variables() {
        let ring = Ring::with_degree_one(&["x", "y"], 5).unwrap();
        let x = ring.generator("x").unwrap();
        let y = ring.generator("y").unwrap();
        let q_true = &(&ring.one() + &x.scale(&rat_int(3))) + &(&y * &y).scale(&rat(1, 7));
        let den = &x + &y.scale(&rat_int(2));
        let num = &q_true * &den;
        let q = num.divide_by(&den).unwrap();
        assert_eq!(q.cutoff(), 4);
        assert_eq!(q, q_true.truncated(4));
    }

    #[test]
    fn integrate_pn_extracts_top_coefficient() {
        let ring = Ring::with_degree_one(&["h"], 3).unwrap();
        let h = ring.generator("h").unwrap();
        assert_eq!(h.pow(3).integrate_pn(3).unwrap(), rat_int(1));
        let mixed = &h.pow(3).scale(&rat_int(5)) - &h.pow(2);
        assert_eq!(mixed.integrate_pn(3).unwrap(), rat_int(5));

        let two = Ring::with_degree_one(&["x", "y"], 3).unwrap();
        assert_eq!(
            two.one().integrate_pn(2).unwrap_err(),
            RingError::SingleGeneratorRequired(2)
        );
        assert!(matches!(
            h.integrate_pn(9),
            Err(RingError::DegreeAboveCutoff { .. })
        ));
    }

    #[test]
    fn exp_requires_zero_constant_term() {
        let (ring, _) = single_root_ring(3);
        assert_eq!(
            ring.one().exp().unwrap_err(),
            RingError::NonzeroConstantTerm
        );
        let x = ring.generator("x").unwrap();
        let e = x.exp().unwrap();
        assert_eq!(e.coefficient(&[0]), rat_int(1));
        assert_eq!(e.coefficient(&[3]), rat(1, 6));
    }

    #[test]
    fn truncation_drops_high_degrees_on_entry() {
        let (ring, _) = single_root_ring(2);
        let c = ring
            .class_from_terms(&[(vec![5], rat_int(9)), (vec![1], rat_int(2))])
            .unwrap();
        assert_eq!(c.coefficient(&[5]), rat_int(0));
        assert_eq!(c.coefficient(&[1]), rat_int(2));
    }

    #[test]
    fn display_renders_signed_terms() {
        let (ring, bundle) = single_root_ring(4);
        assert_eq!(
            bundle.todd_star().to_string(),
            "1 - 1/2*x + 1/12*x^2 - 1/720*x^4"
        );
        assert_eq!(ring.zero().to_string(), "0");
    }
}
