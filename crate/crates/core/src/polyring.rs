//! Sparse multivariate polynomials with exact integer coefficients over a
//! weighted-graded variable table, truncated at a global degree bound.
//!
//! Terms are kept in graded lexicographic order, where the grading is the
//! weighted degree and ties are broken lexicographically in variable-table
//! order (the first variable is most significant). That order fixes both the
//! canonical string form and the column order of every integer matrix built
//! downstream.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials live over different variable tables")]
    RingMismatch,
    #[error("degree {degree} is outside 0..={bound}")]
    DegreeOutOfRange { degree: u32, bound: u32 },
    #[error("image of `{var}` is not homogeneous of degree {degree}")]
    InhomogeneousImage { var: String, degree: u32 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("variable `{name}` has degree {found} here but {expected} in the target table")]
    VariableDegreeMismatch {
        name: String,
        expected: u32,
        found: u32,
    },
    #[error("total class must have constant term 1")]
    NotUnit,
    #[error("polynomial is not symmetric in the roots")]
    NotSymmetric,
    #[error("cannot parse polynomial at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T, E = PolyError> = std::result::Result<T, E>;

/// Ordered, immutable list of graded generators plus the truncation degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
    degrees: Vec<u32>,
    degree_bound: u32,
}

/// Shared handle to a variable table; polynomials carry one.
pub type Ring = Arc<VarTable>;

impl VarTable {
    pub const DEFAULT_DEGREE_BOUND: u32 = 10;

    pub fn new<S, I>(vars: I, degree_bound: u32) -> Result<Ring>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, u32)>,
    {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (name, degree) in vars {
            let name = name.into();
            if degree == 0 {
                return Err(PolyError::ZeroDegree(name));
            }
            if names.contains(&name) {
                return Err(PolyError::DuplicateVariable(name));
            }
            names.push(name);
            degrees.push(degree);
        }
        Ok(Arc::new(VarTable {
            names,
            degrees,
            degree_bound,
        }))
    }

    /// The table with no variables: the coefficient ring of a point.
    pub fn point(degree_bound: u32) -> Ring {
        Arc::new(VarTable {
            names: Vec::new(),
            degrees: Vec::new(),
            degree_bound,
        })
    }

    /// Variables `prefix1..prefixN` with degrees `1..N`, the usual shape of a
    /// set of Chern class generators.
    pub fn chern_vars(prefix: &str, count: usize) -> Vec<(String, u32)> {
        (1..=count).map(|i| (format!("{prefix}{i}"), i as u32)).collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn vars(&self) -> impl Iterator<Item = (&str, u32)> {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.degrees.iter().copied())
    }

    /// Appends variables at the end; existing polynomials embed unchanged.
    pub fn extended<S: Into<String>>(
        &self,
        extra: impl IntoIterator<Item = (S, u32)>,
    ) -> Result<Ring> {
        let vars = self
            .vars()
            .map(|(n, d)| (n.to_string(), d))
            .chain(extra.into_iter().map(|(n, d)| (n.into(), d)))
            .collect::<Vec<_>>();
        VarTable::new(vars, self.degree_bound)
    }

    /// The sub-table of variables accepted by `keep`, order preserved.
    pub fn restricted(&self, keep: impl Fn(&str) -> bool) -> Ring {
        let vars = self
            .vars()
            .filter(|(n, _)| keep(n))
            .map(|(n, d)| (n.to_string(), d))
            .collect::<Vec<_>>();
        VarTable::new(vars, self.degree_bound).expect("sub-table of a valid table")
    }

    pub fn with_bound(&self, degree_bound: u32) -> Ring {
        Arc::new(VarTable {
            degree_bound,
            ..self.clone()
        })
    }

    pub fn contains_all(&self, other: &VarTable) -> bool {
        other
            .vars()
            .all(|(n, d)| self.index_of(n).map(|i| self.degrees[i]) == Some(d))
    }

    pub fn monomial_degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// All monomials of weighted degree exactly `d`, in descending graded-lex
    /// order.
    pub fn monomials(&self, d: u32) -> Vec<Monomial> {
        fn rec(degrees: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == degrees.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut e = left / degrees[i];
            loop {
                cur.push(e);
                rec(degrees, i + 1, left - e * degrees[i], cur, out);
                cur.pop();
                if e == 0 {
                    break;
                }
                e -= 1;
            }
        }
        let mut out = Vec::new();
        rec(&self.degrees, 0, d, &mut Vec::with_capacity(self.len()), &mut out);
        // Depth-first with descending exponents already yields lex-descending order.
        out.into_iter()
            .map(|exps| Monomial { degree: d, exps })
            .collect()
    }
}

/// Exponent vector tagged with its weighted degree. The derived order is
/// graded lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(ring: &VarTable, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), ring.len(), "exponent vector length");
        Monomial {
            degree: ring.monomial_degree(&exps),
            exps,
        }
    }

    pub fn one(ring: &VarTable) -> Self {
        Monomial {
            degree: 0,
            exps: vec![0; ring.len()],
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    fn write(&self, ring: &VarTable, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(ring.name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial over a [`VarTable`]. No zero coefficients are stored and no
/// term exceeds the table's degree bound, so structural equality is equality
/// of elements.
#[derive(Clone)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Monomial, BigInt>,
}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn zero(ring: &Ring) -> Self {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, BigInt::one())
    }

    pub fn constant(ring: &Ring, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(Monomial::one(ring), c.into());
        p
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_at(ring, i))
    }

    pub fn var_at(ring: &Ring, i: usize) -> Self {
        let mut exps = vec![0; ring.len()];
        exps[i] = 1;
        Self::monomial(ring, exps, BigInt::one())
    }

    pub fn monomial(ring: &Ring, exps: Vec<u32>, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(Monomial::new(ring, exps), coeff.into());
        p
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Parses the infix form used in golden files and scripts, e.g.
    /// `-f3 + (c1-b1)^2*f1 + 2*c2`.
    pub fn parse(ring: &Ring, text: &str) -> Result<Self> {
        let mut parser = TextParser {
            ring,
            src: text.as_bytes(),
            pos: 0,
        };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one(&self.ring))
    }

    /// Highest weighted degree present; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Degree when homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        if self.is_homogeneous() {
            self.degree()
        } else {
            None
        }
    }

    pub fn graded_part(&self, d: u32) -> Result<Self> {
        if d > self.ring.degree_bound {
            return Err(PolyError::DegreeOutOfRange {
                degree: d,
                bound: self.ring.degree_bound,
            });
        }
        Ok(self.part(d))
    }

    pub(crate) fn part(&self, d: u32) -> Self {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Whether variable `i` occurs in some term.
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exps[i] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() || m.degree > self.ring.degree_bound {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        let bound = self.ring.degree_bound;
        let mut out = Poly::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.degree + mb.degree > bound {
                    // Terms are sorted by degree first, so the rest of `other` is too big.
                    break;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Simultaneous substitution of variables by polynomials over the same
    /// table. Each image must be zero or homogeneous of its variable's degree.
    pub fn substitute(&self, assignments: &[(&str, Poly)]) -> Result<Poly> {
        let mut images: Vec<Option<&Poly>> = vec![None; self.ring.len()];
        for (name, img) in assignments {
            let i = self
                .ring
                .index_of(name)
                .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            if !same_ring(&self.ring, &img.ring) {
                return Err(PolyError::RingMismatch);
            }
            if !img.is_zero() && img.homogeneous_degree() != Some(self.ring.degree(i)) {
                return Err(PolyError::InhomogeneousImage {
                    var: name.to_string(),
                    degree: self.ring.degree(i),
                });
            }
            images[i] = Some(img);
        }
        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut kept = vec![0; self.ring.len()];
            let mut factor = Poly::one(&self.ring);
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match images[i] {
                    None => kept[i] = e,
                    Some(img) => {
                        let pw = powers.entry((i, e)).or_insert_with(|| img.pow(e));
                        factor = &factor * &*pw;
                    }
                }
            }
            let term = Poly::monomial(&self.ring, kept, c.clone());
            out = &out + &(&term * &factor);
        }
        Ok(out)
    }

    /// Re-expresses this polynomial over `target`, matching variables by
    /// name. Terms above the target bound are dropped.
    pub fn embed(&self, target: &Ring) -> Result<Poly> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ring.len());
        for i in 0..self.ring.len() {
            let name = self.ring.name(i);
            match target.index_of(name) {
                Some(j) => {
                    if target.degree(j) != self.ring.degree(i) {
                        return Err(PolyError::VariableDegreeMismatch {
                            name: name.to_string(),
                            expected: target.degree(j),
                            found: self.ring.degree(i),
                        });
                    }
                    map.push(Some(j));
                }
                None if self.uses_var(i) => {
                    return Err(PolyError::UnknownVariable(name.to_string()))
                }
                None => map.push(None),
            }
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.exps.iter().enumerate() {
                if let Some(j) = map[i] {
                    exps[j] = e;
                }
            }
            out.add_term(Monomial::new(target, exps), c.clone());
        }
        Ok(out)
    }

    /// Evaluates at integer values, one per variable of the table.
    pub fn eval(&self, values: &[BigInt]) -> BigInt {
        assert_eq!(values.len(), self.ring.len(), "one value per variable");
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in values.iter().zip(&m.exps) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Splits off the exponents of the variables in `fiber`: returns pairs
    /// (exponents of the fiber variables, coefficient polynomial in the others).
    pub(crate) fn split_by(&self, fiber: &[usize]) -> BTreeMap<Vec<u32>, Poly> {
        let mut out: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = fiber.iter().map(|&i| m.exps[i]).collect();
            let mut rest = m.exps.clone();
            for &i in fiber {
                rest[i] = 0;
            }
            out.entry(key)
                .or_insert_with(|| Poly::zero(&self.ring))
                .add_term(Monomial::new(&self.ring, rest), c.clone());
        }
        out
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs)
                    .expect("arithmetic on polynomials over different variable tables")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Canonical string: descending graded-lex terms, `k*mono`, unit
/// coefficients elided, `0` for the zero polynomial.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                m.write(&self.ring, f)?;
            }
        }
        Ok(())
    }
}

/// Multiplicative inverse of a total class `1 + (higher terms)`, truncated
/// at the degree bound.
pub fn series_invert(c: &Poly) -> Result<Poly> {
    let ring = c.ring();
    if !c.constant_term().is_one() || !c.part(0).checked_sub(&Poly::one(ring))?.is_zero() {
        return Err(PolyError::NotUnit);
    }
    let bound = ring.degree_bound();
    let parts: Vec<Poly> = (0..=bound).map(|d| c.part(d)).collect();
    let mut inv: Vec<Poly> = vec![Poly::one(ring)];
    for d in 1..=bound {
        let mut acc = Poly::zero(ring);
        for i in 1..=d {
            let (ci, prev) = (&parts[i as usize], &inv[(d - i) as usize]);
            if !ci.is_zero() && !prev.is_zero() {
                acc = &acc + &(ci * prev);
            }
        }
        inv.push(-acc);
    }
    Ok(inv.into_iter().fold(Poly::zero(ring), |a, p| &a + &p))
}

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// rows with memoised column subsets. The empty matrix has determinant 1.
pub fn determinant(ring: &Ring, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(n < 24, "determinant size");
    assert!(m.iter().all(|r| r.len() == n), "square matrix");
    // minors[mask] = det of rows (n - popcount(mask))..n restricted to columns in mask
    let mut minors: HashMap<u32, Poly> = HashMap::new();
    minors.insert(0, Poly::one(ring));
    for size in 1..=n {
        let row = n - size;
        let masks: Vec<u32> = (0u32..(1 << n))
            .filter(|s| s.count_ones() as usize == size)
            .collect();
        for mask in masks {
            let mut acc = Poly::zero(ring);
            let mut sign_pos = true;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = &m[row][col];
                if !entry.is_zero() {
                    let sub = &minors[&(mask & !(1 << col))];
                    if !sub.is_zero() {
                        let t = entry * sub;
                        acc = if sign_pos { &acc + &t } else { &acc - &t };
                    }
                }
                sign_pos = !sign_pos;
            }
            minors.insert(mask, acc);
        }
    }
    minors.remove(&((1u32 << n) - 1)).unwrap_or_else(|| Poly::one(ring))
}

/// Auxiliary degree-1 Chern roots `x1..xn` together with a table of
/// elementary symmetric classes, for splitting-principle computations.
pub struct RootSet {
    n: usize,
    roots: Ring,
    elementary: Ring,
    e_polys: Vec<Poly>,
}

impl RootSet {
    pub fn new(n: usize, degree_bound: u32) -> Self {
        Self::with_names(n, degree_bound, "e")
    }

    /// Elementary classes are named `{prefix}1..{prefix}n`.
    pub fn with_names(n: usize, degree_bound: u32, prefix: &str) -> Self {
        let roots = VarTable::new((1..=n).map(|i| (format!("x{i}"), 1)), degree_bound)
            .expect("root names are distinct");
        let elementary =
            VarTable::new(VarTable::chern_vars(prefix, n), degree_bound).expect("distinct names");
        let mut e_polys = vec![Poly::one(&roots)];
        // e_k via the product of (1 + x_i), graded.
        let mut total = Poly::one(&roots);
        for i in 0..n {
            total = &total * &(&Poly::one(&roots) + &Poly::var_at(&roots, i));
        }
        for k in 1..=n {
            e_polys.push(total.part(k as u32));
        }
        RootSet {
            n,
            roots,
            elementary,
            e_polys,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn root_ring(&self) -> &Ring {
        &self.roots
    }

    pub fn elementary_ring(&self) -> &Ring {
        &self.elementary
    }

    pub fn root(&self, i: usize) -> Poly {
        Poly::var_at(&self.roots, i)
    }

    /// `e_k` written in the roots.
    pub fn elementary(&self, k: usize) -> &Poly {
        &self.e_polys[k]
    }

    pub fn is_symmetric(&self, p: &Poly) -> bool {
        if self.n < 2 {
            return true;
        }
        let transposition: Vec<usize> = (0..self.n)
            .map(|i| match i {
                0 => 1,
                1 => 0,
                _ => i,
            })
            .collect();
        let cycle: Vec<usize> = (0..self.n).map(|i| (i + 1) % self.n).collect();
        permute(p, &transposition) == *p && permute(p, &cycle) == *p
    }

    /// Rewrites a symmetric polynomial in the roots as a polynomial in the
    /// elementary classes, by repeated leading-term subtraction.
    pub fn symmetric_reduce(&self, p: &Poly) -> Result<Poly> {
        if !same_ring(p.ring(), &self.roots) {
            return Err(PolyError::RingMismatch);
        }
        if !self.is_symmetric(p) {
            return Err(PolyError::NotSymmetric);
        }
        let mut rest = p.clone();
        let mut out = Poly::zero(&self.elementary);
        while let Some((m, c)) = rest.leading_term() {
            let alpha = m.exps().to_vec();
            if alpha.windows(2).any(|w| w[0] < w[1]) {
                return Err(PolyError::NotSymmetric);
            }
            let beta: Vec<u32> = (0..self.n)
                .map(|i| alpha[i] - alpha.get(i + 1).copied().unwrap_or(0))
                .collect();
            let c = c.clone();
            out.add_term(Monomial::new(&self.elementary, beta.clone()), c.clone());
            let expanded = self.expand_monomial(&beta);
            rest = &rest - &expanded.scale(&c);
        }
        Ok(out)
    }

    fn expand_monomial(&self, beta: &[u32]) -> Poly {
        beta.iter()
            .enumerate()
            .fold(Poly::one(&self.roots), |acc, (i, &b)| {
                &acc * &self.e_polys[i + 1].pow(b)
            })
    }

    /// Inverse of [`RootSet::symmetric_reduce`]: substitutes `e_k` by the
    /// elementary symmetric polynomial in the roots.
    pub fn expand(&self, q: &Poly) -> Result<Poly> {
        if !same_ring(q.ring(), &self.elementary) {
            return Err(PolyError::RingMismatch);
        }
        let mut out = Poly::zero(&self.roots);
        for (m, c) in q.terms() {
            out = &out + &self.expand_monomial(m.exps()).scale(c);
        }
        Ok(out)
    }
}

fn permute(p: &Poly, perm: &[usize]) -> Poly {
    let ring = p.ring();
    Poly::from_terms(
        ring,
        p.terms().map(|(m, c)| {
            let mut exps = vec![0; ring.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[perm[i]] = e;
            }
            (Monomial::new(ring, exps), c.clone())
        }),
    )
}

struct TextParser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

impl TextParser<'_> {
    fn error(&self, message: &str) -> PolyError {
        PolyError::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let e = u32::try_from(&n).map_err(|_| self.error("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(b) if b.is_ascii_digit() => Ok(Poly::constant(self.ring, self.integer()?)),
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Poly::var(self.ring, name)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}
