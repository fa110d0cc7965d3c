//! Grassmannian bundles `G(k, E) → X` with presented Chow rings: the Chow
//! ring of the total space is `A*(X)[b1..bk]` modulo the classes of
//! `c(E)/c(B)` in degrees `n-k+1..n`, and it is free over `A*(X)` on the
//! Schur classes of the tautological sub-bundle `B` indexed by partitions in
//! the `k × (n-k)` box.
//!
//! Pushforward to the base is computed by writing a class in that basis,
//! one degree at a time, and reading off the coefficient of the full box.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::chern::{quotient_series, Bundle, ChernError};
use crate::polyring::{determinant, same_ring, Monomial, Poly, PolyError, Ring, VarTable};
use crate::zgraded::{GradedIdeal, Lattice, SparseRow, ZError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ideal(#[from] ZError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error("sub-bundle rank {k} must satisfy 1 <= k < {n}")]
    RankOutOfRange { k: usize, n: usize },
    #[error("partition {0} does not fit the box")]
    OutsideBox(Partition),
    #[error("pushforward needs a homogeneous class")]
    Inhomogeneous,
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeAboveBound { degree: u32, bound: u32 },
    #[error("fiber product factors have different bases")]
    DifferentBases,
    #[error("fiber product factors share the variable `{0}`")]
    SharedVariable(String),
    #[error("Schur classes fail to span degree {0} modulo the relations")]
    NotSpanned(u32),
}

pub type Result<T, E = TowerError> = std::result::Result<T, E>;

/// Weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition(Vec<usize>);

/// By size, then reverse-lexicographically: `(2) < (1,1)`.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.size().cmp(&other.size()).then(other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Partition {
    /// Sorts nothing: the parts must already be weakly decreasing. Zero
    /// parts are dropped.
    pub fn new(parts: Vec<usize>) -> Option<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(Partition(parts.into_iter().filter(|&p| p > 0).collect()))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.0.len() <= rows && self.0.iter().all(|&p| p <= cols)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=width)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count())
                .collect(),
        )
    }

    /// All partitions inside the `rows × cols` box, ordered by size then
    /// reverse-lexicographically.
    pub fn in_box(rows: usize, cols: usize) -> Vec<Partition> {
        fn rec(rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            out.push(Partition(cur.clone()));
            if cur.len() == rows {
                return;
            }
            for p in (1..=max).rev() {
                cur.push(p);
                rec(rows, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Schur class `s_λ` in the roots of a bundle with the given Chern classes,
/// by the dual Jacobi–Trudi determinant `det(e_{λ'_i - i + j})`.
pub fn schur_from_classes(ring: &Ring, chern: &[Poly], lambda: &Partition) -> Poly {
    let conj = lambda.conjugate();
    let size = conj.0.len();
    let e = |j: i64| -> Poly {
        if j < 0 || j as usize >= chern.len() {
            Poly::zero(ring)
        } else {
            chern[j as usize].clone()
        }
    };
    let m: Vec<Vec<Poly>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| e(conj.0[i] as i64 - i as i64 + j as i64))
                .collect()
        })
        .collect();
    determinant(ring, &m)
}

/// A graded ring presented as a polynomial ring modulo a homogeneous ideal.
#[derive(Debug, Clone)]
pub struct PresentedRing {
    ring: Ring,
    relations: GradedIdeal,
}

impl PresentedRing {
    pub fn free(ring: &Ring) -> Self {
        PresentedRing {
            ring: ring.clone(),
            relations: GradedIdeal::zero(ring),
        }
    }

    pub fn point(degree_bound: u32) -> Self {
        Self::free(&VarTable::point(degree_bound))
    }

    pub fn new(ring: &Ring, relations: Vec<Poly>) -> Result<Self> {
        Ok(PresentedRing {
            ring: ring.clone(),
            relations: GradedIdeal::new(ring, relations)?,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn relations(&self) -> &GradedIdeal {
        &self.relations
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        Ok(self.relations.normal_form(&p.embed(&self.ring)?)?)
    }

    fn same_as(&self, other: &PresentedRing) -> bool {
        same_ring(&self.ring, &other.ring)
            && self.relations.generators() == other.relations.generators()
    }
}

/// Which tautological bundle a Schur class is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tautological {
    Sub,
    Quot,
}

/// Per-degree solve: relation rows and Schur basis rows tagged by
/// (partition, base monomial) in extra columns.
#[derive(Debug)]
struct DegreeSolver {
    index: HashMap<Monomial, usize>,
    ncols: usize,
    tags: Vec<(usize, Monomial)>,
    lattice: Lattice,
}

/// The data needed to push classes along one Grassmannian fiber.
#[derive(Debug)]
struct Fiber {
    k: usize,
    n: usize,
    sub_names: Vec<String>,
    /// Variables of the relations together with the fiber variables.
    solve_ring: Ring,
    /// `solve_ring` without the fiber variables.
    solve_base: Ring,
    relations: Vec<Poly>,
    basis: Vec<(Partition, Poly)>,
    solvers: Vec<OnceLock<std::result::Result<DegreeSolver, TowerError>>>,
}

impl Fiber {
    fn new(level_ring: &Ring, k: usize, n: usize, sub_names: Vec<String>, relations: &[Poly]) -> Result<Self> {
        let used = |name: &str| {
            sub_names.iter().any(|s| s == name)
                || relations.iter().any(|r| {
                    level_ring
                        .index_of(name)
                        .is_some_and(|i| r.uses_var(i))
                })
        };
        let solve_ring = level_ring.restricted(used);
        let solve_base = solve_ring.restricted(|name| !sub_names.iter().any(|s| s == name));
        let relations = relations
            .iter()
            .map(|r| r.embed(&solve_ring))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut chern = vec![Poly::one(&solve_ring)];
        for s in &sub_names {
            chern.push(Poly::var(&solve_ring, s)?);
        }
        let basis = Partition::in_box(k, n - k)
            .into_iter()
            .map(|lambda| {
                let s = schur_from_classes(&solve_ring, &chern, &lambda);
                (lambda, s)
            })
            .collect();
        let solvers = (0..=level_ring.degree_bound()).map(|_| OnceLock::new()).collect();
        Ok(Fiber {
            k,
            n,
            sub_names,
            solve_ring,
            solve_base,
            relations,
            basis,
            solvers,
        })
    }

    fn relative_dimension(&self) -> u32 {
        (self.k * (self.n - self.k)) as u32
    }

    fn relation_rows(&self, d: u32, index: &HashMap<Monomial, usize>) -> Vec<SparseRow> {
        let mut rows = Vec::new();
        for r in &self.relations {
            let Some(e) = r.degree() else { continue };
            if e > d {
                continue;
            }
            for m in self.solve_ring.monomials(d - e) {
                let mut row: SparseRow = r
                    .terms()
                    .map(|(rm, c)| (index[&rm.mul(&m)], c.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                rows.push(row);
            }
        }
        rows
    }

    fn build_solver(&self, d: u32) -> Result<DegreeSolver> {
        let monomials = self.solve_ring.monomials(d);
        let index: HashMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let ncols = monomials.len();
        let mut tags = Vec::new();
        let mut basis_rows = Vec::new();
        for (li, (lambda, s)) in self.basis.iter().enumerate() {
            let sz = lambda.size() as u32;
            if sz > d {
                continue;
            }
            for nu in self.solve_base.monomials(d - sz) {
                let nu_poly = Poly::from_terms(&self.solve_base, [(nu.clone(), BigInt::one())])
                    .embed(&self.solve_ring)?;
                let prod = &nu_poly * s;
                let mut row: SparseRow = prod
                    .terms()
                    .map(|(m, c)| (index[m], c.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row.push((ncols + tags.len(), BigInt::one()));
                basis_rows.push(row);
                tags.push((li, nu));
            }
        }
        let mut lattice = Lattice::new(ncols + tags.len(), false);
        for (i, row) in self
            .relation_rows(d, &index)
            .into_iter()
            .chain(basis_rows)
            .enumerate()
        {
            lattice.insert(row, i);
        }
        Ok(DegreeSolver {
            index,
            ncols,
            tags,
            lattice,
        })
    }

    fn solver(&self, d: u32) -> Result<&DegreeSolver> {
        let bound = self.solve_ring.degree_bound();
        if d > bound {
            return Err(TowerError::DegreeAboveBound { degree: d, bound });
        }
        self.solvers[d as usize]
            .get_or_init(|| self.build_solver(d))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Coefficients of `p` (over `solve_ring`, homogeneous of degree `d`) in
    /// the Schur basis, as polynomials over `solve_base`.
    fn decompose(&self, p: &Poly, d: u32) -> Result<Vec<Poly>> {
        let solver = self.solver(d)?;
        let mut row: SparseRow = p
            .terms()
            .map(|(m, c)| (solver.index[m], c.clone()))
            .collect();
        row.sort_by_key(|(c, _)| *c);
        let (rem, _) = solver.lattice.reduce(&row);
        if rem.iter().any(|(c, _)| *c < solver.ncols) {
            return Err(TowerError::NotSpanned(d));
        }
        let mut coeffs = vec![Poly::zero(&self.solve_base); self.basis.len()];
        for (col, v) in rem {
            let (li, nu) = &solver.tags[col - solver.ncols];
            let term = Poly::from_terms(&self.solve_base, [(nu.clone(), -v)]);
            coeffs[*li] = &coeffs[*li] + &term;
        }
        Ok(coeffs)
    }

    /// Pushforward of a monomial in the fiber variables, over `solve_base`.
    fn push_monomial(&self, exps: &[u32]) -> Result<Poly> {
        let mut full = vec![0; self.solve_ring.len()];
        for (name, &e) in self.sub_names.iter().zip(exps) {
            full[self.solve_ring.index_of(name).expect("fiber variable")] = e;
        }
        let m = Poly::monomial(&self.solve_ring, full, 1);
        let d = m.degree().unwrap_or(0);
        if d < self.relative_dimension() {
            return Ok(Poly::zero(&self.solve_base));
        }
        let coeffs = self.decompose(&m, d)?;
        let top = coeffs.last().expect("box has a top partition").clone();
        // The top Schur class of the sub-bundle integrates to (-1)^{k(n-k)}.
        Ok(if self.relative_dimension() % 2 == 1 {
            -top
        } else {
            top
        })
    }

    /// Pushes `p`, which lives over any table containing the fiber
    /// variables, to the table obtained by deleting them.
    fn push(&self, p: &Poly) -> Result<Poly> {
        if !p.is_homogeneous() {
            return Err(TowerError::Inhomogeneous);
        }
        let ring = p.ring();
        let target = ring.restricted(|name| !self.sub_names.iter().any(|s| s == name));
        let fiber_idx: Vec<usize> = self
            .sub_names
            .iter()
            .map(|s| {
                ring.index_of(s)
                    .ok_or_else(|| PolyError::UnknownVariable(s.clone()))
            })
            .collect::<std::result::Result<_, _>>()?;
        let mut out = Poly::zero(&target);
        let mut cache: HashMap<Vec<u32>, Poly> = HashMap::new();
        for (exps, coeff) in p.split_by(&fiber_idx) {
            if !cache.contains_key(&exps) {
                let pushed = self.push_monomial(&exps)?.embed(&target)?;
                cache.insert(exps.clone(), pushed);
            }
            let pushed = &cache[&exps];
            if pushed.is_zero() {
                continue;
            }
            out = &out + &(&coeff.embed(&target)? * pushed);
        }
        Ok(out)
    }

    /// The Schur classes in degree `d` are a basis of the quotient module:
    /// together with the relations they generate every monomial, and no
    /// nontrivial combination of them lies in the relation span.
    fn free_in_degree(&self, d: u32) -> Result<bool> {
        let monomials = self.solve_ring.monomials(d);
        let index: HashMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut relations = Lattice::new(monomials.len(), false);
        for (i, row) in self.relation_rows(d, &index).into_iter().enumerate() {
            relations.insert(row, i);
        }
        let rel_rank = relations.rank();
        let mut all = relations.clone();
        let mut count = 0;
        for (lambda, s) in &self.basis {
            let sz = lambda.size() as u32;
            if sz > d {
                continue;
            }
            for nu in self.solve_base.monomials(d - sz) {
                let nu_poly = Poly::from_terms(&self.solve_base, [(nu, BigInt::one())])
                    .embed(&self.solve_ring)?;
                let mut row: SparseRow = (&nu_poly * s)
                    .terms()
                    .map(|(m, c)| (index[m], c.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                all.insert(row, usize::MAX);
                count += 1;
            }
        }
        all.finish();
        let unimodular = all.basis().iter().all(|r| r[0].1.is_one());
        Ok(all.rank() == rel_rank + count && all.rank() == monomials.len() && unimodular)
    }
}

/// One Grassmannian bundle `G(k, E)` over a presented base ring.
#[derive(Debug, Clone)]
pub struct TowerLevel {
    base: PresentedRing,
    bundle: Bundle,
    k: usize,
    subvars: Vec<String>,
    new_relations: Vec<Poly>,
    presented: PresentedRing,
    taut_sub: Bundle,
    taut_quot: Bundle,
    fiber: Arc<Fiber>,
}

/// `G(k, E) → base`, with fresh sub-bundle classes `{prefix}1..{prefix}k`.
pub fn extend(base: &PresentedRing, e: &Bundle, k: usize, prefix: &str) -> Result<TowerLevel> {
    let n = e.rank();
    if k < 1 || k >= n {
        return Err(TowerError::RankOutOfRange { k, n });
    }
    let ring = base.ring.extended(VarTable::chern_vars(prefix, k))?;
    let bundle = e.embed(&ring)?;
    let taut_sub = Bundle::from_vars(&ring, prefix, k)?;
    let series = quotient_series(&bundle, &taut_sub)?;
    let new_relations: Vec<Poly> = ((n - k + 1)..=n).map(|d| series.part(d as u32)).collect();
    let taut_quot = Bundle::new(n - k, (0..=n - k).map(|d| series.part(d as u32)).collect())?;
    let relations = base
        .relations
        .embed(&ring)?
        .with_generators(new_relations.iter().cloned())?;
    let subvars: Vec<String> = (1..=k).map(|i| format!("{prefix}{i}")).collect();
    let fiber = Fiber::new(&ring, k, n, subvars.clone(), &new_relations)?;
    Ok(TowerLevel {
        base: base.clone(),
        bundle,
        k,
        subvars,
        new_relations,
        presented: PresentedRing { ring, relations },
        taut_sub,
        taut_quot,
        fiber: Arc::new(fiber),
    })
}

impl TowerLevel {
    pub fn base(&self) -> &PresentedRing {
        &self.base
    }

    pub fn ring(&self) -> &Ring {
        &self.presented.ring
    }

    pub fn presented(&self) -> &PresentedRing {
        &self.presented
    }

    pub fn relations(&self) -> &GradedIdeal {
        &self.presented.relations
    }

    /// The relations added by this level, degrees `n-k+1..n`.
    pub fn new_relations(&self) -> &[Poly] {
        &self.new_relations
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.bundle.rank()
    }

    pub fn relative_dimension(&self) -> u32 {
        self.fiber.relative_dimension()
    }

    pub fn subvars(&self) -> &[String] {
        &self.subvars
    }

    pub fn taut_sub(&self) -> &Bundle {
        &self.taut_sub
    }

    pub fn taut_quot(&self) -> &Bundle {
        &self.taut_quot
    }

    pub fn schur(&self, lambda: &Partition, which: Tautological) -> Result<Poly> {
        let (rows, cols, bundle) = match which {
            Tautological::Sub => (self.k, self.n() - self.k, &self.taut_sub),
            Tautological::Quot => (self.n() - self.k, self.k, &self.taut_quot),
        };
        if !lambda.fits(rows, cols) {
            return Err(TowerError::OutsideBox(lambda.clone()));
        }
        Ok(schur_from_classes(self.ring(), bundle.classes(), lambda))
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.presented.normal_form(p)
    }

    /// Pushforward to the base. A class over the level's own table lands in
    /// the base table; a class over a larger table (a fiber product) lands in
    /// that table with the sub-bundle variables removed.
    pub fn gysin(&self, p: &Poly) -> Result<Poly> {
        let pushed = self.fiber.push(p)?;
        if same_ring(p.ring(), self.ring()) {
            Ok(pushed.embed(self.base.ring())?)
        } else {
            Ok(pushed)
        }
    }

    /// Coefficients of `p` in the Schur basis of the sub-bundle, keyed by
    /// partition, over the relation variables' base.
    pub fn schur_coordinates(&self, p: &Poly) -> Result<BTreeMap<Partition, Poly>> {
        let p = p.embed(&self.fiber.solve_ring)?;
        let d = p.homogeneous_degree().ok_or(TowerError::Inhomogeneous)?;
        let coeffs = self.fiber.decompose(&p, d)?;
        Ok(self
            .fiber
            .basis
            .iter()
            .map(|(l, _)| l.clone())
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    /// Module freeness of the level over its base in degree `d`.
    pub fn is_free_in_degree(&self, d: u32) -> Result<bool> {
        self.fiber.free_in_degree(d)
    }
}

/// `X ×_B Y` for two Grassmannian bundles over the same base.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    first: TowerLevel,
    second: TowerLevel,
    presented: PresentedRing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

pub fn fiber_product(a: &TowerLevel, b: &TowerLevel) -> Result<FiberProduct> {
    if !a.base.same_as(&b.base) {
        return Err(TowerError::DifferentBases);
    }
    if let Some(shared) = a.subvars.iter().find(|v| b.subvars.contains(v)) {
        return Err(TowerError::SharedVariable(shared.clone()));
    }
    let ring = a
        .ring()
        .extended(b.subvars.iter().map(|s| (s.clone(), b.ring().degree(b.ring().index_of(s).expect("own variable")))))?;
    let relations = a
        .relations()
        .embed(&ring)?
        .with_generators(
            b.new_relations
                .iter()
                .map(|r| r.embed(&ring))
                .collect::<std::result::Result<Vec<_>, _>>()?,
        )?;
    Ok(FiberProduct {
        first: a.clone(),
        second: b.clone(),
        presented: PresentedRing { ring, relations },
    })
}

impl FiberProduct {
    pub fn ring(&self) -> &Ring {
        &self.presented.ring
    }

    pub fn presented(&self) -> &PresentedRing {
        &self.presented
    }

    pub fn factor(&self, which: Factor) -> &TowerLevel {
        match which {
            Factor::First => &self.first,
            Factor::Second => &self.second,
        }
    }

    /// Pushes along one factor's fiber, landing in the other factor's ring.
    pub fn gysin(&self, along: Factor, p: &Poly) -> Result<Poly> {
        let (level, other) = match along {
            Factor::First => (&self.first, &self.second),
            Factor::Second => (&self.second, &self.first),
        };
        let p = p.embed(self.ring())?;
        Ok(level.fiber.push(&p)?.embed(other.ring())?)
    }
}

/// Pushforward by summing over torus-fixed points: for `G(k, E)` with `E`
/// split into integer roots `x`, `Σ_I g(x_I) / Π_{i∈I, j∉I} (x_j - x_i)`,
/// where `g(x_I)` evaluates the sub-bundle classes at the elementary
/// symmetric functions of `x_I` and `E`'s classes at those of `x`.
pub mod oracle {
    use std::collections::HashMap;

    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use crate::polyring::Poly;

    pub fn elementary(values: &[BigInt], k: usize) -> BigInt {
        let mut e = vec![BigInt::zero(); k + 1];
        e[0] = BigInt::one();
        for v in values {
            for j in (1..=k).rev() {
                let add = &e[j - 1] * v;
                e[j] += add;
            }
        }
        e[k].clone()
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    /// `sub_vars[j]` is the name of `c_{j+1}` of the sub-bundle and
    /// `bundle_vars[i]` that of `c_{i+1}(E)`; any other variable takes its
    /// value from `others` (missing ones are zero).
    pub fn symmetrization(
        p: &Poly,
        sub_vars: &[&str],
        bundle_vars: &[&str],
        roots: &[BigInt],
        others: &HashMap<String, BigInt>,
    ) -> BigRational {
        let ring = p.ring();
        let n = roots.len();
        let k = sub_vars.len();
        let mut values: Vec<BigInt> = ring
            .names()
            .iter()
            .map(|name| others.get(name).cloned().unwrap_or_default())
            .collect();
        for (i, name) in bundle_vars.iter().enumerate() {
            if let Some(idx) = ring.index_of(name) {
                values[idx] = elementary(roots, i + 1);
            }
        }
        let mut total = BigRational::zero();
        for subset in subsets(n, k) {
            let inside: Vec<BigInt> = subset.iter().map(|&i| roots[i].clone()).collect();
            for (j, name) in sub_vars.iter().enumerate() {
                if let Some(idx) = ring.index_of(name) {
                    values[idx] = elementary(&inside, j + 1);
                }
            }
            let mut denom = BigInt::one();
            for &i in &subset {
                for j in (0..n).filter(|j| !subset.contains(j)) {
                    denom *= &roots[j] - &roots[i];
                }
            }
            total += BigRational::new(p.eval(&values), denom);
        }
        total
    }

    /// Value of a base class at the same specialization.
    pub fn evaluate_base(
        q: &Poly,
        bundle_vars: &[&str],
        roots: &[BigInt],
        others: &HashMap<String, BigInt>,
    ) -> BigRational {
        let ring = q.ring();
        let values: Vec<BigInt> = ring
            .names()
            .iter()
            .map(|name| match bundle_vars.iter().position(|b| b == name) {
                Some(i) => elementary(roots, i + 1),
                None => others.get(name).cloned().unwrap_or_default(),
            })
            .collect();
        BigRational::from_integer(q.eval(&values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g24() -> TowerLevel {
        let base = PresentedRing::point(10);
        let e = Bundle::trivial(base.ring(), 4);
        extend(&base, &e, 2, "b").unwrap()
    }

    fn g2s() -> TowerLevel {
        let ring = VarTable::new(VarTable::chern_vars("c", 4), 10).unwrap();
        let base = PresentedRing::free(&ring);
        let s = Bundle::from_vars(&ring, "c", 4).unwrap();
        extend(&base, &s, 2, "b").unwrap()
    }

    fn p(r: &Ring, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    #[test]
    fn classical_g24_presentation() {
        let g = g24();
        let r = g.ring().clone();
        assert_eq!(g.new_relations(), &[p(&r, "-b1^3 + 2*b1*b2"), p(&r, "b1^4 - 3*b1^2*b2 + b2^2")]);
        assert_eq!(g.normal_form(&p(&r, "b1^3")).unwrap(), p(&r, "2*b1*b2"));
        assert_eq!(g.normal_form(&p(&r, "b1")).unwrap(), p(&r, "b1"));
        assert!(g.normal_form(&g.new_relations()[0]).unwrap().is_zero());
    }

    #[test]
    fn schur_examples() {
        let g = g24();
        let r = g.ring().clone();
        let s = |parts: Vec<usize>| g.schur(&Partition::new(parts).unwrap(), Tautological::Sub).unwrap();
        assert_eq!(s(vec![1]), p(&r, "b1"));
        assert_eq!(s(vec![1, 1]), p(&r, "b2"));
        assert_eq!(s(vec![2]), p(&r, "b1^2 - b2"));
        assert_eq!(s(vec![2, 2]), p(&r, "b2^2"));
        assert!(matches!(
            g.schur(&Partition::new(vec![3]).unwrap(), Tautological::Sub),
            Err(TowerError::OutsideBox(_))
        ));
    }

    #[test]
    fn integrals_over_g24() {
        let g = g24();
        let r = g.ring().clone();
        let one = Poly::one(g.base().ring());
        assert_eq!(g.gysin(&p(&r, "b2^2")).unwrap(), one);
        assert_eq!(g.gysin(&p(&r, "b1^4")).unwrap(), one.scale(&BigInt::from(2)));
        assert_eq!(g.gysin(&p(&r, "b1^2*b2")).unwrap(), one);
        assert!(g.gysin(&p(&r, "b1^3")).unwrap().is_zero());
        assert!(matches!(g.gysin(&p(&r, "b1 + b2")), Err(TowerError::Inhomogeneous)));
    }

    #[test]
    fn projective_line_sign() {
        // G(1,2): the sub line bundle is O(-1), whose class integrates to -1.
        let base = PresentedRing::point(4);
        let g = extend(&base, &Bundle::trivial(base.ring(), 2), 1, "h").unwrap();
        let r = g.ring().clone();
        assert_eq!(g.gysin(&p(&r, "h1")).unwrap(), Poly::constant(base.ring(), -1));
    }

    #[test]
    fn freeness_over_free_base() {
        let g = g2s();
        for d in 0..=8 {
            assert!(g.is_free_in_degree(d).unwrap(), "degree {d}");
        }
        let g = g24();
        for d in 0..=6 {
            assert!(g.is_free_in_degree(d).unwrap(), "degree {d}");
        }
    }

    #[test]
    fn g2s_pushforwards() {
        let g = g2s();
        let r = g.ring().clone();
        let base = g.base().ring().clone();
        assert_eq!(g.gysin(&p(&r, "b2^2")).unwrap(), Poly::one(&base));
        assert_eq!(g.gysin(&p(&r, "b1^5")).unwrap(), p(&base, "5*c1"));
    }

    #[test]
    fn extend_rejects_bad_rank() {
        let base = PresentedRing::point(10);
        let e = Bundle::trivial(base.ring(), 4);
        assert!(matches!(
            extend(&base, &e, 4, "b"),
            Err(TowerError::RankOutOfRange { k: 4, n: 4 })
        ));
        assert!(matches!(
            extend(&base, &e, 0, "b"),
            Err(TowerError::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn fiber_product_construction() {
        let g = g24();
        let other = extend(g.base(), &Bundle::trivial(g.base().ring(), 4), 2, "a").unwrap();
        let fp = fiber_product(&g, &other).unwrap();
        assert_eq!(fp.ring().len(), 4);
        assert_eq!(fp.presented().relations().generators().len(), 4);
        assert!(matches!(fiber_product(&g, &g), Err(TowerError::SharedVariable(_))));
        let r = fp.ring().clone();
        let pushed = fp.gysin(Factor::First, &p(&r, "b2^2*a1")).unwrap();
        assert_eq!(pushed, p(other.ring(), "a1"));
        let g2 = g2s();
        assert!(matches!(fiber_product(&g, &g2), Err(TowerError::DifferentBases)));
    }

    #[test]
    fn partitions_in_box() {
        let all = Partition::in_box(2, 2);
        let shown: Vec<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["()", "(1)", "(2)", "(1,1)", "(2,1)", "(2,2)"]);
        assert_eq!(Partition::new(vec![3, 1]).unwrap().conjugate().parts(), &[2, 1, 1]);
        assert!(Partition::new(vec![1, 2]).is_none());
    }
}
