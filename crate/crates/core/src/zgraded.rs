//! Graded ideals over the integers, decided degree by degree with integer
//! lattice arithmetic: Hermite and Smith normal forms, membership with
//! certificates, ideal containment and the abelian group structure of each
//! graded piece of a quotient ring.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::polyring::{same_ring, Monomial, Poly, PolyError, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeAboveBound { degree: u32, bound: u32 },
    #[error("the zero vector has no content")]
    ZeroVector,
    #[error("ideal and polynomial live over different variable tables")]
    RingMismatch,
}

pub type Result<T, E = ZError> = std::result::Result<T, E>;

/// Sparse integer vector: strictly increasing column indices, no zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

fn lin_comb(s: &BigInt, a: &SparseRow, t: &BigInt, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (col, v) = match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                i += 1;
                j += 1;
                (*ca, s * va + t * vb)
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                i += 1;
                (*ca, s * va)
            }
            (Some((ca, va)), None) => {
                i += 1;
                (*ca, s * va)
            }
            (_, Some((cb, vb))) => {
                j += 1;
                (*cb, t * vb)
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

type Combo = BTreeMap<usize, BigInt>;

fn combo_lin(s: &BigInt, a: &Combo, t: &BigInt, b: &Combo) -> Combo {
    let mut out = Combo::new();
    for (k, v) in a {
        out.insert(*k, s * v);
    }
    for (k, v) in b {
        let e = out.entry(*k).or_default();
        *e += t * v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Row lattice in echelon form, built incrementally, optionally recording
/// each basis row as an integer combination of the inserted rows.
#[derive(Debug, Clone)]
pub struct Lattice {
    ncols: usize,
    rows: Vec<SparseRow>,
    combos: Option<Vec<Combo>>,
    pivots: BTreeMap<usize, usize>,
    reduced: bool,
}

impl Lattice {
    pub fn new(ncols: usize, track: bool) -> Self {
        Lattice {
            ncols,
            rows: Vec::new(),
            combos: track.then(Vec::new),
            pivots: BTreeMap::new(),
            reduced: true,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Adds `row` (the input with index `origin`) to the lattice.
    pub fn insert(&mut self, mut row: SparseRow, origin: usize) {
        let one = BigInt::one();
        let mut combo = Combo::new();
        if self.combos.is_some() {
            combo.insert(origin, one.clone());
        }
        self.reduced = false;
        loop {
            let Some((lead, a)) = row.first().cloned() else {
                return;
            };
            let Some(&pi) = self.pivots.get(&lead) else {
                if a.is_negative() {
                    row = row.into_iter().map(|(c, v)| (c, -v)).collect();
                    combo.values_mut().for_each(|v| *v = -&*v);
                }
                self.pivots.insert(lead, self.rows.len());
                self.rows.push(row);
                if let Some(cs) = &mut self.combos {
                    cs.push(combo);
                }
                self.reduce_tail(self.rows.len() - 1);
                return;
            };
            let p = self.rows[pi][0].1.clone();
            if (&a % &p).is_zero() {
                let q = -(&a / &p);
                row = lin_comb(&one, &row, &q, &self.rows[pi]);
                if let Some(cs) = &self.combos {
                    combo = combo_lin(&one, &combo, &q, &cs[pi]);
                }
                continue;
            }
            let g = p.extended_gcd(&a);
            // g.x * p + g.y * a = gcd, with gcd > 0
            let (x, y) = (g.x, g.y);
            let new_pivot = lin_comb(&x, &self.rows[pi], &y, &row);
            let (ag, pg) = (&a / &g.gcd, -(&p / &g.gcd));
            let rest = lin_comb(&ag, &self.rows[pi], &pg, &row);
            if let Some(cs) = &mut self.combos {
                let new_combo = combo_lin(&x, &cs[pi], &y, &combo);
                combo = combo_lin(&ag, &cs[pi], &pg, &combo);
                cs[pi] = new_combo;
            }
            self.rows[pi] = new_pivot;
            self.reduce_tail(pi);
            row = rest;
        }
    }

    /// Reduces the non-leading entries of row `ri` modulo the pivots in
    /// their columns, which keeps entries from growing during insertion.
    fn reduce_tail(&mut self, ri: usize) {
        let one = BigInt::one();
        let mut cursor = self.rows[ri][0].0 + 1;
        loop {
            let next = self.rows[ri].iter().find(|(c, _)| *c >= cursor).cloned();
            let Some((col, val)) = next else { break };
            cursor = col + 1;
            let Some(&rk) = self.pivots.get(&col) else { continue };
            if rk == ri {
                continue;
            }
            let q = val.div_floor(&self.rows[rk][0].1);
            if q.is_zero() {
                continue;
            }
            let nq = -q;
            self.rows[ri] = lin_comb(&one, &self.rows[ri], &nq, &self.rows[rk]);
            if let Some(cs) = &mut self.combos {
                cs[ri] = combo_lin(&one, &cs[ri], &nq, &cs[rk]);
            }
        }
    }

    /// Reduces entries above every pivot into `[0, pivot)`, giving the
    /// unique Hermite basis of the lattice.
    pub fn finish(&mut self) {
        if self.reduced {
            return;
        }
        let one = BigInt::one();
        let order: Vec<(usize, usize)> = self.pivots.iter().map(|(c, r)| (*c, *r)).collect();
        for (j_pos, &(col, rj)) in order.iter().enumerate() {
            let p = self.rows[rj][0].1.clone();
            for &(_, ri) in &order[..j_pos] {
                let v = self.rows[ri]
                    .iter()
                    .find(|(c, _)| *c == col)
                    .map(|(_, v)| v.clone());
                if let Some(v) = v {
                    let q = v.div_floor(&p);
                    if !q.is_zero() {
                        let nq = -q;
                        self.rows[ri] = lin_comb(&one, &self.rows[ri], &nq, &self.rows[rj]);
                        if let Some(cs) = &mut self.combos {
                            cs[ri] = combo_lin(&one, &cs[ri], &nq, &cs[rj]);
                        }
                    }
                }
            }
        }
        self.reduced = true;
    }

    /// Canonical representative of `v` modulo the lattice, and the
    /// combination of inserted rows that was subtracted (when tracked).
    pub fn reduce(&self, v: &SparseRow) -> (SparseRow, Combo) {
        let one = BigInt::one();
        let mut cur = v.clone();
        let mut used = Combo::new();
        let mut cursor = 0usize;
        loop {
            let next = cur.iter().find(|(c, _)| *c >= cursor).cloned();
            let Some((col, val)) = next else { break };
            cursor = col + 1;
            if let Some(&ri) = self.pivots.get(&col) {
                let p = &self.rows[ri][0].1;
                let q = val.div_floor(p);
                if !q.is_zero() {
                    cur = lin_comb(&one, &cur, &-&q, &self.rows[ri]);
                    if let Some(cs) = &self.combos {
                        used = combo_lin(&one, &used, &q, &cs[ri]);
                    }
                }
            }
        }
        (cur, used)
    }

    /// Integer combination of inserted rows equal to `v`, if `v` lies in the
    /// lattice. Requires tracking for a nonempty combination.
    pub fn solve(&self, v: &SparseRow) -> Option<Combo> {
        let (rem, used) = self.reduce(v);
        rem.is_empty().then_some(used)
    }

    pub fn contains(&self, v: &SparseRow) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Basis rows ordered by pivot column.
    pub fn basis(&self) -> Vec<&SparseRow> {
        self.pivots.values().map(|&r| &self.rows[r]).collect()
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank(), self.ncols);
        for (i, row) in self.basis().into_iter().enumerate() {
            for (c, v) in row {
                m.data[i][*c] = v.clone();
            }
        }
        m
    }
}

/// Dense exact integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows
                .iter()
                .map(|r| r.iter().cloned().map(Into::into).collect())
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * &other.data[k][j];
                }
            }
        }
        out
    }

    pub fn is_unimodular(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let d = dense_det(self);
        d.abs().is_one()
    }

    fn row_axpy(&mut self, dst: usize, k: &BigInt, src: usize) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = k * &self.data[src][j];
            self.data[dst][j] += v;
        }
    }

    fn col_axpy(&mut self, dst: usize, k: &BigInt, src: usize) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = k * &self.data[i][src];
            self.data[i][dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.data[i].iter_mut().for_each(|v| *v = -&*v);
    }

    fn negate_col(&mut self, j: usize) {
        self.data.iter_mut().for_each(|r| r[j] = -&r[j]);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.data.iter_mut().for_each(|r| r.swap(a, b));
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Determinant by fraction-free elimination (Bareiss).
fn dense_det(m: &IntMatrix) -> BigInt {
    let n = m.rows;
    let mut a = m.data.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Row-style Hermite form `H = U·M`: echelon, positive pivots, entries above
/// each pivot reduced into `[0, pivot)`. Zero rows sink to the bottom.
pub fn hermite_rows(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for col in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let best = (r..m.rows)
                .filter(|&i| !h.data[i][col].is_zero())
                .min_by(|&a, &b| h.data[a][col].abs().cmp(&h.data[b][col].abs()));
            let Some(best) = best else { break };
            h.data.swap(r, best);
            u.data.swap(r, best);
            let mut clean = true;
            for i in r + 1..m.rows {
                if h.data[i][col].is_zero() {
                    continue;
                }
                let q = -h.data[i][col].div_floor(&h.data[r][col]);
                h.row_axpy(i, &q, r);
                u.row_axpy(i, &q, r);
                clean &= h.data[i][col].is_zero();
            }
            if clean {
                break;
            }
        }
        if h.data[r][col].is_zero() {
            continue;
        }
        if h.data[r][col].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.data[i][col].div_floor(&h.data[r][col]);
            h.row_axpy(i, &q, r);
            u.row_axpy(i, &q, r);
        }
        r += 1;
    }
    (h, u)
}

/// Column-style Hermite form with its transform: `H = M·V`.
#[derive(Debug, Clone)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub v: IntMatrix,
}

/// Column-style Hermite normal form: the transpose of the row-style form of
/// the transpose. Pivots are positive and the entries beside each pivot in
/// its row are reduced modulo it.
pub fn hermite(m: &IntMatrix) -> HermiteForm {
    let (ht, u) = hermite_rows(&m.transpose());
    HermiteForm {
        h: ht.transpose(),
        v: u.transpose(),
    }
}

/// `U·M·V = D` with `D` diagonal, nonnegative, each entry dividing the next.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.data[i][i].clone())
            .filter(|v| !v.is_zero())
            .collect()
    }
}

pub fn smith(m: &IntMatrix) -> SmithForm {
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let d = smith_core(m.clone(), Some((&mut u, &mut v)));
    SmithForm { d, u, v }
}

/// Nonzero invariant factors only, without transforms.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let d = smith_core(m.clone(), None);
    (0..d.rows.min(d.cols))
        .map(|i| d.data[i][i].clone())
        .filter(|v| !v.is_zero())
        .collect()
}

fn smith_core(mut a: IntMatrix, mut tr: Option<(&mut IntMatrix, &mut IntMatrix)>) -> IntMatrix {
    let (m, n) = (a.rows, a.cols);
    for t in 0..m.min(n) {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a.data[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| {
                        a.data[i][j].abs() < a.data[bi][bj].abs()
                    }) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return a;
            };
            a.data.swap(t, bi);
            a.swap_cols(t, bj);
            if let Some((u, v)) = tr.as_mut() {
                u.data.swap(t, bi);
                v.swap_cols(t, bj);
            }
            let mut dirty = false;
            for i in t + 1..m {
                let q = -a.data[i][t].div_floor(&a.data[t][t]);
                a.row_axpy(i, &q, t);
                if let Some((u, _)) = tr.as_mut() {
                    u.row_axpy(i, &q, t);
                }
                dirty |= !a.data[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = -a.data[t][j].div_floor(&a.data[t][t]);
                a.col_axpy(j, &q, t);
                if let Some((_, v)) = tr.as_mut() {
                    v.col_axpy(j, &q, t);
                }
                dirty |= !a.data[t][j].is_zero();
            }
            if dirty {
                continue 'pivot;
            }
            // Divisibility: fold in any row whose entries the pivot fails to divide.
            let p = a.data[t][t].clone();
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !(&a.data[i][j] % &p).is_zero())
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.row_axpy(t, &one, i);
                    if let Some((u, _)) = tr.as_mut() {
                        u.row_axpy(t, &one, i);
                    }
                }
                None => break,
            }
        }
        if a.data[t][t].is_negative() {
            a.negate_col(t);
            if let Some((_, v)) = tr.as_mut() {
                v.negate_col(t);
            }
        }
    }
    a
}

/// True iff the entries have gcd 1.
pub fn primitive(v: &[BigInt]) -> Result<bool> {
    if v.iter().all(Zero::is_zero) {
        return Err(ZError::ZeroVector);
    }
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    Ok(g.is_one())
}

/// Free rank and torsion invariants of one graded piece of a quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedGroupEntry {
    pub degree: u32,
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl fmt::Display for GradedGroupEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// The graded abelian group of a quotient ring, one entry per degree.
pub type GradedGroup = Vec<GradedGroupEntry>;

/// Explicit witness `p = Σ generator[i] · cofactor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub cofactors: Vec<(usize, Poly)>,
}

impl Certificate {
    pub fn recombine(&self, ideal: &GradedIdeal) -> Poly {
        self.cofactors
            .iter()
            .fold(Poly::zero(ideal.ring()), |acc, (i, c)| {
                &acc + &(&ideal.generators[*i] * c)
            })
    }

    pub fn verify(&self, ideal: &GradedIdeal, p: &Poly) -> bool {
        self.recombine(ideal) == *p
    }
}

#[derive(Debug, Clone)]
struct DegreeSpan {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    origins: Vec<(usize, Monomial)>,
    lattice: Lattice,
}

/// Homogeneous ideal given by generators. Each graded piece is the integer
/// span of `generator · monomial` products of that degree.
#[derive(Debug, Clone)]
pub struct GradedIdeal {
    ring: Ring,
    generators: Vec<Poly>,
    spans: Arc<Vec<OnceLock<DegreeSpan>>>,
    /// Same spans with certificates recorded; built only for `member`.
    tracked: Arc<Vec<OnceLock<DegreeSpan>>>,
}

/// Outcome of a generator-wise containment test `J ⊆ I`.
#[derive(Debug, Clone)]
pub struct Containment {
    pub holds: bool,
    /// First generator of `J` not in `I`: (index, degree).
    pub failure: Option<(usize, u32)>,
    /// Certificates for the generators that were checked and found inside.
    pub certificates: Vec<(usize, Certificate)>,
    /// Generators above the sweep degree, not examined.
    pub skipped: Vec<usize>,
}

impl GradedIdeal {
    pub fn new(ring: &Ring, generators: Vec<Poly>) -> Result<Self> {
        for g in &generators {
            if !same_ring(g.ring(), ring) {
                return Err(ZError::RingMismatch);
            }
            if !g.is_homogeneous() {
                return Err(ZError::Inhomogeneous);
            }
        }
        let slots = || (0..=ring.degree_bound()).map(|_| OnceLock::new()).collect();
        Ok(GradedIdeal {
            ring: ring.clone(),
            generators,
            spans: Arc::new(slots()),
            tracked: Arc::new(slots()),
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::new(ring, Vec::new()).expect("empty generator list")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Same ideal with extra generators appended.
    pub fn with_generators(&self, extra: impl IntoIterator<Item = Poly>) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(extra);
        Self::new(&self.ring, gens)
    }

    /// Generators re-expressed over a larger table.
    pub fn embed(&self, target: &Ring) -> Result<Self> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.embed(target))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(target, gens)
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        let bound = self.ring.degree_bound();
        if d > bound {
            return Err(ZError::DegreeAboveBound { degree: d, bound });
        }
        Ok(())
    }

    fn span(&self, d: u32) -> &DegreeSpan {
        self.spans[d as usize].get_or_init(|| self.build_span(d, false))
    }

    fn tracked_span(&self, d: u32) -> &DegreeSpan {
        self.tracked[d as usize].get_or_init(|| self.build_span(d, true))
    }

    fn build_span(&self, d: u32, track: bool) -> DegreeSpan {
        let monomials = self.ring.monomials(d);
        let index: HashMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut lattice = Lattice::new(monomials.len(), track);
        let mut origins = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            let Some(e) = g.degree() else { continue };
            if e > d {
                continue;
            }
            for m in self.ring.monomials(d - e) {
                let mut row: SparseRow = g
                    .terms()
                    .map(|(gm, c)| (index[&gm.mul(&m)], c.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                lattice.insert(row, origins.len());
                origins.push((gi, m));
            }
        }
        lattice.finish();
        DegreeSpan {
            monomials,
            index,
            origins,
            lattice,
        }
    }

    fn to_row(&self, span: &DegreeSpan, p: &Poly) -> SparseRow {
        let mut row: SparseRow = p
            .terms()
            .map(|(m, c)| (span.index[m], c.clone()))
            .collect();
        row.sort_by_key(|(c, _)| *c);
        row
    }

    fn check_poly(&self, p: &Poly) -> Result<()> {
        if !same_ring(p.ring(), &self.ring) {
            return Err(ZError::RingMismatch);
        }
        Ok(())
    }

    /// Membership of a homogeneous polynomial, with a certificate on success.
    pub fn member(&self, p: &Poly) -> Result<Option<Certificate>> {
        self.check_poly(p)?;
        if p.is_zero() {
            return Ok(Some(Certificate {
                cofactors: Vec::new(),
            }));
        }
        let d = p.homogeneous_degree().ok_or(ZError::Inhomogeneous)?;
        self.check_degree(d)?;
        let plain = self.span(d);
        if !plain.lattice.contains(&self.to_row(plain, p)) {
            return Ok(None);
        }
        let span = self.tracked_span(d);
        let combo = span
            .lattice
            .solve(&self.to_row(span, p))
            .expect("both spans describe the same lattice");
        let mut cof: BTreeMap<usize, Poly> = BTreeMap::new();
        for (origin, k) in combo {
            let (gi, m) = &span.origins[origin];
            let term = Poly::from_terms(&self.ring, [(m.clone(), k)]);
            let e = cof.entry(*gi).or_insert_with(|| Poly::zero(&self.ring));
            *e = &*e + &term;
        }
        Ok(Some(Certificate {
            cofactors: cof.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }))
    }

    pub fn contains_poly(&self, p: &Poly) -> Result<bool> {
        Ok(self.member(p)?.is_some())
    }

    /// Canonical representative modulo the ideal: degree by degree, the
    /// Hermite remainder with pivots on the largest monomials, so the
    /// retained monomials are the graded-lex-least ones.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.check_poly(p)?;
        let mut out = Poly::zero(&self.ring);
        let Some(top) = p.degree() else {
            return Ok(out);
        };
        self.check_degree(top)?;
        for d in 0..=top {
            let part = p.part(d);
            if part.is_zero() {
                continue;
            }
            let span = self.span(d);
            let (rem, _) = span.lattice.reduce(&self.to_row(span, &part));
            let reduced = Poly::from_terms(
                &self.ring,
                rem.into_iter().map(|(c, v)| (span.monomials[c].clone(), v)),
            );
            out = &out + &reduced;
        }
        Ok(out)
    }

    pub fn is_zero_mod(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Generator-wise test of `other ⊆ self` for generators of degree at
    /// most `up_to`.
    pub fn contains(&self, other: &GradedIdeal, up_to: u32) -> Result<Containment> {
        let mut out = Containment {
            holds: true,
            failure: None,
            certificates: Vec::new(),
            skipped: Vec::new(),
        };
        for (i, g) in other.generators.iter().enumerate() {
            let g = g.embed(&self.ring)?;
            let d = g.degree().unwrap_or(0);
            if d > up_to {
                out.skipped.push(i);
                continue;
            }
            match self.member(&g)? {
                Some(cert) => out.certificates.push((i, cert)),
                None => {
                    out.holds = false;
                    out.failure.get_or_insert((i, d));
                }
            }
        }
        Ok(out)
    }

    pub fn equals(&self, other: &GradedIdeal, up_to: u32) -> Result<(Containment, Containment)> {
        Ok((self.contains(other, up_to)?, other.contains(self, up_to)?))
    }

    /// Structure of the degree-`d` piece of the quotient ring.
    pub fn quotient_structure(&self, d: u32) -> Result<GradedGroupEntry> {
        self.check_degree(d)?;
        let span = self.span(d);
        let invariants = smith_invariants(&span.lattice.to_matrix());
        Ok(GradedGroupEntry {
            degree: d,
            free_rank: span.monomials.len() - invariants.len(),
            torsion: invariants.into_iter().filter(|v| !v.is_one()).collect(),
        })
    }

    pub fn graded_group(&self, up_to: u32) -> Result<GradedGroup> {
        (0..=up_to).map(|d| self.quotient_structure(d)).collect()
    }

    /// Rank of the degree-`d` piece of the ideal.
    pub fn span_rank(&self, d: u32) -> Result<usize> {
        self.check_degree(d)?;
        Ok(self.span(d).lattice.rank())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::VarTable;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn ring() -> Ring {
        VarTable::new(
            [
                ("c1", 1),
                ("c2", 2),
                ("c3", 3),
                ("c4", 4),
                ("f1", 1),
                ("f2", 2),
                ("f3", 3),
            ],
            10,
        )
        .unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> GradedIdeal {
        GradedIdeal::new(r, gens.iter().map(|g| Poly::parse(r, g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn smith_examples() {
        let s = smith(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariants(), vec![bi(1), bi(6)]);
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        let z = smith(&IntMatrix::zeros(2, 3));
        assert!(z.invariants().is_empty());
        assert_eq!(z.d, IntMatrix::zeros(2, 3));
    }

    #[test]
    fn hermite_detects_content_one() {
        let m = IntMatrix::from_rows(&[vec![13, -2]]);
        let hf = hermite(&m);
        assert_eq!(hf.h, IntMatrix::from_rows(&[vec![1, 0]]));
        assert_eq!(m.mul(&hf.v), hf.h);
        assert!(hf.v.is_unimodular());
    }

    #[test]
    fn hermite_rows_canonical() {
        let m = IntMatrix::from_rows(&[vec![2, 3, 1], vec![4, 1, 5], vec![6, 4, 6]]);
        let (h, u) = hermite_rows(&m);
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
        // third row is the sum of the first two
        assert!(h.row(2).iter().all(Zero::is_zero));
        assert!(h.get(0, 0).is_positive());
    }

    #[test]
    fn primitive_examples() {
        assert!(primitive(&[bi(13), bi(-2)]).unwrap());
        assert!(!primitive(&[bi(4), bi(26)]).unwrap());
        assert!(primitive(&[bi(1), bi(0)]).unwrap());
        assert_eq!(primitive(&[bi(0), bi(0)]), Err(ZError::ZeroVector));
    }

    #[test]
    fn membership_and_certificates() {
        let r = ring();
        let i = ideal(&r, &["c1", "f1", "2*c3"]);
        assert!(i.member(&Poly::parse(&r, "c3").unwrap()).unwrap().is_none());
        let q = Poly::parse(&r, "2*c3 + c1*c2 - 5*f1^3").unwrap();
        let cert = i.member(&q).unwrap().unwrap();
        assert!(cert.verify(&i, &q));
        assert_eq!(
            i.member(&Poly::parse(&r, "c1 + c2").unwrap()),
            Err(ZError::Inhomogeneous)
        );
    }

    #[test]
    fn containment_with_witness() {
        let r = ring();
        let a = ideal(&r, &["c1"]);
        let b = ideal(&r, &["c1", "f1"]);
        assert!(b.contains(&a, 8).unwrap().holds);
        let c = a.contains(&b, 8).unwrap();
        assert!(!c.holds);
        assert_eq!(c.failure, Some((1, 1)));
    }

    #[test]
    fn normal_form_is_idempotent() {
        let r = ring();
        let i = ideal(&r, &["c1^2 - 2*c2", "3*c3"]);
        let p = Poly::parse(&r, "c1^4 + 7*c1*c3 + c2^2").unwrap();
        let n = i.normal_form(&p).unwrap();
        assert_eq!(i.normal_form(&n).unwrap(), n);
        assert!(i.contains_poly(&(&p - &n)).unwrap());
    }

    #[test]
    fn degree_zero_quotient_is_free_of_rank_one() {
        let r = ring();
        let i = ideal(&r, &["c1", "2*c3"]);
        let e = i.quotient_structure(0).unwrap();
        assert_eq!((e.free_rank, e.torsion.len()), (1, 0));
        let e3 = i.quotient_structure(3).unwrap();
        // c3, f3, c2 f1 ... : monomials of degree 3 not divisible by c1
        assert_eq!(e3.torsion, vec![bi(2)]);
    }
}
