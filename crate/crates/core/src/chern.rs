//! Formal vector bundles: a rank and a truncated total Chern class, with the
//! operations needed for degeneracy-locus computations.

use num_bigint::BigInt;
use num_integer::binomial;
use thiserror::Error;

use crate::polyring::{determinant as poly_det, same_ring, series_invert, Poly, PolyError, Ring, RootSet};
use crate::zgraded::{GradedIdeal, ZError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChernError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ideal(#[from] ZError),
    #[error("c{index} must be zero or homogeneous of degree {index}")]
    BadClass { index: usize },
    #[error("c0 must be 1")]
    BadUnit,
    #[error("class c{index} is nonzero above the rank {rank}")]
    AboveRank { index: usize, rank: usize },
    #[error("line class must be zero or homogeneous of degree 1")]
    BadLineClass,
    #[error("operation needs rank at least {need}, got {rank}")]
    RankTooSmall { need: usize, rank: usize },
    #[error("sub-bundle rank {sub} exceeds total rank {total}")]
    SubTooLarge { sub: usize, total: usize },
    #[error("inconsistent exact sequence: quotient class in degree {degree} does not vanish")]
    InconsistentSequence { degree: u32 },
    #[error("degeneracy rank {r} out of range 0..={max}")]
    RankOutOfRange { r: usize, max: usize },
    #[error("bundles live over different variable tables")]
    RingMismatch,
}

pub type Result<T, E = ChernError> = std::result::Result<T, E>;

/// Rank plus Chern classes `c_0 = 1, c_1, …, c_rank`, each `c_i` zero or
/// homogeneous of degree `i`. Classes above the degree bound are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    rank: usize,
    classes: Vec<Poly>,
}

impl Bundle {
    pub fn new(rank: usize, mut classes: Vec<Poly>) -> Result<Self> {
        let ring = classes.first().ok_or(ChernError::BadUnit)?.ring().clone();
        if classes[0] != Poly::one(&ring) {
            return Err(ChernError::BadUnit);
        }
        for (i, c) in classes.iter().enumerate() {
            if !same_ring(c.ring(), &ring) {
                return Err(ChernError::RingMismatch);
            }
            if !c.is_zero() && c.homogeneous_degree() != Some(i as u32) {
                return Err(ChernError::BadClass { index: i });
            }
            if i > rank && !c.is_zero() {
                return Err(ChernError::AboveRank { index: i, rank });
            }
        }
        classes.resize(rank + 1, Poly::zero(&ring));
        Ok(Bundle { rank, classes })
    }

    /// Bundle whose classes are the generators `prefix1..prefix{rank}`.
    pub fn from_vars(ring: &Ring, prefix: &str, rank: usize) -> Result<Self> {
        let mut classes = vec![Poly::one(ring)];
        for i in 1..=rank {
            classes.push(Poly::var(ring, &format!("{prefix}{i}"))?);
        }
        Self::new(rank, classes)
    }

    pub fn trivial(ring: &Ring, rank: usize) -> Self {
        Bundle {
            rank,
            classes: std::iter::once(Poly::one(ring))
                .chain((0..rank).map(|_| Poly::zero(ring)))
                .collect(),
        }
    }

    pub fn line(class: &Poly) -> Result<Self> {
        if !class.is_zero() && class.homogeneous_degree() != Some(1) {
            return Err(ChernError::BadLineClass);
        }
        Self::new(1, vec![Poly::one(class.ring()), class.clone()])
    }

    /// Splits a total class into graded parts; everything above `rank` must
    /// vanish identically.
    pub fn from_total(rank: usize, total: &Poly) -> Result<Self> {
        let top = total.degree().unwrap_or(0) as usize;
        let classes = (0..=top.max(rank)).map(|i| total.part(i as u32)).collect();
        Self::new(rank, classes)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> &Ring {
        self.classes[0].ring()
    }

    /// `c_i`, zero for `i > rank`.
    pub fn class(&self, i: usize) -> Poly {
        self.classes
            .get(i)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.ring()))
    }

    pub fn classes(&self) -> &[Poly] {
        &self.classes
    }

    pub fn top_class(&self) -> Poly {
        self.class(self.rank)
    }

    pub fn total(&self) -> Poly {
        self.classes
            .iter()
            .fold(Poly::zero(self.ring()), |acc, c| &acc + c)
    }

    pub fn embed(&self, target: &Ring) -> Result<Self> {
        let classes = self
            .classes
            .iter()
            .map(|c| c.embed(target))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Bundle {
            rank: self.rank,
            classes,
        })
    }
}

fn check_same(a: &Bundle, b: &Bundle) -> Result<()> {
    if same_ring(a.ring(), b.ring()) {
        Ok(())
    } else {
        Err(ChernError::RingMismatch)
    }
}

pub fn dual(e: &Bundle) -> Bundle {
    Bundle {
        rank: e.rank,
        classes: e
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect(),
    }
}

/// Top exterior power.
pub fn determinant(e: &Bundle) -> Bundle {
    Bundle {
        rank: 1,
        classes: vec![Poly::one(e.ring()), e.class(1)],
    }
}

/// `E ⊗ L` for a line bundle with first Chern class `line`.
pub fn tensor_line(e: &Bundle, line: &Poly) -> Result<Bundle> {
    if !same_ring(e.ring(), line.ring()) {
        return Err(ChernError::RingMismatch);
    }
    if !line.is_zero() && line.homogeneous_degree() != Some(1) {
        return Err(ChernError::BadLineClass);
    }
    let r = e.rank;
    let powers: Vec<Poly> = (0..=r as u32).map(|k| line.pow(k)).collect();
    let mut classes = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let mut acc = Poly::zero(e.ring());
        for j in 0..=i {
            let coeff = binomial(BigInt::from(r - j), BigInt::from(i - j));
            acc = &acc + &(&e.classes[j] * &powers[i - j]).scale(&coeff);
        }
        classes.push(acc);
    }
    Ok(Bundle { rank: r, classes })
}

/// Substitutes the elementary classes of `roots` by the given Chern classes.
fn compose(q: &Poly, chern: &[Poly], ring: &Ring) -> Poly {
    let mut out = Poly::zero(ring);
    for (m, c) in q.terms() {
        let term = m
            .exps()
            .iter()
            .enumerate()
            .fold(Poly::constant(ring, c.clone()), |acc, (i, &e)| {
                if e == 0 {
                    acc
                } else {
                    &acc * &chern[i + 1].pow(e)
                }
            });
        out = &out + &term;
    }
    out
}

/// `∧²E`, with classes obtained from the pairwise root sums by symmetric
/// reduction.
pub fn exterior_square(e: &Bundle) -> Result<Bundle> {
    let n = e.rank;
    if n < 2 {
        return Err(ChernError::RankTooSmall { need: 2, rank: n });
    }
    let ring = e.ring();
    let roots = RootSet::new(n, ring.degree_bound());
    let rr = roots.root_ring().clone();
    let mut product = Poly::one(&rr);
    for i in 0..n {
        for j in i + 1..n {
            product = &product * &(&Poly::one(&rr) + &(&roots.root(i) + &roots.root(j)));
        }
    }
    let rank = n * (n - 1) / 2;
    let mut classes = vec![Poly::one(ring)];
    for k in 1..=rank {
        let universal = roots.symmetric_reduce(&product.part(k as u32))?;
        classes.push(compose(&universal, &e.classes, ring));
    }
    Bundle::new(rank, classes)
}

/// `c(total) / c(sub)` as a truncated series, with no rank check.
pub fn quotient_series(total: &Bundle, sub: &Bundle) -> Result<Poly> {
    check_same(total, sub)?;
    Ok(&total.total() * &series_invert(&sub.total())?)
}

/// The third term of `0 → sub → total → Q → 0`. The series `c(total)/c(sub)`
/// must vanish above the quotient rank, identically or modulo `relations`.
pub fn whitney_quotient(
    total: &Bundle,
    sub: &Bundle,
    relations: Option<&GradedIdeal>,
) -> Result<Bundle> {
    if sub.rank > total.rank {
        return Err(ChernError::SubTooLarge {
            sub: sub.rank,
            total: total.rank,
        });
    }
    let rank = total.rank - sub.rank;
    let series = quotient_series(total, sub)?;
    let bound = total.ring().degree_bound();
    for d in (rank as u32 + 1)..=bound {
        let part = series.part(d);
        let vanishes = match relations {
            None => part.is_zero(),
            Some(ideal) => ideal.is_zero_mod(&part.embed(ideal.ring())?)?,
        };
        if !vanishes {
            return Err(ChernError::InconsistentSequence { degree: d });
        }
    }
    let classes = (0..=rank).map(|i| series.part(i as u32)).collect();
    Bundle::new(rank, classes)
}

/// Class of the locus where a map `E → F` has rank at most `r`:
/// `det(c_{q+j-i}(F - E))` of size `rank E - r`, with `q = rank F - r`.
pub fn porteous(e: &Bundle, f: &Bundle, r: usize) -> Result<Poly> {
    let max = e.rank.min(f.rank);
    if r > max {
        return Err(ChernError::RankOutOfRange { r, max });
    }
    let ring = e.ring().clone();
    let diff = quotient_series(f, e)?;
    let size = e.rank - r;
    let q = (f.rank - r) as i64;
    let entry = |i: usize, j: usize| -> Poly {
        let k = q + j as i64 - i as i64;
        if k < 0 {
            Poly::zero(&ring)
        } else {
            diff.part(k as u32)
        }
    };
    let m: Vec<Vec<Poly>> = (0..size)
        .map(|i| (0..size).map(|j| entry(i, j)).collect())
        .collect();
    Ok(poly_det(&ring, &m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::VarTable;

    fn ring() -> Ring {
        VarTable::new(
            VarTable::chern_vars("c", 4)
                .into_iter()
                .chain(VarTable::chern_vars("f", 3))
                .chain(VarTable::chern_vars("b", 2))
                .chain([("l".to_string(), 1)]),
            10,
        )
        .unwrap()
    }

    fn p(r: &Ring, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    #[test]
    fn dual_and_determinant() {
        let r = ring();
        let f = Bundle::from_vars(&r, "f", 3).unwrap();
        let fd = dual(&f);
        assert_eq!(fd.class(1), p(&r, "-f1"));
        assert_eq!(fd.class(2), p(&r, "f2"));
        assert_eq!(fd.class(3), p(&r, "-f3"));
        assert_eq!(dual(&fd), f);
        let b = Bundle::from_vars(&r, "b", 2).unwrap();
        assert_eq!(determinant(&b).class(1), p(&r, "b1"));
        assert_eq!(determinant(&dual(&b)).class(1), p(&r, "-b1"));
        let s = Bundle::from_vars(&r, "c", 4).unwrap();
        assert_eq!(determinant(&s).total(), p(&r, "1 + c1"));
    }

    #[test]
    fn twist_examples() {
        let r = ring();
        let f = Bundle::from_vars(&r, "f", 3).unwrap();
        let twisted = tensor_line(&dual(&f), &p(&r, "c1 - b1")).unwrap();
        assert_eq!(
            twisted.top_class(),
            p(&r, "-f3 + (c1-b1)*f2 - (c1-b1)^2*f1 + (c1-b1)^3")
        );
        let b = Bundle::from_vars(&r, "b", 2).unwrap();
        let t = tensor_line(&b, &p(&r, "l")).unwrap();
        assert_eq!(t.class(2), p(&r, "b2 + b1*l + l^2"));
        assert_eq!(tensor_line(&b, &Poly::zero(&r)).unwrap(), b);
        assert_eq!(
            tensor_line(&b, &p(&r, "c2")),
            Err(ChernError::BadLineClass)
        );
    }

    #[test]
    fn exterior_square_small_ranks() {
        let r = ring();
        let b = Bundle::from_vars(&r, "b", 2).unwrap();
        assert_eq!(exterior_square(&b).unwrap(), determinant(&b));
        let f = Bundle::from_vars(&r, "f", 3).unwrap();
        let w = exterior_square(&f).unwrap();
        assert_eq!(w.rank(), 3);
        assert_eq!(w.class(1), p(&r, "2*f1"));
        // ∧²F ≅ F* ⊗ det F for rank 3
        assert_eq!(w, tensor_line(&dual(&f), &p(&r, "f1")).unwrap());
        assert_eq!(
            exterior_square(&Bundle::line(&p(&r, "l")).unwrap()),
            Err(ChernError::RankTooSmall { need: 2, rank: 1 })
        );
    }

    #[test]
    fn exterior_square_rank_four() {
        let r = ring();
        let s = Bundle::from_vars(&r, "c", 4).unwrap();
        let w = exterior_square(&s).unwrap();
        assert_eq!(w.rank(), 6);
        assert_eq!(w.class(1), p(&r, "3*c1"));
        // Values from a direct expansion of the six pairwise root sums.
        assert_eq!(w.class(2), p(&r, "3*c1^2 + 2*c2"));
        assert_eq!(w.class(3), p(&r, "c1^3 + 4*c1*c2"));
        assert_eq!(w.class(4), p(&r, "2*c1^2*c2 + c1*c3 + c2^2 - 4*c4"));
        assert_eq!(w.class(5), p(&r, "c1^2*c3 + c1*c2^2 - 4*c1*c4"));
        assert_eq!(w.class(6), p(&r, "-c1^2*c4 + c1*c2*c3 - c3^2"));
    }

    #[test]
    fn whitney_examples() {
        let r = ring();
        let b = Bundle::from_vars(&r, "b", 2).unwrap();
        let q = whitney_quotient(&Bundle::trivial(&r, 4), &b, None);
        // 1/(1+b1+b2) does not terminate, so as bare polynomials this fails.
        assert_eq!(q, Err(ChernError::InconsistentSequence { degree: 3 }));
        let series = quotient_series(&Bundle::trivial(&r, 4), &b).unwrap();
        assert_eq!(series.part(1), p(&r, "-b1"));
        assert_eq!(series.part(2), p(&r, "b1^2 - b2"));

        let total = Bundle::new(2, vec![p(&r, "1"), p(&r, "c1"), p(&r, "c2")]).unwrap();
        let sub = Bundle::line(&p(&r, "b1")).unwrap();
        let series = quotient_series(&total, &sub).unwrap();
        assert_eq!(series.part(1), p(&r, "c1 - b1"));
        assert_eq!(series.part(2), p(&r, "c2 - c1*b1 + b1^2"));
        assert!(whitney_quotient(&total, &sub, None).is_err());
        let rel = GradedIdeal::new(&r, vec![p(&r, "c2 - c1*b1 + b1^2")]).unwrap();
        let q = whitney_quotient(&total, &sub, Some(&rel)).unwrap();
        assert_eq!(q.class(1), p(&r, "c1 - b1"));
        assert_eq!(
            whitney_quotient(&sub, &total, None),
            Err(ChernError::SubTooLarge { sub: 2, total: 1 })
        );
    }

    #[test]
    fn porteous_examples() {
        let r = ring();
        let f = Bundle::from_vars(&r, "f", 3).unwrap();
        let line = Bundle::line(&p(&r, "c1 - b1")).unwrap();
        assert_eq!(
            porteous(&f, &line, 0).unwrap(),
            p(&r, "-f3 + (c1-b1)*f2 - (c1-b1)^2*f1 + (c1-b1)^3")
        );
        let s = Bundle::from_vars(&r, "c", 4).unwrap();
        assert_eq!(porteous(&s, &f, 3).unwrap(), p(&r, "1"));
        assert_eq!(
            porteous(&s, &f, 4),
            Err(ChernError::RankOutOfRange { r: 4, max: 3 })
        );
    }
}
