//! The SO(4) computation end to end: the tower `G(4,m) ← G(2,S), G(3,∧²S)`,
//! the degeneracy classes `[Y]` and `[G(2,E)]`, their six pushforwards, the
//! relations of the quotient bundle `T`, the divisor lattice argument, and
//! the final presentation `Z[c1,c2,c3,c4,x]/(c1, 2c3, xc3, x²-4c4)`.
//!
//! Every comparison is recorded as a [`Check`] in a [`Report`]; a failing
//! comparison never aborts the run.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chern::{
    determinant, dual, exterior_square, porteous, tensor_line, whitney_quotient, Bundle,
    ChernError,
};
use crate::grasstower::{
    extend, fiber_product, oracle, Factor, FiberProduct, PresentedRing, TowerError, TowerLevel,
};
use crate::polyring::{Poly, PolyError, Ring, VarTable};
use crate::zgraded::{hermite, primitive, GradedGroupEntry, GradedIdeal, IntMatrix, ZError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Ideal(#[from] ZError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("degree {needed} is above the bound {bound}")]
    AboveBound { needed: u32, bound: u32 },
}

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;

/// Pullback of `c1(S)` to `P(W_m)` in units of `L = c1(O(-1))`.
pub const PULLBACK_C1: i64 = 4;
/// Pullback of `c1(N̄)` in the same units.
pub const PULLBACK_N: i64 = 2;

/// The monomials in `b1, b2` whose products with `[G(2,E)]` are pushed.
pub const TWISTS: [&str; 6] = ["1", "b1", "b1^2", "b2", "b1*b2", "b1^2*b2"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Config {
    pub degree_bound: u32,
    pub seed: u64,
    /// Highest degree examined by the ideal-identity sweep.
    pub sweep: u32,
    /// Random root specializations per class in the oracle comparison.
    pub specializations: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            degree_bound: VarTable::DEFAULT_DEGREE_BOUND,
            seed: 0,
            sweep: 8,
            specializations: 10,
        }
    }
}

/// All bundles and towers of the construction.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub base: PresentedRing,
    pub s: Bundle,
    /// `G(2,S)` with sub-bundle `B` (classes `b1, b2`).
    pub g2s: TowerLevel,
    /// `G(3,∧²S)` with sub-bundle `F` (classes `f1, f2, f3`).
    pub g3: TowerLevel,
    /// `G(3,∧²S) ×_{G(4,m)} G(2,S)`, variables `c, f, b`.
    pub product: FiberProduct,
    /// `∧⁴S ⊗ (∧²B)*` on `G(2,S)`.
    pub line: Bundle,
    /// Kernel of `∧²S → ∧⁴S ⊗ (∧²B)*`.
    pub k: Bundle,
    /// `K / ∧²B`.
    pub e: Bundle,
    /// `Y = G(3,K) ⊂ 𝒢`.
    pub y: TowerLevel,
    /// `K/F` on `Y`.
    pub k_mod_f: Bundle,
}

pub fn build_geometry(degree_bound: u32) -> Result<Geometry> {
    let ring = VarTable::new(VarTable::chern_vars("c", 4), degree_bound)?;
    let base = PresentedRing::free(&ring);
    let s = Bundle::from_vars(&ring, "c", 4)?;
    let g2s = extend(&base, &s, 2, "b")?;
    let g3 = extend(&base, &exterior_square(&s)?, 3, "f")?;
    let product = fiber_product(&g3, &g2s)?;

    let s2 = s.embed(g2s.ring())?;
    let det_b = determinant(g2s.taut_sub());
    let line = tensor_line(&determinant(&s2), &dual(&det_b).class(1))?;
    let k = whitney_quotient(&exterior_square(&s2)?, &line, Some(g2s.relations()))?;
    let e = whitney_quotient(&k, &det_b, Some(g2s.relations()))?;
    let y = extend(g2s.presented(), &k, 3, "f")?;
    let k_mod_f = y.taut_quot().clone();
    Ok(Geometry {
        base,
        s,
        g2s,
        g3,
        product,
        line,
        k,
        e,
        y,
        k_mod_f,
    })
}

impl Geometry {
    pub fn degree_bound(&self) -> u32 {
        self.base.ring().degree_bound()
    }

    /// `[Y] = c3(F* ⊗ ∧⁴S ⊗ (∧²B)*)`, on `Y`.
    pub fn class_y(&self) -> Result<Poly> {
        let line = self.line.embed(self.y.ring())?;
        Ok(porteous(self.y.taut_sub(), &line, 0)?)
    }

    /// `c2((K/F) ⊗ (∧²B)*)`, on `Y`.
    pub fn class_g2e_factor(&self) -> Result<Poly> {
        let det_b = determinant(self.g2s.taut_sub()).embed(self.y.ring())?;
        Ok(porteous(&det_b, &self.k_mod_f, 0)?)
    }

    /// `[G(2,E)] = [Y] · c2((K/F) ⊗ (∧²B)*)`, on `𝒢`.
    pub fn class_g2e(&self) -> Result<Poly> {
        let ring = self.product.ring();
        Ok(&self.class_y()?.embed(ring)? * &self.class_g2e_factor()?.embed(ring)?)
    }

    /// `π_*([G(2,E)] · twist)` along `𝒢 → G(3,∧²S)`.
    pub fn pushforward(&self, g2e: &Poly, twist: &str) -> Result<Poly> {
        let m = Poly::parse(self.product.ring(), twist)?;
        let needed = 5 + m.degree().unwrap_or(0);
        if needed > self.degree_bound() {
            return Err(PipelineError::AboveBound {
                needed,
                bound: self.degree_bound(),
            });
        }
        Ok(self.product.gysin(Factor::Second, &(g2e * &m))?)
    }

    /// The relations `t4, t5, t6` of `G(3,∧²S)`.
    pub fn t_relations(&self) -> &[Poly] {
        self.g3.new_relations()
    }

    /// The complementary rank-3 bundle `∧²S / F`, defined modulo `t4, t5, t6`.
    pub fn complementary(&self) -> Result<Bundle> {
        Ok(whitney_quotient(
            self.g3.bundle(),
            self.g3.taut_sub(),
            Some(self.g3.relations()),
        )?)
    }
}

/// Reduction modulo `J = (c1, f1)`.
pub fn mod_j(p: &Poly) -> Result<Poly> {
    let zero = Poly::zero(p.ring());
    Ok(p.substitute(&[("c1", zero.clone()), ("f1", zero)])?)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("divisor class must be a combination of c1 and f1")]
    NotDivisorClass,
    #[error("divisor class ({0}, {1}) is not primitive")]
    NotPrimitive(BigInt, BigInt),
    #[error("no integral pullback of f1 kills the divisor")]
    Unsolvable,
    #[error("pullbacks must be nonzero")]
    ZeroPullback,
}

/// The divisor class `a·c1 + b·f1` and the pullbacks to `P(W_m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorData {
    pub divisor: (BigInt, BigInt),
    pub pullback_c1: BigInt,
    pub pullback_n: BigInt,
}

impl DivisorData {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        DivisorData {
            divisor: (a.into(), b.into()),
            pullback_c1: BigInt::from(PULLBACK_C1),
            pullback_n: BigInt::from(PULLBACK_N),
        }
    }

    /// Reads `a·c1 + b·f1` off a degree-one class.
    pub fn from_class(p: &Poly) -> Result<Self, LatticeError> {
        let ring = p.ring();
        if !p.is_zero() && p.homogeneous_degree() != Some(1) {
            return Err(LatticeError::NotDivisorClass);
        }
        let coeff = |name: &str| -> BigInt {
            match Poly::var(ring, name) {
                Ok(v) => {
                    let (m, _) = v.leading_term().expect("variable is nonzero");
                    p.coefficient(m)
                }
                Err(_) => BigInt::zero(),
            }
        };
        let (a, b) = (coeff("c1"), coeff("f1"));
        let rebuilt = p.terms().all(|(m, _)| {
            ["c1", "f1"]
                .iter()
                .any(|n| ring.index_of(n).is_some_and(|i| m.exps()[i] == 1))
        });
        if !rebuilt {
            return Err(LatticeError::NotDivisorClass);
        }
        Ok(DivisorData::new(a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeOutcome {
    /// Forced pullback of `f1`, in units of `L`.
    pub f1_pullback: BigInt,
    /// Index of the image of `A¹(G(3,∧²S))` in `A¹(P(W_m)) = Z·L`.
    pub image_index: BigInt,
    pub n_generates: bool,
}

impl fmt::Display for LatticeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f1 -> {}L, index {}, N {}",
            self.f1_pullback,
            self.image_index,
            if self.n_generates { "generates" } else { "does not generate" }
        )
    }
}

/// The divisor is primitive; it pulls back to zero, which forces the
/// pullback of `f1`; the image of `A¹` is `gcd·Z·L`; and `c1(N̄)` generates
/// it. Together these let `(I_D, c1(N̄))` be replaced by `(I_D, c1, f1)`.
pub fn divisor_lattice_check(data: &DivisorData) -> Result<LatticeOutcome, LatticeError> {
    let (a, b) = &data.divisor;
    if data.pullback_c1.is_zero() || data.pullback_n.is_zero() {
        return Err(LatticeError::ZeroPullback);
    }
    match primitive(&[a.clone(), b.clone()]) {
        Ok(true) => {}
        _ => return Err(LatticeError::NotPrimitive(a.clone(), b.clone())),
    }
    if b.is_zero() {
        return Err(LatticeError::Unsolvable);
    }
    let (f1, rem) = (-(a * &data.pullback_c1)).div_rem(b);
    if !rem.is_zero() {
        return Err(LatticeError::Unsolvable);
    }
    let h = hermite(&IntMatrix::from_rows(&[vec![
        data.pullback_c1.clone(),
        f1.clone(),
    ]]))
    .h;
    let index = h.get(0, 0).abs();
    let n_generates = data.pullback_n.abs() == index;
    Ok(LatticeOutcome {
        f1_pullback: f1,
        image_index: index,
        n_generates,
    })
}

/// `Z[c1,c2,c3,c4,x]` modulo the assembled relations, with `x = c2 - f2`.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub ring: Ring,
    pub relations: Vec<Poly>,
    pub ideal: GradedIdeal,
}

pub fn presentation_ring(degree_bound: u32) -> Result<Ring> {
    Ok(VarTable::new(
        VarTable::chern_vars("c", 4)
            .into_iter()
            .chain([("x".to_string(), 2)]),
        degree_bound,
    )?)
}

/// Image of a class on `G(3,∧²S)` under `f1 ↦ 0, f3 ↦ c3, f2 ↦ c2 - x`.
pub fn to_presentation(p: &Poly, target: &Ring) -> Result<Poly> {
    let joint = p.ring().extended([("x".to_string(), 2)])?;
    let q = p.embed(&joint)?;
    let var = |n: &str| Poly::var(&joint, n);
    let image = q.substitute(&[
        ("f1", Poly::zero(&joint)),
        ("f2", &var("c2")? - &var("x")?),
        ("f3", var("c3")?),
    ])?;
    Ok(image.embed(target)?)
}

/// Fixes the sign so that the least term has a positive coefficient.
fn sign_normalized(p: Poly) -> Poly {
    match p.terms().last() {
        Some((_, c)) if c.is_negative() => -p,
        _ => p,
    }
}

/// Eliminates `f1, f3, f2` from `(generators, c1, f1)` and keeps the
/// distinct nonzero images, sign-normalized, in degree order.
pub fn assemble_presentation(generators: &[Poly], degree_bound: u32) -> Result<Presentation> {
    let ring = presentation_ring(degree_bound)?;
    let mut seen = BTreeSet::new();
    let mut relations = Vec::new();
    let mut images = Vec::new();
    if let Some(g) = generators.first() {
        for name in ["c1", "f1"] {
            images.push(to_presentation(&Poly::var(g.ring(), name)?, &ring)?);
        }
    }
    for g in generators {
        images.push(to_presentation(g, &ring)?);
    }
    for img in images {
        let img = sign_normalized(img);
        if !img.is_zero() && seen.insert(img.to_string()) {
            relations.push(img);
        }
    }
    relations.sort_by_key(|r| r.degree());
    let ideal = GradedIdeal::new(&ring, relations.clone())?;
    Ok(Presentation {
        ring,
        relations,
        ideal,
    })
}

/// Graded pieces of `Z[c2,c3,c4,x]/(2c3, xc3, x² - 4c4)` by counting:
/// free on `c2^a c4^b x^e` (`e ≤ 1`), one `Z/2` per `c2^a c4^b c3^k` (`k ≥ 1`).
pub fn enumerate_structure(d: u32) -> GradedGroupEntry {
    let mut free = 0;
    let mut torsion = 0;
    for a in 0..=d / 2 {
        for b in 0..=d / 4 {
            let used = 2 * a + 4 * b;
            if used > d {
                continue;
            }
            let rest = d - used;
            if rest == 0 || rest == 2 {
                free += 1;
            }
            if rest > 0 && rest.is_multiple_of(3) {
                torsion += 1;
            }
        }
    }
    GradedGroupEntry {
        degree: d,
        free_rank: free,
        torsion: vec![BigInt::from(2); torsion],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_ref: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    pub degree_bound: u32,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub overall: Status,
    pub config: Config,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Same content with all timings zeroed.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0;
        }
        r
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{} {}\n", c.status, c.name));
            out.push_str(&format!("    expected: {}\n", c.expected));
            out.push_str(&format!("    computed: {}\n", c.computed));
        }
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        out.push_str(&format!(
            "overall: {} ({} pass, {} fail, {} skipped; degree bound {})\n",
            self.overall,
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skipped),
            self.config.degree_bound
        ));
        out
    }
}

/// Expected values, each with a short note on where it comes from.
#[derive(Debug, Clone)]
pub struct Golden {
    entries: BTreeMap<String, (String, String)>,
}

pub mod names {
    pub const CONV_B2: &str = "convention: G(2,4) integral of b2^2";
    pub const CONV_B1: &str = "convention: G(2,4) integral of b1^4";
    pub const RANKS: &str = "ranks of K, E, K/F";
    pub const LINE: &str = "c1 of det(S) (x) det(B)*";
    pub const CLASS_Y: &str = "class [Y]";
    pub const FACTOR: &str = "class [G(2,E)] factor on Y";
    pub const G2E_DEGREE: &str = "codimension of [G(2,E)]";
    pub const PUSH: [&str; 6] = [
        "pushforward [G(2,E)]",
        "pushforward [G(2,E)]*b1 mod J",
        "pushforward [G(2,E)]*b1^2 mod J",
        "pushforward [G(2,E)]*b2 mod J",
        "pushforward [G(2,E)]*b1*b2 mod J",
        "pushforward [G(2,E)]*b1^2*b2 mod J",
    ];
    pub const DISCRIMINANT: &str = "pushforward [G(2,E)] equals c1((det F*)^2 (x) (det S)^3)";
    pub const LAST_EQUIV: &str = "pushforward [G(2,E)]*b1^2*b2 modulo the final ideal";
    pub const ORACLE: &str = "pushforwards agree with the fixed-point oracle";
    pub const T_MOD_J: [&str; 3] = ["t4 mod J", "t5 mod J", "t6 mod J"];
    pub const T_MEMBER: [&str; 3] = ["t4 in ideal", "t5 in ideal", "t6 in ideal"];
    pub const IDEAL_FWD: &str = "ideal: (pushforwards, c1, f1) contains the six generators";
    pub const IDEAL_BWD: &str = "ideal: six generators contain (pushforwards, c1, f1)";
    pub const CLOSURE: &str = "monomial closure of the pushforward ideal";
    pub const LEMMA_PRINTED: &str = "divisor lattice check, printed divisor 13c1 - 2f1";
    pub const LEMMA_COMPUTED: &str = "divisor lattice check, computed divisor";
    pub const RELATIONS: &str = "presentation relations";
    pub const STRUCTURE: &str = "presentation graded structure";
    pub const RULING_F2: &str = "ruling symmetry: complementary f2";
    pub const RULING_X: &str = "ruling symmetry: c2 - complementary f2";
}

impl Golden {
    pub fn standard() -> Self {
        use names::*;
        let printed = "printed";
        let mut entries = BTreeMap::new();
        let mut put = |name: &str, source: &str, value: &str| {
            entries.insert(name.to_string(), (source.to_string(), value.to_string()));
        };
        put(CONV_B2, "derived: fixed-point formula on G(2,4)", "1");
        put(CONV_B1, "derived: degree of G(2,4)", "2");
        put(RANKS, "derived: 6 - 1, 5 - 1, 5 - 3", "K:5 E:4 K/F:2");
        put(LINE, "printed: the factor (c1 - b1) of [Y]", "c1 - b1");
        put(CLASS_Y, printed, "-f3 + (c1-b1)*f2 - (c1-b1)^2*f1 + (c1-b1)^3");
        put(FACTOR, printed, "b1^2 - c1*b1 + c1^2 - 2*c1*f1 + f1^2 - f2 + 2*c2");
        put(G2E_DEGREE, "derived: 3 + 2", "5");
        let pushes = [
            "13*c1 - 2*f1",
            "0",
            "-2*f3",
            "c3 - f3",
            "(c2-f2)^2 - 4*c4",
            "c2*f3 + f2*c3",
        ];
        for (n, v) in PUSH.iter().zip(pushes) {
            put(n, printed, v);
        }
        put(
            DISCRIMINANT,
            "derived: discriminant of the restricted Pluecker form",
            "3*c1 - 2*f1",
        );
        put(LAST_EQUIV, "printed, compared modulo the final ideal", "c2*f3 + f2*c3");
        put(ORACLE, "derived: sum over torus-fixed points", "agree");
        let ts = [
            "(c2-f2)^2 - 4*c4",
            "2*f2*f3 - 2*c2*f3",
            "f2*(-(c2-f2)^2 + 4*c4) + f3^2 - c3^2",
        ];
        for (n, v) in T_MOD_J.iter().zip(ts) {
            put(n, printed, v);
        }
        for n in T_MEMBER {
            put(n, "printed: the relations t4, t5, t6 lie in the ideal", "member");
        }
        put(IDEAL_FWD, printed, "contained");
        put(IDEAL_BWD, printed, "contained");
        put(CLOSURE, "printed: the six pushforwards generate", "all members");
        put(
            LEMMA_PRINTED,
            "printed: tau2*(f1) = 26L, image Z(2L)",
            "f1 -> 26L, index 2, N generates",
        );
        put(
            LEMMA_COMPUTED,
            "derived: F restricts to F_V (x) O(-2), so f1 -> 6L",
            "f1 -> 6L, index 2, N generates",
        );
        put(RELATIONS, printed, "c1, 2*c3, x^2 - 4*c4, x*c3");
        put(STRUCTURE, "derived: monomial enumeration", "enumeration");
        put(RULING_F2, printed, "2*c2 - f2");
        put(RULING_X, printed, "-x");
        Golden { entries }
    }

    /// Replaces one expected value, for exercising the report.
    pub fn with_override(mut self, name: &str, value: &str) -> Self {
        if let Some(e) = self.entries.get_mut(name) {
            e.1 = value.to_string();
        }
        self
    }

    pub fn source(&self, name: &str) -> &str {
        &self.entries[name].0
    }

    pub fn value(&self, name: &str) -> &str {
        &self.entries[name].1
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

struct Recorder<'a> {
    golden: &'a Golden,
    bound: u32,
    checks: Vec<Check>,
}

/// What a check body reports: the computed display string and its verdict.
type Outcome = Result<(String, bool)>;

impl Recorder<'_> {
    fn run(&mut self, name: &str, needs: u32, expected: Option<String>, body: impl FnOnce(&str) -> Outcome) {
        let value = self.golden.value(name).to_string();
        let expected = expected.unwrap_or_else(|| value.clone());
        let start = Instant::now();
        let (computed, status) = if needs > self.bound {
            (format!("skipped: needs degree {needs}"), Status::Skipped)
        } else {
            match body(&value) {
                Ok((shown, true)) => (shown, Status::Pass),
                Ok((shown, false)) => (shown, Status::Fail),
                Err(e) => (format!("error: {e}"), Status::Fail),
            }
        };
        self.checks.push(Check {
            name: name.to_string(),
            paper_ref: self.golden.source(name).to_string(),
            expected,
            computed,
            status,
            degree_bound: self.bound,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
}

fn compare(computed: &Poly, expected: &str) -> Outcome {
    let want = Poly::parse(computed.ring(), expected)?;
    Ok((computed.to_string(), *computed == want))
}

fn canonical(ring: &Ring, text: &str) -> String {
    Poly::parse(ring, text)
        .map(|p| p.to_string())
        .unwrap_or_else(|_| text.to_string())
}

fn structure_table(entries: &[GradedGroupEntry]) -> String {
    entries
        .iter()
        .map(|e| format!("A{}={}", e.degree, e))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn run_all(config: &Config) -> Report {
    run_with(config, &Golden::standard())
}

pub fn run_with(config: &Config, golden: &Golden) -> Report {
    use names::*;
    let bound = config.degree_bound;
    let mut rec = Recorder {
        golden,
        bound,
        checks: Vec::new(),
    };

    // Pin the pushforward convention before anything depends on it.
    let point = PresentedRing::point(bound);
    let g24 = extend(&point, &Bundle::trivial(point.ring(), 4), 2, "b");
    for (name, class) in [(CONV_B2, "b2^2"), (CONV_B1, "b1^4")] {
        rec.run(name, 4, None, |want| {
            let g = g24.as_ref().map_err(Clone::clone)?;
            let pushed = g.gysin(&Poly::parse(g.ring(), class)?)?;
            compare(&pushed, want)
        });
    }

    let geo = match build_geometry(bound) {
        Ok(g) => g,
        Err(e) => {
            rec.checks.push(Check {
                name: "build geometry".into(),
                paper_ref: "construction".into(),
                expected: "built".into(),
                computed: format!("error: {e}"),
                status: Status::Fail,
                degree_bound: bound,
                elapsed_ms: 0,
            });
            return finish(rec, config);
        }
    };
    let g3_ring = geo.g3.ring().clone();

    rec.run(RANKS, 0, None, |want| {
        let shown = format!(
            "K:{} E:{} K/F:{}",
            geo.k.rank(),
            geo.e.rank(),
            geo.k_mod_f.rank()
        );
        Ok((shown.clone(), shown == want))
    });
    rec.run(LINE, 1, Some(canonical(geo.g2s.ring(), golden.value(LINE))), |want| {
        compare(&geo.line.class(1), want)
    });
    rec.run(CLASS_Y, 3, Some(canonical(geo.y.ring(), golden.value(CLASS_Y))), |want| {
        compare(&geo.class_y()?, want)
    });
    rec.run(FACTOR, 2, Some(canonical(geo.y.ring(), golden.value(FACTOR))), |want| {
        compare(&geo.class_g2e_factor()?, want)
    });
    let g2e = if bound >= 5 { geo.class_g2e().ok() } else { None };
    rec.run(G2E_DEGREE, 5, None, |want| {
        let g = g2e.as_ref().ok_or(PipelineError::AboveBound { needed: 5, bound })?;
        let shown = g.homogeneous_degree().map(|d| d.to_string()).unwrap_or_else(|| "inhomogeneous".into());
        Ok((shown.clone(), shown == want))
    });

    // Raw pushforwards, and their reductions modulo J.
    let mut raw: Vec<Option<Poly>> = Vec::new();
    for twist in TWISTS {
        let needs = 5 + Poly::parse(geo.product.ring(), twist).ok().and_then(|m| m.degree()).unwrap_or(0);
        raw.push(match &g2e {
            Some(g) if needs <= bound => geo.pushforward(g, twist).ok(),
            _ => None,
        });
    }
    let reduced: Vec<Option<Poly>> = raw
        .iter()
        .map(|p| p.as_ref().and_then(|p| mod_j(p).ok()))
        .collect();
    let twist_needs = |i: usize| -> u32 { [5, 6, 7, 7, 8, 9][i] };
    let missing = |i: usize| PipelineError::AboveBound {
        needed: twist_needs(i),
        bound,
    };
    for i in 0..6 {
        rec.run(PUSH[i], twist_needs(i), Some(canonical(&g3_ring, golden.value(PUSH[i]))), |want| {
            let p = if i == 0 { &raw[0] } else { &reduced[i] };
            compare(p.as_ref().ok_or_else(|| missing(i))?, want)
        });
    }
    rec.run(DISCRIMINANT, 5, Some(canonical(&g3_ring, golden.value(DISCRIMINANT))), |want| {
        let p = raw[0].as_ref().ok_or_else(|| missing(0))?;
        // c1(det F*) = -f1 and c1(det S) = c1.
        let det_f_dual = determinant(&dual(geo.g3.taut_sub())).class(1);
        let det_s = determinant(&geo.s.embed(&g3_ring)?).class(1);
        let disc = &det_f_dual.scale(&BigInt::from(2)) + &det_s.scale(&BigInt::from(3));
        let (shown, _) = compare(p, want)?;
        Ok((shown, *p == disc && disc == Poly::parse(&g3_ring, want)?))
    });

    rec.run(ORACLE, 9, None, |want| {
        let done = oracle_agreement(&geo, g2e.as_ref(), &raw, config)?;
        let shown = if done.1 == 0 {
            format!("agree ({} classes x {} specializations)", done.0, config.specializations)
        } else {
            format!("{} disagreements", done.1)
        };
        Ok((shown, done.1 == 0 && want == "agree"))
    });

    // Relations t4, t5, t6.
    let printed_ideal_text = [
        "c1",
        "f1",
        "2*c3",
        "c3 - f3",
        "(c2-f2)^2 - 4*c4",
        "(c2-f2)*c3",
    ];
    let printed_ideal = printed_ideal_text
        .iter()
        .map(|t| Poly::parse(&g3_ring, t))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(PipelineError::from)
        .and_then(|g| Ok(GradedIdeal::new(&g3_ring, g)?));
    for (i, t) in geo.t_relations().iter().enumerate() {
        let needs = 4 + i as u32;
        rec.run(T_MOD_J[i], needs, Some(canonical(&g3_ring, golden.value(T_MOD_J[i]))), |want| {
            compare(&mod_j(t)?, want)
        });
        rec.run(T_MEMBER[i], needs, None, |want| {
            let ideal = printed_ideal.as_ref().map_err(Clone::clone)?;
            Ok(match ideal.member(t)? {
                Some(cert) if cert.verify(ideal, t) => ("member, certificate verified".into(), want == "member"),
                Some(_) => ("member, certificate does not recombine".into(), false),
                None => ("not a member".into(), false),
            })
        });
    }

    // The ideal identity, both containments.
    let sweep = config.sweep.min(bound);
    let pushed_ideal = || -> Result<GradedIdeal> {
        let mut gens = vec![Poly::var(&g3_ring, "c1")?, Poly::var(&g3_ring, "f1")?];
        for (i, p) in raw.iter().enumerate() {
            gens.push(p.clone().ok_or_else(|| missing(i))?);
        }
        Ok(GradedIdeal::new(&g3_ring, gens)?)
    };
    let sweep_note = |holds: bool, failure: Option<(usize, u32)>| -> (String, bool) {
        match failure {
            None => (format!("contained up to degree {sweep}"), holds),
            Some((i, d)) => (format!("generator {i} fails in degree {d}"), false),
        }
    };
    rec.run(IDEAL_FWD, 9, Some(format!("contained up to degree {sweep}")), |want| {
        let c = pushed_ideal()?.contains(printed_ideal.as_ref().map_err(Clone::clone)?, sweep)?;
        let (s, ok) = sweep_note(c.holds, c.failure);
        Ok((s, ok && want == "contained"))
    });
    rec.run(IDEAL_BWD, 9, Some(format!("contained up to degree {sweep}")), |want| {
        let c = printed_ideal.as_ref().map_err(Clone::clone)?.contains(&pushed_ideal()?, sweep)?;
        let (s, ok) = sweep_note(c.holds, c.failure);
        Ok((s, ok && want == "contained"))
    });
    rec.run(CLOSURE, 9, None, |want| {
        let mut gens = pushed_ideal()?.generators().to_vec();
        gens.extend(geo.t_relations().iter().cloned());
        let ideal = GradedIdeal::new(&g3_ring, gens)?;
        let g = g2e.as_ref().ok_or_else(|| missing(0))?;
        let (mut inside, mut outside, mut skipped) = (0, 0, 0);
        for m in closure_monomials() {
            let deg = Poly::parse(geo.product.ring(), &m)?.degree().unwrap_or(0);
            if 5 + deg > bound {
                skipped += 1;
                continue;
            }
            if ideal.contains_poly(&geo.pushforward(g, &m)?)? {
                inside += 1;
            } else {
                outside += 1;
            }
        }
        let shown = format!("{inside} members, {outside} outside, {skipped} above the degree bound");
        Ok((shown, outside == 0 && want == "all members"))
    });

    // The divisor lattice argument.
    rec.run(LEMMA_PRINTED, 1, None, |want| {
        let outcome = divisor_lattice_check(&DivisorData::new(13, -2))?.to_string();
        Ok((outcome.clone(), outcome == want))
    });
    rec.run(LEMMA_COMPUTED, 5, None, |want| {
        let p = raw[0].as_ref().ok_or_else(|| missing(0))?;
        let outcome = divisor_lattice_check(&DivisorData::from_class(p)?)?.to_string();
        Ok((outcome.clone(), outcome == want))
    });

    // The final presentation.
    let presentation = if reduced.iter().all(Option::is_some) {
        let gens: Vec<Poly> = reduced.iter().flatten().cloned().collect();
        assemble_presentation(&gens, bound).ok()
    } else {
        None
    };
    let pres_ring = presentation_ring(bound).ok();
    let relations_expected = match &pres_ring {
        Some(r) => golden
            .value(RELATIONS)
            .split(',')
            .map(|t| canonical(r, t.trim()))
            .collect::<Vec<_>>()
            .join(", "),
        None => golden.value(RELATIONS).to_string(),
    };
    rec.run(RELATIONS, 9, Some(relations_expected), |want| {
        let p = presentation.as_ref().ok_or_else(|| missing(5))?;
        let computed: BTreeSet<String> = p.relations.iter().map(ToString::to_string).collect();
        let expected = want
            .split(',')
            .map(|t| Poly::parse(&p.ring, t.trim()).map(|q| sign_normalized(q).to_string()))
            .collect::<std::result::Result<BTreeSet<_>, _>>()?;
        let shown = p.relations.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        Ok((shown, computed == expected))
    });
    let oracle_table: Vec<GradedGroupEntry> = (0..=bound).map(enumerate_structure).collect();
    rec.run(STRUCTURE, 9, Some(structure_table(&oracle_table)), |want| {
        let p = presentation.as_ref().ok_or_else(|| missing(5))?;
        let table = p.ideal.graded_group(bound)?;
        Ok((structure_table(&table), table == oracle_table && want == "enumeration"))
    });

    // Independence of the ruling.
    rec.run(LAST_EQUIV, 9, Some(canonical(&g3_ring, golden.value(LAST_EQUIV))), |want| {
        let ideal = printed_ideal.as_ref().map_err(Clone::clone)?;
        let p = reduced[5].as_ref().ok_or_else(|| missing(5))?;
        let diff = p - &Poly::parse(&g3_ring, want)?;
        let same = ideal.contains_poly(&diff)?;
        let shown = format!("{p} ({} modulo the final ideal)", if same { "equal" } else { "different" });
        Ok((shown, same))
    });

    for (name, subtract_from_c2) in [(RULING_F2, false), (RULING_X, true)] {
        rec.run(name, 9, None, |want| {
            let p = presentation.as_ref().ok_or_else(|| missing(5))?;
            ruling_check(&geo, p, subtract_from_c2, want)
        });
    }

    finish(rec, config)
}

/// Compares `f̃2` (or `c2 - f̃2`) with `want`, read on `G(3,∧²S)` when it
/// parses there and on the presentation ring otherwise.
fn ruling_check(geo: &Geometry, p: &Presentation, subtract_from_c2: bool, want: &str) -> Outcome {
    let g3_ring = geo.g3.ring();
    let f2t = geo.complementary()?.class(2);
    let lhs = if subtract_from_c2 {
        &Poly::var(g3_ring, "c2")? - &f2t
    } else {
        f2t
    };
    let got = p.ideal.normal_form(&to_presentation(&lhs, &p.ring)?)?;
    let want = match Poly::parse(g3_ring, want) {
        Ok(w) => to_presentation(&w, &p.ring)?,
        Err(_) => Poly::parse(&p.ring, want)?,
    };
    let want = p.ideal.normal_form(&want)?;
    Ok((format!("{got} with x = c2 - f2"), got == want))
}

fn finish(rec: Recorder<'_>, config: &Config) -> Report {
    let overall = if rec.checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    };
    Report {
        checks: rec.checks,
        overall,
        config: config.clone(),
    }
}

/// Monomials in `b1, b2` of degree at most 6 other than the six twists.
pub fn closure_monomials() -> Vec<String> {
    let mut out = Vec::new();
    for d in 1..=6u32 {
        for j in (0..=d / 2).rev() {
            let i = d - 2 * j;
            let mut parts = Vec::new();
            for (name, e) in [("b1", i), ("b2", j)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    e => parts.push(format!("{name}^{e}")),
                }
            }
            let short = parts.join("*");
            if !TWISTS.contains(&short.as_str()) {
                out.push(short);
            }
        }
    }
    out
}

/// Compares each available pushforward with the fixed-point sum at random
/// integer roots of `S` and random values of `f1, f2, f3`. Returns the
/// number of classes compared and the number of disagreements.
fn oracle_agreement(
    geo: &Geometry,
    g2e: Option<&Poly>,
    raw: &[Option<Poly>],
    config: &Config,
) -> Result<(usize, usize)> {
    let g2e = g2e.ok_or(PipelineError::AboveBound {
        needed: 5,
        bound: geo.degree_bound(),
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bundle_vars = ["c1", "c2", "c3", "c4"];
    let (mut classes, mut bad) = (0, 0);
    for (twist, pushed) in TWISTS.iter().zip(raw) {
        let Some(pushed) = pushed else { continue };
        let class = g2e * &Poly::parse(geo.product.ring(), twist)?;
        classes += 1;
        for _ in 0..config.specializations {
            let mut roots: Vec<BigInt> = Vec::new();
            while roots.len() < 4 {
                let r = BigInt::from(rng.gen_range(-30i64..=30));
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            let others: HashMap<String, BigInt> = ["f1", "f2", "f3"]
                .iter()
                .map(|n| (n.to_string(), BigInt::from(rng.gen_range(-30i64..=30))))
                .collect();
            let lhs = oracle::symmetrization(&class, &["b1", "b2"], &bundle_vars, &roots, &others);
            let rhs = oracle::evaluate_base(pushed, &bundle_vars, &roots, &others);
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    Ok((classes, bad))
}
