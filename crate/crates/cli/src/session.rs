//! Script evaluation.
//!
//! Every ring created by a constructor is registered in order. A bare
//! variable name refers to the first registered ring that has it, and two
//! classes from different rings meet in an operand's ring when it holds the
//! other's variables, else in the first registered ring holding both.

use std::collections::HashMap;
use std::fmt;

use chow_core::chern::{
    determinant, dual, exterior_square, porteous, tensor_line, whitney_quotient, Bundle,
};
use chow_core::grasstower::{
    extend, fiber_product, FiberProduct, Partition, PresentedRing, Tautological, TowerLevel,
};
use chow_core::polyring::{same_ring, Poly, Ring, VarTable};
use chow_core::zgraded::{GradedGroup, GradedGroupEntry, GradedIdeal};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::syntax::{Builtin, Expr, Pos, Script, Stmt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct EvalError {
    pub pos: Pos,
    pub message: String,
}

type Result<T, E = String> = std::result::Result<T, E>;

fn fail<T>(message: impl Into<String>) -> Result<T> {
    Err(message.into())
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

#[derive(Debug, Clone)]
pub enum Value {
    Int(BigInt),
    Poly(Poly),
    Bundle(Bundle),
    Level(Box<TowerLevel>),
    Product(Box<FiberProduct>),
    Ideal(GradedIdeal),
    Bool(bool),
    Group(GradedGroupEntry),
    Table(GradedGroup),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "an integer",
            Value::Poly(_) => "a class",
            Value::Bundle(_) => "a bundle",
            Value::Level(_) => "a Grassmann bundle",
            Value::Product(_) => "a fiber product",
            Value::Ideal(_) => "an ideal",
            Value::Bool(_) => "a boolean",
            Value::Group(_) => "a graded piece",
            Value::Table(_) => "a structure table",
        }
    }
}

fn list(names: &[String]) -> String {
    if names.is_empty() {
        "a point".into()
    } else {
        names.join(", ")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Bundle(b) => {
                write!(f, "rank {}", b.rank())?;
                for i in 1..=b.rank() {
                    write!(f, ", c{i} = {}", b.class(i))?;
                }
                Ok(())
            }
            Value::Level(g) => write!(
                f,
                "G({}, {}) over {} with {}",
                g.k(),
                g.n(),
                list(g.base().ring().names()),
                g.subvars().join(", ")
            ),
            Value::Product(p) => write!(f, "fiber product over {}", list(p.ring().names())),
            Value::Ideal(i) => {
                let gens: Vec<String> = i.generators().iter().map(ToString::to_string).collect();
                write!(f, "ideal({})", gens.join(", "))
            }
            Value::Bool(b) => write!(f, "{b}"),
            Value::Group(g) => write!(f, "{g}"),
            Value::Table(t) => {
                let parts: Vec<String> = t.iter().map(|e| format!("A{}={e}", e.degree)).collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

/// One evaluated statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub line: usize,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub passed: bool,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub degree_bound: u32,
    pub entries: Vec<Entry>,
    pub checks_passed: usize,
    pub checks_failed: usize,
}

impl Transcript {
    pub fn passed(&self) -> bool {
        self.checks_failed == 0
    }

    /// The value bound to `name`, as displayed.
    pub fn value_of(&self, name: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.name.as_deref() == Some(name))
            .map(|e| e.value.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match (&e.name, &e.check) {
                (Some(n), _) => out.push_str(&format!("{:>4}  {n} = {}\n", e.line, e.value)),
                (None, Some(c)) => {
                    let verdict = if c.passed { "PASS" } else { "FAIL" };
                    out.push_str(&format!("{:>4}  {verdict} {}\n", e.line, e.statement));
                    if !c.passed {
                        out.push_str(&format!("        left:  {}\n        right: {}\n", c.left, c.right));
                    }
                }
                (None, None) => out.push_str(&format!("{:>4}  {}\n", e.line, e.value)),
            }
        }
        out.push_str(&format!(
            "checks: {} passed, {} failed (degree bound {})\n",
            self.checks_passed, self.checks_failed, self.degree_bound
        ));
        out
    }
}

pub struct Session {
    degree_bound: u32,
    env: HashMap<String, Value>,
    rings: Vec<PresentedRing>,
}

impl Session {
    pub fn new(degree_bound: u32) -> Self {
        Session {
            degree_bound,
            env: HashMap::new(),
            rings: Vec::new(),
        }
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.env.get(name)
    }

    /// Runs a whole script. Failing checks are recorded; errors stop the run.
    pub fn run(&mut self, script: &Script) -> std::result::Result<Transcript, (Transcript, EvalError)> {
        let mut t = Transcript {
            degree_bound: self.degree_bound,
            entries: Vec::new(),
            checks_passed: 0,
            checks_failed: 0,
        };
        for (stmt, &pos) in script.stmts.iter().zip(&script.positions) {
            match self.exec(stmt) {
                Ok(entry) => {
                    if let Some(c) = &entry.check {
                        if c.passed {
                            t.checks_passed += 1;
                        } else {
                            t.checks_failed += 1;
                        }
                    }
                    t.entries.push(Entry {
                        line: pos.line,
                        ..entry
                    });
                }
                Err(message) => return Err((t, EvalError { pos, message })),
            }
        }
        Ok(t)
    }

    fn exec(&mut self, stmt: &Stmt) -> Result<Entry> {
        match stmt {
            Stmt::Let(name, e) => {
                if self.env.contains_key(name) {
                    return fail(format!("`{name}` is already bound"));
                }
                let v = self.eval(e)?;
                let entry = Entry {
                    line: 0,
                    statement: stmt.to_string(),
                    name: Some(name.clone()),
                    value: v.to_string(),
                    check: None,
                };
                self.env.insert(name.clone(), v);
                Ok(entry)
            }
            Stmt::Check(a, b) => {
                let left = self.eval(a)?;
                let right = self.eval(b)?;
                let passed = self.equal(&left, &right)?;
                Ok(Entry {
                    line: 0,
                    statement: stmt.to_string(),
                    name: None,
                    value: if passed { "pass" } else { "fail" }.into(),
                    check: Some(CheckResult {
                        passed,
                        left: left.to_string(),
                        right: right.to_string(),
                    }),
                })
            }
        }
    }

    /// Evaluates one expression in the current environment.
    pub fn eval(&mut self, e: &Expr) -> Result<Value> {
        match e {
            Expr::Int(n) => Ok(Value::Int(n.clone())),
            Expr::Name(n) => self.lookup(n),
            Expr::Neg(a) => match self.eval(a)? {
                Value::Int(n) => Ok(Value::Int(-n)),
                Value::Poly(p) => Ok(Value::Poly(-p)),
                other => fail(format!("cannot negate {}", other.kind())),
            },
            Expr::Add(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.arith(a, b, '+')
            }
            Expr::Sub(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.arith(a, b, '-')
            }
            Expr::Mul(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.arith(a, b, '*')
            }
            Expr::Pow(a, k) => match self.eval(a)? {
                Value::Int(n) => Ok(Value::Int(n.pow(*k))),
                Value::Poly(p) => {
                    let bound = p.ring().degree_bound();
                    if let Some(d) = p.degree() {
                        if u64::from(d) * u64::from(*k) > u64::from(bound) {
                            return fail(format!(
                                "degree overflow: power has degree {} above the bound {bound}",
                                u64::from(d) * u64::from(*k)
                            ));
                        }
                    }
                    Ok(Value::Poly(p.pow(*k)))
                }
                other => fail(format!("cannot raise {} to a power", other.kind())),
            },
            Expr::Call(b, args) => self.call(*b, args),
        }
    }

    fn lookup(&self, name: &str) -> Result<Value> {
        if let Some(v) = self.env.get(name) {
            return Ok(v.clone());
        }
        match name {
            "true" => return Ok(Value::Bool(true)),
            "false" => return Ok(Value::Bool(false)),
            _ => {}
        }
        for p in &self.rings {
            if p.ring().index_of(name).is_some() {
                return Poly::var(p.ring(), name).map(Value::Poly).map_err(err);
            }
        }
        fail(format!("unknown name `{name}`"))
    }

    fn register(&mut self, p: &PresentedRing) {
        if !self.rings.iter().any(|r| same_ring(r.ring(), p.ring())) {
            self.rings.push(p.clone());
        }
    }

    fn presented_for(&self, ring: &Ring) -> PresentedRing {
        self.rings
            .iter()
            .find(|r| same_ring(r.ring(), ring))
            .cloned()
            .unwrap_or_else(|| PresentedRing::free(ring))
    }

    fn join(&self, a: &Ring, b: &Ring) -> Result<Ring> {
        if same_ring(a, b) || a.contains_all(b) {
            return Ok(a.clone());
        }
        if b.contains_all(a) {
            return Ok(b.clone());
        }
        self.rings
            .iter()
            .map(PresentedRing::ring)
            .find(|r| r.contains_all(a) && r.contains_all(b))
            .cloned()
            .ok_or_else(|| {
                format!(
                    "no ring holds both {} and {}",
                    list(a.names()),
                    list(b.names())
                )
            })
    }

    /// Moves a class onto the first registered ring with exactly its variables.
    fn home(&self, p: Poly) -> Poly {
        if self.rings.iter().any(|r| same_ring(r.ring(), p.ring())) {
            return p;
        }
        let found = self
            .rings
            .iter()
            .map(PresentedRing::ring)
            .find(|r| r.contains_all(p.ring()) && p.ring().contains_all(r));
        match found {
            Some(r) => p.embed(r).unwrap_or(p),
            None => p,
        }
    }

    fn point(&mut self) -> Ring {
        if let Some(p) = self.rings.iter().find(|r| r.ring().is_empty()) {
            return p.ring().clone();
        }
        let p = PresentedRing::point(self.degree_bound);
        self.register(&p);
        p.ring().clone()
    }

    fn arith(&self, a: Value, b: Value, op: char) -> Result<Value> {
        if let (Value::Int(x), Value::Int(y)) = (&a, &b) {
            return Ok(Value::Int(match op {
                '+' => x + y,
                '-' => x - y,
                _ => x * y,
            }));
        }
        let (x, y) = self.polys(a, b)?;
        if op == '*' {
            if let (Some(dx), Some(dy)) = (x.degree(), y.degree()) {
                let bound = x.ring().degree_bound();
                if dx + dy > bound {
                    return fail(format!(
                        "degree overflow: product has degree {} above the bound {bound}",
                        dx + dy
                    ));
                }
            }
        }
        Ok(Value::Poly(match op {
            '+' => &x + &y,
            '-' => &x - &y,
            _ => &x * &y,
        }))
    }

    /// Brings two class-valued operands onto a common ring.
    fn polys(&self, a: Value, b: Value) -> Result<(Poly, Poly)> {
        match (a, b) {
            (Value::Poly(x), Value::Poly(y)) => {
                let ring = self.join(x.ring(), y.ring())?;
                Ok((x.embed(&ring).map_err(err)?, y.embed(&ring).map_err(err)?))
            }
            (Value::Poly(x), Value::Int(n)) => {
                let c = Poly::constant(x.ring(), n);
                Ok((x, c))
            }
            (Value::Int(n), Value::Poly(y)) => Ok((Poly::constant(y.ring(), n), y)),
            (a, b) => fail(format!("expected classes, found {} and {}", a.kind(), b.kind())),
        }
    }

    fn equal(&self, a: &Value, b: &Value) -> Result<bool> {
        match (a, b) {
            (Value::Int(x), Value::Int(y)) => Ok(x == y),
            (Value::Bool(x), Value::Bool(y)) => Ok(x == y),
            (Value::Group(x), Value::Group(y)) => Ok(x == y),
            (Value::Table(x), Value::Table(y)) => Ok(x == y),
            (Value::Bundle(x), Value::Bundle(y)) => {
                let ring = self.join(x.ring(), y.ring())?;
                Ok(x.embed(&ring).map_err(err)? == y.embed(&ring).map_err(err)?)
            }
            (Value::Poly(_) | Value::Int(_), Value::Poly(_) | Value::Int(_)) => {
                let (x, y) = self.polys(a.clone(), b.clone())?;
                Ok(x == y)
            }
            _ => fail(format!("cannot compare {} with {}", a.kind(), b.kind())),
        }
    }

    fn call(&mut self, b: Builtin, args: &[Expr]) -> Result<Value> {
        use Builtin as B;
        match b {
            B::Bundle => {
                let prefix = name_arg(&args[0])?;
                let rank = self.usize_arg(&args[1])?;
                if rank == 0 {
                    return fail("a bundle needs positive rank");
                }
                let ring = VarTable::new(VarTable::chern_vars(prefix, rank), self.degree_bound)
                    .map_err(err)?;
                if let Some(clash) = self.rings.iter().find(|r| {
                    ring.names().iter().any(|n| r.ring().index_of(n).is_some())
                }) {
                    return fail(format!(
                        "classes `{prefix}1..` already exist over {}",
                        list(clash.ring().names())
                    ));
                }
                self.register(&PresentedRing::free(&ring));
                Ok(Value::Bundle(Bundle::from_vars(&ring, prefix, rank).map_err(err)?))
            }
            B::Trivial => {
                let rank = self.usize_arg(&args[0])?;
                let ring = self.point();
                Ok(Value::Bundle(Bundle::trivial(&ring, rank)))
            }
            B::Dual => Ok(Value::Bundle(dual(&self.bundle_arg(&args[0])?))),
            B::Det => Ok(Value::Bundle(determinant(&self.bundle_arg(&args[0])?))),
            B::Wedge2 => Ok(Value::Bundle(
                exterior_square(&self.bundle_arg(&args[0])?).map_err(err)?,
            )),
            B::TensorLine => {
                let e = self.bundle_arg(&args[0])?;
                let l = match self.eval(&args[1])? {
                    Value::Poly(p) => p,
                    Value::Int(n) => Poly::constant(e.ring(), n),
                    Value::Bundle(l) if l.rank() == 1 => l.class(1),
                    other => return fail(format!("expected a line class, found {}", other.kind())),
                };
                let ring = self.join(e.ring(), l.ring())?;
                let e = e.embed(&ring).map_err(err)?;
                let l = l.embed(&ring).map_err(err)?;
                Ok(Value::Bundle(tensor_line(&e, &l).map_err(err)?))
            }
            B::Quotient => {
                let (e, f) = self.bundle_pair(&args[0], &args[1])?;
                let presented = self.presented_for(e.ring());
                let relations = presented.relations();
                let rel = (!relations.generators().is_empty()).then_some(relations);
                Ok(Value::Bundle(whitney_quotient(&e, &f, rel).map_err(err)?))
            }
            B::Grass => {
                let e = self.bundle_arg(&args[0])?;
                let k = self.usize_arg(&args[1])?;
                let prefix = name_arg(&args[2])?;
                let base = self.presented_for(e.ring());
                let level = extend(&base, &e, k, prefix).map_err(err)?;
                self.register(level.presented());
                Ok(Value::Level(Box::new(level)))
            }
            B::Sub => Ok(Value::Bundle(self.level_arg(&args[0])?.taut_sub().clone())),
            B::Quot => Ok(Value::Bundle(self.level_arg(&args[0])?.taut_quot().clone())),
            B::Fiber => {
                let a = self.level_arg(&args[0])?;
                let b = self.level_arg(&args[1])?;
                let product = fiber_product(&a, &b).map_err(err)?;
                self.register(product.presented());
                Ok(Value::Product(Box::new(product)))
            }
            B::Class => {
                let e = self.bundle_arg(&args[0])?;
                let i = self.usize_arg(&args[1])?;
                Ok(Value::Poly(e.class(i)))
            }
            B::Porteous => {
                let (e, f) = self.bundle_pair(&args[0], &args[1])?;
                let r = self.usize_arg(&args[2])?;
                Ok(Value::Poly(porteous(&e, &f, r).map_err(err)?))
            }
            B::Schur => {
                let level = self.level_arg(&args[0])?;
                let which = match name_arg(&args[1])? {
                    "sub" => Tautological::Sub,
                    "quot" => Tautological::Quot,
                    other => return fail(format!("expected `sub` or `quot`, found `{other}`")),
                };
                let parts = args[2..]
                    .iter()
                    .map(|a| self.usize_arg(a))
                    .collect::<Result<Vec<_>>>()?;
                let lambda = Partition::new(parts).ok_or("parts must be weakly decreasing")?;
                Ok(Value::Poly(level.schur(&lambda, which).map_err(err)?))
            }
            B::Gysin => {
                let level = self.level_arg(&args[0])?;
                let p = self.poly_arg(&args[1], level.ring())?;
                let p = if p.ring().contains_all(level.ring()) {
                    p
                } else {
                    let ring = self.join(p.ring(), level.ring())?;
                    p.embed(&ring).map_err(err)?
                };
                Ok(Value::Poly(self.home(level.gysin(&p).map_err(err)?)))
            }
            B::Nf => {
                let target = self.eval(&args[0])?;
                let ring = match &target {
                    Value::Level(l) => l.ring().clone(),
                    Value::Product(x) => x.ring().clone(),
                    Value::Ideal(i) => i.ring().clone(),
                    other => return fail(format!("cannot reduce modulo {}", other.kind())),
                };
                let p = self.poly_arg(&args[1], &ring)?.embed(&ring).map_err(err)?;
                let reduced = match &target {
                    Value::Level(l) => l.normal_form(&p).map_err(err)?,
                    Value::Product(x) => x.presented().normal_form(&p).map_err(err)?,
                    Value::Ideal(i) => i.normal_form(&p).map_err(err)?,
                    _ => unreachable!("checked above"),
                };
                Ok(Value::Poly(reduced))
            }
            B::Subs => {
                let p = match self.eval(&args[0])? {
                    Value::Poly(p) => p,
                    other => return fail(format!("expected a class, found {}", other.kind())),
                };
                let mut images = Vec::new();
                for pair in args[1..].chunks(2) {
                    let var = name_arg(&pair[0])?;
                    let img = self.poly_arg(&pair[1], p.ring())?;
                    images.push((var, img.embed(p.ring()).map_err(err)?));
                }
                Ok(Value::Poly(p.substitute(&images).map_err(err)?))
            }
            B::Ideal => {
                let mut gens = Vec::new();
                for a in args {
                    gens.push(self.eval(a)?);
                }
                let mut ring: Option<Ring> = None;
                for g in &gens {
                    if let Value::Poly(p) = g {
                        ring = Some(match ring {
                            None => p.ring().clone(),
                            Some(r) => self.join(&r, p.ring())?,
                        });
                    }
                }
                let ring = ring.ok_or("an ideal needs at least one class among its generators")?;
                let polys = gens
                    .into_iter()
                    .map(|g| match g {
                        Value::Poly(p) => p.embed(&ring).map_err(err),
                        Value::Int(n) => Ok(Poly::constant(&ring, n)),
                        other => fail(format!("expected a class, found {}", other.kind())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Value::Ideal(GradedIdeal::new(&ring, polys).map_err(err)?))
            }
            B::Member => {
                let ideal = self.ideal_arg(&args[1])?;
                let p = self.poly_arg(&args[0], ideal.ring())?;
                let p = p.embed(ideal.ring()).map_err(err)?;
                if !p.is_zero() && !p.is_homogeneous() {
                    return fail("membership needs a homogeneous class");
                }
                match ideal.member(&p).map_err(err)? {
                    Some(cert) => {
                        if !cert.verify(&ideal, &p) {
                            return fail("membership certificate does not recombine");
                        }
                        Ok(Value::Bool(true))
                    }
                    None => Ok(Value::Bool(false)),
                }
            }
            B::Contains => {
                let big = self.ideal_arg(&args[0])?;
                let small = self.ideal_arg(&args[1])?.embed(big.ring()).map_err(err)?;
                let up_to = match args.get(2) {
                    Some(a) => self.degree_arg(a)?,
                    None => self.degree_bound,
                };
                Ok(Value::Bool(big.contains(&small, up_to).map_err(err)?.holds))
            }
            B::Structure => {
                let ideal = self.ideal_arg(&args[0])?;
                match args.get(1) {
                    Some(a) => {
                        let d = self.degree_arg(a)?;
                        Ok(Value::Group(ideal.quotient_structure(d).map_err(err)?))
                    }
                    None => Ok(Value::Table(
                        ideal.graded_group(self.degree_bound).map_err(err)?,
                    )),
                }
            }
            B::Relation => {
                let level = self.level_arg(&args[0])?;
                let d = self.usize_arg(&args[1])?;
                let first = level.n() - level.k() + 1;
                if d < first || d > level.n() {
                    return fail(format!(
                        "relations of this level live in degrees {first}..={}",
                        level.n()
                    ));
                }
                Ok(Value::Poly(level.new_relations()[d - first].clone()))
            }
        }
    }

    fn usize_arg(&mut self, e: &Expr) -> Result<usize> {
        match self.eval(e)? {
            Value::Int(n) => n
                .to_usize()
                .ok_or_else(|| format!("expected a nonnegative integer, found {n}")),
            other => fail(format!("expected an integer, found {}", other.kind())),
        }
    }

    fn degree_arg(&mut self, e: &Expr) -> Result<u32> {
        let d = self.usize_arg(e)?;
        u32::try_from(d)
            .ok()
            .filter(|&d| d <= self.degree_bound)
            .ok_or_else(|| format!("degree {d} is above the bound {}", self.degree_bound))
    }

    fn bundle_arg(&mut self, e: &Expr) -> Result<Bundle> {
        match self.eval(e)? {
            Value::Bundle(b) => Ok(b),
            other => fail(format!("expected a bundle, found {}", other.kind())),
        }
    }

    fn bundle_pair(&mut self, a: &Expr, b: &Expr) -> Result<(Bundle, Bundle)> {
        let (x, y) = (self.bundle_arg(a)?, self.bundle_arg(b)?);
        let ring = self.join(x.ring(), y.ring())?;
        Ok((x.embed(&ring).map_err(err)?, y.embed(&ring).map_err(err)?))
    }

    fn level_arg(&mut self, e: &Expr) -> Result<TowerLevel> {
        match self.eval(e)? {
            Value::Level(l) => Ok(*l),
            other => fail(format!("expected a Grassmann bundle, found {}", other.kind())),
        }
    }

    fn ideal_arg(&mut self, e: &Expr) -> Result<GradedIdeal> {
        match self.eval(e)? {
            Value::Ideal(i) => Ok(i),
            other => fail(format!("expected an ideal, found {}", other.kind())),
        }
    }

    /// A class, with integers read as constants over `ring`.
    fn poly_arg(&mut self, e: &Expr, ring: &Ring) -> Result<Poly> {
        match self.eval(e)? {
            Value::Poly(p) => Ok(p),
            Value::Int(n) => Ok(Poly::constant(ring, n)),
            other => fail(format!("expected a class, found {}", other.kind())),
        }
    }
}

fn name_arg(e: &Expr) -> Result<&str> {
    match e {
        Expr::Name(n) => Ok(n),
        other => fail(format!("expected a bare name, found `{other}`")),
    }
}

/// Parses and runs `text` in a fresh session.
pub fn run_script(text: &str, degree_bound: u32) -> std::result::Result<Transcript, RunError> {
    let script = crate::syntax::parse_script(text).map_err(RunError::Parse)?;
    Session::new(degree_bound)
        .run(&script)
        .map_err(|(partial, e)| RunError::Eval(Box::new(partial), e))
}

#[derive(Debug, Clone, Error)]
pub enum RunError {
    #[error("syntax error at {0}")]
    Parse(crate::syntax::ParseError),
    #[error("evaluation error at {1}")]
    Eval(Box<Transcript>, EvalError),
}
