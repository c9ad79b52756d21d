//! Shared helpers for the integration tests: fixture paths, a brute-force
//! sequent enumerator, random provable sequents and a JSON schema checker.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use rand::Rng;
use serde_json::Value;

use catsem::category::{Category, SortMap};
use catsem::lambda::{normalize, NormalForm, SemType, Term};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).expect("fixture is readable")
}

pub fn cat(text: &str) -> Category {
    catsem::category::parse_category(text).expect("valid category")
}

pub fn basic_sorts() -> SortMap {
    let mut m = BTreeMap::new();
    m.insert("np".to_string(), SemType::e());
    m.insert("pp".to_string(), SemType::e());
    m.insert("n".to_string(), SemType::arrow(SemType::e(), SemType::t()));
    m.insert("ap".to_string(), SemType::arrow(SemType::e(), SemType::t()));
    m.insert("S".to_string(), SemType::t());
    SortMap(m)
}

/// Untyped lambda terms with de Bruijn indices; `Hyp(i)` is the i-th
/// antecedent formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Hyp(usize),
    Bound(usize),
    App(Box<Expr>, Box<Expr>),
    Lam(Box<Expr>),
}

impl Expr {
    fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    fn map_hyps(&self, f: &dyn Fn(usize) -> Expr) -> Expr {
        match self {
            Expr::Hyp(i) => f(*i),
            Expr::Bound(k) => Expr::Bound(*k),
            Expr::App(a, b) => Expr::app(a.map_hyps(f), b.map_hyps(f)),
            Expr::Lam(b) => Expr::Lam(Box::new(b.map_hyps(f))),
        }
    }

    /// Bind `Hyp(k)` under a new lambda, renumbering the later hypotheses.
    fn abstract_hyp(&self, k: usize) -> Expr {
        fn go(e: &Expr, k: usize, depth: usize) -> Expr {
            match e {
                Expr::Hyp(i) if *i == k => Expr::Bound(depth),
                Expr::Hyp(i) if *i > k => Expr::Hyp(i - 1),
                Expr::Hyp(i) => Expr::Hyp(*i),
                Expr::Bound(b) => Expr::Bound(*b),
                Expr::App(a, b) => Expr::app(go(a, k, depth), go(b, k, depth)),
                Expr::Lam(b) => Expr::Lam(Box::new(go(b, k, depth + 1))),
            }
        }
        Expr::Lam(Box::new(go(self, k, 0)))
    }

    fn has_bound(&self, k: usize) -> bool {
        match self {
            Expr::Bound(b) => *b == k,
            Expr::Hyp(_) => false,
            Expr::App(a, b) => a.has_bound(k) || b.has_bound(k),
            Expr::Lam(b) => b.has_bound(k + 1),
        }
    }

    fn lower(&self, depth: usize) -> Expr {
        match self {
            Expr::Bound(b) if *b > depth => Expr::Bound(b - 1),
            Expr::App(a, b) => Expr::app(a.lower(depth), b.lower(depth)),
            Expr::Lam(b) => Expr::Lam(Box::new(b.lower(depth + 1))),
            other => other.clone(),
        }
    }

    /// Eta-short form: `λ. M 0` becomes `M` whenever `M` does not use the
    /// bound variable.
    pub fn eta_short(&self) -> Expr {
        match self {
            Expr::App(a, b) => Expr::app(a.eta_short(), b.eta_short()),
            Expr::Lam(b) => match b.eta_short() {
                Expr::App(f, x) if *x == Expr::Bound(0) && !f.has_bound(0) => f.lower(0),
                body => Expr::Lam(Box::new(body)),
            },
            other => other.clone(),
        }
    }

    /// Number of occurrences of each hypothesis.
    pub fn hyp_counts(&self, out: &mut BTreeMap<usize, usize>) {
        match self {
            Expr::Hyp(i) => *out.entry(*i).or_insert(0) += 1,
            Expr::Bound(_) => {}
            Expr::App(a, b) => {
                a.hyp_counts(out);
                b.hyp_counts(out);
            }
            Expr::Lam(b) => b.hyp_counts(out),
        }
    }
}

fn atom_counts(c: &Category, sign: i64, out: &mut BTreeMap<String, i64>) {
    match c {
        Category::Atom(a) => *out.entry(a.clone()).or_insert(0) += sign,
        Category::Under(a, b) | Category::Over(b, a) => {
            atom_counts(a, -sign, out);
            atom_counts(b, sign, out);
        }
    }
}

fn count_balanced(ants: &[Category], goal: &Category) -> bool {
    let mut m = BTreeMap::new();
    atom_counts(goal, 1, &mut m);
    for a in ants {
        atom_counts(a, -1, &mut m);
    }
    m.values().all(|&v| v == 0)
}

/// Exhaustive, unfocused cut-free search in the product-free Lambek
/// calculus with atomic axioms. Every proof term is then beta-normal and
/// eta-long, so distinct readings are distinct `Expr`s.
pub struct BruteForce {
    pub allow_empty: bool,
    memo: HashMap<(Vec<Category>, Category), BTreeSet<Expr>>,
}

impl BruteForce {
    pub fn new(allow_empty: bool) -> Self {
        BruteForce {
            allow_empty,
            memo: HashMap::new(),
        }
    }

    pub fn prove(&mut self, ants: &[Category], goal: &Category) -> BTreeSet<Expr> {
        if (ants.is_empty() && !self.allow_empty) || !count_balanced(ants, goal) {
            return BTreeSet::new();
        }
        let key = (ants.to_vec(), goal.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = self.search(ants, goal);
        if self.memo.len() > 100_000 {
            self.memo.clear();
        }
        self.memo.insert(key, r.clone());
        r
    }

    fn search(&mut self, ants: &[Category], goal: &Category) -> BTreeSet<Expr> {
        let mut out = BTreeSet::new();
        if let ([Category::Atom(a)], Category::Atom(b)) = (ants, goal) {
            if a == b {
                out.insert(Expr::Hyp(0));
            }
        }
        match goal {
            Category::Under(a, b) if !ants.is_empty() || self.allow_empty => {
                let mut ctx = vec![(**a).clone()];
                ctx.extend_from_slice(ants);
                for body in self.prove(&ctx, b) {
                    out.insert(body.abstract_hyp(0));
                }
            }
            Category::Over(b, a) if !ants.is_empty() || self.allow_empty => {
                let mut ctx = ants.to_vec();
                ctx.push((**a).clone());
                for body in self.prove(&ctx, b) {
                    out.insert(body.abstract_hyp(ants.len()));
                }
            }
            _ => {}
        }
        for (i, c) in ants.iter().enumerate() {
            match c {
                // Γ Π (A\B) Δ: Π = ants[j..i]
                Category::Under(a, b) => {
                    let lo = if self.allow_empty { 0 } else { 1 };
                    for len in lo..=i {
                        let j = i - len;
                        self.left_rule(ants, goal, i, j, i, a, b, &mut out);
                    }
                }
                // Γ (B/A) Π Δ: Π = ants[i+1..k]
                Category::Over(b, a) => {
                    let lo = if self.allow_empty { 0 } else { 1 };
                    for len in lo..ants.len() - i {
                        self.left_rule(ants, goal, i, i + 1, i + 1 + len, a, b, &mut out);
                    }
                }
                Category::Atom(_) => {}
            }
        }
        out
    }

    /// The functor sits at `f`; its argument is proved from `ants[p..q]`;
    /// the remaining context with `b` replacing functor and argument must
    /// prove the goal.
    #[allow(clippy::too_many_arguments)]
    fn left_rule(
        &mut self,
        ants: &[Category],
        goal: &Category,
        f: usize,
        p: usize,
        q: usize,
        a: &Category,
        b: &Category,
        out: &mut BTreeSet<Expr>,
    ) {
        let (lo, hi) = (p.min(f), q.max(f + 1));
        let args = self.prove(&ants[p..q], a);
        if args.is_empty() {
            return;
        }
        let mut ctx = ants[..lo].to_vec();
        ctx.push(b.clone());
        ctx.extend_from_slice(&ants[hi..]);
        let conts = self.prove(&ctx, goal);
        for m in &args {
            let m = m.map_hyps(&|k| Expr::Hyp(p + k));
            let filled = Expr::app(Expr::Hyp(f), m);
            for n in &conts {
                out.insert(n.map_hyps(&|k| {
                    if k < lo {
                        Expr::Hyp(k)
                    } else if k == lo {
                        filled.clone()
                    } else {
                        Expr::Hyp(k - lo - 1 + hi)
                    }
                }));
            }
        }
    }
}

/// Translate a derivational term over `w0, w1, ...` into an eta-short
/// `Expr`, after beta normalization.
pub fn expr_of(term: &Term) -> Expr {
    fn go(t: &Term, scope: &mut Vec<String>) -> Expr {
        match t {
            Term::Var { name, .. } => match scope.iter().rev().position(|n| n == name) {
                Some(k) => Expr::Bound(k),
                None => Expr::Hyp(name.strip_prefix('w').and_then(|s| s.parse().ok()).expect("hypothesis name")),
            },
            Term::App(f, a) => Expr::app(go(f, scope), go(a, scope)),
            Term::Abs { var, body, .. } => {
                scope.push(var.clone());
                let b = go(body, scope);
                scope.pop();
                Expr::Lam(Box::new(b))
            }
            other => panic!("unexpected constant in derivational term: {other}"),
        }
    }
    go(&normalize(term, NormalForm::Beta), &mut Vec::new()).eta_short()
}

/// Random category over `atoms` with at most `depth` connectives.
pub fn random_category(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> Category {
    if depth == 0 || rng.random_bool(0.5) {
        return Category::atom(atoms[rng.random_range(0..atoms.len())]);
    }
    let a = random_category(rng, atoms, depth - 1);
    let b = random_category(rng, atoms, depth - 1);
    if rng.random_bool(0.5) {
        Category::under(a, b)
    } else {
        Category::over(b, a)
    }
}

/// A provable antecedent for `goal`: starting from `[goal]`, repeatedly
/// replace some `B` by `A, A\B` or `B/A, A` for a random `A`.
pub fn random_provable(rng: &mut impl Rng, atoms: &[&str], goal: &Category, splits: usize) -> Vec<Category> {
    let mut ants = vec![goal.clone()];
    for _ in 0..splits {
        let i = rng.random_range(0..ants.len());
        let b = ants[i].clone();
        let a = random_category(rng, atoms, 1);
        let pair = if rng.random_bool(0.5) {
            vec![a.clone(), Category::under(a, b)]
        } else {
            vec![Category::over(b, a.clone()), a]
        };
        ants.splice(i..=i, pair);
    }
    ants
}

/// Check `value` against the subset of JSON Schema used by the shipped
/// output schema. Returns one message per violation.
pub fn validate(root: &Value, schema: &Value, value: &Value, at: &str) -> Vec<String> {
    let mut errs = Vec::new();
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").expect("local reference");
        return validate(root, &root["$defs"][name], value, at);
    }
    if let Some(alts) = schema.get("oneOf").and_then(Value::as_array) {
        let ok = alts.iter().filter(|s| validate(root, s, value, at).is_empty()).count();
        if ok != 1 {
            errs.push(format!("{at}: matches {ok} alternatives of oneOf"));
        }
    }
    if let Some(t) = schema.get("type").and_then(Value::as_str) {
        let ok = match t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "integer" => value.is_u64() || value.is_i64(),
            "number" => value.is_number(),
            "null" => value.is_null(),
            other => panic!("unsupported type {other}"),
        };
        if !ok {
            errs.push(format!("{at}: expected {t}"));
            return errs;
        }
    }
    if let Some(c) = schema.get("const") {
        if c != value {
            errs.push(format!("{at}: expected {c}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            errs.push(format!("{at}: {value} not in enum"));
        }
    }
    if let Some(obj) = value.as_object() {
        for r in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = r.as_str().expect("string key");
            if !obj.contains_key(key) {
                errs.push(format!("{at}: missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, v) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(s) => errs.extend(validate(root, s, v, &format!("{at}.{k}"))),
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    errs.push(format!("{at}: unexpected property {k}"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            errs.extend(validate(root, items, v, &format!("{at}[{i}]")));
        }
    }
    errs
}

pub fn validate_output(value: &Value) -> Vec<String> {
    let schema: Value = serde_json::from_str(&data("output_schema.json")).expect("schema is JSON");
    validate(&schema, &schema, value, "$")
}

#[derive(Clone, Debug, serde::Deserialize)]
pub struct GoldenCase {
    pub sentence: String,
    pub outcome: String,
    pub readings: usize,
}

pub fn golden_corpus() -> Vec<GoldenCase> {
    serde_json::from_str(&data("golden_corpus.json")).expect("corpus is JSON")
}
