use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::ty::SemType;

/// Lambda terms over typed constants and variables.
///
/// Variables carry their type so that open terms (the derivational terms
/// extracted from proofs) can be typed without an external context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var {
        name: String,
        ty: SemType,
    },
    Const {
        name: String,
        ty: SemType,
    },
    App(Box<Term>, Box<Term>),
    Abs {
        var: String,
        ty: SemType,
        body: Box<Term>,
    },
    /// Occurrence of a declared polymorphic constant. Schema variables that
    /// are missing from `inst` are still open.
    Poly {
        name: String,
        schema: SemType,
        inst: BTreeMap<String, SemType>,
    },
}

/// One step of a path from the root of a term to a subterm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Fun,
    Arg,
    Body,
}

pub type Path = Vec<Step>;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("type mismatch at {path:?}: expected {expected}, found {found}")]
    TypeMismatch {
        path: Path,
        expected: SemType,
        found: SemType,
    },
    #[error("applying a non-function of type {found} at {path:?}")]
    NotAFunction { path: Path, found: SemType },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormalForm {
    Beta,
    BetaEtaLong,
}

/// Usage discipline of the bound variables of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OccurrenceClass {
    Linear,
    Affine,
    Relevant,
    Unrestricted,
}

impl OccurrenceClass {
    fn from_flags(vacuous: bool, duplicated: bool) -> Self {
        match (vacuous, duplicated) {
            (false, false) => OccurrenceClass::Linear,
            (true, false) => OccurrenceClass::Affine,
            (false, true) => OccurrenceClass::Relevant,
            (true, true) => OccurrenceClass::Unrestricted,
        }
    }

    fn flags(self) -> (bool, bool) {
        match self {
            OccurrenceClass::Linear => (false, false),
            OccurrenceClass::Affine => (true, false),
            OccurrenceClass::Relevant => (false, true),
            OccurrenceClass::Unrestricted => (true, true),
        }
    }

    /// Least restrictive class covering both.
    pub fn join(self, other: Self) -> Self {
        let (v1, d1) = self.flags();
        let (v2, d2) = other.flags();
        Self::from_flags(v1 || v2, d1 || d2)
    }
}

impl fmt::Display for OccurrenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OccurrenceClass::Linear => "LINEAR",
            OccurrenceClass::Affine => "AFFINE",
            OccurrenceClass::Relevant => "RELEVANT",
            OccurrenceClass::Unrestricted => "UNRESTRICTED",
        };
        f.write_str(s)
    }
}

/// Nameless rendering of a term: bound variables become de Bruijn indices.
/// Two terms are alpha-equivalent iff their nameless forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nameless {
    Bound(usize),
    Free(String, SemType),
    Const(String, SemType),
    Poly(String, SemType),
    App(Box<Nameless>, Box<Nameless>),
    Abs(SemType, Box<Nameless>),
}

impl Term {
    pub fn var(name: impl Into<String>, ty: SemType) -> Self {
        Term::Var {
            name: name.into(),
            ty,
        }
    }

    pub fn constant(name: impl Into<String>, ty: SemType) -> Self {
        Term::Const {
            name: name.into(),
            ty,
        }
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::App(Box::new(f), Box::new(a))
    }

    /// Left-nested application `f a1 ... an`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Self {
        args.into_iter().fold(f, Term::app)
    }

    pub fn abs(var: impl Into<String>, ty: SemType, body: Term) -> Self {
        Term::Abs {
            var: var.into(),
            ty,
            body: Box::new(body),
        }
    }

    pub fn poly(name: impl Into<String>, schema: SemType) -> Self {
        Term::Poly {
            name: name.into(),
            schema,
            inst: BTreeMap::new(),
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn subterm(&self, path: &[Step]) -> Option<&Term> {
        let mut cur = self;
        for step in path {
            cur = match (step, cur) {
                (Step::Fun, Term::App(f, _)) => f,
                (Step::Arg, Term::App(_, a)) => a,
                (Step::Body, Term::Abs { body, .. }) => body,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Replace the subterm at `path` by `f(subterm)`.
    pub fn map_at(&self, path: &[Step], f: &mut impl FnMut(&Term) -> Term) -> Option<Term> {
        let Some((step, rest)) = path.split_first() else {
            return Some(f(self));
        };
        match (step, self) {
            (Step::Fun, Term::App(g, a)) => Some(Term::app(g.map_at(rest, f)?, (**a).clone())),
            (Step::Arg, Term::App(g, a)) => Some(Term::app((**g).clone(), a.map_at(rest, f)?)),
            (Step::Body, Term::Abs { var, ty, body }) => {
                Some(Term::abs(var.clone(), ty.clone(), body.map_at(rest, f)?))
            }
            _ => None,
        }
    }

    /// Type of a polymorphic occurrence under its current instantiation.
    pub fn poly_type(schema: &SemType, inst: &BTreeMap<String, SemType>) -> SemType {
        schema.subst(inst)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    /// Free variables together with their annotated types.
    pub fn free_var_types(&self) -> BTreeMap<String, SemType> {
        let mut out = BTreeMap::new();
        fn go(t: &Term, bound: &mut Vec<String>, out: &mut BTreeMap<String, SemType>) {
            match t {
                Term::Var { name, ty } => {
                    if !bound.contains(name) {
                        out.insert(name.clone(), ty.clone());
                    }
                }
                Term::Const { .. } | Term::Poly { .. } => {}
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
                Term::Abs { var, body, .. } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var { name, .. } => {
                if !bound.contains(name) {
                    out.insert(name.clone());
                }
            }
            Term::Const { .. } | Term::Poly { .. } => {}
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Abs { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var { name, .. } => {
                out.insert(name.clone());
            }
            Term::Const { .. } | Term::Poly { .. } => {}
            Term::App(f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
            Term::Abs { var, body, .. } => {
                out.insert(var.clone());
                body.all_names(out);
            }
        }
    }

    /// Every constant name occurring in the term, with multiplicity.
    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn go(t: &Term, out: &mut Vec<String>) {
            match t {
                Term::Const { name, .. } | Term::Poly { name, .. } => out.push(name.clone()),
                Term::Var { .. } => {}
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Abs { body, .. } => go(body, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// True when no type variable remains anywhere in the term.
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var { ty, .. } | Term::Const { ty, .. } => ty.is_ground(),
            Term::Poly { schema, inst, .. } => Term::poly_type(schema, inst).is_ground(),
            Term::App(f, a) => f.is_ground() && a.is_ground(),
            Term::Abs { ty, body, .. } => ty.is_ground() && body.is_ground(),
        }
    }

    /// Apply `f` to every type annotation in the term.
    pub fn map_types(&self, f: &impl Fn(&SemType) -> SemType) -> Term {
        match self {
            Term::Var { name, ty } => Term::var(name.clone(), f(ty)),
            Term::Const { name, ty } => Term::constant(name.clone(), f(ty)),
            Term::Poly { name, schema, inst } => Term::Poly {
                name: name.clone(),
                schema: schema.clone(),
                inst: inst.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
            },
            Term::App(g, a) => Term::app(g.map_types(f), a.map_types(f)),
            Term::Abs { var, ty, body } => Term::abs(var.clone(), f(ty), body.map_types(f)),
        }
    }

    pub fn is_beta_normal(&self) -> bool {
        match self {
            Term::App(f, a) => !matches!(**f, Term::Abs { .. }) && f.is_beta_normal() && a.is_beta_normal(),
            Term::Abs { body, .. } => body.is_beta_normal(),
            _ => true,
        }
    }

    pub fn nameless(&self) -> Nameless {
        fn go(t: &Term, bound: &mut Vec<String>) -> Nameless {
            match t {
                Term::Var { name, ty } => match bound.iter().rev().position(|b| b == name) {
                    Some(i) => Nameless::Bound(i),
                    None => Nameless::Free(name.clone(), ty.clone()),
                },
                Term::Const { name, ty } => Nameless::Const(name.clone(), ty.clone()),
                Term::Poly { name, schema, inst } => {
                    Nameless::Poly(name.clone(), Term::poly_type(schema, inst))
                }
                Term::App(f, a) => Nameless::App(Box::new(go(f, bound)), Box::new(go(a, bound))),
                Term::Abs { var, ty, body } => {
                    bound.push(var.clone());
                    let b = go(body, bound);
                    bound.pop();
                    Nameless::Abs(ty.clone(), Box::new(b))
                }
            }
        }
        go(self, &mut Vec::new())
    }

    /// Rename bound variables to `x, y, z, x1, y1, z1, ...` in binder order,
    /// skipping names that occur free.
    pub fn canonical_names(&self) -> Term {
        let free = self.free_vars();
        let mut counter = 0usize;
        let mut next = || loop {
            let base = ["x", "y", "z"][counter % 3];
            let round = counter / 3;
            counter += 1;
            let name = if round == 0 {
                base.to_string()
            } else {
                format!("{base}{round}")
            };
            if !free.contains(&name) {
                return name;
            }
        };
        fn go(t: &Term, env: &mut Vec<(String, String)>, next: &mut dyn FnMut() -> String) -> Term {
            match t {
                Term::Var { name, ty } => {
                    let renamed = env
                        .iter()
                        .rev()
                        .find(|(old, _)| old == name)
                        .map(|(_, new)| new.clone())
                        .unwrap_or_else(|| name.clone());
                    Term::var(renamed, ty.clone())
                }
                Term::Const { .. } | Term::Poly { .. } => t.clone(),
                Term::App(f, a) => Term::app(go(f, env, next), go(a, env, next)),
                Term::Abs { var, ty, body } => {
                    let new = next();
                    env.push((var.clone(), new.clone()));
                    let b = go(body, env, next);
                    env.pop();
                    Term::abs(new, ty.clone(), b)
                }
            }
        }
        go(self, &mut Vec::new(), &mut next)
    }

    /// Compact rendering without type annotations.
    pub fn untyped(&self) -> String {
        let mut s = String::new();
        write_untyped(self, &mut s, false);
        s
    }
}

fn write_untyped(t: &Term, out: &mut String, wrap_abs: bool) {
    match t {
        Term::Var { name, .. } | Term::Const { name, .. } | Term::Poly { name, .. } => out.push_str(name),
        Term::App(..) => {
            let (head, args) = t.spine();
            out.push('(');
            write_untyped(head, out, true);
            for a in args {
                out.push(' ');
                write_untyped(a, out, true);
            }
            out.push(')');
        }
        Term::Abs { var, body, .. } => {
            if wrap_abs {
                out.push('(');
            }
            out.push('λ');
            out.push_str(var);
            out.push_str(". ");
            write_untyped(body, out, false);
            if wrap_abs {
                out.push(')');
            }
        }
    }
}

/// Serialization with explicit types on binders, constants and free
/// variables. Parsed back by [`crate::lambda::parse_term`].
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Term, bound: &mut Vec<String>, f: &mut fmt::Formatter<'_>, wrap_abs: bool) -> fmt::Result {
            match t {
                Term::Var { name, ty } => {
                    if bound.contains(name) {
                        write!(f, "{name}")
                    } else {
                        write!(f, "?{name}:{}", ty.annotation())
                    }
                }
                Term::Const { name, ty } => write!(f, "{name}:{}", ty.annotation()),
                Term::Poly { name, inst, .. } => {
                    write!(f, "{name}")?;
                    if !inst.is_empty() {
                        let parts: Vec<_> = inst.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        write!(f, "{{{}}}", parts.join(","))?;
                    }
                    Ok(())
                }
                Term::App(..) => {
                    let (head, args) = t.spine();
                    write!(f, "(")?;
                    go(head, bound, f, true)?;
                    for a in args {
                        write!(f, " ")?;
                        go(a, bound, f, true)?;
                    }
                    write!(f, ")")
                }
                Term::Abs { var, ty, body } => {
                    if wrap_abs {
                        write!(f, "(")?;
                    }
                    write!(f, "\\{var}:{}. ", ty.annotation())?;
                    bound.push(var.clone());
                    go(body, bound, f, false)?;
                    bound.pop();
                    if wrap_abs {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, &mut Vec::new(), f, false)
    }
}

/// Type of `term` when free variables are typed by `context` (falling back to
/// their own annotation is not allowed: a free variable missing from the
/// context is an error). Applications demand an exact domain match.
pub fn type_of(term: &Term, context: &HashMap<String, SemType>) -> Result<SemType, TypeError> {
    fn go(
        t: &Term,
        ctx: &HashMap<String, SemType>,
        scope: &mut Vec<(String, SemType)>,
        path: &mut Path,
    ) -> Result<SemType, TypeError> {
        match t {
            Term::Var { name, ty } => {
                let bound = scope
                    .iter()
                    .rev()
                    .find(|(n, _)| n == name)
                    .map(|(_, ty)| ty)
                    .or_else(|| ctx.get(name))
                    .ok_or_else(|| TypeError::UnboundVariable(name.clone()))?;
                if bound != ty {
                    return Err(TypeError::TypeMismatch {
                        path: path.clone(),
                        expected: bound.clone(),
                        found: ty.clone(),
                    });
                }
                Ok(ty.clone())
            }
            Term::Const { ty, .. } => Ok(ty.clone()),
            Term::Poly { schema, inst, .. } => Ok(Term::poly_type(schema, inst)),
            Term::App(f, a) => {
                path.push(Step::Fun);
                let tf = go(f, ctx, scope, path)?;
                path.pop();
                path.push(Step::Arg);
                let ta = go(a, ctx, scope, path)?;
                path.pop();
                match tf {
                    SemType::Arrow(dom, cod) => {
                        if *dom == ta {
                            Ok(*cod)
                        } else {
                            Err(TypeError::TypeMismatch {
                                path: path.clone(),
                                expected: *dom,
                                found: ta,
                            })
                        }
                    }
                    other => Err(TypeError::NotAFunction {
                        path: path.clone(),
                        found: other,
                    }),
                }
            }
            Term::Abs { var, ty, body } => {
                scope.push((var.clone(), ty.clone()));
                path.push(Step::Body);
                let tb = go(body, ctx, scope, path);
                path.pop();
                scope.pop();
                Ok(SemType::arrow(ty.clone(), tb?))
            }
        }
    }
    go(term, context, &mut Vec::new(), &mut Vec::new())
}

/// [`type_of`] with free variables typed by their own annotations.
pub fn infer(term: &Term) -> Result<SemType, TypeError> {
    let ctx: HashMap<_, _> = term.free_var_types().into_iter().collect();
    type_of(term, &ctx)
}

/// Type that ignores argument/domain disagreement: an application gets the
/// codomain of its function. Used on terms that may still contain sort
/// mismatches. Fails only when a non-function is applied.
pub fn lenient_type(term: &Term) -> Result<SemType, TypeError> {
    fn go(t: &Term, path: &mut Path) -> Result<SemType, TypeError> {
        match t {
            Term::Var { ty, .. } | Term::Const { ty, .. } => Ok(ty.clone()),
            Term::Poly { schema, inst, .. } => Ok(Term::poly_type(schema, inst)),
            Term::App(f, _) => {
                path.push(Step::Fun);
                let tf = go(f, path)?;
                path.pop();
                match tf {
                    SemType::Arrow(_, cod) => Ok(*cod),
                    other => Err(TypeError::NotAFunction {
                        path: path.clone(),
                        found: other,
                    }),
                }
            }
            Term::Abs { ty, body, .. } => {
                path.push(Step::Body);
                let tb = go(body, path)?;
                path.pop();
                Ok(SemType::arrow(ty.clone(), tb))
            }
        }
    }
    go(term, &mut Vec::new())
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Capture-avoiding substitution without any type check.
pub fn subst_unchecked(term: &Term, target: &str, replacement: &Term) -> Term {
    let repl_free = replacement.free_vars();
    subst_with(term, target, replacement, &repl_free)
}

fn subst_with(term: &Term, target: &str, replacement: &Term, repl_free: &BTreeSet<String>) -> Term {
    match term {
        Term::Var { name, .. } if name == target => replacement.clone(),
        Term::Var { .. } | Term::Const { .. } | Term::Poly { .. } => term.clone(),
        Term::App(f, a) => Term::app(
            subst_with(f, target, replacement, repl_free),
            subst_with(a, target, replacement, repl_free),
        ),
        Term::Abs { var, ty, body } => {
            if var == target {
                return term.clone();
            }
            let body_free = body.free_vars();
            if !body_free.contains(target) {
                return term.clone();
            }
            if repl_free.contains(var) {
                let mut avoid = repl_free.clone();
                body.all_names(&mut avoid);
                avoid.insert(target.to_string());
                let renamed = fresh_name(var, &avoid);
                let body = subst_with(body, var, &Term::var(renamed.clone(), ty.clone()), &BTreeSet::from([renamed.clone()]));
                Term::abs(renamed, ty.clone(), subst_with(&body, target, replacement, repl_free))
            } else {
                Term::abs(var.clone(), ty.clone(), subst_with(body, target, replacement, repl_free))
            }
        }
    }
}

/// Capture-avoiding substitution of `replacement` for the free variable
/// `target`. The replacement must have the target's annotated type.
pub fn substitute(term: &Term, target: &str, replacement: &Term) -> Result<Term, TypeError> {
    let Some(target_ty) = term.free_var_types().remove(target) else {
        return Ok(term.clone());
    };
    let repl_ty = infer(replacement)?;
    if repl_ty != target_ty {
        return Err(TypeError::TypeMismatch {
            path: Vec::new(),
            expected: target_ty,
            found: repl_ty,
        });
    }
    Ok(subst_unchecked(term, target, replacement))
}

fn beta(term: &Term) -> Term {
    match term {
        Term::App(f, a) => match beta(f) {
            Term::Abs { var, body, .. } => beta(&subst_unchecked(&body, &var, a)),
            f2 => Term::app(f2, beta(a)),
        },
        Term::Abs { var, ty, body } => Term::abs(var.clone(), ty.clone(), beta(body)),
        _ => term.clone(),
    }
}

/// Eta-expand a beta-normal term at `ty`.
fn eta_long(term: &Term, ty: &SemType, avoid: &mut BTreeSet<String>, counter: &mut usize) -> Term {
    match (term, ty) {
        (Term::Abs { var, ty: bty, body }, SemType::Arrow(_, cod)) => {
            Term::abs(var.clone(), bty.clone(), eta_long(body, cod, avoid, counter))
        }
        (_, SemType::Arrow(dom, cod)) => {
            let name = loop {
                *counter += 1;
                let n = format!("eta{counter}");
                if !avoid.contains(&n) {
                    break n;
                }
            };
            avoid.insert(name.clone());
            let applied = Term::app(term.clone(), Term::var(name.clone(), (**dom).clone()));
            Term::abs(name, (**dom).clone(), eta_long(&applied, cod, avoid, counter))
        }
        _ => {
            // Neutral term at atomic type: expand the arguments.
            let (head, args) = term.spine();
            let head_ty = match head {
                Term::Var { ty, .. } | Term::Const { ty, .. } => ty.clone(),
                Term::Poly { schema, inst, .. } => Term::poly_type(schema, inst),
                _ => return term.clone(),
            };
            let (doms, _) = head_ty.uncurry();
            let doms: Vec<SemType> = doms.into_iter().cloned().collect();
            let mut out = head.clone();
            for (i, a) in args.into_iter().enumerate() {
                let a2 = match doms.get(i) {
                    Some(d) => eta_long(a, d, avoid, counter),
                    None => a.clone(),
                };
                out = Term::app(out, a2);
            }
            out
        }
    }
}

/// Normal-order beta normalization; with [`NormalForm::BetaEtaLong`] the
/// result is additionally eta-expanded at every function-typed position.
pub fn normalize(term: &Term, mode: NormalForm) -> Term {
    let b = beta(term);
    match mode {
        NormalForm::Beta => b,
        NormalForm::BetaEtaLong => match lenient_type(&b) {
            Ok(ty) => {
                let mut avoid = BTreeSet::new();
                b.all_names(&mut avoid);
                let mut counter = 0;
                eta_long(&b, &ty, &mut avoid, &mut counter)
            }
            Err(_) => b,
        },
    }
}

pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a.nameless() == b.nameless()
}

/// Canonical key for equivalence of readings: nameless eta-long beta-normal form.
pub fn equivalence_key(term: &Term) -> Nameless {
    normalize(term, NormalForm::BetaEtaLong).nameless()
}

/// Classify by how often each binder's variable occurs in its scope.
pub fn classify_occurrences(term: &Term) -> OccurrenceClass {
    let mut vacuous = false;
    let mut duplicated = false;
    fn count(t: &Term, name: &str) -> usize {
        match t {
            Term::Var { name: n, .. } => usize::from(n == name),
            Term::Const { .. } | Term::Poly { .. } => 0,
            Term::App(f, a) => count(f, name) + count(a, name),
            Term::Abs { var, body, .. } => {
                if var == name {
                    0
                } else {
                    count(body, name)
                }
            }
        }
    }
    fn walk(t: &Term, vacuous: &mut bool, duplicated: &mut bool) {
        match t {
            Term::App(f, a) => {
                walk(f, vacuous, duplicated);
                walk(a, vacuous, duplicated);
            }
            Term::Abs { var, body, .. } => {
                match count(body, var) {
                    0 => *vacuous = true,
                    1 => {}
                    _ => *duplicated = true,
                }
                walk(body, vacuous, duplicated);
            }
            _ => {}
        }
    }
    walk(term, &mut vacuous, &mut duplicated);
    OccurrenceClass::from_flags(vacuous, duplicated)
}
