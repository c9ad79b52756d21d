use std::collections::BTreeMap;

use super::ty::SemType;

/// First-order unification over type variables, used only to instantiate
/// polymorphic lexical material and hypothesis types during composition.
#[derive(Clone, Debug, Default)]
pub struct Unifier {
    bindings: BTreeMap<String, SemType>,
    fresh: usize,
}

/// The pair of subterms on which unification failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clash {
    pub left: SemType,
    pub right: SemType,
}

impl Unifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, hint: &str) -> SemType {
        self.fresh += 1;
        SemType::Var(format!("{hint}#{}", self.fresh))
    }

    pub fn next_index(&mut self) -> usize {
        self.fresh += 1;
        self.fresh
    }

    pub fn resolve(&self, ty: &SemType) -> SemType {
        match ty {
            SemType::Var(v) => match self.bindings.get(v) {
                Some(bound) => self.resolve(bound),
                None => ty.clone(),
            },
            SemType::Sort(_) => ty.clone(),
            SemType::Arrow(a, b) => SemType::arrow(self.resolve(a), self.resolve(b)),
        }
    }

    fn occurs(&self, var: &str, ty: &SemType) -> bool {
        match self.resolve(ty) {
            SemType::Var(v) => v == var,
            SemType::Sort(_) => false,
            SemType::Arrow(a, b) => self.occurs(var, &a) || self.occurs(var, &b),
        }
    }

    /// Unify `a` and `b`. Either all bindings are committed or none.
    pub fn unify(&mut self, a: &SemType, b: &SemType) -> Result<(), Clash> {
        let saved = self.bindings.clone();
        let r = self.unify_inner(a, b);
        if r.is_err() {
            self.bindings = saved;
        }
        r
    }

    fn unify_inner(&mut self, a: &SemType, b: &SemType) -> Result<(), Clash> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (SemType::Var(x), SemType::Var(y)) if x == y => Ok(()),
            (SemType::Var(x), other) | (other, SemType::Var(x)) => {
                if self.occurs(x, other) {
                    return Err(Clash { left: a.clone(), right: b.clone() });
                }
                self.bindings.insert(x.clone(), other.clone());
                Ok(())
            }
            (SemType::Sort(x), SemType::Sort(y)) if x == y => Ok(()),
            (SemType::Arrow(a1, b1), SemType::Arrow(a2, b2)) => {
                self.unify_inner(a1, a2)?;
                self.unify_inner(b1, b2)
            }
            _ => Err(Clash { left: a.clone(), right: b.clone() }),
        }
    }

    /// Resolve and replace any remaining variable by `default`.
    pub fn ground(&self, ty: &SemType, default: &SemType) -> SemType {
        match self.resolve(ty) {
            SemType::Var(_) => default.clone(),
            SemType::Sort(s) => SemType::Sort(s),
            SemType::Arrow(a, b) => SemType::arrow(self.ground(&a, default), self.ground(&b, default)),
        }
    }
}
