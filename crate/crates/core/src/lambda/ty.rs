use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Name of the entity sort. Every other non-`t` sort refines it.
pub const ENTITY: &str = "e";
/// Name of the proposition type.
pub const PROP: &str = "t";

/// Semantic types: sort atoms (including `e` and `t`), arrows and type
/// variables. Type variables only occur in polymorphic signatures and in
/// lexical terms before they are instantiated by composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    Sort(String),
    Arrow(Box<SemType>, Box<SemType>),
    Var(String),
}

impl SemType {
    pub fn sort(name: impl Into<String>) -> Self {
        SemType::Sort(name.into())
    }

    pub fn e() -> Self {
        SemType::sort(ENTITY)
    }

    pub fn t() -> Self {
        SemType::sort(PROP)
    }

    pub fn var(name: impl Into<String>) -> Self {
        SemType::Var(name.into())
    }

    pub fn arrow(from: SemType, to: SemType) -> Self {
        SemType::Arrow(Box::new(from), Box::new(to))
    }

    /// Right-nested arrow `a1 -> a2 -> ... -> result`.
    pub fn arrows(args: impl IntoIterator<Item = SemType>, result: SemType) -> Self {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| SemType::arrow(arg, acc))
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, SemType::Sort(s) if s == PROP)
    }

    /// A sort atom other than `t`.
    pub fn is_entity_sort(&self) -> bool {
        matches!(self, SemType::Sort(s) if s != PROP)
    }

    pub fn as_arrow(&self) -> Option<(&SemType, &SemType)> {
        match self {
            SemType::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Argument types and final result of a curried function type.
    pub fn uncurry(&self) -> (Vec<&SemType>, &SemType) {
        let mut args = Vec::new();
        let mut cur = self;
        while let SemType::Arrow(a, b) = cur {
            args.push(a.as_ref());
            cur = b;
        }
        (args, cur)
    }

    /// Collapse every sort except `t` (and every type variable) to `e`.
    pub fn erase(&self) -> SemType {
        match self {
            SemType::Sort(s) if s == PROP => SemType::t(),
            SemType::Sort(_) | SemType::Var(_) => SemType::e(),
            SemType::Arrow(a, b) => SemType::arrow(a.erase(), b.erase()),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            SemType::Sort(_) => true,
            SemType::Var(_) => false,
            SemType::Arrow(a, b) => a.is_ground() && b.is_ground(),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            SemType::Sort(_) => {}
            SemType::Var(v) => {
                out.insert(v.clone());
            }
            SemType::Arrow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn sorts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_sorts(&mut out);
        out
    }

    fn collect_sorts(&self, out: &mut BTreeSet<String>) {
        match self {
            SemType::Sort(s) => {
                out.insert(s.clone());
            }
            SemType::Var(_) => {}
            SemType::Arrow(a, b) => {
                a.collect_sorts(out);
                b.collect_sorts(out);
            }
        }
    }

    /// Replace type variables according to `map`; unmapped variables stay.
    pub fn subst(&self, map: &BTreeMap<String, SemType>) -> SemType {
        match self {
            SemType::Sort(_) => self.clone(),
            SemType::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            SemType::Arrow(a, b) => SemType::arrow(a.subst(map), b.subst(map)),
        }
    }

    pub fn rename_vars(&self, f: &impl Fn(&str) -> String) -> SemType {
        match self {
            SemType::Sort(_) => self.clone(),
            SemType::Var(v) => SemType::Var(f(v)),
            SemType::Arrow(a, b) => SemType::arrow(a.rename_vars(f), b.rename_vars(f)),
        }
    }

    /// Rendering used inside term annotations: arrows get parentheses.
    pub fn annotation(&self) -> String {
        match self {
            SemType::Arrow(..) => format!("({self})"),
            _ => self.to_string(),
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Sort(s) => write!(f, "{s}"),
            SemType::Var(v) => write!(f, "'{v}"),
            SemType::Arrow(a, b) => match a.as_ref() {
                SemType::Arrow(..) => write!(f, "({a})->{b}"),
                _ => write!(f, "{a}->{b}"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_nests_to_the_right() {
        let et = SemType::arrow(SemType::e(), SemType::t());
        let gq = SemType::arrows([et.clone(), et.clone()], SemType::t());
        assert_eq!(gq.to_string(), "(e->t)->(e->t)->t");
        assert_eq!(et.annotation(), "(e->t)");
    }

    #[test]
    fn erase_maps_sorts_and_vars_to_entity() {
        let ty = SemType::arrows([SemType::sort("dog"), SemType::var("a")], SemType::t());
        assert_eq!(ty.erase(), SemType::arrows([SemType::e(), SemType::e()], SemType::t()));
        assert!(!ty.is_ground());
        assert_eq!(ty.vars().into_iter().collect::<Vec<_>>(), vec!["a".to_string()]);
    }
}
