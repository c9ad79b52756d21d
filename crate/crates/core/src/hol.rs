//! Higher-order logic formulas read off normal terms of type `t`.

use std::collections::BTreeSet;

use serde_json::{json, Value};
use thiserror::Error;

use crate::lambda::{connective_type, infer, is_quantifier, SemType, Term, TypeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
}

impl Connective {
    fn precedence(self) -> u8 {
        match self {
            Connective::Implies => 1,
            Connective::Or => 2,
            Connective::And => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Implies => "implies",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Quant {
        kind: Quantifier,
        var: String,
        sort: SemType,
        body: Box<Formula>,
    },
    Conn {
        kind: Connective,
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Not(Box<Formula>),
    /// `args` are in display order.
    Pred {
        name: String,
        ty: SemType,
        args: Vec<FTerm>,
    },
}

/// Arguments of predicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FTerm {
    Var {
        name: String,
        ty: SemType,
    },
    Const {
        name: String,
        ty: SemType,
    },
    Coerce {
        name: String,
        ty: SemType,
        arg: Box<FTerm>,
    },
    /// Non-logical function constant applied to arguments (display order).
    Apply {
        name: String,
        ty: SemType,
        args: Vec<FTerm>,
    },
    Abs {
        var: String,
        ty: SemType,
        body: Box<FTerm>,
    },
    Prop(Box<Formula>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HolError {
    #[error("term has type {0}, not t")]
    NotAProposition(SemType),
    #[error("no logical reading for head of `{0}`")]
    NonLogicalHead(String),
    #[error(transparent)]
    IllTyped(#[from] TypeError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HolOptions {
    /// Constants rendered as coercion function symbols.
    pub coercions: BTreeSet<String>,
    /// Keep application order for predicate arguments.
    pub preserve_order: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Unicode,
    Ascii,
    Structured,
}

/// Canonical bound-variable names: `x`, `z`, then `x1`, `x2`, ...
pub fn canonical_var(index: usize) -> String {
    match index {
        0 => "x".to_string(),
        1 => "z".to_string(),
        n => format!("x{}", n - 1),
    }
}

struct Converter<'a> {
    opts: &'a HolOptions,
    scope: Vec<(String, String)>,
    next: usize,
    avoid: BTreeSet<String>,
}

impl Converter<'_> {
    fn bind(&mut self, var: &str) -> String {
        let name = loop {
            let n = canonical_var(self.next);
            self.next += 1;
            if !self.avoid.contains(&n) {
                break n;
            }
        };
        self.scope.push((var.to_string(), name.clone()));
        name
    }

    fn lookup(&self, var: &str) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(v, _)| v == var)
            .map_or_else(|| var.to_string(), |(_, n)| n.clone())
    }

    fn binder(&mut self, arg: &Term) -> Result<(String, SemType, Term), HolError> {
        match arg {
            Term::Abs { var, ty, body } => Ok((var.clone(), ty.clone(), (**body).clone())),
            other => {
                // Eta-expand a quantifier argument that is not an abstraction.
                let ty = crate::lambda::lenient_type(other)?;
                let dom = ty.as_arrow().map(|(d, _)| d.clone()).ok_or_else(|| HolError::NonLogicalHead(other.untyped()))?;
                let v = "%q".to_string();
                Ok((v.clone(), dom.clone(), Term::app(other.clone(), Term::var(v, dom))))
            }
        }
    }

    fn formula(&mut self, t: &Term) -> Result<Formula, HolError> {
        let (head, args) = t.spine();
        let name = match head {
            Term::Const { name, .. } | Term::Poly { name, .. } => name.as_str(),
            _ => return Err(HolError::NonLogicalHead(t.untyped())),
        };
        if is_quantifier(name) && args.len() == 1 {
            let (var, sort, body) = self.binder(args[0])?;
            let fresh = self.bind(&var);
            let body = self.formula(&body);
            self.scope.pop();
            let kind = if name == "forall" {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            return Ok(Formula::Quant {
                kind,
                var: fresh,
                sort,
                body: Box::new(body?),
            });
        }
        if connective_type(name).is_some() && matches!(head, Term::Const { .. }) {
            let kind = match (name, args.len()) {
                ("and", 2) => Connective::And,
                ("or", 2) => Connective::Or,
                ("implies", 2) => Connective::Implies,
                ("not", 1) => return Ok(Formula::Not(Box::new(self.formula(args[0])?))),
                _ => return Err(HolError::NonLogicalHead(t.untyped())),
            };
            return Ok(Formula::Conn {
                kind,
                left: Box::new(self.formula(args[0])?),
                right: Box::new(self.formula(args[1])?),
            });
        }
        let ty = crate::lambda::lenient_type(head)?;
        let mut out = args.iter().map(|a| self.fterm(a)).collect::<Result<Vec<_>, _>>()?;
        if !self.opts.preserve_order {
            out.reverse();
        }
        Ok(Formula::Pred {
            name: name.to_string(),
            ty,
            args: out,
        })
    }

    fn fterm(&mut self, t: &Term) -> Result<FTerm, HolError> {
        let ty = crate::lambda::lenient_type(t)?;
        if ty.is_prop() {
            return Ok(FTerm::Prop(Box::new(self.formula(t)?)));
        }
        match t {
            Term::Var { name, ty } => Ok(FTerm::Var {
                name: self.lookup(name),
                ty: ty.clone(),
            }),
            Term::Const { name, ty } => Ok(FTerm::Const {
                name: name.clone(),
                ty: ty.clone(),
            }),
            Term::Poly { name, schema, inst } => Ok(FTerm::Const {
                name: name.clone(),
                ty: Term::poly_type(schema, inst),
            }),
            Term::Abs { var, ty, body } => {
                let fresh = self.bind(var);
                let body = self.fterm(body);
                self.scope.pop();
                Ok(FTerm::Abs {
                    var: fresh,
                    ty: ty.clone(),
                    body: Box::new(body?),
                })
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                let (name, hty) = match head {
                    Term::Const { name, ty } => (name.clone(), ty.clone()),
                    Term::Poly { name, schema, inst } => (name.clone(), Term::poly_type(schema, inst)),
                    _ => return Err(HolError::NonLogicalHead(t.untyped())),
                };
                if self.opts.coercions.contains(&name) && args.len() == 1 {
                    return Ok(FTerm::Coerce {
                        name,
                        ty: hty,
                        arg: Box::new(self.fterm(args[0])?),
                    });
                }
                let mut out = args.iter().map(|a| self.fterm(a)).collect::<Result<Vec<_>, _>>()?;
                if !self.opts.preserve_order {
                    out.reverse();
                }
                Ok(FTerm::Apply { name, ty: hty, args: out })
            }
        }
    }
}

/// Read a formula off a beta-normal term of type `t`. Free variables keep
/// their names; bound variables are renamed canonically in binder order.
pub fn to_formula(term: &Term, opts: &HolOptions) -> Result<Formula, HolError> {
    let ty = infer(term)?;
    if !ty.is_prop() {
        return Err(HolError::NotAProposition(ty));
    }
    let mut conv = Converter {
        opts,
        scope: Vec::new(),
        next: 0,
        avoid: term.free_vars(),
    };
    conv.formula(term)
}

pub fn free_vars(formula: &Formula) -> BTreeSet<String> {
    fn f(phi: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match phi {
            Formula::Quant { var, body, .. } => {
                bound.push(var.clone());
                f(body, bound, out);
                bound.pop();
            }
            Formula::Conn { left, right, .. } => {
                f(left, bound, out);
                f(right, bound, out);
            }
            Formula::Not(inner) => f(inner, bound, out),
            Formula::Pred { args, .. } => args.iter().for_each(|a| g(a, bound, out)),
        }
    }
    fn g(a: &FTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match a {
            FTerm::Var { name, .. } => {
                if !bound.contains(name) {
                    out.insert(name.clone());
                }
            }
            FTerm::Const { .. } => {}
            FTerm::Coerce { arg, .. } => g(arg, bound, out),
            FTerm::Apply { args, .. } => args.iter().for_each(|a| g(a, bound, out)),
            FTerm::Abs { var, body, .. } => {
                bound.push(var.clone());
                g(body, bound, out);
                bound.pop();
            }
            FTerm::Prop(phi) => f(phi, bound, out),
        }
    }
    let mut out = BTreeSet::new();
    f(formula, &mut Vec::new(), &mut out);
    out
}

struct Symbols {
    forall: &'static str,
    exists: &'static str,
    and: &'static str,
    or: &'static str,
    implies: &'static str,
    not: &'static str,
    lambda: &'static str,
}

const UNICODE: Symbols = Symbols {
    forall: "∀",
    exists: "∃",
    and: " ∧ ",
    or: " ∨ ",
    implies: " ⇒ ",
    not: "¬",
    lambda: "λ",
};

const ASCII: Symbols = Symbols {
    forall: "forall ",
    exists: "exists ",
    and: " & ",
    or: " | ",
    implies: " -> ",
    not: "~",
    lambda: "\\",
};

/// `open_right`: nothing follows this subformula inside the current
/// parenthesis group, so a quantifier may extend to its end.
fn text(phi: &Formula, sym: &Symbols, prec: u8, open_right: bool) -> String {
    match phi {
        Formula::Quant { kind, var, body, .. } => {
            let q = match kind {
                Quantifier::Forall => sym.forall,
                Quantifier::Exists => sym.exists,
            };
            let s = format!("{q}{var}. {}", text(body, sym, 0, true));
            if open_right {
                s
            } else {
                format!("({s})")
            }
        }
        Formula::Conn { kind, left, right } => {
            let p = kind.precedence();
            let wrap = p < prec;
            let op = match kind {
                Connective::And => sym.and,
                Connective::Or => sym.or,
                Connective::Implies => sym.implies,
            };
            let s = format!(
                "{}{op}{}",
                text(left, sym, p + 1, false),
                text(right, sym, p, wrap || open_right)
            );
            if wrap {
                format!("({s})")
            } else {
                s
            }
        }
        Formula::Not(inner) => format!("{}{}", sym.not, text(inner, sym, 4, open_right)),
        Formula::Pred { name, args, .. } => {
            if args.is_empty() {
                name.clone()
            } else {
                format!("{name}({})", term_list(args, sym))
            }
        }
    }
}

fn term_list(args: &[FTerm], sym: &Symbols) -> String {
    args.iter().map(|a| term_text(a, sym)).collect::<Vec<_>>().join(",")
}

fn term_text(a: &FTerm, sym: &Symbols) -> String {
    match a {
        FTerm::Var { name, .. } | FTerm::Const { name, .. } => name.clone(),
        FTerm::Coerce { name, arg, .. } => format!("{name}({})", term_text(arg, sym)),
        FTerm::Apply { name, args, .. } => format!("{name}({})", term_list(args, sym)),
        FTerm::Abs { var, body, .. } => format!("{}{var}. {}", sym.lambda, term_text(body, sym)),
        FTerm::Prop(phi) => text(phi, sym, 0, true),
    }
}

fn tree(phi: &Formula) -> Value {
    match phi {
        Formula::Quant { kind, var, sort, body } => json!({
            "kind": "quant",
            "quantifier": match kind { Quantifier::Forall => "forall", Quantifier::Exists => "exists" },
            "var": var,
            "sort": sort.to_string(),
            "body": tree(body),
        }),
        Formula::Conn { kind, left, right } => json!({
            "kind": "conn",
            "connective": kind.name(),
            "left": tree(left),
            "right": tree(right),
        }),
        Formula::Not(inner) => json!({"kind": "conn", "connective": "not", "operand": tree(inner)}),
        Formula::Pred { name, ty, args } => json!({
            "kind": "pred",
            "name": name,
            "type": ty.to_string(),
            "args": args.iter().map(term_tree).collect::<Vec<_>>(),
        }),
    }
}

fn term_tree(a: &FTerm) -> Value {
    match a {
        FTerm::Var { name, ty } => json!({"kind": "var", "name": name, "type": ty.to_string()}),
        FTerm::Const { name, ty } => json!({"kind": "const", "name": name, "type": ty.to_string()}),
        FTerm::Coerce { name, ty, arg } => {
            let (src, tgt) = ty.as_arrow().map_or((String::new(), String::new()), |(s, t)| (s.to_string(), t.to_string()));
            json!({"kind": "coerce", "name": name, "source": src, "target": tgt, "arg": term_tree(arg)})
        }
        FTerm::Apply { name, ty, args } => json!({
            "kind": "const",
            "name": name,
            "type": ty.to_string(),
            "args": args.iter().map(term_tree).collect::<Vec<_>>(),
        }),
        FTerm::Abs { var, ty, body } => json!({"kind": "lambda", "var": var, "type": ty.to_string(), "body": term_tree(body)}),
        FTerm::Prop(phi) => tree(phi),
    }
}

/// Machine-readable tree for a formula.
pub fn structured(formula: &Formula) -> Value {
    tree(formula)
}

pub fn render(formula: &Formula, style: Style) -> String {
    match style {
        Style::Unicode => text(formula, &UNICODE, 0, true),
        Style::Ascii => text(formula, &ASCII, 0, true),
        Style::Structured => tree(formula).to_string(),
    }
}

/// Back-translation to a term; inverse of [`to_formula`] on eta-long input.
pub fn to_term(formula: &Formula, opts: &HolOptions) -> Term {
    let args_back = |args: &[FTerm]| {
        let mut v: Vec<Term> = args.iter().map(|a| fterm_to_term(a, opts)).collect();
        if !opts.preserve_order {
            v.reverse();
        }
        v
    };
    match formula {
        Formula::Quant { kind, var, sort, body } => {
            let name = match kind {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
            };
            let qty = SemType::arrow(SemType::arrow(sort.clone(), SemType::t()), SemType::t());
            Term::app(
                Term::constant(name, qty),
                Term::abs(var.clone(), sort.clone(), to_term(body, opts)),
            )
        }
        Formula::Conn { kind, left, right } => Term::apps(
            Term::constant(kind.name(), connective_type(kind.name()).expect("built-in connective")),
            [to_term(left, opts), to_term(right, opts)],
        ),
        Formula::Not(inner) => Term::app(
            Term::constant("not", connective_type("not").expect("built-in connective")),
            to_term(inner, opts),
        ),
        Formula::Pred { name, ty, args } => Term::apps(Term::constant(name.clone(), ty.clone()), args_back(args)),
    }
}

fn fterm_to_term(a: &FTerm, opts: &HolOptions) -> Term {
    match a {
        FTerm::Var { name, ty } => Term::var(name.clone(), ty.clone()),
        FTerm::Const { name, ty } => Term::constant(name.clone(), ty.clone()),
        FTerm::Coerce { name, ty, arg } => Term::app(Term::constant(name.clone(), ty.clone()), fterm_to_term(arg, opts)),
        FTerm::Apply { name, ty, args } => {
            let mut v: Vec<Term> = args.iter().map(|x| fterm_to_term(x, opts)).collect();
            if !opts.preserve_order {
                v.reverse();
            }
            Term::apps(Term::constant(name.clone(), ty.clone()), v)
        }
        FTerm::Abs { var, ty, body } => Term::abs(var.clone(), ty.clone(), fterm_to_term(body, opts)),
        FTerm::Prop(phi) => to_term(phi, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{alpha_eq, normalize, parse_term, NormalForm, Signature};

    fn sig() -> Signature {
        Signature::new(["dog", "human"])
    }

    fn term(s: &str) -> Term {
        parse_term(s, &sig(), Some(&SemType::t())).unwrap()
    }

    const READING: &str = "(exists (\\a:e. (and (cartoon a) (forall (\\b:e. (implies (kid b) ((watched a) b)))))))";

    #[test]
    fn renders_the_wide_scope_reading() {
        let phi = to_formula(&term(READING), &HolOptions::default()).unwrap();
        assert_eq!(render(&phi, Style::Unicode), "∃x. cartoon(x) ∧ ∀z. kid(z) ⇒ watched(z,x)");
        assert_eq!(render(&phi, Style::Ascii), "exists x. cartoon(x) & forall z. kid(z) -> watched(z,x)");
        assert!(free_vars(&phi).is_empty());
    }

    #[test]
    fn preserve_order_flag() {
        let opts = HolOptions {
            preserve_order: true,
            ..Default::default()
        };
        let phi = to_formula(&term(READING), &opts).unwrap();
        assert!(render(&phi, Style::Unicode).ends_with("watched(x,z)"));
    }

    #[test]
    fn nullary_and_errors() {
        let rain = to_formula(&term("rain"), &HolOptions::default()).unwrap();
        assert_eq!(render(&rain, Style::Unicode), "rain");
        assert_eq!(render(&rain, Style::Ascii), "rain");
        let e = parse_term("j:e", &sig(), None).unwrap();
        assert_eq!(to_formula(&e, &HolOptions::default()), Err(HolError::NotAProposition(SemType::e())));
        let redex = parse_term("((\\a:e. (kid:(e->t) a)) j:e)", &sig(), None).unwrap();
        assert!(matches!(to_formula(&redex, &HolOptions::default()), Err(HolError::NonLogicalHead(_))));
    }

    #[test]
    fn parenthesization() {
        let opts = HolOptions::default();
        let cases = [
            ("(and (or p q) r)", "(p ∨ q) ∧ r"),
            ("(or p (and q r))", "p ∨ q ∧ r"),
            ("(implies (implies p q) r)", "(p ⇒ q) ⇒ r"),
            ("(implies p (implies q r))", "p ⇒ q ⇒ r"),
            ("(and (forall (\\a:e. (kid a))) p)", "(∀x. kid(x)) ∧ p"),
            ("(implies (and p (forall (\\a:e. (kid a)))) q)", "p ∧ (∀x. kid(x)) ⇒ q"),
            ("(and (not p) q)", "¬p ∧ q"),
        ];
        for (src, want) in cases {
            let phi = to_formula(&term(src), &opts).unwrap();
            assert_eq!(render(&phi, Style::Unicode), want, "{src}");
        }
    }

    #[test]
    fn coercions_and_lambdas_in_arguments() {
        let opts = HolOptions {
            coercions: BTreeSet::from(["as_dog".to_string()]),
            ..Default::default()
        };
        let src = "(bark:(dog->t) (as_dog:(human->dog) (the:((human->t)->human) (\\a:human. (sergeant:(human->t) a)))))";
        let phi = to_formula(&term(src), &opts).unwrap();
        assert_eq!(render(&phi, Style::Unicode), "bark(as_dog(the(λx. sergeant(x))))");
        let tree: Value = serde_json::from_str(&render(&phi, Style::Structured)).unwrap();
        assert_eq!(tree["kind"], "pred");
        assert_eq!(tree["args"][0]["kind"], "coerce");
        assert_eq!(tree["args"][0]["source"], "human");
        assert_eq!(tree["args"][0]["arg"]["kind"], "const");
        assert_eq!(tree["args"][0]["arg"]["args"][0]["kind"], "lambda");
    }

    #[test]
    fn back_translation_inverts_on_eta_long_terms() {
        let opts = HolOptions::default();
        for src in [READING, "(forall (\\a:e. (implies (kid a) (exists (\\b:e. (and (cartoon b) ((watched b) a)))))))", "rain"] {
            let long = normalize(&term(src), NormalForm::BetaEtaLong);
            let back = to_term(&to_formula(&long, &opts).unwrap(), &opts);
            assert!(alpha_eq(&back, &long), "{src}");
        }
    }

    #[test]
    fn open_formula_free_variables() {
        let t = parse_term("(kid:(e->t) ?x:e)", &sig(), None).unwrap();
        let phi = to_formula(&t, &HolOptions::default()).unwrap();
        assert_eq!(free_vars(&phi), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn canonical_names_skip_free_variables() {
        let t = parse_term("(forall:((e->t)->t) (\\a:e. ((see:(e->e->t) a) ?x:e)))", &sig(), None).unwrap();
        let phi = to_formula(&t, &HolOptions::default()).unwrap();
        assert_eq!(render(&phi, Style::Unicode), "∀z. see(x,z)");
        assert_eq!(canonical_var(2), "x1");
    }
}
