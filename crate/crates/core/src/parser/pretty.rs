//! Pretty printer. Output re-parses to a structurally identical tree:
//! `parse(pretty(x)) == x` for every term, declaration and program.

use crate::syntax::{
    ClassDecl, Decl, InterfaceDecl, Lambda, MethodDecl, Param, SourceProgram, Term, TermKind,
};
use std::fmt;

/// Render any printable syntax value to its canonical source form.
pub fn pretty<T: fmt::Display + ?Sized>(x: &T) -> String {
    x.to_string()
}

/// How tightly the surrounding context binds. Operands of a cast must be
/// at least unary; receivers of `.` must be postfix.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Term,
    Unary,
    Postfix,
}

fn needs_parens(t: &Term, level: Level) -> bool {
    match &t.kind {
        TermKind::PureLambda(_) | TermKind::Cond(..) => level > Level::Term,
        TermKind::Cast(..) => level > Level::Unary,
        _ => false,
    }
}

fn fmt_at(f: &mut fmt::Formatter<'_>, t: &Term, level: Level) -> fmt::Result {
    if needs_parens(t, level) {
        write!(f, "(")?;
        fmt_at(f, t, Level::Term)?;
        return write!(f, ")");
    }
    match &t.kind {
        TermKind::Var(x) => write!(f, "{x}"),
        TermKind::FieldAccess(recv, name) => {
            fmt_at(f, recv, Level::Postfix)?;
            write!(f, ".{name}")
        }
        TermKind::Invoke(recv, name, args) => {
            fmt_at(f, recv, Level::Postfix)?;
            write!(f, ".{name}(")?;
            fmt_args(f, args)?;
            write!(f, ")")
        }
        TermKind::New(class, args) => {
            write!(f, "new {class}(")?;
            fmt_args(f, args)?;
            write!(f, ")")
        }
        TermKind::Cast(ty, subject) => {
            write!(f, "({ty}) ")?;
            fmt_at(f, subject, Level::Unary)
        }
        TermKind::PureLambda(l) => fmt_lambda(f, l),
        TermKind::DecoratedLambda(l, target) => {
            write!(f, "[")?;
            fmt_lambda(f, l)?;
            write!(f, " : {target}]")
        }
        TermKind::Cond(guard, then, otherwise) => {
            fmt_at(f, guard, Level::Unary)?;
            write!(f, " ? ")?;
            fmt_at(f, then, Level::Term)?;
            write!(f, " : ")?;
            fmt_at(f, otherwise, Level::Term)
        }
        TermKind::BoolLit(b) => write!(f, "{b}"),
    }
}

fn fmt_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        fmt_at(f, a, Level::Term)?;
    }
    Ok(())
}

fn fmt_lambda(f: &mut fmt::Formatter<'_>, l: &Lambda) -> fmt::Result {
    write!(f, "(")?;
    for (i, p) in l.params.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        match p {
            Param { name, declared_type: Some(ty) } => write!(f, "{ty} {name}")?,
            Param { name, declared_type: None } => write!(f, "{name}")?,
        }
    }
    write!(f, ") -> ")?;
    fmt_at(f, &l.body, Level::Term)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_at(f, self, Level::Term)
    }
}

impl fmt::Display for MethodDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{ return {}; }}", self.header, self.body)
    }
}

impl fmt::Display for ClassDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class {} extends {}", self.name, self.superclass)?;
        if !self.interfaces.is_empty() {
            write!(f, " implements ")?;
            for (i, n) in self.interfaces.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{n}")?;
            }
        }
        writeln!(f, " {{")?;
        for (ty, name) in &self.fields {
            writeln!(f, "  {ty} {name};")?;
        }
        write!(f, "  {}(", self.ctor.name)?;
        for (i, (ty, name)) in self.ctor.params.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{ty} {name}")?;
        }
        write!(f, ") {{ super(")?;
        for (i, a) in self.ctor.super_args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ");")?;
        for init in &self.ctor.inits {
            write!(f, " this.{init} = {init};")?;
        }
        writeln!(f, " }}")?;
        for m in &self.methods {
            writeln!(f, "  {m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for InterfaceDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "interface {}", self.name)?;
        if !self.extends.is_empty() {
            write!(f, " extends ")?;
            for (i, n) in self.extends.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{n}")?;
            }
        }
        if self.headers.is_empty() && self.defaults.is_empty() {
            return write!(f, " {{ }}");
        }
        writeln!(f, " {{")?;
        for h in &self.headers {
            writeln!(f, "  {h};")?;
        }
        for m in &self.defaults {
            writeln!(f, "  {m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Class(c) => c.fmt(f),
            Decl::Interface(i) => i.fmt(f),
        }
    }
}

impl fmt::Display for SourceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        if let Some(main) = &self.main {
            writeln!(f, "main = {main};")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, parse_term};
    use crate::syntax::{Name, PreType};

    #[test]
    fn pretty_forms_from_construction() {
        let lam = Term::lambda(vec![], Term::new_object("C", vec![]));
        assert_eq!(pretty(&lam), "() -> new C()");
        let ty = PreType::intersection(vec![Name::new("C"), Name::new("I1"), Name::new("I2")]);
        assert_eq!(pretty(&ty), "C & I1 & I2");
        let dec = Term::decorated(vec![], Term::new_object("C", vec![]), PreType::nominal("I"));
        assert_eq!(pretty(&dec), "[() -> new C() : I]");
    }

    #[test]
    fn round_trip_on_tricky_terms() {
        for src in [
            "new C().m(() -> new C())",
            "(I & E) (() -> new C())",
            "true ? () -> new C() : new B()",
            "(C) (I) x",
            "((C) x).f",
            "[(I x, J y) -> x.n(y) : I & E]",
            "a ? b : c ? d : e",
            "(b ? x : y).f",
            "new C(x.f, (D) y, true).m()",
            "(x) -> (y) -> x.m(y)",
        ] {
            let t = parse_term(src).unwrap();
            let printed = pretty(&t);
            let back = parse_term(&printed).unwrap();
            assert_eq!(t, back, "round trip failed: {src} -> {printed}");
        }
    }

    #[test]
    fn program_round_trip_is_stable() {
        let src = "class C extends Object { C() { super(); } C m(I x) { return x.n(); } }\n\
                   interface I { C n(); }\n\
                   interface J { default C m() { return new C(); } }\n\
                   main = new C().m(() -> new C());";
        let p1 = parse_program(src).unwrap();
        let printed1 = pretty(&p1);
        let p2 = parse_program(&printed1).unwrap();
        assert_eq!(p1, p2);
        // Fixed point after one round.
        assert_eq!(printed1, pretty(&p2));
    }
}
