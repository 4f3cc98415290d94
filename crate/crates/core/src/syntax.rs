//! Abstract syntax: names, pre-types, terms and declarations.
//!
//! Everything here is immutable after construction and freely shareable
//! across threads. Pre-types and terms are plain syntax trees: an
//! intersection keeps its atoms in the order they were written (`I & E`
//! and `E & I` are different pre-types even though each is a subtype of
//! the other), and nothing is resolved against a class table yet.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// An identifier: class, interface, method, field or variable name.
///
/// `this` is an ordinary variable name; it is bound by substitution
/// during evaluation rather than treated as a separate term form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(text: impl AsRef<str>) -> Name {
        Name(Arc::from(text.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The receiver variable bound in method bodies.
    pub fn this() -> Name {
        Name::new("this")
    }

    /// The implicit root class.
    pub fn object() -> Name {
        Name::new("Object")
    }

    pub fn is_object(&self) -> bool {
        self.as_str() == "Object"
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_str())
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

/// Keywords and reserved nominal names that can never be user identifiers.
pub const RESERVED_WORDS: &[&str] = &[
    "true", "false", "this", "super", "new", "return", "class", "interface", "extends",
    "implements", "default", "boolean",
];

/// Nominal names that are built in and may not be declared.
pub const RESERVED_NOMINALS: &[&str] = &["Object", "boolean"];

/// A source position (1-based line and column). Line 0 marks a node that
/// was produced by the evaluator or a generator rather than the parser.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub const NONE: Pos = Pos { line: 0, col: 0 };

    pub fn new(line: u32, col: u32) -> Pos {
        Pos { line, col }
    }

    pub fn is_none(&self) -> bool {
        self.line == 0
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_none() {
            write!(f, "<synthetic>")
        } else {
            write!(f, "{}:{}", self.line, self.col)
        }
    }
}

/// A pre-type: the primitive `boolean`, or a non-empty sequence of nominal
/// atoms. A single atom is a plain nominal type; several atoms form an
/// intersection. Whether the leftmost atom is a class (it must be, if any
/// atom is) can only be judged against a class table, so the shape is
/// checked by the lookup functions, not here.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PreType {
    Boolean,
    /// Nominal type or intersection; atoms in syntactic order, no duplicates.
    Ref(Vec<Name>),
}

impl PreType {
    pub fn nominal(name: impl Into<Name>) -> PreType {
        PreType::Ref(vec![name.into()])
    }

    pub fn object() -> PreType {
        PreType::nominal(Name::object())
    }

    pub fn intersection(atoms: Vec<Name>) -> PreType {
        assert!(!atoms.is_empty(), "intersection needs at least one atom");
        PreType::Ref(atoms)
    }

    pub fn is_boolean(&self) -> bool {
        matches!(self, PreType::Boolean)
    }

    /// The nominal atoms, or `None` for `boolean`.
    pub fn atoms(&self) -> Option<&[Name]> {
        match self {
            PreType::Boolean => None,
            PreType::Ref(atoms) => Some(atoms),
        }
    }

    /// The single atom of a plain nominal type.
    pub fn single_atom(&self) -> Option<&Name> {
        match self.atoms() {
            Some([n]) => Some(n),
            _ => None,
        }
    }

    /// Nominal (single-atom) or boolean: the only shapes allowed in
    /// headers, field declarations and environments.
    pub fn is_nominal_or_boolean(&self) -> bool {
        match self {
            PreType::Boolean => true,
            PreType::Ref(atoms) => atoms.len() == 1,
        }
    }
}

impl fmt::Display for PreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreType::Boolean => f.write_str("boolean"),
            PreType::Ref(atoms) => {
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for PreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A λ-expression parameter: untyped (`x`) or typed (`T x`).
/// Declared types are nominal or boolean, never intersections.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Param {
    pub name: Name,
    pub declared_type: Option<PreType>,
}

impl Param {
    pub fn untyped(name: impl Into<Name>) -> Param {
        Param { name: name.into(), declared_type: None }
    }

    pub fn typed(ty: PreType, name: impl Into<Name>) -> Param {
        debug_assert!(ty.is_nominal_or_boolean());
        Param { name: name.into(), declared_type: Some(ty) }
    }
}

/// The parameters and body shared by pure and decorated λ-expressions.
/// Parameters are all typed or all untyped, with distinct names.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lambda {
    pub params: Vec<Param>,
    pub body: Box<Term>,
}

impl Lambda {
    pub fn is_typed(&self) -> bool {
        self.params.first().is_some_and(|p| p.declared_type.is_some())
    }
}

/// A term together with its source position. Equality and hashing ignore
/// the position so that parse/pretty round-trips compare structurally.
#[derive(Clone)]
pub struct Term {
    pub kind: TermKind,
    pub pos: Pos,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    Var(Name),
    FieldAccess(Box<Term>, Name),
    Invoke(Box<Term>, Name, Vec<Term>),
    New(Name, Vec<Term>),
    Cast(PreType, Box<Term>),
    /// A pure λ-expression: a value, but not a proper value. It has no
    /// type of its own; contexts must prescribe a target type.
    PureLambda(Lambda),
    /// A λ-expression decorated with its target type. Proper value;
    /// introduced by evaluation and by the checking judgement, or written
    /// directly in the `[(params) -> body : τ]` trace syntax.
    DecoratedLambda(Lambda, PreType),
    Cond(Box<Term>, Box<Term>, Box<Term>),
    BoolLit(bool),
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Term {}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Term {
    pub fn new(kind: TermKind) -> Term {
        Term { kind, pos: Pos::NONE }
    }

    pub fn at(kind: TermKind, pos: Pos) -> Term {
        Term { kind, pos }
    }

    pub fn var(name: impl Into<Name>) -> Term {
        Term::new(TermKind::Var(name.into()))
    }

    pub fn field(recv: Term, name: impl Into<Name>) -> Term {
        Term::new(TermKind::FieldAccess(Box::new(recv), name.into()))
    }

    pub fn invoke(recv: Term, name: impl Into<Name>, args: Vec<Term>) -> Term {
        Term::new(TermKind::Invoke(Box::new(recv), name.into(), args))
    }

    pub fn new_object(class: impl Into<Name>, args: Vec<Term>) -> Term {
        Term::new(TermKind::New(class.into(), args))
    }

    pub fn cast(ty: PreType, subject: Term) -> Term {
        Term::new(TermKind::Cast(ty, Box::new(subject)))
    }

    pub fn lambda(params: Vec<Param>, body: Term) -> Term {
        Term::new(TermKind::PureLambda(Lambda { params, body: Box::new(body) }))
    }

    pub fn decorated(params: Vec<Param>, body: Term, target: PreType) -> Term {
        Term::new(TermKind::DecoratedLambda(
            Lambda { params, body: Box::new(body) },
            target,
        ))
    }

    pub fn cond(guard: Term, then: Term, otherwise: Term) -> Term {
        Term::new(TermKind::Cond(Box::new(guard), Box::new(then), Box::new(otherwise)))
    }

    pub fn bool_lit(b: bool) -> Term {
        Term::new(TermKind::BoolLit(b))
    }

    /// True iff the term is a pure (undecorated) λ-expression.
    pub fn is_pure_lambda(&self) -> bool {
        matches!(self.kind, TermKind::PureLambda(_))
    }

    /// Values: proper values plus pure λ-expressions.
    pub fn is_value(&self) -> bool {
        self.is_pure_lambda() || self.is_proper_value()
    }

    /// Proper values: `new C(v̄)` with value arguments, decorated
    /// λ-expressions, and boolean literals.
    pub fn is_proper_value(&self) -> bool {
        match &self.kind {
            TermKind::New(_, args) => args.iter().all(Term::is_value),
            TermKind::DecoratedLambda(..) | TermKind::BoolLit(_) => true,
            _ => false,
        }
    }

    /// Free variables. λ parameters bind within the body; `this` is an
    /// ordinary variable.
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match &self.kind {
            TermKind::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            TermKind::FieldAccess(t, _) => t.collect_free_vars(bound, out),
            TermKind::Invoke(t, _, args) => {
                t.collect_free_vars(bound, out);
                for a in args {
                    a.collect_free_vars(bound, out);
                }
            }
            TermKind::New(_, args) => {
                for a in args {
                    a.collect_free_vars(bound, out);
                }
            }
            TermKind::Cast(_, t) => t.collect_free_vars(bound, out),
            TermKind::PureLambda(l) | TermKind::DecoratedLambda(l, _) => {
                let depth = bound.len();
                bound.extend(l.params.iter().map(|p| p.name.clone()));
                l.body.collect_free_vars(bound, out);
                bound.truncate(depth);
            }
            TermKind::Cond(g, a, b) => {
                g.collect_free_vars(bound, out);
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            TermKind::BoolLit(_) => {}
        }
    }

    /// Number of nodes, used for shrinking and runaway-growth guards.
    pub fn size(&self) -> usize {
        let mut n = 1;
        match &self.kind {
            TermKind::Var(_) | TermKind::BoolLit(_) => {}
            TermKind::FieldAccess(t, _) | TermKind::Cast(_, t) => n += t.size(),
            TermKind::Invoke(t, _, args) => {
                n += t.size();
                n += args.iter().map(Term::size).sum::<usize>();
            }
            TermKind::New(_, args) => n += args.iter().map(Term::size).sum::<usize>(),
            TermKind::PureLambda(l) | TermKind::DecoratedLambda(l, _) => n += l.body.size(),
            TermKind::Cond(g, a, b) => n += g.size() + a.size() + b.size(),
        }
        n
    }
}

/// A method header `T m(T̄ x̄)`. Result and parameter types are nominal
/// or boolean. Two headers are equal when their name, result type and
/// parameter types agree positionally; parameter names are ignored, which
/// is the equality the header-set union `⊎` works with.
#[derive(Clone, Debug)]
pub struct MethodHeader {
    pub result: PreType,
    pub name: Name,
    pub params: Vec<(PreType, Name)>,
}

impl MethodHeader {
    pub fn param_types(&self) -> Vec<PreType> {
        self.params.iter().map(|(t, _)| t.clone()).collect()
    }

    pub fn param_names(&self) -> Vec<Name> {
        self.params.iter().map(|(_, n)| n.clone()).collect()
    }

    pub fn sig(&self) -> MethodSig {
        MethodSig { params: self.param_types(), result: self.result.clone() }
    }
}

impl PartialEq for MethodHeader {
    fn eq(&self, other: &MethodHeader) -> bool {
        self.name == other.name
            && self.result == other.result
            && self.params.len() == other.params.len()
            && self
                .params
                .iter()
                .zip(other.params.iter())
                .all(|((t1, _), (t2, _))| t1 == t2)
    }
}

impl Eq for MethodHeader {}

impl fmt::Display for MethodHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}(", self.result, self.name)?;
        for (i, (t, x)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t} {x}")?;
        }
        f.write_str(")")
    }
}

/// A method signature `T̄ → T`, the result of `mtype`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MethodSig {
    pub params: Vec<PreType>,
    pub result: PreType,
}

impl fmt::Display for MethodSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            f.write_str("() -> ")?;
        } else {
            f.write_str("(")?;
            for (i, t) in self.params.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(") -> ")?;
        }
        write!(f, "{}", self.result)
    }
}

/// A concrete method: a header with a single return-expression body.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MethodDecl {
    pub header: MethodHeader,
    pub body: Term,
}

/// A constructor `C(T̄ f̄) { super(ḡ); this.f̄ = f̄; }`. The assignment
/// list records each `this.f = f` by the single field name; shape against
/// the inherited fields is validated by the table well-formedness check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CtorDecl {
    pub name: Name,
    pub params: Vec<(PreType, Name)>,
    pub super_args: Vec<Name>,
    pub inits: Vec<Name>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassDecl {
    pub name: Name,
    pub superclass: Name,
    pub interfaces: Vec<Name>,
    pub fields: Vec<(PreType, Name)>,
    pub ctor: CtorDecl,
    pub methods: Vec<MethodDecl>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InterfaceDecl {
    pub name: Name,
    pub extends: Vec<Name>,
    /// Abstract method headers (declared with a trailing `;`).
    pub headers: Vec<MethodHeader>,
    /// Default methods: any interface method that comes with a body.
    pub defaults: Vec<MethodDecl>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decl {
    Class(ClassDecl),
    Interface(InterfaceDecl),
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Class(c) => &c.name,
            Decl::Interface(i) => &i.name,
        }
    }
}

/// A parsed compilation unit: declarations plus an optional
/// `main = <term>;` clause.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SourceProgram {
    pub decls: Vec<Decl>,
    pub main: Option<Term>,
}

/// A typing environment Γ: an ordered list of bindings from variables to
/// nominal (or boolean) types. Later bindings shadow earlier ones, which
/// is how λ parameters hide outer variables of the same name.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TypeEnv {
    bindings: Vec<(Name, PreType)>,
}

impl TypeEnv {
    pub fn empty() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn bind(&self, name: impl Into<Name>, ty: PreType) -> TypeEnv {
        debug_assert!(ty.is_nominal_or_boolean(), "environments bind nominal types only");
        let mut next = self.clone();
        next.bindings.push((name.into(), ty));
        next
    }

    pub fn lookup(&self, name: &Name) -> Option<&PreType> {
        self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, PreType)> {
        self.bindings.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}: {t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_term;

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    #[test]
    fn pure_lambda_recognition() {
        assert!(t("() -> new C()").is_pure_lambda());
        assert!(!t("new C()").is_pure_lambda());
        assert!(!t("[() -> new C() : I]").is_pure_lambda());
    }

    #[test]
    fn proper_values() {
        assert!(t("new C()").is_proper_value());
        assert!(!t("() -> new C()").is_proper_value());
        // Arguments of an object value may themselves be pure λs.
        assert!(t("new C(() -> new C())").is_proper_value());
        assert!(t("[() -> new C() : I]").is_proper_value());
        assert!(t("true").is_proper_value());
        assert!(!t("new C(x.f)").is_proper_value());
    }

    #[test]
    fn free_vars_basics() {
        let names = |s: &str| {
            t(s).free_vars().into_iter().map(|n| n.as_str().to_owned()).collect::<Vec<_>>()
        };
        assert_eq!(names("x.f"), vec!["x"]);
        assert_eq!(names("(x) -> y.m(x)"), vec!["y"]);
        assert_eq!(names("this.f"), vec!["this"]);
        assert_eq!(names("new C()"), Vec::<String>::new());
        assert_eq!(names("b ? x : y"), vec!["b", "x", "y"]);
    }

    #[test]
    fn pretype_equality_is_list_sensitive() {
        let ie = PreType::intersection(vec![Name::new("I"), Name::new("E")]);
        let ei = PreType::intersection(vec![Name::new("E"), Name::new("I")]);
        assert_ne!(ie, ei);
        let i = PreType::nominal("I");
        let oi = PreType::intersection(vec![Name::object(), Name::new("I")]);
        assert_ne!(i, oi);
    }

    #[test]
    fn header_equality_ignores_param_names() {
        let h1 = MethodHeader {
            result: PreType::nominal("C"),
            name: Name::new("m"),
            params: vec![(PreType::nominal("I"), Name::new("x"))],
        };
        let h2 = MethodHeader {
            result: PreType::nominal("C"),
            name: Name::new("m"),
            params: vec![(PreType::nominal("I"), Name::new("y"))],
        };
        let h3 = MethodHeader { result: PreType::nominal("C"), name: Name::new("m"), params: vec![] };
        assert_eq!(h1, h2);
        assert_ne!(h1, h3);
    }

    #[test]
    fn env_shadowing() {
        let env = TypeEnv::empty()
            .bind("x", PreType::nominal("C"))
            .bind("x", PreType::nominal("D"));
        assert_eq!(env.lookup(&Name::new("x")), Some(&PreType::nominal("D")));
    }
}
