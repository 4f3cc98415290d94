//! The algorithmic type system.
//!
//! `t_inf` synthesises the unique type a term's structure induces; it is
//! always undefined for pure λ-expressions, which only type against a
//! target prescribed by their context. `t_ck` is the checking judgement:
//! it decorates the term with the expected type (pushing into conditional
//! branches), synthesises, and compares with `<:`. Every applied rule is
//! recorded in completion order, premises before conclusion, so a trace
//! reads like the shape of the derivation tree.

use crate::eval::decorate;
use crate::subtyping::{class_component, lub, subtype, LubError};
use crate::syntax::{Name, Pos, PreType, Term, TermKind, TypeEnv};
use crate::table::{ClassTable, LookupError};
use std::fmt;

/// Rule names as they appear in traces and error provenance.
pub mod rules {
    pub const T_VAR: &str = "T-VAR";
    pub const T_BOOL: &str = "T-BOOL";
    pub const T_FIELD: &str = "T-FIELD";
    pub const T_INVK: &str = "T-INVK";
    pub const T_NEW: &str = "T-NEW";
    pub const T_LAMBDA_UD: &str = "T-λUD";
    pub const T_LAMBDA_TD: &str = "T-λTD";
    pub const T_UCAST: &str = "T-UCAST";
    pub const T_LAMBDA_UCAST: &str = "T-λUCAST";
    pub const T_UDCAST: &str = "T-UDCAST";
    pub const T_STUPIDCAST: &str = "T-STUPIDCAST";
    pub const T_COND: &str = "T-COND";
    pub const CHECK: &str = "⊢⊢*";
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TypeErrorKind {
    UnboundVar,
    NoSuchField,
    NoSuchMethod,
    ArgMismatch,
    LambdaNeedsTarget,
    TargetNotFunctional,
    ArityMismatch,
    ParamAnnotationMismatch,
    BadCast,
    CondBranchMismatch,
    NotBooleanGuard,
    UnknownType,
}

impl TypeErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVar => "unbound-var",
            TypeErrorKind::NoSuchField => "no-such-field",
            TypeErrorKind::NoSuchMethod => "no-such-method",
            TypeErrorKind::ArgMismatch => "arg-mismatch",
            TypeErrorKind::LambdaNeedsTarget => "lambda-needs-target",
            TypeErrorKind::TargetNotFunctional => "target-not-functional",
            TypeErrorKind::ArityMismatch => "arity-mismatch",
            TypeErrorKind::ParamAnnotationMismatch => "param-annotation-mismatch",
            TypeErrorKind::BadCast => "bad-cast",
            TypeErrorKind::CondBranchMismatch => "cond-branch-mismatch",
            TypeErrorKind::NotBooleanGuard => "not-boolean-guard",
            TypeErrorKind::UnknownType => "unknown-type",
        }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub pos: Pos,
    pub detail: String,
    /// The rule whose premise failed, when one is identifiable.
    pub rule: Option<&'static str>,
}

impl TypeError {
    fn new(kind: TypeErrorKind, pos: Pos, detail: impl Into<String>) -> TypeError {
        TypeError { kind, pos, detail: detail.into(), rule: None }
    }

    fn with_rule(mut self, rule: &'static str) -> TypeError {
        self.rule = Some(rule);
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)?;
        if !self.pos.is_none() {
            write!(f, " (at {})", self.pos)?;
        }
        Ok(())
    }
}

impl std::error::Error for TypeError {}

/// Checker configuration. With `stupid_cast` set, the downcast clause is
/// replaced by the relaxation that accepts any cast whose checked form
/// fails (as long as the subject synthesises a type), which restores
/// subject reduction over cast-heavy traces.
#[derive(Clone, Copy, Debug, Default)]
pub struct TypeOptions {
    pub stupid_cast: bool,
}

/// The result of running a judgement: the term and environment it was
/// about, the synthesised type or the error, and the applied rules in
/// completion order.
#[derive(Clone, Debug)]
pub struct Judgement {
    pub term: Term,
    pub env: TypeEnv,
    pub result: Result<PreType, TypeError>,
    pub rule_trace: Vec<&'static str>,
}

impl Judgement {
    pub fn ty(&self) -> Option<&PreType> {
        self.result.as_ref().ok()
    }

    pub fn used_rule(&self, rule: &str) -> bool {
        self.rule_trace.iter().any(|r| *r == rule)
    }
}

/// Synthesis: the type induced by the structure of `t` under `env`.
pub fn t_inf(ct: &ClassTable, opts: TypeOptions, env: &TypeEnv, t: &Term) -> Judgement {
    let mut checker = Checker { ct, opts, trace: Vec::new() };
    let result = checker.inf(env, t);
    Judgement { term: t.clone(), env: env.clone(), result, rule_trace: checker.trace }
}

/// Checking: decorate `t` with `expected`, synthesise, and require the
/// result to be a subtype of `expected`.
pub fn t_ck(
    ct: &ClassTable,
    opts: TypeOptions,
    env: &TypeEnv,
    t: &Term,
    expected: &PreType,
) -> Judgement {
    let mut checker = Checker { ct, opts, trace: Vec::new() };
    let result = match checker.ck(env, t, expected) {
        Ok(()) => Ok(expected.clone()),
        Err(failure) => Err(failure.into_error(TypeErrorKind::ArgMismatch, "checked term")),
    };
    Judgement { term: t.clone(), env: env.clone(), result, rule_trace: checker.trace }
}

struct Checker<'a> {
    ct: &'a ClassTable,
    opts: TypeOptions,
    trace: Vec<&'static str>,
}

/// How a checking judgement failed: the top-level subtype comparison
/// (carrying both types so callers can name their own context), or a
/// type error from deeper inside the term.
enum CkFailure {
    Mismatch { found: PreType, expected: PreType, pos: Pos },
    Error(TypeError),
}

impl CkFailure {
    fn into_error(self, kind: TypeErrorKind, what: &str) -> TypeError {
        match self {
            CkFailure::Mismatch { found, expected, pos } => TypeError::new(
                kind,
                pos,
                format!("{what} has type `{found}`, which is not a subtype of `{expected}`"),
            )
            .with_rule(rules::CHECK),
            CkFailure::Error(e) => e,
        }
    }
}

impl<'a> Checker<'a> {
    fn done(&mut self, rule: &'static str) {
        self.trace.push(rule);
    }

    fn ck(&mut self, env: &TypeEnv, t: &Term, expected: &PreType) -> Result<(), CkFailure> {
        let decorated = decorate(t, expected);
        let found = self.inf(env, &decorated).map_err(CkFailure::Error)?;
        match subtype(self.ct, &found, expected) {
            Ok(true) => {
                self.done(rules::CHECK);
                Ok(())
            }
            Ok(false) => Err(CkFailure::Mismatch {
                found,
                expected: expected.clone(),
                pos: t.pos,
            }),
            Err(e) => Err(CkFailure::Error(TypeError::new(
                TypeErrorKind::UnknownType,
                t.pos,
                e.to_string(),
            ))),
        }
    }

    fn inf(&mut self, env: &TypeEnv, t: &Term) -> Result<PreType, TypeError> {
        match &t.kind {
            TermKind::Var(x) => match env.lookup(x) {
                Some(ty) => {
                    self.done(rules::T_VAR);
                    Ok(ty.clone())
                }
                None => Err(TypeError::new(
                    TypeErrorKind::UnboundVar,
                    t.pos,
                    format!("unbound variable `{x}`"),
                )
                .with_rule(rules::T_VAR)),
            },
            TermKind::BoolLit(_) => {
                self.done(rules::T_BOOL);
                Ok(PreType::Boolean)
            }
            TermKind::FieldAccess(recv, field) => {
                let recv_ty = self.inf(env, recv)?;
                let class = match &recv_ty {
                    PreType::Boolean => {
                        return Err(TypeError::new(
                            TypeErrorKind::NoSuchField,
                            t.pos,
                            "`boolean` has no fields",
                        )
                        .with_rule(rules::T_FIELD))
                    }
                    ty => class_component(self.ct, ty)
                        .map_err(|e| self.lookup_error(e, t.pos))?,
                };
                let fields = self
                    .ct
                    .fields(&class)
                    .map_err(|e| self.lookup_error(e, t.pos))?;
                match fields.iter().find(|(_, f)| f == field) {
                    Some((ty, _)) => {
                        self.done(rules::T_FIELD);
                        Ok(ty.clone())
                    }
                    None => Err(TypeError::new(
                        TypeErrorKind::NoSuchField,
                        t.pos,
                        format!("no field `{field}` in fields({class})"),
                    )
                    .with_rule(rules::T_FIELD)),
                }
            }
            TermKind::Invoke(recv, method, args) => {
                let recv_ty = self.inf(env, recv)?;
                let sig = self
                    .ct
                    .mtype(method, &recv_ty)
                    .map_err(|e| self.lookup_error(e, t.pos))?
                    .ok_or_else(|| {
                        TypeError::new(
                            TypeErrorKind::NoSuchMethod,
                            t.pos,
                            format!("no method `{method}` in mh({recv_ty})"),
                        )
                        .with_rule(rules::T_INVK)
                    })?;
                if sig.params.len() != args.len() {
                    return Err(TypeError::new(
                        TypeErrorKind::ArityMismatch,
                        t.pos,
                        format!(
                            "`{method}` takes {} argument(s), {} given",
                            sig.params.len(),
                            args.len()
                        ),
                    )
                    .with_rule(rules::T_INVK));
                }
                for (arg, expected) in args.iter().zip(&sig.params) {
                    self.ck(env, arg, expected).map_err(|f| {
                        f.into_error(
                            TypeErrorKind::ArgMismatch,
                            &format!("argument of `{method}`"),
                        )
                    })?;
                }
                self.done(rules::T_INVK);
                Ok(sig.result)
            }
            TermKind::New(class, args) => {
                let fields = self
                    .ct
                    .fields(class)
                    .map_err(|e| self.lookup_error(e, t.pos))?
                    .to_vec();
                if fields.len() != args.len() {
                    return Err(TypeError::new(
                        TypeErrorKind::ArityMismatch,
                        t.pos,
                        format!(
                            "`new {class}` takes {} argument(s), {} given",
                            fields.len(),
                            args.len()
                        ),
                    )
                    .with_rule(rules::T_NEW));
                }
                for (arg, (field_ty, field)) in args.iter().zip(&fields) {
                    self.ck(env, arg, field_ty).map_err(|f| {
                        f.into_error(
                            TypeErrorKind::ArgMismatch,
                            &format!("initialiser of field `{field}`"),
                        )
                    })?;
                }
                self.done(rules::T_NEW);
                Ok(PreType::nominal(class.clone()))
            }
            TermKind::Cast(target, subject) => self.inf_cast(env, t, target, subject),
            TermKind::PureLambda(_) => Err(TypeError::new(
                TypeErrorKind::LambdaNeedsTarget,
                t.pos,
                "a λ-expression has no type of its own; the context must prescribe a target type",
            )),
            TermKind::DecoratedLambda(lam, target) => {
                let header = self
                    .ct
                    .is_functional(target)
                    .map_err(|e| self.lookup_error(e, t.pos))?
                    .ok_or_else(|| {
                        TypeError::new(
                            TypeErrorKind::TargetNotFunctional,
                            t.pos,
                            format!("`{target}` is not a functional type"),
                        )
                    })?;
                if lam.params.len() != header.params.len() {
                    return Err(TypeError::new(
                        TypeErrorKind::ArityMismatch,
                        t.pos,
                        format!(
                            "target `{target}` expects {} parameter(s), λ has {}",
                            header.params.len(),
                            lam.params.len()
                        ),
                    ));
                }
                let typed = lam.is_typed();
                if typed {
                    for (param, (expected, _)) in lam.params.iter().zip(&header.params) {
                        let declared = param.declared_type.as_ref().expect("typed λ");
                        if declared != expected {
                            return Err(TypeError::new(
                                TypeErrorKind::ParamAnnotationMismatch,
                                t.pos,
                                format!(
                                    "parameter `{}` declares `{declared}`, target `{target}` requires `{expected}`",
                                    param.name
                                ),
                            ));
                        }
                    }
                }
                let mut inner = env.clone();
                for (param, (ty, _)) in lam.params.iter().zip(&header.params) {
                    inner = inner.bind(param.name.clone(), ty.clone());
                }
                self.ck(&inner, &lam.body, &header.result)
                    .map_err(|f| f.into_error(TypeErrorKind::ArgMismatch, "λ body"))?;
                self.done(if typed { rules::T_LAMBDA_TD } else { rules::T_LAMBDA_UD });
                Ok(target.clone())
            }
            TermKind::Cond(guard, then, otherwise) => {
                self.ck(env, guard, &PreType::Boolean).map_err(|f| {
                    f.into_error(TypeErrorKind::NotBooleanGuard, "conditional guard")
                })?;
                let then_ty = self.inf(env, then)?;
                let else_ty = self.inf(env, otherwise)?;
                let joined = lub(self.ct, &then_ty, &else_ty).map_err(|e| match e {
                    LubError::BooleanMismatch(_) => TypeError::new(
                        TypeErrorKind::CondBranchMismatch,
                        t.pos,
                        format!(
                            "branches have types `{then_ty}` and `{else_ty}`, which have no common type"
                        ),
                    )
                    .with_rule(rules::T_COND),
                    LubError::Lookup(e) => self.lookup_error(e, t.pos),
                })?;
                self.done(rules::T_COND);
                Ok(joined)
            }
        }
    }

    fn inf_cast(
        &mut self,
        env: &TypeEnv,
        t: &Term,
        target: &PreType,
        subject: &Term,
    ) -> Result<PreType, TypeError> {
        match self.ct.is_type(target) {
            Ok(true) => {}
            Ok(false) => {
                return Err(TypeError::new(
                    TypeErrorKind::BadCast,
                    t.pos,
                    format!("cast target `{target}` is not a type (mh undefined)"),
                ))
            }
            Err(e) => return Err(self.lookup_error(e, t.pos)),
        }
        // The checked cast covers upcasts and λ-expression casts; the
        // downcast clause applies only when it fails on the subtype test.
        let found = match self.ck(env, subject, target) {
            Ok(()) => {
                self.done(if subject.is_pure_lambda() {
                    rules::T_LAMBDA_UCAST
                } else {
                    rules::T_UCAST
                });
                return Ok(target.clone());
            }
            Err(CkFailure::Error(e)) => return Err(e),
            Err(CkFailure::Mismatch { found, .. }) => found,
        };
        if self.opts.stupid_cast {
            self.done(rules::T_STUPIDCAST);
            return Ok(target.clone());
        }
        if target.is_boolean() || found.is_boolean() {
            return Err(TypeError::new(
                TypeErrorKind::BadCast,
                t.pos,
                format!("cannot cast `{found}` to `{target}`"),
            )
            .with_rule(rules::T_UDCAST));
        }
        let target_class = class_component(self.ct, target)
            .map_err(|e| self.lookup_error(e, t.pos))?;
        let found_class = class_component(self.ct, &found)
            .map_err(|e| self.lookup_error(e, t.pos))?;
        let up = PreType::nominal(target_class.clone());
        let down = PreType::nominal(found_class.clone());
        let related = subtype(self.ct, &up, &down)
            .map_err(|e| self.lookup_error(e, t.pos))?
            || subtype(self.ct, &down, &up).map_err(|e| self.lookup_error(e, t.pos))?;
        if related {
            self.done(rules::T_UDCAST);
            Ok(target.clone())
        } else {
            Err(TypeError::new(
                TypeErrorKind::BadCast,
                t.pos,
                format!(
                    "cannot cast `{found}` to `{target}`: class components `{found_class}` and `{target_class}` are unrelated"
                ),
            )
            .with_rule(rules::T_UDCAST))
        }
    }

    fn lookup_error(&self, e: LookupError, pos: Pos) -> TypeError {
        TypeError::new(TypeErrorKind::UnknownType, pos, e.to_string())
    }
}

/// A whole-program report: table well-formedness findings plus the
/// judgement for the main term under the empty environment.
#[derive(Debug)]
pub struct ProgramReport {
    pub table_errors: Vec<crate::table::WellFormednessError>,
    pub judgement: Judgement,
}

impl ProgramReport {
    pub fn is_ok(&self) -> bool {
        self.table_errors.is_empty() && self.judgement.result.is_ok()
    }
}

/// A program is well typed when the class table is well formed and the
/// term has a type starting from the empty environment.
pub fn check_program(ct: &ClassTable, opts: TypeOptions, t: &Term) -> ProgramReport {
    ProgramReport {
        table_errors: ct.ok(),
        judgement: t_inf(ct, opts, &TypeEnv::empty(), t),
    }
}
