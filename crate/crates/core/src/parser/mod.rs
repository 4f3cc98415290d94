//! Concrete syntax for class tables and terms.
//!
//! The grammar is documented in `docs/grammar.md` at the repository root
//! and is a compatibility surface: `parse ∘ pretty` is the identity on
//! every term and declaration this module produces.

mod lexer;
mod pretty;

pub use pretty::pretty;

use crate::syntax::{
    ClassDecl, CtorDecl, Decl, InterfaceDecl, Lambda, MethodDecl, MethodHeader, Name, Param, Pos,
    PreType, SourceProgram, Term, TermKind, RESERVED_NOMINALS,
};
use lexer::{lex, Token, TokenKind};
use std::collections::HashSet;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    DuplicateDecl,
    MixedLambdaParams,
}

#[derive(Clone, Debug)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parse a source file: declarations followed by an optional
/// `main = <term>;` clause.
pub fn parse_program(src: &str) -> Result<SourceProgram, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, at: 0 };
    let program = p.program()?;
    p.expect_eof()?;
    Ok(program)
}

/// Parse a single term.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, at: 0 };
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parse a pre-type: `boolean`, a nominal name, or an intersection.
pub fn parse_pretype(src: &str) -> Result<PreType, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, at: 0 };
    let t = p.pretype()?;
    p.expect_eof()?;
    Ok(t)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.at].kind
    }

    fn peek_nth(&self, n: usize) -> &TokenKind {
        let i = (self.at + n).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { kind: ParseErrorKind::Syntax, pos: self.pos(), message: message.into() })
    }

    fn err_at<T>(&self, pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { kind: ParseErrorKind::Syntax, pos, message: message.into() })
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        if self.peek() == &kind {
            Ok(self.bump())
        } else {
            self.err(format!("expected {}, found {}", kind.describe(), self.peek().describe()))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.peek() == &TokenKind::Eof {
            Ok(())
        } else {
            self.err(format!("expected end of input, found {}", self.peek().describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(Name, Pos), ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            TokenKind::Ident(s) => {
                self.bump();
                Ok((Name::new(s), pos))
            }
            other => self.err(format!("expected {what}, found {}", other.describe())),
        }
    }

    // ---- programs and declarations ------------------------------------

    fn program(&mut self) -> Result<SourceProgram, ParseError> {
        let mut decls: Vec<Decl> = Vec::new();
        let mut seen: HashSet<Name> = HashSet::new();
        let mut main = None;
        loop {
            match self.peek() {
                TokenKind::Class | TokenKind::Interface => {
                    let pos = self.pos();
                    let decl = self.decl()?;
                    if RESERVED_NOMINALS.contains(&decl.name().as_str()) {
                        return Err(ParseError {
                            kind: ParseErrorKind::DuplicateDecl,
                            pos,
                            message: format!("`{}` is built in and cannot be declared", decl.name()),
                        });
                    }
                    if !seen.insert(decl.name().clone()) {
                        return Err(ParseError {
                            kind: ParseErrorKind::DuplicateDecl,
                            pos,
                            message: format!("duplicate declaration of `{}`", decl.name()),
                        });
                    }
                    decls.push(decl);
                }
                TokenKind::Ident(s) if s == "main" => {
                    self.bump();
                    self.expect(TokenKind::Eq)?;
                    let t = self.term()?;
                    self.expect(TokenKind::Semi)?;
                    main = Some(t);
                    break;
                }
                TokenKind::Eof => break,
                other => {
                    return self.err(format!(
                        "expected a declaration or `main = <term>;`, found {}",
                        other.describe()
                    ))
                }
            }
        }
        Ok(SourceProgram { decls, main })
    }

    fn decl(&mut self) -> Result<Decl, ParseError> {
        match self.peek() {
            TokenKind::Class => self.class_decl().map(Decl::Class),
            TokenKind::Interface => self.interface_decl().map(Decl::Interface),
            other => self.err(format!("expected declaration, found {}", other.describe())),
        }
    }

    fn name_list(&mut self, what: &str) -> Result<Vec<Name>, ParseError> {
        let mut names = Vec::new();
        loop {
            let (n, pos) = self.ident(what)?;
            if names.contains(&n) {
                return self.err_at(pos, format!("duplicate {what} `{n}`"));
            }
            names.push(n);
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        Ok(names)
    }

    fn class_decl(&mut self) -> Result<ClassDecl, ParseError> {
        self.expect(TokenKind::Class)?;
        let (name, _) = self.ident("class name")?;
        self.expect(TokenKind::Extends)?;
        let (superclass, _) = self.ident("superclass name")?;
        let interfaces = if self.eat(&TokenKind::Implements) {
            self.name_list("implemented interface")?
        } else {
            Vec::new()
        };
        self.expect(TokenKind::LBrace)?;

        // Declaration order is fixed: fields, then the constructor, then
        // methods.
        let mut fields: Vec<(PreType, Name)> = Vec::new();
        loop {
            if self.looks_like_ctor(&name) {
                break;
            }
            let pos = self.pos();
            let ty = self.nominal_or_boolean("field type")?;
            let (field, fpos) = self.ident("field name")?;
            if fields.iter().any(|(_, f)| f == &field) {
                return self.err_at(fpos, format!("duplicate field `{field}`"));
            }
            if self.peek() != &TokenKind::Semi {
                return self.err_at(
                    pos,
                    "fields must precede the constructor (methods come after it)",
                );
            }
            self.expect(TokenKind::Semi)?;
            fields.push((ty, field));
        }

        let ctor = self.ctor_decl(&name)?;

        let mut methods: Vec<MethodDecl> = Vec::new();
        while self.peek() != &TokenKind::RBrace {
            let m = self.method_decl()?;
            if methods.iter().any(|existing| existing.header.name == m.header.name) {
                return self.err(format!("duplicate method `{}`", m.header.name));
            }
            methods.push(m);
        }
        self.expect(TokenKind::RBrace)?;
        Ok(ClassDecl { name, superclass, interfaces, fields, ctor, methods })
    }

    fn looks_like_ctor(&self, class: &Name) -> bool {
        matches!(self.peek(), TokenKind::Ident(s) if s == class.as_str())
            && self.peek_nth(1) == &TokenKind::LParen
    }

    fn ctor_decl(&mut self, class: &Name) -> Result<CtorDecl, ParseError> {
        let pos = self.pos();
        let (name, _) = self.ident("constructor")?;
        if &name != class {
            return self.err_at(
                pos,
                format!("constructor name `{name}` does not match class `{class}`"),
            );
        }
        self.expect(TokenKind::LParen)?;
        let mut params: Vec<(PreType, Name)> = Vec::new();
        if self.peek() != &TokenKind::RParen {
            loop {
                let ty = self.nominal_or_boolean("constructor parameter type")?;
                let (p, ppos) = self.ident("constructor parameter name")?;
                if params.iter().any(|(_, n)| n == &p) {
                    return self.err_at(ppos, format!("duplicate constructor parameter `{p}`"));
                }
                params.push((ty, p));
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        self.expect(TokenKind::LBrace)?;
        self.expect(TokenKind::Super)?;
        self.expect(TokenKind::LParen)?;
        let mut super_args: Vec<Name> = Vec::new();
        if self.peek() != &TokenKind::RParen {
            loop {
                let (a, _) = self.ident("super argument")?;
                super_args.push(a);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        self.expect(TokenKind::Semi)?;
        let mut inits: Vec<Name> = Vec::new();
        while self.peek() == &TokenKind::This {
            self.bump();
            self.expect(TokenKind::Dot)?;
            let (lhs, lpos) = self.ident("field name")?;
            self.expect(TokenKind::Eq)?;
            let (rhs, _) = self.ident("field name")?;
            if lhs != rhs {
                return self.err_at(
                    lpos,
                    format!("constructor must assign `this.{lhs} = {lhs}`, found `{rhs}`"),
                );
            }
            self.expect(TokenKind::Semi)?;
            inits.push(lhs);
        }
        self.expect(TokenKind::RBrace)?;
        Ok(CtorDecl { name, params, super_args, inits })
    }

    fn interface_decl(&mut self) -> Result<InterfaceDecl, ParseError> {
        self.expect(TokenKind::Interface)?;
        let (name, _) = self.ident("interface name")?;
        let extends = if self.eat(&TokenKind::Extends) {
            self.name_list("extended interface")?
        } else {
            Vec::new()
        };
        self.expect(TokenKind::LBrace)?;
        let mut headers: Vec<MethodHeader> = Vec::new();
        let mut defaults: Vec<MethodDecl> = Vec::new();
        while self.peek() != &TokenKind::RBrace {
            // `default` is accepted and ignored: a body makes a method
            // default, its absence makes it abstract.
            self.eat(&TokenKind::Default);
            let header = self.method_header()?;
            let dup = headers.iter().any(|h| h.name == header.name)
                || defaults.iter().any(|m| m.header.name == header.name);
            if dup {
                return self.err(format!("duplicate method `{}`", header.name));
            }
            if self.eat(&TokenKind::Semi) {
                headers.push(header);
            } else {
                let body = self.method_body()?;
                defaults.push(MethodDecl { header, body });
            }
        }
        self.expect(TokenKind::RBrace)?;
        Ok(InterfaceDecl { name, extends, headers, defaults })
    }

    fn method_header(&mut self) -> Result<MethodHeader, ParseError> {
        let result = self.nominal_or_boolean("method result type")?;
        let (name, _) = self.ident("method name")?;
        self.expect(TokenKind::LParen)?;
        let mut params: Vec<(PreType, Name)> = Vec::new();
        if self.peek() != &TokenKind::RParen {
            loop {
                let ty = self.nominal_or_boolean("parameter type")?;
                let (p, ppos) = self.ident("parameter name")?;
                if params.iter().any(|(_, n)| n == &p) {
                    return self.err_at(ppos, format!("duplicate parameter `{p}`"));
                }
                params.push((ty, p));
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        Ok(MethodHeader { result, name, params })
    }

    fn method_decl(&mut self) -> Result<MethodDecl, ParseError> {
        let header = self.method_header()?;
        let body = self.method_body()?;
        Ok(MethodDecl { header, body })
    }

    fn method_body(&mut self) -> Result<Term, ParseError> {
        self.expect(TokenKind::LBrace)?;
        self.expect(TokenKind::Return)?;
        let body = self.term()?;
        self.expect(TokenKind::Semi)?;
        self.expect(TokenKind::RBrace)?;
        Ok(body)
    }

    // ---- types ---------------------------------------------------------

    /// `boolean` or `T & I1 & ... & In`.
    fn pretype(&mut self) -> Result<PreType, ParseError> {
        if self.peek() == &TokenKind::Boolean {
            self.bump();
            if self.peek() == &TokenKind::Amp {
                return self.err("`boolean` cannot occur in an intersection");
            }
            return Ok(PreType::Boolean);
        }
        let (first, _) = self.ident("type name")?;
        let mut atoms = vec![first];
        while self.eat(&TokenKind::Amp) {
            if self.peek() == &TokenKind::Boolean {
                return self.err("`boolean` cannot occur in an intersection");
            }
            let (n, pos) = self.ident("type name")?;
            if atoms.contains(&n) {
                return self.err_at(pos, format!("duplicate type `{n}` in intersection"));
            }
            atoms.push(n);
        }
        Ok(PreType::Ref(atoms))
    }

    /// A type restricted to the header/field grammar: a single nominal
    /// name or `boolean`, never an intersection.
    fn nominal_or_boolean(&mut self, what: &str) -> Result<PreType, ParseError> {
        if self.peek() == &TokenKind::Boolean {
            self.bump();
            return Ok(PreType::Boolean);
        }
        let (n, _) = self.ident(what)?;
        if self.peek() == &TokenKind::Amp {
            return self.err(format!("{what} must be a nominal type, not an intersection"));
        }
        Ok(PreType::nominal(n))
    }

    // ---- terms ----------------------------------------------------------
    //
    // term    := lambda | cond
    // cond    := unary ("?" term ":" term)?
    // unary   := "(" pretype ")" unary | postfix
    // postfix := primary ("." ident ("(" args ")")?)*
    // primary := "new" ident "(" args ")" | ident | "this" | "true"
    //          | "false" | "[" lambda ":" pretype "]" | "(" term ")"

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.lambda_ahead() {
            return self.lambda_term();
        }
        self.cond()
    }

    /// From a `(`, scan to the matching `)` and report whether `->`
    /// follows, i.e. whether a λ-expression starts here.
    fn lambda_ahead(&self) -> bool {
        if self.peek() != &TokenKind::LParen {
            return false;
        }
        let mut depth = 0usize;
        let mut i = self.at;
        loop {
            match &self.tokens[i].kind {
                TokenKind::LParen => depth += 1,
                TokenKind::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return self.tokens.get(i + 1).map(|t| &t.kind) == Some(&TokenKind::Arrow);
                    }
                }
                TokenKind::Eof => return false,
                _ => {}
            }
            i += 1;
        }
    }

    /// A cast starts here when the parenthesised tokens form a pre-type
    /// and the token after `)` can begin an operand.
    fn cast_ahead(&self) -> bool {
        if self.peek() != &TokenKind::LParen {
            return false;
        }
        let mut i = self.at + 1;
        let mut expect_name = true;
        loop {
            match (&self.tokens[i].kind, expect_name) {
                (TokenKind::Ident(_) | TokenKind::Boolean, true) => expect_name = false,
                (TokenKind::Amp, false) => expect_name = true,
                (TokenKind::RParen, false) => break,
                _ => return false,
            }
            i += 1;
        }
        matches!(
            self.tokens.get(i + 1).map(|t| &t.kind),
            Some(
                TokenKind::Ident(_)
                    | TokenKind::New
                    | TokenKind::This
                    | TokenKind::True
                    | TokenKind::False
                    | TokenKind::LParen
                    | TokenKind::LBracket
            )
        )
    }

    fn lambda_term(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        let params = self.lambda_params()?;
        self.expect(TokenKind::Arrow)?;
        let body = self.term()?;
        Ok(Term::at(TermKind::PureLambda(Lambda { params, body: Box::new(body) }), pos))
    }

    fn lambda_params(&mut self) -> Result<Vec<Param>, ParseError> {
        let open = self.pos();
        self.expect(TokenKind::LParen)?;
        let mut params: Vec<Param> = Vec::new();
        if self.peek() != &TokenKind::RParen {
            loop {
                let param = if self.peek() == &TokenKind::Boolean {
                    self.bump();
                    let (n, _) = self.ident("parameter name")?;
                    Param::typed(PreType::Boolean, n)
                } else {
                    let (first, _) = self.ident("parameter")?;
                    if let TokenKind::Ident(_) = self.peek() {
                        let (n, _) = self.ident("parameter name")?;
                        Param::typed(PreType::nominal(first), n)
                    } else {
                        Param::untyped(first)
                    }
                };
                if params.iter().any(|p| p.name == param.name) {
                    return self.err(format!("duplicate λ parameter `{}`", param.name));
                }
                params.push(param);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        let typed = params.iter().filter(|p| p.declared_type.is_some()).count();
        if typed != 0 && typed != params.len() {
            return Err(ParseError {
                kind: ParseErrorKind::MixedLambdaParams,
                pos: open,
                message: "λ parameters must be all typed or all untyped".into(),
            });
        }
        Ok(params)
    }

    fn cond(&mut self) -> Result<Term, ParseError> {
        let guard = self.unary()?;
        if self.eat(&TokenKind::Question) {
            let pos = guard.pos;
            let then = self.term()?;
            self.expect(TokenKind::Colon)?;
            let otherwise = self.term()?;
            return Ok(Term::at(
                TermKind::Cond(Box::new(guard), Box::new(then), Box::new(otherwise)),
                pos,
            ));
        }
        Ok(guard)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if self.cast_ahead() && !self.lambda_ahead() {
            let pos = self.pos();
            self.expect(TokenKind::LParen)?;
            let ty = self.pretype()?;
            self.expect(TokenKind::RParen)?;
            let operand = self.unary()?;
            return Ok(Term::at(TermKind::Cast(ty, Box::new(operand)), pos));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.primary()?;
        while self.peek() == &TokenKind::Dot {
            let pos = self.pos();
            self.bump();
            let (name, _) = self.ident("member name")?;
            if self.eat(&TokenKind::LParen) {
                let args = self.args()?;
                t = Term::at(TermKind::Invoke(Box::new(t), name, args), pos);
            } else {
                t = Term::at(TermKind::FieldAccess(Box::new(t), name), pos);
            }
        }
        Ok(t)
    }

    /// Arguments after the opening `(` has been consumed.
    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.peek() != &TokenKind::RParen {
            loop {
                args.push(self.term()?);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        Ok(args)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            TokenKind::New => {
                self.bump();
                let (class, _) = self.ident("class name")?;
                self.expect(TokenKind::LParen)?;
                let args = self.args()?;
                Ok(Term::at(TermKind::New(class, args), pos))
            }
            TokenKind::This => {
                self.bump();
                Ok(Term::at(TermKind::Var(Name::this()), pos))
            }
            TokenKind::True => {
                self.bump();
                Ok(Term::at(TermKind::BoolLit(true), pos))
            }
            TokenKind::False => {
                self.bump();
                Ok(Term::at(TermKind::BoolLit(false), pos))
            }
            TokenKind::Ident(s) => {
                self.bump();
                Ok(Term::at(TermKind::Var(Name::new(s)), pos))
            }
            TokenKind::LBracket => {
                // Decorated λ trace form: [params -> body : target]
                self.bump();
                let params = self.lambda_params()?;
                self.expect(TokenKind::Arrow)?;
                let body = self.term()?;
                self.expect(TokenKind::Colon)?;
                let target = self.pretype()?;
                self.expect(TokenKind::RBracket)?;
                Ok(Term::at(
                    TermKind::DecoratedLambda(
                        Lambda { params, body: Box::new(body) },
                        target,
                    ),
                    pos,
                ))
            }
            TokenKind::LParen => {
                if self.lambda_ahead() {
                    return self.lambda_term();
                }
                self.bump();
                let t = self.term()?;
                self.expect(TokenKind::RParen)?;
                Ok(t)
            }
            other => self.err(format!("expected a term, found {}", other.describe())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_simple_class_table() {
        let src = "class C extends Object { C() { super(); } C m(I x) { return x.n(); } }\n\
                   interface I { C n(); }\n\
                   interface J { C m(); }\n\
                   interface E { }";
        let program = parse_program(src).unwrap();
        assert_eq!(program.decls.len(), 4);
        let Decl::Class(c) = &program.decls[0] else { panic!("expected class") };
        assert_eq!(c.name.as_str(), "C");
        assert_eq!(c.superclass.as_str(), "Object");
        assert!(c.fields.is_empty());
        assert_eq!(c.methods.len(), 1);
        assert_eq!(c.methods[0].header.to_string(), "C m(I x)");
        assert_eq!(c.methods[0].body, Term::invoke(Term::var("x"), "n", vec![]));
        let Decl::Interface(e) = &program.decls[3] else { panic!("expected interface") };
        assert_eq!(e.name.as_str(), "E");
        assert!(e.headers.is_empty() && e.defaults.is_empty());
    }

    #[test]
    fn mixed_lambda_params_rejected() {
        let err = parse_term("(x, T y) -> x").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MixedLambdaParams);
    }

    #[test]
    fn invocation_with_lambda_argument() {
        let t = parse_term("new C().m(() -> new C())").unwrap();
        let expected = Term::invoke(
            Term::new_object("C", vec![]),
            "m",
            vec![Term::lambda(vec![], Term::new_object("C", vec![]))],
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn cast_of_lambda_to_intersection() {
        let t = parse_term("(I & E) (() -> new C())").unwrap();
        let expected = Term::cast(
            PreType::intersection(vec![Name::new("I"), Name::new("E")]),
            Term::lambda(vec![], Term::new_object("C", vec![])),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn conditional_with_lambda_branch() {
        let t = parse_term("true ? () -> new C() : new B()").unwrap();
        let expected = Term::cond(
            Term::bool_lit(true),
            Term::lambda(vec![], Term::new_object("C", vec![])),
            Term::new_object("B", vec![]),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn decorated_lambda_trace_form() {
        let t = parse_term("[() -> new C() : I]").unwrap();
        let expected = Term::decorated(vec![], Term::new_object("C", vec![]), PreType::nominal("I"));
        assert_eq!(t, expected);
    }

    #[test]
    fn duplicate_declaration_rejected() {
        let err = parse_program("interface I { } interface I { }").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateDecl);
        let err = parse_program("class Object extends Object { Object() { super(); } }").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateDecl);
    }

    #[test]
    fn boolean_never_intersects() {
        assert!(parse_pretype("boolean & I").is_err());
        assert!(parse_pretype("I & boolean").is_err());
        assert!(parse_pretype("boolean").is_ok());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_program("class C extends Object {\n  C() { super(); }\n  C m() { return ; }\n}")
            .unwrap_err();
        assert_eq!(err.pos.line, 3);
        let err = parse_term("x.$").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Lexical);
    }

    #[test]
    fn main_clause() {
        let p = parse_program("interface I { }\nmain = new Object();").unwrap();
        assert_eq!(p.main, Some(Term::new_object("Object", vec![])));
    }

    #[test]
    fn comments_are_skipped() {
        let p = parse_program("// a table\ninterface I { } // trailing\n").unwrap();
        assert_eq!(p.decls.len(), 1);
    }

    #[test]
    fn paren_versus_cast_disambiguation() {
        // `(x).f` is a parenthesised variable, not a cast.
        assert_eq!(parse_term("(x).f").unwrap(), Term::field(Term::var("x"), "f"));
        // `(C) x` is a cast.
        assert_eq!(
            parse_term("(C) x").unwrap(),
            Term::cast(PreType::nominal("C"), Term::var("x"))
        );
        // Nested casts associate to the right.
        assert_eq!(
            parse_term("(C) (I) x").unwrap(),
            Term::cast(
                PreType::nominal("C"),
                Term::cast(PreType::nominal("I"), Term::var("x"))
            )
        );
        // A typed λ is not a cast.
        assert_eq!(
            parse_term("(T y) -> y").unwrap(),
            Term::lambda(vec![Param::typed(PreType::nominal("T"), "y")], Term::var("y"))
        );
    }
}
