//! Recursive-descent parser producing name-level syntax, and the resolver
//! that turns it into well-sorted core formulas against a signature.

use doctrina_core::herbrand::ClassicalFormula;
use doctrina_core::terms::{Context, Signature, SortId, Term};

use super::lexer::{lex, Span, Tok, Token};
use super::{AxiomDecl, GoalDecl, Logic, ParseError, TheoryFile};

const KEYWORDS: &[&str] = &[
    "sort", "const", "fn", "rel", "axiom", "goal", "logic", "true", "false", "exists",
];

#[derive(Debug, Clone)]
struct RawTerm {
    name: String,
    args: Option<Vec<RawTerm>>,
    span: Span,
}

#[derive(Debug, Clone)]
enum RawFormula {
    True,
    False,
    Eq(RawTerm, RawTerm),
    Atom(RawTerm),
    And(Box<RawFormula>, Box<RawFormula>),
    Or(Box<RawFormula>, Box<RawFormula>),
    Not(Box<RawFormula>, Span),
}

struct RawBinding {
    name: String,
    name_span: Span,
    sort: String,
    sort_span: Span,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Self {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let t = self.peek();
        ParseError::new(t.span, t.tok.to_string(), format!("expected {what}"))
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(&format!("`{tok}`")))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Name(n) if n == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Span, ParseError> {
        if self.at_keyword(kw) {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn name(&mut self) -> Result<(String, Span), ParseError> {
        match &self.peek().tok {
            Tok::Name(n) if !KEYWORDS.contains(&n.as_str()) => {
                let t = self.next();
                let Tok::Name(n) = t.tok else { unreachable!() };
                Ok((n, t.span))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let (name, span) = self.name()?;
        let args = if self.eat(&Tok::LParen) {
            let mut args = Vec::new();
            if !self.eat(&Tok::RParen) {
                loop {
                    args.push(self.term()?);
                    if self.eat(&Tok::RParen) {
                        break;
                    }
                    self.expect(Tok::Comma)?;
                }
            }
            Some(args)
        } else {
            None
        };
        Ok(RawTerm { name, args, span })
    }

    fn formula(&mut self) -> Result<RawFormula, ParseError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = RawFormula::Or(Box::new(f), Box::new(self.conjunction()?));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<RawFormula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = RawFormula::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<RawFormula, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Not => {
                self.next();
                Ok(RawFormula::Not(Box::new(self.unary()?), t.span))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Name(n) if n == "true" => {
                self.next();
                Ok(RawFormula::True)
            }
            Tok::Name(n) if n == "false" => {
                self.next();
                Ok(RawFormula::False)
            }
            Tok::Name(n) if n == "exists" => Err(ParseError::new(
                t.span,
                n.clone(),
                "quantifiers may only head a goal; axioms must be universal",
            )),
            Tok::Name(_) => {
                let lhs = self.term()?;
                if self.peek().tok == Tok::Eq {
                    self.next();
                    let rhs = self.term()?;
                    Ok(RawFormula::Eq(lhs, rhs))
                } else {
                    Ok(RawFormula::Atom(lhs))
                }
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn bindings(&mut self, close: Option<Tok>) -> Result<Vec<RawBinding>, ParseError> {
        let mut out = Vec::new();
        if close.as_ref().is_some_and(|c| &self.peek().tok == c) {
            return Ok(out);
        }
        loop {
            let (name, name_span) = self.name()?;
            self.expect(Tok::Colon)?;
            let (sort, sort_span) = self.name()?;
            out.push(RawBinding {
                name,
                name_span,
                sort,
                sort_span,
            });
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn opt_context(&mut self) -> Result<Vec<RawBinding>, ParseError> {
        if self.eat(&Tok::LBracket) {
            let b = self.bindings(Some(Tok::RBracket))?;
            self.expect(Tok::RBracket)?;
            Ok(b)
        } else {
            Ok(Vec::new())
        }
    }

    fn sort_list(&mut self, sig: &Signature) -> Result<Vec<SortId>, ParseError> {
        let mut out = vec![self.sort_ref(sig)?];
        while self.eat(&Tok::Star) {
            out.push(self.sort_ref(sig)?);
        }
        Ok(out)
    }

    fn sort_ref(&mut self, sig: &Signature) -> Result<SortId, ParseError> {
        let (name, span) = self.name()?;
        sig.sort(&name)
            .ok_or_else(|| ParseError::new(span, name.clone(), format!("unknown sort `{name}`")))
    }
}

/// Resolves names against a signature, checking sorts as it goes.
struct Resolver<'a> {
    sig: &'a Signature,
    negation: bool,
}

impl Resolver<'_> {
    fn context(&self, raw: &[RawBinding], outer: Option<&Context>) -> Result<Context, ParseError> {
        let mut ctx = Context::empty();
        for b in raw {
            let sort = self
                .sig
                .sort(&b.sort)
                .ok_or_else(|| ParseError::new(b.sort_span, b.sort.clone(), format!("unknown sort `{}`", b.sort)))?;
            if self.sig.function(&b.name).is_some() || self.sig.relation(&b.name).is_some() {
                return Err(ParseError::new(
                    b.name_span,
                    b.name.clone(),
                    "variable name clashes with a declared symbol",
                ));
            }
            let clash = ctx.index_of(&b.name).is_some() || outer.is_some_and(|o| o.index_of(&b.name).is_some());
            if clash {
                return Err(ParseError::new(b.name_span, b.name.clone(), "variable bound twice"));
            }
            ctx.push(b.name.clone(), sort).expect("names checked above");
        }
        Ok(ctx)
    }

    fn term(&self, raw: &RawTerm, ctx: &Context) -> Result<(Term, SortId), ParseError> {
        if let (Some(i), None) = (ctx.index_of(&raw.name), &raw.args) {
            return Ok((Term::Var(i), ctx.sort_of(i)));
        }
        let Some(f) = self.sig.function(&raw.name) else {
            let what = if self.sig.relation(&raw.name).is_some() {
                "relation used as a term"
            } else {
                "unknown name"
            };
            return Err(ParseError::new(raw.span, raw.name.clone(), what));
        };
        let decl = self.sig.func(f);
        let args = raw.args.as_deref().unwrap_or_default();
        if args.len() != decl.args.len() {
            return Err(ParseError::new(
                raw.span,
                raw.name.clone(),
                format!("`{}` takes {} arguments, got {}", raw.name, decl.args.len(), args.len()),
            ));
        }
        let mut out = Vec::with_capacity(args.len());
        for (a, want) in args.iter().zip(&decl.args) {
            let (t, got) = self.term(a, ctx)?;
            self.same_sort(a.span, &a.name, *want, got)?;
            out.push(t);
        }
        Ok((Term::App(f, out), decl.result))
    }

    fn same_sort(&self, span: Span, found: &str, want: SortId, got: SortId) -> Result<(), ParseError> {
        if want == got {
            return Ok(());
        }
        Err(ParseError::new(
            span,
            found.to_owned(),
            format!(
                "expected sort {}, found {}",
                self.sig.sort_name(want),
                self.sig.sort_name(got)
            ),
        ))
    }

    fn formula(&self, raw: &RawFormula, ctx: &Context) -> Result<ClassicalFormula, ParseError> {
        Ok(match raw {
            RawFormula::True => ClassicalFormula::True,
            RawFormula::False => ClassicalFormula::False,
            RawFormula::Eq(l, r) => {
                let (lt, ls) = self.term(l, ctx)?;
                let (rt, rs) = self.term(r, ctx)?;
                self.same_sort(r.span, &r.name, ls, rs)?;
                ClassicalFormula::Eq(lt, rt)
            }
            RawFormula::Atom(t) => {
                let Some(r) = self.sig.relation(&t.name) else {
                    return Err(ParseError::new(
                        t.span,
                        t.name.clone(),
                        "expected a relation or an equation",
                    ));
                };
                let decl = self.sig.rel(r);
                let args = t.args.as_deref().unwrap_or_default();
                if args.len() != decl.args.len() {
                    return Err(ParseError::new(
                        t.span,
                        t.name.clone(),
                        format!("`{}` takes {} arguments, got {}", t.name, decl.args.len(), args.len()),
                    ));
                }
                let mut out = Vec::with_capacity(args.len());
                for (a, want) in args.iter().zip(&decl.args) {
                    let (term, got) = self.term(a, ctx)?;
                    self.same_sort(a.span, &a.name, *want, got)?;
                    out.push(term);
                }
                ClassicalFormula::Rel(r, out)
            }
            RawFormula::And(a, b) => ClassicalFormula::and(self.formula(a, ctx)?, self.formula(b, ctx)?),
            RawFormula::Or(a, b) => ClassicalFormula::or(self.formula(a, ctx)?, self.formula(b, ctx)?),
            RawFormula::Not(a, span) => {
                if !self.negation {
                    return Err(ParseError::new(
                        *span,
                        "~".into(),
                        "negation needs the pragma `logic classical`",
                    ));
                }
                ClassicalFormula::not(self.formula(a, ctx)?)
            }
        })
    }
}

pub(super) fn parse_theory(text: &str) -> Result<TheoryFile, ParseError> {
    let mut p = Parser::new(text)?;
    let mut file = TheoryFile {
        logic: None,
        signature: Signature::new(),
        axioms: Vec::new(),
        goals: Vec::new(),
    };
    let mut first = true;
    loop {
        let t = p.peek().clone();
        let kw = match &t.tok {
            Tok::Eof => return Ok(file),
            Tok::Name(n) => n.clone(),
            _ => return Err(p.unexpected("a declaration")),
        };
        match kw.as_str() {
            "logic" => {
                p.next();
                if !first {
                    return Err(ParseError::new(t.span, kw, "`logic` must come first"));
                }
                let (name, span) = p.name()?;
                file.logic = Some(match name.as_str() {
                    "horn" => Logic::Horn,
                    "coherent" => Logic::Coherent,
                    "classical" => Logic::Classical,
                    _ => {
                        return Err(ParseError::new(
                            span,
                            name,
                            "expected `horn`, `coherent` or `classical`",
                        ))
                    }
                });
            }
            "sort" => {
                p.next();
                let (name, span) = p.name()?;
                file.signature
                    .add_sort(&name)
                    .map_err(|e| ParseError::new(span, name, e.to_string()))?;
            }
            "const" => {
                p.next();
                let (name, span) = p.name()?;
                p.expect(Tok::Colon)?;
                let sort = p.sort_ref(&file.signature)?;
                file.signature
                    .add_constant(&name, sort)
                    .map_err(|e| ParseError::new(span, name, e.to_string()))?;
            }
            "fn" => {
                p.next();
                let (name, span) = p.name()?;
                p.expect(Tok::Colon)?;
                let args = p.sort_list(&file.signature)?;
                p.expect(Tok::Arrow)?;
                let result = p.sort_ref(&file.signature)?;
                file.signature
                    .add_function(&name, &args, result)
                    .map_err(|e| ParseError::new(span, name, e.to_string()))?;
            }
            "rel" => {
                p.next();
                let (name, span) = p.name()?;
                let args = if p.eat(&Tok::Colon) {
                    p.sort_list(&file.signature)?
                } else {
                    Vec::new()
                };
                file.signature
                    .add_relation(&name, &args)
                    .map_err(|e| ParseError::new(span, name, e.to_string()))?;
            }
            "axiom" => {
                p.next();
                let (name, span) = p.name()?;
                if file.axioms.iter().any(|a| a.name == name) {
                    return Err(ParseError::new(span, name, "duplicate axiom name"));
                }
                p.expect(Tok::Colon)?;
                let lhs = p.formula()?;
                p.expect(Tok::Turnstile)?;
                let rhs = p.formula()?;
                let raw_ctx = p.opt_context()?;
                let r = Resolver {
                    sig: &file.signature,
                    negation: file.logic == Some(Logic::Classical),
                };
                let context = r.context(&raw_ctx, None)?;
                let lhs = r.formula(&lhs, &context)?;
                let rhs = r.formula(&rhs, &context)?;
                if file.logic == Some(Logic::Horn) {
                    let horn = |f: &ClassicalFormula| f.to_coherent().is_some_and(|f| f.is_horn());
                    if !horn(&lhs) || !horn(&rhs) {
                        return Err(ParseError::new(span, name, "disjunction in a Horn theory"));
                    }
                }
                file.axioms.push(AxiomDecl {
                    name,
                    context,
                    lhs,
                    rhs,
                });
            }
            "goal" => {
                p.next();
                let (name, span) = p.name()?;
                if file.goals.iter().any(|g| g.name == name) {
                    return Err(ParseError::new(span, name, "duplicate goal name"));
                }
                p.expect(Tok::Colon)?;
                p.keyword("true")?;
                p.expect(Tok::Turnstile)?;
                p.keyword("exists")?;
                let raw_bound = p.bindings(None)?;
                p.expect(Tok::Dot)?;
                let matrix = p.formula()?;
                let raw_outer = p.opt_context()?;
                let r = Resolver {
                    sig: &file.signature,
                    negation: file.logic == Some(Logic::Classical),
                };
                let outer = r.context(&raw_outer, None)?;
                let bound = r.context(&raw_bound, Some(&outer))?;
                let matrix = r.formula(&matrix, &bound.concat(&outer))?;
                file.goals.push(GoalDecl {
                    name,
                    outer,
                    bound,
                    matrix,
                });
            }
            _ => return Err(p.unexpected("a declaration")),
        }
        first = false;
    }
}

/// `lhs |- rhs [ctx]` over `sig`.
pub(super) fn parse_sequent(
    text: &str,
    sig: &Signature,
    negation: bool,
) -> Result<(Context, ClassicalFormula, ClassicalFormula), ParseError> {
    let mut p = Parser::new(text)?;
    let lhs = p.formula()?;
    p.expect(Tok::Turnstile)?;
    let rhs = p.formula()?;
    let raw_ctx = p.opt_context()?;
    p.end()?;
    let r = Resolver { sig, negation };
    let ctx = r.context(&raw_ctx, None)?;
    Ok((ctx.clone(), r.formula(&lhs, &ctx)?, r.formula(&rhs, &ctx)?))
}

/// A context, with or without surrounding brackets.
pub(super) fn parse_context(text: &str, sig: &Signature) -> Result<Context, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = if p.eat(&Tok::LBracket) {
        let b = p.bindings(Some(Tok::RBracket))?;
        p.expect(Tok::RBracket)?;
        b
    } else if p.peek().tok == Tok::Eof {
        Vec::new()
    } else {
        p.bindings(None)?
    };
    p.end()?;
    Resolver { sig, negation: false }.context(&raw, None)
}

/// `{ [w:S] body ; ... }` with bodies over the witness followed by `base`.
pub(super) fn parse_element(
    text: &str,
    sig: &Signature,
    base: &Context,
    negation: bool,
) -> Result<Vec<(Context, ClassicalFormula)>, ParseError> {
    let mut p = Parser::new(text)?;
    p.expect(Tok::LBrace)?;
    let mut raw = Vec::new();
    if !p.eat(&Tok::RBrace) {
        loop {
            let w = p.opt_context()?;
            let body = p.formula()?;
            raw.push((w, body));
            if p.eat(&Tok::RBrace) {
                break;
            }
            p.expect(Tok::Semi)?;
        }
    }
    p.end()?;
    let r = Resolver { sig, negation };
    raw.iter()
        .map(|(w, body)| {
            let w = r.context(w, Some(base))?;
            let f = r.formula(body, &w.concat(base))?;
            Ok((w, f))
        })
        .collect()
}
