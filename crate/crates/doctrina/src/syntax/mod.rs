//! The theory-file language.
//!
//! ```text
//! logic classical            # optional: horn | coherent | classical
//! sort S
//! const a : S
//! fn f : S -> S
//! rel R : S
//! axiom ax1: R(x) |- R(f(x)) [x:S]
//! goal g1: true |- exists y:S. R(y)
//! ```
//!
//! `/\` binds tighter than `\/`, both associate to the left, and `~` is only
//! accepted under `logic classical`.

mod lexer;
mod parser;

use std::fmt;

use doctrina_core::herbrand::{
    reduce_forall_forall, ClassicalFormula, ExistentialGoal, ForallForall, Morleyiser, Negation,
};
use doctrina_core::logic::{Formula, Fragment, Sequent, Theory};
use doctrina_core::terms::{Context, Signature};

pub use lexer::Span;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message} (at `{found}`)")]
pub struct ParseError {
    pub span: Span,
    pub found: String,
    pub message: String,
}

impl ParseError {
    fn new(span: Span, found: String, message: impl Into<String>) -> Self {
        Self {
            span,
            found,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    Horn,
    Coherent,
    Classical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomDecl {
    pub name: String,
    pub context: Context,
    pub lhs: ClassicalFormula,
    pub rhs: ClassicalFormula,
}

/// `⊤ ⊢_outer ∃bound. matrix`, the matrix over `bound` followed by `outer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalDecl {
    pub name: String,
    pub outer: Context,
    pub bound: Context,
    pub matrix: ClassicalFormula,
}

/// A parsed file: one signature, named axioms and named goals, in source
/// syntax (negation not yet translated away).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryFile {
    pub logic: Option<Logic>,
    pub signature: Signature,
    pub axioms: Vec<AxiomDecl>,
    pub goals: Vec<GoalDecl>,
}

pub fn parse_theory(text: &str) -> Result<TheoryFile, ParseError> {
    parser::parse_theory(text)
}

/// Parses `lhs |- rhs [ctx]` against `sig`.
pub fn parse_sequent(
    text: &str,
    sig: &Signature,
    classical: bool,
) -> Result<(Context, ClassicalFormula, ClassicalFormula), ParseError> {
    parser::parse_sequent(text, sig, classical)
}

pub fn parse_context(text: &str, sig: &Signature) -> Result<Context, ParseError> {
    parser::parse_context(text, sig)
}

/// Parses `{ [w:S] body ; ... }` over `base`; `{}` is the empty element.
pub fn parse_element(
    text: &str,
    sig: &Signature,
    base: &Context,
    classical: bool,
) -> Result<Vec<(Context, ClassicalFormula)>, ParseError> {
    parser::parse_element(text, sig, base, classical)
}

#[derive(Debug, Clone)]
pub struct CompiledGoal {
    pub name: String,
    pub goal: ExistentialGoal,
    /// Set when the goal has the shape `∃x. ~φ(x) \/ ψ(y)`.
    pub forall_forall: Option<ForallForall>,
}

/// A file translated to a core theory. Classical files are Morleyised; the
/// translation state is kept so that further formulas can be added.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub theory: Theory,
    pub goals: Vec<CompiledGoal>,
    pub negations: Vec<Negation>,
    morley: Option<Morleyiser>,
}

impl TheoryFile {
    pub fn is_classical(&self) -> bool {
        self.logic == Some(Logic::Classical)
    }

    pub fn fragment(&self) -> Fragment {
        match self.logic {
            Some(Logic::Horn) => Fragment::Horn,
            Some(Logic::Classical) => Fragment::ClassicalMorleyised,
            Some(Logic::Coherent) | None => Fragment::Coherent,
        }
    }

    pub fn compile(&self) -> Result<Compiled, doctrina_core::Error> {
        if self.is_classical() {
            return self.compile_classical();
        }
        let plain = |f: &ClassicalFormula| {
            f.to_coherent()
                .ok_or_else(|| doctrina_core::Error::Fragment("negation outside `logic classical`".into()))
        };
        let mut theory = Theory::new(self.signature.clone(), self.fragment());
        for ax in &self.axioms {
            let seq = Sequent::new(&self.signature, ax.context.clone(), plain(&ax.lhs)?, plain(&ax.rhs)?)?;
            theory.add_axiom(&ax.name, seq)?;
        }
        let goals = self
            .goals
            .iter()
            .map(|g| {
                Ok(CompiledGoal {
                    name: g.name.clone(),
                    goal: ExistentialGoal::new(&theory, g.outer.clone(), g.bound.clone(), plain(&g.matrix)?)?,
                    forall_forall: None,
                })
            })
            .collect::<Result<_, doctrina_core::Error>>()?;
        Ok(Compiled {
            theory,
            goals,
            negations: Vec::new(),
            morley: None,
        })
    }

    fn compile_classical(&self) -> Result<Compiled, doctrina_core::Error> {
        let mut m = Morleyiser::new(self.signature.clone());
        for ax in &self.axioms {
            m.add_axiom(&ax.name, &ax.context, &ax.lhs, &ax.rhs)?;
        }
        let mut goals = Vec::new();
        for g in &self.goals {
            let ff = ForallForall::detect(&mut m, &g.bound, &g.outer, &g.matrix)?;
            let goal = match &ff {
                Some(ff) => reduce_forall_forall(&mut m, ff)?,
                None => {
                    let matrix = m.translate(&g.bound.concat(&g.outer), &g.matrix)?;
                    ExistentialGoal {
                        outer: g.outer.clone(),
                        bound: g.bound.clone(),
                        matrix,
                    }
                }
            };
            goals.push(CompiledGoal {
                name: g.name.clone(),
                goal,
                forall_forall: ff,
            });
        }
        let done = m.clone().finish()?;
        Ok(Compiled {
            theory: done.theory,
            goals,
            negations: done.negations,
            morley: Some(m),
        })
    }
}

impl Compiled {
    pub fn signature(&self) -> &Signature {
        self.theory.signature()
    }

    pub fn is_classical(&self) -> bool {
        self.morley.is_some()
    }

    pub fn goal(&self, name: &str) -> Option<&CompiledGoal> {
        self.goals.iter().find(|g| g.name == name)
    }

    /// Translates further formulas, each over its context. Classical input
    /// may introduce new symbols, so the matching theory is returned too.
    pub fn translate(
        &self,
        formulas: &[(Context, ClassicalFormula)],
    ) -> Result<(Theory, Vec<Formula>), doctrina_core::Error> {
        let Some(m) = &self.morley else {
            let out = formulas
                .iter()
                .map(|(_, f)| {
                    f.to_coherent()
                        .ok_or_else(|| doctrina_core::Error::Fragment("negation outside `logic classical`".into()))
                })
                .collect::<Result<_, _>>()?;
            return Ok((self.theory.clone(), out));
        };
        let mut m = m.clone();
        let out = formulas
            .iter()
            .map(|(ctx, f)| m.translate(ctx, f))
            .collect::<Result<_, _>>()?;
        Ok((m.finish()?.theory, out))
    }
}

impl fmt::Display for TheoryFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = &self.signature;
        if let Some(logic) = self.logic {
            let name = match logic {
                Logic::Horn => "horn",
                Logic::Coherent => "coherent",
                Logic::Classical => "classical",
            };
            writeln!(f, "logic {name}\n")?;
        }
        for s in sig.sorts() {
            writeln!(f, "sort {}", sig.sort_name(s))?;
        }
        let sorts = |args: &[doctrina_core::terms::SortId]| {
            args.iter().map(|s| sig.sort_name(*s)).collect::<Vec<_>>().join(" * ")
        };
        for (_, d) in sig.functions() {
            if d.args.is_empty() {
                writeln!(f, "const {} : {}", d.name, sig.sort_name(d.result))?;
            } else {
                writeln!(f, "fn {} : {} -> {}", d.name, sorts(&d.args), sig.sort_name(d.result))?;
            }
        }
        for (_, d) in sig.relations() {
            if d.args.is_empty() {
                writeln!(f, "rel {}", d.name)?;
            } else {
                writeln!(f, "rel {} : {}", d.name, sorts(&d.args))?;
            }
        }
        if !self.axioms.is_empty() {
            writeln!(f)?;
        }
        for ax in &self.axioms {
            write!(
                f,
                "axiom {}: {} |- {}",
                ax.name,
                ax.lhs.display(sig, &ax.context),
                ax.rhs.display(sig, &ax.context)
            )?;
            write_context(f, sig, &ax.context)?;
            writeln!(f)?;
        }
        if !self.goals.is_empty() {
            writeln!(f)?;
        }
        for g in &self.goals {
            writeln!(f, "goal {}: {}", g.name, DisplayGoal::classical(sig, g))?;
        }
        Ok(())
    }
}

fn write_context(f: &mut fmt::Formatter<'_>, sig: &Signature, ctx: &Context) -> fmt::Result {
    if ctx.is_empty() {
        Ok(())
    } else {
        write!(f, " [{}]", ctx.display(sig))
    }
}

enum GoalBody<'a> {
    Classical(&'a ClassicalFormula),
    Coherent(&'a Formula),
}

/// `true |- exists bound. matrix [outer]`.
pub struct DisplayGoal<'a> {
    sig: &'a Signature,
    outer: &'a Context,
    bound: &'a Context,
    body: GoalBody<'a>,
}

impl<'a> DisplayGoal<'a> {
    pub fn classical(sig: &'a Signature, g: &'a GoalDecl) -> Self {
        Self {
            sig,
            outer: &g.outer,
            bound: &g.bound,
            body: GoalBody::Classical(&g.matrix),
        }
    }

    pub fn coherent(sig: &'a Signature, g: &'a ExistentialGoal) -> Self {
        Self {
            sig,
            outer: &g.outer,
            bound: &g.bound,
            body: GoalBody::Coherent(&g.matrix),
        }
    }
}

impl fmt::Display for DisplayGoal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let full = self.bound.concat(self.outer);
        write!(f, "true |- exists {}. ", self.bound.display(self.sig))?;
        match self.body {
            GoalBody::Classical(m) => write!(f, "{}", m.display(self.sig, &full))?,
            GoalBody::Coherent(m) => write!(f, "{}", m.display(self.sig, &full))?,
        }
        write_context(f, self.sig, self.outer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_are_counted() {
        let file = parse_theory("sort S  const a : S  rel R : S  axiom ax1: true |- R(a)").unwrap();
        let sig = &file.signature;
        assert_eq!(
            (sig.sort_count(), sig.function_count(), sig.relation_count()),
            (1, 1, 1)
        );
        assert_eq!(file.axioms.len(), 1);
        assert!(file.axioms[0].context.is_empty());
    }

    #[test]
    fn goal_contexts() {
        let file = parse_theory("sort S rel R : S fn f : S -> S  goal g: true |- exists y:S. R(y)").unwrap();
        let g = &file.goals[0];
        assert!(g.outer.is_empty());
        assert_eq!(g.bound.len(), 1);
        assert_eq!(g.bound.name_of(0), "y");
    }

    #[test]
    fn printing_reparses_to_the_same_file() {
        let text = "logic classical
sort S sort T
const a : S  fn f : S * T -> S  rel R : S  rel E : S * T  rel P
axiom one: R(x) /\\ (E(x, t) \\/ P) |- ~R(f(x, t)) \\/ x = a [x:S, t:T]
axiom two: ~~P |- false
goal g: true |- exists y:S. ~R(y) \\/ E(y, u) /\\ P [u:T]";
        let file = parse_theory(text).unwrap();
        let printed = file.to_string();
        assert_eq!(parse_theory(&printed).unwrap(), file);
        assert!(printed.contains("axiom two: ~~P() |- false\n"));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_theory("sort S\nrel R : S\naxiom a: R(y) |- R(x) [x:S]").unwrap_err();
        assert_eq!((err.span.line, err.span.col, err.found.as_str()), (3, 12, "y"));
        let err = parse_theory("sort S\nconst a : T").unwrap_err();
        assert_eq!(err.message, "unknown sort `T`");
        let err = parse_theory("sort S rel R : S\naxiom a: ~R(x) |- false [x:S]").unwrap_err();
        assert_eq!((err.span.line, err.span.col), (2, 10));
        let err = parse_theory("sort S rel R : S\naxiom a: exists x:S. R(x) |- false").unwrap_err();
        assert!(err.message.contains("universal"));
        let err = parse_theory("sort S fn f : S -> S rel R : S\naxiom a: R(f) |- false").unwrap_err();
        assert!(err.message.contains("takes 1 arguments"));
        let err = parse_theory("sort S sort T const a : S const b : T\naxiom e: true |- a = b").unwrap_err();
        assert_eq!(err.message, "expected sort S, found T");
    }

    #[test]
    fn duplicates_are_rejected() {
        assert!(parse_theory("sort S sort S").is_err());
        assert!(parse_theory("sort S const a : S rel a : S").is_err());
        assert!(parse_theory("sort S rel R : S axiom x: true |- true axiom x: true |- true").is_err());
        assert!(parse_theory("sort S const a : S axiom x: true |- true [a:S]").is_err());
        assert!(parse_theory("sort S rel R : S axiom x: true |- true [y:S, y:S]").is_err());
    }

    #[test]
    fn horn_files_reject_disjunction() {
        let err = parse_theory("logic horn sort S rel R : S axiom x: true |- R(x) \\/ R(x) [x:S]").unwrap_err();
        assert_eq!(err.message, "disjunction in a Horn theory");
    }

    #[test]
    fn classical_goals_of_forall_shape_are_reduced() {
        let file = parse_theory(
            "logic classical sort S fn g : S -> S rel P : S
             goal ff: true |- exists x:S. ~P(x) \\/ P(g(y)) [y:S]",
        )
        .unwrap();
        let c = file.compile().unwrap();
        let g = &c.goals[0];
        assert!(g.forall_forall.is_some());
        assert_eq!(
            DisplayGoal::coherent(c.signature(), &g.goal).to_string(),
            "true |- exists x:S. NP(x) \\/ P(g(y)) [y:S]"
        );
        assert_eq!(c.theory.axioms().len(), 2);
    }

    #[test]
    fn elements_and_sequents() {
        let file = parse_theory("sort S rel R : S rel Q : S").unwrap();
        let sig = &file.signature;
        let base = parse_context("[x:S]", sig).unwrap();
        let pairs = parse_element("{ [y:S, z:S] R(y) /\\ Q(z) ; Q(x) }", sig, &base, false).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].0.len(), 2);
        assert!(pairs[1].0.is_empty());
        assert!(parse_element("{}", sig, &base, false).unwrap().is_empty());
        assert!(parse_element("{ [x:S] R(x) }", sig, &base, false).is_err());
        let (ctx, lhs, rhs) = parse_sequent("R(x) |- R(x) \\/ Q(x) [x:S]", sig, false).unwrap();
        assert_eq!(ctx.len(), 1);
        assert_ne!(lhs, rhs);
    }
}
