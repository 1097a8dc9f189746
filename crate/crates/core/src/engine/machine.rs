//! Depth-first SLD resolution with chronological backtracking.
//!
//! The continuation is a persistent linked list of goals, so a choice point
//! captures "what remains to be done" by holding a pointer to it. Choice
//! points also record a store mark; backtracking undoes every binding made
//! since and releases the cells allocated since.

use std::sync::Arc;

use crate::dcg;
use crate::error::EngineError;
use crate::store::Mark;
use crate::term::{PredKey, Term};
use crate::unify::{unify, RenameMap, Template};

use super::db::Clause;
use super::{builtins, Engine};

type Cont = Option<Arc<Frame>>;

struct Frame {
    goal: Goal,
    next: Cont,
    depth: usize,
}

enum Goal {
    /// Solve a term. The barrier is the choice-point height `!` cuts back to.
    Call(Term, usize),
    /// Drop every choice point above the given height.
    CutTo(usize),
}

enum Alternative {
    Clauses { goal: Term, clauses: Arc<Vec<Clause>>, next: usize, cont: Cont },
    Resume(Cont),
}

struct ChoicePoint {
    alt: Alternative,
    mark: Mark,
}

pub(crate) struct Machine {
    goals: Cont,
    choices: Vec<ChoicePoint>,
    max_frames: usize,
}

impl Machine {
    pub(crate) fn new(goal: Term, max_frames: usize) -> Self {
        let mut m = Machine { goals: None, choices: Vec::new(), max_frames };
        m.goals = Some(Arc::new(Frame { goal: Goal::Call(goal, 0), next: None, depth: 1 }));
        m
    }

    fn push(&mut self, goal: Goal) -> Result<(), EngineError> {
        let depth = self.goals.as_ref().map_or(0, |f| f.depth) + 1;
        if depth > self.max_frames {
            return Err(EngineError::Resource(format!("goal stack exceeded {} frames", self.max_frames)));
        }
        self.goals = Some(Arc::new(Frame { goal, next: self.goals.take(), depth }));
        Ok(())
    }

    fn push_choice(&mut self, alt: Alternative, mark: Mark) -> Result<(), EngineError> {
        if self.choices.len() >= self.max_frames {
            return Err(EngineError::Resource(format!("choice stack exceeded {} frames", self.max_frames)));
        }
        self.choices.push(ChoicePoint { alt, mark });
        Ok(())
    }

    /// Runs until the goal list is empty (a solution) or no alternative is
    /// left.
    pub(crate) fn run(&mut self, eng: &mut Engine) -> Result<bool, EngineError> {
        loop {
            let Some(frame) = self.goals.take() else { return Ok(true) };
            self.goals = frame.next.clone();
            let ok = match &frame.goal {
                Goal::CutTo(height) => {
                    self.choices.truncate(*height);
                    true
                }
                Goal::Call(t, barrier) => self.call(eng, t, *barrier)?,
            };
            if !ok && !self.backtrack(eng)? {
                return Ok(false);
            }
        }
    }

    /// Resumes after a solution, looking for the next one.
    pub(crate) fn retry(&mut self, eng: &mut Engine) -> Result<bool, EngineError> {
        if !self.backtrack(eng)? {
            return Ok(false);
        }
        self.run(eng)
    }

    fn backtrack(&mut self, eng: &mut Engine) -> Result<bool, EngineError> {
        while let Some(cp) = self.choices.pop() {
            eng.store.backtrack_to(cp.mark);
            match cp.alt {
                Alternative::Resume(cont) => {
                    self.goals = cont;
                    return Ok(true);
                }
                Alternative::Clauses { goal, clauses, next, cont } => {
                    if self.try_clauses(eng, goal, clauses, next, cont)? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    fn try_clauses(
        &mut self,
        eng: &mut Engine,
        goal: Term,
        clauses: Arc<Vec<Clause>>,
        start: usize,
        cont: Cont,
    ) -> Result<bool, EngineError> {
        let barrier = self.choices.len();
        for i in start..clauses.len() {
            let mark = eng.store.mark();
            let clause = &clauses[i];
            let mut renamer = RenameMap::new(clause.var_base, clause.var_count);
            let head = renamer.rename(&mut eng.store, &clause.head);
            if unify(&mut eng.store, &head, &goal, eng.config.occurs_check) {
                if i + 1 < clauses.len() {
                    let alt = Alternative::Clauses {
                        goal: goal.clone(),
                        clauses: clauses.clone(),
                        next: i + 1,
                        cont: cont.clone(),
                    };
                    self.push_choice(alt, mark)?;
                }
                self.goals = cont;
                if !clause.body.is_atom("true") {
                    let body = renamer.rename(&mut eng.store, &clause.body);
                    self.push(Goal::Call(body, barrier))?;
                }
                return Ok(true);
            }
            eng.store.backtrack_to(mark);
        }
        Ok(false)
    }

    fn call(&mut self, eng: &mut Engine, t: &Term, barrier: usize) -> Result<bool, EngineError> {
        let goal = eng.store.deref(t);
        // A variable in goal position is a metacall: cuts inside stay local.
        let barrier = if t.is_var() { self.choices.len() } else { barrier };
        let (name, arity) = match &goal {
            Term::Var(_) | Term::EVar(_) => return Err(EngineError::Instantiation("call/1".into())),
            Term::Int(i) => {
                return Err(EngineError::Type {
                    context: "call/1".into(),
                    expected: "callable",
                    culprit: i.to_string(),
                })
            }
            g => {
                let (name, arity) = g.functor().expect("callable");
                (name.clone(), arity)
            }
        };
        let args = goal.args();
        match (name.as_str(), arity) {
            ("true", 0) => Ok(true),
            ("fail" | "false", 0) => Ok(false),
            ("!", 0) => {
                self.choices.truncate(barrier);
                Ok(true)
            }
            (",", 2) => {
                self.push(Goal::Call(args[1].clone(), barrier))?;
                self.push(Goal::Call(args[0].clone(), barrier))?;
                Ok(true)
            }
            (";", 2) => {
                let left = eng.store.deref(&args[0]);
                let height = self.choices.len();
                let mark = eng.store.mark();
                let mut alt_cont = self.goals.clone();
                std::mem::swap(&mut self.goals, &mut alt_cont);
                self.push(Goal::Call(args[1].clone(), barrier))?;
                let else_cont = std::mem::replace(&mut self.goals, alt_cont);
                self.push_choice(Alternative::Resume(else_cont), mark)?;
                if left.is_functor("->", 2) {
                    self.if_then(&left.args()[0], &left.args()[1], height, barrier)?;
                } else {
                    self.push(Goal::Call(left, barrier))?;
                }
                Ok(true)
            }
            ("->", 2) => {
                let height = self.choices.len();
                self.if_then(&args[0], &args[1], height, barrier)?;
                Ok(true)
            }
            ("\\+", 1) => {
                // (G -> fail ; true)
                let height = self.choices.len();
                let mark = eng.store.mark();
                self.push_choice(Alternative::Resume(self.goals.clone()), mark)?;
                self.if_then(&args[0], &Term::atom("fail"), height, barrier)?;
                Ok(true)
            }
            ("call", 1) => {
                self.push(Goal::Call(args[0].clone(), self.choices.len()))?;
                Ok(true)
            }
            ("findall", 3) => self.findall(eng, &args[0], &args[1], &args[2]),
            ("phrase", 2 | 3) => {
                let body = eng.store.deref(&args[0]);
                if body.is_var() {
                    return Err(EngineError::Instantiation(format!("phrase/{arity}")));
                }
                let rest = if arity == 3 { args[2].clone() } else { Term::nil() };
                let goal =
                    dcg::translate_body(&mut eng.store, &body, args[1].clone(), rest).map_err(EngineError::Grammar)?;
                self.push(Goal::Call(goal, self.choices.len()))?;
                Ok(true)
            }
            _ => {
                if let Some(result) = builtins::call_deterministic(eng, name.as_str(), args) {
                    return result;
                }
                let key = PredKey { name, arity };
                match eng.db.clauses(&key).cloned() {
                    Some(clauses) => {
                        let cont = self.goals.take();
                        self.try_clauses(eng, goal, clauses, 0, cont)
                    }
                    None if eng.config.unknown_fail => Ok(false),
                    None => Err(EngineError::Existence(key.to_string())),
                }
            }
        }
    }

    /// Schedules `cond` (with local cut), a cut back to `height`, then `then`.
    fn if_then(&mut self, cond: &Term, then: &Term, height: usize, barrier: usize) -> Result<(), EngineError> {
        self.push(Goal::Call(then.clone(), barrier))?;
        self.push(Goal::CutTo(height))?;
        self.push(Goal::Call(cond.clone(), self.choices.len()))
    }

    fn findall(&mut self, eng: &mut Engine, template: &Term, goal: &Term, result: &Term) -> Result<bool, EngineError> {
        let mark = eng.store.mark();
        let mut sub = Machine::new(goal.clone(), self.max_frames);
        let mut found = Vec::new();
        let mut more = sub.run(eng)?;
        while more {
            found.push(Template::capture(&eng.store, template));
            more = sub.retry(eng)?;
        }
        eng.store.backtrack_to(mark);
        let items: Vec<Term> = found.iter().map(|t| t.instantiate(&mut eng.store)).collect();
        let list = Term::list(items);
        Ok(unify(&mut eng.store, result, &list, eng.config.occurs_check))
    }
}
