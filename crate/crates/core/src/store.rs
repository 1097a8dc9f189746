//! Binding cells, the trail, and the interclausal variable registry.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::term::{Term, VarId};

#[derive(Clone, Debug)]
struct Cell {
    value: Option<Term>,
    name: Option<Arc<str>>,
    evar: bool,
}

/// A position in the trail together with the cell count at that time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mark {
    trail: usize,
    cells: usize,
}

/// Mutable binding cells with an undo log.
///
/// Every binding is trailed, so undoing to a [`Mark`] always restores the
/// exact unbound state. Interclausal variables are interned by name in a
/// registry that lives as long as the store.
#[derive(Clone, Debug, Default)]
pub struct Store {
    cells: Vec<Cell>,
    trail: Vec<VarId>,
    evars: IndexMap<Arc<str>, VarId>,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh_var(&mut self) -> Term {
        Term::Var(self.alloc(None, false))
    }

    pub fn named_var(&mut self, name: &str) -> Term {
        Term::Var(self.alloc(Some(Arc::from(name)), false))
    }

    fn alloc(&mut self, name: Option<Arc<str>>, evar: bool) -> VarId {
        let id = VarId(u32::try_from(self.cells.len()).expect("binding store exhausted"));
        self.cells.push(Cell { value: None, name, evar });
        id
    }

    /// Returns the interclausal variable called `name` (without the `~`
    /// prefix), creating its cell on first use.
    pub fn intern_evar(&mut self, name: &str) -> Term {
        if let Some(&id) = self.evars.get(name) {
            return Term::EVar(id);
        }
        let name: Arc<str> = Arc::from(name);
        let id = self.alloc(Some(name.clone()), true);
        self.evars.insert(name, id);
        Term::EVar(id)
    }

    pub fn lookup_evar(&self, name: &str) -> Option<Term> {
        self.evars.get(name).map(|&id| Term::EVar(id))
    }

    /// Interclausal variable names in first-interned order.
    pub fn evar_names(&self) -> impl Iterator<Item = &str> {
        self.evars.keys().map(|k| &**k)
    }

    pub fn evar_count(&self) -> usize {
        self.evars.len()
    }

    pub fn var_name(&self, id: VarId) -> Option<&str> {
        self.cells[id.index()].name.as_deref()
    }

    pub fn is_evar(&self, id: VarId) -> bool {
        self.cells[id.index()].evar
    }

    pub fn binding(&self, id: VarId) -> Option<&Term> {
        self.cells[id.index()].value.as_ref()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Number of currently bound cells, by full scan.
    pub fn bound_count(&self) -> usize {
        self.cells.iter().filter(|c| c.value.is_some()).count()
    }

    /// Follows bindings until reaching a non-variable or an unbound variable.
    pub fn deref(&self, t: &Term) -> Term {
        let mut cur = t;
        loop {
            match cur {
                Term::Var(v) | Term::EVar(v) => match &self.cells[v.index()].value {
                    Some(next) => cur = next,
                    None => return cur.clone(),
                },
                _ => return cur.clone(),
            }
        }
    }

    /// Binds an unbound cell and records it on the trail.
    pub fn bind(&mut self, id: VarId, value: Term) {
        let cell = &mut self.cells[id.index()];
        assert!(cell.value.is_none(), "rebinding bound cell {id:?}");
        cell.value = Some(value);
        self.trail.push(id);
    }

    pub fn mark(&self) -> Mark {
        Mark { trail: self.trail.len(), cells: self.cells.len() }
    }

    /// Resets every binding recorded since `mark` to unbound.
    pub fn undo_to(&mut self, mark: Mark) {
        assert!(mark.trail <= self.trail.len(), "undo past an invalidated mark");
        for id in self.trail.drain(mark.trail..).rev() {
            self.cells[id.index()].value = None;
        }
    }

    /// Undoes bindings and then releases cells allocated since `mark`.
    ///
    /// Only valid when no live term refers to those cells any more, which is
    /// the case when backtracking to a choice point created at `mark`.
    pub fn backtrack_to(&mut self, mark: Mark) {
        self.undo_to(mark);
        if mark.cells < self.cells.len() {
            debug_assert!(self.cells[mark.cells..].iter().all(|c| !c.evar));
            self.cells.truncate(mark.cells);
        }
    }

    /// Drops cells and registry entries allocated after `mark`. Used to roll
    /// back a failed consult.
    pub(crate) fn rollback_allocations(&mut self, mark: Mark) {
        self.undo_to(mark);
        self.cells.truncate(mark.cells);
        self.evars.retain(|_, id| id.index() < mark.cells);
    }
}
