use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpType {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpDef {
    pub priority: u16,
    pub kind: OpType,
}

impl OpDef {
    /// Maximum priorities of the (left, right) operands of an infix operator.
    pub fn infix_arg_priorities(self) -> (u16, u16) {
        let p = self.priority;
        match self.kind {
            OpType::Xfx => (p - 1, p - 1),
            OpType::Xfy => (p - 1, p),
            OpType::Yfx => (p, p - 1),
            OpType::Fy | OpType::Fx => unreachable!("not an infix operator"),
        }
    }

    pub fn prefix_arg_priority(self) -> u16 {
        match self.kind {
            OpType::Fy => self.priority,
            OpType::Fx => self.priority - 1,
            _ => unreachable!("not a prefix operator"),
        }
    }
}

/// Fixed operator table. User-defined operators are not supported.
#[derive(Clone, Debug)]
pub struct OpTable {
    infix: HashMap<&'static str, OpDef>,
    prefix: HashMap<&'static str, OpDef>,
}

impl Default for OpTable {
    fn default() -> Self {
        use OpType::*;
        let mut infix = HashMap::new();
        let mut prefix = HashMap::new();
        let add = |table: &mut HashMap<&'static str, OpDef>, names: &[&'static str], priority, kind| {
            for n in names {
                table.insert(*n, OpDef { priority, kind });
            }
        };
        add(&mut infix, &[":-", "-->"], 1200, Xfx);
        add(&mut infix, &[";"], 1100, Xfy);
        add(&mut infix, &["->"], 1050, Xfy);
        add(&mut infix, &[","], 1000, Xfy);
        add(&mut infix, &["=", "\\=", "==", "\\==", "is", "<", ">", "=<", ">=", "=:=", "=\\="], 700, Xfx);
        add(&mut infix, &["+", "-"], 500, Yfx);
        add(&mut infix, &["*", "/", "mod"], 400, Yfx);
        add(&mut prefix, &["\\+"], 900, Fy);
        add(&mut prefix, &["-"], 200, Fy);
        OpTable { infix, prefix }
    }
}

impl OpTable {
    pub fn infix(&self, name: &str) -> Option<OpDef> {
        self.infix.get(name).copied()
    }

    pub fn prefix(&self, name: &str) -> Option<OpDef> {
        self.prefix.get(name).copied()
    }

    pub fn is_op(&self, name: &str) -> bool {
        self.infix.contains_key(name) || self.prefix.contains_key(name)
    }
}
