//! Interned indeterminates.
//!
//! Every symbol gets a small integer id from a process-wide table. `x` and
//! `y` are always ids 0 and 1, so they sort before every parameter in the
//! term order. Parameters and internal helper symbols are appended in the
//! order they are first seen.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

struct Table {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

fn table() -> &'static RwLock<Table> {
    static TABLE: OnceLock<RwLock<Table>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Table {
            names: Vec::new(),
            ids: HashMap::new(),
        };
        for n in ["x", "y"] {
            t.ids.insert(n.to_string(), t.names.len() as u32);
            t.names.push(n.to_string());
        }
        RwLock::new(t)
    })
}

impl Symbol {
    pub const X: Symbol = Symbol(0);
    pub const Y: Symbol = Symbol(1);

    /// Returns the symbol with this name, creating it if needed.
    pub fn new(name: &str) -> Symbol {
        if let Some(&id) = table().read().unwrap().ids.get(name) {
            return Symbol(id);
        }
        let mut t = table().write().unwrap();
        if let Some(&id) = t.ids.get(name) {
            return Symbol(id);
        }
        let id = t.names.len() as u32;
        t.names.push(name.to_string());
        t.ids.insert(name.to_string(), id);
        Symbol(id)
    }

    /// Looks a symbol up without interning it.
    pub fn lookup(name: &str) -> Option<Symbol> {
        table().read().unwrap().ids.get(name).map(|&id| Symbol(id))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Symbol {
        Symbol(i as u32)
    }

    pub fn name(self) -> String {
        table().read().unwrap().names[self.0 as usize].clone()
    }

    /// True for `x` and `y`.
    pub fn is_base(self) -> bool {
        self.0 < 2
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_symbols_come_first() {
        assert_eq!(Symbol::new("x"), Symbol::X);
        assert_eq!(Symbol::new("y"), Symbol::Y);
        let k = Symbol::new("k");
        assert!(k > Symbol::Y);
        assert_eq!(Symbol::new("k"), k);
        assert_eq!(k.name(), "k");
    }
}
