//! Resource caps shared by the search and enumeration routines.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ENTRIES: usize = 1 << 16;

/// Caps consulted by every potentially explosive computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest matrix, counted in entries.
    pub max_entries: usize,
    /// Largest number of configurations a pushdown search may visit.
    pub max_configs: usize,
    /// Largest state count for which `2^n` vector enumeration is allowed.
    pub state_cap: usize,
    /// Largest number of states a constructed automaton or category may have.
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_entries: DEFAULT_MAX_ENTRIES,
            max_configs: 1 << 20,
            state_cap: 12,
            max_states: 1 << 16,
        }
    }
}

impl Budget {
    /// Parses an override string.
    ///
    /// A bare integer sets every count-like cap (`max_configs`, `max_states`
    /// and `max_entries`). Otherwise a comma separated list of `key=value`
    /// pairs with keys `entries`, `configs`, `states`, `state_cap`.
    pub fn parse_override(&self, spec: &str) -> Result<Budget> {
        let mut out = *self;
        let spec = spec.trim();
        if let Ok(n) = spec.parse::<usize>() {
            out.max_entries = n;
            out.max_configs = n;
            out.max_states = n;
            return Ok(out);
        }
        for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::input(format!("bad budget item `{item}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad budget value in `{item}`")))?;
            match key.trim() {
                "entries" => out.max_entries = value,
                "configs" => out.max_configs = value,
                "states" => out.max_states = value,
                "state_cap" => out.state_cap = value,
                other => return Err(Error::input(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(out)
    }

    pub(crate) fn check_entries(&self, what: &'static str, rows: usize, cols: usize) -> Result<()> {
        let requested = rows.checked_mul(cols).unwrap_or(usize::MAX);
        if requested > self.max_entries {
            return Err(Error::Size {
                what,
                requested,
                cap: self.max_entries,
            });
        }
        Ok(())
    }

    pub(crate) fn check_states(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.max_states {
            return Err(Error::Size {
                what,
                requested: n,
                cap: self.max_states,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_forms() {
        let b = Budget::default();
        assert_eq!(b.parse_override("100").unwrap().max_configs, 100);
        let c = b.parse_override("configs=5, state_cap=3").unwrap();
        assert_eq!((c.max_configs, c.state_cap), (5, 3));
        assert!(b.parse_override("nope=1").is_err());
    }
}
