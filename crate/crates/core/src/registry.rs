//! Named strategy tables: emptiness oracles, maxflow solvers and component
//! counters looked up by name.

use std::collections::BTreeMap;

use crate::benor::{count_components_1d, count_components_grid, GridBox, SignSystem};
use crate::error::{Error, Result};
use crate::fans::{Dinic, EdmondsKarp, MaxflowSolver};
use crate::graphings::symbolic::{EmptinessOracle, SamplingOracle, SymbolicOracle};

pub struct Registry<T: ?Sized> {
    entries: BTreeMap<String, Box<T>>,
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Registry {
            entries: BTreeMap::new(),
        }
    }
}

impl<T: ?Sized> Registry<T> {
    pub fn register(&mut self, name: &str, entry: Box<T>) {
        self.entries.insert(name.to_string(), entry);
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::invalid(format!(
                "unknown strategy `{name}`, expected one of: {}",
                self.names().join(", ")
            ))
        })
    }

    pub fn take(mut self, name: &str) -> Result<Box<T>> {
        self.get(name)?;
        Ok(self.entries.remove(name).expect("checked above"))
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }
}

pub fn oracles(seed: u64) -> Registry<dyn EmptinessOracle> {
    let mut r: Registry<dyn EmptinessOracle> = Registry::default();
    r.register("symbolic", Box::new(SymbolicOracle));
    r.register(
        "sampling",
        Box::new(SamplingOracle {
            seed,
            ..SamplingOracle::default()
        }),
    );
    r
}

pub fn maxflow_solvers() -> Registry<dyn MaxflowSolver> {
    let mut r: Registry<dyn MaxflowSolver> = Registry::default();
    r.register("edmonds-karp", Box::new(EdmondsKarp));
    r.register("dinic", Box::new(Dinic));
    r
}

/// Counts connected components of a union of sign systems over `vars`.
pub trait ComponentCounter: Send + Sync {
    fn name(&self) -> &'static str;
    fn count(&self, systems: &[SignSystem], vars: &[u32]) -> Result<usize>;
}

/// Exact sign-chart count over one variable.
pub struct ExactLine;

impl ComponentCounter for ExactLine {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn count(&self, systems: &[SignSystem], vars: &[u32]) -> Result<usize> {
        match vars {
            [v] => count_components_1d(systems, *v, None),
            _ => Err(Error::unsupported("exact counting handles one variable")),
        }
    }
}

/// Flood fill of grid cells inside a box.
pub struct Grid {
    pub bx: GridBox,
    pub resolution: usize,
}

impl ComponentCounter for Grid {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn count(&self, systems: &[SignSystem], vars: &[u32]) -> Result<usize> {
        if vars.len() != self.bx.lo.len() {
            return Err(Error::invalid("box dimension differs from the variable count"));
        }
        Ok(count_components_grid(systems, vars, &self.bx, self.resolution))
    }
}

pub fn component_counters(bx: GridBox, resolution: usize) -> Registry<dyn ComponentCounter> {
    let mut r: Registry<dyn ComponentCounter> = Registry::default();
    r.register("exact", Box::new(ExactLine));
    r.register("grid", Box::new(Grid { bx, resolution }));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realalg::{int, Cmp, MultiPoly};

    #[test]
    fn lookups() {
        assert_eq!(oracles(1).names(), vec!["sampling", "symbolic"]);
        assert_eq!(oracles(1).get("symbolic").unwrap().name(), "symbolic");
        assert!(oracles(1).get("nope").is_err());
        let solvers = maxflow_solvers();
        for name in solvers.names() {
            assert_eq!(solvers.get(name).unwrap().name(), name);
        }
    }

    #[test]
    fn counters_agree_on_a_line() {
        let x = MultiPoly::var(0);
        let sys = vec![(&(&x * &x) - &MultiPoly::constant(int(1)), Cmp::Gt)];
        let r = component_counters(GridBox::cube(1, int(-3), int(3)), 600);
        assert_eq!(r.get("exact").unwrap().count(&[sys.clone()], &[0]).unwrap(), 2);
        assert_eq!(r.get("grid").unwrap().count(&[sys], &[0]).unwrap(), 2);
    }
}
