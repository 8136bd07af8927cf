//! JSON file format for automata.
//!
//! ```json
//! {
//!   "initial": "g",
//!   "states": {
//!     "g": { "alphabet": 2, "perm": [1, 0], "sections": ["id", "a"] }
//!   }
//! }
//! ```
//!
//! `perm` is the image table of the state's root permutation and `sections`
//! lists sections by target position. The names `a` (binary adding machine),
//! `sigma` and `id` are predefined and may not be redefined.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{State, StateId, TreeAutomorphism};
use crate::error::{Error, Result};
use crate::perm::Permutation;

const BUILTINS: [&str; 3] = ["a", "sigma", "id"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub initial: String,
    #[serde(default)]
    pub states: BTreeMap<String, StateSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub alphabet: usize,
    pub perm: Vec<usize>,
    pub sections: Vec<String>,
}

fn builtin(name: &str) -> Option<TreeAutomorphism> {
    match name {
        "a" => Some(TreeAutomorphism::adding_machine()),
        "sigma" => Some(TreeAutomorphism::sigma()),
        "id" => Some(TreeAutomorphism::identity(1).expect("N = 1")),
        _ => None,
    }
}

impl TreeAutomorphism {
    pub fn from_file(file: &AutomatonFile) -> Result<Self> {
        if let Some(name) = file.states.keys().find(|k| BUILTINS.contains(&k.as_str())) {
            return Err(Error::InvalidAutomaton(format!(
                "state name {name:?} is reserved"
            )));
        }
        let mut ids: HashMap<&str, StateId> = file
            .states
            .keys()
            .enumerate()
            .map(|(i, k)| (k.as_str(), i))
            .collect();
        let mut states: Vec<State> = Vec::new();
        let mut extra: Vec<State> = Vec::new();
        // Builtins are spliced in after the user states on first reference.
        let mut resolve = |name: &str, extra: &mut Vec<State>| -> Result<StateId> {
            if let Some(&id) = ids.get(name) {
                return Ok(id);
            }
            let b = builtin(name).ok_or_else(|| {
                Error::InvalidAutomaton(format!("reference to undefined state {name:?}"))
            })?;
            let offset = file.states.len() + extra.len();
            extra.extend(b.states.iter().map(|s| State {
                perm: s.perm.clone(),
                sections: s.sections.iter().map(|t| t + offset).collect(),
            }));
            let id = offset + b.initial;
            ids.insert(
                BUILTINS.iter().find(|&&n| n == name).expect("builtin"),
                id,
            );
            Ok(id)
        };
        for (name, spec) in &file.states {
            let perm = Permutation::from_images(spec.perm.clone())
                .map_err(|e| Error::InvalidAutomaton(format!("state {name:?}: {e}")))?;
            if perm.len() != spec.alphabet || spec.sections.len() != spec.alphabet {
                return Err(Error::InvalidAutomaton(format!(
                    "state {name:?} declares alphabet {} but has {} images and {} sections",
                    spec.alphabet,
                    perm.len(),
                    spec.sections.len()
                )));
            }
            let sections = spec
                .sections
                .iter()
                .map(|s| resolve(s, &mut extra))
                .collect::<Result<_>>()?;
            states.push(State { perm, sections });
        }
        let initial = resolve(&file.initial, &mut extra)?;
        states.extend(extra);
        Self::from_states(states, initial)
    }

    /// The file form. States equal to a builtin are written by name; the
    /// rest are named `s0`, `s1`, ... in canonical order.
    pub fn to_file(&self) -> AutomatonFile {
        let builtins: Vec<(&str, TreeAutomorphism)> = BUILTINS
            .iter()
            .map(|&n| (n, builtin(n).expect("builtin")))
            .collect();
        let names: Vec<String> = (0..self.states.len())
            .map(|i| {
                let sub = self.sub_automaton(i);
                builtins
                    .iter()
                    .find(|(_, b)| *b == sub)
                    .map_or_else(|| format!("s{i}"), |(n, _)| n.to_string())
            })
            .collect();
        let states = self
            .states
            .iter()
            .enumerate()
            .filter(|(i, _)| !BUILTINS.contains(&names[*i].as_str()))
            .map(|(i, s)| {
                (
                    names[i].clone(),
                    StateSpec {
                        alphabet: s.alphabet(),
                        perm: s.perm.images().to_vec(),
                        sections: s.sections.iter().map(|&t| names[t].clone()).collect(),
                    },
                )
            })
            .collect();
        AutomatonFile {
            initial: names[self.initial].clone(),
            states,
        }
    }

    /// Reads the JSON form, or one of the builtin names `a`, `sigma`, `id`.
    pub fn parse_automaton(text: &str) -> Result<Self> {
        if let Some(b) = builtin(text.trim()) {
            return Ok(b);
        }
        let file: AutomatonFile = serde_json::from_str(text)
            .map_err(|e| Error::parse("automaton", e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }
}
