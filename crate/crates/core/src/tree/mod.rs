//! Finite-state automorphisms of the grafted binary tree `T_N`, in wreath
//! recursion form.
//!
//! Conventions used throughout:
//!
//! * Left action: `g(x·w) = τ(x) · g_x(w)` where `τ` is the root permutation
//!   and `g_x` the section at the *source* letter `x`.
//! * Tuples are indexed by *target* position: `sections[i]` is the section at
//!   source `τ⁻¹(i)`, so `g = (g_{τ⁻¹(0)}, ..., g_{τ⁻¹(q-1)}) τ`.
//! * `g.compose(&h)` is `g ∘ h`, i.e. `h` acts first.
//!
//! Every automaton is kept in canonical form: unreachable states are dropped,
//! states with the same action are merged (coarsest bisimulation), and the
//! remaining states are numbered breadth-first from the initial state. Two
//! automata therefore compare equal exactly when they act identically.

mod format;
mod word;

use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

pub use format::{AutomatonFile, StateSpec};
pub use word::{BoundaryPoint, Vertex};

use crate::dyadic::DyadicInterval;
use crate::error::{Error, Result};
use crate::interval_maps::{check_depth, vnk};
use crate::perm::{CycleDecomposition, Permutation};

pub type StateId = usize;

/// Largest `N + level - 1` for which [`TreeAutomorphism::level_permutation`]
/// materializes a table.
pub const MAX_TABLE_BITS: usize = 24;

/// One state of a wreath-recursion automaton: a root permutation of its
/// alphabet and one section per target position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    perm: Permutation,
    sections: Vec<StateId>,
}

impl State {
    pub fn new(perm: Permutation, sections: Vec<StateId>) -> Result<Self> {
        if perm.len() != sections.len() {
            return Err(Error::InvalidAutomaton(format!(
                "state has alphabet {} but {} sections",
                perm.len(),
                sections.len()
            )));
        }
        Ok(State { perm, sections })
    }

    pub fn alphabet(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn sections(&self) -> &[StateId] {
        &self.sections
    }

    #[inline]
    fn act(&self, letter: usize) -> (usize, StateId) {
        let image = self.perm.apply(letter);
        (image, self.sections[image])
    }
}

/// Outcome of [`TreeAutomorphism::order_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum OrderBound {
    Finite(u64),
    AtLeast(u64),
}

/// A finite-state automorphism of `T_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeAutomorphism {
    states: Vec<State>,
    initial: StateId,
}

impl TreeAutomorphism {
    /// Validates and canonicalizes an automaton given as a state list.
    pub fn from_states(states: Vec<State>, initial: StateId) -> Result<Self> {
        let root = states.get(initial).ok_or_else(|| {
            Error::InvalidAutomaton(format!("initial state {initial} does not exist"))
        })?;
        let q = root.alphabet();
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::InvalidAutomaton(format!(
                "root alphabet {q} is not 2^N with N >= 1"
            )));
        }
        check_depth(q.trailing_zeros())?;
        for (id, state) in states.iter().enumerate() {
            for &s in &state.sections {
                let target = states.get(s).ok_or_else(|| {
                    Error::InvalidAutomaton(format!("state {id} refers to missing state {s}"))
                })?;
                if target.alphabet() != 2 {
                    return Err(Error::InvalidAutomaton(format!(
                        "state {id} has section {s} with alphabet {}, sections must be binary",
                        target.alphabet()
                    )));
                }
            }
        }
        Ok(Self::canonical(states, initial))
    }

    fn canonical(states: Vec<State>, initial: StateId) -> Self {
        // Reachable states, breadth-first.
        let mut order = vec![initial];
        let mut pos: HashMap<StateId, usize> = HashMap::from([(initial, 0)]);
        let mut i = 0;
        while i < order.len() {
            for &s in &states[order[i]].sections {
                pos.entry(s).or_insert_with(|| {
                    order.push(s);
                    order.len() - 1
                });
            }
            i += 1;
        }

        // Coarsest bisimulation by partition refinement.
        let mut class = {
            let mut ids: HashMap<&[usize], usize> = HashMap::new();
            order
                .iter()
                .map(|&s| {
                    let next = ids.len();
                    *ids.entry(states[s].perm.images()).or_insert(next)
                })
                .collect::<Vec<_>>()
        };
        let mut count = class.iter().max().map_or(0, |m| m + 1);
        loop {
            let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let refined: Vec<usize> = order
                .iter()
                .enumerate()
                .map(|(p, &s)| {
                    let key = (
                        class[p],
                        states[s].sections.iter().map(|t| class[pos[t]]).collect(),
                    );
                    let next = ids.len();
                    *ids.entry(key).or_insert(next)
                })
                .collect();
            let refined_count = ids.len();
            class = refined;
            if refined_count == count {
                break;
            }
            count = refined_count;
        }

        // Quotient, renumbered breadth-first from the initial class.
        let mut representative = vec![usize::MAX; count];
        for (p, &c) in class.iter().enumerate().rev() {
            representative[c] = order[p];
        }
        let mut new_id: HashMap<usize, StateId> = HashMap::from([(class[0], 0)]);
        let mut queue = VecDeque::from([class[0]]);
        let mut out = Vec::new();
        while let Some(c) = queue.pop_front() {
            let rep = &states[representative[c]];
            let sections = rep
                .sections
                .iter()
                .map(|t| {
                    let tc = class[pos[t]];
                    let len = new_id.len();
                    *new_id.entry(tc).or_insert_with(|| {
                        queue.push_back(tc);
                        len
                    })
                })
                .collect();
            out.push(State {
                perm: rep.perm.clone(),
                sections,
            });
        }
        TreeAutomorphism {
            states: out,
            initial: 0,
        }
    }

    fn sub_automaton(&self, state: StateId) -> TreeAutomorphism {
        Self::canonical(self.states.clone(), state)
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    fn root(&self) -> &State {
        &self.states[self.initial]
    }

    /// Size `2^N` of the first-level alphabet.
    pub fn root_alphabet(&self) -> usize {
        self.root().alphabet()
    }

    /// The `N` of the tree `T_N` this automorphism acts on.
    pub fn tree_n(&self) -> u32 {
        self.root_alphabet().trailing_zeros()
    }

    pub fn root_perm(&self) -> &Permutation {
        &self.root().perm
    }

    /// Sections in tuple order: entry `i` is the section at source `τ⁻¹(i)`.
    pub fn tuple(&self) -> Vec<TreeAutomorphism> {
        self.root()
            .sections
            .iter()
            .map(|&s| self.sub_automaton(s))
            .collect()
    }

    // -- builtins ----------------------------------------------------------

    /// The identity of `T_N`.
    pub fn identity(n: u32) -> Result<Self> {
        check_depth(n)?;
        let bin_id = State {
            perm: Permutation::identity(2),
            sections: vec![0, 0],
        };
        if n == 1 {
            return Ok(TreeAutomorphism {
                states: vec![bin_id],
                initial: 0,
            });
        }
        let q = 1usize << n;
        let root = State {
            perm: Permutation::identity(q),
            sections: vec![1; q],
        };
        let bin_id = State {
            sections: vec![1, 1],
            ..bin_id
        };
        Ok(TreeAutomorphism {
            states: vec![root, bin_id],
            initial: 0,
        })
    }

    /// `σ`: swap the first letter of the binary tree.
    pub fn sigma() -> Self {
        let swap = Permutation::from_images(vec![1, 0]).expect("valid");
        Self::canonical(
            vec![
                State {
                    perm: swap,
                    sections: vec![1, 1],
                },
                State {
                    perm: Permutation::identity(2),
                    sections: vec![1, 1],
                },
            ],
            0,
        )
    }

    /// The adding machine `a = (a, 1) σ` of the binary tree.
    pub fn adding_machine() -> Self {
        let swap = Permutation::from_images(vec![1, 0]).expect("valid");
        Self::canonical(
            vec![
                State {
                    perm: swap,
                    sections: vec![0, 1],
                },
                State {
                    perm: Permutation::identity(2),
                    sections: vec![1, 1],
                },
            ],
            0,
        )
    }

    /// `A = (a, 1, ..., 1) τ_N` on `T_N`: the von Neumann-Kakutani map seen
    /// on the tree. The carry section `a` sits at tuple position 0.
    pub fn builtin_adding_machine(n: u32) -> Result<Self> {
        check_depth(n)?;
        if n == 1 {
            return Ok(Self::adding_machine());
        }
        let tau = tau_n(n)?;
        let q = tau.len();
        let mut sections = vec![2; q];
        sections[0] = 1;
        let swap = Permutation::from_images(vec![1, 0]).expect("valid");
        Ok(Self::canonical(
            vec![
                State {
                    perm: tau,
                    sections,
                },
                State {
                    perm: swap,
                    sections: vec![1, 2],
                },
                State {
                    perm: Permutation::identity(2),
                    sections: vec![2, 2],
                },
            ],
            0,
        ))
    }

    /// `R = (1, ..., 1) π`, the finite exchange `R_π` on `T_N`.
    pub fn rotation(pi: &Permutation) -> Result<Self> {
        let q = pi.len();
        Self::from_states(
            vec![
                State {
                    perm: pi.clone(),
                    sections: vec![1; q],
                },
                State {
                    perm: Permutation::identity(2),
                    sections: vec![1, 1],
                },
            ],
            0,
        )
    }

    // -- action ------------------------------------------------------------

    fn run(&self, letters: impl IntoIterator<Item = usize>) -> (Vec<usize>, StateId) {
        let mut state = self.initial;
        let out = letters
            .into_iter()
            .map(|x| {
                let (y, next) = self.states[state].act(x);
                state = next;
                y
            })
            .collect();
        (out, state)
    }

    fn check_first(&self, first: usize) -> Result<()> {
        if first >= self.root_alphabet() {
            Err(Error::AlphabetMismatch {
                left: self.root_alphabet(),
                right: first + 1,
            })
        } else {
            Ok(())
        }
    }

    fn vertex_letters(v: &Vertex) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(v.first()).chain(v.rest().iter().map(|&b| b as usize))
    }

    /// Image of a vertex; the level is preserved.
    pub fn apply_vertex(&self, v: &Vertex) -> Result<Vertex> {
        self.check_first(v.first())?;
        let (out, _) = self.run(Self::vertex_letters(v));
        let rest = out[1..].iter().map(|&b| b as u8).collect();
        Vertex::new(out[0], rest)
    }

    /// Image of an eventually periodic boundary path.
    pub fn apply_boundary(&self, b: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.check_first(b.first())?;
        let (first, mut state) = self.root().act(b.first());
        let mut out: Vec<u8> = Vec::new();
        for &x in b.preperiod() {
            let (y, next) = self.states[state].act(x as usize);
            out.push(y as u8);
            state = next;
        }
        let period = b.period();
        let mut seen: HashMap<(StateId, usize), usize> = HashMap::new();
        let mut offset = 0;
        let start = loop {
            if let Some(&start) = seen.get(&(state, offset)) {
                break start;
            }
            seen.insert((state, offset), out.len());
            let (y, next) = self.states[state].act(period[offset] as usize);
            out.push(y as u8);
            state = next;
            offset = (offset + 1) % period.len();
        };
        let tail = out.split_off(start);
        BoundaryPoint::new(first, out, tail)
    }

    /// The section `g_v`, an automorphism of the binary tree.
    pub fn section(&self, v: &Vertex) -> Result<TreeAutomorphism> {
        self.check_first(v.first())?;
        let (_, state) = self.run(Self::vertex_letters(v));
        Ok(self.sub_automaton(state))
    }

    // -- group operations ----------------------------------------------------

    /// `self ∘ h`: apply `h` first.
    pub fn compose(&self, h: &TreeAutomorphism) -> Result<TreeAutomorphism> {
        if self.root_alphabet() != h.root_alphabet() {
            return Err(Error::AlphabetMismatch {
                left: self.root_alphabet(),
                right: h.root_alphabet(),
            });
        }
        let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = vec![(self.initial, h.initial)];
        ids.insert(pairs[0], 0);
        let mut states = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (gs, hs) = pairs[i];
            let (g_state, h_state) = (&self.states[gs], &h.states[hs]);
            let perm = g_state.perm.compose(&h_state.perm)?;
            let g_inv = g_state.perm.inverse();
            let sections = (0..perm.len())
                .map(|z| {
                    let pair = (g_state.sections[z], h_state.sections[g_inv.apply(z)]);
                    *ids.entry(pair).or_insert_with(|| {
                        pairs.push(pair);
                        pairs.len() - 1
                    })
                })
                .collect();
            states.push(State { perm, sections });
            i += 1;
        }
        Ok(Self::canonical(states, 0))
    }

    pub fn inverse(&self) -> TreeAutomorphism {
        let states = self
            .states
            .iter()
            .map(|s| State {
                perm: s.perm.inverse(),
                sections: (0..s.alphabet()).map(|i| s.sections[s.perm.apply(i)]).collect(),
            })
            .collect();
        Self::canonical(states, self.initial)
    }

    pub fn power(&self, k: u64) -> TreeAutomorphism {
        let mut result = Self::identity(self.tree_n()).expect("valid N");
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base).expect("same tree");
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base).expect("same tree");
            }
        }
        result
    }

    /// Whether the action on `∂T_N` is trivial. In canonical form this holds
    /// iff every reachable state has a trivial root permutation.
    pub fn is_identity(&self) -> bool {
        self.states.iter().all(|s| s.perm.is_identity())
    }

    // -- finite shadows --------------------------------------------------------

    /// Image table of words `x b_1 ... b_d`, `x` from the state's alphabet.
    fn word_table(
        &self,
        state: StateId,
        d: usize,
        memo: &mut HashMap<(StateId, usize), Rc<Vec<usize>>>,
    ) -> Rc<Vec<usize>> {
        if let Some(t) = memo.get(&(state, d)) {
            return t.clone();
        }
        let st = &self.states[state];
        let table: Vec<usize> = if d == 0 {
            st.perm.images().to_vec()
        } else {
            let mut table = vec![0; st.alphabet() << d];
            for x in 0..st.alphabet() {
                let (y, next) = st.act(x);
                let sub = self.word_table(next, d - 1, memo);
                for (w, &img) in sub.iter().enumerate() {
                    table[(x << d) | w] = (y << d) | img;
                }
            }
            table
        };
        let table = Rc::new(table);
        memo.insert((state, d), table.clone());
        table
    }

    /// The permutation of the `2^(N+level-1)` level-`level` vertices, indexed
    /// lexicographically, and its cycles.
    pub fn level_permutation(&self, level: usize) -> Result<(Permutation, CycleDecomposition)> {
        if level == 0 {
            return Err(Error::argument("level", "tree levels start at 1"));
        }
        let bits = self.tree_n() as usize + level - 1;
        if bits > MAX_TABLE_BITS {
            return Err(Error::LevelTooDeep(bits as u32));
        }
        let table = self.word_table(self.initial, level - 1, &mut HashMap::new());
        let perm = Permutation::from_images(table.as_ref().clone())?;
        let cycles = perm.cycles();
        Ok((perm, cycles))
    }

    /// Orders `k_1, ..., k_depth` of the level permutations.
    pub fn level_orders(&self, depth: usize) -> Result<Vec<u64>> {
        (1..=depth)
            .map(|n| Ok(self.level_permutation(n)?.0.order()))
            .collect()
    }

    /// Semi-decision of the order: `Finite(k)` is certified by checking that
    /// `g^k` is the identity once the level orders have stabilized at `k`;
    /// otherwise the level-`depth` order is a lower bound.
    pub fn order_probe(&self, depth: usize) -> Result<OrderBound> {
        if depth == 0 {
            return Err(Error::parse("depth", "order probe needs depth >= 1"));
        }
        let orders = self.level_orders(depth)?;
        let k = orders[depth - 1];
        let stabilized = depth == 1 || orders[depth - 2] == k;
        if stabilized && self.power(k).is_identity() {
            Ok(OrderBound::Finite(k))
        } else {
            Ok(OrderBound::AtLeast(k))
        }
    }

    /// Smallest `m` such that the action leaves every letter after the
    /// `m`-th unchanged, or `None` if no such `m` exists.
    pub fn finite_depth(&self) -> Option<usize> {
        let trivial = self.trivial_states();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.states.len()];
        let mut depth = vec![0usize; self.states.len()];
        fn visit(
            g: &TreeAutomorphism,
            s: StateId,
            trivial: &[bool],
            mark: &mut [u8],
            depth: &mut [usize],
        ) -> Option<usize> {
            if trivial[s] {
                return Some(0);
            }
            match mark[s] {
                1 => return None,
                2 => return Some(depth[s]),
                _ => {}
            }
            mark[s] = 1;
            let mut deepest = 0;
            for &t in &g.states[s].sections {
                deepest = deepest.max(visit(g, t, trivial, mark, depth)?);
            }
            mark[s] = 2;
            depth[s] = deepest + 1;
            Some(depth[s])
        }
        visit(self, self.initial, &trivial, &mut mark, &mut depth)
    }

    /// States whose sub-automaton is the identity (greatest fixed point).
    fn trivial_states(&self) -> Vec<bool> {
        let mut trivial: Vec<bool> = self.states.iter().map(|s| s.perm.is_identity()).collect();
        loop {
            let mut changed = false;
            for (i, s) in self.states.iter().enumerate() {
                if trivial[i] && s.sections.iter().any(|&t| !trivial[t]) {
                    trivial[i] = false;
                    changed = true;
                }
            }
            if !changed {
                return trivial;
            }
        }
    }

    // -- construction from finite data ----------------------------------------------

    /// The automorphism of the binary tree acting on the first `m` letters by
    /// `table` (words read as big-endian integers) and trivially below.
    pub fn finite_depth_from_table(m: usize, table: &[usize]) -> Result<Self> {
        let base = vec![State {
            perm: Permutation::identity(2),
            sections: vec![0, 0],
        }];
        Self::build_top_levels(m, table, base, |_| 0)
    }

    /// Builds binary states for the top `m` levels from a prefix-compatible
    /// table on `{0,1}^m`, attaching `bottom(w)` as the section below each
    /// source word `w`. `base` holds the states `bottom` refers to.
    fn build_top_levels(
        m: usize,
        table: &[usize],
        mut base: Vec<State>,
        bottom: impl Fn(usize) -> StateId,
    ) -> Result<Self> {
        if m == 0 || m > MAX_TABLE_BITS {
            return Err(Error::InvalidTable(format!("depth {m} out of range")));
        }
        check_level_table(m, table)?;
        // Image of the length-j prefix u of some word.
        let prefix_image = |j: usize, u: usize| table[u << (m - j)] >> (m - j);
        // State for prefix u of length j < m lives at offset + (2^j - 1) + u.
        let offset = base.len();
        let id = |j: usize, u: usize| offset + (1 << j) - 1 + u;
        for j in 0..m {
            for u in 0..1usize << j {
                let img = |b: usize| prefix_image(j + 1, (u << 1) | b) & 1;
                let perm = Permutation::from_images(vec![img(0), img(1)])?;
                let mut sections = vec![0; 2];
                for b in 0..2 {
                    let child = (u << 1) | b;
                    sections[perm.apply(b)] = if j + 1 < m {
                        id(j + 1, child)
                    } else {
                        bottom(child)
                    };
                }
                base.push(State { perm, sections });
            }
        }
        Self::from_states(base, offset)
    }

    /// `ĝ` on `T_N`: the root permutation is `g` on level `N` read through
    /// `κ_N`, and the tuple holds the sections of `g` at level `N`.
    pub fn graft(&self, n: u32) -> Result<TreeAutomorphism> {
        check_depth(n)?;
        if self.root_alphabet() != 2 {
            return Err(Error::AlphabetMismatch {
                left: 2,
                right: self.root_alphabet(),
            });
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let (perm, _) = self.level_permutation(n as usize)?;
        let inverse = perm.inverse();
        let sections = (0..perm.len())
            .map(|t| {
                let w = inverse.apply(t);
                let bits = (0..n).rev().map(|k| (w >> k) & 1);
                self.run(bits).1
            })
            .collect();
        let mut states = self.states.clone();
        states.push(State { perm, sections });
        let root = states.len() - 1;
        Self::from_states(states, root)
    }

    /// Inverse of [`TreeAutomorphism::graft`]: read an automorphism of `T_N`
    /// back on the binary tree. Fails when the root permutation does not
    /// respect the binary structure of the first `N` letters.
    pub fn ungraft(&self) -> Result<TreeAutomorphism> {
        let n = self.tree_n() as usize;
        if n == 1 {
            return Ok(self.clone());
        }
        let root = self.root().clone();
        Self::build_top_levels(n, root.perm.images(), self.states.clone(), |w| {
            root.sections[root.perm.apply(w)]
        })
    }
}

/// Checks that `table` is a bijection of `{0,1}^m` that maps words sharing a
/// prefix of length `j` to words sharing a prefix of length `j`, for all `j`.
fn check_level_table(m: usize, table: &[usize]) -> Result<()> {
    let size = 1usize << m;
    let word = |w: usize| format!("{w:0m$b}");
    if table.len() != size {
        return Err(Error::InvalidTable(format!(
            "expected {size} entries for depth {m}, got {}",
            table.len()
        )));
    }
    let mut preimage = vec![usize::MAX; size];
    for (w, &img) in table.iter().enumerate() {
        if img >= size {
            return Err(Error::InvalidTable(format!(
                "{} maps outside {{0,1}}^{m}",
                word(w)
            )));
        }
        if preimage[img] != usize::MAX {
            return Err(Error::InvalidTable(format!(
                "{} and {} both map to {}",
                word(preimage[img]),
                word(w),
                word(img)
            )));
        }
        preimage[img] = w;
    }
    for j in 1..m {
        let shift = m - j;
        for w in 0..size {
            let sibling = w & !((1 << shift) - 1);
            if table[w] >> shift != table[sibling] >> shift {
                return Err(Error::InvalidTable(format!(
                    "{} and {} share a length-{j} prefix but their images {} and {} do not",
                    word(sibling),
                    word(w),
                    word(table[sibling]),
                    word(table[w])
                )));
            }
        }
    }
    Ok(())
}

/// `τ_N`: the permutation of the `2^N` level-`N` intervals induced by the von
/// Neumann-Kakutani map.
pub fn tau_n(n: u32) -> Result<Permutation> {
    check_depth(n)?;
    let images = DyadicInterval::all(n)?
        .map(|iv| Ok(vnk(&iv.midpoint())?.level_symbol(n)? as usize))
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> BoundaryPoint {
        s.parse().unwrap()
    }

    fn v(first: usize, rest: &[u8]) -> Vertex {
        Vertex::new(first, rest.to_vec()).unwrap()
    }

    /// `(a_2, a_1)`-style automorphism with identity root and given sections.
    fn pair(left: &TreeAutomorphism, right: &TreeAutomorphism) -> TreeAutomorphism {
        let mut states = left.states.clone();
        let off = states.len();
        states.extend(right.states.iter().map(|s| State {
            perm: s.perm.clone(),
            sections: s.sections.iter().map(|t| t + off).collect(),
        }));
        states.push(State {
            perm: Permutation::identity(2),
            sections: vec![left.initial, right.initial + off],
        });
        let root = states.len() - 1;
        TreeAutomorphism::from_states(states, root).unwrap()
    }

    /// The dihedral generators a_1 = σ and a_2 = (a_1, a_2).
    fn dihedral() -> (TreeAutomorphism, TreeAutomorphism) {
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        let id2 = Permutation::identity(2);
        // 0: a_1 = σ, 1: identity, 2: a_2 = (a_1, a_2)
        let states = vec![
            State::new(swap, vec![1, 1]).unwrap(),
            State::new(id2.clone(), vec![1, 1]).unwrap(),
            State::new(id2, vec![0, 2]).unwrap(),
        ];
        (
            TreeAutomorphism::from_states(states.clone(), 0).unwrap(),
            TreeAutomorphism::from_states(states, 2).unwrap(),
        )
    }

    #[test]
    fn adding_machine_boundary_facts() {
        let a = TreeAutomorphism::adding_machine();
        assert_eq!(a.apply_boundary(&bp("1·(1)^∞")).unwrap(), bp("0·(0)^∞"));
        assert_eq!(a.apply_boundary(&bp("1·(0)^∞")).unwrap(), bp("0·1(0)^∞"));
        assert_eq!(a.apply_boundary(&bp("0·(0)^∞")).unwrap(), bp("1·(0)^∞"));
        assert_eq!(a.apply_boundary(&bp("0·(10)^∞")).unwrap(), bp("1·(10)^∞"));
        // (01)^∞ = 0·(10)^∞ in first-letter form
        assert_eq!(bp("0·(10)^∞").to_string(), "0·(10)^∞");
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_n(2).unwrap().images(), &[2, 3, 1, 0]);
        assert_eq!(tau_n(2).unwrap().cycles().cycles(), &[vec![0, 2, 1, 3]]);
        assert_eq!(tau_n(1).unwrap().images(), &[1, 0]);
        for n in 1..=8 {
            let tau = tau_n(n).unwrap();
            assert!(tau.is_transitive(), "N = {n}");
            if n >= 2 {
                let cycles = tau.cycles();
                let c = &cycles.cycles()[0];
                assert_eq!(&c[..3], &[0, 1 << (n - 1), 1 << (n - 2)]);
                assert_eq!(c[3], (1 << (n - 1)) + (1 << (n - 2)));
                assert_eq!(*c.last().unwrap(), (1 << n) - 1);
            }
        }
    }

    #[test]
    fn apply_vertex_examples() {
        let big_a = TreeAutomorphism::builtin_adding_machine(2).unwrap();
        assert_eq!(big_a.apply_vertex(&v(3, &[])).unwrap(), v(0, &[]));
        let id = TreeAutomorphism::identity(3).unwrap();
        assert_eq!(id.apply_vertex(&v(5, &[1, 0])).unwrap(), v(5, &[1, 0]));
        let a = TreeAutomorphism::adding_machine();
        assert_eq!(a.apply_vertex(&v(1, &[1, 0])).unwrap(), v(0, &[0, 1]));
        assert!(a.apply_vertex(&v(2, &[])).is_err());
    }

    #[test]
    fn sections() {
        let a = TreeAutomorphism::adding_machine();
        assert!(!a.section(&v(1, &[])).unwrap().is_identity());
        assert_eq!(a.section(&v(1, &[])).unwrap(), a);
        assert_eq!(a.section(&v(0, &[])).unwrap(), TreeAutomorphism::identity(1).unwrap());
        let big_a = TreeAutomorphism::builtin_adding_machine(2).unwrap();
        assert_eq!(big_a.section(&v(3, &[])).unwrap(), a);
        for s in 0..3 {
            assert!(big_a.section(&v(s, &[])).unwrap().is_identity());
        }
        let id = TreeAutomorphism::identity(2).unwrap();
        assert!(id.section(&v(2, &[0, 1])).unwrap().is_identity());
    }

    #[test]
    fn wreath_conjugation_swaps_sections() {
        let (a1, a2) = dihedral();
        let sigma = TreeAutomorphism::sigma();
        let inner = pair(&a1, &a2);
        let lhs = sigma.compose(&inner).unwrap().compose(&sigma).unwrap();
        assert_eq!(lhs, pair(&a2, &a1));
        assert_eq!(a1, sigma);
    }

    #[test]
    fn rotated_adding_machine_matches_worked_product() {
        let big_a = TreeAutomorphism::builtin_adding_machine(2).unwrap();
        let r = TreeAutomorphism::rotation(&Permutation::parse("(0 3)", Some(4)).unwrap()).unwrap();
        let prod = big_a.compose(&r).unwrap();
        assert_eq!(prod.root_perm().cycle_notation(), "(0)(1 3 2)");
        let a = TreeAutomorphism::adding_machine();
        let id = TreeAutomorphism::identity(1).unwrap();
        assert_eq!(prod.tuple(), vec![a, id.clone(), id.clone(), id]);
    }

    #[test]
    fn compose_with_identity() {
        let a = TreeAutomorphism::builtin_adding_machine(3).unwrap();
        let id = TreeAutomorphism::identity(3).unwrap();
        assert_eq!(a.compose(&id).unwrap(), a);
        assert_eq!(id.compose(&a).unwrap(), a);
        assert!(a.compose(&TreeAutomorphism::identity(2).unwrap()).is_err());
    }

    #[test]
    fn inverses() {
        let id = TreeAutomorphism::identity(1).unwrap();
        assert_eq!(id.inverse(), id);
        assert_eq!(TreeAutomorphism::sigma().inverse(), TreeAutomorphism::sigma());
        let a = TreeAutomorphism::adding_machine();
        assert_eq!(a.inverse().apply_boundary(&bp("0·(0)^∞")).unwrap(), bp("1·(1)^∞"));
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn identity_decision() {
        assert!(TreeAutomorphism::identity(4).unwrap().is_identity());
        assert!(!TreeAutomorphism::adding_machine().is_identity());
        let (a1, a2) = dihedral();
        let swapped = pair(&a2, &a1);
        assert!(!swapped.is_identity());
        assert!(swapped.compose(&swapped).unwrap().is_identity());
    }

    #[test]
    fn order_probes() {
        let a = TreeAutomorphism::adding_machine();
        assert_eq!(a.order_probe(8).unwrap(), OrderBound::AtLeast(256));
        assert_eq!(TreeAutomorphism::sigma().order_probe(1).unwrap(), OrderBound::Finite(2));
        assert_eq!(TreeAutomorphism::sigma().order_probe(6).unwrap(), OrderBound::Finite(2));
        let (a1, a2) = dihedral();
        let h = a1.compose(&a2).unwrap();
        let h_sigma = h.compose(&TreeAutomorphism::sigma()).unwrap();
        assert_eq!(h_sigma.order_probe(8).unwrap(), OrderBound::Finite(2));
        assert_eq!(h.order_probe(10).unwrap(), OrderBound::AtLeast(1024));
    }

    #[test]
    fn level_permutations() {
        for n in 1..=3 {
            let big_a = TreeAutomorphism::builtin_adding_machine(n).unwrap();
            for level in 1..=8 {
                let (perm, cycles) = big_a.level_permutation(level).unwrap();
                assert!(perm.is_transitive());
                assert_eq!(cycles.len(), 1);
            }
        }
        let (_, cycles) = TreeAutomorphism::identity(2).unwrap().level_permutation(3).unwrap();
        assert!(cycles.lengths().all(|l| l == 1));
        let big_a = TreeAutomorphism::builtin_adding_machine(2).unwrap();
        let r = TreeAutomorphism::rotation(&Permutation::parse("(0 3)", Some(4)).unwrap()).unwrap();
        let (_, cycles) = big_a.compose(&r).unwrap().level_permutation(1).unwrap();
        assert_eq!(cycles.cycles(), &[vec![0], vec![1, 3, 2]]);
    }

    #[test]
    fn tables() {
        let sigma = TreeAutomorphism::finite_depth_from_table(1, &[1, 0]).unwrap();
        assert_eq!(sigma, TreeAutomorphism::sigma());
        let g = TreeAutomorphism::finite_depth_from_table(2, &[0, 1, 3, 2]).unwrap();
        assert!(g.root_perm().is_identity());
        assert_eq!(
            g.tuple(),
            vec![TreeAutomorphism::identity(1).unwrap(), TreeAutomorphism::sigma()]
        );
        for idx in 0..4 {
            let w = Vertex::from_index(2, idx);
            let img = g.apply_vertex(&w).unwrap();
            assert_eq!(img.index(), [0, 1, 3, 2][idx]);
        }
        let err = TreeAutomorphism::finite_depth_from_table(2, &[0, 2, 1, 3]).unwrap_err();
        assert!(err.to_string().contains("00 and 01"), "{err}");
        assert!(TreeAutomorphism::finite_depth_from_table(2, &[0, 0, 1, 3]).is_err());
        assert_eq!(g.finite_depth(), Some(2));
        assert_eq!(sigma.finite_depth(), Some(1));
        assert_eq!(TreeAutomorphism::identity(1).unwrap().finite_depth(), Some(0));
        assert_eq!(TreeAutomorphism::adding_machine().finite_depth(), None);
    }

    #[test]
    fn grafting() {
        let a = TreeAutomorphism::adding_machine();
        for n in 1..=5 {
            assert_eq!(
                a.graft(n).unwrap(),
                TreeAutomorphism::builtin_adding_machine(n).unwrap()
            );
            assert_eq!(
                TreeAutomorphism::identity(1).unwrap().graft(n).unwrap(),
                TreeAutomorphism::identity(n).unwrap()
            );
            assert_eq!(a.graft(n).unwrap().ungraft().unwrap(), a);
        }
        // κ_2(11) = 3, and the 3-cycle (0 1 2) on V_1 of T_2 is not binary.
        assert_eq!(v(1, &[1]).index(), 3);
        let h = TreeAutomorphism::rotation(&Permutation::parse("(0 1 2)", Some(4)).unwrap()).unwrap();
        assert!(matches!(h.ungraft(), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn malformed_automata_rejected() {
        let id2 = Permutation::identity(2);
        assert!(TreeAutomorphism::from_states(vec![State::new(id2.clone(), vec![0, 1]).unwrap()], 0).is_err());
        assert!(TreeAutomorphism::from_states(
            vec![State::new(Permutation::identity(3), vec![0, 0, 0]).unwrap()],
            0
        )
        .is_err());
        assert!(State::new(id2, vec![0]).is_err());
        // A section may not be a root-level (alphabet 4) state.
        assert!(TreeAutomorphism::from_states(
            vec![State::new(Permutation::identity(4), vec![0; 4]).unwrap()],
            0
        )
        .is_err());
    }
}
