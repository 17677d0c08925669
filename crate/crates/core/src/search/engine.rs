//! Forward closure of derivable values.
//!
//! A state `(K, λ, c)` records that some tree of contexts forces
//! `[K] = e^{iπc} · ∏ leaves^λ` for the phase-free monomial `K`, where the
//! leaves are the single-generator powers and `λ` counts them. Every state
//! has a cost: the number of contexts in its tree. Level `L` builds every
//! context of already known states whose costs sum to `L − 1`. Two states
//! with equal `(K, λ)` and different `c`, or a context whose product is a
//! nontrivial scalar with no leaves left over, is a clash: a parity
//! contradiction.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use super::symmetry::{generators, Relabel};

#[derive(Clone, Debug)]
pub(crate) struct State {
    pub mono: u32,
    pub leaf: u32,
    /// Numerator over `D` of the value phase, reduced mod `2D`.
    pub phase: i64,
    pub cost: u32,
    /// Member occurrences in the derivation tree.
    pub size: u64,
    pub deriv: Option<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub(crate) struct Clash {
    pub context: Vec<u32>,
    pub other: Option<u32>,
    pub total: u32,
    pub size: u64,
}

#[derive(Debug)]
pub(crate) enum Stop {
    Nodes,
    Time,
}

pub(crate) struct Config {
    pub theta_num: Vec<i64>,
    pub denom: i64,
    pub bound: i8,
    pub max_context_size: usize,
    pub max_total: u32,
    pub u_only: bool,
    pub symmetry: bool,
    pub node_budget: Option<u64>,
    pub deadline: Option<Instant>,
}

pub(crate) struct Engine {
    cfg: Config,
    n: usize,
    two_d: i64,
    pub monos: Vec<Vec<i8>>,
    mono_index: HashMap<Vec<i8>, u32>,
    leaves: Vec<Vec<i16>>,
    leaf_index: HashMap<Vec<i16>, u32>,
    pub states: Vec<State>,
    by_key: HashMap<(u32, u32), Vec<u32>>,
    comm: Vec<Vec<u64>>,
    gens: Vec<Relabel>,
    img: Vec<Vec<u32>>,
    pub nodes: u64,
    pub best: Option<Clash>,
    pub level_counts: Vec<usize>,
    identity: u32,
}

fn bit(row: &[u64], i: u32) -> bool {
    row.get(i as usize / 64)
        .is_some_and(|w| w >> (i % 64) & 1 == 1)
}

fn set_bit(row: &mut Vec<u64>, i: u32) {
    let w = i as usize / 64;
    if row.len() <= w {
        row.resize(w + 1, 0);
    }
    row[w] |= 1 << (i % 64);
}

impl Engine {
    pub fn new(cfg: Config) -> Self {
        let n = cfg.theta_num.len();
        let two_d = 2 * cfg.denom;
        let gens = if cfg.symmetry {
            generators(&cfg.theta_num, cfg.denom, cfg.u_only)
        } else {
            Vec::new()
        };
        let mut e = Engine {
            n,
            two_d,
            monos: Vec::new(),
            mono_index: HashMap::new(),
            leaves: Vec::new(),
            leaf_index: HashMap::new(),
            states: Vec::new(),
            by_key: HashMap::new(),
            comm: Vec::new(),
            img: vec![Vec::new(); gens.len()],
            gens,
            nodes: 0,
            best: None,
            level_counts: Vec::new(),
            identity: 0,
            cfg,
        };
        let zero_mono = e.intern_mono(vec![0; 2 * n]);
        let zero_leaf = e.intern_leaf(vec![0; e.leaf_width()]);
        e.identity = e.push_state(zero_mono, zero_leaf, 0, 0, 0, None);
        let bound = e.cfg.bound;
        for j in 0..n {
            for g in 0..2 {
                if g == 1 && e.cfg.u_only {
                    continue;
                }
                for k in (-bound..=bound).filter(|&k| k != 0) {
                    let mut exps = vec![0i8; 2 * n];
                    exps[2 * j + g] = k;
                    let mut leaf = vec![0i16; e.leaf_width()];
                    leaf[e.leaf_slot(j, g, k.unsigned_abs())] = k.signum() as i16;
                    let m = e.intern_mono(exps);
                    let l = e.intern_leaf(leaf);
                    e.push_state(m, l, 0, 0, 0, None);
                }
            }
        }
        let leaves_end = e.states.len() as u32;
        for g in 0..e.gens.len() {
            for s in 0..leaves_end {
                let exps = e.gens[g].apply(&e.monos[e.states[s as usize].mono as usize]);
                let m = e.mono_index[&exps];
                let id = (0..leaves_end)
                    .find(|&t| e.states[t as usize].mono == m)
                    .expect("relabeled leaf is a leaf");
                e.img[g].push(id);
            }
        }
        e.update_comm(0);
        e.level_counts.push(e.states.len());
        e
    }

    fn leaf_width(&self) -> usize {
        2 * self.n * self.cfg.bound as usize
    }

    fn leaf_slot(&self, dof: usize, gen: usize, k: u8) -> usize {
        let b = self.cfg.bound as usize;
        dof * 2 * b + gen * b + (k as usize - 1)
    }

    fn intern_mono(&mut self, exps: Vec<i8>) -> u32 {
        if let Some(&i) = self.mono_index.get(&exps) {
            return i;
        }
        let i = self.monos.len() as u32;
        self.mono_index.insert(exps.clone(), i);
        self.monos.push(exps);
        i
    }

    fn intern_leaf(&mut self, leaf: Vec<i16>) -> u32 {
        if let Some(&i) = self.leaf_index.get(&leaf) {
            return i;
        }
        let i = self.leaves.len() as u32;
        self.leaf_index.insert(leaf.clone(), i);
        self.leaves.push(leaf);
        i
    }

    fn push_state(
        &mut self,
        mono: u32,
        leaf: u32,
        phase: i64,
        cost: u32,
        size: u64,
        deriv: Option<Vec<u32>>,
    ) -> u32 {
        let id = self.states.len() as u32;
        self.states.push(State {
            mono,
            leaf,
            phase,
            cost,
            size,
            deriv,
        });
        self.by_key.entry((mono, leaf)).or_default().push(id);
        id
    }

    /// `Σ_j θ_j (n^A m^B − m^A n^B)` as a numerator mod `2D`.
    fn symplectic(&self, a: &[i8], b: &[i8]) -> i64 {
        let mut acc = 0i64;
        for j in 0..self.n {
            let k = a[2 * j + 1] as i64 * b[2 * j] as i64 - a[2 * j] as i64 * b[2 * j + 1] as i64;
            acc += self.cfg.theta_num[j] * k;
        }
        acc.rem_euclid(self.two_d)
    }

    fn update_comm(&mut self, from: usize) {
        let total = self.states.len();
        self.comm.resize(total, Vec::new());
        for s in from..total {
            for t in 0..=s {
                let (ms, mt) = (self.states[s].mono as usize, self.states[t].mono as usize);
                if self.symplectic(&self.monos[ms], &self.monos[mt]) == 0 {
                    set_bit(&mut self.comm[s], t as u32);
                    set_bit(&mut self.comm[t], s as u32);
                }
            }
        }
    }

    fn commute(&self, a: u32, b: u32) -> bool {
        bit(&self.comm[a as usize], b)
    }

    /// Canonical product of the members' monomials, and the derived state
    /// data `(exps, leaf, value phase)`; `None` when outside the exponent
    /// box.
    fn product(&self, members: &[u32]) -> Option<(Vec<i8>, Vec<i16>, i64)> {
        let mut acc = vec![0i16; 2 * self.n];
        let mut leaf = vec![0i16; self.leaf_width()];
        let mut phi = 0i64;
        let mut csum = 0i64;
        for &m in members {
            let st = &self.states[m as usize];
            let exps = &self.monos[st.mono as usize];
            for j in 0..self.n {
                phi += self.cfg.theta_num[j] * acc[2 * j + 1] as i64 * exps[2 * j] as i64;
            }
            for (a, &e) in acc.iter_mut().zip(exps) {
                *a += e as i16;
            }
            for (l, &x) in leaf.iter_mut().zip(&self.leaves[st.leaf as usize]) {
                *l += x;
            }
            csum += st.phase;
        }
        let bound = self.cfg.bound as i16;
        if acc.iter().any(|e| e.abs() > bound) {
            return None;
        }
        let exps = acc.into_iter().map(|e| e as i8).collect();
        Some((exps, leaf, (csum - phi).rem_euclid(self.two_d)))
    }

    fn consider(&mut self, clash: Clash) {
        if clash.total > self.cfg.max_total {
            return;
        }
        let better = match &self.best {
            None => true,
            Some(b) => (clash.total, clash.size) < (b.total, b.size),
        };
        if better {
            self.best = Some(clash);
        }
    }

    fn tree_size(&self, members: &[u32]) -> u64 {
        members
            .iter()
            .map(|&m| self.states[m as usize].size + 1)
            .sum()
    }

    /// Registers the state derived by `members` at `level`. Returns its id,
    /// or `None` when the product is trivial or out of range.
    fn derive(&mut self, members: Vec<u32>, level: u32) -> Option<u32> {
        let (exps, leaf, phase) = self.product(&members)?;
        let size = self.tree_size(&members);
        if exps.iter().all(|&e| e == 0) {
            if phase != 0 && leaf.iter().all(|&x| x == 0) {
                self.consider(Clash {
                    context: members,
                    other: None,
                    total: level,
                    size,
                });
            }
            return None;
        }
        let mono = self.intern_mono(exps);
        let leaf = self.intern_leaf(leaf);
        if let Some(ids) = self.by_key.get(&(mono, leaf)) {
            if let Some(&same) = ids
                .iter()
                .find(|&&i| self.states[i as usize].phase == phase)
            {
                return Some(same);
            }
            let other = ids
                .iter()
                .copied()
                .min_by_key(|&i| {
                    (
                        self.states[i as usize].cost,
                        self.states[i as usize].size,
                        i,
                    )
                })
                .expect("nonempty");
            let o = &self.states[other as usize];
            let clash = Clash {
                context: members.clone(),
                other: Some(other),
                total: level + o.cost,
                size: size + o.size,
            };
            self.consider(clash);
        }
        Some(self.push_state(mono, leaf, phase, level, size, Some(members)))
    }

    fn orbit_reps(&self) -> Vec<bool> {
        let n = self.states.len();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for table in &self.img {
            for (s, &t) in table.iter().enumerate() {
                let (a, b) = (find(&mut parent, s as u32), find(&mut parent, t));
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi as usize] = lo;
                }
            }
        }
        (0..n as u32).map(|s| find(&mut parent, s) == s).collect()
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.cfg.node_budget.is_some_and(|b| self.nodes > b) {
            return Err(Stop::Nodes);
        }
        if self.nodes.is_multiple_of(4096) && self.cfg.deadline.is_some_and(|d| Instant::now() >= d)
        {
            return Err(Stop::Time);
        }
        Ok(())
    }

    fn dfs(
        &mut self,
        members: &mut Vec<u32>,
        sum: u32,
        target: u32,
        cands: &[u32],
        level: u32,
    ) -> Result<(), Stop> {
        if members.len() >= 2 && sum == target {
            self.tick()?;
            self.derive(members.clone(), level);
        }
        let slots = self.cfg.max_context_size - members.len();
        if slots == 0 {
            return Ok(());
        }
        let max_cost = cands
            .iter()
            .map(|&c| self.states[c as usize].cost)
            .max()
            .unwrap_or(0);
        if sum + max_cost * (slots as u32) < target {
            return Ok(());
        }
        for (k, &c) in cands.iter().enumerate() {
            let st = &self.states[c as usize];
            let new_sum = sum + st.cost;
            let mono = st.mono;
            let next: Vec<u32> = cands[k + 1..]
                .iter()
                .copied()
                .filter(|&x| {
                    let sx = &self.states[x as usize];
                    sx.mono != mono && sx.cost + new_sum <= target && self.commute(c, x)
                })
                .collect();
            members.push(c);
            let r = self.dfs(members, new_sum, target, &next, level);
            members.pop();
            r?;
        }
        Ok(())
    }

    fn close_under_symmetry(&mut self, start: usize, level: u32) {
        let mut q = start;
        while q < self.states.len() {
            for g in 0..self.gens.len() {
                let deriv = self.states[q].deriv.clone().expect("derived state");
                let mapped: Vec<u32> = deriv.iter().map(|&m| self.img[g][m as usize]).collect();
                let id = self
                    .derive(mapped, level)
                    .expect("relabeling keeps products in range");
                let table = &mut self.img[g];
                if table.len() <= q {
                    table.resize(q + 1, u32::MAX);
                }
                table[q] = id;
            }
            q += 1;
        }
    }

    /// Builds every state of cost `level`.
    pub fn run_level(&mut self, level: u32) -> Result<usize, Stop> {
        let target = level - 1;
        let start = self.states.len();
        let reps = if self.cfg.symmetry {
            self.orbit_reps()
        } else {
            vec![true; start]
        };
        let mut order: Vec<u32> = (0..start as u32)
            .filter(|&s| s != self.identity && self.states[s as usize].cost <= target)
            .collect();
        order.sort_by_key(|&s| (!reps[s as usize], s));
        let n_reps = order.iter().filter(|&&s| reps[s as usize]).count();
        let mut members = Vec::with_capacity(self.cfg.max_context_size);
        let mut outcome = Ok(());
        for i in 0..n_reps {
            let s = order[i];
            let st = &self.states[s as usize];
            let (cost, mono) = (st.cost, st.mono);
            let cands: Vec<u32> = order[i + 1..]
                .iter()
                .copied()
                .filter(|&x| {
                    let sx = &self.states[x as usize];
                    sx.mono != mono && sx.cost + cost <= target && self.commute(s, x)
                })
                .collect();
            members.push(s);
            outcome = self.dfs(&mut members, cost, target, &cands, level);
            members.pop();
            if outcome.is_err() {
                break;
            }
        }
        if outcome.is_ok() && self.cfg.symmetry {
            self.close_under_symmetry(start, level);
        }
        self.update_comm(start);
        let added = self.states.len() - start;
        self.level_counts.push(added);
        outcome.map(|_| added)
    }

    pub fn max_cost(&self) -> u32 {
        self.states.iter().map(|s| s.cost).max().unwrap_or(0)
    }

    /// Derived states needed by a clash, in creation order.
    pub fn clash_contexts(&self, clash: &Clash) -> Vec<Vec<u32>> {
        let mut need = BTreeSet::new();
        let mut stack: Vec<u32> = clash.context.clone();
        stack.extend(clash.other);
        while let Some(s) = stack.pop() {
            if let Some(d) = &self.states[s as usize].deriv {
                if need.insert(s) {
                    stack.extend(d.iter().copied());
                }
            }
        }
        let mut out: Vec<Vec<u32>> = need
            .into_iter()
            .map(|s| self.states[s as usize].deriv.clone().expect("derived"))
            .collect();
        if !out.contains(&clash.context) {
            out.push(clash.context.clone());
        }
        out
    }

    pub fn mono_of(&self, state: u32) -> &[i8] {
        &self.monos[self.states[state as usize].mono as usize]
    }
}
