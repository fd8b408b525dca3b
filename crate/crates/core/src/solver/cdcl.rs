//! Conflict-driven clause learning with two watched literals.
//!
//! Binary clauses live only in the watch lists; longer clauses live in a
//! flat arena. Assumptions are decided first, one per decision level, and a
//! conflict on an assumption is traced back to the subset of assumptions
//! responsible for it.

use std::cmp::Ordering;

use crate::cnf::Lit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct L(u32);

impl L {
    fn from_ext(l: Lit) -> L {
        let v = l.var() - 1;
        L(v << 1 | (!l.is_positive()) as u32)
    }

    fn to_ext(self) -> Lit {
        let v = self.var() + 1;
        if self.is_neg() {
            Lit::neg(v)
        } else {
            Lit::pos(v)
        }
    }

    #[inline]
    fn var(self) -> u32 {
        self.0 >> 1
    }

    #[inline]
    fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for L {
    type Output = L;

    #[inline]
    fn not(self) -> L {
        L(self.0 ^ 1)
    }
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

const BINARY: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    /// For binary clauses, the other literal; otherwise some literal of the
    /// clause whose truth lets us skip it.
    blocker: L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reason {
    Decision,
    Binary(L),
    Long(u32),
}

#[derive(Debug, Clone, Copy)]
enum Conflict {
    Binary(L, L),
    Long(u32),
}

#[derive(Debug, Clone)]
struct Header {
    start: u32,
    len: u32,
    learnt: bool,
    deleted: bool,
    activity: f32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    Aborted,
}

/// Tunables. The defaults favour speed; correctness never depends on them.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub restarts: bool,
    pub clause_deletion: bool,
    /// Give up (returning [`Status::Aborted`]) after this many conflicts.
    pub conflict_limit: Option<u64>,
    pub restart_base: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: true,
            clause_deletion: true,
            conflict_limit: None,
            restart_base: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

/// Max-heap of variables by activity; ties go to the lower index.
#[derive(Debug, Clone, Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<i32>,
}

impl VarHeap {
    fn better(act: &[f64], a: u32, b: u32) -> bool {
        match act[a as usize].partial_cmp(&act[b as usize]) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Less) => false,
            _ => a < b,
        }
    }

    fn grow(&mut self, n: usize) {
        self.pos.resize(n, -1);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] >= 0
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = i as i32;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i32;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let child = if r < self.heap.len() && Self::better(act, self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if !Self::better(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = i as i32;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i32;
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v as usize] = i as i32;
        self.sift_up(i, act);
    }

    fn increased(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v as usize] as usize, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("nonempty");
        self.pos[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq as i32)
}

#[derive(Debug, Clone)]
pub struct Solver {
    config: SolverConfig,
    ok: bool,
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    seen: Vec<u8>,
    trail: Vec<L>,
    trail_lim: Vec<usize>,
    qhead: usize,
    watches: Vec<Vec<Watcher>>,
    arena: Vec<L>,
    headers: Vec<Header>,
    learnts: Vec<u32>,
    cla_inc: f32,
    wasted: usize,
    max_learnts: f64,
    assumptions: Vec<L>,
    failed: Vec<Lit>,
    stats: Stats,
    num_original_clauses: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new(SolverConfig::default())
    }
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver {
            config,
            ok: true,
            values: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            var_inc: 1.0,
            heap: VarHeap::default(),
            seen: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            watches: Vec::new(),
            arena: Vec::new(),
            headers: Vec::new(),
            learnts: Vec::new(),
            cla_inc: 1.0,
            wasted: 0,
            max_learnts: 0.0,
            assumptions: Vec::new(),
            failed: Vec::new(),
            stats: Stats::default(),
            num_original_clauses: 0,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    /// False once the clause set is known to be unsatisfiable without
    /// assumptions.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    /// Makes sure variables `1..=n` exist.
    pub fn ensure_vars(&mut self, n: u32) {
        while self.num_vars() < n {
            self.new_var();
        }
    }

    /// Adds a fresh variable and returns its (1-based) id.
    pub fn new_var(&mut self) -> u32 {
        let v = self.values.len() as u32;
        self.values.push(UNDEF);
        self.level.push(0);
        self.reason.push(Reason::Decision);
        self.polarity.push(false);
        self.activity.push(0.0);
        self.seen.push(0);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(self.values.len());
        self.heap.insert(v, &self.activity);
        v + 1
    }

    #[inline]
    fn value(&self, l: L) -> i8 {
        let v = self.values[l.var() as usize];
        if l.is_neg() {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: L, reason: Reason) {
        let v = l.var() as usize;
        self.values[v] = if l.is_neg() { FALSE } else { TRUE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn clause_lits(&self, cref: u32) -> &[L] {
        let h = &self.headers[cref as usize];
        &self.arena[h.start as usize..(h.start + h.len) as usize]
    }

    fn attach_long(&mut self, lits: &[L], learnt: bool) -> u32 {
        let cref = self.headers.len() as u32;
        self.headers.push(Header {
            start: self.arena.len() as u32,
            len: lits.len() as u32,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        self.arena.extend_from_slice(lits);
        self.watches[lits[0].idx()].push(Watcher { cref, blocker: lits[1] });
        self.watches[lits[1].idx()].push(Watcher { cref, blocker: lits[0] });
        cref
    }

    fn attach_binary(&mut self, a: L, b: L) {
        self.watches[a.idx()].push(Watcher { cref: BINARY, blocker: b });
        self.watches[b.idx()].push(Watcher { cref: BINARY, blocker: a });
    }

    /// Adds a clause. Returns false if the solver became inconsistent.
    pub fn add_clause(&mut self, clause: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        for l in clause {
            self.ensure_vars(l.var());
        }
        let mut lits: Vec<L> = clause.iter().map(|&l| L::from_ext(l)).collect();
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        if lits.iter().any(|&l| self.value(l) == TRUE) {
            return true;
        }
        lits.retain(|&l| self.value(l) != FALSE);
        self.num_original_clauses += 1;
        match lits.len() {
            0 => {
                self.ok = false;
            }
            1 => {
                self.enqueue(lits[0], Reason::Decision);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            2 => self.attach_binary(lits[0], lits[1]),
            _ => {
                self.attach_long(&lits, false);
            }
        }
        self.ok
    }

    fn propagate(&mut self) -> Option<Conflict> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.idx()]);
            let mut i = 0;
            let mut j = 0;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if w.cref == BINARY {
                    ws[j] = w;
                    j += 1;
                    match self.value(w.blocker) {
                        TRUE => {}
                        FALSE => {
                            conflict = Some(Conflict::Binary(false_lit, w.blocker));
                            break 'watchers;
                        }
                        _ => self.enqueue(w.blocker, Reason::Binary(false_lit)),
                    }
                    continue;
                }
                if self.headers[w.cref as usize].deleted {
                    continue;
                }
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let h = &self.headers[w.cref as usize];
                let start = h.start as usize;
                let len = h.len as usize;
                if self.arena[start] == false_lit {
                    self.arena.swap(start, start + 1);
                }
                let first = self.arena[start];
                let keep = Watcher { cref: w.cref, blocker: first };
                if first != w.blocker && self.value(first) == TRUE {
                    ws[j] = keep;
                    j += 1;
                    continue;
                }
                for k in 2..len {
                    let lk = self.arena[start + k];
                    if self.value(lk) != FALSE {
                        self.arena.swap(start + 1, start + k);
                        self.watches[lk.idx()].push(keep);
                        continue 'watchers;
                    }
                }
                ws[j] = keep;
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(Conflict::Long(w.cref));
                    break 'watchers;
                }
                self.enqueue(first, Reason::Long(w.cref));
            }
            while i < ws.len() {
                ws[j] = ws[i];
                i += 1;
                j += 1;
            }
            ws.truncate(j);
            // the watch list may have received new entries for this literal
            // while it was taken; none can arrive since a clause never moves
            // its watch onto a false literal
            debug_assert!(self.watches[false_lit.idx()].is_empty());
            self.watches[false_lit.idx()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let h = &mut self.headers[cref as usize];
        if !h.learnt {
            return;
        }
        h.activity += self.cla_inc;
        if h.activity > 1e20 {
            for &c in &self.learnts {
                self.headers[c as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn reason_lits(&self, r: Reason, implied: L) -> Vec<L> {
        match r {
            Reason::Decision => Vec::new(),
            Reason::Binary(other) => vec![other],
            Reason::Long(cref) => self
                .clause_lits(cref)
                .iter()
                .copied()
                .filter(|&l| l != implied)
                .collect(),
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, conflict: Conflict) -> (Vec<L>, u32) {
        let mut learnt: Vec<L> = vec![L(0)];
        let mut path = 0usize;
        let mut index = self.trail.len();
        let mut lits: Vec<L> = match conflict {
            Conflict::Binary(a, b) => vec![a, b],
            Conflict::Long(cref) => {
                self.bump_clause(cref);
                self.clause_lits(cref).to_vec()
            }
        };
        let current = self.decision_level();
        let uip = loop {
            for &q in &lits {
                let v = q.var() as usize;
                if self.seen[v] == 0 && self.level[v] > 0 {
                    self.seen[v] = 1;
                    self.bump_var(q.var());
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] != 0 {
                    break;
                }
            }
            let pl = self.trail[index];
            self.seen[pl.var() as usize] = 0;
            path -= 1;
            if path == 0 {
                break pl;
            }
            let r = self.reason[pl.var() as usize];
            if let Reason::Long(cref) = r {
                self.bump_clause(cref);
            }
            lits = self.reason_lits(r, pl);
        };
        learnt[0] = !uip;

        // recursive minimisation
        let to_clear: Vec<L> = learnt.clone();
        let abstract_levels = learnt[1..]
            .iter()
            .fold(0u32, |acc, l| acc | 1 << (self.level[l.var() as usize] & 31));
        let mut kept = vec![learnt[0]];
        let mut extra_seen: Vec<u32> = Vec::new();
        for &l in &learnt[1..] {
            let r = self.reason[l.var() as usize];
            if r == Reason::Decision || !self.lit_redundant(l, abstract_levels, &mut extra_seen) {
                kept.push(l);
            }
        }
        for l in to_clear {
            self.seen[l.var() as usize] = 0;
        }
        for v in extra_seen {
            self.seen[v as usize] = 0;
        }
        let mut learnt = kept;

        let back = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize]
        };
        (learnt, back)
    }

    fn lit_redundant(&mut self, l: L, abstract_levels: u32, extra_seen: &mut Vec<u32>) -> bool {
        let mut stack = vec![l];
        let top = extra_seen.len();
        while let Some(x) = stack.pop() {
            let r = self.reason[x.var() as usize];
            let implied = if self.value(x) == TRUE { x } else { !x };
            for q in self.reason_lits(r, implied) {
                let v = q.var() as usize;
                if self.seen[v] != 0 || self.level[v] == 0 {
                    continue;
                }
                let lv_bit = 1 << (self.level[v] & 31);
                if self.reason[v] != Reason::Decision && abstract_levels & lv_bit != 0 {
                    self.seen[v] = 1;
                    extra_seen.push(v as u32);
                    stack.push(q);
                } else {
                    for &u in &extra_seen[top..] {
                        self.seen[u as usize] = 0;
                    }
                    extra_seen.truncate(top);
                    return false;
                }
            }
        }
        true
    }

    /// Assumption literals that together force `failed` (an assumption whose
    /// negation is currently true) to be false.
    fn analyze_final(&mut self, failed: L) -> Vec<Lit> {
        let mut out = vec![failed.to_ext()];
        if self.decision_level() == 0 {
            return out;
        }
        self.seen[failed.var() as usize] = 1;
        let start = self.trail_lim[0];
        for i in (start..self.trail.len()).rev() {
            let x = self.trail[i];
            let v = x.var() as usize;
            if self.seen[v] == 0 {
                continue;
            }
            match self.reason[v] {
                // decisions below the assumption levels are assumptions; this
                // includes `!failed` itself when both polarities were assumed
                Reason::Decision => out.push(x.to_ext()),
                r => {
                    for q in self.reason_lits(r, x) {
                        if self.level[q.var() as usize] > 0 {
                            self.seen[q.var() as usize] = 1;
                        }
                    }
                }
            }
            self.seen[v] = 0;
        }
        self.seen[failed.var() as usize] = 0;
        out
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.values[v] = UNDEF;
            self.reason[v] = Reason::Decision;
            self.polarity[v] = !l.is_neg();
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn locked(&self, cref: u32) -> bool {
        let first = self.clause_lits(cref)[0];
        self.value(first) == TRUE && self.reason[first.var() as usize] == Reason::Long(cref)
    }

    fn reduce_db(&mut self) {
        let mut learnts = std::mem::take(&mut self.learnts);
        learnts.sort_by(|&a, &b| {
            let ha = &self.headers[a as usize];
            let hb = &self.headers[b as usize];
            ha.activity
                .partial_cmp(&hb.activity)
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let half = learnts.len() / 2;
        let mut keep = Vec::with_capacity(learnts.len());
        for (i, &c) in learnts.iter().enumerate() {
            let h = &self.headers[c as usize];
            if i < half && h.len > 2 && !self.locked(c) {
                self.headers[c as usize].deleted = true;
                self.wasted += self.headers[c as usize].len as usize;
            } else {
                keep.push(c);
            }
        }
        keep.sort();
        self.learnts = keep;
        for ws in &mut self.watches {
            ws.retain(|w| w.cref == BINARY || !self.headers[w.cref as usize].deleted);
        }
        if self.wasted * 2 > self.arena.len() {
            self.collect_garbage();
        }
    }

    fn collect_garbage(&mut self) {
        let mut remap = vec![u32::MAX; self.headers.len()];
        let mut arena = Vec::with_capacity(self.arena.len() - self.wasted);
        let mut headers = Vec::with_capacity(self.headers.len());
        for (old, h) in self.headers.iter().enumerate() {
            if h.deleted {
                continue;
            }
            remap[old] = headers.len() as u32;
            let start = arena.len() as u32;
            arena.extend_from_slice(&self.arena[h.start as usize..(h.start + h.len) as usize]);
            headers.push(Header { start, ..h.clone() });
        }
        for ws in &mut self.watches {
            for w in ws.iter_mut() {
                if w.cref != BINARY {
                    w.cref = remap[w.cref as usize];
                }
            }
        }
        for r in &mut self.reason {
            if let Reason::Long(c) = r {
                *c = remap[*c as usize];
            }
        }
        for c in &mut self.learnts {
            *c = remap[*c as usize];
        }
        self.arena = arena;
        self.headers = headers;
        self.wasted = 0;
    }

    fn pick_branch(&mut self) -> Option<L> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.values[v as usize] == UNDEF {
                let neg = !self.polarity[v as usize];
                return Some(L(v << 1 | neg as u32));
            }
        }
        None
    }

    fn learn(&mut self, learnt: Vec<L>) {
        self.stats.learnt_clauses += 1;
        match learnt.len() {
            1 => self.enqueue(learnt[0], Reason::Decision),
            _ => {
                let cref = self.attach_long(&learnt, true);
                self.learnts.push(cref);
                self.bump_clause(cref);
                self.enqueue(learnt[0], Reason::Long(cref));
            }
        }
        self.var_inc /= 0.95;
        self.cla_inc /= 0.999;
    }

    /// Searches until a verdict, a restart (`None`), or the conflict budget runs out.
    fn search(&mut self, budget: u64, conflicts_left: &mut Option<u64>) -> Option<Status> {
        let mut conflicts_here = 0u64;
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_here += 1;
                if let Some(left) = conflicts_left {
                    if *left == 0 {
                        return Some(Status::Aborted);
                    }
                    *left -= 1;
                }
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(Status::Unsat);
                }
                let (learnt, back) = self.analyze(conflict);
                self.cancel_until(back);
                self.learn(learnt);
                continue;
            }
            if self.config.restarts && conflicts_here >= budget {
                self.stats.restarts += 1;
                self.cancel_until(0);
                return None;
            }
            if self.config.clause_deletion
                && self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts
            {
                self.reduce_db();
            }
            let mut next = None;
            while (self.decision_level() as usize) < self.assumptions.len() {
                let a = self.assumptions[self.decision_level() as usize];
                match self.value(a) {
                    TRUE => self.trail_lim.push(self.trail.len()),
                    FALSE => {
                        self.failed = self.analyze_final(a);
                        return Some(Status::Unsat);
                    }
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let decision = match next {
                Some(a) => a,
                None => match self.pick_branch() {
                    Some(l) => l,
                    None => return Some(Status::Sat),
                },
            };
            self.stats.decisions += 1;
            self.trail_lim.push(self.trail.len());
            self.enqueue(decision, Reason::Decision);
        }
    }

    /// Decides satisfiability under the given assumptions.
    pub fn solve(&mut self, assumptions: &[Lit]) -> Status {
        self.failed.clear();
        if !self.ok {
            return Status::Unsat;
        }
        for a in assumptions {
            self.ensure_vars(a.var());
        }
        self.cancel_until(0);
        self.assumptions = assumptions.iter().map(|&l| L::from_ext(l)).collect();
        self.max_learnts = (self.num_original_clauses as f64 / 3.0).max(5000.0);
        let mut conflicts_left = self.config.conflict_limit;
        let mut round = 0u64;
        let status = loop {
            let budget = (luby(2.0, round) * self.config.restart_base as f64) as u64;
            round += 1;
            if let Some(s) = self.search(budget, &mut conflicts_left) {
                break s;
            }
            self.max_learnts *= 1.05;
        };
        if status != Status::Sat {
            self.cancel_until(0);
        }
        status
    }

    /// Value of every variable after a satisfiable call (index `v - 1`).
    pub fn model(&self) -> Vec<bool> {
        self.values.iter().map(|&v| v == TRUE).collect()
    }

    /// After an unsatisfiable call under assumptions: a subset of the
    /// assumptions that is already contradictory. Empty if the clauses alone
    /// are contradictory.
    pub fn failed_assumptions(&self) -> &[Lit] {
        &self.failed
    }

    /// Returns to decision level 0 so clauses can be added.
    pub fn reset(&mut self) {
        self.cancel_until(0);
    }
}
