//! Table-filling engine shared by the HLT and Felsch strategies.
//!
//! Cosets are `u32` row numbers; `NONE` marks an undefined entry. Coincidences
//! are handled with a union-find whose representative is always the smallest
//! live coset, replaying the dead-coset queue immediately.

use super::Strategy;

pub(crate) const NONE: u32 = u32::MAX;

/// Column layout for a presentation: one column per involution generator,
/// two (g, g⁻¹) for every other generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Columns {
    pub inv: Vec<usize>,
    /// Column of (generator, inverse?) pairs.
    pub of_letter: Vec<[usize; 2]>,
    /// Representative letter of each column as (generator, inverse?).
    pub letter: Vec<(usize, bool)>,
}

impl Columns {
    pub fn new(involutions: &[bool]) -> Self {
        let mut inv = Vec::new();
        let mut of_letter = Vec::new();
        let mut letter = Vec::new();
        for (g, &is_inv) in involutions.iter().enumerate() {
            let c = inv.len();
            if is_inv {
                inv.push(c);
                letter.push((g, false));
                of_letter.push([c, c]);
            } else {
                inv.push(c + 1);
                inv.push(c);
                letter.push((g, false));
                letter.push((g, true));
                of_letter.push([c, c + 1]);
            }
        }
        Self {
            inv,
            of_letter,
            letter,
        }
    }

    pub fn len(&self) -> usize {
        self.inv.len()
    }
}

pub(crate) struct Full;

pub(crate) enum Outcome {
    Closed,
    Exceeded,
}

pub(crate) struct Engine<'a> {
    cols: &'a Columns,
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    live: usize,
    cap: usize,
    relators: &'a [Vec<usize>],
    subgens: &'a [Vec<usize>],
    /// Felsch only: cyclic conjugates of relators and their inverses, keyed
    /// by first column.
    by_first: Vec<Vec<Vec<usize>>>,
    deductions: Vec<(u32, usize)>,
    track_deductions: bool,
    pub total_defined: usize,
    pub max_live: usize,
}

impl<'a> Engine<'a> {
    pub fn new(
        cols: &'a Columns,
        relators: &'a [Vec<usize>],
        subgens: &'a [Vec<usize>],
        cap: usize,
        strategy: Strategy,
    ) -> Self {
        let ncols = cols.len();
        let track_deductions = strategy == Strategy::Felsch;
        let mut by_first = vec![Vec::new(); ncols];
        if track_deductions {
            for r in relators {
                let rinv: Vec<usize> = r.iter().rev().map(|&c| cols.inv[c]).collect();
                for word in [r, &rinv] {
                    for k in 0..word.len() {
                        let rot: Vec<usize> = word[k..].iter().chain(&word[..k]).copied().collect();
                        let list: &mut Vec<Vec<usize>> = &mut by_first[rot[0]];
                        if !list.contains(&rot) {
                            list.push(rot);
                        }
                    }
                }
            }
        }
        Self {
            cols,
            ncols,
            table: vec![NONE; ncols],
            parent: vec![0],
            queue: Vec::new(),
            live: 1,
            cap,
            relators,
            subgens,
            by_first,
            deductions: Vec::new(),
            track_deductions,
            total_defined: 1,
            max_live: 1,
        }
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.ncols + x] = d;
    }

    #[inline]
    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, Full> {
        if self.rows() >= self.cap {
            return Err(Full);
        }
        let d = self.rows() as u32;
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.parent.push(d);
        self.live += 1;
        self.total_defined += 1;
        self.max_live = self.max_live.max(self.live);
        self.set(c, x, d);
        self.set(d, self.cols.inv[x], c);
        if self.track_deductions {
            self.deductions.push((c, x));
        }
        Ok(d)
    }

    fn deduce(&mut self, c: u32, x: usize, d: u32) {
        self.set(c, x, d);
        self.set(d, self.cols.inv[x], c);
        if self.track_deductions {
            self.deductions.push((c, x));
        }
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != r {
            let next = self.parent[k as usize];
            self.parent[k as usize] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
            self.live -= 1;
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                let xi = self.cols.inv[x];
                self.set(d, xi, NONE);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                if mu_x != NONE {
                    self.merge(nu, mu_x);
                } else {
                    let nu_xi = self.get(nu, xi);
                    if nu_xi != NONE {
                        self.merge(mu, nu_xi);
                    } else {
                        self.deduce(mu, x, nu);
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// Traces `w` from `c`, defining new cosets to close the gap.
    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<(), Full> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                let n = self.get(f, w[i]);
                if n == NONE {
                    break;
                }
                f = n;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                let n = self.get(b, self.cols.inv[w[j as usize]]);
                if n == NONE {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.deduce(f, w[i], b);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    /// Traces `w` from `c` without defining cosets.
    fn scan(&mut self, c: u32, w: &[usize]) {
        if w.is_empty() {
            return;
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        while (i as isize) <= j {
            let n = self.get(f, w[i]);
            if n == NONE {
                break;
            }
            f = n;
            i += 1;
        }
        if (i as isize) > j {
            if f != c {
                self.coincidence(f, c);
            }
            return;
        }
        while j >= i as isize {
            let n = self.get(b, self.cols.inv[w[j as usize]]);
            if n == NONE {
                break;
            }
            b = n;
            j -= 1;
        }
        if j < i as isize {
            self.coincidence(f, b);
        } else if j == i as isize {
            self.deduce(f, w[i], b);
        }
    }

    /// Scans every relator from every live coset without defining anything.
    fn lookahead(&mut self) {
        let relators = self.relators;
        let mut c = 0u32;
        while (c as usize) < self.rows() {
            if self.alive(c) {
                for r in relators {
                    self.scan(c, r);
                    if !self.alive(c) {
                        break;
                    }
                }
            }
            c += 1;
        }
    }

    /// Renumbers live cosets contiguously, preserving order. Returns the new
    /// number of the first live coset at or after `pos`.
    fn compact(&mut self, pos: usize) -> usize {
        debug_assert!(self.queue.is_empty());
        let n = self.rows();
        let mut map = vec![NONE; n];
        let mut next = 0u32;
        let mut new_pos = None;
        for c in 0..n {
            if c >= pos && new_pos.is_none() && self.alive(c as u32) {
                new_pos = Some(next as usize);
            }
            if self.alive(c as u32) {
                map[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..n {
            if map[c] == NONE {
                continue;
            }
            for x in 0..self.ncols {
                let e = self.table[c * self.ncols + x];
                table.push(if e == NONE { NONE } else { map[e as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.deductions.clear();
        new_pos.unwrap_or(next as usize)
    }

    fn is_complete_row(&self, c: u32) -> bool {
        (0..self.ncols).all(|x| self.get(c, x) != NONE)
    }

    fn trace_opt(&self, c: u32, w: &[usize]) -> Option<u32> {
        let mut k = c;
        for &x in w {
            k = self.get(k, x);
            if k == NONE {
                return None;
            }
        }
        Some(k)
    }

    /// True when every live row is complete and every relator closes at
    /// every live coset, and each subgroup generator closes at coset 0.
    fn verified(&self) -> bool {
        for c in 0..self.rows() as u32 {
            if !self.alive(c) {
                continue;
            }
            if !self.is_complete_row(c) {
                return false;
            }
            for r in self.relators {
                if self.trace_opt(c, r) != Some(c) {
                    return false;
                }
            }
        }
        self.subgens.iter().all(|s| self.trace_opt(0, s) == Some(0))
    }

    pub fn run(&mut self, strategy: Strategy) -> Outcome {
        let subgens = self.subgens;
        for s in subgens {
            if self.scan_and_fill(0, s).is_err() {
                return Outcome::Exceeded;
            }
        }
        loop {
            let done = match strategy {
                Strategy::Hlt => self.hlt(),
                Strategy::Felsch => self.felsch(),
            };
            if !done {
                return Outcome::Exceeded;
            }
            if self.verified() {
                return Outcome::Closed;
            }
            // Should be unreachable; a full pass repairs any gap left behind.
            self.lookahead();
        }
    }

    /// Handles an out-of-space event. Returns the resumption point, or
    /// `None` when no room could be recovered.
    fn recover(&mut self, pos: usize) -> Option<usize> {
        let before = self.live;
        self.lookahead();
        let pos = self.compact(pos);
        debug_assert!(self.live <= before);
        // Give up unless at least 1% of the table is free again.
        if self.rows() + (self.cap / 100).max(1) > self.cap {
            return None;
        }
        Some(pos)
    }

    fn hlt(&mut self) -> bool {
        let relators = self.relators;
        let mut c = 0usize;
        'outer: while c < self.rows() {
            let cc = c as u32;
            if self.alive(cc) {
                for r in relators {
                    if self.scan_and_fill(cc, r).is_err() {
                        match self.recover(c) {
                            Some(p) => {
                                c = p;
                                continue 'outer;
                            }
                            None => return false,
                        }
                    }
                    if !self.alive(cc) {
                        break;
                    }
                }
                if self.alive(cc) {
                    for x in 0..self.ncols {
                        if self.get(cc, x) == NONE && self.define(cc, x).is_err() {
                            match self.recover(c) {
                                Some(p) => {
                                    c = p;
                                    continue 'outer;
                                }
                                None => return false,
                            }
                        }
                    }
                }
            }
            c += 1;
        }
        true
    }

    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.alive(c) {
                continue;
            }
            let n = self.by_first[x].len();
            for k in 0..n {
                let r = std::mem::take(&mut self.by_first[x][k]);
                self.scan(c, &r);
                self.by_first[x][k] = r;
                if !self.alive(c) {
                    break;
                }
            }
            if !self.alive(c) {
                continue;
            }
            let d = self.get(c, x);
            if d == NONE || !self.alive(d) {
                continue;
            }
            let xi = self.cols.inv[x];
            let n = self.by_first[xi].len();
            for k in 0..n {
                let r = std::mem::take(&mut self.by_first[xi][k]);
                self.scan(d, &r);
                self.by_first[xi][k] = r;
                if !self.alive(d) {
                    break;
                }
            }
        }
    }

    fn felsch(&mut self) -> bool {
        let mut c = 0usize;
        loop {
            self.process_deductions();
            // first undefined entry in coset order
            let mut found = None;
            while c < self.rows() {
                let cc = c as u32;
                if self.alive(cc) {
                    if let Some(x) = (0..self.ncols).find(|&x| self.get(cc, x) == NONE) {
                        found = Some((cc, x));
                        break;
                    }
                }
                c += 1;
            }
            let Some((cc, x)) = found else {
                return true;
            };
            if self.define(cc, x).is_err() {
                if self.live == self.rows() {
                    return false;
                }
                self.compact(0);
                c = 0;
                continue;
            }
            let before = self.live;
            self.process_deductions();
            if self.live != before {
                c = 0;
            }
        }
    }

    /// Consumes the engine, returning the compacted table and its row count.
    pub fn into_table(mut self) -> (Vec<u32>, usize) {
        self.compact(0);
        let n = self.rows();
        (self.table, n)
    }
}
