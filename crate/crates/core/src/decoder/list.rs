//! Successive-cancellation list decoding of PAC codes.
//!
//! Every path refers to one LLR block and one partial-sum block per tree
//! level (level `lambda` holds `2^lambda` entries, level `n` is the channel).
//! Blocks are reference counted inside per-level pools, so duplicating a path
//! shares all of them and a level gets a private block only when the path
//! next overwrites it while it is still shared.

use crate::config::{CodeConfig, LlrMode};
use crate::conv::{ConvState, ConvTaps};
use crate::error::Result;
use crate::flip::confidence;

use super::llr::{calc_pm, f_min_sum, llr_f, llr_g};
use super::sc::check_llrs;

/// Path-competition outcome at one information index.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetitionRecord {
    pub index: usize,
    pub survivor_pms: Vec<f64>,
    pub removed_pms: Vec<f64>,
    /// `E_i(alpha)` computed from the two PM sets.
    pub confidence: f64,
}

/// One surviving hypothesis after the last bit.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedPath {
    pub v_hat: Vec<u8>,
    pub u_hat: Vec<u8>,
    pub pm: f64,
}

/// List state after one bit index, for trace output.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub index: usize,
    pub info: bool,
    pub survivor_pms: Vec<f64>,
}

impl std::fmt::Display for TraceEntry {
    /// `<index> <F|I> <pm>,<pm>,...` with PMs in list order.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} ", self.index, if self.info { 'I' } else { 'F' })?;
        for (j, pm) in self.survivor_pms.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{pm:.6}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListDecodeOutput {
    /// Profiled vector of the minimum-PM survivor.
    pub v_hat: Vec<u8>,
    pub records: Vec<CompetitionRecord>,
    /// Survivors in list order.
    pub paths: Vec<DecodedPath>,
    /// Empty unless requested through [`DecodeOptions::trace`].
    pub trace: Vec<TraceEntry>,
}

impl ListDecodeOutput {
    pub fn best_pm(&self) -> f64 {
        self.paths
            .iter()
            .map(|p| p.pm)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Invert the pruning decision at this bit index. Indices without a
    /// path competition leave the decode unchanged.
    pub flip_index: Option<usize>,
    pub trace: bool,
}

/// Pruning decision over candidate metrics given in creation order.
///
/// Candidates are ranked by `(pm, position)`; the `keep` best are marked
/// `true`. With `inverted`, the mask is complemented so that exactly the
/// candidates standard pruning would discard survive.
pub fn select_survivors(pms: &[f64], keep: usize, inverted: bool) -> Vec<bool> {
    let mut mask = vec![inverted; pms.len()];
    if keep >= pms.len() {
        mask.iter_mut().for_each(|m| *m = !inverted);
        return mask;
    }
    let mut order: Vec<usize> = (0..pms.len()).collect();
    if keep > 0 {
        // (pm, position) is a strict total order, so the selected set is unique
        order.select_nth_unstable_by(keep - 1, |&a, &b| pms[a].total_cmp(&pms[b]).then(a.cmp(&b)));
    }
    for &c in &order[..keep] {
        mask[c] = !inverted;
    }
    mask
}

/// Fixed-width buffers with reference counts. A shared block handed to
/// [`BlockPool::unique`] is swapped for a fresh one; callers overwrite the
/// whole block, so nothing is copied.
struct BlockPool<T> {
    width: usize,
    data: Vec<T>,
    refs: Vec<u32>,
    free: Vec<usize>,
}

impl<T: Copy + Default> BlockPool<T> {
    fn new(width: usize, capacity: usize) -> Self {
        Self {
            width,
            data: Vec::with_capacity(width * capacity),
            refs: Vec::with_capacity(capacity),
            free: Vec::with_capacity(capacity),
        }
    }

    fn alloc(&mut self) -> usize {
        if let Some(id) = self.free.pop() {
            self.refs[id] = 1;
            return id;
        }
        self.refs.push(1);
        self.data.resize(self.data.len() + self.width, T::default());
        self.refs.len() - 1
    }

    fn retain(&mut self, id: usize) {
        self.refs[id] += 1;
    }

    fn release(&mut self, id: usize) {
        self.refs[id] -= 1;
        if self.refs[id] == 0 {
            self.free.push(id);
        }
    }

    fn unique(&mut self, id: usize) -> usize {
        if self.refs[id] == 1 {
            id
        } else {
            self.refs[id] -= 1;
            self.alloc()
        }
    }

    #[inline]
    fn get(&self, id: usize) -> &[T] {
        &self.data[id * self.width..(id + 1) * self.width]
    }

    #[inline]
    fn get_mut(&mut self, id: usize) -> &mut [T] {
        &mut self.data[id * self.width..(id + 1) * self.width]
    }
}

/// All paths of one decode. A path is a slot: per-level block ids into the
/// LLR and partial-sum pools plus its own decision rows.
struct PathArena<'a> {
    channel: &'a [f64],
    taps: &'a ConvTaps,
    mode: LlrMode,
    log_n: usize,
    n: usize,
    llr: Vec<BlockPool<f64>>,
    // codeword of the most recent left child at each level
    sums: Vec<BlockPool<u8>>,
    llr_ids: Vec<usize>,
    sum_ids: Vec<usize>,
    state: Vec<ConvState>,
    pm: Vec<f64>,
    v_hat: Vec<u8>,
    u_hat: Vec<u8>,
    free_slots: Vec<usize>,
}

impl<'a> PathArena<'a> {
    fn new(channel: &'a [f64], cfg: &'a CodeConfig) -> Self {
        let log_n = cfg.log_n() as usize;
        let n = cfg.block_len();
        let cap = 2 * cfg.list_size();
        Self {
            channel,
            taps: cfg.taps(),
            mode: cfg.llr_mode(),
            log_n,
            n,
            llr: (0..log_n).map(|l| BlockPool::new(1 << l, cap)).collect(),
            sums: (0..log_n).map(|l| BlockPool::new(1 << l, cap)).collect(),
            llr_ids: Vec::with_capacity(cap * log_n),
            sum_ids: Vec::with_capacity(cap * log_n),
            state: Vec::with_capacity(cap),
            pm: Vec::with_capacity(cap),
            v_hat: Vec::with_capacity(cap * n),
            u_hat: Vec::with_capacity(cap * n),
            free_slots: Vec::with_capacity(cap),
        }
    }

    fn new_slot(&mut self) -> usize {
        if let Some(s) = self.free_slots.pop() {
            return s;
        }
        let s = self.pm.len();
        self.llr_ids.resize(self.llr_ids.len() + self.log_n, 0);
        self.sum_ids.resize(self.sum_ids.len() + self.log_n, 0);
        self.state.push(self.taps.zero_state());
        self.pm.push(0.0);
        self.v_hat.resize(self.v_hat.len() + self.n, 0);
        self.u_hat.resize(self.u_hat.len() + self.n, 0);
        s
    }

    fn root(&mut self) -> usize {
        let s = self.new_slot();
        for lambda in 0..self.log_n {
            self.llr_ids[s * self.log_n + lambda] = self.llr[lambda].alloc();
            self.sum_ids[s * self.log_n + lambda] = self.sums[lambda].alloc();
        }
        self.state[s] = self.taps.zero_state();
        self.pm[s] = 0.0;
        s
    }

    /// Copies slot `src` into a new slot, sharing every level buffer.
    /// Decision rows are copied up to (excluding) bit `upto`.
    fn duplicate(&mut self, src: usize, upto: usize) -> usize {
        let dst = self.new_slot();
        let ln = self.log_n;
        for lambda in 0..ln {
            let a = self.llr_ids[src * ln + lambda];
            let b = self.sum_ids[src * ln + lambda];
            self.llr[lambda].retain(a);
            self.sums[lambda].retain(b);
            self.llr_ids[dst * ln + lambda] = a;
            self.sum_ids[dst * ln + lambda] = b;
        }
        self.state[dst] = self.state[src];
        self.pm[dst] = self.pm[src];
        let n = self.n;
        self.v_hat.copy_within(src * n..src * n + upto, dst * n);
        self.u_hat.copy_within(src * n..src * n + upto, dst * n);
        dst
    }

    fn kill(&mut self, s: usize) {
        let ln = self.log_n;
        for lambda in 0..ln {
            self.llr[lambda].release(self.llr_ids[s * ln + lambda]);
            self.sums[lambda].release(self.sum_ids[s * ln + lambda]);
        }
        self.free_slots.push(s);
    }

    /// Brings the LLR buffers of slot `s` up to date for leaf `i`.
    fn leaf_llr(&mut self, s: usize, i: usize) -> f64 {
        let ln = self.log_n;
        let top = if i == 0 {
            ln - 1
        } else {
            i.trailing_zeros() as usize
        };
        for lambda in (0..=top).rev() {
            let half = 1usize << lambda;
            let slot = s * ln + lambda;
            let id = self.llr[lambda].unique(self.llr_ids[slot]);
            self.llr_ids[slot] = id;
            let (lower, upper) = self.llr.split_at_mut(lambda + 1);
            let parent: &[f64] = if lambda + 1 == ln {
                self.channel
            } else {
                upper[0].get(self.llr_ids[slot + 1])
            };
            let (a, b) = parent.split_at(half);
            let out = lower[lambda].get_mut(id);
            if (i >> lambda) & 1 == 1 {
                let bits = self.sums[lambda].get(self.sum_ids[slot]);
                for (((o, &x), &y), &bit) in out.iter_mut().zip(a).zip(b).zip(bits) {
                    *o = llr_g(x, y, bit);
                }
            } else {
                match self.mode {
                    LlrMode::MinSum => {
                        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
                            *o = f_min_sum(x, y);
                        }
                    }
                    LlrMode::Exact => {
                        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
                            *o = llr_f(x, y, LlrMode::Exact);
                        }
                    }
                }
            }
        }
        self.llr[0].get(self.llr_ids[s * ln])[0]
    }

    /// Commits `v` at leaf `i`: precodes it, charges the metric and folds
    /// the precoded bit into the partial sums.
    fn extend(&mut self, s: usize, i: usize, v: u8, llr: f64) {
        let (u, next) = self.taps.step(v, self.state[s]);
        self.state[s] = next;
        self.pm[s] = calc_pm(self.pm[s], llr, u);
        self.v_hat[s * self.n + i] = v;
        self.u_hat[s * self.n + i] = u;

        // The finished subtree sits at level `top` (the number of trailing
        // ones of `i`). Its codeword is built right to left in place:
        // c_{l+1} = [left_l ^ c_l, c_l], starting from c_0 = [u].
        let ln = self.log_n;
        let top = (!i).trailing_zeros() as usize;
        if top >= ln {
            return;
        }
        let width = 1usize << top;
        let slot = s * ln + top;
        let id = self.sums[top].unique(self.sum_ids[slot]);
        self.sum_ids[slot] = id;
        let (lower, upper) = self.sums.split_at_mut(top);
        let dest = upper[0].get_mut(id);
        dest[width - 1] = u;
        for (lambda, pool) in lower.iter().enumerate() {
            let half = 1usize << lambda;
            let base = width - 2 * half;
            let left = pool.get(self.sum_ids[s * ln + lambda]);
            let (head, tail) = dest[base..base + 2 * half].split_at_mut(half);
            for ((d, &l), &r) in head.iter_mut().zip(left).zip(tail.iter()) {
                *d = l ^ r;
            }
        }
    }

    fn path(&self, s: usize) -> DecodedPath {
        let row = s * self.n..(s + 1) * self.n;
        DecodedPath {
            v_hat: self.v_hat[row.clone()].to_vec(),
            u_hat: self.u_hat[row].to_vec(),
            pm: self.pm[s],
        }
    }
}

/// Runs one list decode, optionally inverting the pruning at one index.
pub fn list_decode(
    llrs: &[f64],
    cfg: &CodeConfig,
    opts: DecodeOptions,
) -> Result<ListDecodeOutput> {
    check_llrs(llrs, cfg)?;
    let n = cfg.block_len();
    let list_size = cfg.list_size();
    let mut arena = PathArena::new(llrs, cfg);

    let mut active = vec![arena.root()];
    let mut parents: Vec<usize> = Vec::with_capacity(list_size);
    let mut leaf = Vec::with_capacity(list_size);
    let mut cand_pms = Vec::with_capacity(2 * list_size);
    let mut records = Vec::with_capacity(cfg.flippable_indices().len());
    let mut trace = Vec::new();

    for i in 0..n {
        leaf.clear();
        for &s in &active {
            leaf.push(arena.leaf_llr(s, i));
        }

        if !cfg.is_info(i) {
            for (&s, &llr) in active.iter().zip(&leaf) {
                arena.extend(s, i, 0, llr);
            }
        } else {
            cand_pms.clear();
            for (&s, &llr) in active.iter().zip(&leaf) {
                let (u0, _) = arena.taps.step(0, arena.state[s]);
                cand_pms.push(calc_pm(arena.pm[s], llr, u0));
                cand_pms.push(calc_pm(arena.pm[s], llr, u0 ^ 1));
            }
            let keep = if cand_pms.len() <= list_size {
                vec![true; cand_pms.len()]
            } else {
                let mask = select_survivors(&cand_pms, list_size, opts.flip_index == Some(i));
                let mut survivor_pms = Vec::with_capacity(list_size);
                let mut removed_pms = Vec::with_capacity(cand_pms.len() - list_size);
                for (&pm, &kept) in cand_pms.iter().zip(&mask) {
                    if kept {
                        survivor_pms.push(pm);
                    } else {
                        removed_pms.push(pm);
                    }
                }
                records.push(CompetitionRecord {
                    index: i,
                    confidence: confidence(&survivor_pms, &removed_pms, cfg.alpha()),
                    survivor_pms,
                    removed_pms,
                });
                mask
            };

            std::mem::swap(&mut parents, &mut active);
            active.clear();
            // drop losers first so their buffers are free before any copy
            for (l, &s) in parents.iter().enumerate() {
                if !keep[2 * l] && !keep[2 * l + 1] {
                    arena.kill(s);
                }
            }
            for (l, &s) in parents.iter().enumerate() {
                let llr = leaf[l];
                match (keep[2 * l], keep[2 * l + 1]) {
                    (true, true) => {
                        let twin = arena.duplicate(s, i);
                        arena.extend(s, i, 0, llr);
                        arena.extend(twin, i, 1, llr);
                        active.push(s);
                        active.push(twin);
                    }
                    (true, false) => {
                        arena.extend(s, i, 0, llr);
                        active.push(s);
                    }
                    (false, true) => {
                        arena.extend(s, i, 1, llr);
                        active.push(s);
                    }
                    (false, false) => {}
                }
            }
        }

        if opts.trace {
            trace.push(TraceEntry {
                index: i,
                info: cfg.is_info(i),
                survivor_pms: active.iter().map(|&s| arena.pm[s]).collect(),
            });
        }
    }

    let paths: Vec<DecodedPath> = active.iter().map(|&s| arena.path(s)).collect();
    let best = paths
        .iter()
        .enumerate()
        .min_by(|(a, p), (b, q)| p.pm.total_cmp(&q.pm).then(a.cmp(b)))
        .map(|(l, _)| l)
        .expect("list never empty");
    Ok(ListDecodeOutput {
        v_hat: paths[best].v_hat.clone(),
        records,
        paths,
        trace,
    })
}

/// Standard PAC-SCL decode with the list size from `cfg`.
pub fn pac_scl_decode(llrs: &[f64], cfg: &CodeConfig) -> Result<ListDecodeOutput> {
    list_decode(llrs, cfg, DecodeOptions::default())
}
