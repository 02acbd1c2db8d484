//! Exhaustive searches for good tags, orthogonal codes, and headers.
//!
//! Everything here enumerates deterministically and reports honestly: a
//! report's `exhaustive` flag is set only when the result is provably
//! optimal (full enumeration, or a search that attained a matching upper
//! bound). Caps guard against runaway spaces and exceeding one is an error,
//! never a silent truncation.

use serde::{Deserialize, Serialize};

use crate::constructions::{johnson_bound, verify_ooc};
use crate::error::{Error, Result};
use crate::tags::{comma_free_index, comma_free_upper_bound};

/// Enumeration caps. Defaults keep every search at desk scale.
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    /// Frame length cap for the optimal-tag search.
    pub max_tag_v: usize,
    /// Frame length cap for the orthogonal-code search.
    pub max_ooc_v: usize,
    /// Weight cap for the orthogonal-code search.
    pub max_ooc_k: usize,
    /// Frame length cap for the single-header search.
    pub max_header_v: usize,
    /// Frame length cap for the header-set search.
    pub max_header_set_v: usize,
    /// Set size cap for the header-set search.
    pub max_header_set_s: usize,
    /// Hard ceiling on enumeration nodes for any one search.
    pub max_candidates: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_tag_v: 40,
            max_ooc_v: 200,
            max_ooc_k: 5,
            max_header_v: 30,
            max_header_set_v: 24,
            max_header_set_s: 4,
            max_candidates: 10_000_000,
        }
    }
}

/// Outcome of a search, serializable as JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub v: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<usize>,
    /// Best objective value found: comma-free index, code size, or minimax
    /// aperiodic sidelobe, depending on the search.
    pub objective: i64,
    /// Supports realizing the objective.
    pub witnesses: Vec<Vec<usize>>,
    /// Enumeration nodes visited.
    pub candidates: u64,
    /// True when the objective is provably optimal for the parameters.
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound_met: Option<bool>,
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Maximizes the comma-free index over weight-`k` supports of `Z_v`.
///
/// Translation invariance lets the scan fix 0 in every support; reflection
/// invariance skips evaluating a support whose mirror image was already
/// scored. Ties go to the lexicographically smallest support evaluated.
pub fn search_optimal_tag(v: usize, k: usize, limits: &SearchLimits) -> Result<SearchReport> {
    if v < 4 || k < 2 || k > v / 2 {
        return Err(Error::InvalidParameter(format!(
            "optimal-tag search needs 2 <= k <= v/2 and v >= 4, got v = {v}, k = {k}"
        )));
    }
    let space = binomial(v - 1, k - 1);
    if v > limits.max_tag_v || space > limits.max_candidates as u128 {
        return Err(Error::CapExceeded {
            candidates: space,
            cap: limits.max_candidates.min(binomial(limits.max_tag_v, k) as u64),
        });
    }

    let bound = comma_free_upper_bound(v, k)?;
    let mut best: i64 = i64::MIN;
    let mut witness: Option<Vec<usize>> = None;
    let mut candidates = 0u64;

    let mut support = vec![0usize];
    enumerate_fixed_zero(v, k, &mut support, &mut |s| {
        candidates += 1;
        let mirror = reflect(s, v);
        if mirror.as_slice() < s {
            return; // mirror was enumerated earlier and scored the same
        }
        let rho = comma_free_index(s, v).expect("validated support");
        if rho > best {
            best = rho;
            witness = Some(s.to_vec());
        }
    });

    Ok(SearchReport {
        v,
        k,
        s: None,
        objective: best,
        witnesses: vec![witness.expect("space is nonempty")],
        candidates,
        exhaustive: true,
        bound: Some(bound),
        bound_met: Some(best == bound),
    })
}

fn reflect(support: &[usize], v: usize) -> Vec<usize> {
    let mut r: Vec<usize> = support.iter().map(|&x| (v - x) % v).collect();
    r.sort_unstable();
    r
}

fn enumerate_fixed_zero(
    v: usize,
    k: usize,
    prefix: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if prefix.len() == k {
        f(prefix);
        return;
    }
    let from = prefix.last().copied().unwrap_or(0) + 1;
    // leave room for the remaining elements
    let room = k - prefix.len();
    for next in from..=v - room {
        prefix.push(next);
        enumerate_fixed_zero(v, k, prefix, f);
        prefix.pop();
    }
}

/// Backtracking search for a `(v,k,1)` orthogonal code: codeword supports
/// whose difference lists are internally duplicate-free and mutually
/// disjoint. Stops as soon as `target_size` (or the Johnson bound) is
/// reached. The report's `exhaustive` flag is true when the result is
/// provably maximal: either the bound was attained or the whole tree was
/// explored.
pub fn search_ooc(
    v: usize,
    k: usize,
    target_size: Option<usize>,
    limits: &SearchLimits,
) -> Result<SearchReport> {
    let bound = johnson_bound(v, k)?;
    if v > limits.max_ooc_v || k > limits.max_ooc_k {
        return Err(Error::CapExceeded {
            candidates: binomial(v, k),
            cap: limits.max_candidates,
        });
    }
    if let Some(t) = target_size {
        if t == 0 {
            return Err(Error::InvalidParameter("target size must be positive".into()));
        }
        if t > bound {
            return Err(Error::Infeasible(format!(
                "{t} codewords requested but the Johnson bound for ({v},{k}) is {bound}"
            )));
        }
    }
    let goal = target_size.unwrap_or(bound);

    let mut searcher = OocSearcher {
        v,
        k,
        goal,
        used: vec![false; v],
        code: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        cap: limits.max_candidates,
    };
    let stopped = searcher.extend_code()?;

    let witnesses = searcher.best.clone();
    if !verify_ooc(&witnesses, v, 1, 1)? {
        return Err(Error::VerificationMismatch {
            field: "ooc",
            stored: witnesses.len() as i64,
            actual: -1,
        });
    }
    let objective = witnesses.len() as i64;
    Ok(SearchReport {
        v,
        k,
        s: target_size,
        objective,
        witnesses,
        candidates: searcher.nodes,
        exhaustive: !stopped || objective == bound as i64,
        bound: Some(bound as i64),
        bound_met: Some(objective == bound as i64),
    })
}

struct OocSearcher {
    v: usize,
    k: usize,
    goal: usize,
    used: Vec<bool>,
    code: Vec<Vec<usize>>,
    best: Vec<Vec<usize>>,
    nodes: u64,
    cap: u64,
}

impl OocSearcher {
    /// Tries to append one more codeword. Returns true when the goal was
    /// reached and the search should unwind.
    fn extend_code(&mut self) -> Result<bool> {
        if self.code.len() > self.best.len() {
            self.best = self.code.clone();
        }
        if self.code.len() == self.goal {
            return Ok(true);
        }
        let mut partial = vec![0usize];
        self.grow(&mut partial, 1)
    }

    /// Extends a codeword-in-progress with elements in ascending order,
    /// keeping the global difference list duplicate-free.
    fn grow(&mut self, partial: &mut Vec<usize>, from: usize) -> Result<bool> {
        if partial.len() == self.k {
            if let Some(prev) = self.code.last() {
                if partial.as_slice() <= prev.as_slice() {
                    return Ok(false); // keep codewords in increasing order
                }
            }
            self.code.push(partial.clone());
            let stop = self.extend_code()?;
            self.code.pop();
            return Ok(stop);
        }
        let room = self.k - partial.len();
        for e in from..=self.v - room {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::CapExceeded {
                    candidates: self.nodes as u128,
                    cap: self.cap,
                });
            }
            if let Some(marked) = self.mark(partial, e) {
                partial.push(e);
                let stop = self.grow(partial, e + 1)?;
                partial.pop();
                self.unmark(&marked);
                if stop {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Marks the differences `e` forms with `partial`, rolling back and
    /// refusing if any is taken or internally repeated.
    fn mark(&mut self, partial: &[usize], e: usize) -> Option<Vec<usize>> {
        let mut marked = Vec::with_capacity(2 * partial.len());
        for &x in partial {
            let d1 = (e + self.v - x) % self.v;
            let d2 = (x + self.v - e) % self.v;
            if d1 == d2 || self.used[d1] || self.used[d2] {
                self.unmark(&marked);
                return None;
            }
            self.used[d1] = true;
            self.used[d2] = true;
            marked.push(d1);
            marked.push(d2);
        }
        Some(marked)
    }

    fn unmark(&mut self, marked: &[usize]) {
        for &d in marked {
            self.used[d] = false;
        }
    }
}

/// Minimizes the worst off-peak aperiodic autocorrelation over all weight-`k`
/// supports of `Z_v`. Aperiodic sidelobes are not shift-invariant, so the
/// scan covers every support; ties go to the lexicographically smallest.
pub fn search_min_aperiodic_header(
    v: usize,
    k: usize,
    limits: &SearchLimits,
) -> Result<SearchReport> {
    if k == 0 || k > v {
        return Err(Error::InvalidParameter(format!(
            "weight {k} is outside 1..={v}"
        )));
    }
    let space = binomial(v, k);
    if v > limits.max_header_v || space > limits.max_candidates as u128 {
        return Err(Error::CapExceeded {
            candidates: space,
            cap: limits.max_candidates,
        });
    }

    let mut best = i64::MAX;
    let mut witness: Option<Vec<usize>> = None;
    let mut candidates = 0u64;
    let mut prefix = Vec::new();
    enumerate_subsets(v, k, 0, &mut prefix, &mut |s| {
        candidates += 1;
        let worst = worst_aperiodic_sidelobe(s, v) as i64;
        if worst < best {
            best = worst;
            witness = Some(s.to_vec());
        }
    });

    Ok(SearchReport {
        v,
        k,
        s: None,
        objective: best,
        witnesses: vec![witness.expect("space is nonempty")],
        candidates,
        exhaustive: true,
        bound: None,
        bound_met: None,
    })
}

fn enumerate_subsets(
    v: usize,
    k: usize,
    from: usize,
    prefix: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if prefix.len() == k {
        f(prefix);
        return;
    }
    let room = k - prefix.len();
    for next in from..=v - room {
        prefix.push(next);
        enumerate_subsets(v, k, next + 1, prefix, f);
        prefix.pop();
    }
}

/// Largest aperiodic autocorrelation at nonzero shift: the most pairs of
/// support elements at any one (non-wrapping) distance.
fn worst_aperiodic_sidelobe(support: &[usize], v: usize) -> usize {
    let mut counts = vec![0usize; v];
    for (i, &a) in support.iter().enumerate() {
        for &b in &support[i + 1..] {
            counts[b - a] += 1; // supports are sorted ascending
        }
    }
    counts[1..].iter().copied().max().unwrap_or(0)
}

/// Minimizes the worst aperiodic correlation (off-peak auto, all-shift
/// cross) over sets of `s` distinct weight-`k` supports with pairwise
/// Hamming distance at least `min_distance`.
///
/// `s = 1` degenerates to [`search_min_aperiodic_header`]. No feasible set
/// at all is an `Infeasible` error.
pub fn search_header_set(
    v: usize,
    k: usize,
    s: usize,
    min_distance: usize,
    limits: &SearchLimits,
) -> Result<SearchReport> {
    if s == 0 {
        return Err(Error::InvalidParameter("set size must be positive".into()));
    }
    if v > limits.max_header_set_v || s > limits.max_header_set_s {
        return Err(Error::CapExceeded {
            candidates: binomial(v, k).saturating_pow(s as u32),
            cap: limits.max_candidates,
        });
    }
    if s == 1 {
        let mut report = search_min_aperiodic_header(v, k, limits)?;
        report.s = Some(1);
        return Ok(report);
    }
    if k == 0 || k > v {
        return Err(Error::InvalidParameter(format!(
            "weight {k} is outside 1..={v}"
        )));
    }

    // collect all supports as bitmasks, in support-list lexicographic order
    let mut masks: Vec<u32> = Vec::new();
    let mut prefix = Vec::new();
    enumerate_subsets(v, k, 0, &mut prefix, &mut |sup| {
        let mut m = 0u32;
        for &x in sup {
            m |= 1 << x;
        }
        masks.push(m);
    });
    if (masks.len() as u128) < s as u128 {
        return Err(Error::Infeasible(format!(
            "only {} supports of weight {k} exist in Z_{v}",
            masks.len()
        )));
    }
    let auto: Vec<usize> = masks.iter().map(|&m| mask_auto_sidelobe(m, v)).collect();

    let mut state = HeaderSetSearch {
        v,
        s,
        min_distance,
        masks,
        auto,
        chosen: Vec::new(),
        best: i64::MAX,
        witness: None,
        nodes: 0,
        cap: limits.max_candidates,
    };
    state.descend(0, 0)?;

    let witness_idx = state.witness.ok_or_else(|| {
        Error::Infeasible(format!(
            "no {s} supports of weight {k} in Z_{v} keep pairwise distance >= {min_distance}"
        ))
    })?;
    let witnesses: Vec<Vec<usize>> = witness_idx
        .iter()
        .map(|&i| mask_support(state.masks[i]))
        .collect();
    Ok(SearchReport {
        v,
        k,
        s: Some(s),
        objective: state.best,
        witnesses,
        candidates: state.nodes,
        exhaustive: true,
        bound: None,
        bound_met: None,
    })
}

struct HeaderSetSearch {
    v: usize,
    s: usize,
    min_distance: usize,
    masks: Vec<u32>,
    auto: Vec<usize>,
    chosen: Vec<usize>,
    best: i64,
    witness: Option<Vec<usize>>,
    nodes: u64,
    cap: u64,
}

impl HeaderSetSearch {
    fn descend(&mut self, from: usize, partial_worst: i64) -> Result<()> {
        if self.chosen.len() == self.s {
            // partial_worst < best is guaranteed by pruning below
            self.best = partial_worst;
            self.witness = Some(self.chosen.clone());
            return Ok(());
        }
        let remaining = self.s - self.chosen.len();
        for i in from..=self.masks.len().saturating_sub(remaining) {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::CapExceeded {
                    candidates: self.nodes as u128,
                    cap: self.cap,
                });
            }
            let mut worst = partial_worst.max(self.auto[i] as i64);
            if worst >= self.best {
                continue;
            }
            let mut ok = true;
            for &j in &self.chosen {
                let a = self.masks[j];
                let b = self.masks[i];
                if ((a ^ b).count_ones() as usize) < self.min_distance {
                    ok = false;
                    break;
                }
                worst = worst.max(mask_cross_worst(a, b, self.v) as i64);
                if worst >= self.best {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            self.chosen.push(i);
            self.descend(i + 1, worst)?;
            self.chosen.pop();
        }
        Ok(())
    }
}

fn mask_support(m: u32) -> Vec<usize> {
    (0..32).filter(|&i| m >> i & 1 == 1).collect()
}

fn mask_auto_sidelobe(m: u32, v: usize) -> usize {
    (1..v)
        .map(|t| (m & (m >> t)).count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Worst aperiodic cross-correlation between two masks over every shift,
/// both signs, zero included.
fn mask_cross_worst(a: u32, b: u32, v: usize) -> usize {
    (0..v)
        .map(|t| {
            let fwd = (a & (b >> t)).count_ones() as usize;
            let rev = (b & (a >> t)).count_ones() as usize;
            fwd.max(rev)
        })
        .max()
        .unwrap_or(0)
}
