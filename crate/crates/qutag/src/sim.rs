//! Channel simulator: framed symbol sequences, measurement, erasure and
//! incursion noise, and campaign plumbing with CSV reporting.
//!
//! Everything is deterministic. Random draws come from a per-position hash
//! of (seed, position) so results never depend on evaluation order, and
//! campaign trials are seeded by (master seed, cell index, trial index).

use crate::error::{Error, Result};
use crate::search::binomial;
use crate::syncdec::{
    locate_headers, naive_boundary_scan, nearest_shift_decode, orthogonal_decode,
    LocateMode, SyncResult, SyncStatus,
};
use crate::tags::{OrthogonalTagSet, QuantumTag};

/// Adversarial noise enumerates placements exhaustively up to this many.
pub const ADVERSARIAL_EXHAUSTIVE_CAP: u128 = 1_000_000;

/// One transmitted qutrit, reduced to what the synchronizing measurement
/// can distinguish: payload or marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Qubit,
    Marker,
}

/// A symbol stream with its ground truth: frame starts, per-frame digits
/// in orthogonal mode, and the frame (or header) length v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedSequence {
    symbols: Vec<Symbol>,
    boundaries: Vec<usize>,
    frame_digits: Option<Vec<usize>>,
    v: usize,
}

/// A length-v view into a sequence, starting `misalignment` symbols before
/// a frame boundary. Misalignments are reduced mod v, so 0..v covers every
/// case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub len: usize,
    pub misalignment: usize,
}

impl FramedSequence {
    /// Fixed-length frames, each carrying the same tag.
    pub fn single_tag(tag: &QuantumTag, frames: usize) -> Result<FramedSequence> {
        if frames == 0 {
            return Err(Error::InvalidParameter("need at least one frame".into()));
        }
        let v = tag.v();
        let mut symbols = vec![Symbol::Qubit; frames * v];
        for f in 0..frames {
            for &s in tag.support() {
                symbols[f * v + s] = Symbol::Marker;
            }
        }
        Ok(FramedSequence {
            symbols,
            boundaries: (0..frames).map(|f| f * v).collect(),
            frame_digits: None,
            v,
        })
    }

    /// Fixed-length frames where frame j carries the tag for `digits[j]`.
    pub fn orthogonal(set: &OrthogonalTagSet, digits: &[usize]) -> Result<FramedSequence> {
        if digits.is_empty() {
            return Err(Error::InvalidParameter("need at least one frame".into()));
        }
        let v = set.v();
        let mut symbols = vec![Symbol::Qubit; digits.len() * v];
        for (f, &d) in digits.iter().enumerate() {
            if d >= set.len() {
                return Err(Error::DigitOutOfRange { digit: d, count: set.len() });
            }
            for &s in set.tags()[d].support() {
                symbols[f * v + s] = Symbol::Marker;
            }
        }
        Ok(FramedSequence {
            symbols,
            boundaries: (0..digits.len()).map(|f| f * v).collect(),
            frame_digits: Some(digits.to_vec()),
            v,
        })
    }

    /// Variable-length frames, each opening with the header block followed
    /// by an all-payload gap. Gaps shorter than the header length would let
    /// adjacent headers interact, so they are rejected.
    pub fn with_headers(
        header: &QuantumTag,
        payload_lengths: &[usize],
    ) -> Result<FramedSequence> {
        if payload_lengths.is_empty() {
            return Err(Error::InvalidParameter("need at least one frame".into()));
        }
        let v = header.v();
        for &len in payload_lengths {
            if len < v {
                return Err(Error::GapTooShort { got: len, v });
            }
        }
        let total: usize = payload_lengths.iter().map(|&len| v + len).sum();
        let mut symbols = vec![Symbol::Qubit; total];
        let mut boundaries = Vec::with_capacity(payload_lengths.len());
        let mut start = 0;
        for &len in payload_lengths {
            boundaries.push(start);
            for &s in header.support() {
                symbols[start + s] = Symbol::Marker;
            }
            start += v + len;
        }
        Ok(FramedSequence { symbols, boundaries, frame_digits: None, v })
    }

    /// The baseline scheme: one marker opens each length-v frame.
    pub fn naive(v: usize, frames: usize) -> Result<FramedSequence> {
        if v < 2 || frames == 0 {
            return Err(Error::InvalidParameter(
                "naive framing needs v >= 2 and at least one frame".into(),
            ));
        }
        let mut symbols = vec![Symbol::Qubit; frames * v];
        let boundaries: Vec<usize> = (0..frames).map(|f| f * v).collect();
        for &b in &boundaries {
            symbols[b] = Symbol::Marker;
        }
        Ok(FramedSequence { symbols, boundaries, frame_digits: None, v })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn frame_digits(&self) -> Option<&[usize]> {
        self.frame_digits.as_deref()
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The noiseless measurement outcome: qubits read 0, markers read 1.
    pub fn measure(&self) -> Vec<bool> {
        self.symbols.iter().map(|&s| s == Symbol::Marker).collect()
    }

    /// The analysis window that starts `misalignment` symbols before the
    /// second frame, covering the tail of frame 0 and the head of frame 1.
    pub fn window(&self, misalignment: usize) -> Result<Window> {
        if misalignment >= self.v {
            return Err(Error::InvalidParameter(format!(
                "misalignment {misalignment} is outside 0..{}",
                self.v
            )));
        }
        if self.boundaries.len() < 2 {
            return Err(Error::InvalidParameter(
                "windowed trials need at least two frames".into(),
            ));
        }
        let start = self.boundaries[1] - misalignment;
        if start + self.v > self.symbols.len() {
            return Err(Error::InvalidParameter("window runs past the stream".into()));
        }
        Ok(Window { start, len: self.v, misalignment })
    }

    pub fn window_symbols(&self, w: &Window) -> &[Symbol] {
        &self.symbols[w.start..w.start + w.len]
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix2(a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(a).wrapping_add(splitmix64(b)))
}

fn mix3(a: u64, b: u64, c: u64) -> u64 {
    mix2(mix2(a, b), c)
}

fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The channel's error process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    /// Each qubit reads 1 with `p_erasure`, each marker reads 0 with
    /// `p_incursion`, independently.
    Iid { p_erasure: f64, p_incursion: f64 },
    /// Exactly this many erasures and incursions, placed by enumeration.
    Adversarial { erasures: usize, incursions: usize },
}

/// Noise process plus the seed that makes it reproducible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseKind {
    fn validate(&self) -> Result<()> {
        if let NoiseKind::Iid { p_erasure, p_incursion } = *self {
            for p in [p_erasure, p_incursion] {
                if !(0.0..=1.0).contains(&p) || p.is_nan() {
                    return Err(Error::InvalidParameter(format!(
                        "probability {p} is outside [0,1]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A noisy measurement and exactly where the injections landed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseOutcome {
    pub bits: Vec<bool>,
    pub erasures: Vec<usize>,
    pub incursions: Vec<usize>,
}

/// Corrupts a measurement. `symbols` is the ground truth for the same
/// slice: erasures hit qubit positions (0 becomes 1), incursions hit
/// marker positions (1 becomes 0).
///
/// Adversarial placement is chosen by the seed; to step through every
/// placement instead, see [`adversarial_placements`] and
/// [`apply_adversarial_placement`].
pub fn apply_noise(
    outcome: &[bool],
    symbols: &[Symbol],
    cfg: &NoiseConfig,
) -> Result<NoiseOutcome> {
    if outcome.len() != symbols.len() {
        return Err(Error::LengthMismatch(outcome.len(), symbols.len()));
    }
    cfg.kind.validate()?;
    match cfg.kind {
        NoiseKind::Iid { p_erasure, p_incursion } => {
            let mut bits = outcome.to_vec();
            let mut erasures = Vec::new();
            let mut incursions = Vec::new();
            for i in 0..bits.len() {
                let draw = unit_interval(mix2(cfg.seed, i as u64));
                match symbols[i] {
                    Symbol::Qubit if draw < p_erasure => {
                        bits[i] = true;
                        erasures.push(i);
                    }
                    Symbol::Marker if draw < p_incursion => {
                        bits[i] = false;
                        incursions.push(i);
                    }
                    _ => {}
                }
            }
            Ok(NoiseOutcome { bits, erasures, incursions })
        }
        NoiseKind::Adversarial { erasures, incursions } => {
            let total = adversarial_placements(symbols, erasures, incursions)?;
            let wide = ((mix2(cfg.seed, 0x51_71) as u128) << 64)
                | mix2(cfg.seed, 0xC0_DE) as u128;
            apply_adversarial_placement(outcome, symbols, erasures, incursions, wide % total)
        }
    }
}

/// How many distinct (erasure set, incursion set) placements exist for
/// these exact counts on this slice.
pub fn adversarial_placements(
    symbols: &[Symbol],
    erasures: usize,
    incursions: usize,
) -> Result<u128> {
    let qubits = symbols.iter().filter(|&&s| s == Symbol::Qubit).count();
    let markers = symbols.len() - qubits;
    if erasures > qubits || incursions > markers {
        return Err(Error::InvalidParameter(format!(
            "cannot place {erasures} erasures and {incursions} incursions on \
             {qubits} qubits and {markers} markers"
        )));
    }
    Ok(binomial(qubits, erasures) * binomial(markers, incursions))
}

/// Applies the placement with the given index, counting in lexicographic
/// order over (erasure combination, incursion combination).
pub fn apply_adversarial_placement(
    outcome: &[bool],
    symbols: &[Symbol],
    erasures: usize,
    incursions: usize,
    index: u128,
) -> Result<NoiseOutcome> {
    if outcome.len() != symbols.len() {
        return Err(Error::LengthMismatch(outcome.len(), symbols.len()));
    }
    let qubit_pos: Vec<usize> =
        (0..symbols.len()).filter(|&i| symbols[i] == Symbol::Qubit).collect();
    let marker_pos: Vec<usize> =
        (0..symbols.len()).filter(|&i| symbols[i] == Symbol::Marker).collect();
    let total = adversarial_placements(symbols, erasures, incursions)?;
    if index >= total {
        return Err(Error::InvalidParameter(format!(
            "placement index {index} is outside 0..{total}"
        )));
    }
    let inc_count = binomial(marker_pos.len(), incursions);
    let era_rank = index / inc_count;
    let inc_rank = index % inc_count;

    let mut bits = outcome.to_vec();
    let era: Vec<usize> = unrank_combination(qubit_pos.len(), erasures, era_rank)
        .into_iter()
        .map(|i| qubit_pos[i])
        .collect();
    let inc: Vec<usize> = unrank_combination(marker_pos.len(), incursions, inc_rank)
        .into_iter()
        .map(|i| marker_pos[i])
        .collect();
    for &i in &era {
        bits[i] = true;
    }
    for &i in &inc {
        bits[i] = false;
    }
    Ok(NoiseOutcome { bits, erasures: era, incursions: inc })
}

/// The `rank`-th k-subset of 0..n in lexicographic order.
fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut x = 0usize;
    for remaining in (1..=k).rev() {
        loop {
            let with_x = binomial(n - 1 - x, remaining - 1);
            if rank < with_x {
                out.push(x);
                x += 1;
                break;
            }
            rank -= with_x;
            x += 1;
        }
    }
    out
}

/// Which decoder a trial drives.
#[derive(Debug, Clone)]
pub enum DecoderChoice<'a> {
    NearestShift(&'a QuantumTag),
    Orthogonal(&'a OrthogonalTagSet),
    HeaderLocate { header: &'a QuantumTag, mode: LocateMode, delta: usize },
    Naive,
}

/// One trial's ground truth, decode outcome, and score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport {
    pub offset: usize,
    pub result: SyncResult,
    pub success: bool,
    pub injected_erasures: usize,
    pub injected_incursions: usize,
    /// Reported positions that are not true frame starts (header and naive
    /// decoders only).
    pub false_headers: usize,
}

enum Draw<'a> {
    Config(&'a NoiseConfig),
    Forced { erasures: usize, incursions: usize, index: u128 },
}

fn corrupt(outcome: &[bool], symbols: &[Symbol], draw: &Draw) -> Result<NoiseOutcome> {
    match draw {
        Draw::Config(cfg) => apply_noise(outcome, symbols, cfg),
        Draw::Forced { erasures, incursions, index } => {
            apply_adversarial_placement(outcome, symbols, *erasures, *incursions, *index)
        }
    }
}

/// Runs one synchronization trial: cut the window at the given
/// misalignment (whole stream for header and naive decoders), measure,
/// corrupt, decode, score.
pub fn run_sync_trial(
    seq: &FramedSequence,
    cfg: &NoiseConfig,
    decoder: &DecoderChoice,
    offset: usize,
) -> Result<TrialReport> {
    trial_core(seq, &Draw::Config(cfg), decoder, offset)
}

fn trial_core(
    seq: &FramedSequence,
    draw: &Draw,
    decoder: &DecoderChoice,
    offset: usize,
) -> Result<TrialReport> {
    match decoder {
        DecoderChoice::NearestShift(tag) => {
            let window = seq.window(offset)?;
            let symbols = seq.window_symbols(&window);
            let clean: Vec<bool> =
                symbols.iter().map(|&s| s == Symbol::Marker).collect();
            let noise = corrupt(&clean, symbols, draw)?;
            let result = nearest_shift_decode(&noise.bits, tag)?;
            let success = result.decided_shift() == Some(offset);
            Ok(TrialReport {
                offset,
                success,
                injected_erasures: noise.erasures.len(),
                injected_incursions: noise.incursions.len(),
                false_headers: 0,
                result,
            })
        }
        DecoderChoice::Orthogonal(set) => {
            let window = seq.window(offset)?;
            let symbols = seq.window_symbols(&window);
            let clean: Vec<bool> =
                symbols.iter().map(|&s| s == Symbol::Marker).collect();
            let noise = corrupt(&clean, symbols, draw)?;
            let result = orthogonal_decode(&noise.bits, set)?;
            // aligned windows must recover frame 1's digit; misaligned
            // windows show the decoder a splice and must be rejected
            let success = if offset == 0 {
                let digits = seq.frame_digits().ok_or_else(|| {
                    Error::InvalidParameter("sequence carries no digits".into())
                })?;
                result.status == SyncStatus::Aligned && result.digit == Some(digits[1])
            } else {
                result.status == SyncStatus::NoMatch
            };
            Ok(TrialReport {
                offset,
                success,
                injected_erasures: noise.erasures.len(),
                injected_incursions: noise.incursions.len(),
                false_headers: 0,
                result,
            })
        }
        DecoderChoice::HeaderLocate { header, mode, delta } => {
            let report = stream_trial(seq, draw, offset, |noisy| {
                locate_headers(noisy, header, *mode, *delta)
            })?;
            Ok(report)
        }
        DecoderChoice::Naive => {
            stream_trial(seq, draw, offset, |noisy| Ok(naive_boundary_scan(noisy)))
        }
    }
}

/// Stream-wide decode: compare reported positions with true frame starts.
fn stream_trial(
    seq: &FramedSequence,
    draw: &Draw,
    offset: usize,
    locate: impl Fn(&[bool]) -> Result<Vec<usize>>,
) -> Result<TrialReport> {
    if offset != 0 {
        return Err(Error::InvalidParameter(
            "stream-wide decoders take offset 0".into(),
        ));
    }
    let clean = seq.measure();
    let noise = corrupt(&clean, seq.symbols(), draw)?;
    let reported = locate(&noise.bits)?;
    let truth = seq.boundaries();
    let missed = truth.iter().filter(|b| !reported.contains(b)).count();
    let spurious = reported.iter().filter(|p| !truth.contains(p)).count();
    let exact = missed == 0 && spurious == 0;
    let result = SyncResult {
        status: if exact { SyncStatus::Aligned } else { SyncStatus::NoMatch },
        distance: missed + spurious,
        digit: None,
    };
    Ok(TrialReport {
        offset,
        success: exact,
        injected_erasures: noise.erasures.len(),
        injected_incursions: noise.incursions.len(),
        false_headers: spurious,
        result,
    })
}

/// What one campaign cell simulates.
#[derive(Debug, Clone)]
pub enum CellScheme {
    SingleTag { tag: QuantumTag, frames: usize },
    Orthogonal { set: OrthogonalTagSet, digits: Vec<usize> },
    Header {
        header: QuantumTag,
        mode: LocateMode,
        delta: usize,
        payload_lengths: Vec<usize>,
    },
    Naive { v: usize, frames: usize },
}

/// One grid point: a scheme, a noise setting, and a window offset.
#[derive(Debug, Clone)]
pub struct CampaignCell {
    pub id: String,
    /// Free-form label for the CSV's tag_family column.
    pub family: String,
    pub scheme: CellScheme,
    pub noise: NoiseKind,
    pub offset: usize,
}

/// Aggregated results for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignRow {
    pub cell_id: String,
    pub tag_family: String,
    pub v: usize,
    pub k: usize,
    pub rho: i64,
    pub mode: String,
    pub p_erasure: Option<f64>,
    pub p_incursion: Option<f64>,
    pub e_exact: Option<usize>,
    pub offset: usize,
    pub trials: u64,
    pub successes: u64,
    pub ambiguous: u64,
    pub nomatch: u64,
    pub false_headers: u64,
    pub mean_distance: f64,
}

impl CampaignRow {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Runs every cell for `trials` trials (adversarial cells with at most
/// [`ADVERSARIAL_EXHAUSTIVE_CAP`] placements run all of them exactly once
/// instead). Identical inputs give identical rows, regardless of how the
/// work would be scheduled: every trial's randomness is a pure function of
/// (master seed, cell index, trial index).
pub fn run_campaign(
    cells: &[CampaignCell],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<CampaignRow>> {
    if cells.is_empty() {
        return Err(Error::InvalidParameter("campaign grid is empty".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let mut rows = Vec::with_capacity(cells.len());
    for (ci, cell) in cells.iter().enumerate() {
        rows.push(run_cell(cell, ci as u64, trials, master_seed)?);
    }
    Ok(rows)
}

fn run_cell(
    cell: &CampaignCell,
    cell_index: u64,
    trials: u64,
    master_seed: u64,
) -> Result<CampaignRow> {
    let seq;
    let decoder;
    let (v, k, rho) = match &cell.scheme {
        CellScheme::SingleTag { tag, frames } => {
            seq = FramedSequence::single_tag(tag, *frames)?;
            decoder = DecoderChoice::NearestShift(tag);
            (tag.v(), tag.k(), tag.rho())
        }
        CellScheme::Orthogonal { set, digits } => {
            seq = FramedSequence::orthogonal(set, digits)?;
            decoder = DecoderChoice::Orthogonal(set);
            (set.v(), set.k(), set.rho_c() as i64)
        }
        CellScheme::Header { header, mode, delta, payload_lengths } => {
            seq = FramedSequence::with_headers(header, payload_lengths)?;
            decoder = DecoderChoice::HeaderLocate { header, mode: *mode, delta: *delta };
            (header.v(), header.k(), header.rho())
        }
        CellScheme::Naive { v, frames } => {
            seq = FramedSequence::naive(*v, *frames)?;
            decoder = DecoderChoice::Naive;
            // one marker per frame behaves like the weight-1 tag, index 2
            (*v, 1, 2)
        }
    };
    cell.noise.validate()?;

    // what the noise acts on: the window for windowed decoders, the whole
    // stream otherwise
    let noisy_len_symbols: Vec<Symbol> = match decoder {
        DecoderChoice::NearestShift(_) | DecoderChoice::Orthogonal(_) => {
            let w = seq.window(cell.offset)?;
            seq.window_symbols(&w).to_vec()
        }
        _ => seq.symbols().to_vec(),
    };

    let plan: Vec<Draw> = match cell.noise {
        NoiseKind::Iid { .. } => Vec::new(),
        NoiseKind::Adversarial { erasures, incursions } => {
            let total = adversarial_placements(&noisy_len_symbols, erasures, incursions)?;
            if total <= ADVERSARIAL_EXHAUSTIVE_CAP {
                (0..total)
                    .map(|i| Draw::Forced { erasures, incursions, index: i })
                    .collect()
            } else {
                Vec::new()
            }
        }
    };

    let (mode, trial_count) = match (&cell.noise, plan.is_empty()) {
        (NoiseKind::Iid { .. }, _) => ("iid".to_string(), trials),
        (NoiseKind::Adversarial { .. }, false) => {
            ("adversarial_exhaustive".to_string(), plan.len() as u64)
        }
        (NoiseKind::Adversarial { .. }, true) => ("adversarial_sampled".to_string(), trials),
    };

    let mut successes = 0u64;
    let mut ambiguous = 0u64;
    let mut nomatch = 0u64;
    let mut false_headers = 0u64;
    let mut distance_sum = 0u64;
    for ti in 0..trial_count {
        let report = if plan.is_empty() {
            let cfg = NoiseConfig {
                kind: cell.noise,
                seed: mix3(master_seed, cell_index, ti),
            };
            trial_core(&seq, &Draw::Config(&cfg), &decoder, cell.offset)?
        } else {
            trial_core(&seq, &plan[ti as usize], &decoder, cell.offset)?
        };
        successes += u64::from(report.success);
        match report.result.status {
            SyncStatus::Ambiguous(_) => ambiguous += 1,
            SyncStatus::NoMatch => nomatch += 1,
            _ => {}
        }
        false_headers += report.false_headers as u64;
        distance_sum += report.result.distance as u64;
    }

    let (p_erasure, p_incursion, e_exact) = match cell.noise {
        NoiseKind::Iid { p_erasure, p_incursion } => (Some(p_erasure), Some(p_incursion), None),
        NoiseKind::Adversarial { erasures, incursions } => {
            (None, None, Some(erasures + incursions))
        }
    };
    Ok(CampaignRow {
        cell_id: cell.id.clone(),
        tag_family: cell.family.clone(),
        v,
        k,
        rho,
        mode,
        p_erasure,
        p_incursion,
        e_exact,
        offset: cell.offset,
        trials: trial_count,
        successes,
        ambiguous,
        nomatch,
        false_headers,
        mean_distance: distance_sum as f64 / trial_count as f64,
    })
}

/// Fixed-order CSV rendering of campaign rows.
pub fn campaign_csv(rows: &[CampaignRow]) -> String {
    let mut out = String::from(
        "cell_id,tag_family,v,k,rho,mode,p_erasure,p_incursion,e_exact,offset,\
         trials,successes,ambiguous,nomatch,false_headers\n",
    );
    for r in rows {
        let p_e = r.p_erasure.map(|p| p.to_string()).unwrap_or_default();
        let p_i = r.p_incursion.map(|p| p.to_string()).unwrap_or_default();
        let e = r.e_exact.map(|e| e.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.cell_id,
            r.tag_family,
            r.v,
            r.k,
            r.rho,
            r.mode,
            p_e,
            p_i,
            e,
            r.offset,
            r.trials,
            r.successes,
            r.ambiguous,
            r.nomatch,
            r.false_headers,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag_7() -> QuantumTag {
        QuantumTag::new(7, &[0, 4, 6]).unwrap()
    }

    #[test]
    fn single_tag_layout() {
        let seq = FramedSequence::single_tag(&tag_7(), 3).unwrap();
        assert_eq!(seq.len(), 21);
        assert_eq!(seq.boundaries(), &[0, 7, 14]);
        for f in 0..3 {
            for i in 0..7 {
                let expect = [0, 4, 6].contains(&i);
                assert_eq!(seq.symbols()[f * 7 + i] == Symbol::Marker, expect);
            }
        }
        let bits = seq.measure();
        assert_eq!(
            &bits[..7],
            &[true, false, false, false, true, false, true],
            "frame reads 1000101"
        );
    }

    #[test]
    fn orthogonal_layout_uses_the_digit_tags() {
        let set = OrthogonalTagSet::new(13, &[vec![0, 1, 4], vec![0, 2, 7]]).unwrap();
        let seq = FramedSequence::orthogonal(&set, &[0, 1]).unwrap();
        assert_eq!(seq.len(), 26);
        let markers: Vec<usize> = (0..26)
            .filter(|&i| seq.symbols()[i] == Symbol::Marker)
            .collect();
        assert_eq!(markers, vec![0, 1, 4, 13, 15, 20]);
        assert!(matches!(
            FramedSequence::orthogonal(&set, &[0, 2]),
            Err(Error::DigitOutOfRange { digit: 2, count: 2 })
        ));
    }

    #[test]
    fn header_gaps_must_cover_the_header_length() {
        let seq = FramedSequence::with_headers(&tag_7(), &[7, 10]).unwrap();
        assert_eq!(seq.boundaries(), &[0, 14]);
        assert_eq!(seq.len(), 31);
        assert!(matches!(
            FramedSequence::with_headers(&tag_7(), &[5]),
            Err(Error::GapTooShort { got: 5, v: 7 })
        ));
    }

    #[test]
    fn window_covers_the_tail_of_the_previous_frame() {
        let seq = FramedSequence::single_tag(&tag_7(), 2).unwrap();
        let w = seq.window(3).unwrap();
        assert_eq!(w.start, 4);
        // last 3 symbols of frame 0 then first 4 of frame 1: shift-3 support {0,2,3}
        let bits: Vec<bool> = seq
            .window_symbols(&w)
            .iter()
            .map(|&s| s == Symbol::Marker)
            .collect();
        assert_eq!(bits, [true, false, true, true, false, false, false]);
        assert!(seq.window(7).is_err());
        let one = FramedSequence::single_tag(&tag_7(), 1).unwrap();
        assert!(one.window(1).is_err());
    }

    #[test]
    fn iid_noise_extremes_and_conservation() {
        let seq = FramedSequence::single_tag(&tag_7(), 2).unwrap();
        let clean = seq.measure();
        let zero = NoiseConfig {
            kind: NoiseKind::Iid { p_erasure: 0.0, p_incursion: 0.0 },
            seed: 9,
        };
        assert_eq!(apply_noise(&clean, seq.symbols(), &zero).unwrap().bits, clean);

        let full = NoiseConfig {
            kind: NoiseKind::Iid { p_erasure: 1.0, p_incursion: 1.0 },
            seed: 9,
        };
        let flipped = apply_noise(&clean, seq.symbols(), &full).unwrap();
        let complement: Vec<bool> = clean.iter().map(|&b| !b).collect();
        assert_eq!(flipped.bits, complement);

        let some = NoiseConfig {
            kind: NoiseKind::Iid { p_erasure: 0.5, p_incursion: 0.5 },
            seed: 424242,
        };
        let noisy = apply_noise(&clean, seq.symbols(), &some).unwrap();
        let up = (0..clean.len()).filter(|&i| !clean[i] && noisy.bits[i]).count();
        let down = (0..clean.len()).filter(|&i| clean[i] && !noisy.bits[i]).count();
        assert_eq!(up, noisy.erasures.len());
        assert_eq!(down, noisy.incursions.len());
    }

    #[test]
    fn adversarial_placements_enumerate_every_pattern() {
        let seq = FramedSequence::single_tag(&tag_7(), 1).unwrap();
        let clean = seq.measure();
        let total = adversarial_placements(seq.symbols(), 1, 0).unwrap();
        assert_eq!(total, 4); // four qubit positions in 1000101
        let mut hit = Vec::new();
        for i in 0..total {
            let n =
                apply_adversarial_placement(&clean, seq.symbols(), 1, 0, i).unwrap();
            assert_eq!(n.erasures.len(), 1);
            hit.push(n.erasures[0]);
        }
        assert_eq!(hit, vec![1, 2, 3, 5]);
        assert!(adversarial_placements(seq.symbols(), 5, 0).is_err());
        assert!(apply_adversarial_placement(&clean, seq.symbols(), 1, 0, 4).is_err());
    }

    #[test]
    fn trials_score_shift_recovery() {
        let tag = tag_7();
        let seq = FramedSequence::single_tag(&tag, 2).unwrap();
        let quiet = NoiseConfig {
            kind: NoiseKind::Iid { p_erasure: 0.0, p_incursion: 0.0 },
            seed: 1,
        };
        let r = run_sync_trial(&seq, &quiet, &DecoderChoice::NearestShift(&tag), 0).unwrap();
        assert!(r.success);
        assert_eq!(r.result.status, SyncStatus::Aligned);
        let r = run_sync_trial(&seq, &quiet, &DecoderChoice::NearestShift(&tag), 2).unwrap();
        assert!(r.success);
        assert_eq!(r.result.status, SyncStatus::MisalignedBy(2));
    }

    #[test]
    fn orthogonal_trials_identify_digits_and_reject_splices() {
        let set = OrthogonalTagSet::new(13, &[vec![0, 1, 4], vec![0, 2, 7]]).unwrap();
        let seq = FramedSequence::orthogonal(&set, &[0, 1]).unwrap();
        let quiet = NoiseConfig {
            kind: NoiseKind::Iid { p_erasure: 0.0, p_incursion: 0.0 },
            seed: 1,
        };
        let r = run_sync_trial(&seq, &quiet, &DecoderChoice::Orthogonal(&set), 0).unwrap();
        assert!(r.success);
        assert_eq!(r.result.digit, Some(1));
        for offset in 1..13 {
            let r =
                run_sync_trial(&seq, &quiet, &DecoderChoice::Orthogonal(&set), offset)
                    .unwrap();
            assert!(r.success, "offset {offset} should read as a splice");
            assert_eq!(r.result.status, SyncStatus::NoMatch);
        }
    }

    #[test]
    fn campaign_within_radius_is_perfect_and_beyond_is_not() {
        let tag = QuantumTag::new(7, &[0, 1, 3]).unwrap();
        let mut cells = Vec::new();
        for offset in [0usize, 3] {
            for (e, i) in [(0usize, 0usize), (1, 0), (0, 1)] {
                cells.push(CampaignCell {
                    id: format!("r{offset}e{e}i{i}"),
                    family: "external".into(),
                    scheme: CellScheme::SingleTag { tag: tag.clone(), frames: 2 },
                    noise: NoiseKind::Adversarial { erasures: e, incursions: i },
                    offset,
                });
            }
        }
        let rows = run_campaign(&cells, 10, 7).unwrap();
        for row in &rows {
            assert_eq!(row.mode, "adversarial_exhaustive");
            assert_eq!(row.successes, row.trials, "{}", row.cell_id);
        }

        // two errors exceed the radius of this tag; some pattern must fail
        let cells = vec![CampaignCell {
            id: "overload".into(),
            family: "external".into(),
            scheme: CellScheme::SingleTag { tag: tag.clone(), frames: 2 },
            noise: NoiseKind::Adversarial { erasures: 1, incursions: 1 },
            offset: 1,
        }];
        let rows = run_campaign(&cells, 10, 7).unwrap();
        assert!(rows[0].successes < rows[0].trials);
    }

    #[test]
    fn naive_framing_is_tricked_by_erasures() {
        let cells = vec![CampaignCell {
            id: "naive".into(),
            family: "naive".into(),
            scheme: CellScheme::Naive { v: 11, frames: 50 },
            noise: NoiseKind::Iid { p_erasure: 0.05, p_incursion: 0.0 },
            offset: 0,
        }];
        let rows = run_campaign(&cells, 20, 99).unwrap();
        assert!(rows[0].false_headers > 0);
        assert!(rows[0].successes < rows[0].trials);
        assert_eq!(rows[0].k, 1);
        assert_eq!(rows[0].rho, 2);
    }

    #[test]
    fn header_cells_locate_exactly_without_noise() {
        let header = tag_7();
        let cells = vec![CampaignCell {
            id: "hdr".into(),
            family: "external".into(),
            scheme: CellScheme::Header {
                header: header.clone(),
                mode: LocateMode::ErasureOnly,
                delta: 2,
                payload_lengths: vec![9, 7, 12],
            },
            noise: NoiseKind::Iid { p_erasure: 0.0, p_incursion: 0.0 },
            offset: 0,
        }];
        let rows = run_campaign(&cells, 5, 3).unwrap();
        assert_eq!(rows[0].successes, 5);
        assert_eq!(rows[0].false_headers, 0);
    }

    #[test]
    fn campaigns_are_deterministic() {
        let tag = tag_7();
        let cells = vec![
            CampaignCell {
                id: "iid".into(),
                family: "external".into(),
                scheme: CellScheme::SingleTag { tag: tag.clone(), frames: 2 },
                noise: NoiseKind::Iid { p_erasure: 0.02, p_incursion: 0.01 },
                offset: 4,
            },
            CampaignCell {
                id: "adv".into(),
                family: "external".into(),
                scheme: CellScheme::SingleTag { tag, frames: 2 },
                noise: NoiseKind::Adversarial { erasures: 1, incursions: 0 },
                offset: 0,
            },
        ];
        let a = run_campaign(&cells, 40, 123).unwrap();
        let b = run_campaign(&cells, 40, 123).unwrap();
        assert_eq!(a, b);
        assert_eq!(campaign_csv(&a), campaign_csv(&b));
        let c = run_campaign(&cells, 40, 124).unwrap();
        assert!(c != a, "different master seed should change iid draws");
        assert!(campaign_csv(&a).starts_with(
            "cell_id,tag_family,v,k,rho,mode,p_erasure,p_incursion,e_exact,offset,"
        ));
    }
}
